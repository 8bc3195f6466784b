#pragma once

#include "polar/extended_value.hpp"
#include "polar/kernel.hpp"

namespace polar {

/// Gaussian tail Q(t) = P(N(0,1) >= t).
double q_function(double t);
/// Inverse of q_function on (0,1); throws DomainError at the endpoints.
double q_inverse(double p);

/// good: thresholds on Z near 0 (uses E(G), V(G), mass I(W)).
/// bad:  thresholds on 1 - Z near 0 (uses E(H), V(H), mass 1 - I(W)).
enum class Side { Good, Bad };
const char* to_string(Side s);

/// Threshold z* = 2^{-ell^nu}, compared in the log-log domain.
struct DoubleExponent {
  double nu = 0.0;
  int ell = 2;

  /// Z <= z* (good side).
  bool admits(const ExtendedUnitValue& z) const;
  /// 1 - Z <= z* (bad side).
  bool admits_complement(const ExtendedUnitValue& z) const;
};

/// nu = n E + t sqrt(n V) + f_of_n with the side's moments.
/// Throws DegenerateVariance if V = 0 and t != 0.
DoubleExponent polar_threshold(int n, double t, const KernelProfile& profile, Side side, double f_of_n = 0.0);

struct GaussianPrediction {
  int n = 0;
  double t = 0.0;
  double predicted_probability = 0.0;
  Side side = Side::Good;
};

/// t = (nu - n E) / sqrt(n V), probability = I Q(t) or (1 - I) Q(t).
GaussianPrediction predicted_cdf(int n, double nu, double channel_I, const KernelProfile& profile, Side side);

/// P(A >= t, B >= v) for a standard bivariate normal with correlation rho.
double bivariate_orthant(double t, double v, double rho);

/// Limit of the common-row fraction between a polar code of rate r and a
/// Reed-Muller-ranked code of rate r_prime: I min(r / I, r_prime).
double overlap_limit(double channel_I, double r, double r_prime);

/// Correlation of (log D_B(G), log w_B(G)) under a uniform branch B; 1 when
/// the two are identical. Zero when either has no variance.
double branch_log_correlation(const KernelProfile& profile);

}  // namespace polar

#include "polar/asymptotics.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "polar/error.hpp"

namespace polar {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) * std::numbers::inv_sqrtpi * kInvSqrt2; }

}  // namespace

double q_function(double t) {
  // Q(-t) = 1 - Q(t) holds by construction: negative arguments go through the
  // complement of the positive tail.
  if (std::isnan(t)) return t;
  if (t >= 0.0) return 0.5 * std::erfc(t * kInvSqrt2);
  return 1.0 - 0.5 * std::erfc(-t * kInvSqrt2);
}

double q_inverse(double p) {
  if (!(p > 0.0 && p < 1.0)) throw PolarError(ErrorCode::DomainError, "Q^-1 needs p in (0,1)");
  if (p == 0.5) return 0.0;
  // Solve on the tail where Q is small; the other half follows by symmetry.
  const bool upper = p < 0.5;
  const double target = upper ? p : 1.0 - p;
  double lo = 0.0;
  double hi = 40.0;
  for (int i = 0; i < 200 && hi - lo > 1e-3; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (q_function(mid) > target) lo = mid; else hi = mid;
  }
  // Newton refinement in log space: d/dt log Q(t) = -phi(t)/Q(t).
  double t = 0.5 * (lo + hi);
  for (int i = 0; i < 50; ++i) {
    const double q = q_function(t);
    const double step = (std::log(q) - std::log(target)) * q / std::max(std_normal_pdf(t), 1e-300);
    t += step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(t))) break;
  }
  return upper ? t : -t;
}

const char* to_string(Side s) { return s == Side::Good ? "good" : "bad"; }

bool DoubleExponent::admits(const ExtendedUnitValue& z) const {
  return z.neglog() >= std::pow(static_cast<double>(ell), nu);
}

bool DoubleExponent::admits_complement(const ExtendedUnitValue& z) const {
  return z.complog() >= std::pow(static_cast<double>(ell), nu);
}

namespace {

struct Moments {
  double mean;
  double variance;
};

Moments side_moments(const KernelProfile& p, Side side) {
  return side == Side::Good ? Moments{p.exponent, p.second_exponent} : Moments{p.h_exponent, p.h_second_exponent};
}

}  // namespace

DoubleExponent polar_threshold(int n, double t, const KernelProfile& profile, Side side, double f_of_n) {
  if (n < 1) throw PolarError(ErrorCode::InvalidArgument, "n must be at least 1");
  const auto m = side_moments(profile, side);
  if (m.variance == 0.0 && t != 0.0) {
    throw PolarError(ErrorCode::DegenerateVariance, "second exponent is zero; only t = 0 is meaningful");
  }
  const double spread = m.variance == 0.0 ? 0.0 : t * std::sqrt(n * m.variance);
  return {n * m.mean + spread + f_of_n, profile.ell()};
}

GaussianPrediction predicted_cdf(int n, double nu, double channel_I, const KernelProfile& profile, Side side) {
  if (n < 1) throw PolarError(ErrorCode::InvalidArgument, "n must be at least 1");
  if (!(channel_I >= 0.0 && channel_I <= 1.0)) throw PolarError(ErrorCode::DomainError, "capacity outside [0,1]");
  const auto m = side_moments(profile, side);
  if (m.variance == 0.0) throw PolarError(ErrorCode::DegenerateVariance, "second exponent is zero");
  GaussianPrediction g;
  g.n = n;
  g.side = side;
  g.t = (nu - n * m.mean) / std::sqrt(n * m.variance);
  const double mass = side == Side::Good ? channel_I : 1.0 - channel_I;
  g.predicted_probability = mass * q_function(g.t);
  return g;
}

double bivariate_orthant(double t, double v, double rho) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw PolarError(ErrorCode::DomainError, "correlation outside [-1,1]");
  if (rho == 1.0) return q_function(std::max(t, v));
  if (rho == -1.0) return std::max(0.0, q_function(t) - q_function(-v));
  // Drezner-Wesolowsky reduction as refined by Genz, with a 20-point Gauss rule.
  using Gauss = boost::math::quadrature::gauss<double, 20>;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double h = t, k = v;
  double hk = h * k;
  if (std::fabs(rho) < 0.925) {
    const double hs = (h * h + k * k) / 2.0;
    auto f = [&](double theta) {
      const double sn = std::sin(theta);
      return std::exp((sn * hk - hs) / (1.0 - sn * sn));
    };
    const double integral = Gauss::integrate(f, 0.0, std::asin(rho));
    return std::clamp(integral / kTwoPi + q_function(h) * q_function(k), 0.0, 1.0);
  }
  if (rho < 0.0) {
    k = -k;
    hk = -hk;
  }
  const double as = (1.0 - rho) * (1.0 + rho);
  const double a = std::sqrt(as);
  const double bs = (h - k) * (h - k);
  const double c = (4.0 - hk) / 8.0;
  const double d = (12.0 - hk) / 16.0;
  double bvn = a * std::exp(-(bs / as + hk) / 2.0) * (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
  if (hk > -160.0) {
    const double b = std::sqrt(bs);
    bvn -= std::exp(-hk / 2.0) * std::sqrt(kTwoPi) * q_function(b / a) * b * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
  }
  auto g = [&](double x) {
    if (x <= 0.0) return 0.0;
    const double xs = x * x;
    const double rs = std::sqrt(1.0 - xs);
    return std::exp(-bs / (2.0 * xs) - hk / (1.0 + rs)) / rs - std::exp(-(bs / xs + hk) / 2.0) * (1.0 + c * xs * (1.0 + d * xs));
  };
  bvn += Gauss::integrate(g, 0.0, a);
  bvn = -bvn / kTwoPi;
  if (rho > 0.0) {
    bvn += q_function(std::max(h, k));
  } else {
    bvn = -bvn;
    if (k > h) bvn += q_function(h) - q_function(k);
  }
  return std::clamp(bvn, 0.0, 1.0);
}

double overlap_limit(double channel_I, double r, double r_prime) {
  if (!(r > 0.0 && r < channel_I)) throw PolarError(ErrorCode::DomainError, "need 0 < R < I(W)");
  if (!(r_prime > 0.0 && r_prime < 1.0)) throw PolarError(ErrorCode::DomainError, "need 0 < R' < 1");
  return channel_I * std::min(r / channel_I, r_prime);
}

double branch_log_correlation(const KernelProfile& profile) {
  const int ell = profile.ell();
  double md = 0.0, mw = 0.0;
  for (int j = 0; j < ell; ++j) {
    md += std::log2(profile.partial_distances[j]);
    mw += std::log2(profile.row_weights[j]);
  }
  md /= ell;
  mw /= ell;
  double cov = 0.0, vd = 0.0, vw = 0.0;
  for (int j = 0; j < ell; ++j) {
    const double a = std::log2(profile.partial_distances[j]) - md;
    const double b = std::log2(profile.row_weights[j]) - mw;
    cov += a * b;
    vd += a * a;
    vw += b * b;
  }
  if (vd == 0.0 || vw == 0.0) return 0.0;
  return std::clamp(cov / std::sqrt(vd * vw), -1.0, 1.0);
}

}  // namespace polar

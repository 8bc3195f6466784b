#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "polar/erasure.hpp"
#include "polar/extended_value.hpp"
#include "polar/kernel.hpp"

namespace polar {

/// Bounds lo <= Z <= hi on the Bhattacharyya parameter of a synthetic
/// channel (or on 1 - Z for the complement side).
struct IntervalState {
  ExtendedUnitValue lo;
  ExtendedUnitValue hi;

  static IntervalState point(const ExtendedUnitValue& z) { return {z, z}; }
  bool contains(const ExtendedUnitValue& z) const { return lo <= z && z <= hi; }
  bool well_formed() const { return lo <= hi; }
};

/// Upper bound used once the sandwich constant pushes hi to 1 or beyond.
ExtendedUnitValue vacuous_upper_bound();

/// Per-kernel propagation rules:
///   Z side:     Z^{D_j(G)} <= Z(W^j) <= 2^{ell-j} Z^{D_j(G)}
///   1 - Z side: (1-Z)^{e_j} <= 1 - Z(W^j) <= 2^{2j+1} (1-Z)^{e_j}
/// where e_j is D_i(H) for the H row matched to branch j by the erasure
/// polynomials.
class BoundPropagator {
 public:
  explicit BoundPropagator(const KernelProfile& profile);
  BoundPropagator(const KernelProfile& profile, const ErasurePolynomialSet& polys);

  IntervalState z_step(const IntervalState& s, int digit) const;
  /// Throws AssumptionUnmet unless the complement side was resolved and the
  /// exponents are non-increasing in the branch index.
  IntervalState comp_step(const IntervalState& s, int digit) const;

  bool comp_available() const noexcept { return comp_ok_; }
  const std::vector<int>& comp_exponents() const noexcept { return comp_exponent_; }

 private:
  int ell_;
  std::vector<BranchPolynomial> z_mono_;
  std::vector<BranchPolynomial> comp_mono_;
  std::vector<int> comp_exponent_;
  bool comp_ok_ = false;
};

IntervalState propagate_z_interval(const IntervalState& state, int digit, const KernelProfile& profile);
IntervalState propagate_comp_interval(const IntervalState& state, int digit, const KernelProfile& profile,
                                      const ErasurePolynomialSet& polys);

/// Audit of the abstract process conditions along one or more traces.
struct ConditionReport {
  std::uint64_t steps = 0;
  std::uint64_t c2_violations = 0;  // x_{n+1} < x_n^{s_n}
  std::uint64_t c3_violations = 0;  // x_{n+1} > c x_n^{s_n}
  double max_c3_constant_observed = 0.0;  // max x_{n+1} / x_n^{s_n}
  double terminal_drift = 0.0;            // max |x_n - round(x_n)| at trace ends
  std::string c5_note;

  void merge(const ConditionReport& other);
  std::string to_json() const;
};

/// trace[k] = (x_k, s_k); s_k is the exponent applied between x_k and x_{k+1}.
/// Powers are evaluated in the degree-`basis_degree` basis (the kernel size)
/// so they match the arithmetic of the exact erasure polynomials.
ConditionReport check_process_conditions(const std::vector<std::pair<ExtendedUnitValue, int>>& trace, double c,
                                         int basis_degree);

}  // namespace polar

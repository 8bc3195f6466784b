#include "polar/boundprop.hpp"

#include <cmath>
#include <limits>

#include "polar/error.hpp"
#include "polar/report.hpp"

namespace polar {

ExtendedUnitValue vacuous_upper_bound() {
  return ExtendedUnitValue::from_complog(std::numeric_limits<double>::max());
}

namespace {

// 2^bits * x, clamped below 1.
ExtendedUnitValue scale_up(const ExtendedUnitValue& x, double bits) {
  if (bits == 0.0) return x;
  const double lambda = x.neglog() - bits;
  if (!(lambda > 0.0)) return vacuous_upper_bound();
  return ExtendedUnitValue::from_neglog(lambda);
}

}  // namespace

BoundPropagator::BoundPropagator(const KernelProfile& profile) : ell_(profile.ell()) {
  for (int d : profile.partial_distances) z_mono_.push_back(BranchPolynomial::monomial(ell_, d));
}

BoundPropagator::BoundPropagator(const KernelProfile& profile, const ErasurePolynomialSet& polys)
    : BoundPropagator(profile) {
  if (polys.ell != ell_) throw PolarError(ErrorCode::InvalidArgument, "erasure polynomials belong to another kernel");
  if (polys.h_mapping == HBranchMapping::Unresolved) return;
  for (int j = 0; j < ell_; ++j) {
    const int e = profile.h_partial_distances[polys.comp_branch_to_h[j]];
    comp_exponent_.push_back(e);
    comp_mono_.push_back(BranchPolynomial::monomial(ell_, e));
  }
  comp_ok_ = polys.h_assumption_holds;
}

IntervalState BoundPropagator::z_step(const IntervalState& s, int digit) const {
  if (digit < 0 || digit >= ell_) throw PolarError(ErrorCode::IndexOutOfRange, "branch digit out of range");
  const auto& mono = z_mono_[digit];
  return {mono.apply(s.lo), scale_up(mono.apply(s.hi), ell_ - digit)};
}

IntervalState BoundPropagator::comp_step(const IntervalState& s, int digit) const {
  if (!comp_ok_) {
    throw PolarError(ErrorCode::AssumptionUnmet, "D(H) monotonicity does not hold under any resolved branch mapping");
  }
  if (digit < 0 || digit >= ell_) throw PolarError(ErrorCode::IndexOutOfRange, "branch digit out of range");
  const auto& mono = comp_mono_[digit];
  return {mono.apply(s.lo), scale_up(mono.apply(s.hi), 2 * digit + 1)};
}

IntervalState propagate_z_interval(const IntervalState& state, int digit, const KernelProfile& profile) {
  return BoundPropagator(profile).z_step(state, digit);
}

IntervalState propagate_comp_interval(const IntervalState& state, int digit, const KernelProfile& profile,
                                      const ErasurePolynomialSet& polys) {
  return BoundPropagator(profile, polys).comp_step(state, digit);
}

void ConditionReport::merge(const ConditionReport& other) {
  steps += other.steps;
  c2_violations += other.c2_violations;
  c3_violations += other.c3_violations;
  max_c3_constant_observed = std::max(max_c3_constant_observed, other.max_c3_constant_observed);
  terminal_drift = std::max(terminal_drift, other.terminal_drift);
  if (c5_note.empty()) c5_note = other.c5_note;
}

std::string ConditionReport::to_json() const {
  JsonWriter w;
  w.begin_object();
  w.key("steps").value(steps);
  w.key("c2_violations").value(c2_violations);
  w.key("c3_violations").value(c3_violations);
  w.key("max_c3_constant_observed").value(max_c3_constant_observed);
  w.key("c1_terminal_drift").value(terminal_drift);
  w.key("c5_note").value(c5_note);
  w.end_object();
  return w.str();
}

ConditionReport check_process_conditions(const std::vector<std::pair<ExtendedUnitValue, int>>& trace, double c,
                                         int basis_degree) {
  if (!(c >= 1.0)) throw PolarError(ErrorCode::InvalidArgument, "constant c must be at least 1");
  ConditionReport r;
  r.c5_note =
      "(c4)/(c5) hold structurally: branch digits are drawn from a PRNG stream that never reads the process state";
  const double log_c = std::log2(c);
  for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
    const auto& [x, s] = trace[k];
    const auto& next = trace[k + 1].first;
    if (s < 1 || s > basis_degree) throw PolarError(ErrorCode::InvalidArgument, "exponent outside [1, basis degree]");
    const auto lower = BranchPolynomial::monomial(basis_degree, s).apply(x);
    ++r.steps;
    if (next < lower) ++r.c2_violations;
    if (next > scale_up(lower, log_c)) ++r.c3_violations;
    r.max_c3_constant_observed = std::max(r.max_c3_constant_observed, std::exp2(lower.neglog() - next.neglog()));
  }
  if (!trace.empty()) {
    const auto& last = trace.back().first;
    r.terminal_drift = std::min(last.value(), last.complement_value());
  }
  return r;
}

}  // namespace polar

#include "polar/erasure.hpp"

#include <bit>
#include <cmath>

#include "polar/error.hpp"
#include "polar/kernel.hpp"
#include "polar/report.hpp"

namespace polar {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

int first_nonzero(const std::vector<std::uint64_t>& v) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k]) return static_cast<int>(k);
  }
  return -1;
}

// sum_{k >= lead} c_k x^(k-lead) y^(m-k)
double correction_sum(const std::vector<std::uint64_t>& c, int lead, double x, double y) {
  const int m = static_cast<int>(c.size()) - 1;
  double s = 0.0;
  for (int k = lead; k <= m; ++k) {
    if (c[k]) s += static_cast<double>(c[k]) * ipow(x, k - lead) * ipow(y, m - k);
  }
  return s;
}

}  // namespace

BranchPolynomial::BranchPolynomial(int degree, std::vector<std::uint64_t> counts)
    : degree_(degree), counts_(std::move(counts)) {
  if (static_cast<int>(counts_.size()) != degree + 1) {
    throw PolarError(ErrorCode::InvalidArgument, "count table must have degree+1 entries");
  }
  comp_counts_.resize(degree + 1);
  for (int k = 0; k <= degree; ++k) {
    const std::uint64_t total = binomial(degree, k);
    if (counts_[k] > total || counts_[degree - k] > total) {
      throw PolarError(ErrorCode::InvalidArgument, "count exceeds binomial coefficient");
    }
    comp_counts_[k] = total - counts_[degree - k];
  }
  leading_ = first_nonzero(counts_);
  comp_leading_ = first_nonzero(comp_counts_);
  if (leading_ <= 0 || comp_leading_ <= 0) {
    throw PolarError(ErrorCode::InvalidArgument, "polynomial must satisfy p(0) = 0 and p(1) = 1");
  }
  identity_ = true;
  for (int k = 0; k <= degree; ++k) identity_ = identity_ && counts_[k] == binomial(degree - 1, k - 1);
}

BranchPolynomial BranchPolynomial::monomial(int degree, int d) {
  if (d < 1 || d > degree) throw PolarError(ErrorCode::InvalidArgument, "monomial exponent out of range");
  std::vector<std::uint64_t> a(degree + 1, 0);
  for (int k = d; k <= degree; ++k) a[k] = binomial(degree - d, k - d);
  return BranchPolynomial(degree, std::move(a));
}

double BranchPolynomial::evaluate_linear(double z) const {
  double s = 0.0;
  for (int k = 0; k <= degree_; ++k) {
    if (counts_[k]) s += static_cast<double>(counts_[k]) * std::pow(z, k) * std::pow(1.0 - z, degree_ - k);
  }
  return s;
}

ExtendedUnitValue BranchPolynomial::apply(const ExtendedUnitValue& x) const {
  if (identity_) return x;
  const auto p = x.parts();
  const double lambda = leading_ * p.lambda - std::log2(correction_sum(counts_, leading_, p.z, p.delta));
  const double mu = comp_leading_ * p.mu - std::log2(correction_sum(comp_counts_, comp_leading_, p.delta, p.z));
  return ExtendedUnitValue::from_logs(lambda, mu);
}

const char* to_string(HBranchMapping m) {
  switch (m) {
    case HBranchMapping::Identity: return "identity";
    case HBranchMapping::Reversed: return "reversed";
    case HBranchMapping::Unresolved: return "unresolved";
  }
  return "?";
}

std::vector<std::vector<std::uint64_t>> ErasurePolynomialSet::counts() const {
  std::vector<std::vector<std::uint64_t>> t;
  for (const auto& b : branches) t.push_back(b.counts());
  return t;
}

std::string ErasurePolynomialSet::to_json() const {
  JsonWriter w;
  w.begin_object();
  w.key("ell").value(ell);
  w.key("counts").begin_array();
  for (const auto& b : branches) {
    w.begin_array();
    for (auto c : b.counts()) w.value(c);
    w.end_array();
  }
  w.end_array();
  w.key("leading_degree").value(leading_degree);
  w.key("comp_leading_degree").value(comp_leading_degree);
  w.key("h_mapping").value(to_string(h_mapping));
  w.key("comp_branch_to_h").value(comp_branch_to_h);
  w.key("h_assumption_holds").value(h_assumption_holds);
  w.end_object();
  return w.str();
}

ErasurePolynomialSet split_erasure_polynomials(const BitMatrix& g) {
  const auto profile = kernel_profile(g);  // throws NotPolarizing
  const int ell = g.size();
  const std::uint32_t full = (1u << ell) - 1u;
  std::vector<std::vector<std::uint64_t>> a(ell, std::vector<std::uint64_t>(ell + 1, 0));

  for (std::uint32_t erased = 0; erased <= full; ++erased) {
    const std::uint32_t known = full & ~erased;
    const int weight = std::popcount(erased);
    Gf2Basis later;  // span of the restricted rows j+1..ell-1
    for (int j = ell - 1; j >= 0; --j) {
      const std::uint32_t r = g.row(j) & known;
      if (!later.insert(r)) ++a[j][weight];
    }
  }

  ErasurePolynomialSet set;
  set.ell = ell;
  for (int j = 0; j < ell; ++j) {
    set.branches.emplace_back(ell, std::move(a[j]));
    set.leading_degree.push_back(set.branches.back().leading_degree());
    set.comp_leading_degree.push_back(set.branches.back().comp_leading_degree());
  }

  const auto& dh = profile.h_partial_distances;
  bool identity = true;
  bool reversed = true;
  for (int j = 0; j < ell; ++j) {
    identity = identity && set.comp_leading_degree[j] == dh[j];
    reversed = reversed && set.comp_leading_degree[j] == dh[ell - 1 - j];
  }
  bool monotone = true;
  for (int j = 1; j < ell; ++j) monotone = monotone && set.comp_leading_degree[j] <= set.comp_leading_degree[j - 1];

  if (identity || reversed) {
    set.h_mapping = identity ? HBranchMapping::Identity : HBranchMapping::Reversed;
    for (int j = 0; j < ell; ++j) set.comp_branch_to_h.push_back(identity ? j : ell - 1 - j);
    set.h_assumption_holds = monotone;
  }
  return set;
}

ExtendedUnitValue evolve_exact(const ExtendedUnitValue& z0, std::span<const int> digits,
                               const ErasurePolynomialSet& polys) {
  ExtendedUnitValue z = z0;
  for (int d : digits) {
    if (d < 0 || d >= polys.ell) throw PolarError(ErrorCode::IndexOutOfRange, "branch digit out of range");
    z = polys.branches[d].apply(z);
  }
  return z;
}

}  // namespace polar

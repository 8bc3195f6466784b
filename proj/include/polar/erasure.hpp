#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "polar/bit_matrix.hpp"
#include "polar/extended_value.hpp"

namespace polar {

/// p(z) = sum_k counts[k] z^k (1-z)^(degree-k), with counts in the degree-m
/// Bernstein basis. The complement 1 - p(1 - d) is kept in the same basis
/// (comp_counts[k] = C(m,k) - counts[m-k]) so either tail of p can be
/// evaluated without cancellation.
class BranchPolynomial {
 public:
  BranchPolynomial() = default;
  BranchPolynomial(int degree, std::vector<std::uint64_t> counts);

  /// z^d written in the degree-m basis.
  static BranchPolynomial monomial(int degree, int d);

  int degree() const noexcept { return degree_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  const std::vector<std::uint64_t>& comp_counts() const noexcept { return comp_counts_; }
  /// Smallest k with counts[k] > 0.
  int leading_degree() const noexcept { return leading_; }
  /// Smallest k with comp_counts[k] > 0: the exponent of 1 - p near z = 1.
  int comp_leading_degree() const noexcept { return comp_leading_; }

  /// Plain double evaluation of p(z).
  double evaluate_linear(double z) const;

  /// p(x) in extended precision:
  ///   -log2 p     = D  * lambda - log2 sum_k a_k z^(k-D)  (1-z)^(m-k)
  ///   -log2 (1-p) = D' * mu     - log2 sum_k c_k (1-z)^(k-D') z^(m-k)
  /// Both correction sums have non-negative terms and a leading term bounded
  /// away from zero, so they are well conditioned in every mode.
  ExtendedUnitValue apply(const ExtendedUnitValue& x) const;

  bool operator==(const BranchPolynomial&) const = default;

 private:
  int degree_ = 0;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> comp_counts_;
  int leading_ = 0;
  int comp_leading_ = 0;
  bool identity_ = false;  // p(z) = z; apply() returns its argument untouched
};

/// How the complement exponents of the erasure polynomials line up with the
/// partial distances of H.
enum class HBranchMapping { Identity, Reversed, Unresolved };
const char* to_string(HBranchMapping m);

/// Exact BEC splitting maps z -> Z(W^j) for every branch j of a kernel.
struct ErasurePolynomialSet {
  int ell = 0;
  std::vector<BranchPolynomial> branches;
  std::vector<int> leading_degree;       // equals D_j(G)
  std::vector<int> comp_leading_degree;  // exponent of 1 - Z(W^j) in 1 - z
  HBranchMapping h_mapping = HBranchMapping::Unresolved;
  /// comp_branch_to_h[j] = index i with D_i(H) = comp_leading_degree[j]
  /// under the resolved mapping; empty when unresolved.
  std::vector<int> comp_branch_to_h;
  /// The exponents of 1 - Z are non-increasing in the branch index, which is
  /// the monotonicity assumption behind the 1 - Z sandwich.
  bool h_assumption_holds = false;

  /// a[j][k] as a table.
  std::vector<std::vector<std::uint64_t>> counts() const;
  std::string to_json() const;
};

/// Branch j is erased under an erasure pattern iff g_j restricted to the
/// unerased coordinates lies in the span of g_{j+1..ell-1} restricted the
/// same way. Throws NotPolarizing.
ErasurePolynomialSet split_erasure_polynomials(const BitMatrix& g);

/// Applies p_{digit} once per digit. Throws IndexOutOfRange for bad digits.
ExtendedUnitValue evolve_exact(const ExtendedUnitValue& z0, std::span<const int> digits,
                               const ErasurePolynomialSet& polys);

std::uint64_t binomial(int n, int k);

}  // namespace polar

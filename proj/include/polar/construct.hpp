#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polar/bit_matrix.hpp"
#include "polar/extended_value.hpp"
#include "polar/kernel.hpp"
#include "polar/level.hpp"

namespace polar {

enum class SelectionRule { Polar, ReedMuller, Hybrid, HybridRecursive };
const char* to_string(SelectionRule r);

/// A set of synthetic-channel indices (1-based, ascending) at depth n. All
/// rules rank channel indices; the generator row of channel i is row
/// digit_reverse(i) of G^{(x)n}.
struct SelectionSet {
  int n = 0;
  int ell = 2;
  double rate = 0.0;
  std::vector<std::uint64_t> indices;
  SelectionRule rule = SelectionRule::Polar;
  std::vector<std::pair<std::string, double>> parameters;
  /// Hybrid rules only: indices added from the fallback ranking because the
  /// event intersection was too small.
  std::uint64_t shortfall = 0;

  std::uint64_t block_length() const;
  bool contains(std::uint64_t index) const;
  std::string to_csv() const;
};

/// floor(ell^n * rate), tolerant of representation noise in `rate`.
std::uint64_t selection_size(int ell, int n, double rate);

/// Digits b_1..b_n (most significant first) of index - 1.
std::vector<int> index_digits(std::uint64_t index, int ell, int n);

/// j such that the digits of j - 1 are those of i - 1 reversed.
/// Throws IndexOutOfRange unless 1 <= i <= ell^n.
std::uint64_t digit_reverse(std::uint64_t i, int ell, int n);

/// Row weight of G^{(x)n} for the row of channel `index`: prod_j w_{i_j}(G).
std::uint64_t row_weight_product(std::uint64_t index, const KernelProfile& profile, int n);

/// The floor(ell^n rate) channels with smallest Z; ties go to the smaller
/// index. Throws RequiresExactCdf for Monte Carlo levels.
SelectionSet polar_selection(const LevelCdf& cdf, double rate);

/// The floor(ell^n rate) channels whose rows of G^{(x)n} are heaviest; ties go
/// to the smaller index.
SelectionSet rm_selection(const BitMatrix& g, int n, double rate);

/// ceil((log2 n + log2 log2 c) / beta) clipped to [0, n], c = 2^ell.
int default_prefix_depth(int n, double beta, const KernelProfile& profile);

/// Prefix event D_m(beta) (Z_m < 2^{-2^{beta m}}, from the exact level m)
/// intersected with the suffix event H_m^{n-1}(t) on sum log2 D_{B_i}.
/// beta and the suffix moments use log base 2. Overfull intersections keep
/// the largest suffix sums; short ones are padded from the polar ranking of
/// `full_level` when given, else from (prefix Z, suffix sum) order.
SelectionSet hybrid_selection(const LevelCdf& prefix, const KernelProfile& profile, int n, double rate,
                              double beta, double t, const LevelCdf* full_level = nullptr);

/// D_{m_0}(beta) ∩ C_{m_0}^{m_1-1}(eps) ∩ ... ∩ H_{m_k}^{n-1}(t) for the
/// breakpoints schedule = (m_0 < m_1 < ... < m_k); `prefix` is the exact level
/// at depth m_0. C requires the segment mean of log2 D to reach E' - eps.
SelectionSet hybrid_selection_recursive(const LevelCdf& prefix, const KernelProfile& profile, int n, double rate,
                                        const std::vector<int>& schedule, double beta, double epsilon_slack,
                                        double t, const LevelCdf* full_level = nullptr);

struct SelectionBounds {
  /// -log2 of sum_{i in I} Z_i; <= 0 means the union bound is vacuous.
  double union_neglog = 0.0;
  ExtendedUnitValue sc_lower = ExtendedUnitValue::from_linear(0.5);
  std::uint64_t dmin_upper = 1;
  ExtendedUnitValue map_lower = ExtendedUnitValue::from_linear(0.5);

  std::optional<ExtendedUnitValue> union_bound() const;
};

/// Throws MismatchedLevel if the level depth differs, RequiresExactCdf for
/// Monte Carlo levels.
SelectionBounds selection_bounds(const SelectionSet& sel, const LevelCdf& cdf, const KernelProfile& profile,
                                 double root_z);

/// |a ∩ b| / ell^n. Throws MismatchedLevel.
double overlap_fraction(const SelectionSet& a, const SelectionSet& b);

/// Some selected index has sum_j log_ell w_{i_j} <= n E_w + sqrt(n V_w)
/// (Q^{-1}(R / I) + epsilon_slack).
bool check_min_weight_row(const SelectionSet& sel, const KernelProfile& profile, int n, double rate,
                          double channel_I, double epsilon_slack);

/// JSON metadata block for an exported selection.
std::string selection_metadata_json(const SelectionSet& sel, const SelectionBounds* bounds);

}  // namespace polar

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polar/bit_matrix.hpp"
#include "polar/erasure.hpp"
#include "polar/extended_value.hpp"
#include "polar/kernel.hpp"

namespace polar {

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 22;

enum class CdfSource { Exact, MonteCarlo };

/// Empirical distribution of Z over the synthetic channels at depth n, i.e.
/// F(n, z). Exact levels keep the leaves in channel-index order (leaf i-1 has
/// ell-ary digits b_1..b_n, b_1 the first split); Monte Carlo levels keep the
/// samples in draw order.
class LevelCdf {
 public:
  LevelCdf(int n, int ell, CdfSource source, std::vector<ExtendedUnitValue> leaves,
           std::uint64_t num_samples = 0, std::uint64_t seed = 0);

  int n() const noexcept { return n_; }
  int ell() const noexcept { return ell_; }
  CdfSource source() const noexcept { return source_; }
  bool exact() const noexcept { return source_ == CdfSource::Exact; }
  std::uint64_t num_samples() const noexcept { return num_samples_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t size() const noexcept { return leaves_.size(); }

  /// Leaf by 1-based channel index (exact levels).
  const ExtendedUnitValue& channel(std::uint64_t index) const;
  const std::vector<ExtendedUnitValue>& leaves() const noexcept { return leaves_; }
  /// Leaves sorted by increasing value.
  const std::vector<ExtendedUnitValue>& sorted() const noexcept { return sorted_; }

  /// #{Z <= z}.
  std::uint64_t count_at_most(const ExtendedUnitValue& z) const;
  /// F(n, z) = #{Z <= z} / size.
  double cdf_at(const ExtendedUnitValue& z) const;
  /// Fraction with Z <= 2^-(ell^nu), i.e. log_ell(-log2 Z) >= nu.
  double fraction_below_double_exponent(double nu) const;
  /// Fraction with 1 - Z <= 2^-(ell^nu).
  double fraction_above_double_exponent(double nu) const;

  /// Header "lambda", one -log2 Z per row, ascending.
  std::string to_csv() const;

 private:
  int n_;
  int ell_;
  CdfSource source_;
  std::uint64_t num_samples_;
  std::uint64_t seed_;
  std::vector<ExtendedUnitValue> leaves_;
  std::vector<ExtendedUnitValue> sorted_;
};

/// ell^n, or 0 when it overflows 64 bits.
std::uint64_t level_size(int ell, int n);

/// All ell^n synthetic-channel Bhattacharyya values of BEC(eps) at depth n.
/// Throws BudgetExceeded when ell^n > budget, DomainError unless 0 < eps < 1.
LevelCdf enumerate_level(const ErasurePolynomialSet& polys, double eps, int n,
                         std::uint64_t budget = kDefaultEnumerationBudget);
LevelCdf enumerate_level(const BitMatrix& g, double eps, int n,
                         std::uint64_t budget = kDefaultEnumerationBudget);

/// One realization of the polarization process.
struct PathSample {
  std::vector<std::uint8_t> digits;
  ExtendedUnitValue z_final = ExtendedUnitValue::from_linear(0.5);
  double sum_log_d = 0.0;  // sum log2 D_{B_i}(G)
  double sum_log_w = 0.0;  // sum log2 w_{B_i}(G)
};

/// Draws `count` independent paths. Path k uses the stream
/// stream_seed(seed, k), so output is identical for every thread count.
std::vector<PathSample> sample_paths(const KernelProfile& profile, const ErasurePolynomialSet& polys,
                                     double eps, int n, std::uint64_t count, std::uint64_t seed,
                                     unsigned threads = 0);
std::vector<PathSample> sample_paths(const BitMatrix& g, double eps, int n, std::uint64_t count,
                                     std::uint64_t seed);

/// Monte Carlo estimate of the level distribution.
LevelCdf sampled_level(const std::vector<PathSample>& paths, int n, int ell, std::uint64_t seed);

/// Runs body(begin, end) over [0, size) split into contiguous shards of at
/// least `min_shard` items. threads = 0 uses the hardware concurrency.
template <typename Body>
void parallel_for(std::uint64_t size, unsigned threads, Body body, std::uint64_t min_shard = 4096);

}  // namespace polar

#include "polar/detail/parallel.hpp"

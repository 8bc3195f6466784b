#include "polar/level.hpp"

#include <algorithm>
#include <cmath>

#include "polar/error.hpp"
#include "polar/report.hpp"
#include "polar/rng.hpp"

namespace polar {

LevelCdf::LevelCdf(int n, int ell, CdfSource source, std::vector<ExtendedUnitValue> leaves,
                   std::uint64_t num_samples, std::uint64_t seed)
    : n_(n), ell_(ell), source_(source), num_samples_(num_samples), seed_(seed),
      leaves_(std::move(leaves)), sorted_(leaves_) {
  std::stable_sort(sorted_.begin(), sorted_.end(),
                   [](const ExtendedUnitValue& a, const ExtendedUnitValue& b) { return a < b; });
}

const ExtendedUnitValue& LevelCdf::channel(std::uint64_t index) const {
  if (index < 1 || index > leaves_.size()) {
    throw PolarError(ErrorCode::IndexOutOfRange, "channel index " + std::to_string(index) + " out of range");
  }
  return leaves_[index - 1];
}

std::uint64_t LevelCdf::count_at_most(const ExtendedUnitValue& z) const {
  auto it = std::partition_point(sorted_.begin(), sorted_.end(),
                                 [&](const ExtendedUnitValue& v) { return v <= z; });
  return static_cast<std::uint64_t>(it - sorted_.begin());
}

double LevelCdf::cdf_at(const ExtendedUnitValue& z) const {
  if (sorted_.empty()) return 0.0;
  return static_cast<double>(count_at_most(z)) / static_cast<double>(sorted_.size());
}

namespace {

// ell^nu as a bit count; exact whenever nu is an integer and the power fits.
double double_exponent_bits(int ell, double nu) { return std::pow(static_cast<double>(ell), nu); }

}  // namespace

double LevelCdf::fraction_below_double_exponent(double nu) const {
  if (sorted_.empty()) return 0.0;
  const double bits = double_exponent_bits(ell_, nu);
  // sorted_ ascending in Z means descending in -log2 Z.
  auto it = std::partition_point(sorted_.begin(), sorted_.end(),
                                 [&](const ExtendedUnitValue& v) { return v.neglog() >= bits; });
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double LevelCdf::fraction_above_double_exponent(double nu) const {
  if (sorted_.empty()) return 0.0;
  const double bits = double_exponent_bits(ell_, nu);
  auto it = std::partition_point(sorted_.rbegin(), sorted_.rend(),
                                 [&](const ExtendedUnitValue& v) { return v.complog() >= bits; });
  return static_cast<double>(it - sorted_.rbegin()) / static_cast<double>(sorted_.size());
}

std::string LevelCdf::to_csv() const {
  std::string out = "lambda\n";
  for (auto it = sorted_.rbegin(); it != sorted_.rend(); ++it) {
    out += format_real(it->neglog());
    out.push_back('\n');
  }
  return out;
}

std::uint64_t level_size(int ell, int n) {
  std::uint64_t size = 1;
  for (int i = 0; i < n; ++i) {
    if (size > ~std::uint64_t{0} / static_cast<std::uint64_t>(ell)) return 0;
    size *= static_cast<std::uint64_t>(ell);
  }
  return size;
}

LevelCdf enumerate_level(const ErasurePolynomialSet& polys, double eps, int n, std::uint64_t budget) {
  if (!(eps > 0.0 && eps < 1.0)) throw PolarError(ErrorCode::DomainError, "erasure probability must be in (0,1)");
  if (n < 0) throw PolarError(ErrorCode::InvalidArgument, "depth must be non-negative");
  const int ell = polys.ell;
  const std::uint64_t total = level_size(ell, n);
  if (total == 0 || total > budget) {
    throw PolarError(ErrorCode::BudgetExceeded,
                     std::to_string(ell) + "^" + std::to_string(n) + " channels exceed the enumeration budget");
  }
  // Level by level; child j of node i lands at i*ell + j, which is the same
  // left-to-right leaf order a depth-first walk (branch 0 first) produces.
  std::vector<ExtendedUnitValue> level{ExtendedUnitValue::from_linear(eps)};
  for (int depth = 0; depth < n; ++depth) {
    std::vector<ExtendedUnitValue> next(level.size() * ell, level.front());
    parallel_for(level.size(), 0, [&](std::uint64_t begin, std::uint64_t end) {
      for (std::uint64_t i = begin; i < end; ++i) {
        for (int j = 0; j < ell; ++j) next[i * ell + j] = polys.branches[j].apply(level[i]);
      }
    });
    level = std::move(next);
  }
  return LevelCdf(n, ell, CdfSource::Exact, std::move(level));
}

LevelCdf enumerate_level(const BitMatrix& g, double eps, int n, std::uint64_t budget) {
  return enumerate_level(split_erasure_polynomials(g), eps, n, budget);
}

std::vector<PathSample> sample_paths(const KernelProfile& profile, const ErasurePolynomialSet& polys,
                                     double eps, int n, std::uint64_t count, std::uint64_t seed,
                                     unsigned threads) {
  if (count < 1) throw PolarError(ErrorCode::InvalidArgument, "need at least one path");
  if (n < 0) throw PolarError(ErrorCode::InvalidArgument, "depth must be non-negative");
  const auto z0 = ExtendedUnitValue::from_linear(eps);  // throws DomainError
  const int ell = polys.ell;
  std::vector<double> log_d(ell);
  std::vector<double> log_w(ell);
  for (int j = 0; j < ell; ++j) {
    log_d[j] = std::log2(static_cast<double>(profile.partial_distances[j]));
    log_w[j] = std::log2(static_cast<double>(profile.row_weights[j]));
  }
  std::vector<PathSample> out(count);
  parallel_for(count, threads, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t k = begin; k < end; ++k) {
      RandomStream rng(stream_seed(seed, k));
      PathSample& s = out[k];
      s.digits.resize(n);
      ExtendedUnitValue z = z0;
      for (int i = 0; i < n; ++i) {
        const int b = static_cast<int>(rng.below(ell));
        s.digits[i] = static_cast<std::uint8_t>(b);
        z = polys.branches[b].apply(z);
        s.sum_log_d += log_d[b];
        s.sum_log_w += log_w[b];
      }
      s.z_final = z;
    }
  });
  return out;
}

std::vector<PathSample> sample_paths(const BitMatrix& g, double eps, int n, std::uint64_t count,
                                     std::uint64_t seed) {
  return sample_paths(kernel_profile(g), split_erasure_polynomials(g), eps, n, count, seed);
}

LevelCdf sampled_level(const std::vector<PathSample>& paths, int n, int ell, std::uint64_t seed) {
  std::vector<ExtendedUnitValue> values;
  values.reserve(paths.size());
  for (const auto& p : paths) values.push_back(p.z_final);
  return LevelCdf(n, ell, CdfSource::MonteCarlo, std::move(values), paths.size(), seed);
}

}  // namespace polar

// Reference implementations used only by the tests. They favour directness
// over speed and share no code with the library beyond BitMatrix storage.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "polar/bit_matrix.hpp"

namespace oracle {

using Rows = std::vector<std::uint32_t>;

inline Rows rows_of(const polar::BitMatrix& g) { return g.rows(); }

/// Distance from row i to the span of rows i+1..ell-1, by listing the span.
inline int partial_distance(const Rows& g, int i) {
  const int ell = static_cast<int>(g.size());
  const int later = ell - 1 - i;
  int best = 1 << 30;
  for (std::uint32_t sel = 0; sel < (1u << later); ++sel) {
    std::uint32_t v = 0;
    for (int k = 0; k < later; ++k) {
      if ((sel >> k) & 1u) v ^= g[static_cast<std::size_t>(i + 1 + k)];
    }
    best = std::min(best, std::popcount(v ^ g[static_cast<std::size_t>(i)]));
  }
  return best;
}

inline std::vector<int> partial_distances(const Rows& g) {
  std::vector<int> d;
  for (int i = 0; i < static_cast<int>(g.size()); ++i) d.push_back(partial_distance(g, i));
  return d;
}

/// Rank by repeatedly eliminating on the lowest column.
inline int rank(Rows rows) {
  int r = 0;
  for (int col = 0; col < 32; ++col) {
    auto it = std::find_if(rows.begin() + r, rows.end(), [&](std::uint32_t v) { return (v >> col) & 1u; });
    if (it == rows.end()) continue;
    std::iter_swap(rows.begin() + r, it);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (static_cast<int>(k) != r && ((rows[k] >> col) & 1u)) rows[k] ^= rows[static_cast<std::size_t>(r)];
    }
    ++r;
  }
  return r;
}

/// Polarizing = invertible and no column permutation is upper triangular.
/// Tries every permutation.
inline bool polarizing(const Rows& g) {
  const int ell = static_cast<int>(g.size());
  if (rank(g) < ell) return false;
  std::vector<int> perm(static_cast<std::size_t>(ell));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool upper = true;
    for (int i = 0; i < ell && upper; ++i) {
      for (int k = 0; k < i; ++k) {
        if ((g[static_cast<std::size_t>(i)] >> perm[static_cast<std::size_t>(k)]) & 1u) {
          upper = false;
          break;
        }
      }
    }
    if (upper) return false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return true;
}

inline Rows random_matrix(int ell, std::mt19937_64& rng) {
  Rows g(static_cast<std::size_t>(ell));
  for (auto& r : g) r = static_cast<std::uint32_t>(rng()) & ((1u << ell) - 1u);
  return g;
}

/// Z(W^j) for BEC(z) from the definition: input j is lost under an erasure
/// pattern iff two inputs that agree before j and differ at j produce
/// outputs that agree on every unerased coordinate. Equivalent to: some
/// u with u_{<j} = 0, u_j = 1 has u G supported on erased positions.
inline double erasure_probability(const Rows& g, int j, double z) {
  const int ell = static_cast<int>(g.size());
  double total = 0.0;
  for (std::uint32_t erased = 0; erased < (1u << ell); ++erased) {
    const int e = std::popcount(erased);
    bool lost = false;
    const int free_bits = ell - 1 - j;
    for (std::uint32_t tail = 0; tail < (1u << free_bits) && !lost; ++tail) {
      std::uint32_t x = g[static_cast<std::size_t>(j)];
      for (int k = 0; k < free_bits; ++k) {
        if ((tail >> k) & 1u) x ^= g[static_cast<std::size_t>(j + 1 + k)];
      }
      if ((x & ~erased) == 0) lost = true;
    }
    if (lost) total += std::pow(z, e) * std::pow(1.0 - z, ell - e);
  }
  return total;
}

/// Row r of G^{(x)n} (natural Kronecker order) as a bit vector of length ell^n.
inline std::vector<std::uint8_t> kronecker_row(const Rows& g, int n, std::uint64_t r) {
  const std::uint64_t ell = g.size();
  std::uint64_t size = 1;
  for (int i = 0; i < n; ++i) size *= ell;
  std::vector<std::uint8_t> row(size);
  for (std::uint64_t c = 0; c < size; ++c) {
    std::uint64_t rr = r;
    std::uint64_t cc = c;
    std::uint8_t bit = 1;
    for (int i = 0; i < n; ++i) {
      bit &= (g[static_cast<std::size_t>(rr % ell)] >> (cc % ell)) & 1u;
      rr /= ell;
      cc /= ell;
    }
    row[c] = bit;
  }
  return row;
}

/// Reverses the n base-ell digits of m (0-based).
inline std::uint64_t reverse_digits(std::uint64_t m, int ell, int n) {
  std::uint64_t r = 0;
  for (int i = 0; i < n; ++i) {
    r = r * static_cast<std::uint64_t>(ell) + m % static_cast<std::uint64_t>(ell);
    m /= static_cast<std::uint64_t>(ell);
  }
  return r;
}

/// Q(t) by composite Simpson integration of the normal density over
/// [t, t + 40].
inline double q_function(double t) {
  const int steps = 400000;
  const double a = t;
  const double b = t + 40.0;
  const double h = (b - a) / steps;
  auto phi = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); };
  double s = phi(a) + phi(b);
  for (int k = 1; k < steps; ++k) s += phi(a + k * h) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Bivariate normal orthant P(A >= t, B >= v) by the tetrachoric series
/// Q(t)Q(v) + phi(t)phi(v) sum_k rho^k/k! He_{k-1}(t) He_{k-1}(v).
inline double orthant_series(double t, double v, double rho, double qt, double qv) {
  auto phi = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); };
  // Normalized Hermite h_k = He_k / sqrt(k!).
  double ht_prev = 0.0, ht = 1.0;
  double hv_prev = 0.0, hv = 1.0;
  double sum = 0.0;
  double power = 1.0;
  for (int k = 1; k < 2000; ++k) {
    power *= rho;
    sum += power / k * ht * hv;
    const double nt = (t * ht - std::sqrt(k - 1.0) * ht_prev) / std::sqrt(static_cast<double>(k));
    const double nv = (v * hv - std::sqrt(k - 1.0) * hv_prev) / std::sqrt(static_cast<double>(k));
    ht_prev = ht;
    ht = nt;
    hv_prev = hv;
    hv = nv;
  }
  return qt * qv + phi(t) * phi(v) * sum;
}

}  // namespace oracle

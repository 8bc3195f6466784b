#include "polar/kernel.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "polar/error.hpp"
#include "polar/report.hpp"

namespace polar {

std::optional<std::vector<int>> triangular_column_order(const BitMatrix& g) {
  // Peel rows from the bottom: row i may only touch columns placed at
  // positions >= i, so after removing the columns already placed for rows
  // i+1.., exactly one column must remain and it becomes position i.
  const int ell = g.size();
  std::vector<int> order(ell, -1);
  std::uint32_t used = 0;
  for (int i = ell - 1; i >= 0; --i) {
    const std::uint32_t fresh = g.row(i) & ~used;
    if (std::popcount(fresh) != 1) return std::nullopt;
    const int col = std::countr_zero(fresh);
    order[i] = col;
    used |= fresh;
  }
  return order;
}

bool is_polarizing(const BitMatrix& g) {
  if (gf2_rank(g.rows()) < g.size()) return false;
  return !triangular_column_order(g).has_value();
}

std::vector<int> partial_distances(const BitMatrix& g) {
  const int ell = g.size();
  if (gf2_rank(g.rows()) < ell) {
    throw PolarError(ErrorCode::SingularMatrix, "partial distances need an invertible kernel");
  }
  std::vector<int> d(ell);
  for (int i = 0; i < ell; ++i) {
    // Gray-code walk over span<g_{i+1}, ..., g_{ell-1}>.
    const int dim = ell - 1 - i;
    std::uint32_t v = 0;
    int best = std::popcount(g.row(i));
    for (std::uint32_t step = 1; step < (1u << dim); ++step) {
      v ^= g.row(i + 1 + std::countr_zero(step));
      best = std::min(best, std::popcount(g.row(i) ^ v));
    }
    d[i] = best;
  }
  return d;
}

LogMoments log_moments(const std::vector<int>& values, int ell) {
  LogMoments m;
  if (values.empty()) return m;
  const double base = std::log(static_cast<double>(ell));
  std::vector<double> logs;
  logs.reserve(values.size());
  for (int v : values) logs.push_back(std::log(static_cast<double>(v)) / base);
  double sum = 0.0;
  for (double x : logs) sum += x;
  m.mean = sum / static_cast<double>(logs.size());
  double ss = 0.0;
  for (double x : logs) ss += (x - m.mean) * (x - m.mean);
  m.variance = ss / static_cast<double>(logs.size());
  return m;
}

namespace {

bool non_increasing(const std::vector<int>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1]) return false;
  }
  return true;
}

}  // namespace

KernelProfile kernel_profile(const BitMatrix& g) {
  if (!is_polarizing(g)) {
    throw PolarError(ErrorCode::NotPolarizing, "kernel " + g.to_literal() + " is not polarizing");
  }
  const int ell = g.size();
  KernelProfile p;
  p.kernel = g;
  p.partial_distances = partial_distances(g);
  auto dm = log_moments(p.partial_distances, ell);
  p.exponent = dm.mean;
  p.second_exponent = dm.variance;

  for (int i = 0; i < ell; ++i) p.row_weights.push_back(g.row_weight(i));
  auto wm = log_moments(p.row_weights, ell);
  p.weight_exponent = wm.mean;
  p.weight_second_exponent = wm.variance;

  // Column k of the reversed-transpose matrix is g_{ell-1-k}.
  std::vector<std::uint32_t> rows(ell, 0);
  for (int r = 0; r < ell; ++r) {
    for (int k = 0; k < ell; ++k) {
      if (g.at(ell - 1 - k, r)) rows[r] |= 1u << k;
    }
  }
  p.derived_h = gf2_invert(BitMatrix(ell, std::move(rows)));
  p.h_partial_distances = partial_distances(p.derived_h);
  auto hm = log_moments(p.h_partial_distances, ell);
  p.h_exponent = hm.mean;
  p.h_second_exponent = hm.variance;
  p.h_monotone = non_increasing(p.h_partial_distances);
  std::vector<int> reversed(p.h_partial_distances.rbegin(), p.h_partial_distances.rend());
  p.h_monotone_reversed = non_increasing(reversed);
  p.c3_constant = std::ldexp(1.0, ell);
  return p;
}

std::string profile_to_json(const KernelProfile& p) {
  JsonWriter w;
  w.begin_object();
  w.key("ell").value(p.ell());
  w.key("kernel").value(p.kernel.to_literal());
  w.key("partial_distances").value(p.partial_distances);
  w.key("exponent").value(p.exponent);
  w.key("second_exponent").value(p.second_exponent);
  w.key("row_weights").value(p.row_weights);
  w.key("weight_exponent").value(p.weight_exponent);
  w.key("weight_second_exponent").value(p.weight_second_exponent);
  w.key("derived_h").value(p.derived_h.to_literal());
  w.key("h_partial_distances").value(p.h_partial_distances);
  w.key("h_exponent").value(p.h_exponent);
  w.key("h_second_exponent").value(p.h_second_exponent);
  w.key("h_monotone").value(p.h_monotone);
  w.key("h_monotone_reversed").value(p.h_monotone_reversed);
  w.key("c3_constant").value(p.c3_constant);
  w.end_object();
  return w.str();
}

}  // namespace polar

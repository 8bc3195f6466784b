#include "polar/construct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "polar/asymptotics.hpp"
#include "polar/error.hpp"
#include "polar/report.hpp"

namespace polar {

const char* to_string(SelectionRule r) {
  switch (r) {
    case SelectionRule::Polar: return "polar";
    case SelectionRule::ReedMuller: return "rm";
    case SelectionRule::Hybrid: return "hybrid";
    case SelectionRule::HybridRecursive: return "hybrid-recursive";
  }
  return "unknown";
}

namespace {

std::uint64_t checked_level_size(int ell, int n) {
  const std::uint64_t size = level_size(ell, n);
  if (n < 0 || size == 0) {
    throw PolarError(ErrorCode::InvalidArgument, "block length ell^n does not fit in 64 bits");
  }
  return size;
}

}  // namespace

std::uint64_t SelectionSet::block_length() const { return checked_level_size(ell, n); }

bool SelectionSet::contains(std::uint64_t index) const {
  return std::binary_search(indices.begin(), indices.end(), index);
}

std::string SelectionSet::to_csv() const {
  std::string out = "index\n";
  for (auto i : indices) {
    out += std::to_string(i);
    out.push_back('\n');
  }
  return out;
}

std::uint64_t selection_size(int ell, int n, double rate) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw PolarError(ErrorCode::DomainError, "rate must lie in [0, 1]");
  }
  const std::uint64_t size = checked_level_size(ell, n);
  const double k = std::floor(static_cast<double>(size) * rate + 1e-9);
  return std::min<std::uint64_t>(size, static_cast<std::uint64_t>(k));
}

std::vector<int> index_digits(std::uint64_t index, int ell, int n) {
  const std::uint64_t size = checked_level_size(ell, n);
  if (index < 1 || index > size) {
    throw PolarError(ErrorCode::IndexOutOfRange, "index " + std::to_string(index) + " out of range");
  }
  std::vector<int> digits(static_cast<std::size_t>(n));
  std::uint64_t v = index - 1;
  for (int j = n - 1; j >= 0; --j) {
    digits[static_cast<std::size_t>(j)] = static_cast<int>(v % static_cast<std::uint64_t>(ell));
    v /= static_cast<std::uint64_t>(ell);
  }
  return digits;
}

std::uint64_t digit_reverse(std::uint64_t i, int ell, int n) {
  const auto digits = index_digits(i, ell, n);
  std::uint64_t j = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    j = j * static_cast<std::uint64_t>(ell) + static_cast<std::uint64_t>(*it);
  }
  return j + 1;
}

std::uint64_t row_weight_product(std::uint64_t index, const KernelProfile& profile, int n) {
  std::uint64_t w = 1;
  for (int d : index_digits(index, profile.ell(), n)) {
    w *= static_cast<std::uint64_t>(profile.row_weights[static_cast<std::size_t>(d)]);
  }
  return w;
}

namespace {

void require_rate(double rate) {
  if (!(rate > 0.0 && rate <= 1.0)) throw PolarError(ErrorCode::DomainError, "rate must lie in (0, 1]");
}

// Indices 1..N ordered by `less`, keeping the first k in ascending index order.
template <typename Less>
std::vector<std::uint64_t> top_k(std::uint64_t size, std::uint64_t k, Less less) {
  std::vector<std::uint64_t> order(size);
  std::iota(order.begin(), order.end(), std::uint64_t{1});
  if (k < size) {
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), less);
    order.resize(k);
  }
  std::sort(order.begin(), order.end());
  return order;
}

// sum_{j in [from, to)} log2 D_{b_j} for the digits of index-1. Summed per
// distinct digit so that equal digit multisets give bit-identical scores.
class SegmentScorer {
 public:
  SegmentScorer(const KernelProfile& profile, int n) : ell_(profile.ell()), n_(n) {
    for (int d : profile.partial_distances) log_d_.push_back(std::log2(static_cast<double>(d)));
  }

  double score(std::uint64_t index, int from, int to) const {
    std::vector<int> counts(static_cast<std::size_t>(ell_), 0);
    std::uint64_t v = index - 1;
    for (int j = n_ - 1; j >= 0; --j) {
      const int digit = static_cast<int>(v % static_cast<std::uint64_t>(ell_));
      v /= static_cast<std::uint64_t>(ell_);
      if (j >= from && j < to) ++counts[static_cast<std::size_t>(digit)];
    }
    double s = 0.0;
    for (int d = 0; d < ell_; ++d) s += counts[static_cast<std::size_t>(d)] * log_d_[static_cast<std::size_t>(d)];
    return s;
  }

 private:
  int ell_;
  int n_;
  std::vector<double> log_d_;
};

std::uint64_t prefix_of(std::uint64_t index, std::uint64_t suffix_size) { return (index - 1) / suffix_size + 1; }

struct EventSpec {
  int m0 = 0;
  std::vector<int> segments;  // breakpoints after m0 (C events between consecutive ones)
  double beta = 0.0;
  double epsilon_slack = 0.0;
  double t = 0.0;
  int h_start = 0;
};

SelectionSet select_by_events(const LevelCdf& prefix, const KernelProfile& profile, int n, double rate,
                              const EventSpec& spec, const LevelCdf* full_level) {
  require_rate(rate);
  const int ell = profile.ell();
  const int m = spec.m0;
  if (!prefix.exact()) throw PolarError(ErrorCode::RequiresExactCdf, "prefix level must be enumerated exactly");
  if (prefix.ell() != ell || prefix.n() != m) {
    throw PolarError(ErrorCode::MismatchedLevel, "prefix level does not match the prefix depth");
  }
  if (m < 0 || m > n || spec.h_start < m || spec.h_start > n) {
    throw PolarError(ErrorCode::InvalidArgument, "prefix depth must satisfy 0 <= m <= n");
  }
  if (m == n && full_level == nullptr) full_level = &prefix;
  if (full_level != nullptr) {
    if (!full_level->exact()) throw PolarError(ErrorCode::RequiresExactCdf, "padding level must be exact");
    if (full_level->n() != n || full_level->ell() != ell) {
      throw PolarError(ErrorCode::MismatchedLevel, "padding level does not match n");
    }
  }

  const std::uint64_t size = checked_level_size(ell, n);
  const std::uint64_t suffix_size = checked_level_size(ell, n - m);
  const std::uint64_t k = selection_size(ell, n, rate);
  const double log2_ell = std::log2(static_cast<double>(ell));
  const double e2 = profile.exponent * log2_ell;
  const double v2 = profile.second_exponent * log2_ell * log2_ell;
  const SegmentScorer scorer(profile, n);
  constexpr double kTol = 1e-9;

  // D_m(beta) per prefix.
  const double d_bits = std::exp2(spec.beta * m);
  std::vector<char> prefix_good(prefix.size());
  for (std::uint64_t p = 0; p < prefix.size(); ++p) prefix_good[p] = prefix.leaves()[p].neglog() > d_bits;

  const int h_len = n - spec.h_start;
  const double h_threshold = h_len * e2 + spec.t * std::sqrt(h_len * v2);
  std::vector<int> bounds{m};
  for (int b : spec.segments) bounds.push_back(b);

  std::vector<double> score(size);
  std::vector<char> in_events(size);
  for (std::uint64_t i = 1; i <= size; ++i) {
    score[i - 1] = scorer.score(i, m, n);
    bool ok = prefix_good[prefix_of(i, suffix_size) - 1] != 0;
    for (std::size_t s = 0; ok && s + 1 < bounds.size(); ++s) {
      const int len = bounds[s + 1] - bounds[s];
      ok = scorer.score(i, bounds[s], bounds[s + 1]) >= len * (e2 - spec.epsilon_slack) - kTol;
    }
    if (ok) ok = scorer.score(i, spec.h_start, n) >= h_threshold - kTol;
    in_events[i - 1] = ok;
  }

  auto prefix_z = [&](std::uint64_t i) -> const ExtendedUnitValue& {
    return prefix.leaves()[prefix_of(i, suffix_size) - 1];
  };
  // Overfull: largest suffix sum, then smallest prefix Z, then smallest index.
  auto event_less = [&](std::uint64_t a, std::uint64_t b) {
    if (score[a - 1] != score[b - 1]) return score[a - 1] > score[b - 1];
    const auto& za = prefix_z(a);
    const auto& zb = prefix_z(b);
    if (za < zb) return true;
    if (zb < za) return false;
    return a < b;
  };

  std::vector<std::uint64_t> members;
  for (std::uint64_t i = 1; i <= size; ++i) {
    if (in_events[i - 1]) members.push_back(i);
  }

  SelectionSet sel;
  sel.n = n;
  sel.ell = ell;
  sel.rate = rate;
  if (members.size() >= k) {
    std::nth_element(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(k), members.end(), event_less);
    members.resize(k);
    std::sort(members.begin(), members.end());
    sel.indices = std::move(members);
    return sel;
  }

  sel.shortfall = k - members.size();
  std::vector<std::uint64_t> rest;
  rest.reserve(size - members.size());
  for (std::uint64_t i = 1; i <= size; ++i) {
    if (!in_events[i - 1]) rest.push_back(i);
  }
  auto take = [&](auto less) {
    std::nth_element(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(sel.shortfall), rest.end(), less);
    rest.resize(sel.shortfall);
  };
  if (full_level != nullptr) {
    take([&](std::uint64_t a, std::uint64_t b) {
      const auto& za = full_level->leaves()[a - 1];
      const auto& zb = full_level->leaves()[b - 1];
      if (za < zb) return true;
      if (zb < za) return false;
      return a < b;
    });
  } else {
    take([&](std::uint64_t a, std::uint64_t b) {
      const auto& za = prefix_z(a);
      const auto& zb = prefix_z(b);
      if (za < zb) return true;
      if (zb < za) return false;
      if (score[a - 1] != score[b - 1]) return score[a - 1] > score[b - 1];
      return a < b;
    });
  }
  members.insert(members.end(), rest.begin(), rest.end());
  std::sort(members.begin(), members.end());
  sel.indices = std::move(members);
  return sel;
}

}  // namespace

SelectionSet polar_selection(const LevelCdf& cdf, double rate) {
  require_rate(rate);
  if (!cdf.exact()) throw PolarError(ErrorCode::RequiresExactCdf, "polar selection needs an exact level");
  const std::uint64_t k = selection_size(cdf.ell(), cdf.n(), rate);
  const auto& leaves = cdf.leaves();
  SelectionSet sel;
  sel.n = cdf.n();
  sel.ell = cdf.ell();
  sel.rate = rate;
  sel.rule = SelectionRule::Polar;
  sel.indices = top_k(cdf.size(), k, [&](std::uint64_t a, std::uint64_t b) {
    const auto& za = leaves[a - 1];
    const auto& zb = leaves[b - 1];
    if (za < zb) return true;
    if (zb < za) return false;
    return a < b;
  });
  return sel;
}

SelectionSet rm_selection(const BitMatrix& g, int n, double rate) {
  require_rate(rate);
  const KernelProfile profile = kernel_profile(g);
  const int ell = profile.ell();
  const std::uint64_t size = checked_level_size(ell, n);
  const std::uint64_t k = selection_size(ell, n, rate);
  // Products are bounded by ell^n, so they are exact.
  std::vector<std::uint64_t> weight(size);
  for (std::uint64_t i = 1; i <= size; ++i) weight[i - 1] = row_weight_product(i, profile, n);
  SelectionSet sel;
  sel.n = n;
  sel.ell = ell;
  sel.rate = rate;
  sel.rule = SelectionRule::ReedMuller;
  sel.indices = top_k(size, k, [&](std::uint64_t a, std::uint64_t b) {
    if (weight[a - 1] != weight[b - 1]) return weight[a - 1] > weight[b - 1];
    return a < b;
  });
  return sel;
}

int default_prefix_depth(int n, double beta, const KernelProfile& profile) {
  if (!(beta > 0.0)) throw PolarError(ErrorCode::DomainError, "beta must be positive");
  const double lhs = std::log2(static_cast<double>(std::max(n, 1))) + std::log2(std::log2(profile.c3_constant));
  const double m = std::ceil(lhs / beta);
  return static_cast<int>(std::clamp(m, 0.0, static_cast<double>(n)));
}

SelectionSet hybrid_selection(const LevelCdf& prefix, const KernelProfile& profile, int n, double rate,
                              double beta, double t, const LevelCdf* full_level) {
  EventSpec spec;
  spec.m0 = prefix.n();
  spec.beta = beta;
  spec.t = t;
  spec.h_start = spec.m0;
  SelectionSet sel = select_by_events(prefix, profile, n, rate, spec, full_level);
  sel.rule = SelectionRule::Hybrid;
  sel.parameters = {{"m", static_cast<double>(spec.m0)}, {"beta", beta}, {"t", t}};
  return sel;
}

SelectionSet hybrid_selection_recursive(const LevelCdf& prefix, const KernelProfile& profile, int n, double rate,
                                        const std::vector<int>& schedule, double beta, double epsilon_slack,
                                        double t, const LevelCdf* full_level) {
  if (schedule.empty() || schedule.back() >= n ||
      std::adjacent_find(schedule.begin(), schedule.end(), std::greater_equal<int>()) != schedule.end()) {
    throw PolarError(ErrorCode::InvalidArgument, "schedule must be strictly increasing and end below n");
  }
  if (schedule.front() != prefix.n()) {
    throw PolarError(ErrorCode::MismatchedLevel, "prefix level depth must equal the first breakpoint");
  }
  EventSpec spec;
  spec.m0 = schedule.front();
  spec.segments.assign(schedule.begin() + 1, schedule.end());
  spec.beta = beta;
  spec.epsilon_slack = epsilon_slack;
  spec.t = t;
  spec.h_start = schedule.back();
  SelectionSet sel = select_by_events(prefix, profile, n, rate, spec, full_level);
  sel.rule = SelectionRule::HybridRecursive;
  sel.parameters = {{"beta", beta}, {"epsilon", epsilon_slack}, {"t", t}};
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    sel.parameters.emplace_back("m" + std::to_string(i), schedule[i]);
  }
  return sel;
}

std::optional<ExtendedUnitValue> SelectionBounds::union_bound() const {
  if (!(union_neglog > 0.0)) return std::nullopt;
  return ExtendedUnitValue::from_neglog(union_neglog);
}

SelectionBounds selection_bounds(const SelectionSet& sel, const LevelCdf& cdf, const KernelProfile& profile,
                                 double root_z) {
  if (!cdf.exact()) throw PolarError(ErrorCode::RequiresExactCdf, "bounds need an exact level");
  if (cdf.n() != sel.n || cdf.ell() != sel.ell || profile.ell() != sel.ell) {
    throw PolarError(ErrorCode::MismatchedLevel, "selection and level differ in n or ell");
  }
  if (sel.indices.empty()) throw PolarError(ErrorCode::InvalidArgument, "empty selection");

  SelectionBounds b;
  double lambda_min = std::numeric_limits<double>::infinity();
  std::uint64_t worst = sel.indices.front();
  std::uint64_t dmin = std::numeric_limits<std::uint64_t>::max();
  for (auto i : sel.indices) {
    const double lambda = cdf.channel(i).neglog();
    if (lambda < lambda_min) {
      lambda_min = lambda;
      worst = i;
    }
    dmin = std::min(dmin, row_weight_product(i, profile, sel.n));
  }
  // Neumaier summation of 2^{lambda_min - lambda_i}, all terms in (0, 1].
  double sum = 0.0;
  double carry = 0.0;
  for (auto i : sel.indices) {
    const double term = std::exp2(lambda_min - cdf.channel(i).neglog());
    const double s = sum + term;
    carry += std::fabs(sum) >= term ? (sum - s) + term : (term - s) + sum;
    sum = s;
  }
  b.union_neglog = lambda_min - std::log2(sum + carry);

  // (1 - sqrt(1 - Z^2)) / 2 = Z^2 / (2 (1 + sqrt((1 - Z)(1 + Z)))).
  const auto p = cdf.channel(worst).parts();
  b.sc_lower = ExtendedUnitValue::from_neglog(2.0 * p.lambda + 1.0 + std::log2(1.0 + std::sqrt(p.delta * (1.0 + p.z))));

  b.dmin_upper = dmin;
  const double root_lambda = ExtendedUnitValue::from_linear(root_z).neglog();
  b.map_lower = ExtendedUnitValue::from_neglog(2.0 * static_cast<double>(dmin) * root_lambda + 2.0);
  return b;
}

double overlap_fraction(const SelectionSet& a, const SelectionSet& b) {
  if (a.n != b.n || a.ell != b.ell) throw PolarError(ErrorCode::MismatchedLevel, "selections differ in n or ell");
  std::uint64_t common = 0;
  auto ia = a.indices.begin();
  auto ib = b.indices.begin();
  while (ia != a.indices.end() && ib != b.indices.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(common) / static_cast<double>(a.block_length());
}

bool check_min_weight_row(const SelectionSet& sel, const KernelProfile& profile, int n, double rate,
                          double channel_I, double epsilon_slack) {
  if (!(rate > 0.0 && rate < channel_I && channel_I <= 1.0)) {
    throw PolarError(ErrorCode::DomainError, "need 0 < rate < I(W) <= 1");
  }
  if (std::isinf(epsilon_slack) && epsilon_slack > 0) return !sel.indices.empty();
  const double rhs = n * profile.weight_exponent +
                     std::sqrt(n * profile.weight_second_exponent) * (q_inverse(rate / channel_I) + epsilon_slack);
  const double log2_ell = std::log2(static_cast<double>(profile.ell()));
  for (auto i : sel.indices) {
    double s = 0.0;
    for (int d : index_digits(i, profile.ell(), n)) {
      s += std::log2(static_cast<double>(profile.row_weights[static_cast<std::size_t>(d)]));
    }
    if (s / log2_ell <= rhs + 1e-12) return true;
  }
  return false;
}

namespace {

void write_extended(JsonWriter& w, const ExtendedUnitValue& x, int ell) {
  w.begin_object();
  w.key("mode").value(to_string(x.mode()));
  w.key("payload").value(x.payload());
  w.key("loglog").value(x.loglog(ell));
  w.end_object();
}

}  // namespace

std::string selection_metadata_json(const SelectionSet& sel, const SelectionBounds* bounds) {
  JsonWriter w;
  w.begin_object();
  w.key("rule").value(to_string(sel.rule));
  w.key("n").value(sel.n);
  w.key("ell").value(sel.ell);
  w.key("rate").value(sel.rate);
  w.key("size").value(static_cast<std::uint64_t>(sel.indices.size()));
  w.key("shortfall").value(sel.shortfall);
  w.key("parameters").begin_object();
  for (const auto& [name, value] : sel.parameters) w.key(name).value(value);
  w.end_object();
  if (bounds != nullptr) {
    w.key("bounds").begin_object();
    w.key("union_bound");
    if (auto u = bounds->union_bound()) {
      write_extended(w, *u, sel.ell);
    } else {
      w.null();
    }
    w.key("sc_lower");
    write_extended(w, bounds->sc_lower, sel.ell);
    w.key("dmin_upper").value(bounds->dmin_upper);
    w.key("map_lower");
    write_extended(w, bounds->map_lower, sel.ell);
    w.end_object();
  }
  w.end_object();
  return w.str();
}

}  // namespace polar

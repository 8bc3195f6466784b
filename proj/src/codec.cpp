#include "polar/codec.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "polar/error.hpp"
#include "polar/level.hpp"
#include "polar/rng.hpp"

namespace polar {

namespace {

constexpr int kMaskTableMaxEll = 12;
constexpr double kWilsonZ = 1.959963984540054;

int compute_mask(const BitMatrix& g, int a, std::uint32_t known) {
  const int ell = g.size();
  std::uint32_t pivot_vec[32] = {};
  std::uint32_t pivot_comb[32] = {};
  auto reduce = [&](std::uint32_t& v, std::uint32_t& comb) {
    for (int b = ell - 1; b >= 0; --b) {
      if (((v >> b) & 1u) && pivot_vec[b] != 0) {
        v ^= pivot_vec[b];
        comb ^= pivot_comb[b];
      }
    }
  };
  for (int k = 0; k < ell; ++k) {
    if (!((known >> k) & 1u)) continue;
    std::uint32_t v = 0;
    for (int i = a; i < ell; ++i) v |= static_cast<std::uint32_t>(g.at(i, k)) << i;
    std::uint32_t comb = 1u << k;
    reduce(v, comb);
    if (v == 0) continue;
    const int b = std::bit_width(v) - 1;
    pivot_vec[b] = v;
    pivot_comb[b] = comb;
  }
  std::uint32_t target = 1u << a;
  std::uint32_t comb = 0;
  reduce(target, comb);
  return target == 0 ? static_cast<int>(comb) : -1;
}

std::vector<std::uint64_t> reversal_table(int ell, int n, std::uint64_t size) {
  std::vector<std::uint64_t> rev(size);
  for (std::uint64_t m = 0; m < size; ++m) {
    std::uint64_t v = m;
    std::uint64_t r = 0;
    for (int j = 0; j < n; ++j) {
      r = r * static_cast<std::uint64_t>(ell) + v % static_cast<std::uint64_t>(ell);
      v /= static_cast<std::uint64_t>(ell);
    }
    rev[m] = r;
  }
  return rev;
}

// In place: buf <- buf G^{(x)n} in natural row order.
void kronecker_transform(std::vector<std::uint8_t>& buf, const BitMatrix& g) {
  const std::uint64_t ell = static_cast<std::uint64_t>(g.size());
  const std::uint64_t size = buf.size();
  for (std::uint64_t stride = 1; stride < size; stride *= ell) {
    for (std::uint64_t base = 0; base < size; base += stride * ell) {
      for (std::uint64_t off = 0; off < stride; ++off) {
        std::uint32_t acc = 0;
        for (std::uint64_t a = 0; a < ell; ++a) {
          if (buf[base + a * stride + off]) acc ^= g.row(static_cast<int>(a));
        }
        for (std::uint64_t c = 0; c < ell; ++c) buf[base + c * stride + off] = (acc >> c) & 1u;
      }
    }
  }
}

}  // namespace

PolarCode::PolarCode(KernelProfile profile, int n, std::vector<std::uint64_t> info_indices)
    : profile_(std::move(profile)), n_(n), block_length_(level_size(profile_.ell(), n)), info_(std::move(info_indices)) {
  if (n < 0 || block_length_ == 0) throw PolarError(ErrorCode::InvalidArgument, "block length does not fit");
  std::sort(info_.begin(), info_.end());
  info_.erase(std::unique(info_.begin(), info_.end()), info_.end());
  frozen_.assign(block_length_, 1);
  for (auto i : info_) {
    if (i < 1 || i > block_length_) {
      throw PolarError(ErrorCode::IndexOutOfRange, "information index " + std::to_string(i) + " out of range");
    }
    frozen_[i - 1] = 0;
  }
  reversal_ = reversal_table(ell(), n_, block_length_);
  const int l = ell();
  if (l <= kMaskTableMaxEll) {
    masks_.resize(static_cast<std::size_t>(l) << l);
    for (int a = 0; a < l; ++a) {
      for (std::uint32_t known = 0; known < (1u << l); ++known) {
        masks_[(static_cast<std::size_t>(a) << l) | known] = compute_mask(profile_.kernel, a, known);
      }
    }
  }
}

int PolarCode::solve_mask(int a, std::uint32_t known) const {
  if (!masks_.empty()) return masks_[(static_cast<std::size_t>(a) << ell()) | known];
  return compute_mask(profile_.kernel, a, known);
}

PolarCode make_polar_code(const KernelProfile& profile, const SelectionSet& sel) {
  if (sel.ell != profile.ell()) throw PolarError(ErrorCode::MismatchedLevel, "selection built for another ell");
  return PolarCode(profile, sel.n, sel.indices);
}

Bits encode(const Bits& u, const PolarCode& code) {
  if (u.size() != code.block_length()) throw PolarError(ErrorCode::InvalidArgument, "message length mismatch");
  for (std::uint64_t m = 0; m < u.size(); ++m) {
    if (u[m] != 0 && code.frozen_flags()[m]) {
      throw PolarError(ErrorCode::FrozenBitNonzero, "frozen channel " + std::to_string(m + 1) + " carries a one");
    }
  }
  Bits natural(u.begin(), u.end());
  for (auto& b : natural) b &= 1u;
  kronecker_transform(natural, code.profile().kernel);
  Bits x(natural.size());
  const auto& rev = code.reversal();
  for (std::uint64_t m = 0; m < x.size(); ++m) x[rev[m]] = natural[m];
  return x;
}

std::uint64_t ErasureWord::erasures() const {
  return static_cast<std::uint64_t>(std::count(symbols.begin(), symbols.end(), kErased));
}

ErasureWord transmit_bec(const Bits& x, double eps, std::uint64_t seed) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw PolarError(ErrorCode::DomainError, "eps must lie in [0, 1]");
  RandomStream rng(seed);
  ErasureWord y;
  y.symbols.resize(x.size());
  for (std::size_t m = 0; m < x.size(); ++m) {
    y.symbols[m] = rng.uniform01() < eps ? ErasureWord::kErased : static_cast<std::uint8_t>(x[m] & 1u);
  }
  return y;
}

namespace {

// Recursive SC on the natural-order code u G^{(x)n}. Level `depth` holds
// blocks of ell^(n - depth) symbols.
class ScDecoder {
 public:
  explicit ScDecoder(const PolarCode& code) : code_(code), ell_(static_cast<std::uint64_t>(code.ell())) {
    const int n = code.n();
    obs_.resize(static_cast<std::size_t>(n) + 1);
    word_.resize(static_cast<std::size_t>(n) + 1);
    parts_.resize(static_cast<std::size_t>(n) + 1);
    std::uint64_t len = code.block_length();
    for (int d = 0; d <= n; ++d) {
      obs_[static_cast<std::size_t>(d)].resize(len);
      word_[static_cast<std::size_t>(d)].resize(len);
      parts_[static_cast<std::size_t>(d)].resize(len);
      len /= ell_;
    }
    info_prefix_.assign(code.block_length() + 1, 0);
    for (std::uint64_t m = 0; m < code.block_length(); ++m) {
      info_prefix_[m + 1] = info_prefix_[m] + (code.frozen_flags()[m] ? 0 : 1);
    }
  }

  ScResult run(const ErasureWord& y) {
    if (y.symbols.size() != code_.block_length()) throw PolarError(ErrorCode::InvalidArgument, "word length mismatch");
    const auto& rev = code_.reversal();
    auto& top = obs_[0];
    for (std::uint64_t m = 0; m < top.size(); ++m) top[m] = y.symbols[rev[m]];
    result_ = ScResult{};
    result_.u.assign(code_.block_length(), 0);
    result_.success = node(0, 0);
    if (!result_.success) result_.u.clear();
    return result_;
  }

 private:
  bool node(std::size_t depth, std::uint64_t offset) {
    auto& obs = obs_[depth];
    auto& word = word_[depth];
    const std::uint64_t size = obs.size();
    if (info_prefix_[offset + size] == info_prefix_[offset]) {
      std::fill(word.begin(), word.end(), 0);
      return true;
    }
    if (size == 1) {
      if (obs[0] == ErasureWord::kErased) {
        result_.undetermined = offset + 1;
        return false;
      }
      word[0] = obs[0];
      result_.u[offset] = obs[0];
      return true;
    }
    const std::uint64_t sub = size / ell_;
    auto& parts = parts_[depth];
    auto& child = obs_[depth + 1];
    const BitMatrix& g = code_.profile().kernel;
    for (std::uint64_t a = 0; a < ell_; ++a) {
      for (std::uint64_t d = 0; d < sub; ++d) {
        std::uint32_t known = 0;
        for (std::uint64_t c = 0; c < ell_; ++c) {
          if (obs[c * sub + d] != ErasureWord::kErased) known |= 1u << c;
        }
        const int mask = code_.solve_mask(static_cast<int>(a), known);
        if (mask < 0) {
          child[d] = ErasureWord::kErased;
          continue;
        }
        std::uint32_t bit = 0;
        for (std::uint64_t c = 0; c < ell_; ++c) {
          if ((mask >> c) & 1) bit ^= obs[c * sub + d];
        }
        for (std::uint64_t i = 0; i < a; ++i) {
          if (parts[i * sub + d]) bit ^= std::popcount(g.row(static_cast<int>(i)) & static_cast<std::uint32_t>(mask)) & 1;
        }
        child[d] = static_cast<std::uint8_t>(bit);
      }
      if (!node(depth + 1, offset + a * sub)) return false;
      std::copy_n(word_[depth + 1].begin(), sub, parts.begin() + static_cast<std::ptrdiff_t>(a * sub));
    }
    for (std::uint64_t d = 0; d < sub; ++d) {
      std::uint32_t acc = 0;
      for (std::uint64_t a = 0; a < ell_; ++a) {
        if (parts[a * sub + d]) acc ^= g.row(static_cast<int>(a));
      }
      for (std::uint64_t c = 0; c < ell_; ++c) word[c * sub + d] = (acc >> c) & 1u;
    }
    return true;
  }

  const PolarCode& code_;
  std::uint64_t ell_;
  std::vector<std::vector<std::uint8_t>> obs_;
  std::vector<std::vector<std::uint8_t>> word_;
  std::vector<std::vector<std::uint8_t>> parts_;
  std::vector<std::uint64_t> info_prefix_;
  ScResult result_;
};

}  // namespace

ScResult sc_decode_bec(const ErasureWord& y, const PolarCode& code) {
  ScDecoder decoder(code);
  return decoder.run(y);
}

MapDecoder::MapDecoder(const PolarCode& code)
    : k_(code.dimension()), words_((code.dimension() + 63) / 64) {
  const std::uint64_t size = code.block_length();
  if (static_cast<double>(size) * static_cast<double>(words_) * 64.0 > static_cast<double>(1ull << 31)) {
    throw PolarError(ErrorCode::BudgetExceeded, "generator too large for the MAP rank test");
  }
  columns_.assign(size * words_, 0);
  Bits u(size, 0);
  for (std::uint64_t j = 0; j < k_; ++j) {
    const std::uint64_t idx = code.info_indices()[j];
    u[idx - 1] = 1;
    const Bits row = encode(u, code);
    u[idx - 1] = 0;
    for (std::uint64_t m = 0; m < size; ++m) {
      if (row[m]) columns_[m * words_ + j / 64] |= std::uint64_t{1} << (j % 64);
    }
  }
}

bool MapDecoder::unique(const ErasureWord& y) const {
  if (k_ == 0) return true;
  std::vector<std::uint64_t> basis(k_ * words_, 0);
  std::vector<std::uint8_t> has(k_, 0);
  std::vector<std::uint64_t> v(words_);
  std::uint64_t rank = 0;
  const std::uint64_t size = y.symbols.size();
  for (std::uint64_t m = 0; m < size; ++m) {
    if (y.symbols[m] == ErasureWord::kErased) continue;
    std::copy_n(columns_.begin() + static_cast<std::ptrdiff_t>(m * words_), words_, v.begin());
    bool inserted = false;
    for (std::size_t w = 0; w < words_ && !inserted; ++w) {
      while (v[w] != 0) {
        const std::uint64_t bit = w * 64 + static_cast<std::uint64_t>(std::countr_zero(v[w]));
        std::uint64_t* row = &basis[bit * words_];
        if (!has[bit]) {
          std::copy(v.begin(), v.end(), row);
          has[bit] = 1;
          inserted = true;
          break;
        }
        for (std::size_t x = w; x < words_; ++x) v[x] ^= row[x];
      }
    }
    if (inserted && ++rank == k_) return true;
  }
  return false;
}

MapOutcome map_decode_bec(const ErasureWord& y, const PolarCode& code) {
  return MapDecoder(code).unique(y) ? MapOutcome::Unique : MapOutcome::Ambiguous;
}

double SimulationReport::sc_rate() const {
  return trials == 0 ? 0.0 : static_cast<double>(sc_errors) / static_cast<double>(trials);
}

double SimulationReport::map_rate() const {
  return trials == 0 ? 0.0 : static_cast<double>(map_errors) / static_cast<double>(trials);
}

std::string SimulationReport::csv_header() {
  return "eps,n,rate,trials,sc_errors,map_errors,sc_rate,map_rate,sc_wilson_lo,sc_wilson_hi,map_wilson_lo,"
         "map_wilson_hi,dominance_violations";
}

std::string SimulationReport::csv_row() const {
  std::string row;
  for (const std::string& f :
       {format_real(eps), std::to_string(n), format_real(rate), std::to_string(trials), std::to_string(sc_errors),
        std::to_string(map_errors), format_real(sc_rate()), format_real(map_rate()), format_real(sc_wilson.lo),
        format_real(sc_wilson.hi), format_real(map_wilson.lo), format_real(map_wilson.hi),
        std::to_string(dominance_violations)}) {
    if (!row.empty()) row.push_back(',');
    row += f;
  }
  return row;
}

SimulationReport simulate(const PolarCode& code, double eps, std::uint64_t trials, std::uint64_t seed,
                          unsigned threads) {
  if (trials == 0) throw PolarError(ErrorCode::InvalidArgument, "trials must be positive");
  if (!(eps >= 0.0 && eps <= 1.0)) throw PolarError(ErrorCode::DomainError, "eps must lie in [0, 1]");
  const MapDecoder map(code);
  // Bit 0: SC failure, bit 1: MAP failure, bit 2: SC miscorrection.
  std::vector<std::uint8_t> outcome(trials, 0);
  parallel_for(
      trials, threads,
      [&](std::uint64_t begin, std::uint64_t end) {
        ScDecoder sc(code);
        Bits u(code.block_length(), 0);
        for (std::uint64_t t = begin; t < end; ++t) {
          RandomStream rng(stream_seed(seed, t));
          for (auto i : code.info_indices()) u[i - 1] = static_cast<std::uint8_t>(rng.next() & 1u);
          const ErasureWord y = transmit_bec(encode(u, code), eps, rng.next());
          const ScResult r = sc.run(y);
          std::uint8_t flags = 0;
          if (!r.success) flags |= 1;
          if (r.success && r.u != u) flags |= 4;
          if (!map.unique(y)) flags |= 2;
          outcome[t] = flags;
        }
      },
      64);

  SimulationReport rep;
  rep.eps = eps;
  rep.n = code.n();
  rep.rate = static_cast<double>(code.dimension()) / static_cast<double>(code.block_length());
  rep.trials = trials;
  rep.seed = seed;
  for (auto f : outcome) {
    rep.sc_errors += f & 1;
    rep.map_errors += (f >> 1) & 1;
    rep.dominance_violations += ((f & 3) == 2) ? 1 : 0;
    rep.sc_miscorrections += (f >> 2) & 1;
  }
  rep.sc_wilson = wilson_interval(rep.sc_errors, trials, kWilsonZ);
  rep.map_wilson = wilson_interval(rep.map_errors, trials, kWilsonZ);
  return rep;
}

}  // namespace polar

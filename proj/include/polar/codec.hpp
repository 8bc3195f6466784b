#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polar/construct.hpp"
#include "polar/kernel.hpp"
#include "polar/report.hpp"

namespace polar {

/// Polar code over G^{(x)n}. Message vectors u are indexed by channel index
/// (u[i-1] feeds channel i); channel i drives row digit_reverse(i) of the
/// generator.
class PolarCode {
 public:
  PolarCode(KernelProfile profile, int n, std::vector<std::uint64_t> info_indices);

  const KernelProfile& profile() const noexcept { return profile_; }
  int n() const noexcept { return n_; }
  int ell() const noexcept { return profile_.ell(); }
  std::uint64_t block_length() const noexcept { return block_length_; }
  /// Ascending 1-based channel indices carrying information.
  const std::vector<std::uint64_t>& info_indices() const noexcept { return info_; }
  bool frozen(std::uint64_t index) const { return frozen_.at(index - 1) != 0; }
  const std::vector<std::uint8_t>& frozen_flags() const noexcept { return frozen_; }
  /// reversal()[m] = digit_reverse(m + 1) - 1.
  const std::vector<std::uint64_t>& reversal() const noexcept { return reversal_; }
  std::uint64_t dimension() const noexcept { return info_.size(); }

  /// Input combination that isolates branch `a` from the known outputs
  /// `known` (bitmask) given branches < a, or -1 when branch a stays erased.
  int solve_mask(int a, std::uint32_t known) const;

 private:
  KernelProfile profile_;
  int n_;
  std::uint64_t block_length_;
  std::vector<std::uint64_t> info_;
  std::vector<std::uint8_t> frozen_;
  std::vector<std::uint64_t> reversal_;
  std::vector<std::int32_t> masks_;  // [a << ell | known], empty for large ell
};

PolarCode make_polar_code(const KernelProfile& profile, const SelectionSet& sel);

using Bits = std::vector<std::uint8_t>;

/// x = u G^{(x)n} with the digit-reversed row mapping. Throws
/// FrozenBitNonzero if a frozen position of u is set, InvalidArgument on
/// length mismatch.
Bits encode(const Bits& u, const PolarCode& code);

struct ErasureWord {
  static constexpr std::uint8_t kErased = 2;
  std::vector<std::uint8_t> symbols;  // 0, 1 or kErased

  std::uint64_t erasures() const;
};

/// Each symbol erased independently with probability eps, drawn from
/// RandomStream(seed).
ErasureWord transmit_bec(const Bits& x, double eps, std::uint64_t seed);

struct ScResult {
  bool success = false;
  Bits u;  // valid when success
  /// First information channel the decoder could not determine (0 if none).
  std::uint64_t undetermined = 0;
};

/// Successive cancellation over the BEC; stops at the first undetermined
/// information bit.
ScResult sc_decode_bec(const ErasureWord& y, const PolarCode& code);

/// Rank test for MAP decoding over the BEC. Holds the information rows of
/// the generator column by column.
class MapDecoder {
 public:
  explicit MapDecoder(const PolarCode& code);
  /// True when the transmitted codeword is the only one consistent with y.
  bool unique(const ErasureWord& y) const;

 private:
  std::uint64_t k_;
  std::size_t words_;
  std::vector<std::uint64_t> columns_;  // block_length x words_
};

enum class MapOutcome { Unique, Ambiguous };
MapOutcome map_decode_bec(const ErasureWord& y, const PolarCode& code);

struct SimulationReport {
  double eps = 0.0;
  int n = 0;
  double rate = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t sc_errors = 0;
  std::uint64_t map_errors = 0;
  /// Trials where MAP failed but SC succeeded.
  std::uint64_t dominance_violations = 0;
  /// SC claimed success with a wrong message.
  std::uint64_t sc_miscorrections = 0;
  Interval sc_wilson;
  Interval map_wilson;

  double sc_rate() const;
  double map_rate() const;
  static std::string csv_header();
  std::string csv_row() const;
};

/// Trial k draws its message and erasures from stream_seed(seed, k).
SimulationReport simulate(const PolarCode& code, double eps, std::uint64_t trials, std::uint64_t seed,
                          unsigned threads = 0);

}  // namespace polar

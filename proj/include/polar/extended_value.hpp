#pragma once

#include <compare>
#include <string>

namespace polar {

enum class ValueMode { Linear, NegLog, CompLog };

const char* to_string(ValueMode mode);

/// A number z in (0,1) that stays representable far below 2^-1074 and far
/// above 1 - 2^-53.
///
///   Linear   payload = z              for z in [2^-40, 1 - 2^-40]
///   NegLog   payload = -log2(z)       when that exceeds 40
///   CompLog  payload = -log2(1 - z)   when that exceeds 40
///
/// Construction always normalizes into the mode the value belongs to, so the
/// mode alone orders values coarsely (NegLog < Linear < CompLog). Linear
/// values also carry 1 - z so that complement() is exact.
class ExtendedUnitValue {
 public:
  static constexpr double kSwitchBits = 40.0;

  /// Throws DomainError unless 0 < z < 1.
  static ExtendedUnitValue from_linear(double z);
  /// z = 2^-lambda for lambda > 0.
  static ExtendedUnitValue from_neglog(double lambda);
  /// z = 1 - 2^-mu for mu > 0.
  static ExtendedUnitValue from_complog(double mu);
  /// Both coordinates of the same value, each accurate on its own side.
  static ExtendedUnitValue from_logs(double lambda, double mu);

  ValueMode mode() const noexcept { return mode_; }
  double payload() const noexcept { return payload_; }

  double value() const;       // may underflow to 0 or round to 1
  double complement_value() const;  // 1 - z
  double neglog() const;      // -log2 z
  double complog() const;     // -log2(1 - z)
  /// log_base(-log2 z); the double-exponent coordinate of the value.
  double loglog(int base) const;

  ExtendedUnitValue complement() const;

  struct Parts {
    double z;
    double delta;   // 1 - z
    double lambda;  // -log2 z
    double mu;      // -log2(1 - z)
  };
  Parts parts() const;

  std::partial_ordering operator<=>(const ExtendedUnitValue& rhs) const;
  bool operator==(const ExtendedUnitValue& rhs) const;

  std::string to_string() const;

 private:
  ExtendedUnitValue(ValueMode mode, double payload, double comp)
      : mode_(mode), payload_(payload), comp_(comp) {}

  ValueMode mode_ = ValueMode::Linear;
  double payload_ = 0.5;
  double comp_ = 0.5;  // 1 - z, Linear mode only
};

}  // namespace polar

#include "polar/extended_value.hpp"

#include <cmath>
#include <numbers>

#include "polar/error.hpp"
#include "polar/report.hpp"

namespace polar {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// -log2(1 - 2^-x), accurate for every x > 0.
double other_side(double x) {
  if (std::isinf(x)) return 0.0;
  if (x >= 1.0) return -std::log1p(-std::exp2(-x)) / kLn2;
  return -std::log2(-std::expm1(-x * kLn2));
}

int region(ValueMode m) {
  switch (m) {
    case ValueMode::NegLog: return 0;
    case ValueMode::Linear: return 1;
    case ValueMode::CompLog: return 2;
  }
  return 1;
}

}  // namespace

const char* to_string(ValueMode mode) {
  switch (mode) {
    case ValueMode::Linear: return "LINEAR";
    case ValueMode::NegLog: return "NEGLOG";
    case ValueMode::CompLog: return "COMPLOG";
  }
  return "?";
}

ExtendedUnitValue ExtendedUnitValue::from_linear(double z) {
  if (!(z > 0.0 && z < 1.0)) {
    throw PolarError(ErrorCode::DomainError, "value " + format_real(z) + " outside (0,1)");
  }
  const double lambda = -std::log2(z);
  if (lambda > kSwitchBits) return ExtendedUnitValue(ValueMode::NegLog, lambda, 0.0);
  // 1 - z is exact for z >= 1/2.
  const double delta = 1.0 - z;
  const double mu = -std::log2(delta);
  if (mu > kSwitchBits) return ExtendedUnitValue(ValueMode::CompLog, mu, 0.0);
  return ExtendedUnitValue(ValueMode::Linear, z, delta);
}

ExtendedUnitValue ExtendedUnitValue::from_neglog(double lambda) {
  if (!(lambda > 0.0)) {
    throw PolarError(ErrorCode::DomainError, "neglog payload must be positive");
  }
  return from_logs(lambda, other_side(lambda));
}

ExtendedUnitValue ExtendedUnitValue::from_complog(double mu) {
  if (!(mu > 0.0)) {
    throw PolarError(ErrorCode::DomainError, "complog payload must be positive");
  }
  return from_logs(other_side(mu), mu);
}

ExtendedUnitValue ExtendedUnitValue::from_logs(double lambda, double mu) {
  if (std::isnan(lambda) || std::isnan(mu)) {
    throw PolarError(ErrorCode::DomainError, "NaN log coordinate");
  }
  if (lambda > kSwitchBits) return ExtendedUnitValue(ValueMode::NegLog, lambda, 0.0);
  if (mu > kSwitchBits) return ExtendedUnitValue(ValueMode::CompLog, mu, 0.0);
  // Both coordinates are moderate here, so each side is recovered directly.
  const double z = std::exp2(-std::max(lambda, 0.0));
  const double delta = std::exp2(-std::max(mu, 0.0));
  return ExtendedUnitValue(ValueMode::Linear, z, delta);
}

ExtendedUnitValue::Parts ExtendedUnitValue::parts() const {
  switch (mode_) {
    case ValueMode::Linear:
      return {payload_, comp_, -std::log2(payload_), -std::log2(comp_)};
    case ValueMode::NegLog: {
      const double z = std::exp2(-payload_);
      return {z, -std::expm1(-payload_ * kLn2), payload_, -std::log1p(-z) / kLn2};
    }
    case ValueMode::CompLog: {
      const double d = std::exp2(-payload_);
      return {-std::expm1(-payload_ * kLn2), d, -std::log1p(-d) / kLn2, payload_};
    }
  }
  return {};
}

double ExtendedUnitValue::value() const { return parts().z; }
double ExtendedUnitValue::complement_value() const { return parts().delta; }
double ExtendedUnitValue::neglog() const { return parts().lambda; }
double ExtendedUnitValue::complog() const { return parts().mu; }

double ExtendedUnitValue::loglog(int base) const {
  return std::log(neglog()) / std::log(static_cast<double>(base));
}

ExtendedUnitValue ExtendedUnitValue::complement() const {
  switch (mode_) {
    case ValueMode::Linear: return ExtendedUnitValue(ValueMode::Linear, comp_, payload_);
    case ValueMode::NegLog: return ExtendedUnitValue(ValueMode::CompLog, payload_, 0.0);
    case ValueMode::CompLog: return ExtendedUnitValue(ValueMode::NegLog, payload_, 0.0);
  }
  return *this;
}

std::partial_ordering ExtendedUnitValue::operator<=>(const ExtendedUnitValue& rhs) const {
  const int a = region(mode_);
  const int b = region(rhs.mode_);
  if (a != b) return a <=> b;
  switch (mode_) {
    case ValueMode::NegLog: return rhs.payload_ <=> payload_;
    case ValueMode::CompLog: return payload_ <=> rhs.payload_;
    case ValueMode::Linear:
      // Compare on whichever side is stored without cancellation.
      if (payload_ > 0.5 && rhs.payload_ > 0.5) return rhs.comp_ <=> comp_;
      return payload_ <=> rhs.payload_;
  }
  return std::partial_ordering::unordered;
}

bool ExtendedUnitValue::operator==(const ExtendedUnitValue& rhs) const {
  return (*this <=> rhs) == std::partial_ordering::equivalent;
}

std::string ExtendedUnitValue::to_string() const {
  return std::string(polar::to_string(mode_)) + ":" + format_real(payload_);
}

}  // namespace polar

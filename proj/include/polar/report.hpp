#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace polar {

/// Formats a real with 17 significant digits ("nan", "inf", "-inf" for
/// non-finite values).
std::string format_real(double x);

/// Minimal streaming JSON emitter. Reals go through format_real so exported
/// files are byte-stable across runs.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);

  JsonWriter& value(double x);
  JsonWriter& value(int x);
  JsonWriter& value(std::int64_t x);
  JsonWriter& value(std::uint64_t x);
  JsonWriter& value(bool x);
  JsonWriter& value(std::string_view s);
  JsonWriter& value(const char* s) { return value(std::string_view(s)); }
  JsonWriter& value(const std::vector<int>& xs);
  JsonWriter& value(const std::vector<double>& xs);
  JsonWriter& null();

  const std::string& str() const noexcept { return out_; }

 private:
  void separate();

  std::string out_;
  std::vector<bool> first_;
  bool after_key_ = false;
};

/// Wilson score interval for a binomial proportion.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z);

}  // namespace polar

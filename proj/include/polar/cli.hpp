#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace polar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalidKernel = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitBadConfig = 4;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every key accepted by the config file; each is also a --flag.
const std::vector<std::string>& config_keys();

/// Flat "key = value" experiment description. '#' starts a comment.
struct ExperimentConfig {
  std::map<std::string, std::string> values;

  /// Throws ConfigError on malformed lines, unknown or repeated keys.
  static ExperimentConfig parse(std::string_view text);
  /// Canonical text form; parse(to_text()) reproduces the config.
  std::string to_text() const;
  std::optional<std::string> get(const std::string& key) const;
};

/// Runs one subcommand. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polar::cli

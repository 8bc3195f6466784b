#include "polar/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "polar/asymptotics.hpp"
#include "polar/codec.hpp"
#include "polar/construct.hpp"
#include "polar/erasure.hpp"
#include "polar/error.hpp"
#include "polar/kernel.hpp"
#include "polar/level.hpp"
#include "polar/report.hpp"

namespace polar::cli {

namespace {

const std::map<std::string, std::string>& defaults() {
  static const std::map<std::string, std::string> d = {
      {"kernel", "10;11"},
      {"eps", "0.5"},
      {"n", "10"},
      {"rate", "0.25"},
      {"t", "0"},
      {"seed", "1"},
      {"trials", "10000"},
      {"budget", std::to_string(kDefaultEnumerationBudget)},
      {"out", ""},
      {"paths", "100000"},
      {"method", "exact"},
      {"side", "good"},
      {"beta", "0.4"},
      {"f_a", "0"},
      {"f_b", "0"},
      {"rules", "polar,rm,hybrid"},
      {"rule", "polar"},
      {"rm_rate", "0.5"},
      {"m", ""},
      {"schedule", "2,4"},
      {"epsilon_slack", "0.5"},
      {"design_eps", ""},
      {"export", ""},
      {"threads", "0"},
  };
  return d;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [key, value] : defaults()) k.push_back(key);
    return k;
  }();
  return keys;
}

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  ExperimentConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!defaults().contains(key)) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (!cfg.values.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": repeated key '" + key + "'");
    }
  }
  return cfg;
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  for (const auto& [key, value] : values) out += key + " = " + value + "\n";
  return out;
}

std::optional<std::string> ExperimentConfig::get(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) return std::nullopt;
  return it->second;
}

namespace {

// Merged view: command line over config file over defaults.
class Params {
 public:
  Params(ExperimentConfig file, std::map<std::string, std::string> flags)
      : file_(std::move(file)), flags_(std::move(flags)) {}

  std::string str(const std::string& key) const {
    if (auto it = flags_.find(key); it != flags_.end()) return it->second;
    if (auto v = file_.get(key)) return *v;
    return defaults().at(key);
  }

  bool given(const std::string& key) const { return flags_.contains(key) || file_.values.contains(key); }

  double real(const std::string& key) const { return parse_real(key, str(key)); }

  long long integer(const std::string& key) const { return parse_integer(key, str(key)); }

  std::vector<double> reals(const std::string& key) const {
    std::vector<double> xs;
    for (const auto& item : split(key)) xs.push_back(parse_real(key, item));
    return xs;
  }

  std::vector<int> integers(const std::string& key) const {
    std::vector<int> xs;
    for (const auto& item : split(key)) xs.push_back(static_cast<int>(parse_integer(key, item)));
    return xs;
  }

  std::vector<std::string> split(const std::string& key) const {
    std::vector<std::string> items;
    std::string value = str(key);
    std::istringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) {
      item = trim(item);
      if (!item.empty()) items.push_back(item);
    }
    if (items.empty()) throw ConfigError("'" + key + "' is empty");
    return items;
  }

 private:
  static double parse_real(const std::string& key, const std::string& s) {
    try {
      std::size_t used = 0;
      const double x = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return x;
    } catch (const std::exception&) {
      throw ConfigError("'" + key + "' expects a number, got '" + s + "'");
    }
  }

  static long long parse_integer(const std::string& key, const std::string& s) {
    long long x = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError("'" + key + "' expects an integer, got '" + s + "'");
    }
    return x;
  }

  ExperimentConfig file_;
  std::map<std::string, std::string> flags_;
};

class KernelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Setup {
  KernelProfile profile;
  ErasurePolynomialSet polys;
};

Setup load_kernel(const Params& p) {
  try {
    const BitMatrix g = BitMatrix::parse(p.str("kernel"));
    return Setup{kernel_profile(g), split_erasure_polynomials(g)};
  } catch (const PolarError& e) {
    throw KernelError(e.what());
  }
}

double channel_eps(const Params& p, const std::string& key = "eps") {
  const double eps = p.real(key);
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("'" + key + "' must lie strictly between 0 and 1");
  return eps;
}

std::uint64_t budget(const Params& p) {
  const long long b = p.integer("budget");
  if (b < 1) throw ConfigError("'budget' must be positive");
  return static_cast<std::uint64_t>(b);
}

std::uint64_t positive(const Params& p, const std::string& key) {
  const long long v = p.integer(key);
  if (v < 1) throw ConfigError("'" + key + "' must be positive");
  return static_cast<std::uint64_t>(v);
}

void check_depth(int n) {
  if (n < 0 || n > 64) throw ConfigError("'n' must lie in [0, 64]");
}

struct Level {
  LevelCdf cdf;
  const char* source;
};

Level obtain_level(const Params& p, const Setup& s, double eps, int n) {
  check_depth(n);
  const std::string method = p.str("method");
  const std::uint64_t size = level_size(s.profile.ell(), n);
  const bool fits = size != 0 && size <= budget(p);
  if (method == "exact" || (method == "auto" && fits)) {
    return Level{enumerate_level(s.polys, eps, n, budget(p)), "exact"};
  }
  if (method != "montecarlo" && method != "auto") throw ConfigError("'method' must be exact, montecarlo or auto");
  const auto paths = sample_paths(s.profile, s.polys, eps, n, positive(p, "paths"),
                                  static_cast<std::uint64_t>(p.integer("seed")),
                                  static_cast<unsigned>(p.integer("threads")));
  return Level{sampled_level(paths, n, s.profile.ell(), static_cast<std::uint64_t>(p.integer("seed"))), "montecarlo"};
}

LevelCdf exact_level(const Params& p, const Setup& s, double eps, int n) {
  check_depth(n);
  return enumerate_level(s.polys, eps, n, budget(p));
}

Side side_of(const Params& p) {
  const std::string side = p.str("side");
  if (side == "good") return Side::Good;
  if (side == "bad") return Side::Bad;
  throw ConfigError("'side' must be good or bad");
}

std::string join(std::initializer_list<std::string> fields) {
  std::string row;
  for (const auto& f : fields) {
    if (!row.empty()) row.push_back(',');
    row += f;
  }
  row.push_back('\n');
  return row;
}

std::string loglog_or_nan(double bits, int ell) {
  if (!(bits > 0.0)) return format_real(std::nan(""));
  return format_real(std::log(bits) / std::log(static_cast<double>(ell)));
}

std::string cmd_kernel_analyze(const Params& p) {
  const Setup s = load_kernel(p);
  return "{\"profile\":" + profile_to_json(s.profile) + ",\"erasure_polynomials\":" + s.polys.to_json() + "}\n";
}

std::string cmd_polarize(const Params& p) {
  const Setup s = load_kernel(p);
  const int n = static_cast<int>(p.integer("n"));
  const Level level = obtain_level(p, s, channel_eps(p), n);
  std::string out = "index,mode,payload,loglog,source\n";
  std::uint64_t i = 0;
  for (const auto& z : level.cdf.leaves()) {
    out += join({std::to_string(++i), to_string(z.mode()), format_real(z.payload()), format_real(z.loglog(s.profile.ell())),
                 level.source});
  }
  return out;
}

std::string cmd_scaling_verify(const Params& p) {
  const Setup s = load_kernel(p);
  const double eps = channel_eps(p);
  const Side side = side_of(p);
  const double mass = side == Side::Good ? 1.0 - eps : eps;
  const double fa = p.real("f_a");
  const double fb = p.real("f_b");
  std::string out = "n,t,nu,exact_F,predicted,abs_error,source\n";
  for (int n : p.integers("n")) {
    const Level level = obtain_level(p, s, eps, n);
    for (double t : p.reals("t")) {
      const double f = fa * std::pow(static_cast<double>(n), fb);
      const DoubleExponent thr = polar_threshold(n, t, s.profile, side, f);
      const double exact = side == Side::Good ? level.cdf.fraction_below_double_exponent(thr.nu)
                                              : level.cdf.fraction_above_double_exponent(thr.nu);
      const double predicted = mass * q_function(t);
      out += join({std::to_string(n), format_real(t), format_real(thr.nu), format_real(exact), format_real(predicted),
                   format_real(std::fabs(exact - predicted)), level.source});
    }
  }
  return out;
}

std::string cmd_exponent_verify(const Params& p) {
  const Setup s = load_kernel(p);
  const double eps = channel_eps(p);
  std::string out = "n,beta,fraction,source\n";
  for (int n : p.integers("n")) {
    const Level level = obtain_level(p, s, eps, n);
    for (double beta : p.reals("beta")) {
      out += join({std::to_string(n), format_real(beta), format_real(level.cdf.fraction_below_double_exponent(beta * n)),
                   level.source});
    }
  }
  return out;
}

LevelCdf prefix_level(const Params& p, const Setup& s, double eps, int m) {
  try {
    return exact_level(p, s, eps, m);
  } catch (const PolarError& e) {
    if (e.code() == ErrorCode::BudgetExceeded) throw PolarError(ErrorCode::PrefixTooDeep, e.what());
    throw;
  }
}

SelectionSet select(const std::string& rule, const Params& p, const Setup& s, const LevelCdf& cdf, double eps, int n,
                    double rate) {
  if (rule == "polar") return polar_selection(cdf, rate);
  if (rule == "rm") return rm_selection(s.profile.kernel, n, rate);
  const double beta = p.reals("beta").front();
  const double t = p.reals("t").front();
  if (rule == "hybrid") {
    const int m = p.str("m").empty() ? default_prefix_depth(n, beta, s.profile) : static_cast<int>(p.integer("m"));
    if (m < 0 || m > n) throw ConfigError("'m' must lie in [0, n]");
    return hybrid_selection(prefix_level(p, s, eps, m), s.profile, n, rate, beta, t, &cdf);
  }
  if (rule == "hybrid-recursive") {
    const std::vector<int> schedule = p.integers("schedule");
    if (schedule.front() < 0) throw ConfigError("'schedule' entries must be non-negative");
    return hybrid_selection_recursive(prefix_level(p, s, eps, schedule.front()), s.profile, n, rate, schedule, beta,
                                      p.real("epsilon_slack"), t, &cdf);
  }
  throw ConfigError("unknown rule '" + rule + "'");
}

void export_selection(const Params& p, const SelectionSet& sel, const SelectionBounds& bounds) {
  const std::string dir = p.str("export");
  if (dir.empty()) return;
  const std::filesystem::path base = std::filesystem::path(dir) / (std::string(to_string(sel.rule)) + "_n" + std::to_string(sel.n));
  std::ofstream csv(base.string() + ".csv", std::ios::binary);
  std::ofstream json(base.string() + ".json", std::ios::binary);
  if (!csv || !json) throw ConfigError("cannot write selection export under '" + dir + "'");
  csv << sel.to_csv();
  json << selection_metadata_json(sel, &bounds) << '\n';
}

std::string cmd_selection_compare(const Params& p) {
  const Setup s = load_kernel(p);
  const double eps = channel_eps(p);
  const double rate = p.real("rate");
  const double rm_rate = p.real("rm_rate");
  const int ell = s.profile.ell();
  std::string out =
      "n,rule,rate,size,shortfall,union_bound_loglog,union_neglog,sc_lower_loglog,dmin,map_lower_loglog,overlap_with_rm\n";
  for (int n : p.integers("n")) {
    const LevelCdf cdf = exact_level(p, s, eps, n);
    const SelectionSet rm_ref = rm_selection(s.profile.kernel, n, rm_rate);
    for (const auto& rule : p.split("rules")) {
      const SelectionSet sel = select(rule, p, s, cdf, eps, n, rate);
      const SelectionBounds b = selection_bounds(sel, cdf, s.profile, eps);
      export_selection(p, sel, b);
      out += join({std::to_string(n), rule, format_real(rate), std::to_string(sel.indices.size()),
                   std::to_string(sel.shortfall), loglog_or_nan(b.union_neglog, ell), format_real(b.union_neglog),
                   format_real(b.sc_lower.loglog(ell)), std::to_string(b.dmin_upper),
                   format_real(b.map_lower.loglog(ell)), format_real(overlap_fraction(sel, rm_ref))});
    }
  }
  return out;
}

std::string cmd_codec_sim(const Params& p) {
  const Setup s = load_kernel(p);
  const double eps = p.real("eps");
  if (!(eps >= 0.0 && eps <= 1.0)) throw ConfigError("'eps' must lie in [0, 1]");
  const double design = p.str("design_eps").empty() ? std::clamp(eps, 1e-9, 1.0 - 1e-9) : channel_eps(p, "design_eps");
  const int n = static_cast<int>(p.integer("n"));
  const double rate = p.real("rate");
  const LevelCdf cdf = exact_level(p, s, design, n);
  const SelectionSet sel = select(p.str("rule"), p, s, cdf, design, n, rate);
  const SelectionBounds b = selection_bounds(sel, cdf, s.profile, design);
  const PolarCode code = make_polar_code(s.profile, sel);
  const SimulationReport rep = simulate(code, eps, positive(p, "trials"), static_cast<std::uint64_t>(p.integer("seed")),
                                        static_cast<unsigned>(p.integer("threads")));
  std::string out = SimulationReport::csv_header() + ",sc_miscorrections,sc_lower,union_bound,map_lower\n";
  out += rep.csv_row() + "," + std::to_string(rep.sc_miscorrections) + "," + format_real(b.sc_lower.value()) + "," +
         format_real(std::exp2(-b.union_neglog)) + "," + format_real(b.map_lower.value()) + "\n";
  return out;
}

std::string cmd_map_bound(const Params& p) {
  const Setup s = load_kernel(p);
  const double eps = channel_eps(p);
  const double capacity = 1.0 - eps;
  const int ell = s.profile.ell();
  std::string out = "n,rate,dmin_upper,map_lower_loglog,sc_union_loglog,theorem3_rhs\n";
  for (int n : p.integers("n")) {
    const LevelCdf cdf = exact_level(p, s, eps, n);
    for (double rate : p.reals("rate")) {
      if (!(rate > 0.0 && rate < capacity)) throw ConfigError("'rate' must lie in (0, 1 - eps)");
      const SelectionSet sel = select(p.str("rule"), p, s, cdf, eps, n, rate);
      const SelectionBounds b = selection_bounds(sel, cdf, s.profile, eps);
      const double rhs = n * s.profile.weight_exponent +
                         std::sqrt(n * s.profile.weight_second_exponent) * q_inverse(rate / capacity);
      out += join({std::to_string(n), format_real(rate), std::to_string(b.dmin_upper),
                   format_real(b.map_lower.loglog(ell)), loglog_or_nan(b.union_neglog, ell), format_real(rhs)});
    }
  }
  return out;
}

using Command = std::string (*)(const Params&);

const std::vector<std::pair<std::string, std::pair<Command, const char*>>>& commands() {
  static const std::vector<std::pair<std::string, std::pair<Command, const char*>>> c = {
      {"kernel-analyze", {cmd_kernel_analyze, "Partial distances, exponents and erasure polynomials of a kernel"}},
      {"polarize", {cmd_polarize, "Bhattacharyya values of every synthetic channel at depth n"}},
      {"scaling-verify", {cmd_scaling_verify, "Exact F(n, threshold) against the Gaussian prediction"}},
      {"exponent-verify", {cmd_exponent_verify, "Fraction of channels below 2^-(ell^(beta n))"}},
      {"selection-compare", {cmd_selection_compare, "Bounds and overlaps of polar, RM and hybrid selections"}},
      {"codec-sim", {cmd_codec_sim, "SC and MAP block error rates over the BEC"}},
      {"map-bound", {cmd_map_bound, "MAP lower bound against the row-weight exponent"}},
  };
  return c;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularMatrix:
    case ErrorCode::DimensionTooLarge:
    case ErrorCode::NotPolarizing:
      return kExitInvalidKernel;
    case ErrorCode::BudgetExceeded:
    case ErrorCode::PrefixTooDeep:
      return kExitBudget;
    default:
      return kExitBadConfig;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Channel polarization experiments for arbitrary binary kernels", "polarctl"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "Flat key = value file; flags override its entries");
  std::map<std::string, std::string> flag_storage;
  std::map<std::string, CLI::Option*> flag_options;
  for (const auto& key : config_keys()) {
    const std::string help = defaults().at(key).empty() ? "" : "default: " + defaults().at(key);
    flag_options[key] = app.add_option("--" + key, flag_storage[key], help);
  }
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, cmd] : commands()) subs[name] = app.add_subcommand(name, cmd.second);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadConfig;
  }

  try {
    ExperimentConfig file;
    if (!config_path.empty()) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) throw ConfigError("cannot read config file '" + config_path + "'");
      std::stringstream buffer;
      buffer << in.rdbuf();
      file = ExperimentConfig::parse(buffer.str());
    }
    std::map<std::string, std::string> flags;
    for (const auto& [key, opt] : flag_options) {
      if (opt->count() > 0) flags[key] = flag_storage[key];
    }
    const Params params(std::move(file), std::move(flags));

    std::string result;
    for (const auto& [name, cmd] : commands()) {
      if (subs[name]->parsed()) result = cmd.first(params);
    }
    const std::string path = params.str("out");
    if (path.empty()) {
      out << result;
    } else {
      std::ofstream file_out(path, std::ios::binary);
      if (!file_out) throw ConfigError("cannot write output file '" + path + "'");
      file_out << result;
    }
    return kExitOk;
  } catch (const KernelError& e) {
    err << "error: invalid kernel: " << e.what() << '\n';
    return kExitInvalidKernel;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const PolarError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace polar::cli

// One line per acceptance criterion. Exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "polar/asymptotics.hpp"
#include "polar/boundprop.hpp"
#include "polar/cli.hpp"
#include "polar/codec.hpp"
#include "polar/construct.hpp"
#include "polar/erasure.hpp"
#include "polar/kernel.hpp"
#include "polar/level.hpp"

using namespace polar;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs <= limit_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("criterion %2d: %s  %s | %s | %.2fs (limit %.0fs)%s\n", id, pass ? "PASS" : "FAIL", title,
              o.detail.c_str(), secs, limit_s, in_time ? "" : " over time");
  std::fflush(stdout);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::vector<oracle::Rows> all_matrices(int ell) {
  std::vector<oracle::Rows> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (ell * ell)); ++bits) {
    oracle::Rows rows(static_cast<std::size_t>(ell));
    for (int i = 0; i < ell; ++i) rows[static_cast<std::size_t>(i)] = (bits >> (i * ell)) & ((1u << ell) - 1u);
    out.push_back(rows);
  }
  return out;
}

std::vector<BitMatrix> polarizing_kernels_up_to_4() {
  std::vector<BitMatrix> ks;
  for (int ell : {2, 3}) {
    for (const auto& rows : all_matrices(ell)) {
      if (oracle::polarizing(rows)) ks.emplace_back(ell, rows);
    }
  }
  std::mt19937_64 rng(404);
  int added = 0;
  while (added < 50) {
    const auto rows = oracle::random_matrix(4, rng);
    if (!oracle::polarizing(rows)) continue;
    ks.emplace_back(4, rows);
    ++added;
  }
  return ks;
}

const BitMatrix kArikan = BitMatrix::parse("10;11");

}  // namespace

int main() {
  criterion(1, "partial distances equal the span oracle", 5, [] {
    std::uint64_t checked = 0, mismatches = 0;
    for (int ell : {2, 3}) {
      for (const auto& rows : all_matrices(ell)) {
        if (oracle::rank(rows) < ell) continue;
        ++checked;
        mismatches += partial_distances(BitMatrix(ell, rows)) != oracle::partial_distances(rows);
      }
    }
    std::mt19937_64 rng(1);
    for (int ell : {4, 5}) {
      int done = 0;
      while (done < 100) {
        const auto rows = oracle::random_matrix(ell, rng);
        if (oracle::rank(rows) < ell) continue;
        ++done;
        ++checked;
        mismatches += partial_distances(BitMatrix(ell, rows)) != oracle::partial_distances(rows);
      }
    }
    return Outcome{mismatches == 0, std::to_string(checked) + " matrices, " + std::to_string(mismatches) + " mismatches"};
  });

  criterion(2, "Arikan exponents E = 0.5, V = 0.25 for G, H and weights", 1, [] {
    const auto p = kernel_profile(kArikan);
    const double err = std::max({std::fabs(p.exponent - 0.5), std::fabs(p.h_exponent - 0.5),
                                 std::fabs(p.weight_exponent - 0.5), std::fabs(p.second_exponent - 0.25),
                                 std::fabs(p.h_second_exponent - 0.25), std::fabs(p.weight_second_exponent - 0.25)});
    return Outcome{err <= 1e-15, "max error " + fmt(err)};
  });

  criterion(3, "BEC conservation sum_j p_j(eps) = ell eps", 5, [] {
    double worst = 0.0;
    const auto ks = polarizing_kernels_up_to_4();
    for (const auto& g : ks) {
      const auto s = split_erasure_polynomials(g);
      for (int k = 0; k <= 10; ++k) {
        const double eps = k / 10.0;
        double sum = 0.0;
        for (const auto& b : s.branches) sum += b.evaluate_linear(eps);
        worst = std::max(worst, std::fabs(sum - g.size() * eps));
      }
    }
    return Outcome{worst <= 1e-12, std::to_string(ks.size()) + " kernels, max deviation " + fmt(worst)};
  });

  criterion(4, "leading degree = D_j and eps^D_j <= p_j <= 2^(ell-j) eps^D_j", 5, [] {
    std::uint64_t degree_mismatch = 0, sandwich_violations = 0;
    const auto ks = polarizing_kernels_up_to_4();
    for (const auto& g : ks) {
      const auto s = split_erasure_polynomials(g);
      const auto d = oracle::partial_distances(g.rows());
      degree_mismatch += s.leading_degree != d;
      for (int j = 0; j < g.size(); ++j) {
        for (int k = 1; k <= 99; ++k) {
          const double eps = k / 100.0;
          const double p = s.branches[static_cast<std::size_t>(j)].evaluate_linear(eps);
          const double mono = std::pow(eps, d[static_cast<std::size_t>(j)]);
          if (p < mono * (1 - 1e-12) || p > std::exp2(g.size() - j) * mono * (1 + 1e-12)) ++sandwich_violations;
        }
      }
    }
    return Outcome{degree_mismatch == 0 && sandwich_violations == 0,
                   std::to_string(ks.size()) + " kernels, degree mismatches " + std::to_string(degree_mismatch) +
                       ", sandwich violations " + std::to_string(sandwich_violations)};
  });

  criterion(5, "F(n, 2^-2^(n/2)) -> 0.25 at BEC(0.5): n=20 within 0.1, error non-increasing, MC n=50 within 0.05", 60,
            [] {
              const auto p = kernel_profile(kArikan);
              std::vector<double> err;
              std::string detail = "|F-0.25|:";
              for (int n : {12, 16, 20}) {
                const auto level = enumerate_level(kArikan, 0.5, n);
                const double f = level.fraction_below_double_exponent(polar_threshold(n, 0.0, p, Side::Good).nu);
                err.push_back(std::fabs(f - 0.25));
                detail += " n=" + std::to_string(n) + ":" + fmt(err.back());
              }
              const auto paths = sample_paths(kArikan, 0.5, 50, 100000, 2024);
              const auto mc = sampled_level(paths, 50, 2, 2024);
              const double f50 = mc.fraction_below_double_exponent(polar_threshold(50, 0.0, p, Side::Good).nu);
              detail += " MC n=50 F=" + fmt(f50);
              const bool monotone = err[1] <= err[0] && err[2] <= err[1];
              const bool pass = err[2] <= 0.1 && monotone && std::fabs(f50 - 0.25) <= 0.05;
              if (!monotone) detail += " (not non-increasing)";
              return Outcome{pass, detail};
            });

  criterion(6, "double-exponent fraction trend: beta=0.4 >= 0.40 and increasing, beta=0.6 <= 0.05 and decreasing", 60, [] {
    std::vector<double> lo, hi;
    for (int n : {12, 16, 20}) {
      const auto level = enumerate_level(kArikan, 0.5, n);
      lo.push_back(level.fraction_below_double_exponent(0.4 * n));
      hi.push_back(level.fraction_below_double_exponent(0.6 * n));
    }
    const bool inc = lo[0] < lo[1] && lo[1] < lo[2];
    const bool dec = hi[0] > hi[1] && hi[1] > hi[2];
    const bool pass = inc && dec && lo[2] >= 0.40 && hi[2] <= 0.05;
    return Outcome{pass, "beta=0.4: " + fmt(lo[0]) + "," + fmt(lo[1]) + "," + fmt(lo[2]) + (inc ? " increasing" : "") +
                             "; beta=0.6: " + fmt(hi[0]) + "," + fmt(hi[1]) + "," + fmt(hi[2]) +
                             (dec ? " decreasing" : "")};
  });

  criterion(7, "exact Z and 1-Z inside propagated intervals", 10, [] {
    std::uint64_t steps = 0, violations = 0;
    auto walk = [&](const BitMatrix& g, const std::vector<int>& digits) {
      const auto p = kernel_profile(g);
      const auto polys = split_erasure_polynomials(g);
      const BoundPropagator prop(p, polys);
      auto z = ExtendedUnitValue::from_linear(0.5);
      auto zi = IntervalState::point(z);
      auto ci = IntervalState::point(z.complement());
      for (int d : digits) {
        z = polys.branches[static_cast<std::size_t>(d)].apply(z);
        zi = prop.z_step(zi, d);
        ci = prop.comp_step(ci, d);
        ++steps;
        violations += !zi.contains(z);
        violations += !ci.contains(z.complement());
      }
    };
    for (std::uint64_t path = 0; path < 4096; ++path) {
      std::vector<int> digits(12);
      for (int k = 0; k < 12; ++k) digits[static_cast<std::size_t>(k)] = static_cast<int>((path >> (11 - k)) & 1u);
      walk(kArikan, digits);
    }
    const auto g3 = BitMatrix::parse("100;110;101");
    std::mt19937_64 rng(77);
    for (int k = 0; k < 1000; ++k) {
      std::vector<int> digits(12);
      for (auto& d : digits) d = static_cast<int>(rng() % 3);
      walk(g3, digits);
    }
    return Outcome{violations == 0, std::to_string(steps) + " steps (4096 Arikan paths + 1000 paths of 100;110;101), " +
                                        std::to_string(violations) + " violations"};
  });

  criterion(8, "process conditions (c2)/(c3) with c = 2^ell on the n = 12 Arikan tree", 10, [] {
    const auto p = kernel_profile(kArikan);
    const auto polys = split_erasure_polynomials(kArikan);
    ConditionReport total;
    for (std::uint64_t path = 0; path < 4096; ++path) {
      std::vector<std::pair<ExtendedUnitValue, int>> trace;
      auto z = ExtendedUnitValue::from_linear(0.5);
      for (int k = 0; k < 12; ++k) {
        const int d = static_cast<int>((path >> (11 - k)) & 1u);
        trace.emplace_back(z, p.partial_distances[static_cast<std::size_t>(d)]);
        z = polys.branches[static_cast<std::size_t>(d)].apply(z);
      }
      trace.emplace_back(z, 1);
      total.merge(check_process_conditions(trace, p.c3_constant, 2));
    }
    return Outcome{total.c2_violations == 0 && total.c3_violations == 0,
                   std::to_string(total.steps) + " steps, c2 " + std::to_string(total.c2_violations) + ", c3 " +
                       std::to_string(total.c3_violations) + ", max ratio " + fmt(total.max_c3_constant_observed)};
  });

  criterion(9, "SC sandwich at BEC(0.3), n = 10, R = 0.3 and MAP failures inside SC failures", 60, [] {
    const auto p = kernel_profile(kArikan);
    const auto level = enumerate_level(kArikan, 0.3, 10);
    const auto sel = polar_selection(level, 0.3);
    const auto b = selection_bounds(sel, level, p, 0.3);
    const auto rep = simulate(make_polar_code(p, sel), 0.3, 10000, 9);
    const double T = static_cast<double>(rep.trials);
    const double lo = b.sc_lower.value();
    const double hi = std::exp2(-b.union_neglog);
    const double s_lo = std::sqrt(lo * (1 - lo) / T);
    const double s_hi = std::sqrt(std::min(hi, 1.0) * (1 - std::min(hi, 1.0)) / T);
    const bool pass = lo - 3 * s_lo <= rep.sc_rate() && rep.sc_rate() <= hi + 3 * s_hi && rep.dominance_violations == 0;
    return Outcome{pass, "sc_lower " + fmt(lo) + " <= BLER " + fmt(rep.sc_rate()) + " <= union " + fmt(hi) +
                             ", MAP errors " + std::to_string(rep.map_errors) + ", inclusion exceptions " +
                             std::to_string(rep.dominance_violations)};
  });

  criterion(10, "MAP BLER >= Z^(2 dmin)/4 - 3 sigma at BEC(0.5), n = 10, R = 0.25", 60, [] {
    const auto p = kernel_profile(kArikan);
    const auto level = enumerate_level(kArikan, 0.5, 10);
    const auto sel = polar_selection(level, 0.25);
    const auto b = selection_bounds(sel, level, p, 0.5);
    const auto rep = simulate(make_polar_code(p, sel), 0.5, 10000, 10);
    const double bound = b.map_lower.value();
    const double sigma = std::sqrt(bound * (1 - bound) / static_cast<double>(rep.trials));
    return Outcome{rep.map_rate() >= bound - 3 * sigma, "MAP BLER " + fmt(rep.map_rate()) + ", bound " + fmt(bound) +
                                                            " (dmin " + std::to_string(b.dmin_upper) + ")"};
  });

  criterion(11, "overlap(polar 0.3, RM 0.5) -> 0.25: non-increasing error, within 0.1 at n = 20", 60, [] {
    std::vector<double> err;
    std::string detail = "overlap:";
    for (int n : {12, 16, 20}) {
      const auto level = enumerate_level(kArikan, 0.5, n);
      const double o = overlap_fraction(polar_selection(level, 0.3), rm_selection(kArikan, n, 0.5));
      err.push_back(std::fabs(o - overlap_limit(0.5, 0.3, 0.5)));
      detail += " n=" + std::to_string(n) + ":" + fmt(o);
    }
    return Outcome{err[1] <= err[0] && err[2] <= err[1] && err[2] <= 0.1, detail};
  });

  criterion(12, "Q/Q^-1 round trip, orthant factorization and limits", 5, [] {
    double rt = 0.0;
    for (int k = 0; k <= 600; ++k) {
      const double t = -3.0 + 0.01 * k;
      rt = std::max(rt, std::fabs(q_inverse(q_function(t)) - t));
    }
    double fac = 0.0, lim = 0.0, excess = -1.0;
    for (double t = -3.0; t <= 3.0; t += 0.5) {
      for (double v = -3.0; v <= 3.0; v += 0.5) {
        fac = std::max(fac, std::fabs(bivariate_orthant(t, v, 0.0) - q_function(t) * q_function(v)));
        lim = std::max(lim, std::fabs(bivariate_orthant(t, v, 1.0 - 1e-13) - q_function(std::max(t, v))));
        for (double rho : {-0.9, -0.5, 0.0, 0.3, 0.6, 0.9, 0.99}) {
          excess = std::max(excess, bivariate_orthant(t, v, rho) - q_function(std::max(t, v)));
        }
      }
    }
    const bool pass = rt <= 1e-9 && fac <= 1e-8 && lim <= 1e-6 && excess <= 1e-12;
    return Outcome{pass, "round trip " + fmt(rt) + ", rho=0 " + fmt(fac) + ", rho->1 " + fmt(lim) +
                             ", max excess over Q(max) " + fmt(excess)};
  });

  criterion(13, "every subcommand is byte-identical across repeated runs", 120, [] {
    const auto dir = std::filesystem::temp_directory_path() / "polarctl_acceptance";
    std::filesystem::create_directories(dir);
    const std::vector<std::vector<std::string>> cmds = {
        {"kernel-analyze", "--kernel", "100;110;101"},
        {"polarize", "--n", "10", "--eps", "0.4"},
        {"polarize", "--n", "30", "--method", "montecarlo", "--paths", "2000", "--seed", "3"},
        {"scaling-verify", "--n", "12,30", "--t", "-1,0,1", "--method", "auto", "--budget", "65536", "--paths",
         "5000"},
        {"exponent-verify", "--n", "12,14", "--beta", "0.4,0.6"},
        {"selection-compare", "--n", "10", "--rules", "polar,rm,hybrid,hybrid-recursive", "--m", "3"},
        {"codec-sim", "--n", "8", "--eps", "0.4", "--rate", "0.4", "--trials", "2000", "--seed", "11"},
        {"map-bound", "--n", "12", "--rate", "0.1,0.25"},
    };
    int differing = 0;
    std::string detail;
    for (const auto& cmd : cmds) {
      std::string outputs[2];
      for (int rep = 0; rep < 2; ++rep) {
        auto args = cmd;
        const auto path = dir / ("run" + std::to_string(rep) + ".out");
        args.insert(args.end(), {"--out", path.string()});
        std::ostringstream out, err;
        if (cli::run_cli(args, out, err) != 0) return Outcome{false, cmd.front() + " failed: " + err.str()};
        std::ifstream in(path, std::ios::binary);
        std::stringstream s;
        s << in.rdbuf();
        outputs[rep] = s.str();
      }
      if (outputs[0] != outputs[1] || outputs[0].empty()) {
        ++differing;
        detail += " " + cmd.front();
      }
    }
    return Outcome{differing == 0, std::to_string(cmds.size()) + " runs compared" +
                                       (differing ? ", differing:" + detail : std::string(", all identical"))};
  });

  std::printf("%d of 13 criteria failed\n", failures);
  return failures;
}

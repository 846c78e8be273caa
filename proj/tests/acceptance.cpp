// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance --criterion 4
//   acceptance            (all criteria)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "rotlab/manifest.hpp"
#include "rotlab/metric.hpp"

using namespace rotlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

fs::path workdir(int criterion) {
  const auto p = fs::temp_directory_path() / ("rotlab_acceptance_" + std::to_string(criterion));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const fs::path& p) { return Json::parse(slurp(p)); }

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    rows.push_back(cols);
  }
  return rows;
}

RunResult run_builtin(const std::string& name, const fs::path& out) {
  return run(builtin_manifest(name), RunOptions{0, 0, out});
}

Outcome cf_correctness() {
  struct Case {
    const char* name;
    AlphaSpec alpha;
    long P, D, Q;
  };
  const Case cases[] = {{"golden", AlphaSpec::golden(), -1, 5, 2},
                        {"sqrt2-1", AlphaSpec::sqrt2_minus_1(), -1, 2, 1}};
  double min_slack = INFINITY;
  for (const auto& c : cases) {
    const auto want = oracle::convergent_rows(oracle::surd_digits(c.P, c.D, c.Q, 31), 31);
    const auto table = convergents(c.alpha, 31);
    for (std::size_t k = 0; k <= 30; ++k) {
      if (table[k].p != want[k].p || table[k].q != want[k].q) {
        return {false, std::string(c.name) + " differs from the surd oracle at k = " + std::to_string(k)};
      }
      if (k == 0) continue;
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), table[k].p.get_mpz_t(), table[k].q.get_mpz_t());
      if (g != 1) return {false, std::string(c.name) + " gcd != 1 at k = " + std::to_string(k)};
      const auto b = check_delta_bounds(table[k], table[k + 1].a);
      if (!(b.pass && b.lower_slack > 0 && b.upper_slack > 0)) {
        return {false, std::string(c.name) + " delta bound fails at k = " + std::to_string(k)};
      }
      min_slack = std::min({min_slack, b.lower_slack, b.upper_slack});
    }
  }
  return {true, "k <= 30 match the surd oracle, min slack " + format_double(min_slack)};
}

Outcome levy(const fs::path&) {
  const auto stats = metric_stats(1000, 50, 20240601);
  const double rel = std::fabs(stats.mean_log_q_over_k / levy_constant() - 1.0);
  return {rel <= 0.05, "mean " + format_double(stats.mean_log_q_over_k) + ", relative error " +
                           format_double(rel) + " <= 0.05"};
}

Outcome dk_suite(const fs::path& dir) {
  run_builtin("dk-suite", dir);
  const auto rows = read_csv(dir / "dk-suite" / "dk.csv");
  std::size_t pass = 0;
  std::set<std::string> fns, alphas, x0s;
  for (const auto& r : rows) {
    fns.insert(r[0]);
    alphas.insert(r[1]);
    x0s.insert(r[2]);
    const double s = std::stod(r[5]);
    const double var = std::stod(r[6]);
    if (s <= var + 1e-12 * (1 + var)) ++pass;
  }
  const bool shape = fns.size() == 3 && alphas.size() == 2 && x0s.size() == 3 && rows.size() == 3 * 2 * 3 * 20;
  return {shape && pass == rows.size(),
          std::to_string(pass) + "/" + std::to_string(rows.size()) + " cases with |S_{q_n}| <= Var"};
}

Outcome ladder(const fs::path& dir) {
  run_builtin("lemma37-convergence-ladder", dir);
  const auto rows = read_csv(dir / "lemma37-convergence-ladder" / "ladder.csv");
  if (rows.size() != 3) return {false, "expected 3 rungs"};
  std::vector<double> err;
  for (const auto& r : rows) err.push_back(std::stod(r[3]));
  const bool mono = err[0] > err[1] && err[1] > err[2];
  return {mono && err[2] <= 0.05, "sup errors " + format_double(err[0]) + ", " + format_double(err[1]) +
                                      ", " + format_double(err[2]) + " (final <= 0.05)"};
}

Outcome temporal(const fs::path& dir) {
  run_builtin("temporal-ecdf-vs-law", dir);
  const auto j = read_json(dir / "temporal-ecdf-vs-law" / "temporal.json");
  const double ks = j["ks_vs_law"].get<double>();
  return {ks <= 0.05, "KS " + format_double(ks) + " <= 0.05 at M = " + std::to_string(j["M"].get<std::uint64_t>())};
}

Outcome refutation() {
  LimitLawParams p;
  p.H = {1.0};
  p.gamma_bar = {0.0};
  p.x0_bar = 0.0;
  const auto r = tdlt_refutation(p, 0.5, 1.0);
  const auto control = tdlt_refutation(p, 0.5, 0.5);
  const bool ok = r.ks_standardized > 0.05 && r.verdict == "distinct" && control.ks_standardized == 0.0;
  return {ok, "standardized KS(g(U_1/2), g(U_1)) = " + format_double(r.ks_standardized) +
                  " (need > 0.05), verdict " + r.verdict + ", control " +
                  format_double(control.ks_standardized)};
}

Outcome density() {
  const auto r = isolated_multipliers(
      {TorusPoint::parse("0.41421356237309504880168872420969807856967187537694807317667973799073")},
      0.1, 10000);
  const double err = std::fabs(r.density - 0.8);
  return {err <= 0.05 && !r.empty, "density " + format_double(r.density) + ", |d - 0.8| <= 0.05"};
}

Outcome boundedness(const fs::path& dir) {
  run_builtin("normal-form-boundedness", dir);
  const auto j = read_json(dir / "normal-form-boundedness" / "normal_form.json");
  const double slope = j["log_log_slope_final_decade"].get<double>();
  const double r0 = j["running_max_at_N_max_over_10"].get<double>();
  const double r1 = j["running_max_at_N_max"].get<double>();
  return {slope < 0.05, "running max " + format_double(r0) + " at 10^4, " + format_double(r1) +
                            " at 10^5, slope " + format_double(slope) + " < 0.05"};
}

Outcome determinism(const fs::path& dir) {
  std::size_t files = 0;
  for (const auto& s : list_scenarios()) {
    const auto a = run_builtin(s.name, dir / "a");
    const auto b = run_builtin(s.name, dir / "b");
    if (a.files.size() != b.files.size()) return {false, s.name + ": file lists differ"};
    for (std::size_t i = 0; i < a.files.size(); ++i) {
      if (slurp(a.files[i]) != slurp(b.files[i])) return {false, s.name + ": " + a.files[i].filename().string() + " differs"};
      ++files;
    }
  }
  return {true, std::to_string(files) + " files byte-identical across two runs of " +
                    std::to_string(list_scenarios().size()) + " builtins"};
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Outcome(const fs::path&)> fn;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "continued-fraction correctness", 1.0, [](const fs::path&) { return cf_correctness(); }},
      {2, "Khintchine-Levy Monte Carlo", 120.0, levy},
      {3, "Denjoy-Koksma suite", 60.0, dk_suite},
      {4, "convergence ladder", 600.0, ladder},
      {5, "temporal ECDF vs analytic law", 600.0, temporal},
      {6, "half vs one refutation", 10.0, [](const fs::path&) { return refutation(); }},
      {7, "isolated multiplier density", 5.0, [](const fs::path&) { return density(); }},
      {8, "normal form boundedness", 120.0, boundedness},
      {9, "determinism", 1200.0, determinism},
  };
  return list;
}

bool run_one(const Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.fn(workdir(c.id));
  } catch (const std::exception& e) {
    o = {false, std::string("error: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < c.budget_s;
  const bool pass = o.pass && in_time;
  std::printf("%s criterion %d (%s): %s; %.2f s (budget %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id,
              c.title, o.detail.c_str(), secs, c.budget_s, in_time ? "" : " over budget");
  std::fflush(stdout);
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);
  bool all = true;
  for (const auto& c : criteria()) {
    if (only != 0 && c.id != only) continue;
    all = run_one(c) && all;
  }
  return all ? 0 : 1;
}

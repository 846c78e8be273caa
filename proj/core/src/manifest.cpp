#include "rotlab/manifest.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "rotlab/birkhoff.hpp"
#include "rotlab/laws.hpp"
#include "rotlab/limit_law.hpp"
#include "rotlab/metric.hpp"
#include "rotlab/temporal.hpp"

namespace rotlab {
namespace fs = std::filesystem;

namespace {

constexpr const char* kSqrt2Literal =
    "0.41421356237309504880168872420969807856967187537694807317667973799073";

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  fail(ErrorCode::kInvalidInput, "field '" + field + "': " + what);
}

const Json& require(const Json& j, const std::string& field) {
  const auto it = j.find(field);
  if (it == j.end()) field_error(field, "missing");
  return *it;
}

std::uint64_t count_field(const Json& j, const std::string& field, std::uint64_t min_value) {
  const auto& v = require(j, field);
  if (!v.is_number_integer() || v.get<long long>() < 0 ||
      v.get<std::uint64_t>() < min_value) {
    field_error(field, "expected an integer >= " + std::to_string(min_value));
  }
  return v.get<std::uint64_t>();
}

std::uint64_t count_field(const Json& j, const std::string& field, std::uint64_t min_value,
                          std::uint64_t fallback) {
  return j.contains(field) ? count_field(j, field, min_value) : fallback;
}

double number_field(const Json& j, const std::string& field) {
  const auto& v = require(j, field);
  if (!v.is_number()) field_error(field, "expected a number");
  return v.get<double>();
}

double c_field(const Json& j, const std::string& field) {
  const double c = number_field(j, field);
  if (!(c > 0.0 && c <= 1.0)) field_error(field, "must lie in (0,1]");
  return c;
}

template <class T, class Fn>
T wrap_field(const std::string& field, Fn&& fn) {
  try {
    return fn();
  } catch (const LabError& e) {
    if (e.code() != ErrorCode::kInvalidInput) throw;
    field_error(field, e.what());
  } catch (const Json::exception& e) {
    field_error(field, e.what());
  }
}

AlphaSpec alpha_field(const Json& j, const std::string& field = "alpha") {
  const auto& v = require(j, field);
  return wrap_field<AlphaSpec>(field, [&] { return alpha_from_json(v); });
}

JumpFunction function_field(const Json& j, const std::string& field = "function") {
  const auto& v = require(j, field);
  return wrap_field<JumpFunction>(field, [&] { return function_from_json(v); });
}

TorusPoint point_field(const Json& j, const std::string& field) {
  if (!j.contains(field)) return TorusPoint();
  return wrap_field<TorusPoint>(field, [&] { return point_from_json(j[field]); });
}

std::string label(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.contains("builtin")) {
    std::string s = j["builtin"].get<std::string>();
    if (j.contains("gamma")) s += "(" + (j["gamma"].is_string() ? j["gamma"].get<std::string>() : j["gamma"].dump()) + ")";
    return s;
  }
  if (j.contains("variant")) {
    const std::string v = j["variant"].get<std::string>();
    if (v == "constructed" && j.contains("plan")) return "constructed" + j["plan"].value("forced", Json::object()).dump();
    return v;
  }
  return "custom";
}

class Context {
 public:
  Context(const Json& m, const RunOptions& opt, RunResult& r) : m_(m), opt_(opt), r_(r) {
    dir_ = opt.out_dir / r.name;
  }

  SumOptions sum_options() const {
    SumOptions s;
    s.workers = opt_.workers;
    s.bits = opt_.bits != 0 ? opt_.bits : static_cast<unsigned>(m_.value("bits", 0u));
    return s;
  }

  void write(const std::string& file, const std::string& content) {
    fs::create_directories(dir_);
    const fs::path p = dir_ / file;
    std::ofstream out(p, std::ios::binary);
    out << content;
    if (!out) fail(ErrorCode::kInvalidInput, "cannot write " + p.string());
    r_.files.push_back(p);
  }

  void write_json(const std::string& file, const Json& j) { write(file, j.dump(2) + "\n"); }

  void check(const std::string& name, bool pass, const std::string& detail) {
    r_.checks.push_back(Check{name, pass, detail});
  }

  void say(const std::string& line) { r_.summary.push_back(line); }

  const Json& m() const { return m_; }

 private:
  const Json& m_;
  RunOptions opt_;
  RunResult& r_;
  fs::path dir_;
};

const Json& expect(const Json& m) {
  static const Json empty = Json::object();
  const auto it = m.find("expect");
  return it == m.end() ? empty : *it;
}

void run_cf_table(Context& ctx) {
  const Json& m = ctx.m();
  const AlphaSpec alpha = alpha_field(m);
  const std::size_t K = count_field(m, "K", 1, 30);
  const unsigned bits = static_cast<unsigned>(m.value("bits", 256u));
  const auto table = convergents(alpha, K + 1, bits);
  std::vector<Convergent> rows(table.begin(), table.begin() + static_cast<std::ptrdiff_t>(K + 1));
  std::ostringstream csv;
  write_convergents_csv(csv, rows);
  ctx.write("convergents.csv", csv.str());

  bool coprime = true;
  bool bounds = true;
  bool approx = true;
  double min_slack = INFINITY;
  for (std::size_t k = 1; k <= K; ++k) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), table[k].p.get_mpz_t(), table[k].q.get_mpz_t());
    coprime = coprime && g == 1;
    const auto b = check_delta_bounds(table[k], table[k + 1].a);
    bounds = bounds && b.pass && b.lower_slack > 0.0 && b.upper_slack > 0.0;
    min_slack = std::min({min_slack, b.lower_slack, b.upper_slack});
    // |alpha - p_k/q_k| = delta_k / q_k < 1 / (q_k q_{k+1})
    approx = approx && table[k].delta_hi * Rational(table[k + 1].q) < 1;
  }
  ctx.say("K = " + std::to_string(K) + ", q_K = " + to_string(table[K].q));
  ctx.check("gcd(p_k, q_k) = 1", coprime, "k = 1.." + std::to_string(K));
  ctx.check("delta_k bounds with positive slack", bounds,
            "min slack " + format_double(min_slack));
  ctx.check("|alpha - p_k/q_k| < 1/(q_k q_{k+1})", approx, "k = 1.." + std::to_string(K));
}

void run_metric_stats(Context& ctx) {
  const Json& m = ctx.m();
  const std::size_t sample = count_field(m, "sample_size", 1, 1000);
  const std::size_t depth = count_field(m, "k_depth", 1, 50);
  const std::uint64_t seed = count_field(m, "seed", 0, 20240601);
  const auto stats = metric_stats(sample, depth, seed, ctx.sum_options().workers);
  const double levy = levy_constant();
  const double rel = std::fabs(stats.mean_log_q_over_k / levy - 1.0);
  Json out;
  out["sample_size"] = stats.sample_size;
  out["k_depth"] = stats.k_depth;
  out["seed"] = seed;
  out["mean_log_q_over_k"] = stats.mean_log_q_over_k;
  out["levy_constant"] = levy;
  out["relative_error"] = rel;
  out["mean_trimmed_ratio"] =
      stats.mean_trimmed_ratio ? Json(*stats.mean_trimmed_ratio) : Json();
  out["resampled"] = stats.resampled;
  ctx.write_json("metric.json", out);
  std::ostringstream csv;
  csv << "index,log_q_over_k,trimmed_ratio\n";
  for (std::size_t i = 0; i < stats.samples.size(); ++i) {
    const auto& s = stats.samples[i];
    csv << i << ',' << format_double(s.log_q_over_k) << ','
        << (s.trimmed_ratio ? format_double(*s.trimmed_ratio) : "") << '\n';
  }
  ctx.write("samples.csv", csv.str());
  ctx.say("mean log q_k / k = " + format_double(stats.mean_log_q_over_k) + " (Levy " +
          format_double(levy) + ")");
  const Json& e = expect(m);
  if (e.contains("levy_rel_tol")) {
    const double tol = e["levy_rel_tol"].get<double>();
    ctx.check("mean log q_k/k within tolerance of Levy constant", rel <= tol,
              "relative error " + format_double(rel) + " <= " + format_double(tol));
  }
  if (e.contains("trimmed_range") && stats.mean_trimmed_ratio) {
    const auto range = e["trimmed_range"].get<std::vector<double>>();
    const double t = *stats.mean_trimmed_ratio;
    ctx.check("trimmed-sum ratio in range", t >= range.at(0) && t <= range.at(1),
              format_double(t));
  }
}

void run_birkhoff(Context& ctx) {
  const Json& m = ctx.m();
  const JumpFunction f = function_field(m);
  const AlphaSpec alpha = alpha_field(m);
  const TorusPoint x0 = point_field(m, "x0");
  const std::uint64_t N = count_field(m, "N", 0);
  const std::uint64_t stride = count_field(m, "trace_stride", 0, 0);
  const Summand fn(f);
  const BirkhoffEngine engine(fn, alpha, ctx.sum_options());
  double S = 0.0;
  if (stride > 0) {
    if (N > 100'000'000) field_error("N", "traces are limited to N <= 10^8");
    const auto prefix = engine.prefix_sums(x0, N);
    S = N == 0 ? 0.0 : prefix.back();
    std::ostringstream csv;
    write_trace_csv(csv, prefix, stride);
    ctx.write("trace.csv", csv.str());
  } else {
    S = engine.sum(x0, N);
  }
  const auto pq = partial_quotient_bound_check(fn, alpha, x0, N, ctx.sum_options());
  Json out;
  out["N"] = N;
  out["S_N"] = S;
  out["bits"] = engine.last_bits();
  out["variation"] = fn.variation();
  out["partial_quotient_bound"] = {{"k", pq.k}, {"bound", pq.bound}, {"pass", pq.pass}};
  ctx.write_json("birkhoff.json", out);
  ctx.say("S_N = " + format_double(S) + " at N = " + std::to_string(N));
  ctx.check("|S_N| <= 2 Var sum a_i", pq.pass,
            format_double(pq.abs_sum) + " <= " + format_double(pq.bound));
}

void run_dk_check(Context& ctx) {
  const Json& m = ctx.m();
  const std::size_t n_max = count_field(m, "n_max", 1, 20);
  const auto& fns = require(m, "functions");
  const auto& alphas = require(m, "alphas");
  const auto& x0s = require(m, "x0s");
  if (!fns.is_array() || !alphas.is_array() || !x0s.is_array()) {
    field_error("functions/alphas/x0s", "expected arrays");
  }
  std::ostringstream csv;
  csv << "function,alpha,x0,n,q_n,abs_sum,variation,pass\n";
  std::size_t total = 0;
  std::size_t passed = 0;
  double worst = 0.0;
  for (const auto& fj : fns) {
    const JumpFunction f = wrap_field<JumpFunction>("functions", [&] { return function_from_json(fj); });
    for (const auto& aj : alphas) {
      const AlphaSpec alpha = wrap_field<AlphaSpec>("alphas", [&] { return alpha_from_json(aj); });
      for (const auto& xj : x0s) {
        const TorusPoint x0 = wrap_field<TorusPoint>("x0s", [&] { return point_from_json(xj); });
        const auto rows = denjoy_koksma_suite(Summand(f), alpha, x0, n_max, ctx.sum_options());
        for (const auto& r : rows) {
          ++total;
          passed += r.pass ? 1 : 0;
          worst = std::max(worst, r.abs_sum / std::max(r.variation, 1e-300));
          csv << label(fj) << ',' << label(aj) << ',' << x0.to_string() << ',' << r.n << ','
              << r.q_n << ',' << format_double(r.abs_sum) << ',' << format_double(r.variation)
              << ',' << (r.pass ? 1 : 0) << '\n';
        }
      }
    }
  }
  ctx.write("dk.csv", csv.str());
  ctx.say(std::to_string(passed) + "/" + std::to_string(total) + " cases pass, worst |S|/Var = " +
          format_double(worst));
  ctx.check("|S_{q_n}| <= Var(f) in every case", total > 0 && passed == total,
            std::to_string(passed) + "/" + std::to_string(total));
}

void run_limit_law(Context& ctx) {
  const Json& m = ctx.m();
  const JumpFunction f = function_field(m);
  const TorusPoint x0 = point_field(m, "x0");
  const std::size_t points = count_field(m, "c_points", 2, 101);
  std::vector<LadderRung> rungs;
  for (const auto& rj : require(m, "rungs")) {
    rungs.push_back(LadderRung{alpha_field(rj), static_cast<std::size_t>(count_field(rj, "n", 1))});
  }
  if (rungs.empty()) field_error("rungs", "at least one rung is required");
  const auto rows = lemma_convergence_report(f, rungs, x0, default_c_grid(points), ctx.sum_options());
  std::ostringstream csv;
  csv << "n,a_next,q_n,sup_error,argmax_c,budget\n";
  for (const auto& r : rows) {
    csv << r.n << ',' << r.a_next << ',' << r.q_n << ',' << format_double(r.sup_error) << ','
        << format_double(r.argmax_c) << ',' << format_double(r.budget) << '\n';
    ctx.say("a = " + std::to_string(r.a_next) + ": sup error " + format_double(r.sup_error));
  }
  ctx.write("ladder.csv", csv.str());
  std::ostringstream detail;
  detail << "a_next,c,normalized,target\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.c.size(); ++i) {
      detail << r.a_next << ',' << format_double(r.c[i]) << ',' << format_double(r.normalized[i])
             << ',' << format_double(r.target[i]) << '\n';
    }
  }
  ctx.write("ladder_detail.csv", detail.str());
  {
    const auto& last = rungs.back();
    const auto digits = expand(last.alpha, last.n + 1);
    std::vector<TorusPoint> gammas;
    for (const auto& j : f.jumps) gammas.push_back(j.gamma);
    const auto bars = bar_limits(digits, x0, gammas, {last.n}, BarMode::kExact);
    const auto params = LimitLawParams::from_bars(f.jumps, bars);
    std::ostringstream g;
    write_g_csv(g, g_closed_form(params), 1001);
    ctx.write("g.csv", g.str());
    ctx.write_json("params.json", Json{{"params", params_to_json(params)}, {"bars", bars_to_json(bars)}});
  }
  const Json& e = expect(m);
  if (e.value("monotone", false)) {
    bool mono = true;
    for (std::size_t i = 1; i < rows.size(); ++i) mono = mono && rows[i].sup_error < rows[i - 1].sup_error;
    ctx.check("sup error decreases along the ladder", mono, "");
  }
  if (e.contains("final_max")) {
    const double tol = e["final_max"].get<double>();
    ctx.check("final sup error within tolerance", rows.back().sup_error <= tol,
              format_double(rows.back().sup_error) + " <= " + format_double(tol));
  }
}

struct Pipeline {
  JumpFunction f;
  AlphaSpec alpha;
  TorusPoint x0;
  std::size_t n;
  std::vector<Digit> digits;
  std::vector<Convergent> table;
  BarLimits bars;
  LimitLawParams params;
};

Pipeline pipeline(const Json& m) {
  Pipeline p{function_field(m), alpha_field(m), point_field(m, "x0"),
             static_cast<std::size_t>(count_field(m, "n", 1)), {}, {}, {}, {}};
  p.digits = expand(p.alpha, p.n + 1);
  p.table = convergents(p.digits, p.n);
  std::vector<TorusPoint> gammas;
  for (const auto& j : p.f.jumps) gammas.push_back(j.gamma);
  p.bars = bar_limits(p.digits, p.x0, gammas, {p.n}, BarMode::kExact);
  p.params = LimitLawParams::from_bars(p.f.jumps, p.bars);
  return p;
}

void run_temporal(Context& ctx) {
  const Json& m = ctx.m();
  const double c = m.contains("c") ? c_field(m, "c") : 1.0;
  Pipeline p = pipeline(m);
  const auto sm = subsequence_M(rational_from_double(c), p.digits[p.n], to_u64(p.table[p.n].q));
  const std::uint64_t M = m.contains("M") ? count_field(m, "M", 1) : sm.M;
  Normalization norm;
  const Json nj = m.value("normalization", Json("paper_tilde_anchored"));
  const std::string rule = nj.is_string() ? nj.get<std::string>() : nj.value("rule", std::string("explicit"));
  const NormalizationRule parsed =
      wrap_field<NormalizationRule>("normalization", [&] { return parse_normalization_rule(rule); });
  if (parsed == NormalizationRule::kExplicit) {
    norm = wrap_field<Normalization>("normalization", [&] {
      return Normalization::explicit_values(nj.value("A", 0.0), nj.value("B", 1.0));
    });
  } else if (parsed == NormalizationRule::kPaperTilde) {
    const auto wide = convergents(p.alpha, p.n + 3, 64);
    norm = Normalization::paper_tilde(wide, M);
  } else {
    norm = Normalization::paper_tilde_anchored(p.table, p.n, M);
  }
  const auto ecdf = temporal_ecdf(Summand(p.f), p.alpha, p.x0, M, norm, ctx.sum_options());
  std::ostringstream csv;
  write_ecdf_csv(csv, ecdf);
  ctx.write("ecdf.csv", csv.str());
  const auto g = g_closed_form(p.params);
  double scale = 1.0 / c;
  double shift = 0.0;
  if (parsed == NormalizationRule::kExplicit) {
    scale = static_cast<double>(p.digits[p.n]) / norm.B;
    shift = -norm.A / norm.B;
  }
  const GLaw law(g, c, scale, shift);
  const double ks = ks_distance(ecdf, law);
  std::ostringstream lcsv;
  write_law_csv(lcsv, law, 1001);
  ctx.write("law_cdf.csv", lcsv.str());
  Json out;
  out["M"] = M;
  out["c"] = c;
  out["normalization"] = {{"rule", to_string(norm.rule)}, {"A", norm.A}, {"B", norm.B}, {"n", norm.n}};
  out["params"] = params_to_json(p.params);
  out["ks_vs_law"] = ks;
  ctx.write_json("temporal.json", out);
  ctx.say("M = " + std::to_string(M) + ", B = " + format_double(norm.B) + ", KS vs law = " +
          format_double(ks));
  const Json& e = expect(m);
  if (e.contains("ks_max")) {
    const double tol = e["ks_max"].get<double>();
    ctx.check("KS(empirical, analytic) within tolerance", ks <= tol,
              format_double(ks) + " <= " + format_double(tol));
  }
}

void run_refute(Context& ctx) {
  const Json& m = ctx.m();
  std::optional<double> c1;
  std::optional<double> c2;
  if (m.contains("c1")) c1 = c_field(m, "c1");
  if (m.contains("c2")) c2 = c_field(m, "c2");
  if (c1.has_value() != c2.has_value()) field_error("c1/c2", "give both or neither");
  LimitLawParams params;
  std::optional<EmpiricalSetup> empirical;
  Json extra;
  if (m.contains("law")) {
    params = wrap_field<LimitLawParams>("law", [&] { return params_from_json(m["law"]); });
  } else {
    Pipeline p = pipeline(m);
    params = p.params;
    extra["bars"] = bars_to_json(p.bars);
    if (m.value("empirical", false)) {
      empirical = EmpiricalSetup{p.f, p.alpha, p.x0, p.n, ctx.sum_options()};
    }
  }
  const auto report = tdlt_refutation(params, c1, c2, empirical);
  Json out = report_to_json(report);
  out["params"] = params_to_json(params);
  if (!extra.is_null()) out["bars"] = extra["bars"];
  std::optional<double> control;
  if (m.value("control", false)) {
    const auto same = tdlt_refutation(params, report.c1, report.c1);
    control = same.ks_standardized;
    out["control_ks"] = *control;
  }
  ctx.write_json("refutation.json", out);
  ctx.say("c1 = " + format_double(report.c1) + ", c2 = " + format_double(report.c2) +
          ", standardized KS = " + format_double(report.ks_standardized) + ", verdict " +
          report.verdict);
  const Json& e = expect(m);
  if (e.contains("verdict")) {
    const std::string want = e["verdict"].get<std::string>();
    ctx.check("verdict", report.verdict == want, report.verdict + " (expected " + want + ")");
  }
  if (e.contains("ks_min")) {
    const double tol = e["ks_min"].get<double>();
    ctx.check("standardized KS above threshold", report.ks_standardized > tol,
              format_double(report.ks_standardized) + " > " + format_double(tol));
  }
  if (control) ctx.check("c1 = c2 control gives 0", *control == 0.0, format_double(*control));
  if (e.contains("empirical_ks_max") && report.ks_empirical_c1) {
    const double tol = e["empirical_ks_max"].get<double>();
    const double worst = std::max(*report.ks_empirical_c1, *report.ks_empirical_c2);
    ctx.check("empirical temporal ECDFs match the analytic laws", worst <= tol,
              format_double(worst) + " <= " + format_double(tol));
  }
}

void run_isolated(Context& ctx) {
  const Json& m = ctx.m();
  std::vector<TorusPoint> betas;
  for (const auto& b : require(m, "betas")) {
    betas.push_back(wrap_field<TorusPoint>("betas", [&] { return point_from_json(b); }));
  }
  std::optional<double> delta;
  if (m.contains("delta")) delta = number_field(m, "delta");
  const std::uint64_t N_max = count_field(m, "N_max", 1);
  const auto r = wrap_field<IsolatedResult>("betas", [&] { return isolated_multipliers(betas, delta, N_max); });
  ctx.write_json("isolated.json", isolated_to_json(r));
  std::ostringstream csv;
  csv << "N\n";
  for (auto N : r.members) csv << N << '\n';
  ctx.write("members.csv", csv.str());
  ctx.say(std::to_string(r.members.size()) + " of " + std::to_string(N_max) +
          " multipliers isolated, density " + format_double(r.density));
  ctx.check("result is nonempty", !r.empty, r.empty ? "EmptyResult" : "");
  const Json& e = expect(m);
  if (e.contains("density")) {
    const double want = e["density"].get<double>();
    const double tol = e.value("tol", 0.05);
    ctx.check("density near expected value", std::fabs(r.density - want) <= tol,
              "|" + format_double(r.density) + " - " + format_double(want) + "| <= " + format_double(tol));
  }
}

void run_normal_form(Context& ctx) {
  const Json& m = ctx.m();
  const JumpFunction f = function_field(m);
  const AlphaSpec alpha = alpha_field(m);
  const TorusPoint x0 = point_field(m, "x0");
  const std::uint64_t N_max = count_field(m, "N_max", 10, 100000);
  if (N_max > 100'000'000) field_error("N_max", "limited to 10^8");
  const NormalForm h = normal_form(f);
  const SumOptions opt = ctx.sum_options();
  const auto sf = BirkhoffEngine(Summand(f), alpha, opt).prefix_sums(x0, N_max);
  const auto sh = BirkhoffEngine(Summand(h), alpha, opt).prefix_sums(x0, N_max);
  std::vector<double> running(N_max);
  double best = 0.0;
  for (std::uint64_t i = 0; i < N_max; ++i) {
    best = std::max(best, std::fabs(sf[i] - sh[i]));
    running[i] = best;
  }
  std::ostringstream csv;
  csv << "N,running_max\n";
  const std::uint64_t stride = std::max<std::uint64_t>(1, N_max / 1000);
  for (std::uint64_t N = stride; N <= N_max; N += stride) {
    csv << N << ',' << format_double(running[N - 1]) << '\n';
  }
  ctx.write("running_max.csv", csv.str());
  const std::uint64_t start = N_max / 10;
  const double r0 = running[start - 1];
  const double r1 = running[N_max - 1];
  const double slope = r0 > 0.0 ? std::log(r1 / r0) / std::log(static_cast<double>(N_max) / static_cast<double>(start)) : 0.0;
  Json out;
  out["normal_form"] = normal_form_to_json(h);
  out["N_max"] = N_max;
  out["running_max_at_N_max_over_10"] = r0;
  out["running_max_at_N_max"] = r1;
  out["log_log_slope_final_decade"] = slope;
  ctx.write_json("normal_form.json", out);
  ctx.say("max |S_N(f) - S_N(h)| = " + format_double(r1) + ", final-decade slope " + format_double(slope));
  const Json& e = expect(m);
  const double tol = e.value("max_slope", 0.05);
  ctx.check("running max flat over the final decade", slope < tol,
            "slope " + format_double(slope) + " < " + format_double(tol));
}

using Runner = void (*)(Context&);

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table = {
      {"cf-table", run_cf_table},       {"metric-stats", run_metric_stats},
      {"birkhoff", run_birkhoff},       {"dk-check", run_dk_check},
      {"limit-law", run_limit_law},     {"temporal-ecdf", run_temporal},
      {"refute-tdlt", run_refute},      {"isolated", run_isolated},
      {"normal-form", run_normal_form},
  };
  return table;
}

Json constructed(std::uint64_t a) {
  return Json{{"variant", "constructed"},
              {"plan", {{"targets", {10}}, {"forced", {{"11", a}}}, {"theta", 0.25}}}};
}

struct Builtin {
  std::string description;
  Json manifest;
};

const std::vector<std::pair<std::string, Builtin>>& builtins() {
  static const std::vector<std::pair<std::string, Builtin>> table = [] {
    std::vector<std::pair<std::string, Builtin>> t;
    auto add = [&](const std::string& name, const std::string& desc, Json m) {
      m["name"] = name;
      m["description"] = desc;
      t.emplace_back(name, Builtin{desc, std::move(m)});
    };
    add("cf-golden", "Convergent table of the golden ratio, k <= 30, with gcd and delta_k bound checks",
        {{"kind", "cf-table"}, {"alpha", "golden"}, {"K", 30}});
    add("cf-sqrt2", "Convergent table of sqrt(2) - 1, k <= 30, with gcd and delta_k bound checks",
        {{"kind", "cf-table"}, {"alpha", "sqrt2_minus_1"}, {"K", 30}});
    add("khintchine-levy-mc", "Mean of log q_50 / 50 over 1000 seeded uniform alphas vs pi^2/(12 log 2)",
        {{"kind", "metric-stats"},
         {"sample_size", 1000},
         {"k_depth", 50},
         {"seed", 20240601},
         {"expect", {{"levy_rel_tol", 0.05}}}});
    add("dk-golden-sawtooth", "Denjoy-Koksma |S_{q_n}| <= 2 for the sawtooth and golden alpha, n <= 20",
        {{"kind", "dk-check"},
         {"functions", {"sawtooth"}},
         {"alphas", {"golden"}},
         {"x0s", {"0", "1/10", "1/3"}},
         {"n_max", 20}});
    add("dk-suite", "Denjoy-Koksma for sawtooth and two indicators, golden and constructed alpha, three x0",
        {{"kind", "dk-check"},
         {"functions",
          {"sawtooth", {{"builtin", "indicator"}, {"gamma", "1/3"}},
           {{"builtin", "indicator"}, {"gamma", "2/7"}}}},
         {"alphas", {"golden", constructed(10000)}},
         {"x0s", {"0", "1/10", "1/3"}},
         {"n_max", 20}});
    Json rungs = Json::array();
    for (std::uint64_t a : {100, 1000, 10000}) rungs.push_back({{"alpha", constructed(a)}, {"n", 10}});
    add("lemma37-convergence-ladder",
        "Sup over c of |S_{floor(c a) q_n}/a - g(c)| for a_11 in {10^2, 10^3, 10^4}, sawtooth, x0 = 0",
        {{"kind", "limit-law"},
         {"function", "sawtooth"},
         {"x0", "0"},
         {"rungs", rungs},
         {"c_points", 101},
         {"expect", {{"monotone", true}, {"final_max", 0.05}}}});
    add("temporal-ecdf-vs-law",
        "Temporal ECDF of S_N / B~ at M(c = 1), a_11 = 10^4, against the law of g(U_1)",
        {{"kind", "temporal-ecdf"},
         {"function", "sawtooth"},
         {"alpha", constructed(10000)},
         {"x0", "0"},
         {"n", 10},
         {"c", 1.0},
         {"normalization", "paper_tilde_anchored"},
         {"expect", {{"ks_max", 0.05}}}});
    add("sawtooth-constructed-alpha",
        "Refutation with automatic (eps, delta) for the sawtooth limit law of a constructed alpha",
        {{"kind", "refute-tdlt"},
         {"function", "sawtooth"},
         {"alpha", constructed(10000)},
         {"x0", "0"},
         {"n", 10},
         {"empirical", true},
         {"control", true},
         {"expect", {{"verdict", "distinct"}, {"empirical_ks_max", 0.05}}}});
    add("sawtooth-half-vs-one",
        "Standardized laws of g(U_1/2) and g(U_1) for the pure sawtooth law with x0_bar = 0",
        {{"kind", "refute-tdlt"},
         {"law", {{"H", {1.0}}, {"gamma_bar", {0.0}}, {"x0_bar", 0.0}}},
         {"c1", 0.5},
         {"c2", 1.0},
         {"control", true},
         {"expect", {{"verdict", "distinct"}, {"ks_min", 0.05}}}});
    add("isolated-density", "Density of N <= 10^4 with ||N (sqrt 2 - 1)|| > 0.1",
        {{"kind", "isolated"},
         {"betas", {kSqrt2Literal}},
         {"delta", 0.1},
         {"N_max", 10000},
         {"expect", {{"density", 0.8}, {"tol", 0.05}}}});
    add("normal-form-boundedness",
        "Running max of |S_N(f) - S_N(h)| for f = {x}^2 - 1/3 and its normal form, golden alpha, N <= 10^5",
        {{"kind", "normal-form"},
         {"function", "frac_squared"},
         {"alpha", "golden"},
         {"x0", "0"},
         {"N_max", 100000},
         {"expect", {{"max_slope", 0.05}}}});
    add("birkhoff-golden-trace", "Sawtooth Birkhoff sums along the golden rotation, N <= 10^5, stride 100",
        {{"kind", "birkhoff"},
         {"function", "sawtooth"},
         {"alpha", "golden"},
         {"x0", "0"},
         {"N", 100000},
         {"trace_stride", 100}});
    return t;
  }();
  return table;
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kPrecisionExhausted:
    case ErrorCode::kJumpCollision:
      return kExitPrecision;
    case ErrorCode::kConstructionFailed:
    case ErrorCode::kNoConvergence:
    case ErrorCode::kDegenerateG:
      return kExitCheckFailed;
    case ErrorCode::kInvalidInput:
    case ErrorCode::kRationalInput:
    case ErrorCode::kNoJump:
    case ErrorCode::kSizeLimit:
      return kExitInputError;
  }
  return kExitInputError;
}

bool RunResult::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::vector<std::string> manifest_kinds() {
  std::vector<std::string> out;
  for (const auto& [k, _] : runners()) out.push_back(k);
  return out;
}

std::vector<ScenarioInfo> list_scenarios() {
  std::vector<ScenarioInfo> out;
  for (const auto& [name, b] : builtins()) out.push_back(ScenarioInfo{name, b.description});
  return out;
}

Json builtin_manifest(const std::string& name) {
  for (const auto& [n, b] : builtins()) {
    if (n == name) return b.manifest;
  }
  fail(ErrorCode::kInvalidInput, "unknown builtin scenario '" + name + "'");
}

Json load_manifest(const std::string& ref) {
  const std::string prefix = "builtin:";
  if (ref.rfind(prefix, 0) == 0) return builtin_manifest(ref.substr(prefix.size()));
  if (!fs::exists(ref)) return builtin_manifest(ref);
  std::ifstream in(ref);
  if (!in) fail(ErrorCode::kInvalidInput, "cannot read manifest " + ref);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::kInvalidInput, std::string("manifest is not valid JSON: ") + e.what());
  }
}

RunResult run(const Json& manifest, const RunOptions& options) {
  if (!manifest.is_object()) fail(ErrorCode::kInvalidInput, "manifest must be a JSON object");
  RunResult r;
  const auto& kind = require(manifest, "kind");
  if (!kind.is_string()) field_error("kind", "expected a string");
  r.kind = kind.get<std::string>();
  const auto it = runners().find(r.kind);
  if (it == runners().end()) field_error("kind", "unknown kind '" + r.kind + "'");
  r.name = manifest.value("name", r.kind);
  if (r.name.empty() || r.name.find_first_of("/\\") != std::string::npos || r.name == "." ||
      r.name == "..") {
    field_error("name", "must be a plain file name");
  }
  Context ctx(manifest, options, r);
  try {
    it->second(ctx);
  } catch (const Json::exception& e) {
    fail(ErrorCode::kInvalidInput, std::string("manifest: ") + e.what());
  }
  return r;
}

std::string format_summary(const RunResult& r) {
  std::ostringstream out;
  out << "scenario " << r.name << " (" << r.kind << ")\n";
  for (const auto& line : r.summary) out << "  " << line << '\n';
  for (const auto& c : r.checks) {
    out << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name;
    if (!c.detail.empty()) out << ": " << c.detail;
    out << '\n';
  }
  for (const auto& f : r.files) out << "  wrote " << f.string() << '\n';
  out << (r.all_pass() ? "all checks pass" : "some checks failed") << '\n';
  return out.str();
}

}  // namespace rotlab

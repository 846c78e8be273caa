#include "rotlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "rotlab/error.hpp"

namespace rotlab {
namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  fail(ErrorCode::kInvalidInput, "field '" + field + "': " + what);
}

const Json& require(const Json& j, const std::string& field) {
  if (!j.is_object()) field_error(field, "enclosing value is not an object");
  const auto it = j.find(field);
  if (it == j.end()) field_error(field, "missing");
  return *it;
}

Integer integer_from_json(const Json& j, const std::string& field) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<long long>()), 10);
  if (j.is_string()) {
    try {
      return Integer(j.get<std::string>(), 10);
    } catch (const std::invalid_argument&) {
      field_error(field, "not an integer");
    }
  }
  field_error(field, "expected an integer");
}

Digit digit_from_json(const Json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 1) field_error(field, "digits must be >= 1");
  return j.get<Digit>();
}

std::vector<Digit> digits_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "expected an array of digits");
  std::vector<Digit> out;
  for (const auto& d : j) out.push_back(digit_from_json(d, field));
  return out;
}

std::map<std::size_t, Digit> forced_from_json(const Json& j, const std::string& field) {
  std::map<std::size_t, Digit> out;
  if (j.is_null()) return out;
  if (!j.is_object()) field_error(field, "expected an object {\"index\": digit}");
  for (const auto& [key, value] : j.items()) {
    std::size_t k = 0;
    try {
      k = std::stoull(key);
    } catch (const std::exception&) {
      field_error(field, "key '" + key + "' is not an index");
    }
    if (k < 1) field_error(field, "indices start at 1");
    out[k] = digit_from_json(value, field);
  }
  return out;
}

Json forced_to_json(const std::map<std::size_t, Digit>& forced) {
  Json out = Json::object();
  for (const auto& [k, v] : forced) out[std::to_string(k)] = v;
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

IndexPlan plan_from_json(const Json& j) {
  if (!j.is_object()) field_error("plan", "expected an object");
  IndexPlan plan;
  for (const auto& t : require(j, "targets")) {
    if (!t.is_number_integer() || t.get<long long>() < 1) field_error("plan.targets", "expected indices >= 1");
    plan.target_indices.push_back(t.get<std::size_t>());
  }
  plan.forced_quotients = forced_from_json(j.value("forced", Json()), "plan.forced");
  if (j.contains("congruence")) {
    const auto& c = j["congruence"];
    plan.congruence = Congruence{c.at("residue").get<std::uint64_t>(),
                                 c.at("modulus").get<std::uint64_t>()};
  }
  plan.theta = j.value("theta", plan.theta);
  if (j.contains("parity")) {
    const std::string p = j["parity"].get<std::string>();
    if (p == "even") {
      plan.parity = Parity::kEven;
    } else if (p == "odd") {
      plan.parity = Parity::kOdd;
    } else {
      field_error("plan.parity", "expected \"even\" or \"odd\"");
    }
  }
  plan.search_radius = j.value("search_radius", plan.search_radius);
  plan.validate();
  return plan;
}

Json plan_to_json(const IndexPlan& plan) {
  Json out;
  out["targets"] = plan.target_indices;
  out["forced"] = forced_to_json(plan.forced_quotients);
  if (plan.congruence) {
    out["congruence"] = {{"residue", plan.congruence->residue},
                         {"modulus", plan.congruence->modulus}};
  }
  out["theta"] = plan.theta;
  out["parity"] = plan.parity == Parity::kEven ? "even" : "odd";
  out["search_radius"] = plan.search_radius;
  return out;
}

AlphaSpec alpha_from_json(const Json& j) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "golden") return AlphaSpec::golden();
    if (name == "sqrt2_minus_1") return AlphaSpec::sqrt2_minus_1();
    field_error("alpha", "unknown shorthand '" + name + "'");
  }
  const std::string variant = require(j, "variant").get<std::string>();
  if (variant == "digit_rule") {
    DigitRule rule;
    if (j.contains("prefix")) rule.prefix = digits_from_json(j["prefix"], "alpha.prefix");
    if (j.contains("tail")) {
      const auto& t = j["tail"];
      const std::string kind = require(t, "kind").get<std::string>();
      if (kind == "constant") {
        rule.tail = TailRule::constant(digit_from_json(require(t, "value"), "alpha.tail.value"));
      } else if (kind == "periodic") {
        rule.tail = TailRule::periodic(digits_from_json(require(t, "period"), "alpha.tail.period"));
      } else {
        field_error("alpha.tail.kind", "expected \"constant\" or \"periodic\"");
      }
    }
    rule.forced = forced_from_json(j.value("forced", Json()), "alpha.forced");
    return AlphaSpec(std::move(rule));
  }
  if (variant == "surd") {
    QuadraticSurd s{integer_from_json(require(j, "p"), "alpha.p"),
                    integer_from_json(require(j, "d"), "alpha.d"),
                    integer_from_json(require(j, "q"), "alpha.q")};
    return AlphaSpec(std::move(s));
  }
  if (variant == "literal") {
    PrecisionLiteral lit;
    lit.decimal = require(j, "decimal").get<std::string>();
    lit.bits = j.value("bits", lit.bits);
    return AlphaSpec(std::move(lit));
  }
  if (variant == "constructed") {
    return construct_alpha(plan_from_json(require(j, "plan"))).alpha;
  }
  field_error("alpha.variant", "unknown variant '" + variant + "'");
}

Json alpha_to_json(const AlphaSpec& alpha) {
  Json out;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, DigitRule>) {
          out["variant"] = "digit_rule";
          out["prefix"] = v.prefix;
          switch (v.tail.kind) {
            case TailRule::Kind::kConstant:
              out["tail"] = {{"kind", "constant"}, {"value", v.tail.value}};
              break;
            case TailRule::Kind::kPeriodic:
              out["tail"] = {{"kind", "periodic"}, {"period", v.tail.period}};
              break;
            case TailRule::Kind::kIndexed:
              out["tail"] = {{"kind", "custom"}};
              break;
          }
          out["forced"] = forced_to_json(v.forced);
        } else if constexpr (std::is_same_v<T, QuadraticSurd>) {
          out["variant"] = "surd";
          out["p"] = mpz_fits_slong_p(v.p.get_mpz_t()) ? Json(v.p.get_si()) : Json(to_string(v.p));
          out["d"] = mpz_fits_slong_p(v.d.get_mpz_t()) ? Json(v.d.get_si()) : Json(to_string(v.d));
          out["q"] = mpz_fits_slong_p(v.q.get_mpz_t()) ? Json(v.q.get_si()) : Json(to_string(v.q));
        } else {
          out["variant"] = "literal";
          out["decimal"] = v.decimal;
          out["bits"] = v.bits;
        }
      },
      alpha.variant());
  return out;
}

TorusPoint point_from_json(const Json& j) {
  if (j.is_string()) return TorusPoint::parse(j.get<std::string>());
  if (j.is_number()) return TorusPoint::from_double(j.get<double>());
  fail(ErrorCode::kInvalidInput, "torus point must be a string or a number");
}

JumpFunction function_from_json(const Json& j) {
  JumpFunction f;
  if (j.is_string() || j.contains("builtin")) {
    const std::string name = j.is_string() ? j.get<std::string>() : j["builtin"].get<std::string>();
    if (name == "sawtooth") {
      f = JumpFunction::sawtooth();
    } else if (name == "frac_squared") {
      f = JumpFunction::frac_squared();
    } else if (name == "indicator") {
      f = JumpFunction::indicator(point_from_json(require(j, "gamma")));
    } else {
      field_error("function.builtin", "unknown builtin '" + name + "'");
    }
  } else {
    for (const auto& jump : require(j, "jumps")) {
      const auto& h = require(jump, "H");
      if (!h.is_number()) field_error("function.jumps.H", "expected a number");
      f.jumps.push_back(Jump{point_from_json(require(jump, "gamma")), h.get<double>()});
    }
    if (j.contains("smooth")) {
      const auto& s = j["smooth"];
      if (s.is_string()) {
        if (s.get<std::string>() != "none") field_error("function.smooth", "expected \"none\" or {\"poly\": [...]}");
      } else {
        for (const auto& c : require(s, "poly")) f.smooth.push_back(c.get<double>());
      }
    }
  }
  f.validate();
  return f;
}

Json function_to_json(const JumpFunction& f) {
  Json out;
  out["jumps"] = Json::array();
  for (const auto& j : f.jumps) out["jumps"].push_back({{"gamma", j.gamma.to_string()}, {"H", j.H}});
  if (f.smooth.empty()) {
    out["smooth"] = "none";
  } else {
    out["smooth"] = {{"poly", f.smooth}};
  }
  return out;
}

Json normal_form_to_json(const NormalForm& h) {
  Json out;
  out["total_jump"] = h.total_jump;
  out["indicator_terms"] = Json::array();
  for (const auto& j : h.indicator_terms) {
    out["indicator_terms"].push_back({{"gamma", j.gamma.to_string()}, {"H", j.H}});
  }
  out["shifted"] = h.shifted;
  out["shift"] = h.shift.to_string();
  return out;
}

LimitLawParams params_from_json(const Json& j) {
  LimitLawParams p;
  p.H = require(j, "H").get<std::vector<double>>();
  p.gamma_bar = require(j, "gamma_bar").get<std::vector<double>>();
  p.x0_bar = j.value("x0_bar", 0.0);
  p.c = j.value("c", 1.0);
  p.validate();
  return p;
}

Json params_to_json(const LimitLawParams& p) {
  return Json{{"H", p.H}, {"gamma_bar", p.gamma_bar}, {"x0_bar", p.x0_bar}, {"c", p.c}};
}

Json bars_to_json(const BarLimits& bars) {
  Json out;
  out["x0_bar"] = bars.x0_bar.to_string();
  out["gamma_bars"] = Json::array();
  for (const auto& g : bars.gamma_bars) out["gamma_bars"].push_back(g.to_string());
  out["subsequence"] = bars.subsequence;
  out["certainty"] = bars.certainty == BarMode::kExact ? "exact" : "clustered";
  out["radius"] = bars.radius;
  out["separation"] = std::isfinite(bars.separation) ? Json(bars.separation) : Json();
  return out;
}

Json report_to_json(const RefutationReport& r) {
  Json out;
  out["c1"] = r.c1;
  out["c2"] = r.c2;
  out["eps"] = r.eps;
  out["delta"] = r.delta;
  out["automatic"] = r.automatic;
  out["ks_standardized"] = r.ks_standardized;
  out["ks_empirical_c1"] = r.ks_empirical_c1 ? Json(*r.ks_empirical_c1) : Json();
  out["ks_empirical_c2"] = r.ks_empirical_c2 ? Json(*r.ks_empirical_c2) : Json();
  out["verdict"] = r.verdict;
  return out;
}

Json isolated_to_json(const IsolatedResult& r) {
  Json out;
  out["delta"] = r.delta;
  out["N_max"] = r.N_max;
  out["count"] = r.members.size();
  out["density"] = r.density;
  out["lower_density"] = r.lower_density;
  out["empty"] = r.empty;
  out["rational_modulus"] = r.rational_modulus;
  out["congruence_density"] = r.congruence_density;
  out["proof_bound"] = r.proof_bound;
  return out;
}

void write_convergents_csv(std::ostream& out, const std::vector<Convergent>& table) {
  out << "k,a,p,q,delta\n";
  for (const auto& c : table) {
    out << c.k << ',' << c.a << ',' << to_string(c.p) << ',' << to_string(c.q) << ','
        << format_double(c.delta()) << '\n';
  }
}

void write_trace_csv(std::ostream& out, const std::vector<double>& prefix, std::uint64_t stride) {
  if (stride == 0) stride = 1;
  out << "N,S_N\n";
  for (std::uint64_t N = stride; N <= prefix.size(); N += stride) {
    out << N << ',' << format_double(prefix[N - 1]) << '\n';
  }
}

void write_ecdf_csv(std::ostream& out, const EmpiricalCDF& F) {
  out << "value,F\n";
  const auto& v = F.values();
  const double n = static_cast<double>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i + 1 < v.size() && v[i + 1] == v[i]) continue;
    out << format_double(v[i]) << ',' << format_double(static_cast<double>(i + 1) / n) << '\n';
  }
}

void write_g_csv(std::ostream& out, const PiecewiseQuadratic& g, std::size_t points) {
  out << "x,g\n";
  for (std::size_t i = 0; i < points; ++i) {
    const double x = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    out << format_double(x) << ',' << format_double(g(x)) << '\n';
  }
}

void write_law_csv(std::ostream& out, const Law& law, std::size_t points) {
  out << "x,cdf\n";
  const double lo = law.lower();
  const double hi = law.upper();
  for (std::size_t i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    const double x = lo + t * (hi - lo);
    out << format_double(x) << ',' << format_double(law.cdf(x)) << '\n';
  }
}

}  // namespace rotlab

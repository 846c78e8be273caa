// lab: run reproduction scenarios for Birkhoff sums of rotations.
//
//   lab run <manifest.json | builtin:NAME> [--workers N] [--bits B] [--out DIR]
//   lab list
//   lab show NAME
//   lab cf --alpha golden --K 10
//   lab birkhoff --function sawtooth --alpha golden --N 100000
//   lab temporal --function sawtooth --alpha '{...}' --n 10 --c 1

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rotlab/manifest.hpp"

using rotlab::Json;

namespace {

// Flags may carry JSON ('{"variant": ...}', '[...]', numbers) or bare words.
Json flag_json(const std::string& text) {
  const auto parsed = Json::parse(text, nullptr, false);
  if (parsed.is_discarded()) return Json(text);
  return parsed;
}

int execute(const Json& manifest, const rotlab::RunOptions& options) {
  const auto result = rotlab::run(manifest, options);
  std::cout << rotlab::format_summary(result);
  return result.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Birkhoff sums of irrational rotations: scenarios and checks"};
  app.require_subcommand(1);

  rotlab::RunOptions options;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--workers", options.workers, "Worker threads (0 = all cores)");
    sub->add_option("--bits", options.bits, "Fixed-point precision in bits");
    sub->add_option("--out", options.out_dir, "Output directory");
  };

  std::string manifest_ref;
  auto* run_cmd = app.add_subcommand("run", "Run a manifest file or builtin:NAME");
  run_cmd->add_option("manifest", manifest_ref, "Manifest path or builtin name")->required();
  add_common(run_cmd);

  auto* list_cmd = app.add_subcommand("list", "List the built-in scenarios");

  std::string show_name;
  auto* show_cmd = app.add_subcommand("show", "Print a built-in manifest");
  show_cmd->add_option("name", show_name)->required();

  std::string alpha = "golden";
  std::string function = "sawtooth";
  std::string x0 = "0";

  unsigned K = 30;
  auto* cf_cmd = app.add_subcommand("cf", "Convergent table");
  cf_cmd->add_option("--alpha", alpha, "golden, sqrt2_minus_1 or AlphaSpec JSON");
  cf_cmd->add_option("--K", K, "Largest index");
  add_common(cf_cmd);

  std::uint64_t N = 100000;
  std::uint64_t stride = 0;
  auto* bk_cmd = app.add_subcommand("birkhoff", "Birkhoff sum S_N and optional trace");
  bk_cmd->add_option("--function", function, "sawtooth, frac_squared or function JSON");
  bk_cmd->add_option("--alpha", alpha, "golden, sqrt2_minus_1 or AlphaSpec JSON");
  bk_cmd->add_option("--x0", x0, "Starting point");
  bk_cmd->add_option("--N", N, "Number of terms");
  bk_cmd->add_option("--trace-stride", stride, "Write every stride-th prefix sum");
  add_common(bk_cmd);

  unsigned n = 10;
  double c = 1.0;
  std::string normalization = "paper_tilde_anchored";
  std::optional<double> ks_max;
  auto* tp_cmd = app.add_subcommand("temporal", "Temporal ECDF against the limit law");
  tp_cmd->add_option("--function", function, "sawtooth, frac_squared or function JSON");
  tp_cmd->add_option("--alpha", alpha, "AlphaSpec JSON or shorthand");
  tp_cmd->add_option("--x0", x0, "Starting point");
  tp_cmd->add_option("--n", n, "Convergent index");
  tp_cmd->add_option("--c", c, "Fraction c in (0,1]");
  tp_cmd->add_option("--normalization", normalization,
                     "explicit, paper_tilde or paper_tilde_anchored");
  tp_cmd->add_option("--ks-max", ks_max, "Fail if the KS distance exceeds this");
  add_common(tp_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list_cmd) {
      for (const auto& s : rotlab::list_scenarios()) {
        std::printf("%-28s %s\n", s.name.c_str(), s.description.c_str());
      }
      return rotlab::kExitOk;
    }
    if (*show_cmd) {
      std::cout << rotlab::builtin_manifest(show_name).dump(2) << '\n';
      return rotlab::kExitOk;
    }
    if (*run_cmd) return execute(rotlab::load_manifest(manifest_ref), options);
    if (*cf_cmd) {
      return execute(Json{{"name", "cf"}, {"kind", "cf-table"}, {"alpha", flag_json(alpha)}, {"K", K}},
                     options);
    }
    if (*bk_cmd) {
      return execute(Json{{"name", "birkhoff"},
                          {"kind", "birkhoff"},
                          {"function", flag_json(function)},
                          {"alpha", flag_json(alpha)},
                          {"x0", x0},
                          {"N", N},
                          {"trace_stride", stride}},
                     options);
    }
    if (*tp_cmd) {
      Json m{{"name", "temporal"},
             {"kind", "temporal-ecdf"},
             {"function", flag_json(function)},
             {"alpha", flag_json(alpha)},
             {"x0", x0},
             {"n", n},
             {"c", c},
             {"normalization", normalization}};
      if (ks_max) m["expect"] = {{"ks_max", *ks_max}};
      return execute(m, options);
    }
  } catch (const rotlab::LabError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return rotlab::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return rotlab::kExitInputError;
  }
  return rotlab::kExitOk;
}

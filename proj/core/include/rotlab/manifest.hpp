#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rotlab/error.hpp"
#include "rotlab/io.hpp"

namespace rotlab {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitInputError = 2,
  kExitPrecision = 3,
};

int exit_code_for(ErrorCode code) noexcept;

struct RunOptions {
  unsigned workers = 0;
  unsigned bits = 0;  // 0 keeps the manifest value or the default
  std::filesystem::path out_dir = "out";
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunResult {
  std::string name;
  std::string kind;
  std::vector<std::string> summary;
  std::vector<Check> checks;
  std::vector<std::filesystem::path> files;

  bool all_pass() const;
  int exit_code() const { return all_pass() ? kExitOk : kExitCheckFailed; }
};

struct ScenarioInfo {
  std::string name;
  std::string description;
};

// Kinds: cf-table, metric-stats, birkhoff, dk-check, limit-law,
// temporal-ecdf, refute-tdlt, isolated, normal-form.
std::vector<std::string> manifest_kinds();

std::vector<ScenarioInfo> list_scenarios();

// InvalidInput for unknown names.
Json builtin_manifest(const std::string& name);

// "builtin:NAME", a bare builtin name, or a path to a JSON file.
Json load_manifest(const std::string& ref);

// Runs a manifest and writes its outputs under out_dir/<name>/. Module
// errors propagate as LabError.
RunResult run(const Json& manifest, const RunOptions& options);

// One-page text summary with one line per internal check.
std::string format_summary(const RunResult& r);

}  // namespace rotlab

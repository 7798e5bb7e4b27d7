#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vstate/continuation.hpp"

namespace vstate {

struct ContinuationConfig {
  ContinuationSettings run;
  std::vector<double> local_eps{0.01, 0.02, 0.03, 0.04, 0.05};  // multiples of l
  std::filesystem::path out_dir = "out";
  std::string prefix = "branch";
};

// TOML file (optional) plus `key=value` overrides with dotted keys, e.g.
// "floors.separation=0.1" or "newton.max_iter=40". Unknown keys, wrong types
// and invalid values raise ErrorKind::config.
ContinuationConfig load_config(const std::optional<std::filesystem::path>& file,
                               const std::vector<std::string>& overrides);
ContinuationConfig config_from_toml(const std::string& text, const std::vector<std::string>& overrides);
void validate(const ContinuationConfig& c);

// One JSONL line. Self-contained: l, kind and M are repeated so a row can be
// re-evaluated on its own.
struct BranchRow {
  double l = 1.0;
  PairKind kind = PairKind::corotating;
  int M = 0;
  double s = 0.0;
  double eps = 0.0;
  double speed = 0.0;
  double residual = 0.0;
  std::array<double, 6> monitors{};
  int winding = 0;
  double koebe_sup = 0.0;
  double truncation = 0.0;
  std::vector<double> coeffs;
  double ds = 0.0;
  double ds_next = 0.0;
  int step = 0;
  int refinements = 0;
  bool seed = false;
  int iterations = 0;
  double condition = 0.0;

  friend bool operator==(const BranchRow&, const BranchRow&) = default;
};

BranchRow row_from_entry(const BranchEntry& e);
BranchRow row_from_point(const SolutionPoint& p, double s);
// Rebuilds the point (speed and diagnostics recomputed from the coefficients).
BranchEntry entry_from_row(const BranchRow& r);
FourierBoundary boundary_of(const BranchRow& r);

std::string to_json_line(const BranchRow& r);
BranchRow row_from_json_line(const std::string& line);
void write_jsonl(const std::filesystem::path& path, const std::vector<BranchRow>& rows);
std::vector<BranchRow> read_jsonl(const std::filesystem::path& path);

void write_csv(const std::filesystem::path& path, const std::vector<BranchRow>& rows);

// Contour plot of both boundaries z = +-(eps phi(w) + l).
std::string contour_svg(const BranchRow& r, int samples = 400);
// Scaled monitors against arclength.
std::string monitor_svg(const std::vector<BranchRow>& rows);

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_solver = 3, exit_floor = 4 };

// Command drivers; they write files under the output directory, print a short
// report to `log` and return the process exit code.
int cmd_local(const ContinuationConfig& c, std::ostream& log);
int cmd_continue(const ContinuationConfig& c, const std::optional<std::filesystem::path>& seed_from,
                 std::ostream& log);
int cmd_diagnose(const std::filesystem::path& branch, const std::optional<std::filesystem::path>& report,
                 std::ostream& log);
int cmd_plot(const std::filesystem::path& branch, const std::vector<int>& indices,
             const std::filesystem::path& out_dir, std::ostream& log);

// Error record written next to the outputs on failure.
void write_error_record(const std::filesystem::path& path, std::string_view kind, const std::string& message);

}  // namespace vstate

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sygr/bootstrap.hpp"
#include "sygr/ingest.hpp"

namespace sygr::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kValidationFail = 3 };

// Bad flags or an unusable configuration (exit status 1).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::size_t replicates = 1000;
  double ci_level = 0.95;
  std::optional<int> horizon_year;
  std::vector<int> cohorts;
  std::vector<std::string> methods;
  bool aalana = false;
  bool first_gen = false;
  std::optional<std::string> college;
  std::string la = "all";
  bool export_ensemble = false;
  bool combined = false;       // estimate: add an "All combined" row
  bool strata = false;         // compare: repeat within AALANA / first-generation
  bool corrupt_hook = false;   // validate: perturb reduced-Markov counts (negative control)
  std::string spec_path;       // synth
  std::optional<double> bandwidth;  // plot
  std::string title;                // plot

  BootstrapConfig bootstrap() const { return {replicates, seed, ci_level}; }
  SubgroupSpec subgroup() const;  // throws UsageError for an unknown --la value
  // Canonical `key = value` lines of everything that affects results
  // (the output directory excluded).
  std::string canonical() const;
};

// Parses argv and dispatches. Never throws; returns the exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_estimate(const RunConfig& cfg, std::ostream& out);
int cmd_validate(const RunConfig& cfg, std::ostream& out);
int cmd_compare(const RunConfig& cfg, std::ostream& out);
int cmd_synth(const RunConfig& cfg, std::ostream& out);
int cmd_plot(const RunConfig& cfg, std::ostream& out);

// Helpers shared by the commands.
std::vector<StudentRecord> load_records(const std::vector<std::string>& paths);
void prepare_out_dir(const std::filesystem::path& dir);
void write_text_file(const std::filesystem::path& path, const std::string& content);
// metadata.txt sidecar: tool, version, command, seed, config hash, config lines
// and any extra key/value pairs.
void write_metadata(const RunConfig& cfg,
                    const std::vector<std::pair<std::string, std::string>>& extra = {});

}  // namespace sygr::cli

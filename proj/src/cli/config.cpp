#include <cstdio>
#include <fstream>
#include <sstream>

#include "sygr/cli.hpp"
#include "sygr/error.hpp"
#include "sygr/report.hpp"
#include "sygr/synth.hpp"

namespace sygr::cli {

namespace {

template <typename T>
std::string join(const std::vector<T>& values) {
  std::ostringstream out;
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i];
  return out.str();
}

}  // namespace

SubgroupSpec RunConfig::subgroup() const {
  SubgroupSpec spec;
  spec.aalana_only = aalana;
  spec.first_gen_only = first_gen;
  spec.college = college;
  if (la == "all") {
    spec.la_group = LaGroup::All;
  } else if (la == "exposed") {
    spec.la_group = LaGroup::Exposed;
  } else if (la == "unexposed") {
    spec.la_group = LaGroup::Unexposed;
  } else {
    throw UsageError("--la must be exposed, unexposed or all");
  }
  return spec;
}

std::string RunConfig::canonical() const {
  std::ostringstream out;
  out << "command = " << command << '\n';
  out << "input = " << join(inputs) << '\n';
  out << "seed = " << seed << '\n';
  out << "replicates = " << replicates << '\n';
  out << "ci = " << format_double(ci_level) << '\n';
  out << "horizon = " << (horizon_year ? std::to_string(*horizon_year) : "") << '\n';
  out << "cohort = " << join(cohorts) << '\n';
  out << "method = " << join(methods) << '\n';
  out << "aalana = " << (aalana ? "true" : "false") << '\n';
  out << "first-gen = " << (first_gen ? "true" : "false") << '\n';
  out << "college = " << college.value_or("") << '\n';
  out << "la = " << la << '\n';
  out << "export-ensemble = " << (export_ensemble ? "true" : "false") << '\n';
  out << "combined = " << (combined ? "true" : "false") << '\n';
  out << "strata = " << (strata ? "true" : "false") << '\n';
  out << "corrupt-test-hook = " << (corrupt_hook ? "true" : "false") << '\n';
  out << "spec = " << spec_path << '\n';
  out << "bandwidth = " << (bandwidth ? format_double(*bandwidth) : "") << '\n';
  out << "title = " << title << '\n';
  return out.str();
}

std::vector<StudentRecord> load_records(const std::vector<std::string>& paths) {
  if (paths.empty()) throw UsageError("--input is required");
  std::vector<StudentRecord> all;
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open input '" + path + "'");
    try {
      auto part = parse_records(in);
      all.insert(all.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
    } catch (const Error& e) {
      throw Error(path + ": " + e.what());
    }
  }
  check_unique_ids(all);
  return all;
}

void prepare_out_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw UsageError("cannot create output directory '" + dir.string() + "'");
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw UsageError("failed writing '" + path.string() + "'");
}

void write_metadata(const RunConfig& cfg,
                    const std::vector<std::pair<std::string, std::string>>& extra) {
  const std::string config = cfg.canonical();
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a64(config)));

  std::ostringstream out;
  out << "tool = sygr\n";
  out << "version = " << kToolVersion << '\n';
  out << "command = " << cfg.command << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "config_hash = fnv1a64:" << hash << '\n';
  for (const auto& [k, v] : extra) out << k << " = " << v << '\n';
  std::istringstream lines(config);
  std::string line;
  while (std::getline(lines, line)) out << "config." << line << '\n';
  write_text_file(cfg.out_dir / "metadata.txt", out.str());
}

}  // namespace sygr::cli

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "sygr/cli.hpp"
#include "sygr/error.hpp"
#include "sygr/estimate.hpp"
#include "sygr/kde.hpp"
#include "sygr/report.hpp"
#include "sygr/rng.hpp"
#include "sygr/svg_plot.hpp"
#include "sygr/synth.hpp"

namespace sygr::cli {

namespace {

int require_horizon(const RunConfig& cfg) {
  if (!cfg.horizon_year) throw UsageError("--horizon is required");
  return *cfg.horizon_year;
}

std::vector<EstimatorKind> parse_methods(const std::vector<std::string>& names) {
  std::vector<EstimatorKind> kinds;
  for (const auto& name : names) {
    const auto kind = parse_estimator(name);
    if (!kind) throw UsageError("unknown --method '" + name + "'");
    if (std::find(kinds.begin(), kinds.end(), *kind) == kinds.end()) kinds.push_back(*kind);
  }
  if (kinds.empty()) kinds.push_back(EstimatorKind::MarkovFull);
  return kinds;
}

std::string file_safe(std::string s) {
  for (char& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.')) c = '_';
  }
  return s;
}

void write_summaries(const RunConfig& cfg, std::span<const SummaryRow> rows, std::ostream& out) {
  std::ostringstream csv, full, text;
  write_summary_csv(csv, rows, cfg.ci_level);
  write_summary_full_csv(full, rows, cfg.ci_level);
  write_summary_text(text, rows, cfg.ci_level);
  write_text_file(cfg.out_dir / "summary.csv", csv.str());
  write_text_file(cfg.out_dir / "summary_full.csv", full.str());
  write_text_file(cfg.out_dir / "summary.txt", text.str());
  if (cfg.export_ensemble) {
    for (const auto& r : rows) {
      std::ostringstream e;
      write_ensemble_csv(e, r.summary);
      write_text_file(cfg.out_dir / ("ensemble_" + file_safe(r.cohort) + "_" +
                                     file_safe(std::string(r.method)) + ".csv"),
                      e.str());
    }
  }
  out << text.str();
}

SummaryRow run_row(std::span<const StudentRecord> records, const EstimatorSpec& spec,
                   const RunConfig& cfg, std::string cohort_label) {
  SummaryRow row;
  row.cohort = std::move(cohort_label);
  row.method = std::string(estimator_name(spec.kind));
  row.point = estimate(records, spec);
  row.summary = bootstrap(records, spec, cfg.bootstrap());
  return row;
}

std::vector<StudentRecord> selected_records(const RunConfig& cfg) {
  const auto all = load_records(cfg.inputs);
  auto records = filter_subgroup(all, cfg.subgroup());
  if (records.empty()) throw EmptyCohort("the selected subgroup contains no students");
  return records;
}

std::string hex_hash(const std::string& text) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a64(text)));
  return buf;
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Options from a `--config FILE` are spliced in as flags, unless the same flag
// was given explicitly.
std::vector<std::string> with_config_file(const CLI::App& app, const std::vector<std::string>& args) {
  if (args.empty()) return args;
  const CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(args[0]);
  } catch (const CLI::OptionNotFound&) {
    return args;
  }
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config '" + path + "'");
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(in);
  } catch (const CLI::ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }

  std::vector<std::string> out = args;
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents[0] == sub->get_name())) {
      continue;
    }
    const std::string flag = "--" + item.name;
    if (item.name == "config") throw UsageError(path + ": nested config files are not supported");
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (opt == nullptr) throw UsageError(path + ": unknown key '" + item.name + "'");
    if (given_on_command_line(args, flag)) continue;
    if (opt->get_expected_max() == 0) {
      if (item.inputs.size() != 1 || (item.inputs[0] != "true" && item.inputs[0] != "false")) {
        throw UsageError(path + ": '" + item.name + "' takes true or false");
      }
      if (item.inputs[0] == "true") out.push_back(flag);
      continue;
    }
    std::vector<std::string> values;
    for (const auto& v : item.inputs) {
      if (opt->get_expected_max() > 1) {
        std::istringstream parts(v);
        std::string part;
        while (std::getline(parts, part, ',')) {
          std::istringstream words(part);
          std::string w;
          while (words >> w) values.push_back(w);
        }
      } else {
        values.push_back(v);
      }
    }
    for (const auto& v : values) {
      out.push_back(flag);
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace

int cmd_estimate(const RunConfig& cfg, std::ostream& out) {
  const int horizon = require_horizon(cfg);
  const auto kinds = parse_methods(cfg.methods);
  const auto bcfg = cfg.bootstrap();
  bcfg.validate();
  const auto records = selected_records(cfg);
  const bool truncate = cfg.subgroup().la_group == LaGroup::Exposed;

  const bool needs_cohort = std::any_of(kinds.begin(), kinds.end(), [](EstimatorKind k) {
    return k != EstimatorKind::MarkovFull;
  });
  if (needs_cohort && cfg.cohorts.empty()) {
    throw UsageError("--cohort is required for traditional and markov-reduced");
  }
  prepare_out_dir(cfg.out_dir);

  std::vector<std::pair<std::string, std::vector<int>>> targets;
  for (int c : cfg.cohorts) targets.push_back({std::to_string(c), {c}});
  if (cfg.combined && cfg.cohorts.size() > 1) targets.push_back({"All combined", cfg.cohorts});
  if (targets.empty()) targets.push_back({"all", {}});

  std::vector<SummaryRow> rows;
  for (const auto& [label, cohorts] : targets) {
    for (auto kind : kinds) {
      EstimatorSpec spec{kind, cohorts, horizon,
                         truncate && kind != EstimatorKind::Traditional};
      rows.push_back(run_row(records, spec, cfg, label));
    }
  }
  write_summaries(cfg, rows, out);
  write_metadata(cfg, {{"records", std::to_string(records.size())}});
  return kOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const int horizon = require_horizon(cfg);
  const auto bcfg = cfg.bootstrap();
  bcfg.validate();
  const auto records = selected_records(cfg);
  prepare_out_dir(cfg.out_dir);

  std::vector<int> cohorts = cfg.cohorts;
  if (cohorts.empty()) {
    std::set<int> years;
    for (const auto& r : records) years.insert(r.cohort_year);
    cohorts.assign(years.begin(), years.end());
  }

  std::vector<std::vector<std::string>> table{
      {"Cohort", "Traditional", "Markov (reduced)", "|difference|", "Status"}};
  std::ostringstream csv;
  csv << "cohort,status,traditional,markov_reduced,abs_difference\n";
  std::vector<SummaryRow> rows;
  std::vector<int> failed;
  std::size_t evaluated = 0;

  for (int c : cohorts) {
    if (horizon < c + kMaxYear) {
      csv << c << ",SKIP,,,\n";
      table.push_back({std::to_string(c), "", "", "", "SKIP (horizon too early)"});
      continue;
    }
    ++evaluated;
    const double traditional = sygr_traditional(records, c, horizon);
    const auto cohort = cohort_slice(records, c);
    auto counts = accumulate_counts(cohort, horizon);
    if (cfg.corrupt_hook) counts.add(AcademicState::Y1, AcademicState::DropOut, 1);
    const double markov = sygr_markov(build_matrix(counts, EmptyRows::kAbsorbUnreachable));
    const double diff = std::abs(markov - traditional);
    const bool pass = diff <= 1e-9;
    if (!pass) failed.push_back(c);
    csv << c << ',' << (pass ? "PASS" : "FAIL") << ',' << format_double(traditional) << ','
        << format_double(markov) << ',' << format_double(diff) << '\n';
    table.push_back({std::to_string(c), format_double(traditional), format_double(markov),
                     format_double(diff), pass ? "PASS" : "FAIL"});

    for (auto kind : {EstimatorKind::Traditional, EstimatorKind::MarkovReduced}) {
      rows.push_back(run_row(records, EstimatorSpec{kind, {c}, horizon, false}, cfg,
                             std::to_string(c)));
    }
  }

  std::ostringstream text;
  text << "Positive control: traditional vs reduced Markov point estimates\n"
       << align_columns(table);
  if (evaluated == 0) {
    text << "RESULT: SKIP (no cohort has six observable years at horizon " << horizon << ")\n";
  } else if (failed.empty()) {
    text << "RESULT: PASS\n";
  } else {
    text << "RESULT: FAIL (cohorts";
    for (int c : failed) text << ' ' << c;
    text << ")\n";
  }
  write_text_file(cfg.out_dir / "validate.csv", csv.str());
  write_text_file(cfg.out_dir / "validate.txt", text.str());
  out << text.str();
  if (!rows.empty()) {
    out << '\n';
    write_summaries(cfg, rows, out);
  }
  write_metadata(cfg, {{"result", evaluated == 0 ? "SKIP" : failed.empty() ? "PASS" : "FAIL"}});
  return failed.empty() ? kOk : kValidationFail;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  const int horizon = require_horizon(cfg);
  if (cfg.la != "all") throw UsageError("compare always splits by LA exposure; drop --la");
  const auto bcfg = cfg.bootstrap();
  bcfg.validate();
  const auto all = load_records(cfg.inputs);
  prepare_out_dir(cfg.out_dir);

  SubgroupSpec base = cfg.subgroup();
  std::vector<std::pair<std::string, SubgroupSpec>> strata{{"All", base}};
  if (cfg.strata) {
    if (!base.aalana_only) {
      SubgroupSpec s = base;
      s.aalana_only = true;
      strata.push_back({"AALANA", s});
    }
    if (!base.first_gen_only) {
      SubgroupSpec s = base;
      s.first_gen_only = true;
      strata.push_back({"First-generation", s});
    }
  }

  const std::string lo_label = percentile_label((1 - cfg.ci_level) / 2);
  const std::string hi_label = percentile_label((1 + cfg.ci_level) / 2);
  std::ostringstream csv, rounded;
  csv << "stratum,group,estimate," << lo_label << ",median," << hi_label
      << ",width,replicates,failed\n";
  rounded << "stratum,group," << lo_label << ",median," << hi_label << ",width\n";
  std::vector<std::vector<std::string>> table{
      {"Stratum", "Group", lo_label, "Median", hi_label, "Width"}};
  std::vector<std::vector<std::string>> verdicts{
      {"Stratum", "Median difference (pp)", "Difference CI (pp)", "CIs overlap"}};
  std::vector<PersistenceTable> persistence;

  BootstrapConfig exposed_cfg = bcfg;
  BootstrapConfig unexposed_cfg = bcfg;
  exposed_cfg.seed = stream_key(bcfg.seed, 1);
  unexposed_cfg.seed = stream_key(bcfg.seed, 2);

  for (const auto& [label, spec] : strata) {
    SubgroupSpec exposed_spec = spec, unexposed_spec = spec;
    exposed_spec.la_group = LaGroup::Exposed;
    unexposed_spec.la_group = LaGroup::Unexposed;
    const auto exposed = filter_subgroup(all, exposed_spec);
    const auto unexposed = filter_subgroup(all, unexposed_spec);
    if (exposed.empty()) throw EmptyCohort(label + ": no LA-exposed students");
    if (unexposed.empty()) throw EmptyCohort(label + ": no unexposed students");

    const EstimatorSpec e_spec{EstimatorKind::MarkovFull, {}, horizon, true};
    const EstimatorSpec u_spec{EstimatorKind::MarkovFull, {}, horizon, false};
    const double e_point = estimate(exposed, e_spec);
    const double u_point = estimate(unexposed, u_spec);

    const auto e_slots = bootstrap_replicates(exposed, e_spec, exposed_cfg);
    const auto u_slots = bootstrap_replicates(unexposed, u_spec, unexposed_cfg);
    std::vector<std::optional<double>> d_slots(e_slots.size());
    for (std::size_t b = 0; b < e_slots.size(); ++b) {
      if (e_slots[b] && u_slots[b]) d_slots[b] = *e_slots[b] - *u_slots[b];
    }
    const auto summarize_group = [&](const std::string& group, const auto& slots) {
      try {
        return summarize(slots, cfg.ci_level);
      } catch (const TooManyFailedReplicates& e) {
        throw Error(label + " / " + group + ": " + e.what());
      }
    };
    const EstimateSummary es = summarize_group("exposed", e_slots);
    const EstimateSummary us = summarize_group("unexposed", u_slots);
    const EstimateSummary ds = summarize_group("difference", d_slots);

    const std::tuple<const char*, double, const EstimateSummary*> groups[] = {
        {"exposed", e_point, &es}, {"unexposed", u_point, &us}, {"difference", e_point - u_point, &ds}};
    for (const auto& [group, point, s] : groups) {
      csv << label << ',' << group << ',' << format_double(point) << ',' << format_double(s->lo)
          << ',' << format_double(s->median) << ',' << format_double(s->hi) << ','
          << format_double(s->width) << ',' << s->ensemble.size() << ',' << s->failed << '\n';
      rounded << label << ',' << group << ',' << to_percent(s->lo) << ',' << to_percent(s->median)
              << ',' << to_percent(s->hi) << ',' << to_percent(s->width) << '\n';
      table.push_back({label, group, std::to_string(to_percent(s->lo)),
                       std::to_string(to_percent(s->median)), std::to_string(to_percent(s->hi)),
                       std::to_string(to_percent(s->width))});
      if (cfg.export_ensemble) {
        std::ostringstream e;
        write_ensemble_csv(e, *s);
        write_text_file(cfg.out_dir / ("ensemble_" + file_safe(label) + "_" + group + ".csv"),
                        e.str());
      }
    }
    const bool overlap = es.lo <= us.hi && us.lo <= es.hi;
    verdicts.push_back({label, format_double(std::round((es.median - us.median) * 1000) / 10),
                        std::to_string(to_percent(ds.lo)) + " to " + std::to_string(to_percent(ds.hi)),
                        overlap ? "yes" : "no"});

    persistence.push_back({label, persistence_rates(unexposed, horizon, false),
                           persistence_rates(exposed, horizon, true)});
  }

  std::ostringstream text;
  text << "Full Markov SYGR (%), LA-exposed vs unexposed, horizon " << horizon << '\n'
       << align_columns(table) << '\n'
       << align_columns(verdicts);
  std::ostringstream pcsv, ptext;
  write_persistence_csv(pcsv, persistence);
  write_persistence_text(ptext, persistence);

  write_text_file(cfg.out_dir / "compare.csv", csv.str());
  write_text_file(cfg.out_dir / "compare_rounded.csv", rounded.str());
  write_text_file(cfg.out_dir / "compare.txt", text.str());
  write_text_file(cfg.out_dir / "persistence.csv", pcsv.str());
  write_text_file(cfg.out_dir / "persistence.txt", ptext.str());
  write_metadata(cfg);
  out << text.str() << '\n' << ptext.str();
  return kOk;
}

int cmd_synth(const RunConfig& cfg, std::ostream& out) {
  if (cfg.spec_path.empty()) throw UsageError("--spec is required");
  std::ifstream in(cfg.spec_path, std::ios::binary);
  if (!in) throw UsageError("cannot open spec '" + cfg.spec_path + "'");
  GeneratorSpec spec;
  try {
    spec = parse_generator_spec(in);
  } catch (const SpecError& e) {
    throw Error(cfg.spec_path + ": " + e.what());
  }
  RunConfig effective = cfg;
  if (cfg.seed_given) {
    spec.seed = cfg.seed;
  } else {
    effective.seed = spec.seed;
  }
  prepare_out_dir(cfg.out_dir);

  const auto panel = generate_panel(spec);
  std::ostringstream csv;
  write_records(csv, panel.records);
  write_text_file(cfg.out_dir / "panel.csv", csv.str());
  const std::string canonical_spec = format_generator_spec(spec);
  write_text_file(cfg.out_dir / "spec_used.txt", canonical_spec);

  std::vector<std::pair<std::string, std::string>> extra{
      {"records", std::to_string(panel.records.size())},
      {"horizon_year", std::to_string(spec.horizon_year)},
      {"spec_hash", hex_hash(canonical_spec)},
      {"true_sygr", format_double(brute_force_sygr(spec.true_matrix))}};
  if (spec.effect_matrix) {
    extra.push_back({"effect_true_sygr", format_double(brute_force_sygr(*spec.effect_matrix))});
  }
  write_metadata(effective, extra);
  out << "wrote " << panel.records.size() << " records to " << (cfg.out_dir / "panel.csv").string()
      << "\ntrue_sygr = " << extra[3].second << '\n';
  return kOk;
}

int cmd_plot(const RunConfig& cfg, std::ostream& out) {
  if (cfg.inputs.empty()) throw UsageError("--input is required (one or more ensemble CSVs)");
  prepare_out_dir(cfg.out_dir);
  std::vector<PlotSeries> series;
  for (const auto& path : cfg.inputs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open input '" + path + "'");
    std::vector<double> values;
    try {
      values = read_ensemble_csv(in);
    } catch (const Error& e) {
      throw Error(path + ": " + e.what());
    }
    PlotSeries s;
    s.label = std::filesystem::path(path).stem().string();
    try {
      s.curve = kde(values, cfg.bandwidth);
      std::ostringstream csv;
      write_kde_csv(csv, s.curve);
      write_text_file(cfg.out_dir / ("kde_" + file_safe(s.label) + ".csv"), csv.str());
    } catch (const DegenerateEnsemble& e) {
      s.point_mass = e.value();
      out << s.label << ": constant ensemble, drawn as a point mass at "
          << format_double(e.value()) << '\n';
    }
    series.push_back(std::move(s));
  }
  write_text_file(cfg.out_dir / "plot.svg", render_kde_svg(series, cfg.title));
  write_metadata(cfg, {{"series", std::to_string(series.size())}});
  out << "wrote " << (cfg.out_dir / "plot.svg").string() << '\n';
  return kOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Six-year graduation rate estimation with absorbing Markov chains"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", kToolVersion);
  RunConfig cfg;
  std::string config_path;

  const auto add_inputs = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.inputs, "Input CSV (repeatable)")->take_all();
    sub->add_option("--out", cfg.out_dir, "Output directory");
  };
  const auto add_common = [&](CLI::App* sub) {
    add_inputs(sub);
    sub->add_option("--config", config_path, "Read `key = value` options from a file (flags override)");
    sub->add_option("--seed", cfg.seed, "Bootstrap seed");
    sub->add_option("--replicates", cfg.replicates, "Bootstrap replicates");
    sub->add_option("--ci", cfg.ci_level, "Confidence level");
    sub->add_option("--horizon", cfg.horizon_year, "Observation horizon (calendar year)");
    sub->add_option("--cohort", cfg.cohorts, "Target cohort year (repeatable)")->take_all();
    sub->add_flag("--aalana", cfg.aalana, "Only AALANA students");
    sub->add_flag("--first-gen", cfg.first_gen, "Only first-generation students");
    sub->add_option("--college", cfg.college, "Only students of this college code");
    sub->add_option("--la", cfg.la, "LA group: exposed | unexposed | all");
    sub->add_flag("--export-ensemble", cfg.export_ensemble, "Write bootstrap ensembles");
  };

  auto* estimate_cmd = app.add_subcommand("estimate", "Estimate SYGR with bootstrap CIs");
  add_common(estimate_cmd);
  estimate_cmd
      ->add_option("--method", cfg.methods, "traditional | markov-reduced | markov-full (repeatable)")
      ->delimiter(',')
      ->take_all();
  estimate_cmd->add_flag("--combined", cfg.combined, "Add an all-cohorts-combined row");

  auto* validate_cmd = app.add_subcommand("validate", "Positive control: traditional vs reduced Markov");
  add_common(validate_cmd);
  validate_cmd->add_flag("--corrupt-test-hook", cfg.corrupt_hook)->group("");

  auto* compare_cmd = app.add_subcommand("compare", "LA-exposed vs unexposed full-Markov comparison");
  add_common(compare_cmd);
  compare_cmd->add_flag("--strata", cfg.strata, "Repeat within AALANA and first-generation strata");

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic panel from a spec file");
  synth_cmd->add_option("--config", config_path, "Read `key = value` options from a file");
  synth_cmd->add_option("--spec", cfg.spec_path, "Generator spec file")->required();
  synth_cmd->add_option("--out", cfg.out_dir, "Output directory");
  auto* synth_seed = synth_cmd->add_option("--seed", cfg.seed, "Override the spec's seed");

  auto* plot_cmd = app.add_subcommand("plot", "KDE curves of bootstrap ensembles as CSV + SVG");
  plot_cmd->add_option("--config", config_path, "Read `key = value` options from a file");
  add_inputs(plot_cmd);
  plot_cmd->add_option("--bandwidth", cfg.bandwidth, "KDE bandwidth (default: Silverman)");
  plot_cmd->add_option("--title", cfg.title, "Chart title");

  std::vector<std::string> tokens = args;
  try {
    tokens = with_config_file(app, args);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }
  std::reverse(tokens.begin(), tokens.end());
  try {
    app.parse(tokens);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (estimate_cmd->parsed()) {
      cfg.command = "estimate";
      return cmd_estimate(cfg, out);
    }
    if (validate_cmd->parsed()) {
      cfg.command = "validate";
      return cmd_validate(cfg, out);
    }
    if (compare_cmd->parsed()) {
      cfg.command = "compare";
      return cmd_compare(cfg, out);
    }
    if (synth_cmd->parsed()) {
      cfg.command = "synth";
      cfg.seed_given = synth_seed->count() > 0;
      return cmd_synth(cfg, out);
    }
    cfg.command = "plot";
    return cmd_plot(cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace sygr::cli

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ensnap/harness.hpp"

namespace {

using ensnap::ExperimentConfig;

struct ExperimentOptions {
  std::string dataset = "friedman1";
  std::string csv_path;
  std::size_t target_column = ExperimentConfig::kLastColumn;
  std::string noise = "none";
  std::size_t train_size = 200;
  std::size_t test_size = 1000;
  std::string validation = "oob";
  std::vector<std::string> selectors;
  std::string weighting;
  std::string embedding;
  std::size_t ensemble_size = 20;
  std::size_t snapshots = 200;
  std::size_t epochs = 2000;
  std::size_t hidden = 10;
  double learning_rate = 0.01;
  std::string batch_mode = "full";
  std::size_t sa_multiplier = 15;
  std::size_t reps = 10;
  std::uint64_t seed = 1;
  std::string out;
  bool paper_defaults = false;
  bool full = false;
  bool save_cubes = false;
  bool export_data = false;
};

void add_experiment_options(CLI::App* cmd, ExperimentOptions& o) {
  cmd->set_config("--config", "", "key=value file; command line wins");
  cmd->add_option("--dataset", o.dataset,
                  "friedman1|friedman2|friedman3|ikeda|mackey-glass|csv");
  cmd->add_option("--csv", o.csv_path, "input file for --dataset csv");
  cmd->add_option("--target-column", o.target_column,
                  "0-based target column of the csv (default: last)");
  cmd->add_option("--noise", o.noise, "none|low|high|sigma=X|ratio=X");
  cmd->add_option("--train-size", o.train_size, "patterns in D");
  cmd->add_option("--test-size", o.test_size, "held-back test patterns");
  cmd->add_option("--validation", o.validation, "external20|external37|oob");
  cmd->add_option("--selectors", o.selectors,
                  "comma list of single,bagging,epoch,neuralbag,seca,simann")
      ->delimiter(',');
  cmd->add_option("--weighting", o.weighting,
                  "law:alpha, e.g. power:2 or exp:10");
  cmd->add_option("--embedding", o.embedding,
                  "series embedding as dimension,lag,horizon");
  cmd->add_option("-M,--ensemble-size", o.ensemble_size, "networks per run");
  cmd->add_option("-T,--snapshots", o.snapshots, "checkpoints per training");
  cmd->add_option("--epochs", o.epochs, "training epochs (multiple of T)");
  cmd->add_option("--hidden", o.hidden, "hidden units");
  cmd->add_option("--lr", o.learning_rate, "learning rate");
  cmd->add_option("--batch-mode", o.batch_mode, "full|pattern");
  cmd->add_option("--sa-multiplier", o.sa_multiplier,
                  "SimAnn runs this many times T steps");
  cmd->add_option("--reps", o.reps, "replications");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_flag("--paper-defaults", o.paper_defaults,
                "per-dataset settings from the study being reproduced");
  cmd->add_flag("--full", o.full, "with --paper-defaults: 50 replications");
  cmd->add_flag("--save-cubes", o.save_cubes,
                "persist per-replication cubes and selections");
  cmd->add_flag("--export-data", o.export_data,
                "write the first replication's data as csv");
}

ensnap::NoiseSpec parse_noise(ensnap::DatasetKind kind,
                              const std::string& text) {
  using ensnap::DatasetKind;
  using ensnap::NoiseSpec;
  if (text.empty() || text == "none" || text == "free") return NoiseSpec::none();
  const bool sigma_family = kind == DatasetKind::friedman1;
  if (text == "low")
    return sigma_family ? NoiseSpec::gaussian_sigma(1.0)
                        : NoiseSpec::noise_to_signal(1.0 / 9.0);
  if (text == "high")
    return sigma_family ? NoiseSpec::gaussian_sigma(2.0)
                        : NoiseSpec::noise_to_signal(1.0 / 3.0);
  if (text.rfind("sigma=", 0) == 0)
    return NoiseSpec::gaussian_sigma(std::stod(text.substr(6)));
  if (text.rfind("ratio=", 0) == 0)
    return NoiseSpec::noise_to_signal(std::stod(text.substr(6)));
  throw CLI::ValidationError("--noise",
                             "expected none|low|high|sigma=X|ratio=X");
}

ExperimentConfig build_config(const CLI::App& cmd, const ExperimentOptions& o) {
  ExperimentConfig cfg;
  cfg.dataset = ensnap::dataset_kind_from(o.dataset);
  cfg.csv_path = o.csv_path;
  cfg.csv_target_column = o.target_column;
  cfg.train_size = o.train_size;
  cfg.validation = ensnap::validation_from(o.validation);
  cfg.master_seed = o.seed;
  cfg.replications = o.reps;
  cfg.out_dir = o.out;
  cfg.save_cubes = o.save_cubes;
  cfg.export_data = o.export_data;

  if (o.paper_defaults) ensnap::apply_paper_defaults(cfg);
  if (o.full) cfg.replications = 50;
  if (cmd.count("--reps")) cfg.replications = o.reps;

  auto given = [&cmd](const std::string& flag) {
    return cmd.count(flag) > 0;
  };
  if (!o.paper_defaults || given("--test-size")) cfg.test_size = o.test_size;
  if (!o.paper_defaults || given("--ensemble-size") || given("-M"))
    cfg.ensemble_size = o.ensemble_size;
  if (!o.paper_defaults || given("--snapshots") || given("-T"))
    cfg.snapshot_count = o.snapshots;
  if (!o.paper_defaults || given("--epochs")) cfg.total_epochs = o.epochs;
  if (!o.paper_defaults || given("--hidden")) cfg.hidden_units = o.hidden;
  if (!o.paper_defaults || given("--sa-multiplier"))
    cfg.sa_step_multiplier = o.sa_multiplier;
  cfg.learning_rate = o.learning_rate;
  if (!o.paper_defaults || given("--batch-mode")) {
    if (o.batch_mode == "full")
      cfg.batch_mode = ensnap::BatchMode::full_batch;
    else if (o.batch_mode == "pattern")
      cfg.batch_mode = ensnap::BatchMode::per_pattern;
    else
      throw CLI::ValidationError("--batch-mode", "expected full|pattern");
  }

  cfg.noise = parse_noise(cfg.dataset, o.noise);
  if (!o.selectors.empty()) cfg.selectors = o.selectors;

  if (!o.weighting.empty()) {
    const auto colon = o.weighting.find(':');
    if (colon == std::string::npos)
      throw CLI::ValidationError("--weighting", "expected law:alpha");
    const std::string law = o.weighting.substr(0, colon);
    ensnap::WeightingSpec spec;
    if (law == "power")
      spec.law = ensnap::WeightLaw::power;
    else if (law == "exp")
      spec.law = ensnap::WeightLaw::exp;
    else
      throw CLI::ValidationError("--weighting", "law must be power or exp");
    spec.alpha = std::stod(o.weighting.substr(colon + 1));
    cfg.weighting = spec;
  }

  if (!o.embedding.empty()) {
    std::istringstream in(o.embedding);
    std::size_t d = 0, lag = 0, horizon = 0;
    char c1 = 0, c2 = 0;
    if (!(in >> d >> c1 >> lag >> c2 >> horizon) || c1 != ',' || c2 != ',')
      throw CLI::ValidationError("--embedding",
                                 "expected dimension,lag,horizon");
    cfg.embedding = {d, lag, horizon};
  }
  return cfg;
}

void print_summary(const ensnap::ExperimentSummary& summary) {
  std::cout << "algorithm        mean NMSE (1e-2)\n";
  for (std::size_t a = 0; a < summary.algorithms.size(); ++a) {
    std::ostringstream value;
    value.setf(std::ios::fixed);
    value.precision(3);
    value << 100.0 * summary.mean_nmse[a];
    std::cout << summary.algorithms[a];
    for (std::size_t pad = summary.algorithms[a].size(); pad < 17; ++pad)
      std::cout << ' ';
    std::cout << value.str() << '\n';
  }
  if (!summary.sign_tests.empty()) std::cout << '\n';
  for (const ensnap::SignRow& row : summary.sign_tests) {
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << row.algorithm << " beats " << row.baseline << " in "
         << row.test.fraction << " of runs (p=";
    line.precision(4);
    line << row.test.p_value
         << (row.test.significant_at_95 ? ", significant)" : ")");
    std::cout << line.str() << '\n';
  }
}

int run_command(const CLI::App& cmd, const ExperimentOptions& o) {
  const ExperimentConfig cfg = build_config(cmd, o);
  const ensnap::ExperimentResult result = ensnap::run_experiment(cfg);
  print_summary(result.summary);
  if (!cfg.out_dir.empty())
    std::cout << "\ntables written to " << cfg.out_dir << '\n';
  return 0;
}

int sweep_command(const CLI::App& cmd, const ExperimentOptions& o,
                  const std::vector<double>& alphas) {
  ExperimentConfig cfg = build_config(cmd, o);
  cfg.out_dir.clear();  // the sweep writes its own file
  const auto rows = ensnap::alpha_sweep(cfg, alphas);
  std::cout << "alpha law mean NMSE (1e-2)\n";
  for (const auto& row : rows) {
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(3);
    line << row.alpha << ' ' << row.law << ' ' << 100.0 * row.mean_nmse;
    std::cout << line.str() << '\n';
  }
  if (!o.out.empty()) {
    std::filesystem::create_directories(o.out);
    const std::string path =
        (std::filesystem::path(o.out) / "alpha_sweep.csv").string();
    ensnap::emit_alpha_sweep(rows, path);
    std::cout << "sweep written to " << path << '\n';
  }
  return 0;
}

int tables_command(const std::string& records_path, const std::string& out) {
  const auto rows = ensnap::read_csv_table(records_path);
  if (rows.empty()) throw std::runtime_error("no rows in " + records_path);

  std::vector<ensnap::ReplicationRecord> records;
  std::string current_run;
  for (const auto& row : rows) {
    const std::string& run_id = row.at("run_id");
    if (records.empty() || run_id != current_run) {
      ensnap::ReplicationRecord rec;
      rec.replication = records.size();
      records.push_back(rec);
      current_run = run_id;
    }
    ensnap::AlgorithmResult res;
    res.algorithm = row.at("algorithm");
    res.nmse = std::stod(row.at("nmse"));
    res.mean_member_error = std::stod(row.at("mean_error"));
    res.member_variance = std::stod(row.at("variance"));
    records.back().results.push_back(std::move(res));
  }

  ExperimentConfig cfg;
  cfg.dataset = ensnap::dataset_kind_from(rows.front().at("dataset"));
  cfg.noise = parse_noise(cfg.dataset, rows.front().at("noise"));
  cfg.train_size = std::stoul(rows.front().at("length"));
  cfg.replications = records.size();

  ensnap::ExperimentResult result;
  result.records = std::move(records);
  result.summary = ensnap::summarize_records(result.records);
  ensnap::emit_tables(cfg, result, out);
  print_summary(result.summary);
  std::cout << "\ntables written to " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"snapshot-ensemble trainer and benchmark harness"};
  app.require_subcommand(1);

  ExperimentOptions run_opts;
  CLI::App* run = app.add_subcommand("run", "train and evaluate an ensemble");
  add_experiment_options(run, run_opts);

  ExperimentOptions sweep_opts;
  std::vector<double> alphas{0.0, 0.5, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0};
  CLI::App* sweep =
      app.add_subcommand("sweep-alpha", "reweight a trained ensemble over alpha");
  add_experiment_options(sweep, sweep_opts);
  sweep->add_option("--alphas", alphas, "comma list of alpha values")
      ->delimiter(',');

  std::string records_path = "records.csv";
  std::string tables_out = ".";
  CLI::App* tables =
      app.add_subcommand("tables", "regenerate tables from records.csv");
  tables->add_option("--records", records_path, "records.csv to read");
  tables->add_option("--out", tables_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(*run, run_opts);
    if (sweep->parsed()) return sweep_command(*sweep, sweep_opts, alphas);
    return tables_command(records_path, tables_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

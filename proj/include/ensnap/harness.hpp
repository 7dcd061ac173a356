#ifndef ENSNAP_HARNESS_HPP
#define ENSNAP_HARNESS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ensnap/cube.hpp"
#include "ensnap/datagen.hpp"
#include "ensnap/dataset.hpp"
#include "ensnap/mlp.hpp"
#include "ensnap/weighting.hpp"

namespace ensnap {

enum class DatasetKind {
  friedman1,
  friedman2,
  friedman3,
  ikeda,
  mackey_glass,
  csv
};

/// Where selection validation points come from: a held-out fraction of the
/// data (0.20 or 0.37) shared by all nets, or each net's out-of-bag set.
enum class ValidationScenario { external20, external37, oob };

std::string to_string(DatasetKind kind);
std::string to_string(ValidationScenario scenario);
DatasetKind dataset_kind_from(const std::string& name);
ValidationScenario validation_from(const std::string& name);

struct WeightingSpec {
  WeightLaw law = WeightLaw::power;
  double alpha = 2.0;
};

struct ExperimentConfig {
  DatasetKind dataset = DatasetKind::friedman1;
  std::string csv_path;
  std::size_t csv_target_column = kLastColumn;  // kLastColumn: last
  NoiseSpec noise = NoiseSpec::none();
  std::size_t train_size = 200;  // |D|
  std::size_t test_size = 1000;
  SeriesEmbedding embedding{0, 1, 1};  // dimension 0: dataset default
  ValidationScenario validation = ValidationScenario::oob;
  std::size_t ensemble_size = 20;   // M
  std::size_t snapshot_count = 200;  // T
  std::size_t total_epochs = 2000;
  std::size_t hidden_units = 10;
  double learning_rate = 0.01;
  BatchMode batch_mode = BatchMode::full_batch;
  std::size_t sa_step_multiplier = 15;  // p, SimAnn runs p * T steps
  std::vector<std::string> selectors{"single",    "bagging", "epoch",
                                     "neuralbag", "seca",    "simann"};
  std::optional<WeightingSpec> weighting;  // adds w-bagging/w-seca/w-simann
  std::size_t replications = 10;
  std::uint64_t master_seed = 1;
  std::string out_dir;  // empty: nothing written
  bool save_cubes = false;
  bool export_data = false;

  static constexpr std::size_t kLastColumn = static_cast<std::size_t>(-1);

  void validate() const;
};

struct AlgorithmResult {
  std::string algorithm;
  Selection selection;
  double nmse = 0.0;
  double mean_member_error = 0.0;  // test-set decomposition, NMSE units
  double member_variance = 0.0;
};

struct ReplicationRecord {
  std::size_t replication = 0;
  double target_variance = 0.0;  // raw D-target variance
  std::uint64_t cube_hash = 0;   // selector-cube hash, audit trail
  bool retried = false;          // halved learning rate after divergence
  std::vector<AlgorithmResult> results;
};

struct SignRow {
  std::string algorithm;
  std::string baseline;
  std::size_t wins = 0;
  std::size_t runs = 0;
  SignTestResult test;
};

struct ExperimentSummary {
  std::vector<std::string> algorithms;
  std::vector<double> mean_nmse;
  std::vector<double> mean_member_error;
  std::vector<double> mean_variance;
  std::vector<SignRow> sign_tests;
};

struct ExperimentResult {
  std::vector<ReplicationRecord> records;
  ExperimentSummary summary;
};

/// Run R replications: fresh data, bootstrap plan, M trainings, one shared
/// prediction cube, every configured selector plus weighted variants, all
/// evaluated on the held-back test slice. Writes tables when out_dir is set.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Means and sign tests over per-replication results. Algorithm order is
/// taken from the first record; all records must agree.
ExperimentSummary summarize_records(
    const std::vector<ReplicationRecord>& records);

struct AlphaSweepRow {
  double alpha = 0.0;
  std::string law;
  double mean_nmse = 0.0;
};

/// Figure-2 style sweep: train once, then reweight the Bagging selection
/// for every (alpha, law) pair on the stored member predictions.
std::vector<AlphaSweepRow> alpha_sweep(const ExperimentConfig& cfg,
                                       const std::vector<double>& alphas);

void emit_tables(const ExperimentConfig& cfg, const ExperimentResult& result,
                 const std::string& out_dir);
void emit_alpha_sweep(const std::vector<AlphaSweepRow>& rows,
                      const std::string& path);

/// Parse a header CSV back into one map per row, for round-trip checks.
std::vector<std::map<std::string, std::string>> read_csv_table(
    const std::string& path);

std::size_t paper_default_hidden_units(DatasetKind kind,
                                       std::size_t train_size);

/// The paper's experimental settings for the chosen dataset and size:
/// M=20, T=200, p=15, test 1000, per-size hidden units, per-pattern
/// updates. Replications stay at the configured value.
void apply_paper_defaults(ExperimentConfig& cfg);

}  // namespace ensnap

#endif

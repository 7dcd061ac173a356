#include "ensnap/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ensnap/csv.hpp"
#include "ensnap/io.hpp"
#include "ensnap/resample.hpp"
#include "ensnap/rng.hpp"
#include "ensnap/selectors.hpp"

namespace ensnap {

namespace {

// Per-replication seed streams.
constexpr std::uint64_t kDataStream = 0;
constexpr std::uint64_t kSplitStream = 1;
constexpr std::uint64_t kPlanStream = 2;
constexpr std::uint64_t kAnnealStream = 3;
constexpr std::uint64_t kNetStreamBase = 16;

const std::vector<std::string>& known_selectors() {
  static const std::vector<std::string> names{
      "single", "bagging", "epoch", "neuralbag", "seca", "simann"};
  return names;
}

const std::vector<std::string>& weightable_selectors() {
  static const std::vector<std::string> names{"bagging", "seca", "simann"};
  return names;
}

SeriesEmbedding default_embedding(DatasetKind kind) {
  if (kind == DatasetKind::ikeda) return {5, 1, 1};
  return {6, 6, 6};
}

SeriesEmbedding resolved_embedding(const ExperimentConfig& cfg) {
  return cfg.embedding.dimension > 0 ? cfg.embedding
                                     : default_embedding(cfg.dataset);
}

std::size_t resolve_target_column(const std::string& path,
                                  std::size_t requested) {
  if (requested != ExperimentConfig::kLastColumn) return requested;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open csv: " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto fields = split_csv_line(line);
    if (!fields.empty()) return fields.size() - 1;
  }
  throw std::runtime_error("empty csv: " + path);
}

RegressionDataset rows_between(const RegressionDataset& data,
                               std::size_t begin, std::size_t count) {
  std::vector<std::size_t> ids(count);
  for (std::size_t i = 0; i < count; ++i) ids[i] = begin + i;
  return data.gather(ids);
}

// Fresh raw-unit realization: D rows first, test rows after.
std::pair<RegressionDataset, RegressionDataset> realize_data(
    const ExperimentConfig& cfg, std::uint64_t data_seed) {
  const std::size_t want = cfg.train_size + cfg.test_size;
  RegressionDataset all;
  switch (cfg.dataset) {
    case DatasetKind::friedman1:
      all = gen_friedman1(want, cfg.noise, data_seed);
      break;
    case DatasetKind::friedman2:
      all = gen_friedman2(want, cfg.noise, data_seed);
      break;
    case DatasetKind::friedman3:
      all = gen_friedman3(want, cfg.noise, data_seed);
      break;
    case DatasetKind::ikeda: {
      const SeriesEmbedding spec = resolved_embedding(cfg);
      const std::size_t len =
          (spec.dimension - 1) * spec.lag + spec.horizon + want;
      const auto series = gen_ikeda(len, 1000, data_seed);
      all = embed_series(series, spec, "ikeda");
      break;
    }
    case DatasetKind::mackey_glass: {
      const SeriesEmbedding spec = resolved_embedding(cfg);
      const std::size_t len =
          (spec.dimension - 1) * spec.lag + spec.horizon + want;
      MackeyGlassConfig mg;
      mg.x0_jitter = 0.2;
      const auto series = gen_mackey_glass(len, mg, data_seed);
      all = embed_series(series, spec, "mackey_glass");
      break;
    }
    case DatasetKind::csv: {
      const RegressionDataset full = load_csv(
          cfg.csv_path,
          resolve_target_column(cfg.csv_path, cfg.csv_target_column));
      if (want > full.rows)
        throw std::invalid_argument(
            "csv has " + std::to_string(full.rows) + " usable rows, need " +
            std::to_string(want));
      std::vector<std::size_t> perm(full.rows);
      for (std::size_t i = 0; i < full.rows; ++i) perm[i] = i;
      Rng rng(data_seed);
      for (std::size_t i = full.rows; i > 1; --i)
        std::swap(perm[i - 1], perm[rng.index(i)]);
      perm.resize(want);
      all = full.gather(perm);
      all.name = "csv";
      break;
    }
  }
  return {rows_between(all, 0, cfg.train_size),
          rows_between(all, cfg.train_size, cfg.test_size)};
}

PredictionCube slice_cube(const PredictionCube& full,
                          std::span<const std::size_t> points) {
  PredictionCube out;
  out.num_nets = full.num_nets;
  out.num_snapshots = full.num_snapshots;
  out.num_points = points.size();
  out.values.resize(out.num_nets * out.num_snapshots * out.num_points);
  out.point_targets.resize(out.num_points);
  for (std::size_t i = 0; i < points.size(); ++i)
    out.point_targets[i] = full.point_targets[points[i]];
  for (std::size_t n = 0; n < out.num_nets; ++n)
    for (std::size_t t = 0; t < out.num_snapshots; ++t) {
      const double* src =
          full.values.data() + (n * full.num_snapshots + t) * full.num_points;
      double* dst =
          out.values.data() + (n * out.num_snapshots + t) * out.num_points;
      for (std::size_t i = 0; i < points.size(); ++i) dst[i] = src[points[i]];
    }
  return out;
}

// Everything one replication's selectors and evaluations need.
struct RepArtifacts {
  ValidationKind kind = ValidationKind::out_of_bag;
  PredictionCube selector_cube;  // V points, or D points with oob weights
  PredictionCube weight_cube;    // all of D
  PredictionCube test_cube;
  double target_variance = 0.0;  // standardized D targets, for NMSE
  double error_scale = 0.0;      // back to raw squared-target units
  double raw_target_variance = 0.0;
  bool retried = false;
  RegressionDataset raw_train;  // kept for export
  RegressionDataset raw_test;
};

RepArtifacts build_artifacts_once(const ExperimentConfig& cfg,
                                  std::size_t replication,
                                  double learning_rate) {
  const std::uint64_t rep_seed = derive_seed(cfg.master_seed, replication);

  RepArtifacts art;
  auto [train_raw, test_raw] =
      realize_data(cfg, derive_seed(rep_seed, kDataStream));
  art.raw_train = train_raw;
  art.raw_test = test_raw;
  art.raw_target_variance = variance_of(train_raw.targets);

  const ColumnStats stats = compute_stats(train_raw);
  art.error_scale = stats.target_std * stats.target_std;
  RegressionDataset train = std::move(train_raw);
  RegressionDataset test = std::move(test_raw);
  apply_stats(train, stats);
  apply_stats(test, stats);
  art.target_variance = variance_of(train.targets);

  // Learn/validation layout over D row ids.
  const std::size_t n_train = cfg.train_size;
  std::vector<std::size_t> learn_rows;
  std::vector<std::size_t> val_rows;
  if (cfg.validation == ValidationScenario::oob) {
    learn_rows.resize(n_train);
    for (std::size_t i = 0; i < n_train; ++i) learn_rows[i] = i;
  } else {
    const double fraction =
        cfg.validation == ValidationScenario::external20 ? 0.20 : 0.37;
    auto [learn, val] = external_split(n_train, fraction,
                                       derive_seed(rep_seed, kSplitStream));
    learn_rows = std::move(learn);
    val_rows = std::move(val);
  }

  const BootstrapPlan plan = make_bootstrap_plan(
      learn_rows.size(), cfg.ensemble_size, derive_seed(rep_seed, kPlanStream));

  // M trainings on the bootstrap draws.
  std::vector<SnapshotStore> stores;
  stores.reserve(cfg.ensemble_size);
  for (std::size_t n = 0; n < cfg.ensemble_size; ++n) {
    std::vector<std::size_t> member_rows(plan.train_indices[n].size());
    for (std::size_t k = 0; k < member_rows.size(); ++k)
      member_rows[k] = learn_rows[plan.train_indices[n][k]];
    TrainConfig tc;
    tc.hidden_units = cfg.hidden_units;
    tc.total_epochs = cfg.total_epochs;
    tc.snapshot_count = cfg.snapshot_count;
    tc.learning_rate = learning_rate;
    tc.batch_mode = cfg.batch_mode;
    tc.seed = derive_seed(rep_seed, kNetStreamBase + n);
    stores.push_back(train_with_snapshots(train.gather(member_rows), tc));
  }

  // One shared cube over D then test, sliced per consumer. Selector and
  // weighting slices must never touch a test row.
  std::vector<double> all_inputs = train.inputs;
  all_inputs.insert(all_inputs.end(), test.inputs.begin(), test.inputs.end());
  std::vector<double> all_targets = train.targets;
  all_targets.insert(all_targets.end(), test.targets.begin(),
                     test.targets.end());
  const PredictionCube full =
      predict_cube(stores, all_inputs, all_targets, train.cols);

  std::vector<std::size_t> d_rows(n_train);
  for (std::size_t i = 0; i < n_train; ++i) d_rows[i] = i;
  std::vector<std::size_t> test_rows(cfg.test_size);
  for (std::size_t i = 0; i < cfg.test_size; ++i) test_rows[i] = n_train + i;

  const auto& selector_rows =
      cfg.validation == ValidationScenario::oob ? d_rows : val_rows;
  for (std::size_t row : selector_rows)
    if (row >= n_train)
      throw std::logic_error("selector slice touches a test row");

  art.kind = cfg.validation == ValidationScenario::oob
                 ? ValidationKind::out_of_bag
                 : ValidationKind::external;
  art.selector_cube = slice_cube(full, selector_rows);
  if (cfg.validation == ValidationScenario::oob) {
    const OobWeights ow = oob_prediction_weights(plan);
    art.selector_cube.oob_weights = ow.w;
  }
  art.selector_cube.validate();
  art.weight_cube = slice_cube(full, d_rows);
  art.test_cube = slice_cube(full, test_rows);
  return art;
}

RepArtifacts build_artifacts(const ExperimentConfig& cfg,
                             std::size_t replication) {
  try {
    return build_artifacts_once(cfg, replication, cfg.learning_rate);
  } catch (const TrainingDiverged&) {
    RepArtifacts art =
        build_artifacts_once(cfg, replication, cfg.learning_rate / 2.0);
    art.retried = true;
    return art;
  }
}

AlgorithmResult evaluate_on_test(const std::string& name, const Selection& sel,
                                 const PredictionCube& test_cube,
                                 double target_variance) {
  AlgorithmResult out;
  out.algorithm = name;
  out.selection = sel;
  std::vector<double> predictions(test_cube.num_points);
  for (std::size_t p = 0; p < test_cube.num_points; ++p)
    predictions[p] = ensemble_predict(test_cube, sel, p);
  out.nmse = nmse(predictions, test_cube.point_targets, target_variance);
  const Decomposition dec =
      accuracy_diversity(test_cube, Selection::uniform(sel.tau));
  out.mean_member_error = dec.mean_error / target_variance;
  out.member_variance = dec.variance / target_variance;
  return out;
}

ReplicationRecord run_replication(const ExperimentConfig& cfg,
                                  std::size_t replication) {
  const std::uint64_t rep_seed = derive_seed(cfg.master_seed, replication);
  RepArtifacts art = build_artifacts(cfg, replication);

  ReplicationRecord record;
  record.replication = replication;
  record.target_variance = art.raw_target_variance;
  record.retried = art.retried;
  record.cube_hash = art.selector_cube.content_hash();

  // Every selector consumes the identical cube; the Bagging solution also
  // seeds SimAnn and names the snapshots for the single-net baseline.
  const Selection bagging_sel = select_bagging(art.selector_cube, art.kind);
  std::map<std::string, Selection> selections;
  for (const std::string& name : cfg.selectors) {
    if (name == "single") continue;
    if (name == "bagging") {
      selections.emplace(name, bagging_sel);
    } else if (name == "epoch") {
      selections.emplace(name, select_epoch(art.selector_cube, art.kind));
    } else if (name == "neuralbag") {
      selections.emplace(name, select_neuralbag(art.selector_cube));
    } else if (name == "seca") {
      selections.emplace(
          name, select_seca(art.selector_cube, art.kind,
                            identity_order(cfg.ensemble_size)));
    } else if (name == "simann") {
      SimAnnConfig sa = SimAnnConfig::defaults_for(
          cfg.snapshot_count, derive_seed(rep_seed, kAnnealStream),
          cfg.sa_step_multiplier);
      selections.emplace(name, select_simann(art.selector_cube, art.kind, sa,
                                             bagging_sel));
    }
  }
  if (record.cube_hash != art.selector_cube.content_hash())
    throw std::logic_error("selector cube changed during selection");

  for (const std::string& name : cfg.selectors) {
    if (name == "single") {
      AlgorithmResult single = evaluate_on_test(
          name, bagging_sel, art.test_cube, art.target_variance);
      single.nmse = single.mean_member_error;
      record.results.push_back(std::move(single));
    } else {
      record.results.push_back(evaluate_on_test(
          name, selections.at(name), art.test_cube, art.target_variance));
    }
  }
  if (cfg.weighting) {
    for (const std::string& base : weightable_selectors()) {
      const auto it = selections.find(base);
      if (it == selections.end()) continue;
      const Selection weighted =
          weight_selection(it->second, art.weight_cube, cfg.weighting->law,
                           cfg.weighting->alpha, art.error_scale);
      record.results.push_back(evaluate_on_test(
          "w-" + base, weighted, art.test_cube, art.target_variance));
    }
  }

  if (!cfg.out_dir.empty()) {
    const std::filesystem::path dir(cfg.out_dir);
    if (cfg.save_cubes) {
      save_cube(art.selector_cube,
                (dir / ("cube_rep" + std::to_string(replication) + ".bin"))
                    .string());
      for (const auto& [name, sel] : selections)
        save_selection(sel, (dir / ("sel_" + name + "_rep" +
                                    std::to_string(replication) + ".txt"))
                                .string());
    }
    if (cfg.export_data && replication == 0) {
      save_csv(art.raw_train, (dir / "data_train.csv").string());
      save_csv(art.raw_test, (dir / "data_test.csv").string());
    }
  }
  return record;
}

}  // namespace

ExperimentSummary summarize_records(
    const std::vector<ReplicationRecord>& records) {
  ExperimentSummary summary;
  if (records.empty()) return summary;
  for (const AlgorithmResult& res : records.front().results)
    summary.algorithms.push_back(res.algorithm);
  const std::size_t n_algos = summary.algorithms.size();
  summary.mean_nmse.assign(n_algos, 0.0);
  summary.mean_member_error.assign(n_algos, 0.0);
  summary.mean_variance.assign(n_algos, 0.0);
  for (const ReplicationRecord& rec : records) {
    if (rec.results.size() != n_algos)
      throw std::invalid_argument("summarize_records: misaligned records");
    for (std::size_t a = 0; a < n_algos; ++a) {
      if (rec.results[a].algorithm != summary.algorithms[a])
        throw std::invalid_argument("summarize_records: misaligned records");
      summary.mean_nmse[a] += rec.results[a].nmse;
      summary.mean_member_error[a] += rec.results[a].mean_member_error;
      summary.mean_variance[a] += rec.results[a].member_variance;
    }
  }
  const auto r = static_cast<double>(records.size());
  for (std::size_t a = 0; a < n_algos; ++a) {
    summary.mean_nmse[a] /= r;
    summary.mean_member_error[a] /= r;
    summary.mean_variance[a] /= r;
  }

  auto index_of = [&](const std::string& name) {
    const auto it = std::find(summary.algorithms.begin(),
                              summary.algorithms.end(), name);
    return it == summary.algorithms.end()
               ? n_algos
               : static_cast<std::size_t>(it - summary.algorithms.begin());
  };
  auto add_sign_row = [&](std::size_t a, std::size_t b) {
    SignRow row;
    row.algorithm = summary.algorithms[a];
    row.baseline = summary.algorithms[b];
    row.runs = records.size();
    for (const ReplicationRecord& rec : records)
      if (rec.results[a].nmse < rec.results[b].nmse) ++row.wins;
    row.test = sign_test(row.wins, row.runs);
    summary.sign_tests.push_back(row);
  };

  const std::size_t bagging = index_of("bagging");
  if (bagging < n_algos) {
    for (std::size_t a = 0; a < n_algos; ++a)
      if (a != bagging) add_sign_row(a, bagging);
  }
  for (const std::string& base : weightable_selectors()) {
    const std::size_t weighted = index_of("w-" + base);
    const std::size_t plain = index_of(base);
    if (weighted < n_algos && plain < n_algos && base != "bagging")
      add_sign_row(weighted, plain);
  }
  return summary;
}

namespace {

std::string format_full(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::string format_fixed(double v, int digits) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << v;
  return out.str();
}

}  // namespace

std::string to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::friedman1: return "friedman1";
    case DatasetKind::friedman2: return "friedman2";
    case DatasetKind::friedman3: return "friedman3";
    case DatasetKind::ikeda: return "ikeda";
    case DatasetKind::mackey_glass: return "mackey-glass";
    case DatasetKind::csv: return "csv";
  }
  return "unknown";
}

std::string to_string(ValidationScenario scenario) {
  switch (scenario) {
    case ValidationScenario::external20: return "external20";
    case ValidationScenario::external37: return "external37";
    case ValidationScenario::oob: return "oob";
  }
  return "unknown";
}

DatasetKind dataset_kind_from(const std::string& name) {
  if (name == "friedman1") return DatasetKind::friedman1;
  if (name == "friedman2") return DatasetKind::friedman2;
  if (name == "friedman3") return DatasetKind::friedman3;
  if (name == "ikeda") return DatasetKind::ikeda;
  if (name == "mackey-glass" || name == "mackey_glass")
    return DatasetKind::mackey_glass;
  if (name == "csv") return DatasetKind::csv;
  throw std::invalid_argument("unknown dataset: " + name);
}

ValidationScenario validation_from(const std::string& name) {
  if (name == "external20") return ValidationScenario::external20;
  if (name == "external37") return ValidationScenario::external37;
  if (name == "oob") return ValidationScenario::oob;
  throw std::invalid_argument("unknown validation scenario: " + name);
}

void ExperimentConfig::validate() const {
  if (ensemble_size < 1) throw std::invalid_argument("need M >= 1");
  if (snapshot_count < 1) throw std::invalid_argument("need T >= 1");
  if (total_epochs < snapshot_count || total_epochs % snapshot_count != 0)
    throw std::invalid_argument("total_epochs must be a multiple of T");
  if (!(learning_rate > 0.0))
    throw std::invalid_argument("learning rate must be positive");
  if (train_size < 4) throw std::invalid_argument("need train_size >= 4");
  if (test_size < 1) throw std::invalid_argument("need test_size >= 1");
  if (replications < 1) throw std::invalid_argument("need replications >= 1");
  if (sa_step_multiplier < 1)
    throw std::invalid_argument("need sa_step_multiplier >= 1");
  if (hidden_units < 1) throw std::invalid_argument("need hidden_units >= 1");

  if (selectors.empty()) throw std::invalid_argument("no selectors configured");
  std::set<std::string> seen;
  for (const std::string& name : selectors) {
    const auto& known = known_selectors();
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw std::invalid_argument("unknown selector: " + name);
    if (!seen.insert(name).second)
      throw std::invalid_argument("duplicate selector: " + name);
  }
  if (seen.count("neuralbag") && validation != ValidationScenario::oob)
    throw std::invalid_argument("neuralbag needs out-of-bag validation");

  if (validation != ValidationScenario::oob) {
    const double fraction =
        validation == ValidationScenario::external20 ? 0.20 : 0.37;
    const auto val_size = static_cast<std::size_t>(
        std::lround(fraction * static_cast<double>(train_size)));
    if (val_size == 0 || val_size >= train_size)
      throw std::invalid_argument("train_size too small for external split");
  }

  switch (dataset) {
    case DatasetKind::friedman1:
      if (noise.kind == NoiseSpec::Kind::noise_to_signal)
        throw std::invalid_argument("friedman1 takes absolute-sigma noise");
      break;
    case DatasetKind::friedman2:
    case DatasetKind::friedman3:
      if (noise.kind == NoiseSpec::Kind::gaussian_sigma)
        throw std::invalid_argument(
            "friedman2/3 take noise-to-signal ratio noise");
      break;
    case DatasetKind::ikeda:
    case DatasetKind::mackey_glass:
    case DatasetKind::csv:
      if (noise.kind != NoiseSpec::Kind::none)
        throw std::invalid_argument(
            "series and csv datasets take no synthetic noise");
      break;
  }
  if (dataset == DatasetKind::csv && csv_path.empty())
    throw std::invalid_argument("csv dataset needs a path");
  if (weighting && !(weighting->alpha >= 0.0))
    throw std::invalid_argument("weighting alpha must be >= 0");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (!cfg.out_dir.empty())
    std::filesystem::create_directories(cfg.out_dir);

  ExperimentResult result;
  result.records.reserve(cfg.replications);
  for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
    try {
      result.records.push_back(run_replication(cfg, rep));
    } catch (const TrainingDiverged& e) {
      throw std::runtime_error("replication " + std::to_string(rep) + ": " +
                               e.what() + " even at the halved learning rate");
    }
  }
  result.summary = summarize_records(result.records);

  if (!cfg.out_dir.empty()) emit_tables(cfg, result, cfg.out_dir);
  return result;
}

std::vector<AlphaSweepRow> alpha_sweep(const ExperimentConfig& cfg,
                                       const std::vector<double>& alphas) {
  cfg.validate();
  if (alphas.empty()) throw std::invalid_argument("alpha_sweep: no alphas");

  // Train once per replication, cache what reweighting needs.
  struct RepCache {
    std::vector<std::vector<double>> member_test;  // M rows of P_test
    std::vector<double> test_targets;
    MemberErrors raw_errors;  // over D, raw units
    double target_variance = 0.0;
  };
  std::vector<RepCache> caches;
  for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
    RepArtifacts art = build_artifacts(cfg, rep);
    const Selection bagging_sel = select_bagging(art.selector_cube, art.kind);
    RepCache cache;
    cache.target_variance = art.target_variance;
    cache.test_targets = art.test_cube.point_targets;
    cache.member_test.resize(cfg.ensemble_size);
    for (std::size_t n = 0; n < cfg.ensemble_size; ++n) {
      cache.member_test[n].resize(art.test_cube.num_points);
      for (std::size_t p = 0; p < art.test_cube.num_points; ++p)
        cache.member_test[n][p] =
            art.test_cube.value(n, bagging_sel.tau[n], p);
    }
    cache.raw_errors = member_errors(art.weight_cube, bagging_sel);
    for (double& e : cache.raw_errors.e) e *= art.error_scale;
    caches.push_back(std::move(cache));
  }

  std::vector<AlphaSweepRow> rows;
  for (double alpha : alphas) {
    for (const WeightLaw law : {WeightLaw::power, WeightLaw::exp}) {
      AlphaSweepRow row;
      row.alpha = alpha;
      row.law = law == WeightLaw::power ? "power" : "exp";
      for (const RepCache& cache : caches) {
        const std::vector<double> w =
            law == WeightLaw::power ? weights_power(cache.raw_errors, alpha)
                                    : weights_exp(cache.raw_errors, alpha);
        std::vector<double> predictions(cache.test_targets.size(), 0.0);
        for (std::size_t n = 0; n < w.size(); ++n)
          for (std::size_t p = 0; p < predictions.size(); ++p)
            predictions[p] += w[n] * cache.member_test[n][p];
        row.mean_nmse +=
            nmse(predictions, cache.test_targets, cache.target_variance);
      }
      row.mean_nmse /= static_cast<double>(caches.size());
      rows.push_back(row);
    }
  }
  return rows;
}

void emit_tables(const ExperimentConfig& cfg, const ExperimentResult& result,
                 const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  const std::string dataset = to_string(cfg.dataset);
  const std::string noise = cfg.noise.label();

  {
    std::ofstream out(dir / "records.csv");
    out << "run_id,dataset,noise,length,algorithm,nmse,mean_error,variance\n";
    for (const ReplicationRecord& rec : result.records)
      for (const AlgorithmResult& res : rec.results)
        out << rec.replication << ',' << dataset << ',' << noise << ','
            << cfg.train_size << ',' << res.algorithm << ','
            << format_full(res.nmse) << ',' << format_full(res.mean_member_error)
            << ',' << format_full(res.member_variance) << '\n';
    if (!out) throw std::runtime_error("write failed: records.csv");
  }
  {
    std::ofstream out(dir / "summary.csv");
    out << "algorithm,mean_nmse,mean_error,variance\n";
    const ExperimentSummary& s = result.summary;
    for (std::size_t a = 0; a < s.algorithms.size(); ++a)
      out << s.algorithms[a] << ',' << format_full(s.mean_nmse[a]) << ','
          << format_full(s.mean_member_error[a]) << ','
          << format_full(s.mean_variance[a]) << '\n';
    if (!out) throw std::runtime_error("write failed: summary.csv");
  }
  {
    std::ofstream out(dir / "sign_tests.csv");
    out << "algorithm,baseline,wins,runs,fraction,p_value,significant\n";
    for (const SignRow& row : result.summary.sign_tests)
      out << row.algorithm << ',' << row.baseline << ',' << row.wins << ','
          << row.runs << ',' << format_full(row.test.fraction) << ','
          << format_full(row.test.p_value) << ','
          << (row.test.significant_at_95 ? 1 : 0) << '\n';
    if (!out) throw std::runtime_error("write failed: sign_tests.csv");
  }
  {
    std::ofstream out(dir / "tables.md");
    const ExperimentSummary& s = result.summary;
    out << "# " << dataset << " (" << noise << "), N=" << cfg.train_size
        << ", " << to_string(cfg.validation) << ", M=" << cfg.ensemble_size
        << ", T=" << cfg.snapshot_count << ", R=" << cfg.replications
        << "\n\n";
    out << "NMSE and its decomposition in units of 1e-2; best NMSE in "
           "bold.\n\n";
    out << "| algorithm | NMSE | mean error | variance |\n";
    out << "|---|---|---|---|\n";
    std::size_t best = 0;
    for (std::size_t a = 1; a < s.algorithms.size(); ++a)
      if (s.mean_nmse[a] < s.mean_nmse[best]) best = a;
    for (std::size_t a = 0; a < s.algorithms.size(); ++a) {
      const std::string shown = format_fixed(100.0 * s.mean_nmse[a], 2);
      out << "| " << s.algorithms[a] << " | "
          << (a == best ? "**" + shown + "**" : shown) << " | "
          << format_fixed(100.0 * s.mean_member_error[a], 2) << " | "
          << format_fixed(100.0 * s.mean_variance[a], 2) << " |\n";
    }
    if (!s.sign_tests.empty()) {
      out << "\n## Sign tests\n\n";
      out << "Fraction of runs the algorithm beats the baseline; "
             "significant marks p < 0.05 under the exact two-sided "
             "binomial test.\n\n";
      out << "| algorithm | baseline | fraction | p value | significant |\n";
      out << "|---|---|---|---|---|\n";
      for (const SignRow& row : result.summary.sign_tests)
        out << "| " << row.algorithm << " | " << row.baseline << " | "
            << format_fixed(row.test.fraction, 2) << " | "
            << format_fixed(row.test.p_value, 4) << " | "
            << (row.test.significant_at_95 ? "yes" : "no") << " |\n";
    }
    if (!out) throw std::runtime_error("write failed: tables.md");
  }
}

void emit_alpha_sweep(const std::vector<AlphaSweepRow>& rows,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "alpha,law,mean_nmse\n";
  for (const AlphaSweepRow& row : rows)
    out << format_full(row.alpha) << ',' << row.law << ','
        << format_full(row.mean_nmse) << '\n';
  out.close();
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<std::map<std::string, std::string>> read_csv_table(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty table: " + path);
  const std::vector<std::string> header = split_csv_line(line);
  std::vector<std::map<std::string, std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw std::runtime_error("ragged table row in " + path);
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size(); ++i)
      row[header[i]] = fields[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::size_t paper_default_hidden_units(DatasetKind kind,
                                       std::size_t train_size) {
  struct Entry {
    std::size_t size;
    std::size_t hidden;
  };
  std::vector<Entry> table;
  switch (kind) {
    case DatasetKind::friedman1:
      table = {{50, 6}, {100, 10}, {200, 15}};
      break;
    case DatasetKind::friedman2:
      table = {{20, 4}, {50, 6}, {100, 8}};
      break;
    case DatasetKind::friedman3:
      table = {{100, 6}, {200, 8}, {400, 12}};
      break;
    case DatasetKind::ikeda:
      return 10;
    case DatasetKind::mackey_glass:
      return 40;
    case DatasetKind::csv:
      return 5;
  }
  Entry best = table.front();
  for (const Entry& e : table) {
    const auto d1 = e.size > train_size ? e.size - train_size
                                        : train_size - e.size;
    const auto d0 = best.size > train_size ? best.size - train_size
                                           : train_size - best.size;
    if (d1 < d0 || (d1 == d0 && e.size > best.size)) best = e;
  }
  return best.hidden;
}

void apply_paper_defaults(ExperimentConfig& cfg) {
  cfg.ensemble_size = 20;
  cfg.snapshot_count = 200;
  cfg.sa_step_multiplier = 15;
  cfg.total_epochs = 2000;
  cfg.batch_mode = BatchMode::per_pattern;
  cfg.hidden_units = paper_default_hidden_units(cfg.dataset, cfg.train_size);
  if (cfg.dataset != DatasetKind::csv) cfg.test_size = 1000;
}

}  // namespace ensnap

#include "mvcca/experiment.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <thread>

#include "json_conv.hpp"
#include "mvcca/checkpoint.hpp"
#include "mvcca/correlation.hpp"
#include "mvcca/hash.hpp"
#include "mvcca/seed.hpp"
#include "mvcca/synthgen.hpp"

namespace mvcca {

namespace {

json to_json(const ExperimentConfig& cfg) {
  json j;
  if (cfg.dataset_path) j["dataset"] = cfg.dataset_path->string();
  if (cfg.synth) j["synth"] = mvcca::to_json(*cfg.synth);
  if (!cfg.common_rates.empty()) j["common_rates"] = cfg.common_rates;
  json runs = json::array();
  for (const TrainConfig& r : cfg.runs) runs.push_back(mvcca::to_json(r));
  j["runs"] = runs;
  j["run_labels"] = cfg.run_labels;
  j["cadence"] = cfg.cadence;
  j["probe_lambda"] = cfg.probe_lambda;
  j["out_dir"] = cfg.out_dir;
  j["seed"] = cfg.master_seed;
  return j;
}

ExperimentConfig experiment_from_json(const json& j, const std::string& where) {
  check_keys(j,
             {"dataset", "synth", "common_rates", "methods", "runs", "run_labels", "cadence",
              "probe_lambda", "out_dir", "seed"},
             where);
  ExperimentConfig cfg;
  try {
    if (j.contains("seed")) cfg.master_seed = j.at("seed").get<uint64_t>();
    if (j.contains("dataset")) cfg.dataset_path = j.at("dataset").get<std::string>();
    if (j.contains("synth")) cfg.synth = synth_config_from_json(j.at("synth"));
    if (j.contains("common_rates"))
      cfg.common_rates = j.at("common_rates").get<std::vector<int>>();
    if (j.contains("cadence")) cfg.cadence = j.at("cadence").get<int>();
    if (j.contains("probe_lambda")) cfg.probe_lambda = j.at("probe_lambda").get<double>();
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("methods")) {
      for (const json& m : j.at("methods")) {
        const Method method = method_from_name(m.get<std::string>());
        TrainConfig t = paper_train_config(method);
        t.seed = cfg.master_seed;
        cfg.runs.push_back(t);
      }
    }
    if (j.contains("runs")) {
      for (const json& r : j.at("runs")) {
        TrainConfig t = train_config_from_json(r);
        if (!r.contains("seed")) t.seed = cfg.master_seed;
        cfg.runs.push_back(t);
      }
    }
    if (j.contains("run_labels"))
      cfg.run_labels = j.at("run_labels").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ParseError(where + ": " + e.what());
  }
  if (cfg.runs.empty()) throw ParseError(where + ": no runs configured");
  if (!cfg.run_labels.empty() && cfg.run_labels.size() != cfg.runs.size()) {
    throw ParseError(where + ": run_labels must match runs");
  }
  if (cfg.run_labels.empty()) {
    for (const TrainConfig& r : cfg.runs) cfg.run_labels.push_back(method_name(r.method));
  }
  if (!cfg.dataset_path && !cfg.synth) {
    throw ParseError(where + ": need either 'dataset' or 'synth'");
  }
  return cfg;
}

}  // namespace

ExperimentConfig load_experiment_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open config " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
  return experiment_from_json(j, file.string());
}

void save_experiment_config(const std::filesystem::path& file, const ExperimentConfig& cfg) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write " + file.string());
  out << to_json(cfg).dump(2) << "\n";
}

TrainConfig paper_train_config(Method m) {
  TrainConfig cfg;
  cfg.method = m;
  cfg.epochs = 1200;
  cfg.batch_size = 2000;
  cfg.embed_dim = 100;
  cfg.noise_dist = NoiseDist::gaussian;
  switch (m) {
    case Method::linear_cca:
      cfg.learning_rate = 1e-4;
      cfg.ridge = 1e-3;
      cfg.alpha = 0.0;
      cfg.hidden_dims = {};
      break;
    case Method::dcca:
      cfg.learning_rate = 5e-3;
      cfg.ridge = 1e-3;
      cfg.alpha = 0.0;
      cfg.hidden_dims = {256};
      break;
    case Method::nr_dcca:
      cfg.learning_rate = 1.5e-2;
      cfg.ridge = 0.0;
      cfg.alpha = 200.0;
      cfg.hidden_dims = {256};
      break;
    case Method::concat:
      cfg.learning_rate = 1e-4;
      cfg.alpha = 0.0;
      cfg.ridge = 0.0;
      cfg.hidden_dims = {};
      cfg.epochs = 1;
      break;
  }
  return cfg;
}

TrainConfig reduced_train_config(Method m) {
  TrainConfig cfg = paper_train_config(m);
  cfg.epochs = 400;
  cfg.embed_dim = 50;
  if (!cfg.hidden_dims.empty()) cfg.hidden_dims = {64};
  return cfg;
}

SynthConfig reduced_synth_config() {
  SynthConfig s;
  s.n = 1000;
  return s;
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig cfg;
  cfg.synth = SynthConfig{};
  const auto add = [&cfg](TrainConfig t, const std::string& label) {
    t.seed = cfg.master_seed;
    cfg.runs.push_back(std::move(t));
    cfg.run_labels.push_back(label);
  };

  if (name == "synthetic-dcca") {
    add(paper_train_config(Method::dcca), "dcca");
  } else if (name == "synthetic-nr-dcca") {
    add(paper_train_config(Method::nr_dcca), "nr_dcca");
  } else if (name == "synthetic-sweep") {
    cfg.common_rates = {0, 20, 40, 60, 80, 100};
    add(paper_train_config(Method::concat), "concat");
    add(paper_train_config(Method::linear_cca), "linear_cca");
    add(paper_train_config(Method::dcca), "dcca");
    add(paper_train_config(Method::nr_dcca), "nr_dcca");
  } else if (name == "noise-ablation") {
    add(paper_train_config(Method::dcca), "dcca");
    add(paper_train_config(Method::nr_dcca), "nr_dcca_gaussian");
    TrainConfig uni = paper_train_config(Method::nr_dcca);
    uni.noise_dist = NoiseDist::uniform;
    add(uni, "nr_dcca_uniform");
  } else if (name == "depth-ablation") {
    for (int depth = 1; depth <= 3; ++depth) {
      TrainConfig d = paper_train_config(Method::dcca);
      d.hidden_dims.assign(static_cast<size_t>(depth), 256);
      add(d, "dcca_depth" + std::to_string(depth));
      TrainConfig n = paper_train_config(Method::nr_dcca);
      n.hidden_dims.assign(static_cast<size_t>(depth), 256);
      add(n, "nr_dcca_depth" + std::to_string(depth));
    }
  } else if (name == "reduced") {
    cfg.synth = reduced_synth_config();
    add(reduced_train_config(Method::dcca), "dcca");
    add(reduced_train_config(Method::nr_dcca), "nr_dcca");
  } else if (name == "reduced-sweep") {
    cfg.synth = reduced_synth_config();
    cfg.common_rates = {0, 20, 40, 60, 80, 100};
    add(reduced_train_config(Method::concat), "concat");
    add(reduced_train_config(Method::linear_cca), "linear_cca");
    add(reduced_train_config(Method::dcca), "dcca");
    add(reduced_train_config(Method::nr_dcca), "nr_dcca");
  } else {
    throw ParseError("unknown preset '" + name + "'");
  }
  return cfg;
}

std::vector<std::string> preset_names() {
  return {"synthetic-dcca", "synthetic-nr-dcca", "synthetic-sweep",
          "noise-ablation", "depth-ablation",    "reduced",
          "reduced-sweep"};
}

uint64_t experiment_hash(const ExperimentConfig& cfg) {
  return fnv1a64(to_json(cfg).dump());
}

uint64_t run_hash(const TrainConfig& cfg, const MultiViewDataset& data) {
  json j{{"train", mvcca::to_json(cfg)}};
  j["dataset"] = data.synth ? mvcca::to_json(*data.synth) : json(data.source);
  return fnv1a64(j.dump());
}

std::filesystem::path resolve_out_dir(const std::string& out_dir) {
  std::filesystem::path p(out_dir);
  if (p.is_absolute()) return p;
  if (const char* root = std::getenv("MVCCA_OUT_ROOT")) {
    return std::filesystem::path(root) / p;
  }
  return p;
}

TrainedModel run_training(const MultiViewDataset& data, const TrainConfig& cfg, int cadence,
                          double probe_lambda, const std::filesystem::path& dir) {
  const int effective_cadence = cadence > 0 ? cadence : cfg.epochs;
  const uint64_t probe_base = seed_lane(cfg.seed, lanes::kProbeNoise);
  const ProbeFn probe = [&](int epoch, const std::vector<Encoder>& encoders) {
    ProbeOptions opt;
    opt.lambda = probe_lambda;
    opt.ridge = cfg.ridge;
    opt.noise_dist = cfg.noise_dist;
    opt.noise_seed = seed_lane(probe_base, static_cast<uint64_t>(epoch));
    return probe_model(encoders, data, opt);
  };

  TrainedModel model = train(data, cfg, probe, effective_cadence);
  if (!dir.empty()) {
    std::filesystem::create_directories(dir);
    const uint64_t h = run_hash(cfg, data);
    save_checkpoint(dir / "checkpoint.json", model, h);
    write_metrics_jsonl(dir / "metrics.jsonl", model.history, h);
  }
  return model;
}

TrainedModel concat_baseline(const MultiViewDataset& data, uint64_t seed, double probe_lambda,
                             const std::filesystem::path& dir) {
  data.validate();
  TrainedModel model;
  model.config = paper_train_config(Method::concat);
  model.config.seed = seed;
  model.config.epochs = 0;

  std::vector<ViewBatch> raw;
  for (int k = 0; k < data.n_views(); ++k) {
    model.encoders.push_back(identity_encoder(static_cast<int>(data.views[k].rows())));
    raw.push_back(center_rows(data.view_train(k)));
  }

  MetricRecord rec;
  rec.epoch = 0;
  rec.corr_value = corr_multi(raw, model.config.ridge);
  ProbeOptions opt;
  opt.lambda = probe_lambda;
  opt.ridge = model.config.ridge;
  opt.noise_seed = seed_lane(seed_lane(seed, lanes::kProbeNoise), 0);
  rec.diag = probe_model(model.encoders, data, opt);
  model.history.push_back(std::move(rec));

  if (!dir.empty()) {
    std::filesystem::create_directories(dir);
    const uint64_t h = run_hash(model.config, data);
    save_checkpoint(dir / "checkpoint.json", model, h);
    write_metrics_jsonl(dir / "metrics.jsonl", model.history, h);
  }
  return model;
}

Diagnostics evaluate_model(const TrainedModel& model, const MultiViewDataset& data,
                           double probe_lambda) {
  const int epoch =
      model.history.empty() ? model.config.epochs : model.history.back().epoch;
  ProbeOptions opt;
  opt.lambda = probe_lambda;
  opt.ridge = model.config.ridge;
  opt.noise_dist = model.config.noise_dist;
  opt.noise_seed = seed_lane(seed_lane(model.config.seed, lanes::kProbeNoise),
                             static_cast<uint64_t>(epoch));
  return probe_model(model.encoders, data, opt);
}

namespace {

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

SummaryRow summary_from(const TrainedModel& model, int common_rate) {
  if (model.history.empty() || !model.history.back().diag) {
    throw ContractViolation("summary_from: model has no probed final record");
  }
  const MetricRecord& rec = model.history.back();
  const Diagnostics& d = *rec.diag;
  SummaryRow row;
  row.method = method_name(model.config.method);
  row.common_rate = common_rate;
  row.epoch = rec.epoch;
  row.mean_r2 = d.mean_r2;
  row.r2_std = d.r2_std;
  row.corr_value = rec.corr_value;
  row.nesum_mean = d.nesum_mean;
  row.recon_mean = mean_of(d.recon_loss);
  row.denoise_mean = mean_of(d.denoise_loss);
  row.corr_with_noise_mean = mean_of(d.corr_with_noise);
  return row;
}

SweepResult run_sweep(const ExperimentConfig& cfg, int jobs) {
  struct Cell {
    int common_rate;
    TrainConfig train;
    std::string label;
  };

  std::vector<Cell> cells;
  if (!cfg.common_rates.empty()) {
    if (!cfg.synth) {
      throw ContractViolation("run_sweep: common-rate sweep needs a synth template");
    }
    for (int cr : cfg.common_rates) {
      for (size_t r = 0; r < cfg.runs.size(); ++r) {
        cells.push_back(Cell{cr, cfg.runs[r], cfg.run_labels[r]});
      }
    }
  } else {
    for (size_t r = 0; r < cfg.runs.size(); ++r) {
      cells.push_back(Cell{cfg.synth ? cfg.synth->common_rate : -1, cfg.runs[r],
                           cfg.run_labels[r]});
    }
  }

  const std::filesystem::path out_root = resolve_out_dir(cfg.out_dir);
  std::filesystem::create_directories(out_root);

  std::vector<SummaryRow> rows(cells.size());
  std::vector<std::string> labels(cells.size());
  std::atomic<size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;

  const auto worker = [&]() {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        const Cell& cell = cells[i];
        MultiViewDataset data;
        if (!cfg.common_rates.empty()) {
          SynthConfig s = *cfg.synth;
          s.common_rate = cell.common_rate;
          data = build_dataset(s);
        } else if (cfg.dataset_path) {
          data = load_dataset(*cfg.dataset_path);
        } else {
          data = build_dataset(*cfg.synth);
        }
        std::filesystem::path dir = out_root;
        if (!cfg.common_rates.empty()) {
          dir /= "cr_" + std::to_string(cell.common_rate);
        }
        dir /= cell.label;
        TrainedModel model =
            cell.train.method == Method::concat
                ? concat_baseline(data, cell.train.seed, cfg.probe_lambda, dir)
                : run_training(data, cell.train, cfg.cadence, cfg.probe_lambda, dir);
        SummaryRow row = summary_from(model, cell.common_rate);
        row.method = cell.label;
        rows[i] = std::move(row);
        labels[i] = cell.label;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const int n_workers = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  // Deterministic ordering regardless of worker scheduling.
  std::vector<size_t> order(rows.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (rows[a].common_rate != rows[b].common_rate) {
      return rows[a].common_rate < rows[b].common_rate;
    }
    return rows[a].method < rows[b].method;
  });
  std::vector<SummaryRow> sorted;
  for (size_t i : order) sorted.push_back(rows[i]);

  SweepResult result;
  result.rows = std::move(sorted);
  result.summary_csv = out_root / "summary.csv";
  write_summary_csv(result.summary_csv, result.rows, experiment_hash(cfg));
  return result;
}

}  // namespace mvcca

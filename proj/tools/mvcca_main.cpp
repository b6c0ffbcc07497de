// Command-line runner: dataset generation, training, evaluation, ingestion
// of external multi-view data, and method x common-rate sweeps.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "mvcca/dataset.hpp"
#include "mvcca/checkpoint.hpp"
#include "mvcca/error.hpp"
#include "mvcca/experiment.hpp"
#include "mvcca/hash.hpp"
#include "mvcca/metrics.hpp"
#include "mvcca/synthgen.hpp"

namespace fs = std::filesystem;
using namespace mvcca;

namespace {

ExperimentConfig resolve_experiment(const std::string& config_path, const std::string& preset_name,
                                    bool seed_set, uint64_t seed, int cadence,
                                    const std::string& out_dir, const std::string& data_dir) {
  ExperimentConfig cfg;
  if (!config_path.empty() && !preset_name.empty()) {
    throw ParseError("pass either --config or --preset, not both");
  }
  if (!config_path.empty()) {
    cfg = load_experiment_config(config_path);
  } else if (!preset_name.empty()) {
    cfg = preset(preset_name);
  } else {
    throw ParseError("need --config or --preset");
  }
  if (seed_set) {
    cfg.master_seed = seed;
    if (cfg.synth) cfg.synth->seed = seed;
    for (TrainConfig& r : cfg.runs) r.seed = seed;
  }
  if (cadence > 0) cfg.cadence = cadence;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (!data_dir.empty()) {
    if (!cfg.common_rates.empty()) {
      throw ParseError("--data cannot be combined with a common-rate sweep config");
    }
    cfg.dataset_path = data_dir;
    cfg.synth.reset();
  }
  return cfg;
}

SplitSpec parse_split(const std::string& spec) {
  SplitSpec s;
  const int got = std::sscanf(spec.c_str(), "train=%d:%d,test=%d:%d", &s.train_begin,
                              &s.train_end, &s.test_begin, &s.test_end);
  if (got != 4) {
    throw ParseError("split spec must look like train=0:800,test=800:1000, got '" + spec + "'");
  }
  return s;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"mvcca: multi-view CCA toolkit (linear CCA, deep CCA, noise-regularized deep CCA)"};
  app.require_subcommand(1);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Generate synthetic multi-view datasets");
  std::string gen_config, gen_out = "data";
  std::vector<int> gen_crs;
  SynthConfig synth;
  bool gen_seed_set = false;
  uint64_t gen_seed = 0;
  gen->add_option("--config", gen_config, "Synth config JSON file");
  gen->add_option("--out", gen_out, "Output directory");
  gen->add_option("--cr", gen_crs, "Common rate(s); several values create one subdir each");
  gen->add_option("--d", synth.d, "Latent dimension");
  gen->add_option("--n", synth.n, "Sample count (half train, half test)");
  gen->add_option("--noise-scale", synth.view_noise_scale, "View transform noise scale");
  gen->add_option("--transform-hidden", synth.transform_hidden, "View transform hidden width");
  gen->add_option("--tasks", synth.task_count, "Downstream regression task count");
  gen->add_option("--seed", gen_seed, "Master seed")->each([&](const std::string&) {
    gen_seed_set = true;
  });

  // train
  auto* tr = app.add_subcommand("train", "Train configured methods on one dataset");
  std::string tr_config, tr_preset, tr_out, tr_data;
  uint64_t tr_seed = 0;
  bool tr_seed_set = false;
  int tr_cadence = 0, tr_jobs = 1;
  tr->add_option("--config", tr_config, "Experiment config JSON");
  tr->add_option("--preset", tr_preset, "Named preset");
  tr->add_option("--data", tr_data, "Dataset directory (overrides config dataset)");
  tr->add_option("--out", tr_out, "Output directory");
  tr->add_option("--cadence", tr_cadence, "Epochs between metric probes");
  tr->add_option("--jobs", tr_jobs, "Parallel worker slots");
  tr->add_option("--seed", tr_seed, "Master seed override")->each([&](const std::string&) {
    tr_seed_set = true;
  });

  // sweep
  auto* sw = app.add_subcommand("sweep", "Run a method x common-rate sweep");
  std::string sw_config, sw_preset, sw_out;
  uint64_t sw_seed = 0;
  bool sw_seed_set = false;
  int sw_cadence = 0, sw_jobs = 1;
  sw->add_option("--config", sw_config, "Experiment config JSON");
  sw->add_option("--preset", sw_preset, "Named preset");
  sw->add_option("--out", sw_out, "Output directory");
  sw->add_option("--cadence", sw_cadence, "Epochs between metric probes");
  sw->add_option("--jobs", sw_jobs, "Parallel worker slots");
  sw->add_option("--seed", sw_seed, "Master seed override")->each([&](const std::string&) {
    sw_seed_set = true;
  });

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Evaluate a checkpoint on a dataset");
  std::string ev_checkpoint, ev_data, ev_out = "summary.csv";
  ev->add_option("--checkpoint", ev_checkpoint, "Checkpoint JSON")->required();
  ev->add_option("--data", ev_data, "Dataset directory")->required();
  ev->add_option("--out", ev_out, "Summary CSV path");

  // ingest
  auto* in = app.add_subcommand("ingest", "Normalize external CSV views into a dataset");
  std::vector<std::string> in_views;
  std::string in_tasks, in_split, in_out = "data";
  in->add_option("--view", in_views, "View CSV (repeat per view)")->required();
  in->add_option("--tasks", in_tasks, "Task CSV")->required();
  in->add_option("--split", in_split, "Split spec, e.g. train=0:800,test=800:1000")->required();
  in->add_option("--out", in_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    if (!gen_config.empty()) {
      const ExperimentConfig wrapper = load_experiment_config(gen_config);
      if (!wrapper.synth) throw ParseError(gen_config + ": no synth section");
      synth = *wrapper.synth;
    }
    if (gen_seed_set) synth.seed = gen_seed;
    const fs::path root = resolve_out_dir(gen_out);
    std::vector<int> crs = gen_crs.empty() ? std::vector<int>{synth.common_rate} : gen_crs;
    for (int cr : crs) {
      SynthConfig s = synth;
      s.common_rate = cr;
      const MultiViewDataset data = build_dataset(s);
      const fs::path dir = crs.size() > 1 ? root / ("cr_" + std::to_string(cr)) : root;
      save_dataset(dir, data, fnv1a64(std::to_string(s.seed) + "/" + std::to_string(cr)));
      std::printf("wrote %s (views %d, n %d, cr %d%%)\n", dir.string().c_str(),
                  data.n_views(), data.n_samples(), cr);
    }
    return 0;
  }

  if (tr->parsed() || sw->parsed()) {
    const bool is_sweep = sw->parsed();
    ExperimentConfig cfg = resolve_experiment(
        is_sweep ? sw_config : tr_config, is_sweep ? sw_preset : tr_preset,
        is_sweep ? sw_seed_set : tr_seed_set, is_sweep ? sw_seed : tr_seed,
        is_sweep ? sw_cadence : tr_cadence, is_sweep ? sw_out : tr_out,
        is_sweep ? std::string() : tr_data);
    const SweepResult result = run_sweep(cfg, is_sweep ? sw_jobs : tr_jobs);
    for (const SummaryRow& row : result.rows) {
      std::printf("%-24s cr=%3d epoch=%5d mean_r2=%+.4f corr=%.3f\n", row.method.c_str(),
                  row.common_rate, row.epoch, row.mean_r2, row.corr_value);
    }
    std::printf("summary: %s\n", result.summary_csv.string().c_str());
    return 0;
  }

  if (ev->parsed()) {
    const TrainedModel model = load_checkpoint(ev_checkpoint);
    const MultiViewDataset data = load_dataset(ev_data);
    for (size_t k = 0; k < model.encoders.size(); ++k) {
      if (static_cast<int>(data.views.size()) <= static_cast<int>(k) ||
          model.encoders[k].input_dim() != data.views[k].rows()) {
        throw ContractViolation(
            "checkpoint/dataset mismatch: encoder " + std::to_string(k) + " expects " +
            std::to_string(model.encoders[k].input_dim()) + " features, dataset view has " +
            (k < data.views.size() ? std::to_string(data.views[k].rows()) : "none"));
      }
    }
    TrainedModel probed = model;
    MetricRecord rec;
    rec.epoch = model.config.epochs;
    rec.corr_value = 0.0;
    rec.diag = evaluate_model(model, data, 1.0);
    probed.history.push_back(rec);
    const SummaryRow row =
        summary_from(probed, data.synth ? data.synth->common_rate : -1);
    write_summary_csv(resolve_out_dir(ev_out), {row}, run_hash(model.config, data));
    std::printf("%-24s cr=%3d mean_r2=%+.4f nesum=%.4f recon=%.4f denoise=%.4f\n",
                row.method.c_str(), row.common_rate, row.mean_r2, row.nesum_mean,
                row.recon_mean, row.denoise_mean);
    return 0;
  }

  if (in->parsed()) {
    std::vector<fs::path> views(in_views.begin(), in_views.end());
    const MultiViewDataset data = ingest(views, in_tasks, parse_split(in_split));
    std::string tag;
    for (const auto& v : in_views) tag += v + ";";
    tag += in_tasks + ";" + in_split;
    save_dataset(resolve_out_dir(in_out), data, fnv1a64(tag));
    std::printf("ingested %d views, %d samples into %s\n", data.n_views(), data.n_samples(),
                resolve_out_dir(in_out).string().c_str());
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 1;
  }
}

#pragma once

// src-local nlohmann conversions; public headers stay JSON-free so the
// installed interface only needs Eigen.

#include <nlohmann/json.hpp>

#include "mvcca/dataset.hpp"
#include "mvcca/eval.hpp"
#include "mvcca/train.hpp"

namespace mvcca {

using nlohmann::json;

inline void check_keys(const json& j, std::initializer_list<const char*> allowed,
                       const std::string& where) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) throw ParseError(where + ": unknown field '" + item.key() + "'");
  }
}

inline json to_json(const SynthConfig& cfg) {
  return json{{"d", cfg.d},
              {"n", cfg.n},
              {"k_views", cfg.k_views},
              {"common_rate", cfg.common_rate},
              {"view_noise_scale", cfg.view_noise_scale},
              {"transform_hidden", cfg.transform_hidden},
              {"task_count", cfg.task_count},
              {"seed", cfg.seed}};
}

inline SynthConfig synth_config_from_json(const json& j) {
  check_keys(j,
             {"d", "n", "k_views", "common_rate", "view_noise_scale", "transform_hidden",
              "task_count", "seed"},
             "synth config");
  SynthConfig cfg;
  try {
    if (j.contains("d")) cfg.d = j.at("d").get<int>();
    if (j.contains("n")) cfg.n = j.at("n").get<int>();
    if (j.contains("k_views")) cfg.k_views = j.at("k_views").get<int>();
    if (j.contains("common_rate")) cfg.common_rate = j.at("common_rate").get<int>();
    if (j.contains("view_noise_scale"))
      cfg.view_noise_scale = j.at("view_noise_scale").get<double>();
    if (j.contains("transform_hidden"))
      cfg.transform_hidden = j.at("transform_hidden").get<int>();
    if (j.contains("task_count")) cfg.task_count = j.at("task_count").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("synth config: ") + e.what());
  }
  return cfg;
}

inline json to_json(const TrainConfig& cfg) {
  json j{{"method", method_name(cfg.method)},
         {"learning_rate", cfg.learning_rate},
         {"epochs", cfg.epochs},
         {"batch_size", cfg.batch_size},
         {"alpha", cfg.alpha},
         {"ridge", cfg.ridge},
         {"noise_dist", cfg.noise_dist == NoiseDist::gaussian ? "gaussian" : "uniform"},
         {"seed", cfg.seed},
         {"hidden_dims", cfg.hidden_dims},
         {"embed_dim", cfg.embed_dim},
         {"noise_per_batch", cfg.noise_per_batch}};
  if (cfg.nr_subsample) j["nr_subsample"] = *cfg.nr_subsample;
  return j;
}

inline TrainConfig train_config_from_json(const json& j) {
  check_keys(j,
             {"method", "learning_rate", "epochs", "batch_size", "alpha", "ridge",
              "noise_dist", "seed", "hidden_dims", "embed_dim", "nr_subsample",
              "noise_per_batch"},
             "train config");
  TrainConfig cfg;
  try {
    if (j.contains("method")) cfg.method = method_from_name(j.at("method").get<std::string>());
    if (j.contains("learning_rate")) cfg.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("epochs")) cfg.epochs = j.at("epochs").get<int>();
    if (j.contains("batch_size")) cfg.batch_size = j.at("batch_size").get<int>();
    if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
    if (j.contains("ridge")) cfg.ridge = j.at("ridge").get<double>();
    if (j.contains("noise_dist")) {
      const std::string d = j.at("noise_dist").get<std::string>();
      if (d == "gaussian") {
        cfg.noise_dist = NoiseDist::gaussian;
      } else if (d == "uniform") {
        cfg.noise_dist = NoiseDist::uniform;
      } else {
        throw ParseError("train config: unknown noise_dist '" + d + "'");
      }
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
    if (j.contains("hidden_dims")) cfg.hidden_dims = j.at("hidden_dims").get<std::vector<int>>();
    if (j.contains("embed_dim")) cfg.embed_dim = j.at("embed_dim").get<int>();
    if (j.contains("nr_subsample")) cfg.nr_subsample = j.at("nr_subsample").get<int>();
    if (j.contains("noise_per_batch")) cfg.noise_per_batch = j.at("noise_per_batch").get<bool>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("train config: ") + e.what());
  }
  return cfg;
}

inline json to_json(const Diagnostics& d) {
  json spectra = json::array();
  for (const Vector& s : d.first_layer_spectrum) {
    spectra.push_back(std::vector<double>(s.data(), s.data() + s.size()));
  }
  return json{{"mean_r2", d.mean_r2},
              {"r2_std", d.r2_std},
              {"per_task_r2", d.per_task_r2},
              {"corr_with_noise", d.corr_with_noise},
              {"corr_with_noise_raw", d.corr_with_noise_raw},
              {"nesum_mean", d.nesum_mean},
              {"recon_loss", d.recon_loss},
              {"denoise_loss", d.denoise_loss},
              {"first_layer_spectrum", spectra}};
}

inline Diagnostics diagnostics_from_json(const json& j) {
  Diagnostics d;
  d.mean_r2 = j.at("mean_r2").get<double>();
  d.r2_std = j.at("r2_std").get<double>();
  d.per_task_r2 = j.at("per_task_r2").get<std::vector<double>>();
  d.corr_with_noise = j.at("corr_with_noise").get<std::vector<double>>();
  d.corr_with_noise_raw = j.at("corr_with_noise_raw").get<std::vector<double>>();
  d.nesum_mean = j.at("nesum_mean").get<double>();
  d.recon_loss = j.at("recon_loss").get<std::vector<double>>();
  d.denoise_loss = j.at("denoise_loss").get<std::vector<double>>();
  for (const json& s : j.at("first_layer_spectrum")) {
    const auto vals = s.get<std::vector<double>>();
    Vector v(static_cast<Eigen::Index>(vals.size()));
    for (size_t i = 0; i < vals.size(); ++i) v(static_cast<Eigen::Index>(i)) = vals[i];
    d.first_layer_spectrum.push_back(std::move(v));
  }
  return d;
}

}  // namespace mvcca

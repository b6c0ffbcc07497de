#include "mvcca/checkpoint.hpp"

#include <fstream>

#include "json_conv.hpp"
#include "mvcca/hash.hpp"

namespace mvcca {

namespace {
constexpr int kCheckpointVersion = 1;
}

void save_checkpoint(const std::filesystem::path& file, const TrainedModel& model,
                     uint64_t config_hash) {
  json j;
  j["format_version"] = kCheckpointVersion;
  j["config_hash"] = hash_hex(config_hash);
  j["config"] = to_json(model.config);
  j["final_epoch"] = model.history.empty() ? 0 : model.history.back().epoch;

  json encoders = json::array();
  for (const Encoder& enc : model.encoders) {
    json layers = json::array();
    for (const Layer& l : enc.layers) {
      std::vector<double> w;
      w.reserve(static_cast<size_t>(l.weight.size()));
      for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
        for (Eigen::Index c = 0; c < l.weight.cols(); ++c) w.push_back(l.weight(r, c));
      }
      json layer{{"rows", l.weight.rows()}, {"cols", l.weight.cols()}, {"weight", w}};
      if (l.has_bias()) {
        layer["bias"] = std::vector<double>(l.bias.data(), l.bias.data() + l.bias.size());
      }
      layers.push_back(std::move(layer));
    }
    encoders.push_back(json{
        {"kind", enc.kind == EncoderKind::linear ? "linear" : "mlp"},
        {"layers", std::move(layers)},
    });
  }
  j["encoders"] = std::move(encoders);

  const std::filesystem::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error("cannot write " + tmp.string());
    out << j.dump() << "\n";
  }
  std::filesystem::rename(tmp, file);
}

TrainedModel load_checkpoint(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open checkpoint " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(file.string() + ": " + e.what());
  }

  TrainedModel model;
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kCheckpointVersion) {
      throw ParseError(file.string() + ": unsupported checkpoint version " +
                       std::to_string(version));
    }
    model.config = train_config_from_json(j.at("config"));
    for (const json& e : j.at("encoders")) {
      Encoder enc;
      enc.kind = e.at("kind").get<std::string>() == "linear" ? EncoderKind::linear
                                                             : EncoderKind::mlp;
      for (const json& layer : e.at("layers")) {
        Layer l;
        const Eigen::Index rows = layer.at("rows").get<Eigen::Index>();
        const Eigen::Index cols = layer.at("cols").get<Eigen::Index>();
        const auto w = layer.at("weight").get<std::vector<double>>();
        if (static_cast<Eigen::Index>(w.size()) != rows * cols) {
          throw ParseError(file.string() + ": weight payload does not match dimensions");
        }
        l.weight.resize(rows, cols);
        size_t i = 0;
        for (Eigen::Index r = 0; r < rows; ++r) {
          for (Eigen::Index c = 0; c < cols; ++c) l.weight(r, c) = w[i++];
        }
        if (layer.contains("bias")) {
          const auto b = layer.at("bias").get<std::vector<double>>();
          if (static_cast<Eigen::Index>(b.size()) != rows) {
            throw ParseError(file.string() + ": bias payload does not match dimensions");
          }
          l.bias.resize(rows);
          for (Eigen::Index r = 0; r < rows; ++r) l.bias(r) = b[static_cast<size_t>(r)];
        }
        enc.layers.push_back(std::move(l));
      }
      if (enc.layers.empty()) throw ParseError(file.string() + ": encoder without layers");
      model.encoders.push_back(std::move(enc));
    }
  } catch (const json::exception& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
  return model;
}

}  // namespace mvcca

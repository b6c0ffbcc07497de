#pragma once

#include <cstdint>
#include <filesystem>

#include "mvcca/train.hpp"

namespace mvcca {

// Self-describing JSON checkpoint: format version, config hash, train
// config, per-layer dimensions, and parameters in row-major order.
// The epoch history lives in the metrics stream, not here.
void save_checkpoint(const std::filesystem::path& file, const TrainedModel& model,
                     uint64_t config_hash);

// Loads encoders + config; history comes back empty.
TrainedModel load_checkpoint(const std::filesystem::path& file);

}  // namespace mvcca

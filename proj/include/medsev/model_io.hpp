#pragma once

#include <filesystem>
#include <string>

#include "medsev/pipeline.hpp"

// Versioned JSON persistence for the combined model (featurization
// parameters, idf table, wGCCA maps and scaling, softmax head).

namespace medsev {

inline constexpr const char* kModelFormat = "medsev-model";
inline constexpr int kModelVersion = 1;

std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);

// Atomic write: temp file in the target directory, then rename.
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

// Write any text atomically (temp + rename); shared by the CLI outputs.
void atomic_write(const std::filesystem::path& path, const std::string& content);

} // namespace medsev

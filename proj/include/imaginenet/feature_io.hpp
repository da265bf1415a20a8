#pragma once

#include "imaginenet/synth.hpp"

#include <filesystem>
#include <string>

namespace imagine {

// On-disk dataset layout:
//   <dir>/manifest.json
//   <dir>/<split>/<labelhash>/<index>_<view>.bin
// Feature files are raw little-endian float32, row-major T x D. The manifest
// carries the generator config, the label-space config and one entry per clip.

struct Dataset {
  SynthConfig config;
  LabelSpaceConfig label_config;
  DatasetSplit split;
};

// Refuses to touch a directory that already holds a manifest unless force.
void write_dataset(const std::filesystem::path& dir, const Dataset& dataset, bool force = false);

Dataset load_dataset(const std::filesystem::path& dir);

void write_features_f32(const std::filesystem::path& path, const Mat& features);
Mat read_features_f32(const std::filesystem::path& path, int T, int D);

std::string label_hash(const CompositeLabel& label);

}  // namespace imagine

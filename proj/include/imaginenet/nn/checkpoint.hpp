#pragma once

#include "imaginenet/nn/params.hpp"
#include "imaginenet/types.hpp"

#include <string>
#include <vector>

namespace imagine::nn {

// Binary checkpoint: magic, version, one free-form metadata string (JSON by
// convention), then named tensors as shape headers plus little-endian f64
// payloads. Matrices round-trip bit exactly.
struct Checkpoint {
  std::string meta;
  std::vector<ParamTensor> tensors;

  const ParamTensor* find(const std::string& name) const;
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

std::uint64_t file_hash(const std::string& path);

}  // namespace imagine::nn

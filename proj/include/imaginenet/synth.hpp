#pragma once

#include "imaginenet/label_space.hpp"
#include "imaginenet/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace imagine {

// Stand-in for the video backbones: clip features are mixtures of per-class
// prototype directions plus a cyclic temporal component and Gaussian noise.

struct PrototypeBank {
  Mat prototypes;  // n_classes x D, unit rows
  std::uint64_t seed = 0;

  int n_classes() const { return static_cast<int>(prototypes.rows()); }
  int dim() const { return static_cast<int>(prototypes.cols()); }
};

// Deterministic for (seed, n_classes, D). Rows are orthonormalized when
// D >= n_classes, otherwise unit-normalized with pairwise |cos| < 0.99
// enforced by redrawing.
PrototypeBank make_prototypes(std::uint64_t seed, int n_classes, int D);

struct ClipOptions {
  int T = 8;
  double noise_sigma = 0.1;
  bool temporal_enabled = true;
  double temporal_amp = 0.3;
  int temporal_cycles = 1;  // integer cycles, so the time average vanishes
  int view_id = 0;
  double view_angle = 0.15;       // plane-rotation step between adjacent views
  double view_extra_noise = 0.0;  // additive noise floor for this view
};

struct ClipSample {
  Mat features;  // T x D
  CompositeLabel label;
  int view_id = 0;
  std::uint64_t seed = 0;
};

// Each frame is sum_c w_c * proto_c (w ~ flat Dirichlet, drawn once per clip)
// plus amp * sin(2*pi*cycles*t/T + phase) * u and N(0, sigma^2) noise.
ClipSample synth_clip(const PrototypeBank& bank, const CompositeLabel& label,
                      const ClipOptions& opt, std::uint64_t seed);

// Rotation applied to prototypes for a given view; orthogonal, view 0 = identity.
Vec rotate_view(const Vec& v, int view_id, double angle);

struct SplitCounts {
  int train_per_class = 24;      // single-class clips per class, training
  int test_per_class = 16;       // single-class clips per class, held out
  int composite_per_class = 8;   // composite clips per composite label
};

struct SynthConfig {
  std::uint64_t seed = 1;
  int D = 128;
  int T = 8;
  double noise_sigma = 0.1;
  bool temporal_enabled = true;
  double temporal_amp = 0.3;
  int temporal_cycles = 1;
  int n_views = 1;
  double view_angle = 0.15;
  std::vector<double> view_noise;  // per-view extra noise; missing entries are 0
  SplitCounts counts;

  double view_extra(int view_id) const {
    return view_id < static_cast<int>(view_noise.size()) ? view_noise[view_id] : 0.0;
  }
  ClipOptions clip_options(int view_id) const;
};

struct DatasetSplit {
  std::vector<ClipSample> set1_train;  // singles
  std::vector<ClipSample> set1_test;   // singles
  std::vector<ClipSample> set2;        // composites
};

// Balanced split with disjoint per-sample seeds; every logical sample expands
// to n_views clips sharing its label and index.
DatasetSplit synth_split(const PrototypeBank& bank, const LabelSpace& space,
                         const SynthConfig& config);

// Cosine similarity of the time-averaged clip against every prototype,
// sorted descending (ties by ascending class id). Brute-force sanity oracle.
std::vector<std::pair<int, double>> oracle_rank(const ClipSample& sample,
                                                const PrototypeBank& bank);

SynthConfig synth_config_from_json(const std::string& json_text);
std::string synth_config_to_json(const SynthConfig& config);

}  // namespace imagine

#include "imaginenet/synth.hpp"

#include "imaginenet/rng.hpp"

#include <json.hpp>

#include <cmath>

namespace imagine {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 6.283185307179586;

Vec random_unit(Rng& rng, int dim) {
  Vec v(dim);
  double norm2 = 0.0;
  do {
    for (int j = 0; j < dim; ++j) v(j) = rng.normal();
    norm2 = v.squaredNorm();
  } while (norm2 == 0.0);
  return v / std::sqrt(norm2);
}

}  // namespace

PrototypeBank make_prototypes(std::uint64_t seed, int n_classes, int D) {
  require(D >= 2, "make_prototypes: D must be at least 2");
  require(n_classes >= 1, "make_prototypes: need at least one class");
  Rng rng(mix_seed(seed));
  PrototypeBank bank;
  bank.seed = seed;
  bank.prototypes.resize(n_classes, D);

  if (n_classes <= D) {
    // modified Gram-Schmidt; exact orthogonality gives composite clips clean
    // span structure
    for (int c = 0; c < n_classes; ++c) {
      Vec v = random_unit(rng, D);
      for (int k = 0; k < c; ++k) v -= v.dot(bank.prototypes.row(k)) * bank.prototypes.row(k);
      double norm = v.norm();
      while (norm < 1e-6) {  // redraw on near-dependence
        v = random_unit(rng, D);
        for (int k = 0; k < c; ++k) v -= v.dot(bank.prototypes.row(k)) * bank.prototypes.row(k);
        norm = v.norm();
      }
      bank.prototypes.row(c) = v / norm;
    }
  } else {
    for (int c = 0; c < n_classes; ++c) {
      bool ok = false;
      while (!ok) {
        Vec v = random_unit(rng, D);
        ok = true;
        for (int k = 0; k < c && ok; ++k)
          if (std::abs(v.dot(bank.prototypes.row(k))) >= 0.99) ok = false;
        if (ok) bank.prototypes.row(c) = v;
      }
    }
  }
  return bank;
}

Vec rotate_view(const Vec& v, int view_id, double angle) {
  if (view_id == 0 || angle == 0.0) return v;
  const double theta = angle * view_id;
  const double c = std::cos(theta), s = std::sin(theta);
  Vec out = v;
  for (Eigen::Index j = 0; j + 1 < v.cols(); j += 2) {
    const double a = v(j), b = v(j + 1);
    out(j) = c * a - s * b;
    out(j + 1) = s * a + c * b;
  }
  return out;
}

ClipSample synth_clip(const PrototypeBank& bank, const CompositeLabel& label,
                      const ClipOptions& opt, std::uint64_t seed) {
  require(!label.members.empty(), "synth_clip: empty label");
  require(opt.T >= 1, "synth_clip: T must be positive");
  require(opt.noise_sigma >= 0.0, "synth_clip: noise_sigma must be non-negative");
  for (int id : label.members)
    require(id >= 0 && id < bank.n_classes(), "synth_clip: label outside bank class range");

  const int D = bank.dim();
  const int T = opt.T;
  Rng rng(mix_seed(seed));

  // Draw order is fixed so that clips with the same seed share the same
  // underlying noise regardless of sigma or the temporal switch.
  const std::vector<double> weights = rng.dirichlet_flat(label.members.size());
  const double phase = rng.uniform(0.0, kTwoPi);
  const Vec temporal_dir = random_unit(rng, D);

  Vec signal = Vec::Zero(D);
  for (std::size_t i = 0; i < label.members.size(); ++i) {
    Vec proto = bank.prototypes.row(label.members[i]);
    signal += weights[i] * rotate_view(proto, opt.view_id, opt.view_angle);
  }

  const double sigma = opt.noise_sigma + opt.view_extra_noise;
  ClipSample sample;
  sample.label = label;
  sample.view_id = opt.view_id;
  sample.seed = seed;
  sample.features.resize(T, D);
  for (int t = 0; t < T; ++t) {
    Vec frame = signal;
    if (opt.temporal_enabled) {
      const double wave =
          opt.temporal_amp * std::sin(kTwoPi * opt.temporal_cycles * t / T + phase);
      frame += wave * temporal_dir;
    }
    for (int j = 0; j < D; ++j) frame(j) += sigma * rng.normal();
    sample.features.row(t) = frame;
  }
  ensure_finite(sample.features, "synth_clip");
  return sample;
}

ClipOptions SynthConfig::clip_options(int view_id) const {
  ClipOptions opt;
  opt.T = T;
  opt.noise_sigma = noise_sigma;
  opt.temporal_enabled = temporal_enabled;
  opt.temporal_amp = temporal_amp;
  opt.temporal_cycles = temporal_cycles;
  opt.view_id = view_id;
  opt.view_angle = view_angle;
  opt.view_extra_noise = view_extra(view_id);
  return opt;
}

namespace {

std::uint64_t clip_seed(std::uint64_t root, const std::string& split,
                        const CompositeLabel& label, int index, int view) {
  std::uint64_t h = fnv1a64(split + "/" + label.canonical());
  h = combine_seed(h, static_cast<std::uint64_t>(index) * 2654435761ull + 17);
  h = combine_seed(h, static_cast<std::uint64_t>(view) + 101);
  return combine_seed(root, h);
}

void emit_clips(const PrototypeBank& bank, const SynthConfig& cfg, const std::string& split,
                const CompositeLabel& label, int count, std::vector<ClipSample>& out) {
  for (int index = 0; index < count; ++index)
    for (int view = 0; view < cfg.n_views; ++view)
      out.push_back(synth_clip(bank, label, cfg.clip_options(view),
                               clip_seed(cfg.seed, split, label, index, view)));
}

}  // namespace

DatasetSplit synth_split(const PrototypeBank& bank, const LabelSpace& space,
                         const SynthConfig& config) {
  require(config.counts.train_per_class >= 1 && config.counts.test_per_class >= 1 &&
              config.counts.composite_per_class >= 1,
          "synth_split: counts must be at least 1");
  require(config.n_views >= 1, "synth_split: n_views must be at least 1");
  DatasetSplit split;
  for (const auto& single : space.singles) {
    emit_clips(bank, config, "set1_train", single, config.counts.train_per_class,
               split.set1_train);
    emit_clips(bank, config, "set1_test", single, config.counts.test_per_class, split.set1_test);
  }
  for (const auto& comp : space.composites())
    emit_clips(bank, config, "set2", comp, config.counts.composite_per_class, split.set2);
  return split;
}

std::vector<std::pair<int, double>> oracle_rank(const ClipSample& sample,
                                                const PrototypeBank& bank) {
  require(sample.features.cols() == bank.dim(), "oracle_rank: dimension mismatch");
  Vec mean = sample.features.colwise().mean();
  const double norm = mean.norm();
  require(norm > 0.0, "oracle_rank: zero-norm feature");
  std::vector<std::pair<int, double>> scores;
  scores.reserve(bank.n_classes());
  for (int c = 0; c < bank.n_classes(); ++c)
    scores.emplace_back(c, mean.dot(bank.prototypes.row(c)) /
                               (norm * bank.prototypes.row(c).norm()));
  std::stable_sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return scores;
}

SynthConfig synth_config_from_json(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("synth config: ") + e.what());
  }
  SynthConfig cfg;
  try {
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.D = doc.value("D", cfg.D);
    cfg.T = doc.value("T", cfg.T);
    cfg.noise_sigma = doc.value("noise_sigma", cfg.noise_sigma);
    cfg.temporal_enabled = doc.value("temporal_enabled", cfg.temporal_enabled);
    cfg.temporal_amp = doc.value("temporal_amp", cfg.temporal_amp);
    cfg.temporal_cycles = doc.value("temporal_cycles", cfg.temporal_cycles);
    cfg.n_views = doc.value("views", cfg.n_views);
    cfg.view_angle = doc.value("view_angle", cfg.view_angle);
    cfg.view_noise = doc.value("view_noise", cfg.view_noise);
    cfg.counts.train_per_class = doc.value("train_per_class", cfg.counts.train_per_class);
    cfg.counts.test_per_class = doc.value("test_per_class", cfg.counts.test_per_class);
    cfg.counts.composite_per_class =
        doc.value("composite_per_class", cfg.counts.composite_per_class);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("synth config: ") + e.what());
  }
  return cfg;
}

std::string synth_config_to_json(const SynthConfig& cfg) {
  json doc;
  doc["seed"] = cfg.seed;
  doc["D"] = cfg.D;
  doc["T"] = cfg.T;
  doc["noise_sigma"] = cfg.noise_sigma;
  doc["temporal_enabled"] = cfg.temporal_enabled;
  doc["temporal_amp"] = cfg.temporal_amp;
  doc["temporal_cycles"] = cfg.temporal_cycles;
  doc["views"] = cfg.n_views;
  doc["view_angle"] = cfg.view_angle;
  doc["view_noise"] = cfg.view_noise;
  doc["train_per_class"] = cfg.counts.train_per_class;
  doc["test_per_class"] = cfg.counts.test_per_class;
  doc["composite_per_class"] = cfg.counts.composite_per_class;
  return doc.dump(2);
}

}  // namespace imagine

#include "imaginenet/feature_io.hpp"

#include <json.hpp>

#include <bit>
#include <fstream>

namespace imagine {

namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "feature files assume a little-endian host");

std::string label_hash(const CompositeLabel& label) { return to_hex(fnv1a64(label.canonical())); }

void write_features_f32(const fs::path& path, const Mat& features) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ValidationError("cannot open feature file for writing: " + path.string());
  Mat32 f32 = features.cast<float>();
  os.write(reinterpret_cast<const char*>(f32.data()),
           static_cast<std::streamsize>(sizeof(float) * f32.size()));
  if (!os) throw ValidationError("feature write failed: " + path.string());
}

Mat read_features_f32(const fs::path& path, int T, int D) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open feature file: " + path.string());
  Mat32 f32(T, D);
  is.read(reinterpret_cast<char*>(f32.data()),
          static_cast<std::streamsize>(sizeof(float) * f32.size()));
  if (!is || is.gcount() != static_cast<std::streamsize>(sizeof(float) * f32.size()))
    throw ValidationError("feature file truncated: " + path.string());
  return f32.cast<double>();
}

namespace {

struct ClipIndexer {
  // per (split, labelhash) running index is implicit in clip order; the
  // manifest stores explicit indices so loading never depends on file order
};

json clip_entry(const std::string& split, const ClipSample& clip, int index,
                const std::string& file) {
  json e;
  e["split"] = split;
  e["label"] = clip.label.members;
  e["kind"] = to_string(clip.label.kind);
  e["index"] = index;
  e["view"] = clip.view_id;
  e["seed"] = clip.seed;
  e["file"] = file;
  return e;
}

void write_split(const fs::path& dir, const std::string& split_name,
                 const std::vector<ClipSample>& clips, json& entries) {
  // clips arrive grouped by label then index then view; recover the logical
  // index from position within the label group
  std::map<std::string, std::pair<int, int>> counters;  // canonical -> {index, view}
  for (const auto& clip : clips) {
    auto& [index, view] = counters[clip.label.canonical()];
    if (view != clip.view_id && clip.view_id == 0) ++index;
    const std::string hash = label_hash(clip.label);
    fs::path sub = dir / split_name / hash;
    fs::create_directories(sub);
    const std::string name = std::to_string(index) + "_" + std::to_string(clip.view_id) + ".bin";
    write_features_f32(sub / name, clip.features);
    entries.push_back(
        clip_entry(split_name, clip, index, split_name + "/" + hash + "/" + name));
    view = clip.view_id;
  }
}

}  // namespace

void write_dataset(const fs::path& dir, const Dataset& dataset, bool force) {
  const fs::path manifest = dir / "manifest.json";
  if (fs::exists(manifest) && !force)
    throw ValidationError("dataset already exists at " + dir.string() + " (use force)");
  fs::create_directories(dir);

  json doc;
  doc["format"] = "imaginenet-dataset-v1";
  doc["generator"] = json::parse(synth_config_to_json(dataset.config));
  doc["label_space"] = json::parse(label_config_to_json(dataset.label_config));
  json entries = json::array();
  write_split(dir, "set1_train", dataset.split.set1_train, entries);
  write_split(dir, "set1_test", dataset.split.set1_test, entries);
  write_split(dir, "set2", dataset.split.set2, entries);
  doc["clips"] = entries;

  std::ofstream os(manifest, std::ios::trunc);
  if (!os) throw ValidationError("cannot write manifest: " + manifest.string());
  os << doc.dump(2) << "\n";
}

Dataset load_dataset(const fs::path& dir) {
  const fs::path manifest = dir / "manifest.json";
  std::ifstream is(manifest);
  if (!is) throw ValidationError("no manifest at " + manifest.string());
  json doc;
  try {
    is >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("manifest parse error: " + std::string(e.what()));
  }

  Dataset dataset;
  dataset.config = synth_config_from_json(doc.at("generator").dump());
  dataset.label_config = label_config_from_json(doc.at("label_space").dump());
  for (const auto& e : doc.at("clips")) {
    ClipSample clip;
    clip.label = CompositeLabel::of(e.at("label").get<std::vector<int>>());
    clip.view_id = e.at("view").get<int>();
    clip.seed = e.at("seed").get<std::uint64_t>();
    clip.features =
        read_features_f32(dir / e.at("file").get<std::string>(), dataset.config.T, dataset.config.D);
    const std::string split = e.at("split").get<std::string>();
    if (split == "set1_train")
      dataset.split.set1_train.push_back(std::move(clip));
    else if (split == "set1_test")
      dataset.split.set1_test.push_back(std::move(clip));
    else if (split == "set2")
      dataset.split.set2.push_back(std::move(clip));
    else
      throw ValidationError("manifest: unknown split " + split);
  }
  return dataset;
}

}  // namespace imagine

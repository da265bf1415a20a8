#include "imaginenet/label_space.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace imagine {

using nlohmann::json;

std::string to_hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

LabelKind kind_for_size(std::size_t n) {
  switch (n) {
    case 1: return LabelKind::single;
    case 2: return LabelKind::pair;
    case 3: return LabelKind::triple;
    case 4: return LabelKind::quadruple;
    default: throw ValidationError("composite label must have 1..4 members");
  }
}

const char* to_string(LabelKind k) {
  switch (k) {
    case LabelKind::single: return "single";
    case LabelKind::pair: return "pair";
    case LabelKind::triple: return "triple";
    case LabelKind::quadruple: return "quadruple";
  }
  return "?";
}

CompositeLabel CompositeLabel::of(std::vector<int> ids) {
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw ValidationError("composite label has duplicate members");
  CompositeLabel label;
  label.kind = kind_for_size(ids.size());
  label.members = std::move(ids);
  if (label.members.size() > 1 && label.members.front() == kCorrectClass)
    throw ValidationError("class 0 cannot be part of a composite label");
  return label;
}

std::string CompositeLabel::canonical() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i) os << '+';
    os << members[i];
  }
  return os.str();
}

static void check_error_id(int id, int n_errors) {
  if (id < 1 || id > n_errors)
    throw ValidationError("exclusion pair references invalid error id " + std::to_string(id));
}

ExclusionList::ExclusionList(const std::vector<std::pair<int, int>>& pairs, int n_errors) {
  for (auto [a, b] : pairs) {
    check_error_id(a, n_errors);
    check_error_id(b, n_errors);
    if (a == b) throw ValidationError("exclusion pair with identical ids");
    pairs_.insert({std::min(a, b), std::max(a, b)});
  }
}

bool ExclusionList::contains(int a, int b) const {
  return pairs_.count({std::min(a, b), std::max(a, b)}) > 0;
}

std::vector<CompositeLabel> enumerate_pairs(int n_errors, const ExclusionList& exclusions) {
  require(n_errors >= 2, "enumerate_pairs needs at least two error classes");
  for (auto [a, b] : exclusions.pairs()) {
    check_error_id(a, n_errors);
    check_error_id(b, n_errors);
  }
  std::vector<CompositeLabel> out;
  for (int a = 1; a <= n_errors; ++a)
    for (int b = a + 1; b <= n_errors; ++b)
      if (!exclusions.contains(a, b)) out.push_back(CompositeLabel::of({a, b}));
  return out;
}

bool filter_composite(const CompositeLabel& candidate, const ExclusionList& exclusions) {
  const auto& m = candidate.members;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j)
      if (exclusions.contains(m[i], m[j])) return false;
  return true;
}

Vec encode_multi_hot(const CompositeLabel& label, int n_classes) {
  Vec v = Vec::Zero(n_classes);
  for (int id : label.members) {
    if (id < 0 || id >= n_classes)
      throw ValidationError("label member " + std::to_string(id) + " out of range for " +
                            std::to_string(n_classes) + " classes");
    v(id) = 1.0;
  }
  return v;
}

LabelSpace build_label_space(const LabelSpaceConfig& config) {
  LabelSpace space;
  space.config = config;
  space.exclusions = ExclusionList(config.exclusions, config.n_errors);

  for (int id = 0; id <= config.n_errors; ++id) space.singles.push_back(CompositeLabel::of({id}));
  space.pairs = enumerate_pairs(config.n_errors, space.exclusions);

  auto add_multi = [&](const std::vector<std::vector<int>>& lists, LabelKind kind,
                       std::vector<CompositeLabel>& out) {
    for (const auto& ids : lists) {
      CompositeLabel label = CompositeLabel::of(ids);
      if (label.kind != kind)
        throw ValidationError("member list " + label.canonical() + " has wrong size");
      for (int id : label.members) check_error_id(id, config.n_errors);
      if (!filter_composite(label, space.exclusions)) {
        // report the offending 2-subset
        const auto& m = label.members;
        for (std::size_t i = 0; i < m.size(); ++i)
          for (std::size_t j = i + 1; j < m.size(); ++j)
            if (space.exclusions.contains(m[i], m[j]))
              throw ValidationError("composite " + label.canonical() + " contains excluded pair " +
                                    std::to_string(m[i]) + "+" + std::to_string(m[j]));
      }
      out.push_back(std::move(label));
    }
  };
  add_multi(config.triples, LabelKind::triple, space.triples);
  add_multi(config.quadruples, LabelKind::quadruple, space.quadruples);
  return space;
}

std::vector<CompositeLabel> LabelSpace::composites() const {
  std::vector<CompositeLabel> out = pairs;
  out.insert(out.end(), triples.begin(), triples.end());
  out.insert(out.end(), quadruples.begin(), quadruples.end());
  return out;
}

static json label_list_json(const std::vector<CompositeLabel>& labels) {
  json arr = json::array();
  for (const auto& l : labels) arr.push_back(l.members);
  return arr;
}

std::string LabelSpace::serialize() const {
  json doc;
  doc["n_errors"] = config.n_errors;
  doc["n_classes"] = n_classes();
  json ex = json::array();
  for (auto [a, b] : exclusions.pairs()) ex.push_back({a, b});
  doc["exclusions"] = ex;
  doc["singles"] = label_list_json(singles);
  doc["pairs"] = label_list_json(pairs);
  doc["triples"] = label_list_json(triples);
  doc["quadruples"] = label_list_json(quadruples);
  doc["counts"] = {{"singles", singles.size()},
                   {"pairs", pairs.size()},
                   {"triples", triples.size()},
                   {"quadruples", quadruples.size()},
                   {"composites", n_composites()}};
  if (!config.display_names.empty()) {
    json names;
    for (const auto& [id, name] : config.display_names) names[std::to_string(id)] = name;
    doc["display_names"] = names;
  }
  return doc.dump(2);
}

LabelSpaceConfig default_label_config() {
  LabelSpaceConfig cfg;
  cfg.n_errors = kDefaultErrors;
  // 19 pairs: three mutually-exclusive clusters plus assorted cross pairs.
  cfg.exclusions = {{1, 2},  {1, 3},  {2, 3},  {4, 5},  {4, 6},   {5, 6},  {7, 8},
                    {7, 9},  {8, 9},  {10, 11}, {12, 13}, {1, 4},  {2, 5},
                    {3, 6},  {7, 10}, {8, 11}, {9, 12},  {1, 13}, {4, 7}};
  cfg.triples = {{1, 5, 7}, {1, 6, 8}, {2, 4, 9}, {2, 6, 7},  {3, 5, 9},
                 {3, 4, 8}, {5, 8, 12}, {6, 9, 10}, {2, 11, 12}, {3, 10, 13}};
  cfg.quadruples = {{1, 5, 8, 10}, {2, 6, 9, 11}, {3, 4, 9, 13}, {1, 6, 7, 11}, {2, 4, 8, 13}};
  cfg.display_names[0] = "Correct";
  cfg.display_names[1] = "Overlap Hands";
  cfg.display_names[2] = "Bending Arms";
  for (int id = 3; id <= kDefaultErrors; ++id)
    cfg.display_names[id] = "Error-" + std::to_string(id);
  return cfg;
}

LabelSpaceConfig label_config_from_json(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("label config: ") + e.what());
  }
  LabelSpaceConfig cfg;
  try {
    cfg.n_errors = doc.value("n_errors", kDefaultErrors);
    for (const auto& p : doc.value("exclusions", json::array()))
      cfg.exclusions.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    for (const auto& t : doc.value("triples", json::array()))
      cfg.triples.push_back(t.get<std::vector<int>>());
    for (const auto& q : doc.value("quadruples", json::array()))
      cfg.quadruples.push_back(q.get<std::vector<int>>());
    if (doc.contains("display_names"))
      for (const auto& [key, name] : doc["display_names"].items())
        cfg.display_names[std::stoi(key)] = name.get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("label config: ") + e.what());
  }
  return cfg;
}

std::string label_config_to_json(const LabelSpaceConfig& config) {
  json doc;
  doc["n_errors"] = config.n_errors;
  json ex = json::array();
  for (auto [a, b] : config.exclusions) ex.push_back({a, b});
  doc["exclusions"] = ex;
  doc["triples"] = config.triples;
  doc["quadruples"] = config.quadruples;
  json names;
  for (const auto& [id, name] : config.display_names) names[std::to_string(id)] = name;
  doc["display_names"] = names;
  doc["synthetic_placeholder"] = true;
  return doc.dump(2);
}

}  // namespace imagine

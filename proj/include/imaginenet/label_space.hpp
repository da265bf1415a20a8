#pragma once

#include "imaginenet/types.hpp"

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace imagine {

// Class ids: 0 is the correct action, 1..n_errors are single-error actions.
// Composite labels are built from error ids only.
constexpr int kCorrectClass = 0;
constexpr int kDefaultErrors = 13;
constexpr int kNumClasses = 14;

enum class LabelKind { single, pair, triple, quadruple };

LabelKind kind_for_size(std::size_t n);
const char* to_string(LabelKind k);

// An ordered, duplicate-free set of 1..4 class ids.
struct CompositeLabel {
  std::vector<int> members;
  LabelKind kind = LabelKind::single;

  static CompositeLabel of(std::vector<int> ids);

  bool is_single() const { return members.size() == 1; }
  // stable text form, e.g. "3+7+11"
  std::string canonical() const;
  bool operator==(const CompositeLabel&) const = default;
};

// Unordered error-id pairs that must not co-occur, stored canonically (a < b).
class ExclusionList {
 public:
  ExclusionList() = default;
  explicit ExclusionList(const std::vector<std::pair<int, int>>& pairs, int n_errors = kDefaultErrors);

  bool contains(int a, int b) const;
  std::size_t size() const { return pairs_.size(); }
  const std::set<std::pair<int, int>>& pairs() const { return pairs_; }

 private:
  std::set<std::pair<int, int>> pairs_;
};

struct LabelSpaceConfig {
  int n_errors = kDefaultErrors;
  std::vector<std::pair<int, int>> exclusions;
  std::vector<std::vector<int>> triples;
  std::vector<std::vector<int>> quadruples;
  std::map<int, std::string> display_names;
};

struct LabelSpace {
  LabelSpaceConfig config;
  ExclusionList exclusions;
  std::vector<CompositeLabel> singles;     // n_errors + 1 entries, id order
  std::vector<CompositeLabel> pairs;
  std::vector<CompositeLabel> triples;
  std::vector<CompositeLabel> quadruples;

  int n_classes() const { return config.n_errors + 1; }
  std::size_t n_composites() const { return pairs.size() + triples.size() + quadruples.size(); }
  // pairs, then triples, then quadruples
  std::vector<CompositeLabel> composites() const;
  // stable text document for audit
  std::string serialize() const;
};

// All unordered error pairs not excluded, sorted lexicographically.
std::vector<CompositeLabel> enumerate_pairs(int n_errors, const ExclusionList& exclusions);

// True iff no 2-subset of the candidate is excluded.
bool filter_composite(const CompositeLabel& candidate, const ExclusionList& exclusions);

// Multi-hot vector over n_classes; union of one-hots of the members.
Vec encode_multi_hot(const CompositeLabel& label, int n_classes);

LabelSpace build_label_space(const LabelSpaceConfig& config);

// The shipped exclusion/triple/quadruple lists are synthetic placeholders
// with the shape reported for the real taxonomy (19 exclusions, 10 triples,
// 5 quadruples); swap in real lists through the config file.
LabelSpaceConfig default_label_config();

LabelSpaceConfig label_config_from_json(const std::string& json_text);
std::string label_config_to_json(const LabelSpaceConfig& config);

}  // namespace imagine

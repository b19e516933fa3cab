#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xinfl/unimorph.hpp"

namespace xinfl {

enum class Provenance { kMemory, kRule, kBackoff, kCopy };

std::string_view to_string(Provenance p);

struct SuffixRule {
  std::string lemma_suffix;
  std::string form_suffix;
  std::size_t support = 0;

  bool operator==(const SuffixRule&) const = default;
};

struct Inflection {
  std::string form;
  Provenance provenance = Provenance::kCopy;
};

// Lemma + tag -> form by memorization plus longest-suffix rewrite rules.
// Tags are keyed by their canonical rendering.
class InflectorModel {
 public:
  std::string language;
  std::map<std::pair<std::string, std::string>, std::string> memory;  // (lemma, tag) -> form
  // tag -> rules, longest lemma suffix first, then higher support, then
  // lexicographically smaller form suffix.
  std::map<std::string, std::vector<SuffixRule>> suffix_rules;

  // Tags tried after the exact one: drop the last feature repeatedly until
  // only the POS remains.
  static std::vector<std::string> backoff_tags(const MorphTag& tag);

  // UM POS symbols seen in training.
  std::set<std::string> pos_symbols() const;

  std::string serialize() const;
  static InflectorModel parse(std::string_view text, const std::string& source = "<model>");
  static InflectorModel load(const std::string& path);

  bool operator==(const InflectorModel&) const = default;
};

InflectorModel train_inflector(const UMLexicon& train);

// (1) memory, (2) longest matching suffix rule under the exact tag,
// (3) the same under each backoff tag, (4) copy the lemma.
Inflection inflect(const InflectorModel& model, std::string_view lemma, const MorphTag& tag);

// Exact-match accuracy over test triples. Throws UsageError on empty input.
double evaluate_inflector(const InflectorModel& model, const UMLexicon& test);

}  // namespace xinfl

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "xinfl/conllu.hpp"
#include "xinfl/unimorph.hpp"

namespace xinfl {

inline constexpr std::string_view kDrop = "DROP";
inline constexpr std::string_view kNone = "NONE";

// When every feature in `match` (the UM POS counts as a feature) is present
// in a converted tag, `remove` is taken out and `add` put in.
struct PostEditRule {
  std::set<std::string> match;
  std::set<std::string> remove;
  std::set<std::string> add;
  std::size_t support = 0;

  // "match -> remove / add<TAB>support"; each set is ';'-joined, "_" if empty.
  std::string render(const UmSchema& schema = UmSchema::bundled()) const;
  static PostEditRule parse(std::string_view line);

  bool same_edit(const PostEditRule& o) const { return match == o.match && remove == o.remove && add == o.add; }
  bool operator==(const PostEditRule&) const = default;
};

// UD UPOS+FEATS -> UM tag mapping. Serialized as one sectioned text file:
//
//   [dimensions]   Dimension<TAB>VALUE,VALUE,...   (optional; bundled schema otherwise)
//   [upos]         UPOS<TAB>UMPOS|NONE
//   [features]     UDFeature=Value<TAB>UMFeature|DROP
//   [rules]        match -> remove / add<TAB>support
//
// Blank lines and lines starting with '#' are ignored. A feature_map value
// that is a POS symbol (e.g. VerbForm=Part -> V.PTCP) overrides the POS.
struct ConversionTable {
  std::map<std::string, std::string> feature_map;
  std::map<std::string, std::string> upos_map;
  UmSchema schema = UmSchema::bundled();
  std::vector<PostEditRule> postedit_rules;

  static ConversionTable parse(std::string_view text, const std::string& source = "<table>");
  static ConversionTable load(const std::string& path);
  // The mapping shipped in data/ud_um.map.
  static const ConversionTable& bundled();
  std::string serialize() const;

  // Throws DataError when a mapped value falls outside the schema vocabulary.
  void check() const;

  bool operator==(const ConversionTable&) const = default;
};

// Same UPOS mapping as `base`, but every UD Feature=Value seen in `tb` maps
// to itself as an opaque UM feature (ablation: inflectors keyed on UD feats).
ConversionTable passthrough_table(const Treebank& tb, const ConversionTable& base = ConversionTable::bundled());

struct Conversion {
  std::optional<MorphTag> tag;
  std::vector<std::string> dropped;   // mapped to DROP
  std::vector<std::string> unmapped;  // absent from feature_map
};

Conversion convert(std::string_view upos, const Feats& feats, const ConversionTable& table);

// nullopt iff the UPOS maps to NONE (or is absent from upos_map).
std::optional<MorphTag> ud_to_um(std::string_view upos, const Feats& feats, const ConversionTable& table);

struct InductionTrace {
  std::size_t anchors = 0;
  // Exact-tag accuracy on the anchor set: before the first iteration, then
  // after each iteration.
  std::vector<double> accuracy;
};

std::vector<PostEditRule> induce_postedit_rules(const Treebank& ud, const UMLexicon& um, const ConversionTable& table,
                                                std::size_t min_support = 5, std::size_t max_iters = 10,
                                                InductionTrace* trace = nullptr);

struct ConversionReport {
  std::size_t tokens_total = 0;
  std::size_t converted = 0;
  std::size_t none_pos = 0;
  std::map<std::string, std::size_t> dropped_features;  // UD Feature=Value -> count

  std::string to_text() const;
};

ConversionReport conversion_report(const Treebank& ud, const ConversionTable& table);

}  // namespace xinfl

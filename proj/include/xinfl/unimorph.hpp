#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace xinfl {

// Ordered UniMorph dimensions with their value vocabularies. The first
// dimension is always "POS". Rendering order of a tag's features follows the
// dimension order, then the value order inside a dimension.
class UmSchema {
 public:
  struct Dimension {
    std::string name;
    std::vector<std::string> values;
    bool operator==(const Dimension&) const = default;
  };

  UmSchema() = default;
  explicit UmSchema(std::vector<Dimension> dims);

  // The schema bundled with the toolkit (UniMorph 2 dimensions).
  static const UmSchema& bundled();
  // Dimension<TAB>value,value,... one dimension per line.
  static UmSchema from_tsv(std::string_view text);
  std::string to_tsv() const;

  const std::vector<Dimension>& dimensions() const { return dims_; }
  bool is_pos(std::string_view feature) const;
  bool contains(std::string_view feature) const;
  // (dimension index, value index); nullopt for features outside the schema.
  std::optional<std::pair<int, int>> rank(std::string_view feature) const;
  // Stable-sorts known features by rank; unknown ones keep their relative
  // order after all known ones.
  void canonicalize(std::vector<std::string>& features) const;

  bool operator==(const UmSchema& o) const { return dims_ == o.dims_; }

 private:
  std::vector<Dimension> dims_;
  std::map<std::string, std::pair<int, int>, std::less<>> index_;
};

struct MorphTag {
  std::string pos;
  std::vector<std::string> features;

  // The POS is the first element that belongs to the schema's POS dimension
  // (the first element when none does). Features are canonicalized.
  static MorphTag parse(std::string_view tag, const UmSchema& schema = UmSchema::bundled());
  std::string render() const;

  bool operator==(const MorphTag&) const = default;
  auto operator<=>(const MorphTag&) const = default;
};

struct UmTriple {
  std::string lemma;
  std::string form;
  MorphTag tag;

  bool operator==(const UmTriple&) const = default;
  auto operator<=>(const UmTriple&) const = default;
};

struct UMLexicon {
  std::string language;
  std::vector<UmTriple> triples;

  std::size_t size() const { return triples.size(); }
  std::size_t distinct_lemmas() const;
  bool operator==(const UMLexicon&) const = default;
};

struct UMSplit {
  UMLexicon train;
  UMLexicon dev;
  UMLexicon test;
};

// UM-POS -> set of UPOS.
using PosMap = std::map<std::string, std::set<std::string>>;

// lemma<TAB>form<TAB>tag per line; blank lines skipped. Throws ParseError on
// a line with a column count other than 3.
UMLexicon load_um(std::string_view text, const std::string& language, const std::string& source = "<um>");
UMLexicon load_um_file(const std::string& path, const std::string& language);
std::string write_um(const UMLexicon& lex);

UMLexicon concat_dialects(std::span<const UMLexicon> lexicons, const std::string& language);

// Removes duplicate triples, keeping the first occurrence.
UMLexicon deduplicate(const UMLexicon& lex);

// Deduplicates, shuffles with the seeded Fisher-Yates permutation, then cuts
// round(0.8n) / round(0.1n) / rest. Throws UsageError below 10 triples.
UMSplit split_um(const UMLexicon& lex, std::uint64_t seed);

PosMap load_pos_map(std::string_view text, const std::string& source = "<pos_map>");
PosMap load_pos_map_file(const std::string& path);
const PosMap& bundled_pos_map();

// Union of mapped UPOS over the UM POS symbols present in the lexicon.
// Unmapped UM POS symbols are skipped with a warning and reported through
// `unmapped` when given.
std::set<std::string> covered_pos(const UMLexicon& lex, const PosMap& pos_map,
                                  std::vector<std::string>* unmapped = nullptr);
std::set<std::string> covered_pos(const std::set<std::string>& um_pos, const PosMap& pos_map,
                                  std::vector<std::string>* unmapped = nullptr);

}  // namespace xinfl

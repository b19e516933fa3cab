#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "xinfl/conllu.hpp"
#include "xinfl/inflector.hpp"
#include "xinfl/schema.hpp"

namespace xinfl {

inline constexpr std::string_view kXInflectedMarker = "XInflected=Yes";

struct XInflectionStats {
  std::size_t tokens_total = 0;
  std::size_t tokens_eligible = 0;
  std::size_t tokens_replaced = 0;        // eligible, inflected by memory/rule/backoff
  std::size_t tokens_copied = 0;          // eligible, inflector fell back to the lemma
  std::size_t tokens_skipped_pos = 0;     // UPOS not covered by the target UM data
  std::size_t tokens_skipped_noconv = 0;  // UPOS covered but no UM tag
  std::size_t tokens_skipped_lemma = 0;   // lemma empty or "_"
  std::size_t forms_changed = 0;          // FORM differs from the source
  std::map<std::string, std::size_t> provenance_histogram;

  double replacement_rate() const;
  // key=value lines.
  std::string to_text() const;
  std::string to_json() const;

  XInflectionStats& operator+=(const XInflectionStats& o);
  bool operator==(const XInflectionStats&) const = default;
};

struct XInflectionOptions {
  unsigned jobs = 1;
};

// Replaces FORM of every basic token whose UPOS is covered, whose lemma is
// non-empty and whose features convert to a UM tag. Everything else,
// including multiword-token surfaces, is carried over unchanged. Changed
// tokens get XInflected=Yes in MISC.
std::pair<Treebank, XInflectionStats> xinflect_treebank(const Treebank& source, const InflectorModel& model,
                                                        const ConversionTable& table,
                                                        const std::set<std::string>& covered,
                                                        const XInflectionOptions& options = {});

// Human-readable summary, e.g. "40.0% replaced (4/10 tokens)".
std::string xinflect_report(const XInflectionStats& stats);

}  // namespace xinfl

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "xinfl/conllu.hpp"
#include "xinfl/parser/mst.hpp"
#include "xinfl/parser/two_planar.hpp"

namespace xinfl {

enum class ParserKind { kSL, kGB };

std::string_view to_string(ParserKind k);
ParserKind parse_parser_kind(std::string_view s);

// Averaged linear parser. GB: arc_weights score arcs, label_weights pick a
// deprel per arc (classes = deprels). SL: label_weights pick one composite
// bracket label per token (classes = BracketLabel::to_string()).
struct ParserModel {
  ParserKind kind = ParserKind::kGB;
  int epochs = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> classes;
  std::string root_deprel = "root";
  std::map<std::string, double> arc_weights;
  std::map<std::string, std::vector<double>> label_weights;

  std::string serialize() const;
  static ParserModel parse(std::string_view text, const std::string& source = "<parser>");
  static ParserModel load(const std::string& path);

  bool operator==(const ParserModel&) const = default;
};

struct TrainStats {
  std::size_t sentences = 0;
  std::size_t dropped_arcs = 0;  // SL: gold arcs outside both planes
};

// Throws UsageError on an empty treebank. Deterministic in (data, epochs, seed).
ParserModel train_parser(ParserKind kind, const Treebank& train, int epochs, std::uint64_t seed,
                         TrainStats* stats = nullptr);

// Returns s with HEAD and DEPREL replaced by the prediction; always a valid tree.
Sentence parse(const ParserModel& model, const Sentence& s);
Treebank parse_treebank(const ParserModel& model, const Treebank& tb, unsigned jobs = 1);

// Feature templates, exposed for tests.
std::vector<std::string> arc_features(const Sentence& s, int head, int dep);
std::vector<std::string> token_features(const Sentence& s, int index);

}  // namespace xinfl

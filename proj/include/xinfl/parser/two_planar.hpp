#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "xinfl/conllu.hpp"

namespace xinfl {

struct Arc {
  int head = 0;
  int dep = 0;
  auto operator<=>(const Arc&) const = default;
};

// Endpoints strictly interleave.
bool arcs_cross(const Arc& a, const Arc& b);

struct PlaneAssignment {
  std::vector<Arc> plane1;
  std::vector<Arc> plane2;
  std::vector<Arc> dropped;
};

// Splits the arcs of a tree into two planes without crossings inside a plane.
// Each connected component of the crossing graph is 2-colored exactly when
// it is bipartite, oriented so that the root arc (or the component's arc
// with the leftmost dependent) lands in plane1. Components that are not
// bipartite fall back to greedy assignment left to right by dependent index
// (root arc first): plane1, else plane2, else dropped.
PlaneAssignment plane_assignment(std::span<const Arc> arcs);
PlaneAssignment plane_assignment_from_heads(std::span<const int> heads);

// Per-token label. Bracket strings use the alphabet "<", "\\", "/", ">" in
// that order; plane2 brackets are written with a trailing '*' when the label
// is rendered as one string.
//   arc h -> d with h < d: "/" at h, ">" at d   (root arcs: ">" at d, plane1)
//   arc h -> d with h > d: "<" at d, "\\" at h
struct BracketLabel {
  std::string plane1;
  std::string plane2;
  std::string deprel;

  // e.g. "</*>@nsubj"
  std::string to_string() const;
  static BracketLabel parse(std::string_view s);

  auto operator<=>(const BracketLabel&) const = default;
};

struct EncodedSentence {
  std::vector<BracketLabel> labels;
  std::size_t dropped_arcs = 0;
};

EncodedSentence encode_2planar(const Sentence& s);
EncodedSentence encode_2planar(std::span<const int> heads, std::span<const std::string> deprels);

struct DecodedTree {
  std::vector<int> heads;
  std::vector<std::string> deprels;
};

// Total: any label sequence yields a valid tree. Unmatched brackets are
// discarded, as are links that would give a token a second head or close a
// cycle. Headless tokens attach to the root; when several tokens end up on
// the root, the one attached by an explicit root bracket (else the leftmost)
// stays and the others attach to it.
DecodedTree decode_2planar(std::span<const BracketLabel> labels);

}  // namespace xinfl

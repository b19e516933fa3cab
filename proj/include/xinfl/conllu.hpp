#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace xinfl {

// FEATS column: (name, value) pairs kept sorted case-insensitively by name.
using Feats = std::vector<std::pair<std::string, std::string>>;

Feats parse_feats(std::string_view column);
std::string render_feats(const Feats& feats);
void sort_feats(Feats& feats);

struct Token {
  int id = 0;
  std::string form;
  std::string lemma;
  std::string upos;
  std::string xpos;  // empty when the column is "_"
  Feats feats;
  int head = 0;
  std::string deprel;
  std::string deps;
  std::string misc;

  bool operator==(const Token&) const = default;
};

// "i-j" line, re-emitted verbatim before token i.
struct MultiwordToken {
  int start = 0;
  int end = 0;
  std::string line;

  std::string form() const;
  std::string misc() const;
  bool operator==(const MultiwordToken&) const = default;
};

// "i.j" line, re-emitted verbatim after token i (anchor 0: before token 1).
struct EmptyNode {
  int anchor = 0;
  std::string line;

  bool operator==(const EmptyNode&) const = default;
};

struct Sentence {
  std::vector<std::string> comments;  // raw, including the leading '#'
  std::vector<Token> tokens;
  std::vector<MultiwordToken> mwts;
  std::vector<EmptyNode> empty_nodes;

  std::size_t size() const { return tokens.size(); }
  std::vector<int> heads() const;
  bool operator==(const Sentence&) const = default;
};

struct Treebank {
  std::string name;
  std::string language;
  std::vector<Sentence> sentences;

  std::size_t token_count() const;
  bool operator==(const Treebank&) const = default;
};

// Throws ParseError naming `name` and the 1-based line number.
Treebank read_conllu(std::string_view text, const std::string& name, const std::string& language);
Treebank read_conllu_file(const std::string& path, const std::string& language = "");

std::string write_conllu(const Treebank& tb);
void write_sentence(std::string& out, const Sentence& s);

enum class ViolationKind { kEmpty, kHeadOutOfRange, kSelfLoop, kMultipleRoots, kCycle };

struct Violation {
  ViolationKind kind;
  std::vector<int> tokens;
  std::string message;
};

// Empty iff there is exactly one root, the head relation is acyclic and all
// heads are in 0..n. One violation per distinct cycle.
std::vector<Violation> validate_heads(std::span<const int> heads);
std::vector<Violation> validate_tree(const Sentence& s);

// Concatenates sentences in input order. Throws UsageError on an empty list.
Treebank merge_treebanks(std::span<const Treebank> tbs, const std::string& name);

}  // namespace xinfl

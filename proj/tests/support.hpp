#pragma once

// Generators and brute-force oracles shared by the unit and acceptance tests.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "xinfl/conllu.hpp"
#include "xinfl/random.hpp"
#include "xinfl/unimorph.hpp"

namespace xinfl::testing {

// Calls fn(heads) for every head vector of length n that forms a tree with
// exactly one root child. heads[d-1] is the head of token d.
void for_each_tree(int n, const std::function<void(const std::vector<int>&)>& fn);

// Same, but with any number of root children (every arborescence rooted at 0).
void for_each_arborescence(int n, const std::function<void(const std::vector<int>&)>& fn);

// True when the crossing graph of the tree's arcs (root arc included) is
// bipartite. Independent of the library's plane assignment.
bool two_planar_oracle(const std::vector<int>& heads);

// Random single-root tree with n tokens.
std::vector<int> random_tree(SplitMix64& rng, int n);

// Random treebank: up to max_len tokens per sentence, with comments,
// multiword tokens, empty nodes, features and MISC values.
Treebank random_treebank(SplitMix64& rng, int sentences, int max_len);

Sentence make_sentence(const std::vector<std::string>& forms, const std::vector<int>& heads,
                       const std::vector<std::string>& deprels = {}, const std::vector<std::string>& upos = {});

// Three regular conjugation classes (-ar, -er, -ir) with a shared set of
// suffix slots. Lemma stems are derived from `first_stem`.
struct Paradigm {
  UMLexicon lexicon;
  std::vector<std::string> lemmas;
};
Paradigm conjugation_paradigm(int lemmas, int first_stem);
// The generator's own answer for (lemma, tag); empty when the slot is unknown.
std::string conjugate(const std::string& lemma, const std::string& tag);

// Synthetic related language pair used for end-to-end checks. Both share a
// noun/verb grammar and lemma-class endings but use different case suffixes
// and different stems.
struct ToyPair {
  Treebank source_train;  // fully annotated
  Treebank target_train;  // fully annotated, small
  Treebank target_test;   // FORM, UPOS and tree only; LEMMA and FEATS "_"
  UMLexicon target_um;
  UMLexicon source_um;
};
ToyPair toy_pair(std::uint64_t seed, int source_sentences = 400, int target_train_sentences = 20,
                 int target_test_sentences = 200);

// Writes `text` to a fresh file under the build tree's scratch directory and
// returns its path.
std::string scratch_file(const std::string& name, const std::string& text);
std::string scratch_dir();

}  // namespace xinfl::testing

#include "support.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

namespace xinfl::testing {
namespace {

bool is_tree(const std::vector<int>& heads, bool single_root) {
  const int n = static_cast<int>(heads.size());
  int roots = 0;
  for (int d = 1; d <= n; ++d) {
    if (heads[d - 1] == d) return false;
    if (heads[d - 1] == 0) ++roots;
  }
  if (roots == 0 || (single_root && roots != 1)) return false;
  for (int d = 1; d <= n; ++d) {
    int x = d;
    for (int steps = 0; x != 0; ++steps) {
      if (steps > n) return false;
      x = heads[x - 1];
    }
  }
  return true;
}

void enumerate(int n, bool single_root, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> heads(n, 0);
  while (true) {
    if (is_tree(heads, single_root)) fn(heads);
    int i = 0;
    while (i < n && heads[i] == n) heads[i++] = 0;
    if (i == n) return;
    ++heads[i];
  }
}

const char* const kSyllables[] = {"ka", "lo", "mi", "ten", "su", "ra", "bo", "ve", "ni", "dul", "po", "sa"};

std::string word(SplitMix64& rng, int syllables) {
  std::string w;
  for (int i = 0; i < syllables; ++i) w += kSyllables[rng.below(std::size(kSyllables))];
  return w;
}

}  // namespace

void for_each_tree(int n, const std::function<void(const std::vector<int>&)>& fn) { enumerate(n, true, fn); }

void for_each_arborescence(int n, const std::function<void(const std::vector<int>&)>& fn) { enumerate(n, false, fn); }

bool two_planar_oracle(const std::vector<int>& heads) {
  struct Span {
    int lo, hi;
  };
  std::vector<Span> arcs;
  for (int d = 1; d <= static_cast<int>(heads.size()); ++d)
    arcs.push_back({std::min(heads[d - 1], d), std::max(heads[d - 1], d)});
  auto cross = [](const Span& a, const Span& b) {
    return (a.lo < b.lo && b.lo < a.hi && a.hi < b.hi) || (b.lo < a.lo && a.lo < b.hi && b.hi < a.hi);
  };
  std::vector<int> color(arcs.size(), -1);
  for (std::size_t s = 0; s < arcs.size(); ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    std::vector<std::size_t> stack{s};
    while (!stack.empty()) {
      auto a = stack.back();
      stack.pop_back();
      for (std::size_t b = 0; b < arcs.size(); ++b) {
        if (b == a || !cross(arcs[a], arcs[b])) continue;
        if (color[b] == -1) {
          color[b] = 1 - color[a];
          stack.push_back(b);
        } else if (color[b] == color[a]) {
          return false;
        }
      }
    }
  }
  return true;
}

std::vector<int> random_tree(SplitMix64& rng, int n) {
  // Random attachment order: each token attaches to an already placed one.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i + 1;
  seeded_shuffle(order, rng.next());
  std::vector<int> heads(n, 0);
  for (int k = 1; k < n; ++k) heads[order[k] - 1] = order[rng.below(k)];
  return heads;
}

Sentence make_sentence(const std::vector<std::string>& forms, const std::vector<int>& heads,
                       const std::vector<std::string>& deprels, const std::vector<std::string>& upos) {
  Sentence s;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    Token t;
    t.id = static_cast<int>(i) + 1;
    t.form = forms[i];
    t.lemma = forms[i];
    t.upos = upos.empty() ? "NOUN" : upos[i];
    t.head = heads[i];
    t.deprel = deprels.empty() ? (heads[i] == 0 ? "root" : "dep") : deprels[i];
    t.deps = "_";
    t.misc = "_";
    s.tokens.push_back(std::move(t));
  }
  return s;
}

Treebank random_treebank(SplitMix64& rng, int sentences, int max_len) {
  static const char* const kUpos[] = {"NOUN", "VERB", "ADJ", "ADP", "PUNCT", "PRON", "DET", "AUX"};
  static const char* const kDeprels[] = {"nsubj", "obj", "amod", "case", "punct", "det", "obl", "nmod"};
  static const char* const kFeatNames[] = {"Case", "Gender", "Mood", "Number", "Person", "Tense", "VerbForm", "abbr"};
  Treebank tb;
  tb.name = "random";
  for (int si = 0; si < sentences; ++si) {
    Sentence s;
    const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_len)));
    if (rng.below(2)) s.comments.push_back("# sent_id = " + std::to_string(si + 1));
    if (rng.below(3) == 0) s.comments.push_back("# text = " + word(rng, 3) + " " + word(rng, 2));
    if (rng.below(5) == 0) s.comments.push_back("#");
    auto heads = random_tree(rng, n);
    for (int i = 1; i <= n; ++i) {
      Token t;
      t.id = i;
      t.form = rng.below(10) == 0 ? "Ñandú" : word(rng, 1 + static_cast<int>(rng.below(3)));
      t.lemma = rng.below(8) == 0 ? "_" : word(rng, 2);
      t.upos = kUpos[rng.below(std::size(kUpos))];
      t.xpos = rng.below(2) ? "" : "X" + std::to_string(rng.below(5));
      const int nf = static_cast<int>(rng.below(4));
      std::vector<int> picked;
      for (int k = 0; k < nf; ++k) {
        int f = static_cast<int>(rng.below(std::size(kFeatNames)));
        if (std::find(picked.begin(), picked.end(), f) == picked.end()) picked.push_back(f);
      }
      for (int f : picked) t.feats.emplace_back(kFeatNames[f], "V" + std::to_string(rng.below(3)));
      sort_feats(t.feats);
      t.head = heads[i - 1];
      t.deprel = t.head == 0 ? "root" : kDeprels[rng.below(std::size(kDeprels))];
      t.deps = rng.below(4) == 0 ? std::to_string(t.head) + ":" + t.deprel : "_";
      t.misc = rng.below(3) == 0 ? "SpaceAfter=No" : "_";
      s.tokens.push_back(std::move(t));
    }
    for (int i = 1; i < n; ++i)
      if (rng.below(6) == 0) {
        s.mwts.push_back({i, i + 1, std::to_string(i) + "-" + std::to_string(i + 1) + "\t" + word(rng, 2) + "\t_\t_\t_\t_\t_\t_\t_\t_"});
        ++i;
      }
    for (int a = 0; a <= n; ++a)
      if (rng.below(10) == 0)
        s.empty_nodes.push_back({a, std::to_string(a) + ".1\t" + word(rng, 1) + "\t_\tVERB\t_\t_\t_\t_\t" +
                                        std::to_string(std::max(a, 1)) + ":conj\t_"});
    tb.sentences.push_back(std::move(s));
  }
  return tb;
}

namespace {

struct Slot {
  const char* tag;
  const char* suffix[3];  // -ar, -er, -ir classes
};

const Slot kSlots[] = {
    {"V;NFIN", {"ar", "er", "ir"}},
    {"V;IND;PRS;1;SG", {"o", "o", "o"}},
    {"V;IND;PRS;2;SG", {"as", "es", "es"}},
    {"V;IND;PRS;3;SG", {"a", "e", "e"}},
    {"V;IND;PRS;1;PL", {"amos", "emos", "imos"}},
    {"V;IND;PRS;3;PL", {"an", "en", "en"}},
    {"V;IND;PST;1;SG", {"ei", "i", "i"}},
    {"V;IND;PST;3;SG", {"ou", "eu", "iu"}},
    {"V;IND;PST;3;PL", {"aron", "eron", "iron"}},
    {"V;IND;FUT;3;SG", {"ara", "era", "ira"}},
    {"V.PTCP;PST", {"ado", "ido", "ido"}},
    {"V.CVB;PRS", {"ando", "endo", "indo"}},
};

const char* const kOnsets[] = {"b", "c", "d", "f", "g", "l", "m", "n", "p", "r", "s", "t", "v", "x"};
const char* const kVowels[] = {"a", "e", "i", "o", "u"};
const char* const kCodas[] = {"", "l", "n", "r", "s"};

int conjugation_class(const std::string& lemma) {
  if (lemma.ends_with("ar")) return 0;
  if (lemma.ends_with("er")) return 1;
  if (lemma.ends_with("ir")) return 2;
  return -1;
}

}  // namespace

std::string conjugate(const std::string& lemma, const std::string& tag) {
  int c = conjugation_class(lemma);
  if (c < 0) return {};
  std::string stem = lemma.substr(0, lemma.size() - 2);
  for (const auto& slot : kSlots)
    if (tag == slot.tag) return stem + slot.suffix[c];
  return {};
}

Paradigm conjugation_paradigm(int lemmas, int first_stem) {
  Paradigm p;
  p.lexicon.language = "syn";
  static const char* const kEndings[] = {"ar", "er", "ir"};
  for (int i = 0; i < lemmas; ++i) {
    // Stems enumerate onset-vowel-coda-onset combinations without repeats.
    int k = first_stem + i;
    std::string stem;
    stem += kOnsets[k % 14];
    stem += kVowels[(k / 14) % 5];
    stem += kCodas[(k / 70) % 5];
    stem += kOnsets[(k / 350) % 14];
    std::string lemma = stem + kEndings[i % 3];
    p.lemmas.push_back(lemma);
    for (const auto& slot : kSlots)
      p.lexicon.triples.push_back({lemma, conjugate(lemma, slot.tag), MorphTag::parse(slot.tag)});
  }
  return p;
}

namespace {

// Nouns: NOM / ACC / GEN. Two lemma classes by final vowel.
struct Language {
  std::string acc[2];  // for -a, -e lemmas
  std::string gen[2];
  std::string verb_3sg;
};

const Language kTarget{{"om", "em"}, {"ul", "is"}, "it"};
const Language kSource{{"an", "en"}, {"es", "ar"}, "et"};

std::string noun_form(const Language& lang, const std::string& lemma, const std::string& kase) {
  const int cls = lemma.back() == 'a' ? 0 : 1;
  const std::string stem = lemma.substr(0, lemma.size() - 1);
  if (kase == "Nom") return lemma;
  if (kase == "Acc") return stem + lang.acc[cls];
  return stem + lang.gen[cls];
}

std::string verb_form(const Language& lang, const std::string& lemma) {
  return lemma.substr(0, lemma.size() - 1) + lang.verb_3sg;
}

std::vector<std::string> lemma_list(SplitMix64& rng, int count, const char* const* onsets, std::size_t n_onsets,
                                    const std::string& ending_set) {
  std::vector<std::string> out;
  while (static_cast<int>(out.size()) < count) {
    std::string w = std::string(onsets[rng.below(n_onsets)]) + kVowels[rng.below(5)] + onsets[rng.below(n_onsets)] +
                    ending_set[rng.below(ending_set.size())];
    if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
  }
  return out;
}

Token toy_token(int id, const std::string& form, const std::string& lemma, const std::string& upos, Feats feats,
                int head, const std::string& deprel) {
  Token t;
  t.id = id;
  t.form = form;
  t.lemma = lemma;
  t.upos = upos;
  t.feats = std::move(feats);
  t.head = head;
  t.deprel = deprel;
  t.deps = "_";
  t.misc = "_";
  return t;
}

// Sentence shapes (noun cases in order, then the verb):
//   GEN NOM V | NOM ACC V | GEN NOM ACC V | NOM GEN ACC V | NOM V
Sentence toy_sentence(SplitMix64& rng, const Language& lang, const std::vector<std::string>& nouns,
                      const std::vector<std::string>& verbs) {
  static const std::vector<std::vector<std::string>> kShapes = {
      {"Gen", "Nom"}, {"Nom", "Acc"}, {"Gen", "Nom", "Acc"}, {"Nom", "Gen", "Acc"}, {"Nom"}};
  const auto& shape = kShapes[rng.below(kShapes.size())];
  const int n = static_cast<int>(shape.size()) + 1;
  Sentence s;
  for (int i = 1; i < n; ++i) {
    const std::string& kase = shape[i - 1];
    const std::string& lemma = nouns[rng.below(nouns.size())];
    int head = kase == "Gen" ? i + 1 : n;
    std::string deprel = kase == "Gen" ? "nmod" : kase == "Nom" ? "nsubj" : "obj";
    s.tokens.push_back(toy_token(i, noun_form(lang, lemma, kase), lemma, "NOUN", {{"Case", kase}, {"Number", "Sing"}},
                                 head, deprel));
  }
  const std::string& verb = verbs[rng.below(verbs.size())];
  s.tokens.push_back(toy_token(n, verb_form(lang, verb), verb, "VERB",
                               {{"Mood", "Ind"}, {"Number", "Sing"}, {"Person", "3"}, {"Tense", "Pres"}, {"VerbForm", "Fin"}},
                               0, "root"));
  return s;
}

UMLexicon toy_um(const Language& lang, const std::vector<std::string>& nouns, const std::vector<std::string>& verbs,
                 const std::string& code) {
  UMLexicon um;
  um.language = code;
  for (const auto& n : nouns) {
    um.triples.push_back({n, noun_form(lang, n, "Nom"), MorphTag::parse("N;NOM;SG")});
    um.triples.push_back({n, noun_form(lang, n, "Acc"), MorphTag::parse("N;ACC;SG")});
    um.triples.push_back({n, noun_form(lang, n, "Gen"), MorphTag::parse("N;GEN;SG")});
  }
  for (const auto& v : verbs) um.triples.push_back({v, verb_form(lang, v), MorphTag::parse("V;IND;PRS;3;SG;FIN")});
  return um;
}

}  // namespace

ToyPair toy_pair(std::uint64_t seed, int source_sentences, int target_train_sentences, int target_test_sentences) {
  SplitMix64 rng(seed);
  static const char* const kSourceOnsets[] = {"b", "d", "g", "v", "z"};
  static const char* const kTargetOnsets[] = {"k", "m", "p", "s", "t"};
  auto src_nouns = lemma_list(rng, 40, kSourceOnsets, std::size(kSourceOnsets), "ae");
  auto src_verbs = lemma_list(rng, 15, kSourceOnsets, std::size(kSourceOnsets), "o");
  auto tgt_nouns = lemma_list(rng, 40, kTargetOnsets, std::size(kTargetOnsets), "ae");
  auto tgt_verbs = lemma_list(rng, 15, kTargetOnsets, std::size(kTargetOnsets), "o");

  ToyPair p;
  p.source_train.name = "toy-source";
  p.source_train.language = "src";
  for (int i = 0; i < source_sentences; ++i)
    p.source_train.sentences.push_back(toy_sentence(rng, kSource, src_nouns, src_verbs));
  p.target_train.name = "toy-target-train";
  p.target_train.language = "tgt";
  for (int i = 0; i < target_train_sentences; ++i)
    p.target_train.sentences.push_back(toy_sentence(rng, kTarget, tgt_nouns, tgt_verbs));
  p.target_test.name = "toy-target-test";
  p.target_test.language = "tgt";
  for (int i = 0; i < target_test_sentences; ++i) {
    Sentence s = toy_sentence(rng, kTarget, tgt_nouns, tgt_verbs);
    for (auto& t : s.tokens) {
      t.lemma = "_";
      t.feats.clear();
    }
    p.target_test.sentences.push_back(std::move(s));
  }
  p.target_um = toy_um(kTarget, tgt_nouns, tgt_verbs, "tgt");
  p.source_um = toy_um(kSource, src_nouns, src_verbs, "src");
  return p;
}

std::string scratch_dir() {
  auto dir = std::filesystem::path(XINFL_TEST_SCRATCH);
  std::filesystem::create_directories(dir);
  return dir.string();
}

std::string scratch_file(const std::string& name, const std::string& text) {
  auto path = std::filesystem::path(scratch_dir()) / name;
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  return path.string();
}

}  // namespace xinfl::testing

// Acceptance run: one line per criterion, exit status 1 when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "support.hpp"
#include "xinfl/conllu.hpp"
#include "xinfl/experiment.hpp"
#include "xinfl/inflector.hpp"
#include "xinfl/parser/mst.hpp"
#include "xinfl/parser/two_planar.hpp"
#include "xinfl/schema.hpp"
#include "xinfl/stats.hpp"
#include "xinfl/text.hpp"
#include "xinfl/unimorph.hpp"
#include "xinfl/xinflect.hpp"

using namespace xinfl;
namespace fs = std::filesystem;

namespace {

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status = Status::kPass;
  std::string detail;
};

Outcome pass(std::string d) { return {Status::kPass, std::move(d)}; }
Outcome fail(std::string d) { return {Status::kFail, std::move(d)}; }

struct Criterion {
  int number;
  const char* title;
  double limit_seconds;  // 0: none
  std::function<Outcome()> run;
};

Outcome conllu_fidelity() {
  SplitMix64 rng(1);
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    auto tb = testing::random_treebank(rng, 1 + static_cast<int>(rng.below(4)), 15);
    auto back = read_conllu(write_conllu(tb), tb.name, tb.language);
    if (!(back == tb)) ++mismatches;
  }
  const std::string fixture = std::string(XINFL_TEST_FIXTURES) + "/canonical.conllu";
  const std::string text = read_text(fixture);
  const bool bytes = write_conllu(read_conllu(text, fixture, "")) == text;
  std::ostringstream d;
  d << "1000 random treebanks, " << mismatches << " mismatches; canonical fixture byte-identical: "
    << (bytes ? "yes" : "no");
  return mismatches == 0 && bytes ? pass(d.str()) : fail(d.str());
}

Outcome two_planar_round_trip() {
  std::size_t trees = 0, planar = 0, bad = 0;
  for (int n = 1; n <= 6; ++n)
    testing::for_each_tree(n, [&](const std::vector<int>& heads) {
      ++trees;
      std::vector<std::string> deprels(heads.size());
      for (std::size_t i = 0; i < heads.size(); ++i) deprels[i] = "l" + std::to_string(i);
      auto planes = plane_assignment_from_heads(heads);
      auto dec = decode_2planar(encode_2planar(heads, deprels).labels);
      if (!validate_heads(dec.heads).empty()) {
        ++bad;
        return;
      }
      if (testing::two_planar_oracle(heads)) {
        ++planar;
        if (!planes.dropped.empty() || dec.heads != heads || dec.deprels != deprels) ++bad;
        return;
      }
      for (const auto* plane : {&planes.plane1, &planes.plane2})
        for (const auto& a : *plane)
          if (dec.heads[a.dep - 1] != a.head) {
            ++bad;
            return;
          }
    });
  std::ostringstream d;
  d << trees << " trees (n<=6), " << planar << " 2-planar, " << bad << " failures";
  return bad == 0 ? pass(d.str()) : fail(d.str());
}

Outcome mst_oracle() {
  SplitMix64 rng(3);
  std::size_t bad = 0, total = 0;
  for (int n = 2; n <= 6; ++n) {
    std::vector<std::vector<int>> all;
    testing::for_each_arborescence(n, [&](const std::vector<int>& h) { all.push_back(h); });
    for (int trial = 0; trial < 1000; ++trial) {
      ScoreMatrix s(n);
      for (int h = 0; h <= n; ++h)
        for (int d = 1; d <= n; ++d) s(h, d) = static_cast<double>(static_cast<int>(rng.below(33)) - 16) / 4.0;
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& h : all) best = std::max(best, tree_score(s, h));
      auto heads = mst_decode(s);
      bool tree = std::find(all.begin(), all.end(), heads) != all.end();
      ++total;
      if (!tree || tree_score(s, heads) != best) ++bad;
    }
  }
  std::ostringstream d;
  d << total << " matrices (n=2..6), " << bad << " disagreements with exhaustive search";
  return bad == 0 ? pass(d.str()) : fail(d.str());
}

Outcome inflector_checks() {
  SplitMix64 rng(4);
  int recall_failures = 0;
  for (int trial = 0; trial < 50; ++trial) {
    // Random functional lexicon: one form per (lemma, tag).
    UMLexicon lex;
    std::set<std::pair<std::string, std::string>> keys;
    const int size = 1 + static_cast<int>(rng.below(200));
    for (int i = 0; i < size; ++i) {
      std::string lemma = "l" + std::to_string(rng.below(40));
      std::string tag = "V;T" + std::to_string(rng.below(6));
      if (!keys.insert({lemma, tag}).second) continue;
      std::string form = lemma.substr(0, rng.below(lemma.size() + 1)) + "x" + std::to_string(rng.below(9));
      lex.triples.push_back({lemma, form, MorphTag::parse(tag)});
    }
    if (evaluate_inflector(train_inflector(lex), lex) != 1.0) ++recall_failures;
  }
  auto train = testing::conjugation_paradigm(200, 0);
  auto test = testing::conjugation_paradigm(50, 200);
  const double acc = evaluate_inflector(train_inflector(train.lexicon), test.lexicon);
  std::ostringstream d;
  d << "training recall 1.0 on " << 50 - recall_failures << "/50 random lexicons; paradigm accuracy " << acc
    << " on 50 unseen lemmas";
  return recall_failures == 0 && acc >= 0.95 ? pass(d.str()) : fail(d.str());
}

Outcome split_protocol() {
  SplitMix64 rng(5);
  int bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    UMLexicon lex;
    const std::size_t n = 10 + rng.below(3000);
    for (std::size_t i = 0; i < n; ++i)
      lex.triples.push_back({"l" + std::to_string(i / 7), "f" + std::to_string(i), MorphTag::parse("N;SG")});
    const std::uint64_t seed = rng.next();
    auto a = split_um(lex, seed);
    auto b = split_um(lex, seed);
    const double nn = static_cast<double>(n);
    bool ok = std::fabs(static_cast<double>(a.train.size()) - 0.8 * nn) <= 1.0 &&
              std::fabs(static_cast<double>(a.dev.size()) - 0.1 * nn) <= 1.0 &&
              std::fabs(static_cast<double>(a.test.size()) - 0.1 * nn) <= 1.0;
    std::vector<UmTriple> all = a.train.triples;
    all.insert(all.end(), a.dev.triples.begin(), a.dev.triples.end());
    all.insert(all.end(), a.test.triples.begin(), a.test.triples.end());
    auto want = lex.triples;
    std::sort(all.begin(), all.end());
    std::sort(want.begin(), want.end());
    ok = ok && all == want && a.train == b.train && a.dev == b.dev && a.test == b.test;
    if (!ok) ++bad;
  }
  return bad == 0 ? pass("100 lexicons: sizes, partition and determinism hold")
                  : fail(std::to_string(bad) + "/100 lexicons violate the split protocol");
}

Outcome postedit_recovery() {
  Treebank ud;
  ud.language = "src";
  UMLexicon um;
  um.language = "src";
  Sentence s;
  for (int i = 0; i < 20; ++i) {
    Token t;
    t.id = i + 1;
    t.lemma = "verb" + std::to_string(i);
    t.form = t.lemma + "ed";
    t.upos = "VERB";
    t.feats = parse_feats("Mood=Ind|Number=Sing|Person=3|Tense=Past|VerbForm=Fin");
    t.head = i == 0 ? 0 : 1;
    s.tokens.push_back(t);
    um.triples.push_back({t.lemma, t.form, MorphTag::parse("V;IND;PST;3;SG")});
  }
  ud.sentences.push_back(s);
  InductionTrace trace;
  auto rules = induce_postedit_rules(ud, um, ConversionTable::bundled(), 5, 10, &trace);
  bool monotone = true;
  for (std::size_t i = 1; i < trace.accuracy.size(); ++i) monotone = monotone && trace.accuracy[i] >= trace.accuracy[i - 1];
  ConversionTable refined = ConversionTable::bundled();
  refined.postedit_rules = rules;
  std::size_t exact = 0;
  for (std::size_t i = 0; i < s.tokens.size(); ++i)
    if (*ud_to_um("VERB", s.tokens[i].feats, refined) == um.triples[i].tag) ++exact;
  const bool removes_fin = rules.size() == 1 && rules[0].remove == std::set<std::string>{"FIN"};
  std::ostringstream d;
  d << rules.size() << " rule(s)" << (rules.empty() ? "" : " [" + rules[0].render() + "]") << "; anchor accuracy "
    << trace.accuracy.front() << " -> " << trace.accuracy.back() << "; " << exact << "/20 exact after re-conversion";
  return removes_fin && monotone && trace.accuracy.back() == 1.0 && exact == 20 ? pass(d.str()) : fail(d.str());
}

std::string write_toy(const std::string& dir, const testing::ToyPair& pair, const std::string& extra) {
  testing::scratch_file(dir + "/test.conllu", write_conllu(pair.target_test));
  testing::scratch_file(dir + "/train.conllu", write_conllu(pair.target_train));
  testing::scratch_file(dir + "/src.conllu", write_conllu(pair.source_train));
  testing::scratch_file(dir + "/tgt.um", write_um(pair.target_um));
  testing::scratch_file(dir + "/src.um", write_um(pair.source_um));
  return testing::scratch_file(dir + "/exp.cfg",
                               "target.language = tgt\ntarget.test = test.conllu\ntarget.train = train.conllu\n"
                               "um = tgt.um\nsource = src:src.conllu\nsource_um = src:src.um\n" +
                                   extra);
}

Outcome structure_preservation() {
  auto pair = testing::toy_pair(7, 500, 10, 50);
  const Treebank& src = pair.source_train;
  auto model = train_inflector(pair.target_um);
  auto covered = covered_pos(pair.target_um, bundled_pos_map());
  auto [out, st] = xinflect_treebank(src, model, ConversionTable::bundled(), covered);
  std::size_t field_diffs = 0, form_diffs = 0;
  for (std::size_t s = 0; s < src.sentences.size(); ++s) {
    const auto& a = src.sentences[s];
    const auto& b = out.sentences[s];
    if (a.comments != b.comments || a.mwts != b.mwts || a.empty_nodes != b.empty_nodes || a.size() != b.size()) {
      ++field_diffs;
      continue;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto& x = a.tokens[i];
      const auto& y = b.tokens[i];
      if (x.id != y.id || x.head != y.head || x.deprel != y.deprel || x.lemma != y.lemma || x.upos != y.upos ||
          x.xpos != y.xpos || x.feats != y.feats || x.deps != y.deps)
        ++field_diffs;
      const bool marked = y.misc.find(kXInflectedMarker) != std::string::npos;
      if (x.form != y.form) ++form_diffs;
      if ((x.form != y.form) != marked) ++field_diffs;
    }
  }
  auto [same, st0] = xinflect_treebank(src, model, ConversionTable::bundled(), {});
  const bool identical = same == src;

  auto cfg = ExperimentConfig::load(write_toy("acc7", pair, "covered = none\nepochs = 3\n"));
  auto report = run_zero_shot(cfg);
  bool zero = !report.rows.empty();
  for (const auto& r : report.rows) zero = zero && r.delta_uas == 0.0 && r.delta_las == 0.0;

  std::ostringstream d;
  d << src.sentences.size() << " sentences, " << form_diffs << " forms changed, " << field_diffs
    << " other-field differences; covered=none identical: " << (identical ? "yes" : "no")
    << "; zero-shot deltas all 0: " << (zero ? "yes" : "no");
  return field_diffs == 0 && form_diffs > 0 && identical && zero ? pass(d.str()) : fail(d.str());
}

Outcome toy_pair_gain() {
  auto pair = testing::toy_pair(42, 400, 20, 200);
  auto cfg = ExperimentConfig::load(write_toy("acc8", pair, "parsers = gb\nepochs = 10\n"));
  auto report = run_zero_shot(cfg);
  double base = 0, x = 0;
  for (const auto& r : report.rows) {
    if (r.system == "baseline") base = r.score.uas;
    if (r.system == "x-inflected") x = r.score.uas;
  }
  auto few = cfg;
  few.mode = ExperimentMode::kFewShot;
  auto fs = run_few_shot(few);
  std::ostringstream d;
  d.setf(std::ios::fixed);
  d.precision(2);
  d << "GB zero-shot UAS baseline " << base << ", x-inflected " << x << ", gain " << x - base
    << "; few-shot rows " << fs.rows.size();
  return x - base >= 5.0 && fs.rows.size() == 3 ? pass(d.str()) : fail(d.str());
}

Outcome pearson_checks() {
  auto c = pearson(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 3, 2, 4});
  std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> y{1, 0, 0, 1, 1, 1, 1, 0, 0, 1};
  auto z = pearson(x, y);
  std::vector<AnalysisRow> rows;
  for (int i = 0; i < 6; ++i)
    for (ParserKind k : {ParserKind::kGB, ParserKind::kSL}) {
      AnalysisRow r;
      r.pair_id = "p" + std::to_string(i);
      r.kind = k;
      r.um_forms = 1000.0 * (i + 1);
      r.um_lemmas = 10.0 * ((i * 3) % 6) + 1;
      r.src_train_sents = 500.0 + 37.0 * ((i * 5) % 6);
      r.pct_feats_shared = 40.0 + i * i;
      r.pct_lemmas_shared = 5.0 + ((i * 2) % 5);
      r.delta_uas = k == ParserKind::kGB ? r.um_forms / 1000.0 : ((i * 4) % 6) - 2.5;
      r.delta_las = 0.5 * r.delta_uas + (i % 2);
      rows.push_back(r);
    }
  auto cells = correlation_analysis(rows);
  bool flags = cells.size() == 20;
  int significant = 0;
  for (const auto& cell : cells) {
    flags = flags && cell.significant == (cell.p < 0.05);
    significant += cell.significant;
  }
  std::ostringstream d;
  d << "r([1,2,3,4],[1,3,2,4]) - 0.8 = " << c.r - 0.8 << "; p(n=10, r=0) = " << z.p << "; " << cells.size()
    << " cells, " << significant << " significant";
  const bool ok = std::fabs(c.r - 0.8) < 1e-12 && std::fabs(z.p - 1.0) < 1e-9 && flags && significant > 0;
  return ok ? pass(d.str()) : fail(d.str());
}

Outcome real_data() {
  const char* root = std::getenv("XINFL_REAL_DATA");
  if (!root) return {Status::kSkip, "XINFL_REAL_DATA not set (network-gated; no download attempted)"};
  const fs::path r(root);
  const fs::path test = r / "UD_Galician-TreeGal/gl_treegal-ud-test.conllu";
  const fs::path src = r / "UD_Spanish-AnCora/es_ancora-ud-train.conllu";
  const fs::path um = r / "unimorph/glg";
  for (const auto& p : {test, src, um})
    if (!fs::exists(p)) return {Status::kSkip, "missing " + p.string()};
  std::string cfg_text = "target.language = glg\ntarget.test = " + test.string() + "\num = " + um.string() +
                         "\nsource = spa:" + src.string() + "\n";
  if (fs::exists(r / "unimorph/spa")) cfg_text += "source_um = spa:" + (r / "unimorph/spa").string() + "\n";
  auto cfg = ExperimentConfig::parse(cfg_text + "jobs = 4\n", r.string(), "<real>");
  auto report = run_zero_shot(cfg);
  std::ostringstream d;
  d << report.rows.size() << " rows";
  return report.rows.size() == 4 ? pass(d.str()) : fail(d.str());
}

}  // namespace

int main() {
  set_warnings_enabled(false);
  const std::vector<Criterion> criteria = {
      {1, "CoNLL-U fidelity", 10, conllu_fidelity},
      {2, "2-planar round trip", 60, two_planar_round_trip},
      {3, "MST oracle equivalence", 30, mst_oracle},
      {4, "inflector recall and generalization", 5, inflector_checks},
      {5, "UM split protocol", 0, split_protocol},
      {6, "post-edit rule recovery", 0, postedit_recovery},
      {7, "x-inflection structure preservation", 0, structure_preservation},
      {8, "toy pair end-to-end gain", 120, toy_pair_gain},
      {9, "Pearson and analysis table", 0, pearson_checks},
      {10, "real-data run (Galician <- Spanish)", 0, real_data},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.status == Status::kPass && c.limit_seconds > 0 && secs > c.limit_seconds) {
      o.status = Status::kFail;
      o.detail += "; over the time limit";
    }
    const char* tag = o.status == Status::kPass ? "PASS" : o.status == Status::kFail ? "FAIL" : "SKIP";
    if (o.status == Status::kFail) ++failures;
    std::printf("[%s] %2d %-38s %7.2fs  %s\n", tag, c.number, c.title, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

#include "xinfl/parser/model.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <unordered_map>

#include "xinfl/error.hpp"
#include "xinfl/parallel.hpp"
#include "xinfl/random.hpp"
#include "xinfl/text.hpp"

namespace xinfl {

std::string_view to_string(ParserKind k) { return k == ParserKind::kSL ? "sl" : "gb"; }

ParserKind parse_parser_kind(std::string_view s) {
  std::string l = lowercase(s);
  if (l == "sl") return ParserKind::kSL;
  if (l == "gb") return ParserKind::kGB;
  throw UsageError("unknown parser kind '" + std::string(s) + "' (expected sl or gb)");
}

namespace {

struct TokenInfo {
  std::string form;
  std::string lemma;
  std::string upos;
  std::string suf2;
  std::string suf3;
  std::string pre3;
  std::vector<std::string> feats;
};

std::vector<TokenInfo> token_infos(const Sentence& s) {
  std::vector<TokenInfo> info;
  info.reserve(s.size() + 1);
  info.push_back({"<root>", "<root>", "ROOT", "<r>", "<r>", "<r>", {}});
  for (const auto& t : s.tokens) {
    TokenInfo ti;
    ti.form = lowercase(t.form);
    ti.lemma = lowercase(t.lemma);
    ti.upos = t.upos;
    ti.suf2 = utf8_suffix(ti.form, 2);
    ti.suf3 = utf8_suffix(ti.form, 3);
    ti.pre3 = utf8_prefix(ti.form, 3);
    for (const auto& [k, v] : t.feats) ti.feats.push_back(k + "=" + v);
    info.push_back(std::move(ti));
  }
  return info;
}

const std::string& pos_at(const std::vector<TokenInfo>& info, int i) {
  static const std::string kStart = "<s>", kEnd = "</s>";
  if (i < 0) return kStart;
  if (i >= static_cast<int>(info.size())) return kEnd;
  return info[i].upos;
}

std::string distance_bucket(int d) {
  if (d <= 4) return std::to_string(d);
  if (d <= 6) return "5-6";
  return "7+";
}

std::vector<std::string> arc_features_impl(const std::vector<TokenInfo>& info, int h, int d) {
  const auto& H = info[h];
  const auto& D = info[d];
  const std::string dir = h < d ? "R" : "L";
  const std::string dist = distance_bucket(std::abs(h - d));
  const std::string dd = dir + dist;
  std::vector<std::string> f;
  f.reserve(32 + D.feats.size() + H.feats.size());
  f.push_back("a0|" + dd);
  f.push_back("a1|" + H.upos + "|" + dd);
  f.push_back("a2|" + D.upos + "|" + dd);
  f.push_back("a3|" + H.upos + "|" + D.upos);
  f.push_back("a4|" + H.upos + "|" + D.upos + "|" + dd);
  f.push_back("a5|" + H.form + "|" + D.upos + "|" + dir);
  f.push_back("a6|" + H.upos + "|" + D.form + "|" + dir);
  f.push_back("a7|" + H.form + "|" + D.form);
  f.push_back("a8|" + H.lemma + "|" + D.lemma);
  f.push_back("a9|" + H.form);
  f.push_back("a10|" + D.form);
  f.push_back("a11|" + D.suf2 + "|" + H.upos + "|" + dd);
  f.push_back("a12|" + D.suf3 + "|" + H.upos + "|" + dd);
  f.push_back("a13|" + H.suf2 + "|" + D.upos + "|" + dd);
  f.push_back("a14|" + D.suf2 + "|" + H.suf2 + "|" + dir);
  f.push_back("a15|" + D.suf2 + "|" + D.upos + "|" + dd);
  f.push_back("a16|" + H.upos + "|" + pos_at(info, h + 1) + "|" + pos_at(info, d - 1) + "|" + D.upos);
  f.push_back("a17|" + pos_at(info, h - 1) + "|" + H.upos + "|" + D.upos + "|" + pos_at(info, d + 1));
  f.push_back("a18|" + H.upos + "|" + pos_at(info, h + 1) + "|" + D.upos + "|" + pos_at(info, d + 1));
  f.push_back("a19|" + pos_at(info, h - 1) + "|" + H.upos + "|" + pos_at(info, d - 1) + "|" + D.upos);
  // POS of tokens strictly between head and dependent.
  for (int k = std::min(h, d) + 1; k < std::max(h, d); ++k)
    f.push_back("a20|" + H.upos + "|" + info[k].upos + "|" + D.upos);
  for (const auto& x : D.feats) f.push_back("a21|" + x + "|" + H.upos + "|" + dd);
  for (const auto& x : H.feats) f.push_back("a22|" + x + "|" + D.upos + "|" + dir);
  return f;
}

std::vector<std::string> label_features_impl(const std::vector<TokenInfo>& info, int h, int d) {
  const auto& H = info[h];
  const auto& D = info[d];
  const std::string dir = h < d ? "R" : "L";
  std::vector<std::string> f;
  f.push_back("l0");
  f.push_back("l1|" + D.upos);
  f.push_back("l2|" + H.upos + "|" + D.upos + "|" + dir);
  f.push_back("l3|" + D.form);
  f.push_back("l4|" + D.lemma);
  f.push_back("l5|" + D.suf2 + "|" + D.upos);
  f.push_back("l6|" + D.suf3 + "|" + H.upos + "|" + dir);
  f.push_back("l7|" + H.form + "|" + D.upos);
  f.push_back("l8|" + dir + distance_bucket(std::abs(h - d)) + "|" + D.upos);
  for (const auto& x : D.feats) f.push_back("l9|" + x);
  for (const auto& x : D.feats) f.push_back("l10|" + x + "|" + H.upos);
  return f;
}

std::vector<std::string> token_features_impl(const std::vector<TokenInfo>& info, int i) {
  const int n = static_cast<int>(info.size()) - 1;
  std::vector<std::string> f;
  f.push_back("t0");
  for (int o = -2; o <= 2; ++o) {
    const std::string off = std::to_string(o);
    int j = i + o;
    if (j < 1 || j > n) {
      f.push_back("tb" + off + "|" + (j < 1 ? "<s>" : "</s>"));
      continue;
    }
    const auto& T = info[j];
    f.push_back("tw" + off + "|" + T.form);
    f.push_back("tl" + off + "|" + T.lemma);
    f.push_back("tp" + off + "|" + T.upos);
    f.push_back("ts" + off + "|" + T.suf2);
    for (const auto& x : T.feats) f.push_back("tf" + off + "|" + x);
  }
  const auto& T = info[i];
  for (std::size_t k = 1; k <= 4; ++k) f.push_back("tsuf" + std::to_string(k) + "|" + utf8_suffix(T.form, k));
  for (std::size_t k = 1; k <= 3; ++k) f.push_back("tpre" + std::to_string(k) + "|" + utf8_prefix(T.form, k));
  f.push_back("tpp|" + pos_at(info, i - 1) + "|" + T.upos);
  f.push_back("tpn|" + T.upos + "|" + pos_at(info, i + 1));
  f.push_back("tppp|" + pos_at(info, i - 1) + "|" + T.upos + "|" + pos_at(info, i + 1));
  f.push_back("tsp|" + T.suf2 + "|" + pos_at(info, i + 1));
  return f;
}

// Feature interning shared by the perceptrons.
class FeatureIndex {
 public:
  int intern(const std::string& f) {
    auto [it, inserted] = index_.try_emplace(f, static_cast<int>(names_.size()));
    if (inserted) names_.push_back(f);
    return it->second;
  }
  std::vector<int> intern_all(const std::vector<std::string>& fs) {
    std::vector<int> ids;
    ids.reserve(fs.size());
    for (const auto& f : fs) ids.push_back(intern(f));
    return ids;
  }
  std::size_t size() const { return names_.size(); }
  const std::string& name(int i) const { return names_[i]; }

 private:
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> names_;
};

// Averaged perceptron weights, averaging by the accumulated-update trick:
// avg = w - u / c.
class ScalarWeights {
 public:
  void resize(std::size_t n) {
    w_.resize(n, 0.0);
    u_.resize(n, 0.0);
  }
  double score(const std::vector<int>& ids) const {
    double s = 0.0;
    for (int i : ids) s += w_[i];
    return s;
  }
  void update(const std::vector<int>& ids, double delta) {
    for (int i : ids) {
      w_[i] += delta;
      u_[i] += c_ * delta;
    }
  }
  void tick() { c_ += 1.0; }
  std::map<std::string, double> averaged(const FeatureIndex& index) const {
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < w_.size(); ++i) {
      double v = w_[i] - u_[i] / c_;
      if (v != 0.0) out.emplace(index.name(static_cast<int>(i)), v);
    }
    return out;
  }

 private:
  std::vector<double> w_, u_;
  double c_ = 1.0;
};

class ClassWeights {
 public:
  explicit ClassWeights(std::size_t classes) : k_(classes) {}
  void resize(std::size_t n) {
    w_.resize(n * k_, 0.0);
    u_.resize(n * k_, 0.0);
  }
  void scores(const std::vector<int>& ids, std::vector<double>& out) const {
    out.assign(k_, 0.0);
    for (int i : ids)
      for (std::size_t c = 0; c < k_; ++c) out[c] += w_[i * k_ + c];
  }
  void update(const std::vector<int>& ids, std::size_t cls, double delta) {
    for (int i : ids) {
      w_[i * k_ + cls] += delta;
      u_[i * k_ + cls] += c_ * delta;
    }
  }
  void tick() { c_ += 1.0; }
  std::map<std::string, std::vector<double>> averaged(const FeatureIndex& index) const {
    std::map<std::string, std::vector<double>> out;
    for (std::size_t i = 0; i < w_.size() / k_; ++i) {
      std::vector<double> v(k_);
      bool any = false;
      for (std::size_t c = 0; c < k_; ++c) {
        v[c] = w_[i * k_ + c] - u_[i * k_ + c] / c_;
        any = any || v[c] != 0.0;
      }
      if (any) out.emplace(index.name(static_cast<int>(i)), std::move(v));
    }
    return out;
  }

 private:
  std::size_t k_;
  std::vector<double> w_, u_;
  double c_ = 1.0;
};

std::size_t argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

std::string most_frequent_root_deprel(const Treebank& tb) {
  std::map<std::string, std::size_t> counts;
  for (const auto& s : tb.sentences)
    for (const auto& t : s.tokens)
      if (t.head == 0) ++counts[t.deprel];
  std::string best = "root";
  std::size_t n = 0;
  for (const auto& [d, c] : counts)
    if (c > n) {
      best = d;
      n = c;
    }
  return best;
}

std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, int epoch) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  seeded_shuffle(order, seed + static_cast<std::uint64_t>(epoch));
  return order;
}

ScoreMatrix score_matrix(const std::vector<std::vector<std::vector<int>>>& feats, const ScalarWeights& w, int n) {
  ScoreMatrix m(n);
  for (int h = 0; h <= n; ++h)
    for (int d = 1; d <= n; ++d)
      if (h != d) m(h, d) = w.score(feats[h][d]);
  return m;
}

ParserModel train_gb(const Treebank& train, int epochs, std::uint64_t seed) {
  ParserModel model;
  model.kind = ParserKind::kGB;
  model.root_deprel = most_frequent_root_deprel(train);

  std::map<std::string, std::size_t> label_ids;
  for (const auto& s : train.sentences)
    for (const auto& t : s.tokens) label_ids.emplace(t.deprel, 0);
  for (auto& [l, id] : label_ids) {
    id = model.classes.size();
    model.classes.push_back(l);
  }

  FeatureIndex arc_index, label_index;
  // arc_feats[s][h][d], label_feats[s][d] for the gold head.
  std::vector<std::vector<std::vector<std::vector<int>>>> arc_feats(train.sentences.size());
  std::vector<std::vector<std::vector<int>>> label_feats(train.sentences.size());
  for (std::size_t si = 0; si < train.sentences.size(); ++si) {
    const auto& s = train.sentences[si];
    auto info = token_infos(s);
    const int n = static_cast<int>(s.size());
    arc_feats[si].assign(n + 1, std::vector<std::vector<int>>(n + 1));
    for (int h = 0; h <= n; ++h)
      for (int d = 1; d <= n; ++d)
        if (h != d) arc_feats[si][h][d] = arc_index.intern_all(arc_features_impl(info, h, d));
    label_feats[si].resize(n + 1);
    for (int d = 1; d <= n; ++d) label_feats[si][d] = label_index.intern_all(label_features_impl(info, s.tokens[d - 1].head, d));
  }

  ScalarWeights arcs;
  arcs.resize(arc_index.size());
  ClassWeights labels(model.classes.size());
  labels.resize(label_index.size());
  std::vector<double> scratch;

  for (int epoch = 0; epoch < epochs; ++epoch) {
    for (std::size_t si : epoch_order(train.sentences.size(), seed, epoch)) {
      const auto& s = train.sentences[si];
      const int n = static_cast<int>(s.size());
      if (n == 0) continue;
      auto pred = enforce_single_root(mst_decode(score_matrix(arc_feats[si], arcs, n)));
      for (int d = 1; d <= n; ++d) {
        int gold = s.tokens[d - 1].head;
        if (pred[d - 1] == gold) continue;
        arcs.update(arc_feats[si][gold][d], 1.0);
        arcs.update(arc_feats[si][pred[d - 1]][d], -1.0);
      }
      for (int d = 1; d <= n; ++d) {
        labels.scores(label_feats[si][d], scratch);
        std::size_t guess = argmax(scratch);
        std::size_t gold = label_ids.at(s.tokens[d - 1].deprel);
        if (guess != gold) {
          labels.update(label_feats[si][d], gold, 1.0);
          labels.update(label_feats[si][d], guess, -1.0);
        }
      }
      arcs.tick();
      labels.tick();
    }
  }
  model.arc_weights = arcs.averaged(arc_index);
  model.label_weights = labels.averaged(label_index);
  return model;
}

ParserModel train_sl(const Treebank& train, int epochs, std::uint64_t seed, TrainStats* stats) {
  ParserModel model;
  model.kind = ParserKind::kSL;
  model.root_deprel = most_frequent_root_deprel(train);

  std::vector<std::vector<std::string>> gold(train.sentences.size());
  std::map<std::string, std::size_t> class_ids;
  for (std::size_t si = 0; si < train.sentences.size(); ++si) {
    auto enc = encode_2planar(train.sentences[si]);
    if (stats) stats->dropped_arcs += enc.dropped_arcs;
    for (const auto& l : enc.labels) {
      gold[si].push_back(l.to_string());
      class_ids.emplace(gold[si].back(), 0);
    }
  }
  for (auto& [c, id] : class_ids) {
    id = model.classes.size();
    model.classes.push_back(c);
  }

  FeatureIndex index;
  std::vector<std::vector<std::vector<int>>> feats(train.sentences.size());
  for (std::size_t si = 0; si < train.sentences.size(); ++si) {
    auto info = token_infos(train.sentences[si]);
    for (int i = 1; i < static_cast<int>(info.size()); ++i) feats[si].push_back(index.intern_all(token_features_impl(info, i)));
  }

  ClassWeights weights(model.classes.size());
  weights.resize(index.size());
  std::vector<double> scratch;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    for (std::size_t si : epoch_order(train.sentences.size(), seed, epoch)) {
      for (std::size_t i = 0; i < feats[si].size(); ++i) {
        weights.scores(feats[si][i], scratch);
        std::size_t guess = argmax(scratch);
        std::size_t g = class_ids.at(gold[si][i]);
        if (guess != g) {
          weights.update(feats[si][i], g, 1.0);
          weights.update(feats[si][i], guess, -1.0);
        }
        weights.tick();
      }
    }
  }
  model.label_weights = weights.averaged(index);
  return model;
}

double arc_score(const ParserModel& m, const std::vector<std::string>& feats) {
  double s = 0.0;
  for (const auto& f : feats)
    if (auto it = m.arc_weights.find(f); it != m.arc_weights.end()) s += it->second;
  return s;
}

std::vector<double> class_scores(const ParserModel& m, const std::vector<std::string>& feats) {
  std::vector<double> s(m.classes.size(), 0.0);
  for (const auto& f : feats)
    if (auto it = m.label_weights.find(f); it != m.label_weights.end())
      for (std::size_t c = 0; c < s.size(); ++c) s[c] += it->second[c];
  return s;
}

// Best class index, skipping classes rejected by `allowed` when possible.
template <typename Pred>
std::size_t best_class(const std::vector<double>& scores, Pred allowed) {
  std::size_t best = scores.size();
  for (std::size_t c = 0; c < scores.size(); ++c)
    if (allowed(c) && (best == scores.size() || scores[c] > scores[best])) best = c;
  return best == scores.size() ? argmax(scores) : best;
}

}  // namespace

std::vector<std::string> arc_features(const Sentence& s, int head, int dep) {
  return arc_features_impl(token_infos(s), head, dep);
}

std::vector<std::string> token_features(const Sentence& s, int index) {
  return token_features_impl(token_infos(s), index);
}

ParserModel train_parser(ParserKind kind, const Treebank& train, int epochs, std::uint64_t seed, TrainStats* stats) {
  if (train.sentences.empty() || train.token_count() == 0) throw UsageError("train_parser: empty training treebank");
  if (epochs < 1) throw UsageError("train_parser: epochs must be at least 1");
  if (stats) *stats = TrainStats{train.sentences.size(), 0};
  ParserModel m = kind == ParserKind::kGB ? train_gb(train, epochs, seed) : train_sl(train, epochs, seed, stats);
  m.epochs = epochs;
  m.seed = seed;
  return m;
}

Sentence parse(const ParserModel& model, const Sentence& s) {
  Sentence out = s;
  const int n = static_cast<int>(s.size());
  if (n == 0) return out;
  auto info = token_infos(s);
  std::vector<int> heads;
  std::vector<std::string> deprels(n);

  if (model.kind == ParserKind::kGB) {
    ScoreMatrix m(n);
    for (int h = 0; h <= n; ++h)
      for (int d = 1; d <= n; ++d)
        if (h != d) m(h, d) = arc_score(model, arc_features_impl(info, h, d));
    heads = enforce_single_root(mst_decode(m));
    for (int d = 1; d <= n; ++d) {
      if (heads[d - 1] == 0 || model.classes.empty()) {
        deprels[d - 1] = model.root_deprel;
        continue;
      }
      auto scores = class_scores(model, label_features_impl(info, heads[d - 1], d));
      auto c = best_class(scores, [&](std::size_t k) { return model.classes[k] != model.root_deprel; });
      deprels[d - 1] = model.classes[c];
    }
  } else {
    std::vector<BracketLabel> labels;
    std::vector<std::vector<double>> all_scores;
    for (int i = 1; i <= n; ++i) {
      all_scores.push_back(class_scores(model, token_features_impl(info, i)));
      const auto& sc = all_scores.back();
      labels.push_back(model.classes.empty() ? BracketLabel{} : BracketLabel::parse(model.classes[argmax(sc)]));
    }
    auto tree = decode_2planar(labels);
    heads = tree.heads;
    for (int d = 1; d <= n; ++d) {
      if (heads[d - 1] == 0 || model.classes.empty()) {
        deprels[d - 1] = model.root_deprel;
        continue;
      }
      std::string rel = tree.deprels[d - 1];
      if (rel == model.root_deprel || rel.empty()) {
        auto c = best_class(all_scores[d - 1], [&](std::size_t k) {
          auto l = BracketLabel::parse(model.classes[k]);
          return l.deprel != model.root_deprel && !l.deprel.empty();
        });
        rel = BracketLabel::parse(model.classes[c]).deprel;
      }
      deprels[d - 1] = rel;
    }
  }

  for (int d = 1; d <= n; ++d) {
    out.tokens[d - 1].head = heads[d - 1];
    out.tokens[d - 1].deprel = deprels[d - 1];
  }
  return out;
}

Treebank parse_treebank(const ParserModel& model, const Treebank& tb, unsigned jobs) {
  Treebank out = tb;
  parallel_for(out.sentences.size(), jobs, [&](std::size_t i) { out.sentences[i] = parse(model, tb.sentences[i]); });
  return out;
}

// Format (tab-separated):
//   xinfl-parser  1  <sl|gb>  <epochs>  <seed>
//   root  <deprel>
//   classes  <k>  c1  c2 ...
//   A  feature  weight                 (GB arc weights)
//   L  feature  w1 ... wk              (per-class weights)
// Weights are written with %.17g so they round-trip exactly.
std::string ParserModel::serialize() const {
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::string out = "xinfl-parser\t1\t" + std::string(to_string(kind)) + '\t' + std::to_string(epochs) + '\t' +
                    std::to_string(seed) + '\n';
  out += "root\t" + root_deprel + '\n';
  out += "classes\t" + std::to_string(classes.size());
  for (const auto& c : classes) out += '\t' + c;
  out += '\n';
  for (const auto& [f, w] : arc_weights) out += "A\t" + f + '\t' + num(w) + '\n';
  for (const auto& [f, ws] : label_weights) {
    out += "L\t" + f;
    for (double w : ws) out += '\t' + num(w);
    out += '\n';
  }
  return out;
}

ParserModel ParserModel::parse(std::string_view text, const std::string& source) {
  auto lines = split_lines(text);
  if (lines.size() < 3) throw ParseError(source, 1, "truncated parser model");
  auto header = split(lines[0], '\t');
  if (header.size() != 5 || header[0] != "xinfl-parser") throw ParseError(source, 1, "not a parser model");
  if (header[1] != "1") throw ParseError(source, 1, "unsupported model version " + header[1]);
  ParserModel m;
  try {
    m.kind = parse_parser_kind(header[2]);
    m.epochs = std::stoi(header[3]);
    m.seed = std::stoull(header[4]);
  } catch (const std::exception& e) {
    throw ParseError(source, 1, std::string("bad header: ") + e.what());
  }
  auto root = split(lines[1], '\t');
  if (root.size() != 2 || root[0] != "root") throw ParseError(source, 2, "expected root line");
  m.root_deprel = root[1];
  auto cls = split(lines[2], '\t');
  if (cls.size() < 2 || cls[0] != "classes" || std::to_string(cls.size() - 2) != cls[1])
    throw ParseError(source, 3, "bad classes line");
  m.classes.assign(cls.begin() + 2, cls.end());
  for (std::size_t i = 3; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto cols = split(lines[i], '\t');
    try {
      if (cols[0] == "A" && cols.size() == 3) {
        m.arc_weights[cols[1]] = std::stod(cols[2]);
      } else if (cols[0] == "L" && cols.size() == m.classes.size() + 2) {
        std::vector<double> ws;
        for (std::size_t c = 2; c < cols.size(); ++c) ws.push_back(std::stod(cols[c]));
        m.label_weights[cols[1]] = std::move(ws);
      } else {
        throw ParseError(source, i + 1, "unrecognized model line");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError(source, i + 1, "bad weight");
    }
  }
  return m;
}

ParserModel ParserModel::load(const std::string& path) { return parse(read_text(path), path); }

}  // namespace xinfl

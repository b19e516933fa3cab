#include "xinfl/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <unordered_set>

#include "xinfl/error.hpp"
#include "xinfl/inflector.hpp"
#include "xinfl/schema.hpp"
#include "xinfl/text.hpp"
#include "xinfl/unimorph.hpp"

namespace xinfl {
namespace {

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double percent(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

EvalResult attachment_scores(const Treebank& gold, const Treebank& pred) {
  if (gold.sentences.size() != pred.sentences.size())
    throw UsageError("attachment_scores: gold has " + std::to_string(gold.sentences.size()) + " sentences, pred has " +
                     std::to_string(pred.sentences.size()));
  EvalResult r;
  for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
    const auto& g = gold.sentences[s].tokens;
    const auto& p = pred.sentences[s].tokens;
    if (g.size() != p.size())
      throw UsageError("attachment_scores: sentence " + std::to_string(s + 1) + " has " + std::to_string(g.size()) +
                       " gold tokens but " + std::to_string(p.size()) + " predicted");
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i].form != p[i].form)
        throw UsageError("attachment_scores: sentence " + std::to_string(s + 1) + " token " + std::to_string(i + 1) +
                         " form mismatch ('" + g[i].form + "' vs '" + p[i].form + "')");
      ++r.total;
      if (g[i].head == p[i].head) {
        ++r.correct_heads;
        if (g[i].deprel == p[i].deprel) ++r.correct_labeled;
      }
    }
  }
  r.uas = percent(r.correct_heads, r.total);
  r.las = percent(r.correct_labeled, r.total);
  return r;
}

OverlapStats overlap_stats(const Treebank& source, const Treebank& target) {
  std::unordered_set<std::string> src_feats, src_lemmas, tgt_feats, tgt_lemmas;
  auto collect = [](const Treebank& tb, auto& feats, auto& lemmas) {
    for (const auto& s : tb.sentences)
      for (const auto& t : s.tokens) {
        for (const auto& [k, v] : t.feats) feats.insert(k + "=" + v);
        if (!t.lemma.empty() && t.lemma != "_") lemmas.insert(t.lemma);
      }
  };
  collect(source, src_feats, src_lemmas);
  collect(target, tgt_feats, tgt_lemmas);
  auto shared = [](const auto& tgt, const auto& src) {
    std::size_t n = 0;
    for (const auto& x : tgt) n += src.contains(x);
    return n;
  };
  return {percent(shared(tgt_feats, src_feats), tgt_feats.size()),
          percent(shared(tgt_lemmas, src_lemmas), tgt_lemmas.size())};
}

double AnalysisRow::feature(std::string_view name) const {
  if (name == "um_forms") return um_forms;
  if (name == "um_lemmas") return um_lemmas;
  if (name == "src_train_sents") return src_train_sents;
  if (name == "pct_feats_shared") return pct_feats_shared;
  if (name == "pct_lemmas_shared") return pct_lemmas_shared;
  throw UsageError("unknown analysis feature '" + std::string(name) + "'");
}

double AnalysisRow::metric(std::string_view name) const {
  if (name == "delta_uas") return delta_uas;
  if (name == "delta_las") return delta_las;
  throw UsageError("unknown analysis metric '" + std::string(name) + "'");
}

std::string write_analysis_rows(std::span<const AnalysisRow> rows) {
  std::string out = "pair\tkind\tdelta_uas\tdelta_las\tum_forms\tum_lemmas\tsrc_train_sents\tpct_feats_shared\tpct_lemmas_shared\n";
  for (const auto& r : rows) {
    out += r.pair_id + '\t' + std::string(to_string(r.kind));
    for (double v : {r.delta_uas, r.delta_las, r.um_forms, r.um_lemmas, r.src_train_sents, r.pct_feats_shared,
                     r.pct_lemmas_shared})
      out += '\t' + full(v);
    out += '\n';
  }
  return out;
}

std::vector<AnalysisRow> read_analysis_rows(std::string_view text, const std::string& source) {
  std::vector<AnalysisRow> rows;
  auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i][0] == '#' || lines[i].starts_with("pair\t")) continue;
    auto cols = split(lines[i], '\t');
    if (cols.size() != 9) throw ParseError(source, i + 1, "expected 9 tab-separated columns");
    AnalysisRow r;
    r.pair_id = cols[0];
    try {
      r.kind = parse_parser_kind(cols[1]);
      double* fields[] = {&r.delta_uas, &r.delta_las, &r.um_forms, &r.um_lemmas, &r.src_train_sents,
                          &r.pct_feats_shared, &r.pct_lemmas_shared};
      for (std::size_t k = 0; k < 7; ++k) *fields[k] = std::stod(cols[k + 2]);
    } catch (const std::exception& e) {
      throw ParseError(source, i + 1, e.what());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<CorrelationCell> correlation_analysis(std::span<const AnalysisRow> rows) {
  if (rows.size() < 3) throw UsageError("correlation_analysis: need at least 3 rows");
  std::vector<CorrelationCell> cells;
  for (ParserKind kind : {ParserKind::kGB, ParserKind::kSL}) {
    std::vector<const AnalysisRow*> subset;
    for (const auto& r : rows)
      if (r.kind == kind) subset.push_back(&r);
    if (subset.empty()) continue;
    if (subset.size() < 3)
      throw UsageError("correlation_analysis: need at least 3 rows for parser " + std::string(to_string(kind)));
    for (auto feature : kAnalysisFeatures)
      for (auto metric : kAnalysisMetrics) {
        std::vector<double> x, y;
        for (const auto* r : subset) {
          x.push_back(r->feature(feature));
          y.push_back(r->metric(metric));
        }
        auto c = pearson(x, y);
        cells.push_back({std::string(feature), std::string(metric), kind, subset.size(), c.r, c.p,
                         c.p < kSignificanceLevel});
      }
  }
  return cells;
}

std::string format_correlation_table(std::span<const CorrelationCell> cells) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-20s %-10s %-4s %4s %8s %10s %s\n", "feature", "metric", "kind", "n", "r", "p", "sig");
  os << line;
  for (const auto& c : cells) {
    std::snprintf(line, sizeof line, "%-20s %-10s %-4s %4zu %8.4f %10.4g %s\n", c.feature.c_str(), c.metric.c_str(),
                  std::string(to_string(c.kind)).c_str(), c.n, c.r, c.p, c.significant ? "*" : "");
    os << line;
  }
  os << "(* p < 0.05)\n";
  return os.str();
}

std::string correlation_tsv(std::span<const CorrelationCell> cells) {
  std::string out = "feature\tmetric\tkind\tn\tr\tp\tsignificant\n";
  for (const auto& c : cells)
    out += c.feature + '\t' + c.metric + '\t' + std::string(to_string(c.kind)) + '\t' + std::to_string(c.n) + '\t' +
           full(c.r) + '\t' + full(c.p) + '\t' + (c.significant ? "1" : "0") + '\n';
  return out;
}

ExperimentConfig ExperimentConfig::parse(std::string_view text, const std::string& base_dir, const std::string& source) {
  namespace fs = std::filesystem;
  ExperimentConfig cfg;
  auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return path.is_absolute() || p == "-" ? p : (fs::path(base_dir) / path).lexically_normal().string();
  };
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  auto lang_path = [&](const std::string& v, std::size_t line) {
    auto colon = v.find(':');
    if (colon == std::string::npos || colon == 0) throw ParseError(source, line, "expected <lang>:<path>");
    return SourceSpec{v.substr(0, colon), resolve(v.substr(colon + 1))};
  };
  auto number = [&](const std::string& v, std::size_t line) {
    std::uint64_t x = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size()) throw ParseError(source, line, "expected a non-negative integer");
    return x;
  };

  bool parsers_set = false;
  auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(source, i + 1, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    const std::size_t ln = i + 1;
    if (key == "mode") {
      if (value == "zero-shot")
        cfg.mode = ExperimentMode::kZeroShot;
      else if (value == "few-shot")
        cfg.mode = ExperimentMode::kFewShot;
      else
        throw ParseError(source, ln, "mode must be zero-shot or few-shot");
    } else if (key == "target.language") {
      cfg.target_language = value;
    } else if (key == "target.train") {
      cfg.target_train = resolve(value);
    } else if (key == "target.test") {
      cfg.target_test = resolve(value);
    } else if (key == "source") {
      cfg.sources.push_back(lang_path(value, ln));
    } else if (key == "um") {
      cfg.um_paths.push_back(resolve(value));
    } else if (key == "source_um") {
      auto s = lang_path(value, ln);
      cfg.source_um[s.language] = s.train_path;
    } else if (key == "table") {
      cfg.table_path = resolve(value);
    } else if (key == "pos_map") {
      cfg.pos_map_path = resolve(value);
    } else if (key == "postedit") {
      if (value != "on" && value != "off") throw ParseError(source, ln, "postedit must be on or off");
      cfg.postedit = value == "on";
    } else if (key == "covered") {
      std::set<std::string> c;
      if (value != "none")
        for (auto& u : split(value, ','))
          if (!trim(u).empty()) c.insert(trim(u));
      cfg.covered = std::move(c);
    } else if (key == "parsers") {
      if (!parsers_set) cfg.parsers.clear();
      parsers_set = true;
      try {
        for (auto& k : split(value, ',')) cfg.parsers.push_back(parse_parser_kind(trim(k)));
      } catch (const UsageError& e) {
        throw ParseError(source, ln, e.what());
      }
    } else if (key == "seed") {
      cfg.seed = number(value, ln);
    } else if (key == "epochs") {
      cfg.epochs = static_cast<int>(number(value, ln));
    } else if (key == "min_support") {
      cfg.min_support = number(value, ln);
    } else if (key == "max_iters") {
      cfg.max_iters = number(value, ln);
    } else if (key == "jobs") {
      cfg.jobs = static_cast<unsigned>(std::max<std::uint64_t>(1, number(value, ln)));
    } else {
      throw ParseError(source, ln, "unknown key '" + key + "'");
    }
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  auto dir = std::filesystem::path(path).parent_path().string();
  return parse(read_text(path), dir.empty() ? "." : dir, path);
}

namespace {

struct TargetInflection {
  InflectorModel model;
  std::optional<double> accuracy;
  std::set<std::string> covered;
  ConversionTable table;
  std::size_t um_forms = 0;
  std::size_t um_lemmas = 0;
};

TargetInflection prepare_inflection(const ExperimentConfig& cfg) {
  if (cfg.um_paths.empty()) throw UsageError("experiment config: at least one 'um' file is required");
  std::vector<UMLexicon> lexicons;
  for (const auto& p : cfg.um_paths) lexicons.push_back(load_um_file(p, cfg.target_language));
  UMLexicon um = deduplicate(concat_dialects(lexicons, cfg.target_language));

  TargetInflection t;
  t.um_forms = um.size();
  t.um_lemmas = um.distinct_lemmas();
  if (um.size() >= 10) {
    auto split = split_um(um, cfg.seed);
    t.model = train_inflector(split.train);
    if (!split.test.triples.empty()) t.accuracy = evaluate_inflector(t.model, split.test);
  } else {
    warn("fewer than 10 UM triples; training the inflector on all of them");
    t.model = train_inflector(um);
  }
  PosMap pos_map = cfg.pos_map_path.empty() ? bundled_pos_map() : load_pos_map_file(cfg.pos_map_path);
  t.covered = cfg.covered ? *cfg.covered : covered_pos(um, pos_map);
  t.table = cfg.table_path.empty() ? ConversionTable::bundled() : ConversionTable::load(cfg.table_path);
  if (!cfg.postedit) t.table.postedit_rules.clear();
  return t;
}

Treebank xinflect_source(const ExperimentConfig& cfg, const TargetInflection& target, const Treebank& src,
                         XInflectionStats& stats) {
  ConversionTable table = target.table;
  if (cfg.postedit) {
    if (auto it = cfg.source_um.find(src.language); it != cfg.source_um.end()) {
      auto rules = induce_postedit_rules(src, load_um_file(it->second, src.language), table, cfg.min_support,
                                         cfg.max_iters);
      table.postedit_rules.insert(table.postedit_rules.end(), rules.begin(), rules.end());
    } else {
      warn("no source_um for '" + src.language + "'; post-edit induction skipped");
    }
  }
  auto [out, st] = xinflect_treebank(src, target.model, table, target.covered, {cfg.jobs});
  stats = st;
  out.name = src.name + ".xinfl";
  return out;
}

EvalResult train_and_score(ParserKind kind, const Treebank& train, const Treebank& test, const ExperimentConfig& cfg) {
  auto model = train_parser(kind, train, cfg.epochs, cfg.seed);
  return attachment_scores(test, parse_treebank(model, test, cfg.jobs));
}

}  // namespace

ExperimentReport run_zero_shot(const ExperimentConfig& cfg) {
  if (cfg.mode != ExperimentMode::kZeroShot) throw UsageError("run_zero_shot: config mode is not zero-shot");
  if (cfg.target_test.empty()) throw UsageError("run_zero_shot: target.test is required");
  Treebank test = read_conllu_file(cfg.target_test, cfg.target_language);

  ExperimentReport report;
  report.mode = cfg.mode;
  report.target_language = cfg.target_language;
  report.seed = cfg.seed;
  if (cfg.sources.empty()) return report;

  auto target = prepare_inflection(cfg);
  report.inflector_accuracy = target.accuracy;

  for (const auto& spec : cfg.sources) {
    Treebank src = read_conllu_file(spec.train_path, spec.language);
    XInflectionStats stats;
    Treebank xsrc = xinflect_source(cfg, target, src, stats);
    report.xinflection[spec.language] = stats;
    auto overlap = overlap_stats(src, test);
    for (ParserKind kind : cfg.parsers) {
      EvalResult base = train_and_score(kind, src, test, cfg);
      EvalResult x = train_and_score(kind, xsrc, test, cfg);
      report.rows.push_back({spec.language, kind, "baseline", base, 0.0, 0.0});
      report.rows.push_back({spec.language, kind, "x-inflected", x, x.uas - base.uas, x.las - base.las});
      AnalysisRow a;
      a.pair_id = cfg.target_language + "<-" + spec.language;
      a.kind = kind;
      a.delta_uas = x.uas - base.uas;
      a.delta_las = x.las - base.las;
      a.um_forms = static_cast<double>(target.um_forms);
      a.um_lemmas = static_cast<double>(target.um_lemmas);
      a.src_train_sents = static_cast<double>(src.sentences.size());
      a.pct_feats_shared = overlap.pct_feats_shared;
      a.pct_lemmas_shared = overlap.pct_lemmas_shared;
      report.analysis.push_back(a);
    }
  }
  return report;
}

ExperimentReport run_few_shot(const ExperimentConfig& cfg) {
  if (cfg.mode != ExperimentMode::kFewShot) throw UsageError("run_few_shot: config mode is not few-shot");
  if (cfg.target_test.empty()) throw UsageError("run_few_shot: target.test is required");
  if (cfg.target_train.empty()) throw UsageError("run_few_shot: target.train is required");
  Treebank test = read_conllu_file(cfg.target_test, cfg.target_language);
  Treebank train = read_conllu_file(cfg.target_train, cfg.target_language);

  ExperimentReport report;
  report.mode = cfg.mode;
  report.target_language = cfg.target_language;
  report.seed = cfg.seed;

  std::vector<Treebank> originals{train}, xinflected{train};
  if (!cfg.sources.empty()) {
    auto target = prepare_inflection(cfg);
    report.inflector_accuracy = target.accuracy;
    for (const auto& spec : cfg.sources) {
      Treebank src = read_conllu_file(spec.train_path, spec.language);
      XInflectionStats stats;
      xinflected.push_back(xinflect_source(cfg, target, src, stats));
      report.xinflection[spec.language] = stats;
      originals.push_back(std::move(src));
    }
  }
  Treebank merged_original = merge_treebanks(originals, "target+original");
  Treebank merged_x = merge_treebanks(xinflected, "target+x-inflected");

  for (ParserKind kind : cfg.parsers) {
    EvalResult only = train_and_score(kind, train, test, cfg);
    EvalResult orig = train_and_score(kind, merged_original, test, cfg);
    EvalResult x = train_and_score(kind, merged_x, test, cfg);
    report.rows.push_back({"-", kind, "target-only", only, 0.0, 0.0});
    report.rows.push_back({"merged", kind, "target+original", orig, orig.uas - only.uas, orig.las - only.las});
    report.rows.push_back({"merged", kind, "target+x-inflected", x, x.uas - only.uas, x.las - only.las});
  }
  return report;
}

std::string ExperimentReport::to_text() const {
  std::ostringstream os;
  os << "# " << (mode == ExperimentMode::kZeroShot ? "zero-shot" : "few-shot") << " target=" << target_language
     << " seed=" << seed << '\n';
  os << "# UAS/LAS over all basic tokens, punctuation included; deltas are system minus "
     << (mode == ExperimentMode::kZeroShot ? "baseline" : "target-only") << '\n';
  if (inflector_accuracy) os << "# inflector accuracy (UM test split) " << fixed(100.0 * *inflector_accuracy) << '\n';
  for (const auto& [lang, st] : xinflection)
    os << "# x-inflection " << lang << ": " << fixed(100.0 * st.replacement_rate(), 1) << "% replaced\n";
  char line[200];
  std::snprintf(line, sizeof line, "%-10s %-4s %-20s %8s %8s %8s %8s\n", "source", "kind", "system", "UAS", "LAS", "dUAS",
                "dLAS");
  os << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-10s %-4s %-20s %8s %8s %8s %8s\n", r.source.c_str(),
                  std::string(to_string(r.kind)).c_str(), r.system.c_str(), fixed(r.score.uas).c_str(),
                  fixed(r.score.las).c_str(), fixed(r.delta_uas).c_str(), fixed(r.delta_las).c_str());
    os << line;
  }
  return os.str();
}

std::string ExperimentReport::to_tsv() const {
  std::string out = "mode\ttarget\tsource\tkind\tsystem\tuas\tlas\tdelta_uas\tdelta_las\tcorrect_heads\tcorrect_labeled\ttotal\n";
  const std::string m = mode == ExperimentMode::kZeroShot ? "zero-shot" : "few-shot";
  for (const auto& r : rows)
    out += m + '\t' + target_language + '\t' + r.source + '\t' + std::string(to_string(r.kind)) + '\t' + r.system + '\t' +
           fixed(r.score.uas) + '\t' + fixed(r.score.las) + '\t' + fixed(r.delta_uas) + '\t' + fixed(r.delta_las) + '\t' +
           std::to_string(r.score.correct_heads) + '\t' + std::to_string(r.score.correct_labeled) + '\t' +
           std::to_string(r.score.total) + '\n';
  return out;
}

}  // namespace xinfl

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xinfl/conllu.hpp"
#include "xinfl/parser/model.hpp"
#include "xinfl/stats.hpp"
#include "xinfl/xinflect.hpp"

namespace xinfl {

struct EvalResult {
  double uas = 0.0;  // percentage
  double las = 0.0;  // percentage
  std::size_t correct_heads = 0;
  std::size_t correct_labeled = 0;
  std::size_t total = 0;
};

// Counts every basic token, punctuation included; multiword ranges and empty
// nodes are not tokens. Throws UsageError naming the first sentence or token
// mismatch when the treebanks are not aligned.
EvalResult attachment_scores(const Treebank& gold, const Treebank& pred);

// Percentages of the target's distinct Feature=Value pairs and lemma types
// that also occur in the source.
struct OverlapStats {
  double pct_feats_shared = 0.0;
  double pct_lemmas_shared = 0.0;
};

OverlapStats overlap_stats(const Treebank& source, const Treebank& target);

inline constexpr std::array<std::string_view, 5> kAnalysisFeatures = {
    "um_forms", "um_lemmas", "src_train_sents", "pct_feats_shared", "pct_lemmas_shared"};
inline constexpr std::array<std::string_view, 2> kAnalysisMetrics = {"delta_uas", "delta_las"};

struct AnalysisRow {
  std::string pair_id;
  ParserKind kind = ParserKind::kGB;
  double delta_uas = 0.0;
  double delta_las = 0.0;
  double um_forms = 0.0;
  double um_lemmas = 0.0;
  double src_train_sents = 0.0;
  double pct_feats_shared = 0.0;
  double pct_lemmas_shared = 0.0;

  double feature(std::string_view name) const;
  double metric(std::string_view name) const;
};

std::string write_analysis_rows(std::span<const AnalysisRow> rows);
std::vector<AnalysisRow> read_analysis_rows(std::string_view text, const std::string& source = "<rows>");

struct CorrelationCell {
  std::string feature;
  std::string metric;
  ParserKind kind = ParserKind::kGB;
  std::size_t n = 0;
  double r = 0.0;
  double p = 1.0;
  bool significant = false;  // p < 0.05
};

inline constexpr double kSignificanceLevel = 0.05;

// One cell per (feature, metric, parser kind present in rows), kinds in
// GB, SL order. Each kind needs at least 3 rows.
std::vector<CorrelationCell> correlation_analysis(std::span<const AnalysisRow> rows);
std::string format_correlation_table(std::span<const CorrelationCell> cells);
std::string correlation_tsv(std::span<const CorrelationCell> cells);

enum class ExperimentMode { kZeroShot, kFewShot };

struct SourceSpec {
  std::string language;
  std::string train_path;
};

// Flat "key = value" file; '#' starts a comment; relative paths resolve
// against the config file's directory. Keys:
//   mode            zero-shot | few-shot
//   target.language ISO code
//   target.train    target training treebank (few-shot)
//   target.test     target test treebank
//   source          <lang>:<path>            (repeatable)
//   um              UniMorph file             (repeatable; dialects concatenated)
//   source_um       <lang>:<path>            (repeatable; enables post-edit induction for that source)
//   table           conversion table          (default: bundled)
//   pos_map         UM-POS -> UPOS map        (default: bundled)
//   postedit        on | off                  (default on)
//   covered         comma list of UPOS, or "none"   (default: derived from the UM data)
//   parsers         comma list of gb, sl      (default gb,sl)
//   seed, epochs, min_support, max_iters, jobs
struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::kZeroShot;
  std::string target_language;
  std::string target_train;
  std::string target_test;
  std::vector<SourceSpec> sources;
  std::vector<std::string> um_paths;
  std::map<std::string, std::string> source_um;
  std::string table_path;
  std::string pos_map_path;
  bool postedit = true;
  std::optional<std::set<std::string>> covered;
  std::vector<ParserKind> parsers = {ParserKind::kGB, ParserKind::kSL};
  std::uint64_t seed = 42;
  int epochs = 10;
  std::size_t min_support = 5;
  std::size_t max_iters = 10;
  unsigned jobs = 1;

  static ExperimentConfig parse(std::string_view text, const std::string& base_dir = ".",
                                const std::string& source = "<config>");
  static ExperimentConfig load(const std::string& path);
};

struct ResultRow {
  std::string source;  // source language, "merged" or "-"
  ParserKind kind = ParserKind::kGB;
  std::string system;
  EvalResult score;
  double delta_uas = 0.0;
  double delta_las = 0.0;
};

struct ExperimentReport {
  ExperimentMode mode = ExperimentMode::kZeroShot;
  std::string target_language;
  std::uint64_t seed = 0;
  std::optional<double> inflector_accuracy;
  std::map<std::string, XInflectionStats> xinflection;  // per source language
  std::vector<ResultRow> rows;
  std::vector<AnalysisRow> analysis;  // zero-shot only

  std::string to_text() const;
  std::string to_tsv() const;
};

ExperimentReport run_zero_shot(const ExperimentConfig& cfg);
ExperimentReport run_few_shot(const ExperimentConfig& cfg);

}  // namespace xinfl

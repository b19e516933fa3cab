// xinfl: command-line front end for the x-inflection toolkit.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "xinfl/conllu.hpp"
#include "xinfl/error.hpp"
#include "xinfl/experiment.hpp"
#include "xinfl/inflector.hpp"
#include "xinfl/parser/model.hpp"
#include "xinfl/schema.hpp"
#include "xinfl/text.hpp"
#include "xinfl/unimorph.hpp"
#include "xinfl/xinflect.hpp"

using namespace xinfl;

namespace {

struct Options {
  std::uint64_t seed = 42;
  unsigned jobs = 1;
  std::string lang;
  std::vector<std::string> inputs;
  std::string input;
  std::string output = "-";
  std::string model;
  std::string table;
  std::string pos_map;
  std::string covered;
  std::string stats;
  std::string gold;
  std::string pred;
  std::string config;
  std::string tsv;
  std::string rows;
  std::string lemma;
  std::string tag;
  std::string test;
  std::string um;
  std::string kind = "gb";
  std::string name = "merged";
  std::string write_table;
  std::string report;
  int epochs = 10;
  std::size_t min_support = 5;
  std::size_t max_iters = 10;
  bool passthrough = false;
  bool no_postedit = false;
  bool quiet = false;
};

ConversionTable table_or_bundled(const std::string& path) {
  return path.empty() ? ConversionTable::bundled() : ConversionTable::load(path);
}

UMLexicon load_lexicons(const std::vector<std::string>& paths, const std::string& lang) {
  std::vector<UMLexicon> lexicons;
  for (const auto& p : paths) lexicons.push_back(load_um_file(p, lang));
  return concat_dialects(lexicons, lang);
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

int cmd_split_um(const Options& o) {
  auto split = split_um(load_lexicons(o.inputs, o.lang), o.seed);
  write_text(o.output + ".train", write_um(split.train));
  write_text(o.output + ".dev", write_um(split.dev));
  write_text(o.output + ".test", write_um(split.test));
  std::cerr << "train=" << split.train.size() << " dev=" << split.dev.size() << " test=" << split.test.size() << '\n';
  return 0;
}

int cmd_train_inflector(const Options& o) {
  auto model = train_inflector(load_lexicons(o.inputs, o.lang));
  model.language = o.lang;
  write_text(o.output, model.serialize());
  if (!o.test.empty()) {
    double acc = evaluate_inflector(model, load_um_file(o.test, o.lang));
    std::cout << "accuracy " << fixed2(100.0 * acc) << '\n';
  }
  return 0;
}

int cmd_inflect(const Options& o) {
  auto model = InflectorModel::load(o.model);
  if (!o.lemma.empty() || !o.tag.empty()) {
    if (o.lemma.empty() || o.tag.empty()) throw UsageError("--lemma and --tag go together");
    auto r = inflect(model, o.lemma, MorphTag::parse(o.tag));
    write_text(o.output, r.form + '\t' + std::string(to_string(r.provenance)) + '\n');
    return 0;
  }
  if (o.input.empty()) throw UsageError("inflect needs --input or --lemma/--tag");
  std::string out;
  auto lines = split_lines(read_text(o.input));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto cols = split(lines[i], '\t');
    if (cols.size() < 2) throw ParseError(o.input, i + 1, "expected lemma<TAB>tag");
    const std::string& tag = cols.size() >= 3 ? cols[2] : cols[1];
    auto r = inflect(model, cols[0], MorphTag::parse(tag));
    out += cols[0] + '\t' + r.form + '\t' + tag + '\t' + std::string(to_string(r.provenance)) + '\n';
  }
  write_text(o.output, out);
  return 0;
}

int cmd_convert_feats(const Options& o) {
  auto tb = read_conllu_file(o.input, o.lang);
  auto table = o.passthrough ? passthrough_table(tb, table_or_bundled(o.table)) : table_or_bundled(o.table);
  if (!o.write_table.empty()) write_text(o.write_table, table.serialize());
  std::string out;
  for (const auto& s : tb.sentences) {
    for (const auto& t : s.tokens) {
      auto tag = ud_to_um(t.upos, t.feats, table);
      out += std::to_string(t.id) + '\t' + t.form + '\t' + t.lemma + '\t' + t.upos + '\t' + render_feats(t.feats) + '\t' +
             (tag ? tag->render() : std::string(kNone)) + '\n';
    }
    out += '\n';
  }
  write_text(o.output, out);
  if (!o.report.empty()) write_text(o.report, conversion_report(tb, table).to_text());
  return 0;
}

int cmd_induce_rules(const Options& o) {
  auto tb = read_conllu_file(o.input, o.lang);
  auto table = table_or_bundled(o.table);
  InductionTrace trace;
  auto rules = induce_postedit_rules(tb, load_um_file(o.um, o.lang), table, o.min_support, o.max_iters, &trace);
  table.postedit_rules.insert(table.postedit_rules.end(), rules.begin(), rules.end());
  write_text(o.output, table.serialize());
  std::cerr << "anchors=" << trace.anchors << " rules=" << rules.size() << " accuracy";
  for (double a : trace.accuracy) std::cerr << ' ' << fixed2(100.0 * a);
  std::cerr << '\n';
  return 0;
}

std::set<std::string> parse_covered(const std::string& spec) {
  std::set<std::string> covered;
  if (spec == "none") return covered;
  for (const auto& u : split(spec, ','))
    if (!u.empty()) covered.insert(u);
  return covered;
}

int cmd_x_inflect(const Options& o) {
  auto source = read_conllu_file(o.input, o.lang);
  auto model = InflectorModel::load(o.model);
  auto table = table_or_bundled(o.table);
  if (o.no_postedit) table.postedit_rules.clear();
  std::set<std::string> covered;
  if (!o.covered.empty()) {
    covered = parse_covered(o.covered);
  } else {
    const PosMap& pos_map = o.pos_map.empty() ? bundled_pos_map() : load_pos_map_file(o.pos_map);
    covered = covered_pos(model.pos_symbols(), pos_map);
  }
  auto [out, stats] = xinflect_treebank(source, model, table, covered, {o.jobs});
  write_text(o.output, write_conllu(out));
  if (!o.stats.empty()) write_text(o.stats, stats.to_json());
  std::cerr << xinflect_report(stats);
  return 0;
}

int cmd_merge(const Options& o) {
  std::vector<Treebank> tbs;
  for (const auto& p : o.inputs) tbs.push_back(read_conllu_file(p, o.lang));
  write_text(o.output, write_conllu(merge_treebanks(tbs, o.name)));
  return 0;
}

int cmd_train_parser(const Options& o) {
  TrainStats stats;
  auto model = train_parser(parse_parser_kind(o.kind), read_conllu_file(o.input, o.lang), o.epochs, o.seed, &stats);
  write_text(o.output, model.serialize());
  std::cerr << "sentences=" << stats.sentences << " dropped_arcs=" << stats.dropped_arcs << '\n';
  return 0;
}

int cmd_parse(const Options& o) {
  auto model = ParserModel::load(o.model);
  write_text(o.output, write_conllu(parse_treebank(model, read_conllu_file(o.input, o.lang), o.jobs)));
  return 0;
}

int cmd_eval(const Options& o) {
  auto r = attachment_scores(read_conllu_file(o.gold), read_conllu_file(o.pred));
  write_text(o.output, "UAS " + fixed2(r.uas) + " LAS " + fixed2(r.las) + '\n');
  return 0;
}

int cmd_experiment(const Options& o, ExperimentMode mode, bool seed_given, bool jobs_given) {
  auto cfg = ExperimentConfig::load(o.config);
  cfg.mode = mode;
  if (seed_given) cfg.seed = o.seed;
  if (jobs_given) cfg.jobs = o.jobs;
  std::cerr << "seed=" << cfg.seed << '\n';
  auto report = mode == ExperimentMode::kZeroShot ? run_zero_shot(cfg) : run_few_shot(cfg);
  write_text(o.output, report.to_text());
  if (!o.tsv.empty()) write_text(o.tsv, report.to_tsv());
  if (!o.rows.empty()) write_text(o.rows, write_analysis_rows(report.analysis));
  return 0;
}

int cmd_analyze(const Options& o) {
  std::vector<AnalysisRow> rows;
  for (const auto& p : o.inputs) {
    auto part = read_analysis_rows(read_text(p), p);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  auto cells = correlation_analysis(rows);
  write_text(o.output, format_correlation_table(cells));
  if (!o.tsv.empty()) write_text(o.tsv, correlation_tsv(cells));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-lingual inflection data augmentation for dependency parsing"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  Options o;

  auto seed_opt = app.add_option("--seed", o.seed, "Random seed")->default_val(42);
  auto jobs_opt = app.add_option("--jobs", o.jobs, "Worker threads")->default_val(1)->check(CLI::PositiveNumber);
  app.add_flag("--quiet", o.quiet, "Suppress warnings");

  auto add_lang = [&](CLI::App* c) { c->add_option("--lang", o.lang, "Language code"); };
  auto add_out = [&](CLI::App* c, const std::string& what) {
    c->add_option("--out,-o", o.output, what + " (\"-\" for stdout)");
  };

  auto* split_cmd = app.add_subcommand("split-um", "Deduplicate, shuffle and split UniMorph data 80/10/10");
  split_cmd->add_option("--um", o.inputs, "UniMorph file (repeat to concatenate dialects)")->required();
  add_lang(split_cmd);
  split_cmd->add_option("--out,-o", o.output, "Output prefix; writes PREFIX.train, PREFIX.dev, PREFIX.test")->required();

  auto* train_inf = app.add_subcommand("train-inflector", "Train an inflector on UniMorph triples");
  train_inf->add_option("--train", o.inputs, "UniMorph training file (repeatable)")->required();
  train_inf->add_option("--test", o.test, "UniMorph file to report exact-match accuracy on");
  add_lang(train_inf);
  add_out(train_inf, "Model file");

  auto* inflect_cmd = app.add_subcommand("inflect", "Inflect lemmas with a trained inflector");
  inflect_cmd->add_option("--model", o.model, "Inflector model")->required();
  inflect_cmd->add_option("--lemma", o.lemma, "Single lemma");
  inflect_cmd->add_option("--tag", o.tag, "UniMorph tag for --lemma");
  inflect_cmd->add_option("--input", o.input, "lemma<TAB>tag or lemma<TAB>form<TAB>tag lines");
  add_out(inflect_cmd, "Output");

  auto* convert_cmd = app.add_subcommand("convert-feats", "Map UD UPOS+FEATS of a treebank to UniMorph tags");
  convert_cmd->add_option("--input", o.input, "CoNLL-U file")->required();
  convert_cmd->add_option("--table", o.table, "Conversion table (default: bundled)");
  convert_cmd->add_flag("--passthrough", o.passthrough, "Keep UD Feature=Value pairs as opaque tag features");
  convert_cmd->add_option("--write-table", o.write_table, "Write the table that was applied");
  convert_cmd->add_option("--report", o.report, "Write conversion counts");
  add_lang(convert_cmd);
  add_out(convert_cmd, "Token table");

  auto* induce_cmd = app.add_subcommand("induce-rules", "Induce post-editing rules from UD/UniMorph anchors");
  induce_cmd->add_option("--input", o.input, "Source CoNLL-U file")->required();
  induce_cmd->add_option("--um", o.um, "Source-language UniMorph file")->required();
  induce_cmd->add_option("--table", o.table, "Base conversion table (default: bundled)");
  induce_cmd->add_option("--min-support", o.min_support, "Minimum anchors per rule")->default_val(5);
  induce_cmd->add_option("--max-iters", o.max_iters, "Maximum induction rounds")->default_val(10);
  add_lang(induce_cmd);
  add_out(induce_cmd, "Table with induced rules appended");

  auto* xinfl_cmd = app.add_subcommand("x-inflect", "Re-inflect a source treebank with a target inflector");
  xinfl_cmd->add_option("--source,--input", o.input, "Source CoNLL-U file")->required();
  xinfl_cmd->add_option("--model", o.model, "Target inflector model")->required();
  xinfl_cmd->add_option("--table", o.table, "Conversion table (default: bundled)");
  xinfl_cmd->add_option("--covered", o.covered, "Comma list of UPOS to re-inflect, or \"none\"");
  xinfl_cmd->add_option("--pos-map", o.pos_map, "UM-POS to UPOS map used to derive coverage");
  xinfl_cmd->add_option("--stats", o.stats, "Write replacement statistics as JSON");
  xinfl_cmd->add_flag("--no-postedit", o.no_postedit, "Ignore post-editing rules in the table");
  add_lang(xinfl_cmd);
  add_out(xinfl_cmd, "Output CoNLL-U");

  auto* merge_cmd = app.add_subcommand("merge", "Concatenate treebanks");
  merge_cmd->add_option("--input", o.inputs, "CoNLL-U file (repeatable)")->required();
  merge_cmd->add_option("--name", o.name, "Name of the merged treebank");
  add_out(merge_cmd, "Output CoNLL-U");

  auto* train_parser_cmd = app.add_subcommand("train-parser", "Train a dependency parser");
  train_parser_cmd->add_option("--input,--train", o.input, "Training CoNLL-U file")->required();
  train_parser_cmd->add_option("--kind", o.kind, "gb (graph-based) or sl (sequence labeling)")
      ->check(CLI::IsMember({"gb", "sl", "GB", "SL"}));
  train_parser_cmd->add_option("--epochs", o.epochs, "Training epochs")->default_val(10)->check(CLI::PositiveNumber);
  add_out(train_parser_cmd, "Model file");

  auto* parse_cmd = app.add_subcommand("parse", "Parse a CoNLL-U file");
  parse_cmd->add_option("--model", o.model, "Parser model")->required();
  parse_cmd->add_option("--input", o.input, "CoNLL-U file")->required();
  add_out(parse_cmd, "Output CoNLL-U");

  auto* eval_cmd = app.add_subcommand("eval", "Attachment scores of a prediction against gold");
  eval_cmd->add_option("--gold", o.gold, "Gold CoNLL-U")->required();
  eval_cmd->add_option("--pred", o.pred, "Predicted CoNLL-U")->required();
  add_out(eval_cmd, "Score line");

  auto add_experiment = [&](CLI::App* c) {
    c->add_option("--config", o.config, "Experiment config file")->required();
    c->add_option("--tsv", o.tsv, "Write result rows as TSV");
    c->add_option("--rows", o.rows, "Write analysis rows (zero-shot)");
    add_out(c, "Report");
  };
  auto* zero_cmd = app.add_subcommand("zero-shot", "Source-only training, baseline vs x-inflected");
  add_experiment(zero_cmd);
  auto* few_cmd = app.add_subcommand("few-shot", "Target training data plus merged sources");
  add_experiment(few_cmd);

  auto* analyze_cmd = app.add_subcommand("analyze", "Pearson correlations of score deltas with data features");
  analyze_cmd->add_option("--rows", o.inputs, "Analysis rows file (repeatable)")->required();
  analyze_cmd->add_option("--tsv", o.tsv, "Write cells as TSV");
  add_out(analyze_cmd, "Correlation table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  if (o.quiet) set_warnings_enabled(false);
  if (!*zero_cmd && !*few_cmd) std::cerr << "seed=" << o.seed << '\n';
  try {
    if (*split_cmd) return cmd_split_um(o);
    if (*train_inf) return cmd_train_inflector(o);
    if (*inflect_cmd) return cmd_inflect(o);
    if (*convert_cmd) return cmd_convert_feats(o);
    if (*induce_cmd) return cmd_induce_rules(o);
    if (*xinfl_cmd) return cmd_x_inflect(o);
    if (*merge_cmd) return cmd_merge(o);
    if (*train_parser_cmd) return cmd_train_parser(o);
    if (*parse_cmd) return cmd_parse(o);
    if (*eval_cmd) return cmd_eval(o);
    if (*zero_cmd) return cmd_experiment(o, ExperimentMode::kZeroShot, seed_opt->count() > 0, jobs_opt->count() > 0);
    if (*few_cmd) return cmd_experiment(o, ExperimentMode::kFewShot, seed_opt->count() > 0, jobs_opt->count() > 0);
    if (*analyze_cmd) return cmd_analyze(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

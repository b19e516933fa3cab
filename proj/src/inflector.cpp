#include "xinfl/inflector.hpp"

#include <algorithm>

#include "xinfl/error.hpp"
#include "xinfl/text.hpp"

namespace xinfl {
namespace {

constexpr std::string_view kHeader = "xinfl-inflector";
constexpr int kVersion = 1;

void sort_rules(std::vector<SuffixRule>& rules) {
  std::sort(rules.begin(), rules.end(), [](const SuffixRule& a, const SuffixRule& b) {
    if (a.lemma_suffix.size() != b.lemma_suffix.size()) return a.lemma_suffix.size() > b.lemma_suffix.size();
    if (a.support != b.support) return a.support > b.support;
    if (a.form_suffix != b.form_suffix) return a.form_suffix < b.form_suffix;
    return a.lemma_suffix < b.lemma_suffix;
  });
}

const SuffixRule* find_rule(const InflectorModel& model, std::string_view lemma, const std::string& tag) {
  auto it = model.suffix_rules.find(tag);
  if (it == model.suffix_rules.end()) return nullptr;
  for (const auto& r : it->second)
    if (lemma.ends_with(r.lemma_suffix)) return &r;
  return nullptr;
}

std::string apply(std::string_view lemma, const SuffixRule& r) {
  std::string out(lemma.substr(0, lemma.size() - r.lemma_suffix.size()));
  out += r.form_suffix;
  return out;
}

}  // namespace

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kMemory: return "MEMORY";
    case Provenance::kRule: return "RULE";
    case Provenance::kBackoff: return "BACKOFF";
    case Provenance::kCopy: return "COPY";
  }
  return "?";
}

std::vector<std::string> InflectorModel::backoff_tags(const MorphTag& tag) {
  std::vector<std::string> out;
  MorphTag t = tag;
  while (!t.features.empty()) {
    t.features.pop_back();
    out.push_back(t.render());
  }
  return out;
}

std::set<std::string> InflectorModel::pos_symbols() const {
  std::set<std::string> out;
  for (const auto& [key, form] : memory) out.insert(MorphTag::parse(key.second).pos);
  return out;
}

InflectorModel train_inflector(const UMLexicon& train) {
  InflectorModel model;
  model.language = train.language;
  std::map<std::string, std::map<std::pair<std::string, std::string>, std::size_t>> counts;
  for (const auto& t : train.triples) {
    std::string tag = t.tag.render();
    auto [it, inserted] = model.memory.try_emplace({t.lemma, tag}, t.form);
    if (!inserted && it->second != t.form) {
      warn("train_inflector: (" + t.lemma + ", " + tag + ") maps to both '" + it->second + "' and '" + t.form +
           "'; keeping the last");
      it->second = t.form;
    }
    std::size_t p = common_prefix_bytes(t.lemma, t.form);
    ++counts[tag][{t.lemma.substr(p), t.form.substr(p)}];
  }
  for (auto& [tag, rules] : counts) {
    auto& list = model.suffix_rules[tag];
    for (const auto& [edit, support] : rules) list.push_back({edit.first, edit.second, support});
    sort_rules(list);
  }
  return model;
}

Inflection inflect(const InflectorModel& model, std::string_view lemma, const MorphTag& tag) {
  const std::string key = tag.render();
  if (auto it = model.memory.find({std::string(lemma), key}); it != model.memory.end())
    return {it->second, Provenance::kMemory};
  if (const SuffixRule* r = find_rule(model, lemma, key)) return {apply(lemma, *r), Provenance::kRule};
  for (const auto& backoff : InflectorModel::backoff_tags(tag))
    if (const SuffixRule* r = find_rule(model, lemma, backoff)) return {apply(lemma, *r), Provenance::kBackoff};
  return {std::string(lemma), Provenance::kCopy};
}

double evaluate_inflector(const InflectorModel& model, const UMLexicon& test) {
  if (test.triples.empty()) throw UsageError("evaluate_inflector: empty test set");
  std::size_t correct = 0;
  for (const auto& t : test.triples)
    if (inflect(model, t.lemma, t.tag).form == t.form) ++correct;
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

// Format (tab-separated):
//   xinfl-inflector  1  <language>  <memory entries>  <rules>
//   M  lemma  tag  form
//   R  tag  lemma_suffix  form_suffix  support
std::string InflectorModel::serialize() const {
  std::size_t n_rules = 0;
  for (const auto& [tag, rules] : suffix_rules) n_rules += rules.size();
  std::string out = std::string(kHeader) + '\t' + std::to_string(kVersion) + '\t' + language + '\t' +
                    std::to_string(memory.size()) + '\t' + std::to_string(n_rules) + '\n';
  for (const auto& [key, form] : memory) out += "M\t" + key.first + '\t' + key.second + '\t' + form + '\n';
  for (const auto& [tag, rules] : suffix_rules)
    for (const auto& r : rules)
      out += "R\t" + tag + '\t' + r.lemma_suffix + '\t' + r.form_suffix + '\t' + std::to_string(r.support) + '\n';
  return out;
}

InflectorModel InflectorModel::parse(std::string_view text, const std::string& source) {
  auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(source, 1, "empty model file");
  auto header = split(lines[0], '\t');
  if (header.size() != 5 || header[0] != kHeader) throw ParseError(source, 1, "not an inflector model");
  if (header[1] != std::to_string(kVersion)) throw ParseError(source, 1, "unsupported model version " + header[1]);
  InflectorModel m;
  m.language = header[2];
  std::size_t n_rules = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto cols = split(lines[i], '\t');
    if (cols[0] == "M" && cols.size() == 4) {
      m.memory[{cols[1], cols[2]}] = cols[3];
    } else if (cols[0] == "R" && cols.size() == 5) {
      std::size_t support = 0;
      try {
        support = std::stoull(cols[4]);
      } catch (const std::exception&) {
        throw ParseError(source, i + 1, "bad rule support '" + cols[4] + "'");
      }
      m.suffix_rules[cols[1]].push_back({cols[2], cols[3], support});
      ++n_rules;
    } else {
      throw ParseError(source, i + 1, "unrecognized model line");
    }
  }
  if (std::to_string(m.memory.size()) != header[3] || std::to_string(n_rules) != header[4])
    throw ParseError(source, 1, "entry counts do not match header");
  for (auto& [tag, rules] : m.suffix_rules) sort_rules(rules);
  return m;
}

InflectorModel InflectorModel::load(const std::string& path) { return parse(read_text(path), path); }

}  // namespace xinfl

#include "xinfl/schema.hpp"

#include <algorithm>
#include <iterator>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "xinfl/error.hpp"
#include "xinfl/text.hpp"

namespace xinfl {
namespace detail {
extern const char* const kBundledTable;
}

namespace {

std::string render_set(const std::set<std::string>& s, const UmSchema& schema) {
  if (s.empty()) return "_";
  std::vector<std::string> v(s.begin(), s.end());
  // POS symbols first, then canonical feature order.
  schema.canonicalize(v);
  return join(v, ";");
}

std::set<std::string> parse_set(std::string_view s) {
  std::set<std::string> out;
  if (s == "_" || s.empty()) return out;
  for (auto& f : split(s, ';'))
    if (!f.empty()) out.insert(f);
  return out;
}

std::string trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return std::string(s);
}

std::set<std::string> tag_set(const MorphTag& t) {
  std::set<std::string> s(t.features.begin(), t.features.end());
  s.insert(t.pos);
  return s;
}

std::size_t symmetric_difference_size(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::vector<std::string> d;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(d));
  return d.size();
}

}  // namespace

std::string PostEditRule::render(const UmSchema& schema) const {
  return render_set(match, schema) + " -> " + render_set(remove, schema) + " / " + render_set(add, schema) + "\t" +
         std::to_string(support);
}

PostEditRule PostEditRule::parse(std::string_view line) {
  auto tab = line.rfind('\t');
  if (tab == std::string_view::npos) throw DataError("post-edit rule without support column: '" + std::string(line) + "'");
  std::string_view body = line.substr(0, tab);
  std::string support = trim(line.substr(tab + 1));
  auto arrow = body.find("->");
  auto slash = body.find('/', arrow == std::string_view::npos ? 0 : arrow);
  if (arrow == std::string_view::npos || slash == std::string_view::npos)
    throw DataError("post-edit rule must read 'match -> remove / add': '" + std::string(line) + "'");
  PostEditRule r;
  r.match = parse_set(trim(body.substr(0, arrow)));
  r.remove = parse_set(trim(body.substr(arrow + 2, slash - arrow - 2)));
  r.add = parse_set(trim(body.substr(slash + 1)));
  try {
    r.support = static_cast<std::size_t>(std::stoull(support));
  } catch (const std::exception&) {
    throw DataError("post-edit rule support is not an integer: '" + support + "'");
  }
  return r;
}

ConversionTable ConversionTable::parse(std::string_view text, const std::string& source) {
  ConversionTable t;
  t.upos_map.clear();
  std::string section;
  std::string dims;
  auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      if (section != "dimensions" && section != "upos" && section != "features" && section != "rules")
        throw ParseError(source, i + 1, "unknown section [" + section + "]");
      continue;
    }
    try {
      if (section == "dimensions") {
        dims += line;
        dims += '\n';
      } else if (section == "upos" || section == "features") {
        auto cols = split(line, '\t');
        if (cols.size() != 2) throw ParseError(source, i + 1, "expected 2 tab-separated columns");
        if (section == "upos")
          t.upos_map[cols[0]] = cols[1];
        else
          t.feature_map[cols[0]] = cols[1];
      } else if (section == "rules") {
        t.postedit_rules.push_back(PostEditRule::parse(line));
      } else {
        throw ParseError(source, i + 1, "line outside of any section");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const DataError& e) {
      throw ParseError(source, i + 1, e.what());
    }
  }
  if (!dims.empty()) t.schema = UmSchema::from_tsv(dims);
  t.check();
  return t;
}

ConversionTable ConversionTable::load(const std::string& path) { return parse(read_text(path), path); }

const ConversionTable& ConversionTable::bundled() {
  static const ConversionTable table = parse(detail::kBundledTable, "<bundled ud_um.map>");
  return table;
}

void ConversionTable::check() const {
  for (const auto& [upos, um] : upos_map)
    if (um != kNone && !schema.is_pos(um)) throw DataError("upos_map: '" + um + "' (for " + upos + ") is not a UM POS");
  for (const auto& [ud, um] : feature_map)
    if (um != kDrop && !schema.contains(um))
      throw DataError("feature_map: '" + um + "' (for " + ud + ") is outside the dimension vocabulary");
  for (const auto& r : postedit_rules)
    for (const auto& f : r.add)
      if (!schema.contains(f)) throw DataError("post-edit rule adds '" + f + "' outside the dimension vocabulary");
}

std::string ConversionTable::serialize() const {
  std::string out;
  if (!(schema == UmSchema::bundled())) {
    out += "[dimensions]\n";
    out += schema.to_tsv();
    out += '\n';
  }
  out += "[upos]\n";
  for (const auto& [k, v] : upos_map) out += k + '\t' + v + '\n';
  out += "\n[features]\n";
  for (const auto& [k, v] : feature_map) out += k + '\t' + v + '\n';
  out += "\n[rules]\n";
  for (const auto& r : postedit_rules) out += r.render(schema) + '\n';
  return out;
}

ConversionTable passthrough_table(const Treebank& tb, const ConversionTable& base) {
  std::set<std::string> seen;
  for (const auto& s : tb.sentences)
    for (const auto& t : s.tokens)
      for (const auto& [name, value] : t.feats) seen.insert(name + "=" + value);
  std::vector<UmSchema::Dimension> dims = base.schema.dimensions();
  dims.push_back({"UDFeats", std::vector<std::string>(seen.begin(), seen.end())});
  ConversionTable t;
  t.schema = UmSchema(std::move(dims));
  t.upos_map = base.upos_map;
  for (const auto& f : seen) t.feature_map[f] = f;
  return t;
}

Conversion convert(std::string_view upos, const Feats& feats, const ConversionTable& table) {
  Conversion out;
  auto it = table.upos_map.find(std::string(upos));
  if (it == table.upos_map.end() || it->second == kNone) return out;

  MorphTag tag;
  tag.pos = it->second;
  for (const auto& [name, value] : feats) {
    std::string key = name + "=" + value;
    auto f = table.feature_map.find(key);
    if (f == table.feature_map.end()) {
      out.unmapped.push_back(std::move(key));
    } else if (f->second == kDrop) {
      out.dropped.push_back(std::move(key));
    } else if (table.schema.is_pos(f->second)) {
      tag.pos = f->second;
    } else if (std::find(tag.features.begin(), tag.features.end(), f->second) == tag.features.end()) {
      tag.features.push_back(f->second);
    }
  }

  for (const auto& rule : table.postedit_rules) {
    auto present = tag_set(tag);
    if (!std::includes(present.begin(), present.end(), rule.match.begin(), rule.match.end())) continue;
    std::erase_if(tag.features, [&](const std::string& f) { return rule.remove.contains(f); });
    for (const auto& f : rule.add)
      if (std::find(tag.features.begin(), tag.features.end(), f) == tag.features.end()) tag.features.push_back(f);
  }
  table.schema.canonicalize(tag.features);
  out.tag = std::move(tag);
  return out;
}

std::optional<MorphTag> ud_to_um(std::string_view upos, const Feats& feats, const ConversionTable& table) {
  return convert(upos, feats, table).tag;
}

namespace {

struct Anchor {
  const Token* token;
  const std::vector<MorphTag>* gold;
};

const MorphTag* closest_gold(const MorphTag& converted, const std::vector<MorphTag>& gold) {
  const MorphTag* best = nullptr;
  std::size_t best_d = 0;
  auto t = tag_set(converted);
  for (const auto& g : gold) {
    if (g.pos != converted.pos) continue;
    std::size_t d = symmetric_difference_size(t, tag_set(g));
    if (!best || d < best_d) {
      best = &g;
      best_d = d;
    }
  }
  return best;
}

double anchor_accuracy(const std::vector<Anchor>& anchors, const ConversionTable& table) {
  if (anchors.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& a : anchors) {
    auto tag = ud_to_um(a.token->upos, a.token->feats, table);
    if (!tag) continue;
    const MorphTag* g = closest_gold(*tag, *a.gold);
    if (g && *g == *tag) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(anchors.size());
}

}  // namespace

std::vector<PostEditRule> induce_postedit_rules(const Treebank& ud, const UMLexicon& um, const ConversionTable& table,
                                                std::size_t min_support, std::size_t max_iters, InductionTrace* trace) {
  if (!ud.language.empty() && !um.language.empty() && ud.language != um.language)
    warn("induce_postedit_rules: treebank language '" + ud.language + "' differs from UM language '" + um.language + "'");

  std::map<std::pair<std::string, std::string>, std::vector<MorphTag>> gold_index;
  for (const auto& t : um.triples) {
    auto& tags = gold_index[{t.lemma, t.form}];
    if (std::find(tags.begin(), tags.end(), t.tag) == tags.end()) tags.push_back(t.tag);
  }

  // Anchors: tokens whose (lemma, form) is attested in UM with a tag of the
  // same POS as the converted tag. Rules never touch the POS, so this set is
  // fixed across iterations.
  std::vector<Anchor> anchors;
  for (const auto& s : ud.sentences)
    for (const auto& tok : s.tokens) {
      auto it = gold_index.find({tok.lemma, tok.form});
      if (it == gold_index.end()) continue;
      auto tag = ud_to_um(tok.upos, tok.feats, table);
      if (!tag || !closest_gold(*tag, it->second)) continue;
      anchors.push_back({&tok, &it->second});
    }

  if (trace) {
    trace->anchors = anchors.size();
    trace->accuracy.clear();
  }
  std::vector<PostEditRule> learned;
  if (anchors.empty()) {
    warn("induce_postedit_rules: no (lemma, form) pair shared between treebank and UM lexicon");
    return learned;
  }

  ConversionTable working = table;
  double accuracy = anchor_accuracy(anchors, working);
  if (trace) trace->accuracy.push_back(accuracy);

  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    using Key = std::tuple<std::set<std::string>, std::set<std::string>, std::set<std::string>>;
    std::map<Key, std::size_t> diffs;
    for (const auto& a : anchors) {
      auto tag = ud_to_um(a.token->upos, a.token->feats, working);
      const MorphTag* g = closest_gold(*tag, *a.gold);
      if (*g == *tag) continue;
      auto t = tag_set(*tag);
      auto gs = tag_set(*g);
      std::set<std::string> remove, add;
      std::set_difference(t.begin(), t.end(), gs.begin(), gs.end(), std::inserter(remove, remove.end()));
      std::set_difference(gs.begin(), gs.end(), t.begin(), t.end(), std::inserter(add, add.end()));
      // Only features inside the vocabulary can be added.
      std::erase_if(add, [&](const std::string& f) { return !working.schema.contains(f); });
      if (remove.empty() && add.empty()) continue;
      ++diffs[{std::move(t), std::move(remove), std::move(add)}];
    }

    // Strongest diff per converted tag.
    std::map<std::set<std::string>, PostEditRule> best;
    for (const auto& [key, count] : diffs) {
      const auto& [match, remove, add] = key;
      auto it = best.find(match);
      if (it == best.end() || count > it->second.support) best[match] = PostEditRule{match, remove, add, count};
    }
    std::vector<PostEditRule> candidates;
    for (auto& [match, rule] : best)
      if (rule.support >= min_support) candidates.push_back(rule);
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const PostEditRule& a, const PostEditRule& b) { return a.support > b.support; });

    bool accepted = false;
    for (const auto& cand : candidates) {
      bool known = std::any_of(working.postedit_rules.begin(), working.postedit_rules.end(),
                               [&](const PostEditRule& r) { return r.same_edit(cand); });
      if (known) continue;
      working.postedit_rules.push_back(cand);
      double next = anchor_accuracy(anchors, working);
      if (next > accuracy) {
        accuracy = next;
        learned.push_back(cand);
        accepted = true;
      } else {
        working.postedit_rules.pop_back();
      }
    }
    if (trace) trace->accuracy.push_back(accuracy);
    if (!accepted) break;
  }
  return learned;
}

ConversionReport conversion_report(const Treebank& ud, const ConversionTable& table) {
  ConversionReport r;
  for (const auto& s : ud.sentences)
    for (const auto& tok : s.tokens) {
      ++r.tokens_total;
      auto c = convert(tok.upos, tok.feats, table);
      if (!c.tag) {
        ++r.none_pos;
        continue;
      }
      ++r.converted;
      for (const auto& f : c.dropped) ++r.dropped_features[f];
      for (const auto& f : c.unmapped) ++r.dropped_features[f];
    }
  return r;
}

std::string ConversionReport::to_text() const {
  std::ostringstream os;
  os << "tokens_total=" << tokens_total << '\n'
     << "converted=" << converted << '\n'
     << "none_pos=" << none_pos << '\n';
  for (const auto& [f, n] : dropped_features) os << "dropped\t" << f << '\t' << n << '\n';
  return os.str();
}

}  // namespace xinfl

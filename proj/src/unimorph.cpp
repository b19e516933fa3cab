#include "xinfl/unimorph.hpp"

#include <algorithm>
#include <unordered_set>

#include "xinfl/error.hpp"
#include "xinfl/random.hpp"
#include "xinfl/text.hpp"

namespace xinfl {
namespace {

// Dimension<TAB>value,value,...
constexpr std::string_view kBundledSchema =
    "POS\tN,PROPN,V,V.PTCP,V.CVB,V.MSDR,ADJ,ADV,ADP,ART,AUX,CLF,COMP,CONJ,DET,INTJ,NUM,PART,PRO\n"
    "Finiteness\tFIN,NFIN\n"
    "Mood\tIND,SBJV,IMP,COND,OPT,POT,IRR,REAL,ADM,OBLIG,PURP\n"
    "Tense\tPST,PRS,FUT,RCT,RMT,HOD\n"
    "Aspect\tIPFV,PFV,PRF,PROG,HAB,ITER,PROSP,DUR\n"
    "Voice\tACT,PASS,MID,CAUS,RECP\n"
    "Evidentiality\tFH,NFH,QUOT,RPRT,INFR\n"
    "Person\t0,1,2,3,INCL,EXCL,PRX,OBV\n"
    "Gender\tMASC,FEM,NEUT\n"
    "Animacy\tANIM,INAN,HUM,NHUM\n"
    "Case\tNOM,ACC,ERG,ABS,GEN,DAT,INS,COM,VOC,ESS,TRANS,FRML,PRT,ABE,PRIV,BEN,PROL,"
    "IN+ESS,IN+ALL,IN+ABL,AT+ESS,AT+ALL,AT+ABL,ON+ESS,ON+ALL,ON+ABL,LOC\n"
    "Number\tSG,PL,DU,TRI,PAUC\n"
    "Definiteness\tDEF,INDF,SPEC,NSPEC\n"
    "Comparison\tCMPR,SPRL,EQT\n"
    "Polarity\tPOS,NEG\n"
    "Politeness\tINFM,FORM,POL\n"
    "Possession\tPSS1S,PSS2S,PSS3S,PSS1P,PSS2P,PSS3P,PSSD\n"
    "Interrogativity\tDECL,INT\n"
    "Valency\tINTR,TR,DITR\n"
    "Deixis\tPROX,MED,REMT\n";

constexpr std::string_view kBundledPosMap =
    "N\tNOUN,PROPN\n"
    "PROPN\tPROPN\n"
    "V\tVERB,AUX\n"
    "V.PTCP\tVERB\n"
    "V.CVB\tVERB\n"
    "V.MSDR\tVERB\n"
    "ADJ\tADJ\n"
    "A\tADJ\n"
    "ADV\tADV\n"
    "PRO\tPRON\n"
    "DET\tDET\n"
    "NUM\tNUM\n";

UmSchema parse_schema(std::string_view text) {
  std::vector<UmSchema::Dimension> dims;
  for (auto& line : split_lines(text)) {
    if (line.empty() || line[0] == '#') continue;
    auto cols = split(line, '\t');
    if (cols.size() != 2) throw DataError("UM schema line must be Dimension<TAB>values: '" + line + "'");
    dims.push_back({cols[0], split(cols[1], ',')});
  }
  return UmSchema(std::move(dims));
}

}  // namespace

UmSchema::UmSchema(std::vector<Dimension> dims) : dims_(std::move(dims)) {
  if (dims_.empty() || dims_.front().name != "POS") throw DataError("UM schema must start with the POS dimension");
  for (int d = 0; d < static_cast<int>(dims_.size()); ++d)
    for (int v = 0; v < static_cast<int>(dims_[d].values.size()); ++v) index_.emplace(dims_[d].values[v], std::make_pair(d, v));
}

const UmSchema& UmSchema::bundled() {
  static const UmSchema schema = parse_schema(kBundledSchema);
  return schema;
}

UmSchema UmSchema::from_tsv(std::string_view text) { return parse_schema(text); }

std::string UmSchema::to_tsv() const {
  std::string out;
  for (const auto& d : dims_) {
    out += d.name;
    out += '\t';
    out += join(d.values, ",");
    out += '\n';
  }
  return out;
}

std::optional<std::pair<int, int>> UmSchema::rank(std::string_view feature) const {
  auto it = index_.find(feature);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool UmSchema::is_pos(std::string_view feature) const {
  auto r = rank(feature);
  return r && r->first == 0;
}

bool UmSchema::contains(std::string_view feature) const { return index_.find(feature) != index_.end(); }

void UmSchema::canonicalize(std::vector<std::string>& features) const {
  std::stable_sort(features.begin(), features.end(), [this](const std::string& a, const std::string& b) {
    auto ra = rank(a);
    auto rb = rank(b);
    if (ra && rb) return *ra < *rb;
    return ra.has_value() && !rb.has_value();
  });
}

MorphTag MorphTag::parse(std::string_view tag, const UmSchema& schema) {
  MorphTag out;
  if (tag.empty()) return out;
  auto parts = split(tag, ';');
  std::size_t pos_index = 0;
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (schema.is_pos(parts[i])) {
      pos_index = i;
      break;
    }
  out.pos = parts[pos_index];
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (i != pos_index && !parts[i].empty()) out.features.push_back(parts[i]);
  schema.canonicalize(out.features);
  return out;
}

std::string MorphTag::render() const {
  std::string out = pos;
  for (const auto& f : features) {
    out += ';';
    out += f;
  }
  return out;
}

std::size_t UMLexicon::distinct_lemmas() const {
  std::unordered_set<std::string> lemmas;
  for (const auto& t : triples) lemmas.insert(t.lemma);
  return lemmas.size();
}

UMLexicon load_um(std::string_view text, const std::string& language, const std::string& source) {
  UMLexicon lex;
  lex.language = language;
  auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto cols = split(lines[i], '\t');
    if (cols.size() != 3)
      throw ParseError(source, i + 1, "expected 3 tab-separated columns, found " + std::to_string(cols.size()));
    if (cols[0].empty() || cols[1].empty()) {
      warn(source + ":" + std::to_string(i + 1) + ": empty lemma or form, line skipped");
      continue;
    }
    lex.triples.push_back({cols[0], cols[1], MorphTag::parse(cols[2])});
  }
  return lex;
}

UMLexicon load_um_file(const std::string& path, const std::string& language) {
  return load_um(read_text(path), language, path);
}

std::string write_um(const UMLexicon& lex) {
  std::string out;
  for (const auto& t : lex.triples) {
    out += t.lemma;
    out += '\t';
    out += t.form;
    out += '\t';
    out += t.tag.render();
    out += '\n';
  }
  return out;
}

UMLexicon concat_dialects(std::span<const UMLexicon> lexicons, const std::string& language) {
  if (lexicons.empty()) throw UsageError("concat_dialects: empty lexicon list");
  UMLexicon out;
  out.language = language;
  for (const auto& lex : lexicons) out.triples.insert(out.triples.end(), lex.triples.begin(), lex.triples.end());
  return out;
}

UMLexicon deduplicate(const UMLexicon& lex) {
  UMLexicon out;
  out.language = lex.language;
  std::unordered_set<std::string> seen;
  for (const auto& t : lex.triples) {
    std::string key = t.lemma + '\t' + t.form + '\t' + t.tag.render();
    if (seen.insert(std::move(key)).second) out.triples.push_back(t);
  }
  return out;
}

UMSplit split_um(const UMLexicon& lex, std::uint64_t seed) {
  UMLexicon dedup = deduplicate(lex);
  const std::size_t n = dedup.size();
  if (n < 10) throw UsageError("split_um: need at least 10 distinct triples, got " + std::to_string(n));
  seeded_shuffle(dedup.triples, seed);

  const std::size_t n_train = (8 * n + 5) / 10;
  const std::size_t n_dev = (n + 5) / 10;
  UMSplit split;
  split.train.language = split.dev.language = split.test.language = lex.language;
  auto first = dedup.triples.begin();
  split.train.triples.assign(first, first + n_train);
  split.dev.triples.assign(first + n_train, first + n_train + n_dev);
  split.test.triples.assign(first + n_train + n_dev, dedup.triples.end());
  return split;
}

PosMap load_pos_map(std::string_view text, const std::string& source) {
  PosMap map;
  auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i][0] == '#') continue;
    auto cols = split(lines[i], '\t');
    if (cols.size() != 2) throw ParseError(source, i + 1, "expected UM-POS<TAB>UPOS[,UPOS...]");
    for (auto& upos : split(cols[1], ','))
      if (!upos.empty()) map[cols[0]].insert(upos);
  }
  return map;
}

PosMap load_pos_map_file(const std::string& path) { return load_pos_map(read_text(path), path); }

const PosMap& bundled_pos_map() {
  static const PosMap map = load_pos_map(kBundledPosMap, "<bundled pos_map>");
  return map;
}

std::set<std::string> covered_pos(const std::set<std::string>& um_pos, const PosMap& pos_map,
                                  std::vector<std::string>* unmapped) {
  std::set<std::string> out;
  for (const auto& p : um_pos) {
    auto it = pos_map.find(p);
    if (it == pos_map.end()) {
      warn("UM POS '" + p + "' has no UPOS mapping; skipped");
      if (unmapped) unmapped->push_back(p);
      continue;
    }
    out.insert(it->second.begin(), it->second.end());
  }
  return out;
}

std::set<std::string> covered_pos(const UMLexicon& lex, const PosMap& pos_map, std::vector<std::string>* unmapped) {
  std::set<std::string> um_pos;
  for (const auto& t : lex.triples) um_pos.insert(t.tag.pos);
  return covered_pos(um_pos, pos_map, unmapped);
}

}  // namespace xinfl

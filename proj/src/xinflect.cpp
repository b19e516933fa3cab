#include "xinfl/xinflect.hpp"

#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "xinfl/parallel.hpp"
#include "xinfl/text.hpp"

namespace xinfl {

double XInflectionStats::replacement_rate() const {
  return tokens_total == 0 ? 0.0 : static_cast<double>(tokens_replaced) / static_cast<double>(tokens_total);
}

XInflectionStats& XInflectionStats::operator+=(const XInflectionStats& o) {
  tokens_total += o.tokens_total;
  tokens_eligible += o.tokens_eligible;
  tokens_replaced += o.tokens_replaced;
  tokens_copied += o.tokens_copied;
  tokens_skipped_pos += o.tokens_skipped_pos;
  tokens_skipped_noconv += o.tokens_skipped_noconv;
  tokens_skipped_lemma += o.tokens_skipped_lemma;
  forms_changed += o.forms_changed;
  for (const auto& [k, v] : o.provenance_histogram) provenance_histogram[k] += v;
  return *this;
}

std::string XInflectionStats::to_text() const {
  std::ostringstream os;
  os << "tokens_total=" << tokens_total << '\n'
     << "tokens_eligible=" << tokens_eligible << '\n'
     << "tokens_replaced=" << tokens_replaced << '\n'
     << "tokens_copied=" << tokens_copied << '\n'
     << "tokens_skipped_pos=" << tokens_skipped_pos << '\n'
     << "tokens_skipped_noconv=" << tokens_skipped_noconv << '\n'
     << "tokens_skipped_lemma=" << tokens_skipped_lemma << '\n'
     << "forms_changed=" << forms_changed << '\n';
  for (const auto& [k, v] : provenance_histogram) os << "provenance." << k << '=' << v << '\n';
  return os.str();
}

std::string XInflectionStats::to_json() const {
  nlohmann::ordered_json j;
  j["tokens_total"] = tokens_total;
  j["tokens_eligible"] = tokens_eligible;
  j["tokens_replaced"] = tokens_replaced;
  j["tokens_copied"] = tokens_copied;
  j["tokens_skipped_pos"] = tokens_skipped_pos;
  j["tokens_skipped_noconv"] = tokens_skipped_noconv;
  j["tokens_skipped_lemma"] = tokens_skipped_lemma;
  j["forms_changed"] = forms_changed;
  j["replacement_rate"] = replacement_rate();
  j["provenance_histogram"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : provenance_histogram) j["provenance_histogram"][k] = v;
  return j.dump(2) + "\n";
}

namespace {

void mark_changed(std::string& misc) {
  if (misc.empty() || misc == "_")
    misc = kXInflectedMarker;
  else
    misc += "|" + std::string(kXInflectedMarker);
}

XInflectionStats xinflect_sentence(Sentence& s, const InflectorModel& model, const ConversionTable& table,
                                   const std::set<std::string>& covered) {
  XInflectionStats st;
  for (auto& tok : s.tokens) {
    ++st.tokens_total;
    if (tok.lemma.empty() || tok.lemma == "_") {
      ++st.tokens_skipped_lemma;
      continue;
    }
    if (!covered.contains(tok.upos)) {
      ++st.tokens_skipped_pos;
      continue;
    }
    auto tag = ud_to_um(tok.upos, tok.feats, table);
    if (!tag) {
      ++st.tokens_skipped_noconv;
      continue;
    }
    ++st.tokens_eligible;
    Inflection inf = inflect(model, tok.lemma, *tag);
    ++st.provenance_histogram[std::string(to_string(inf.provenance))];
    if (inf.provenance == Provenance::kCopy)
      ++st.tokens_copied;
    else
      ++st.tokens_replaced;

    std::string form = std::move(inf.form);
    if (tok.id == 1 && starts_upper(tok.form) && starts_lower(form)) form = capitalize_first(form);
    if (form != tok.form) {
      tok.form = std::move(form);
      mark_changed(tok.misc);
      ++st.forms_changed;
    }
  }
  return st;
}

}  // namespace

std::pair<Treebank, XInflectionStats> xinflect_treebank(const Treebank& source, const InflectorModel& model,
                                                        const ConversionTable& table,
                                                        const std::set<std::string>& covered,
                                                        const XInflectionOptions& options) {
  Treebank out = source;
  std::vector<XInflectionStats> per_sentence(out.sentences.size());
  parallel_for(out.sentences.size(), options.jobs,
               [&](std::size_t i) { per_sentence[i] = xinflect_sentence(out.sentences[i], model, table, covered); });
  XInflectionStats total;
  for (const auto& st : per_sentence) total += st;
  return {std::move(out), std::move(total)};
}

std::string xinflect_report(const XInflectionStats& stats) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f%% replaced", 100.0 * stats.replacement_rate());
  std::ostringstream os;
  os << buf << " (" << stats.tokens_replaced << "/" << stats.tokens_total << " tokens)\n"
     << "  eligible " << stats.tokens_eligible << ", copied " << stats.tokens_copied << ", forms changed "
     << stats.forms_changed << '\n'
     << "  skipped: pos " << stats.tokens_skipped_pos << ", no conversion " << stats.tokens_skipped_noconv
     << ", no lemma " << stats.tokens_skipped_lemma << '\n';
  for (const auto& [k, v] : stats.provenance_histogram) os << "  " << k << ' ' << v << '\n';
  return os.str();
}

}  // namespace xinfl

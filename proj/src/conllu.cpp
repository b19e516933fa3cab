#include "xinfl/conllu.hpp"

#include <algorithm>
#include <charconv>
#include <optional>

#include "xinfl/error.hpp"
#include "xinfl/text.hpp"

namespace xinfl {
namespace {

constexpr std::size_t kColumns = 10;

std::optional<int> to_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::string_view or_underscore(const std::string& s) { return s.empty() ? std::string_view("_") : s; }

}  // namespace

Feats parse_feats(std::string_view column) {
  Feats feats;
  if (column.empty() || column == "_") return feats;
  for (auto& item : split(column, '|')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      feats.emplace_back(item, "");
    else
      feats.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  sort_feats(feats);
  return feats;
}

void sort_feats(Feats& feats) {
  std::stable_sort(feats.begin(), feats.end(), [](const auto& a, const auto& b) { return iless(a.first, b.first); });
}

std::string render_feats(const Feats& feats) {
  if (feats.empty()) return "_";
  std::string out;
  for (std::size_t i = 0; i < feats.size(); ++i) {
    if (i) out += '|';
    out += feats[i].first;
    if (!feats[i].second.empty()) {
      out += '=';
      out += feats[i].second;
    }
  }
  return out;
}

std::string MultiwordToken::form() const {
  auto cols = split(line, '\t');
  return cols.size() > 1 ? cols[1] : std::string();
}

std::string MultiwordToken::misc() const {
  auto cols = split(line, '\t');
  return cols.size() == kColumns ? cols[9] : std::string();
}

std::vector<int> Sentence::heads() const {
  std::vector<int> h;
  h.reserve(tokens.size());
  for (const auto& t : tokens) h.push_back(t.head);
  return h;
}

std::size_t Treebank::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

Treebank read_conllu(std::string_view text, const std::string& name, const std::string& language) {
  Treebank tb;
  tb.name = name;
  tb.language = language;

  Sentence current;
  bool open = false;
  auto close = [&] {
    if (open) tb.sentences.push_back(std::move(current));
    current = Sentence{};
    open = false;
  };

  auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string& line = lines[ln];
    const std::size_t lineno = ln + 1;
    if (line.empty()) {
      close();
      continue;
    }
    open = true;
    if (line[0] == '#') {
      current.comments.push_back(line);
      continue;
    }
    auto cols = split(line, '\t');
    if (cols.size() != kColumns)
      throw ParseError(name, lineno, "expected 10 tab-separated columns, found " + std::to_string(cols.size()));

    const std::string& id = cols[0];
    if (auto dash = id.find('-'); dash != std::string::npos) {
      auto a = to_int(std::string_view(id).substr(0, dash));
      auto b = to_int(std::string_view(id).substr(dash + 1));
      if (!a || !b || *a < 1 || *b < *a) throw ParseError(name, lineno, "bad multiword token id '" + id + "'");
      current.mwts.push_back({*a, *b, line});
      continue;
    }
    if (auto dot = id.find('.'); dot != std::string::npos) {
      auto a = to_int(std::string_view(id).substr(0, dot));
      auto b = to_int(std::string_view(id).substr(dot + 1));
      if (!a || !b || *a < 0) throw ParseError(name, lineno, "bad empty node id '" + id + "'");
      current.empty_nodes.push_back({*a, line});
      continue;
    }

    auto tid = to_int(id);
    if (!tid) throw ParseError(name, lineno, "non-integer token id '" + id + "'");
    auto head = to_int(cols[6]);
    if (!head) throw ParseError(name, lineno, "non-integer head '" + cols[6] + "'");
    if (*tid != static_cast<int>(current.tokens.size()) + 1)
      throw ParseError(name, lineno, "token id " + id + " out of sequence");
    if (*head < 0) throw ParseError(name, lineno, "negative head");
    if (*head == *tid) throw ParseError(name, lineno, "token " + id + " is its own head");

    Token t;
    t.id = *tid;
    t.form = cols[1];
    t.lemma = cols[2];
    t.upos = cols[3];
    t.xpos = cols[4] == "_" ? std::string() : cols[4];
    t.feats = parse_feats(cols[5]);
    t.head = *head;
    t.deprel = cols[7];
    t.deps = cols[8];
    t.misc = cols[9];
    current.tokens.push_back(std::move(t));
  }
  close();
  return tb;
}

Treebank read_conllu_file(const std::string& path, const std::string& language) {
  return read_conllu(read_text(path), path, language);
}

void write_sentence(std::string& out, const Sentence& s) {
  for (const auto& c : s.comments) {
    out += c;
    out += '\n';
  }
  auto emit_empty = [&](int anchor) {
    for (const auto& e : s.empty_nodes)
      if (e.anchor == anchor) {
        out += e.line;
        out += '\n';
      }
  };
  emit_empty(0);
  for (const auto& t : s.tokens) {
    for (const auto& m : s.mwts)
      if (m.start == t.id) {
        out += m.line;
        out += '\n';
      }
    out += std::to_string(t.id);
    for (std::string_view col :
         {std::string_view(or_underscore(t.form)), or_underscore(t.lemma), or_underscore(t.upos), or_underscore(t.xpos)}) {
      out += '\t';
      out += col;
    }
    out += '\t';
    out += render_feats(t.feats);
    out += '\t';
    out += std::to_string(t.head);
    for (std::string_view col : {or_underscore(t.deprel), or_underscore(t.deps), or_underscore(t.misc)}) {
      out += '\t';
      out += col;
    }
    out += '\n';
    emit_empty(t.id);
  }
  // Payloads anchored past the last token (malformed but preserved).
  const int n = static_cast<int>(s.tokens.size());
  for (const auto& m : s.mwts)
    if (m.start > n) {
      out += m.line;
      out += '\n';
    }
  for (const auto& e : s.empty_nodes)
    if (e.anchor > n) {
      out += e.line;
      out += '\n';
    }
  out += '\n';
}

std::string write_conllu(const Treebank& tb) {
  std::string out;
  for (const auto& s : tb.sentences) write_sentence(out, s);
  return out;
}

std::vector<Violation> validate_heads(std::span<const int> heads) {
  std::vector<Violation> out;
  const int n = static_cast<int>(heads.size());
  if (n == 0) {
    out.push_back({ViolationKind::kEmpty, {}, "sentence has no tokens"});
    return out;
  }
  bool in_range = true;
  std::vector<int> roots;
  for (int i = 1; i <= n; ++i) {
    int h = heads[i - 1];
    if (h < 0 || h > n) {
      out.push_back({ViolationKind::kHeadOutOfRange, {i}, "token " + std::to_string(i) + " has head " + std::to_string(h) + " outside 0.." + std::to_string(n)});
      in_range = false;
    } else if (h == i) {
      out.push_back({ViolationKind::kSelfLoop, {i}, "token " + std::to_string(i) + " is its own head"});
      in_range = false;
    } else if (h == 0) {
      roots.push_back(i);
    }
  }
  if (roots.size() > 1) {
    std::string msg = "multiple roots:";
    for (int r : roots) msg += " " + std::to_string(r);
    out.push_back({ViolationKind::kMultipleRoots, roots, msg});
  }
  if (!in_range) return out;

  // 0 = unvisited, 1 = on current path, 2 = done.
  std::vector<int> state(n + 1, 0);
  state[0] = 2;
  for (int start = 1; start <= n; ++start) {
    std::vector<int> path;
    int x = start;
    while (state[x] == 0) {
      state[x] = 1;
      path.push_back(x);
      x = heads[x - 1];
    }
    if (state[x] == 1) {
      std::vector<int> cycle(std::find(path.begin(), path.end(), x), path.end());
      std::sort(cycle.begin(), cycle.end());
      std::string msg = "cycle:";
      for (int c : cycle) msg += " " + std::to_string(c);
      out.push_back({ViolationKind::kCycle, cycle, msg});
    }
    for (int p : path) state[p] = 2;
  }
  if (roots.empty() && out.empty()) out.push_back({ViolationKind::kCycle, {}, "no root"});
  return out;
}

std::vector<Violation> validate_tree(const Sentence& s) {
  auto h = s.heads();
  return validate_heads(h);
}

Treebank merge_treebanks(std::span<const Treebank> tbs, const std::string& name) {
  if (tbs.empty()) throw UsageError("merge_treebanks: empty treebank list");
  Treebank out;
  out.name = name;
  out.language = tbs.front().language;
  for (const auto& tb : tbs) {
    if (tb.language != out.language) out.language = "mul";
  }
  for (const auto& tb : tbs) out.sentences.insert(out.sentences.end(), tb.sentences.begin(), tb.sentences.end());
  return out;
}

}  // namespace xinfl

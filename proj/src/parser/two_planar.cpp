#include "xinfl/parser/two_planar.hpp"

#include <algorithm>
#include <deque>

namespace xinfl {

bool arcs_cross(const Arc& a, const Arc& b) {
  int a1 = std::min(a.head, a.dep), a2 = std::max(a.head, a.dep);
  int b1 = std::min(b.head, b.dep), b2 = std::max(b.head, b.dep);
  return (a1 < b1 && b1 < a2 && a2 < b2) || (b1 < a1 && a1 < b2 && b2 < a2);
}

PlaneAssignment plane_assignment(std::span<const Arc> input) {
  std::vector<Arc> arcs(input.begin(), input.end());
  std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) { return a.dep < b.dep; });
  const std::size_t m = arcs.size();

  std::vector<std::vector<std::size_t>> adj(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (arcs_cross(arcs[i], arcs[j])) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }

  // 0 = plane1, 1 = plane2, 2 = dropped.
  std::vector<int> plane(m, -1);
  std::vector<int> component(m, -1);
  int n_components = 0;
  for (std::size_t s = 0; s < m; ++s) {
    if (component[s] != -1) continue;
    std::vector<std::size_t> members;
    std::deque<std::size_t> queue{s};
    component[s] = n_components;
    while (!queue.empty()) {
      auto u = queue.front();
      queue.pop_front();
      members.push_back(u);
      for (auto v : adj[u])
        if (component[v] == -1) {
          component[v] = n_components;
          queue.push_back(v);
        }
    }
    ++n_components;
    std::sort(members.begin(), members.end());

    auto root_it = std::find_if(members.begin(), members.end(), [&](std::size_t i) { return arcs[i].head == 0; });
    const std::size_t anchor = root_it != members.end() ? *root_it : members.front();

    // Exact 2-coloring by BFS from the anchor.
    std::vector<int> color(m, -1);
    color[anchor] = 0;
    std::deque<std::size_t> bfs{anchor};
    bool bipartite = true;
    while (!bfs.empty() && bipartite) {
      auto u = bfs.front();
      bfs.pop_front();
      for (auto v : adj[u]) {
        if (color[v] == -1) {
          color[v] = 1 - color[u];
          bfs.push_back(v);
        } else if (color[v] == color[u]) {
          bipartite = false;
          break;
        }
      }
    }
    if (bipartite) {
      for (auto i : members) plane[i] = color[i];
      continue;
    }

    std::vector<std::size_t> order = members;
    if (root_it != members.end()) {
      order.erase(std::find(order.begin(), order.end(), anchor));
      order.insert(order.begin(), anchor);
    }
    for (auto i : order) {
      auto crosses_plane = [&](int p) {
        return std::any_of(adj[i].begin(), adj[i].end(), [&](std::size_t j) { return plane[j] == p; });
      };
      if (!crosses_plane(0))
        plane[i] = 0;
      else if (!crosses_plane(1))
        plane[i] = 1;
      else
        plane[i] = 2;
    }
  }

  PlaneAssignment out;
  for (std::size_t i = 0; i < m; ++i) (plane[i] == 0 ? out.plane1 : plane[i] == 1 ? out.plane2 : out.dropped).push_back(arcs[i]);
  return out;
}

PlaneAssignment plane_assignment_from_heads(std::span<const int> heads) {
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < heads.size(); ++i) arcs.push_back({heads[i], static_cast<int>(i) + 1});
  return plane_assignment(arcs);
}

std::string BracketLabel::to_string() const {
  std::string out = plane1;
  for (char c : plane2) {
    out += c;
    out += '*';
  }
  out += '@';
  out += deprel;
  return out;
}

BracketLabel BracketLabel::parse(std::string_view s) {
  BracketLabel l;
  auto at = s.find('@');
  std::string_view brackets = s.substr(0, at);
  if (at != std::string_view::npos) l.deprel = std::string(s.substr(at + 1));
  for (std::size_t i = 0; i < brackets.size(); ++i) {
    if (i + 1 < brackets.size() && brackets[i + 1] == '*') {
      l.plane2 += brackets[i];
      ++i;
    } else {
      l.plane1 += brackets[i];
    }
  }
  return l;
}

namespace {

struct Counts {
  int left_open = 0;    // '<'
  int left_close = 0;   // '\'
  int right_open = 0;   // '/'
  int right_close = 0;  // '>'

  std::string render() const {
    return std::string(left_open, '<') + std::string(left_close, '\\') + std::string(right_open, '/') +
           std::string(right_close, '>');
  }
};

void add_arc(std::vector<Counts>& c, const Arc& a) {
  // c is indexed by token id; slot 0 is the virtual root and never rendered.
  if (a.head < a.dep) {
    ++c[a.head].right_open;
    ++c[a.dep].right_close;
  } else {
    ++c[a.dep].left_open;
    ++c[a.head].left_close;
  }
}

}  // namespace

EncodedSentence encode_2planar(std::span<const int> heads, std::span<const std::string> deprels) {
  const std::size_t n = heads.size();
  auto planes = plane_assignment_from_heads(heads);
  std::vector<Counts> p1(n + 1), p2(n + 1);
  for (const auto& a : planes.plane1) add_arc(p1, a);
  for (const auto& a : planes.plane2) add_arc(p2, a);
  EncodedSentence e;
  e.dropped_arcs = planes.dropped.size();
  for (std::size_t i = 1; i <= n; ++i)
    e.labels.push_back({p1[i].render(), p2[i].render(), i - 1 < deprels.size() ? deprels[i - 1] : std::string()});
  return e;
}

EncodedSentence encode_2planar(const Sentence& s) {
  std::vector<int> heads;
  std::vector<std::string> deprels;
  for (const auto& t : s.tokens) {
    heads.push_back(t.head);
    deprels.push_back(t.deprel);
  }
  return encode_2planar(heads, deprels);
}

DecodedTree decode_2planar(std::span<const BracketLabel> labels) {
  const int n = static_cast<int>(labels.size());
  DecodedTree out;
  out.heads.assign(n, -1);
  for (const auto& l : labels) out.deprels.push_back(l.deprel);
  if (n == 0) return out;

  // heads indexed by token id - 1; -1 = unassigned.
  auto& heads = out.heads;
  int explicit_root = 0;
  auto attach = [&](int h, int d) {
    if (heads[d - 1] != -1) return;
    for (int x = h; x != 0 && x != -1; x = heads[x - 1])
      if (x == d) return;  // would close a cycle
    heads[d - 1] = h;
    if (h == 0 && explicit_root == 0) explicit_root = d;
  };

  std::vector<int> right[2], left[2];
  right[0].push_back(0);  // virtual root opener, plane1 only
  for (int i = 1; i <= n; ++i) {
    const std::string* plane[2] = {&labels[i - 1].plane1, &labels[i - 1].plane2};
    for (int p = 0; p < 2; ++p)
      for (char c : *plane[p]) {
        if (c == '>' && !right[p].empty()) {
          int h = right[p].back();
          right[p].pop_back();
          attach(h, i);
        } else if (c == '\\' && !left[p].empty()) {
          int d = left[p].back();
          left[p].pop_back();
          attach(i, d);
        }
      }
    for (int p = 0; p < 2; ++p)
      for (char c : *plane[p]) {
        if (c == '<')
          left[p].push_back(i);
        else if (c == '/')
          right[p].push_back(i);
      }
  }

  for (auto& h : heads)
    if (h == -1) h = 0;
  int keep = explicit_root;
  if (keep == 0)
    for (int i = 1; i <= n; ++i)
      if (heads[i - 1] == 0) {
        keep = i;
        break;
      }
  for (int i = 1; i <= n; ++i)
    if (heads[i - 1] == 0 && i != keep) heads[i - 1] = keep;
  return out;
}

}  // namespace xinfl

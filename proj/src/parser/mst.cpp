#include "xinfl/parser/mst.hpp"

#include <limits>

namespace xinfl {
namespace {

using Matrix = std::vector<std::vector<double>>;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Returns the nodes of one cycle in the best-incoming graph, or empty.
std::vector<int> find_cycle(const std::vector<int>& head) {
  const int n = static_cast<int>(head.size());
  std::vector<int> state(n, 0);
  state[0] = 2;
  for (int s = 1; s < n; ++s) {
    std::vector<int> path;
    int x = s;
    while (state[x] == 0) {
      state[x] = 1;
      path.push_back(x);
      x = head[x];
    }
    if (state[x] == 1) {
      std::vector<int> cycle;
      bool in = false;
      for (int p : path) {
        if (p == x) in = true;
        if (in) cycle.push_back(p);
      }
      return cycle;
    }
    for (int p : path) state[p] = 2;
  }
  return {};
}

// score[h][d] over nodes 0..N-1, node 0 the root. Returns head per node
// (head[0] unused).
std::vector<int> chu_liu_edmonds(const Matrix& score) {
  const int n = static_cast<int>(score.size());
  std::vector<int> best(n, 0);
  for (int d = 1; d < n; ++d) {
    int arg = -1;
    for (int h = 0; h < n; ++h) {
      if (h == d) continue;
      if (arg == -1 || score[h][d] > score[arg][d]) arg = h;
    }
    best[d] = arg;
  }
  best[0] = 0;

  auto cycle = find_cycle(best);
  if (cycle.empty()) return best;

  std::vector<bool> in_cycle(n, false);
  for (int c : cycle) in_cycle[c] = true;
  std::vector<int> to_new(n, -1), to_old;
  for (int v = 0; v < n; ++v)
    if (!in_cycle[v]) {
      to_new[v] = static_cast<int>(to_old.size());
      to_old.push_back(v);
    }
  const int c = static_cast<int>(to_old.size());
  const int m = c + 1;

  Matrix contracted(m, std::vector<double>(m, kNegInf));
  std::vector<int> enter_at(m, -1);  // for u outside: cycle node entered
  std::vector<int> leave_from(m, -1);  // for v outside: cycle node it hangs from
  for (int u = 0; u < n; ++u) {
    if (in_cycle[u]) continue;
    for (int v = 1; v < n; ++v) {
      if (in_cycle[v] || u == v) continue;
      contracted[to_new[u]][to_new[v]] = score[u][v];
    }
    for (int v : cycle) {
      double s = score[u][v] - score[best[v]][v];
      if (enter_at[to_new[u]] == -1 || s > contracted[to_new[u]][c]) {
        contracted[to_new[u]][c] = s;
        enter_at[to_new[u]] = v;
      }
    }
  }
  for (int v = 1; v < n; ++v) {
    if (in_cycle[v]) continue;
    for (int u : cycle) {
      if (leave_from[to_new[v]] == -1 || score[u][v] > contracted[c][to_new[v]]) {
        contracted[c][to_new[v]] = score[u][v];
        leave_from[to_new[v]] = u;
      }
    }
  }

  auto sub = chu_liu_edmonds(contracted);
  std::vector<int> head = best;
  for (int v = 1; v < n; ++v) {
    if (in_cycle[v]) continue;
    int h = sub[to_new[v]];
    head[v] = h == c ? leave_from[to_new[v]] : to_old[h];
  }
  const int entering_from = sub[c];
  head[enter_at[entering_from]] = to_old[entering_from];
  return head;
}

}  // namespace

std::vector<int> mst_decode(const ScoreMatrix& scores) {
  const int n = scores.size();
  Matrix m(n + 1, std::vector<double>(n + 1, kNegInf));
  for (int h = 0; h <= n; ++h)
    for (int d = 1; d <= n; ++d)
      if (h != d) m[h][d] = scores(h, d);
  auto head = chu_liu_edmonds(m);
  return {head.begin() + 1, head.end()};
}

double tree_score(const ScoreMatrix& scores, std::span<const int> heads) {
  double total = 0.0;
  for (std::size_t d = 1; d <= heads.size(); ++d) total += scores(heads[d - 1], static_cast<int>(d));
  return total;
}

std::vector<int> enforce_single_root(std::vector<int> heads) {
  int first = 0;
  for (std::size_t i = 0; i < heads.size(); ++i) {
    if (heads[i] != 0) continue;
    if (first == 0)
      first = static_cast<int>(i) + 1;
    else
      heads[i] = first;
  }
  return heads;
}

}  // namespace xinfl

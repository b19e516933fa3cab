#pragma once

#include <span>
#include <vector>

namespace xinfl {

// Arc scores for a sentence of n tokens: (h, d) with h in 0..n (0 = root)
// and d in 1..n.
class ScoreMatrix {
 public:
  explicit ScoreMatrix(int n) : n_(n), data_(static_cast<std::size_t>((n + 1) * (n + 1)), 0.0) {}

  int size() const { return n_; }
  double& operator()(int head, int dep) { return data_[static_cast<std::size_t>(head * (n_ + 1) + dep)]; }
  double operator()(int head, int dep) const { return data_[static_cast<std::size_t>(head * (n_ + 1) + dep)]; }

 private:
  int n_;
  std::vector<double> data_;
};

// Maximum-score arborescence rooted at 0 (Chu-Liu/Edmonds), any number of
// root children. heads[d-1] is the head of token d. Among equal-score
// incoming arcs the smaller head index wins.
std::vector<int> mst_decode(const ScoreMatrix& scores);

// Sum of scores(heads[d-1], d) for d = 1..n, in index order.
double tree_score(const ScoreMatrix& scores, std::span<const int> heads);

// Keeps the leftmost root child on the root and re-attaches every other
// root child to it.
std::vector<int> enforce_single_root(std::vector<int> heads);

}  // namespace xinfl

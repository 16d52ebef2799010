#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "cliptrack/error.hpp"

namespace cliptrack {

// Finite sentinel for pairs that must never be matched (e.g. cross-class
// candidates). Kept finite so matrices stay inside the solver's
// finite-values contract.
inline constexpr double kForbiddenSimilarity = -1e30;

inline bool is_forbidden_similarity(double v) { return v <= -1e29; }

// Dense similarity matrix between M row entities and N column entities,
// higher is better. Keys are opaque caller identifiers carried through to
// the assignment output.
struct SimilarityMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;  // row-major
  std::vector<std::int64_t> row_keys;
  std::vector<std::int64_t> col_keys;

  static SimilarityMatrix make(int rows, int cols) {
    SimilarityMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.values.assign(static_cast<std::size_t>(rows) * cols, 0.0);
    m.row_keys.resize(rows);
    m.col_keys.resize(cols);
    for (int r = 0; r < rows; ++r) m.row_keys[r] = r;
    for (int c = 0; c < cols; ++c) m.col_keys[c] = c;
    return m;
  }

  double at(int r, int c) const {
    return values[static_cast<std::size_t>(r) * cols + c];
  }
  void set(int r, int c, double v) {
    values[static_cast<std::size_t>(r) * cols + c] = v;
  }

  std::int64_t size() const {
    return static_cast<std::int64_t>(rows) * cols;
  }
};

struct AssignedPair {
  std::int64_t row_key = 0;
  std::int64_t col_key = 0;
  double similarity = 0.0;

  friend bool operator==(const AssignedPair&, const AssignedPair&) = default;
};

struct Assignment {
  std::vector<AssignedPair> pairs;  // ordered by row index
  std::vector<std::int64_t> unmatched_rows;
  std::vector<std::int64_t> unmatched_cols;

  double total() const {
    double sum = 0.0;
    for (const auto& p : pairs) sum += p.similarity;
    return sum;
  }
};

namespace detail {

// Square-matrix minimization via shortest augmenting paths with potentials
// (Kuhn-Munkres). cost is n*n row-major; fills col_of_row.
inline void solve_min_square(const std::vector<double>& cost, int n,
                             std::vector<int>& col_of_row) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur =
            cost[static_cast<std::size_t>(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  col_of_row.assign(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] != 0) col_of_row[p[j] - 1] = j - 1;
}

struct SubSolution {
  int cardinality = 0;
  double total = 0.0;
};

// Maximum-cardinality, then maximum-total matching over the active
// rows/cols of m. Forbidden cells and square padding share one large
// uniform cost, so the minimizer uses them only when unavoidable; a power
// of two keeps the potential arithmetic exact for grid-valued inputs.
inline SubSolution solve_submatrix(const SimilarityMatrix& m,
                                   const std::vector<int>& active_rows,
                                   const std::vector<int>& active_cols,
                                   std::vector<int>* col_of_row = nullptr) {
  const int nr = static_cast<int>(active_rows.size());
  const int nc = static_cast<int>(active_cols.size());
  if (col_of_row) col_of_row->assign(nr, -1);
  if (nr == 0 || nc == 0) return {};
  const int n = std::max(nr, nc);

  double max_abs = 1.0;
  for (int r : active_rows)
    for (int c : active_cols) {
      const double v = m.at(r, c);
      if (!is_forbidden_similarity(v)) max_abs = std::max(max_abs, std::fabs(v));
    }
  const double big = std::exp2(std::ceil(std::log2(2.0 * n * max_abs + 1.0)));

  std::vector<double> cost(static_cast<std::size_t>(n) * n, big);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) {
      const double v = m.at(active_rows[i], active_cols[j]);
      if (!is_forbidden_similarity(v))
        cost[static_cast<std::size_t>(i) * n + j] = -v;
    }

  std::vector<int> sol;
  solve_min_square(cost, n, sol);

  SubSolution out;
  for (int i = 0; i < nr; ++i) {
    const int j = sol[i];
    if (j < 0 || j >= nc) continue;
    const double v = m.at(active_rows[i], active_cols[j]);
    if (is_forbidden_similarity(v)) continue;
    ++out.cardinality;
    out.total += v;
    if (col_of_row) (*col_of_row)[i] = j;
  }
  return out;
}

}  // namespace detail

// One-to-one assignment maximizing cardinality first, then total
// similarity. Among equal-total optima the result is the lexicographically
// smallest by (row index, col index): each row in turn takes the lowest
// column that still permits an optimal completion.
inline Assignment hungarian_max(const SimilarityMatrix& matrix) {
  for (double v : matrix.values)
    if (!std::isfinite(v))
      fail("NonFiniteSimilarity", "similarity matrix contains NaN or infinity");

  std::vector<int> free_cols(matrix.cols);
  for (int c = 0; c < matrix.cols; ++c) free_cols[c] = c;

  Assignment result;
  std::vector<char> row_matched(matrix.rows, 0);
  for (int r = 0; r < matrix.rows; ++r) {
    std::vector<int> rest_rows;
    for (int rr = r + 1; rr < matrix.rows; ++rr) rest_rows.push_back(rr);

    // Option of leaving this row unmatched.
    detail::SubSolution best = detail::solve_submatrix(matrix, rest_rows, free_cols);
    int best_col = -1;

    for (std::size_t ci = 0; ci < free_cols.size(); ++ci) {
      const int c = free_cols[ci];
      const double v = matrix.at(r, c);
      if (is_forbidden_similarity(v)) continue;
      std::vector<int> rest_cols;
      rest_cols.reserve(free_cols.size() - 1);
      for (int cc : free_cols)
        if (cc != c) rest_cols.push_back(cc);
      const auto sub = detail::solve_submatrix(matrix, rest_rows, rest_cols);
      const int card = sub.cardinality + 1;
      const double total = sub.total + v;
      // A matched row beats the unmatched baseline on exact ties.
      const bool better =
          card > best.cardinality ||
          (card == best.cardinality &&
           (total > best.total || (total == best.total && best_col < 0)));
      if (better) {
        best = {card, total};
        best_col = c;
      }
    }

    if (best_col >= 0) {
      result.pairs.push_back(AssignedPair{matrix.row_keys[r],
                                          matrix.col_keys[best_col],
                                          matrix.at(r, best_col)});
      row_matched[r] = 1;
      free_cols.erase(std::find(free_cols.begin(), free_cols.end(), best_col));
    }
  }

  for (int r = 0; r < matrix.rows; ++r)
    if (!row_matched[r]) result.unmatched_rows.push_back(matrix.row_keys[r]);
  for (int c : free_cols) result.unmatched_cols.push_back(matrix.col_keys[c]);
  return result;
}

// Drops pairs whose similarity is not strictly above alpha; their keys move
// to the unmatched lists.
inline Assignment threshold_filter(const Assignment& assignment, double alpha) {
  Assignment out;
  out.unmatched_rows = assignment.unmatched_rows;
  out.unmatched_cols = assignment.unmatched_cols;
  for (const auto& pair : assignment.pairs) {
    if (pair.similarity > alpha) {
      out.pairs.push_back(pair);
    } else {
      out.unmatched_rows.push_back(pair.row_key);
      out.unmatched_cols.push_back(pair.col_key);
    }
  }
  return out;
}

}  // namespace cliptrack

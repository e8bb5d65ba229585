// Exact sparse linear algebra over a field: echelon spans, rank, kernels,
// linear solves. Matrices are Eigen sparse column-major containers; all
// elimination is done here with exact pivots (never by magnitude).
#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "sph/scalar.hpp"

namespace sph {

template <typename S>
using SpMat = Eigen::SparseMatrix<S, Eigen::ColMajor, int>;

template <typename S>
using SpVec = std::vector<std::pair<int, S>>;  // sorted by index, no zeros

template <typename S>
using Triplets = std::vector<Eigen::Triplet<S>>;

template <typename S>
SpMat<S> from_triplets(int rows, int cols, const Triplets<S>& t) {
  SpMat<S> m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.prune([](int, int, const S& v) { return !is_zero(v); });
  return m;
}

template <typename S>
void prune(SpMat<S>& m) {
  m.prune([](int, int, const S& v) { return !is_zero(v); });
}

template <typename S>
SpMat<S> identity(int n) {
  SpMat<S> m(n, n);
  m.setIdentity();
  return m;
}

template <typename S>
SpMat<S> product(const SpMat<S>& a, const SpMat<S>& b) {
  SpMat<S> c = (a * b).eval();
  prune(c);
  return c;
}

template <typename S>
SpMat<S> sum(const SpMat<S>& a, const SpMat<S>& b, const S& beta = S(1)) {
  SpMat<S> c = (a + b * beta).eval();
  prune(c);
  return c;
}

template <typename S>
bool is_zero_matrix(const SpMat<S>& m) {
  for (int k = 0; k < m.outerSize(); ++k)
    for (typename SpMat<S>::InnerIterator it(m, k); it; ++it)
      if (!is_zero(it.value())) return false;
  return true;
}

template <typename S>
bool equal(const SpMat<S>& a, const SpMat<S>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return is_zero_matrix<S>(sum<S>(a, b, S(-1)));
}

template <typename S>
SpVec<S> column(const SpMat<S>& m, int j) {
  SpVec<S> v;
  for (typename SpMat<S>::InnerIterator it(m, j); it; ++it)
    if (!is_zero(it.value())) v.emplace_back(static_cast<int>(it.row()), it.value());
  return v;
}

template <typename S>
SpMat<S> from_columns(int rows, const std::vector<SpVec<S>>& cols) {
  Triplets<S> t;
  for (int j = 0; j < static_cast<int>(cols.size()); ++j)
    for (const auto& [i, v] : cols[j]) t.emplace_back(i, j, v);
  return from_triplets<S>(rows, static_cast<int>(cols.size()), t);
}

/// Submatrix on the given row and column index lists (in that order).
template <typename S>
SpMat<S> submatrix(const SpMat<S>& m, const std::vector<int>& rows,
                   const std::vector<int>& cols) {
  std::vector<int> row_pos(m.rows(), -1);
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) row_pos[rows[i]] = i;
  Triplets<S> t;
  for (int j = 0; j < static_cast<int>(cols.size()); ++j)
    for (typename SpMat<S>::InnerIterator it(m, cols[j]); it; ++it)
      if (row_pos[it.row()] >= 0) t.emplace_back(row_pos[it.row()], j, it.value());
  return from_triplets<S>(static_cast<int>(rows.size()), static_cast<int>(cols.size()), t);
}

/// Incrementally built echelon basis of a span of sparse vectors. Optionally
/// tracks, for every pivot, its expression in terms of the inserted vectors.
template <typename S>
class EchelonSpan {
 public:
  explicit EchelonSpan(bool track = false) : track_(track) {}

  int rank() const { return static_cast<int>(pivots_.size()); }

  /// Inserts v (labelled `id` when tracking). Returns true if v was independent.
  bool insert(const SpVec<S>& v, int id = -1) {
    std::map<int, S> acc(v.begin(), v.end());
    std::map<int, S> combo;
    if (track_) combo[id] = S(1);
    reduce(acc, track_ ? &combo : nullptr, /*full=*/false);
    if (acc.empty()) {
      if (track_) dependencies_.emplace_back(id, to_vec(combo));
      return false;
    }
    const int lead = acc.begin()->first;
    const S inv = S(1) / acc.begin()->second;
    Row row;
    for (auto& [k, x] : acc) row.vec.emplace_back(k, x * inv);
    if (track_)
      for (auto& [k, x] : combo) row.combo.emplace_back(k, x * inv);
    pivots_.emplace(lead, std::move(row));
    return true;
  }

  /// Residual of v modulo the span (no entries at pivot columns).
  SpVec<S> residual(const SpVec<S>& v) const {
    std::map<int, S> acc(v.begin(), v.end());
    reduce(acc, nullptr, true);
    return to_vec(acc);
  }

  bool contains(const SpVec<S>& v) const { return residual(v).empty(); }

  /// Coefficients c with v = sum c[id] * inserted[id], if v lies in the span.
  std::optional<SpVec<S>> express(const SpVec<S>& v) const {
    std::map<int, S> acc(v.begin(), v.end());
    std::map<int, S> combo;
    reduce(acc, &combo, false);
    if (!acc.empty()) return std::nullopt;
    // reduce() accumulated -coefficients.
    SpVec<S> out;
    for (auto& [k, x] : combo)
      if (!is_zero(x)) out.emplace_back(k, -x);
    return out;
  }

  /// For every dependent inserted vector: (id, combination of ids equal to 0).
  const std::vector<std::pair<int, SpVec<S>>>& dependencies() const { return dependencies_; }

  std::vector<int> pivot_columns() const {
    std::vector<int> out;
    for (auto& [k, r] : pivots_) out.push_back(k);
    return out;
  }

 private:
  struct Row {
    SpVec<S> vec;
    SpVec<S> combo;
  };

  static SpVec<S> to_vec(const std::map<int, S>& m) {
    SpVec<S> out;
    for (auto& [k, x] : m)
      if (!is_zero(x)) out.emplace_back(k, x);
    return out;
  }

  // Eliminates pivot columns from acc in increasing order. When `combo` is
  // given, subtracts the matching multiples of the tracked combinations.
  // With full == false, stops at the first non-pivot entry.
  void reduce(std::map<int, S>& acc, std::map<int, S>* combo, bool full) const {
    auto it = acc.begin();
    while (it != acc.end()) {
      if (is_zero(it->second)) {
        it = acc.erase(it);
        continue;
      }
      auto p = pivots_.find(it->first);
      if (p == pivots_.end()) {
        if (!full) return;
        ++it;
        continue;
      }
      const S c = it->second;
      const int col = it->first;
      for (const auto& [k, x] : p->second.vec) {
        auto& slot = acc[k];
        slot -= c * x;
      }
      if (combo)
        for (const auto& [k, x] : p->second.combo) (*combo)[k] -= c * x;
      acc.erase(col);
      it = acc.lower_bound(col);
    }
  }

  bool track_;
  std::map<int, Row> pivots_;
  std::vector<std::pair<int, SpVec<S>>> dependencies_;
};

template <typename S>
int rank(const SpMat<S>& m) {
  EchelonSpan<S> span;
  for (int j = 0; j < m.cols(); ++j) span.insert(column<S>(m, j));
  return span.rank();
}

/// Indices of the columns of m chosen greedily left-to-right as a basis of
/// its column space.
template <typename S>
std::vector<int> independent_columns(const SpMat<S>& m) {
  EchelonSpan<S> span;
  std::vector<int> out;
  for (int j = 0; j < m.cols(); ++j)
    if (span.insert(column<S>(m, j))) out.push_back(j);
  return out;
}

/// Basis of the null space of m, one column per dependent column j of m; the
/// vector for j has coefficient 1 at j and 0 at every other dependent column.
template <typename S>
struct Kernel {
  SpMat<S> basis;
  std::vector<int> free_columns;
};

template <typename S>
Kernel<S> kernel(const SpMat<S>& m) {
  EchelonSpan<S> span(true);
  for (int j = 0; j < m.cols(); ++j) span.insert(column<S>(m, j), j);
  std::vector<SpVec<S>> cols;
  Kernel<S> k;
  for (const auto& [id, combo] : span.dependencies()) {
    k.free_columns.push_back(id);
    cols.push_back(combo);
  }
  k.basis = from_columns<S>(static_cast<int>(m.cols()), cols);
  return k;
}

/// Some X with A X = B, or nullopt if the system is inconsistent.
template <typename S>
std::optional<SpMat<S>> solve(const SpMat<S>& a, const SpMat<S>& b) {
  EchelonSpan<S> span(true);
  for (int j = 0; j < a.cols(); ++j) span.insert(column<S>(a, j), j);
  std::vector<SpVec<S>> cols;
  for (int j = 0; j < b.cols(); ++j) {
    auto x = span.express(column<S>(b, j));
    if (!x) return std::nullopt;
    cols.push_back(*x);
  }
  return from_columns<S>(static_cast<int>(a.cols()), cols);
}

/// Coordinates with respect to a fixed basis (the columns of `basis`).
template <typename S>
class Coordinates {
 public:
  Coordinates() = default;
  explicit Coordinates(const SpMat<S>& basis) : span_(true), dim_(static_cast<int>(basis.cols())) {
    for (int j = 0; j < basis.cols(); ++j)
      if (!span_.insert(column<S>(basis, j), j))
        throw std::invalid_argument("Coordinates: basis columns are dependent");
  }
  int dim() const { return dim_; }
  std::optional<SpVec<S>> of(const SpVec<S>& v) const { return span_.express(v); }
  /// Coordinates of every column of m; throws if some column leaves the span.
  SpMat<S> of(const SpMat<S>& m) const {
    std::vector<SpVec<S>> cols;
    for (int j = 0; j < m.cols(); ++j) {
      auto c = span_.express(column<S>(m, j));
      if (!c) throw std::logic_error("Coordinates: vector outside the subspace");
      cols.push_back(*c);
    }
    return from_columns<S>(dim_, cols);
  }

 private:
  EchelonSpan<S> span_{true};
  int dim_ = 0;
};

}  // namespace sph

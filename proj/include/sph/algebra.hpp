// Basis-presented dg-algebras.
//
// An algebra is stored by its left multiplication matrices: left[i] is the
// matrix of x -> e_i x. The unit is a vector (so that k x k has unit e1 + e2).
// `idempotents` lists basis elements forming a complete set of orthogonal
// idempotents; when every basis element r satisfies e_i r e_j = r for a single
// pair (i, j) the basis is idempotent-homogeneous, which the module calculus
// exploits to keep tensor products and Hom spaces small.
#pragma once

#include <cstdlib>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sph/graded.hpp"

namespace sph {

template <typename S>
struct DgAlgebra {
  std::string name;
  GradedSpace space;
  SpMat<S> d;
  std::vector<SpMat<S>> left;
  SpVec<S> unit;
  std::vector<int> idempotents;
  std::vector<std::string> labels;
  // Set on truncation stand-ins: the smallest |degree| at which this algebra
  // stops agreeing with the one it models.
  std::optional<int> artifact;

  // Filled by finalize().
  std::vector<SpMat<S>> right;  // right[j]: x -> x e_j
  std::vector<int> lidem, ridem;  // position in `idempotents`, or -1

  int dim() const { return space.dim(); }
  int degree(int i) const { return space.degree(i); }
  bool homogeneous() const {
    for (int i = 0; i < dim(); ++i)
      if (lidem[i] < 0 || ridem[i] < 0) return false;
    return !idempotents.empty();
  }
  /// +1 if every non-idempotent basis element has positive degree, -1 if all
  /// negative, 0 if there are none, 2 otherwise (not connective).
  int connectivity() const;

  SpVec<S> basis(int i) const { return {{i, S(1)}}; }
  SpVec<S> mul(const SpVec<S>& a, const SpVec<S>& b) const;
  SpVec<S> mul_basis(int i, int j) const { return column<S>(left[i], j); }
  SpMat<S> left_mult(const SpVec<S>& a) const;
  SpMat<S> right_mult(const SpVec<S>& a) const;
  SpVec<S> diff(const SpVec<S>& a) const;

  void finalize();
};

template <typename S>
using AlgPtr = std::shared_ptr<const DgAlgebra<S>>;

template <typename S>
SpVec<S> apply(const SpMat<S>& m, const SpVec<S>& v) {
  std::map<int, S> acc;
  for (auto& [j, x] : v)
    for (typename SpMat<S>::InnerIterator it(m, j); it; ++it) acc[static_cast<int>(it.row())] += it.value() * x;
  SpVec<S> out;
  for (auto& [i, x] : acc)
    if (!is_zero(x)) out.emplace_back(i, x);
  return out;
}

template <typename S>
SpVec<S> axpy(const SpVec<S>& a, const SpVec<S>& b, const S& beta) {
  std::map<int, S> acc(a.begin(), a.end());
  for (auto& [i, x] : b) acc[i] += beta * x;
  SpVec<S> out;
  for (auto& [i, x] : acc)
    if (!is_zero(x)) out.emplace_back(i, x);
  return out;
}

template <typename S>
SpVec<S> scale(const SpVec<S>& a, const S& c) {
  SpVec<S> out;
  if (is_zero(c)) return out;
  for (auto& [i, x] : a) out.emplace_back(i, x * c);
  return out;
}

template <typename S>
SpVec<S> DgAlgebra<S>::mul(const SpVec<S>& a, const SpVec<S>& b) const {
  SpVec<S> out;
  for (auto& [i, x] : a) out = axpy<S>(out, apply<S>(left[i], b), x);
  return out;
}

template <typename S>
SpMat<S> DgAlgebra<S>::left_mult(const SpVec<S>& a) const {
  SpMat<S> m(dim(), dim());
  for (auto& [i, x] : a) m = sum<S>(m, left[i], x);
  return m;
}

template <typename S>
SpMat<S> DgAlgebra<S>::right_mult(const SpVec<S>& a) const {
  SpMat<S> m(dim(), dim());
  for (auto& [i, x] : a) m = sum<S>(m, right[i], x);
  return m;
}

template <typename S>
SpVec<S> DgAlgebra<S>::diff(const SpVec<S>& a) const {
  return apply<S>(d, a);
}

template <typename S>
void DgAlgebra<S>::finalize() {
  const int n = dim();
  std::vector<Triplets<S>> rt(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (auto& [k, x] : column<S>(left[i], j)) rt[j].emplace_back(k, i, x);
  right.clear();
  for (int j = 0; j < n; ++j) right.push_back(from_triplets<S>(n, n, rt[j]));
  lidem.assign(n, -1);
  ridem.assign(n, -1);
  for (int r = 0; r < n; ++r) {
    const SpVec<S> er = basis(r);
    for (int p = 0; p < static_cast<int>(idempotents.size()); ++p) {
      if (mul(basis(idempotents[p]), er) == er) lidem[r] = p;
      if (mul(er, basis(idempotents[p])) == er) ridem[r] = p;
    }
  }
}

template <typename S>
int DgAlgebra<S>::connectivity() const {
  bool pos = false, neg = false, zero = false;
  for (int i = 0; i < dim(); ++i) {
    if (std::find(idempotents.begin(), idempotents.end(), i) != idempotents.end()) continue;
    const int g = degree(i);
    (g > 0 ? pos : g < 0 ? neg : zero) = true;
  }
  if (zero || (pos && neg)) return 2;
  return pos ? 1 : neg ? -1 : 0;
}

/// Builds an algebra from a product table on basis indices.
template <typename S>
DgAlgebra<S> make_algebra(std::string name, std::vector<int> degrees,
                          const std::function<SpVec<S>(int, int)>& product, SpMat<S> d,
                          SpVec<S> unit, std::vector<int> idempotents,
                          std::vector<std::string> labels = {}) {
  DgAlgebra<S> a;
  a.name = std::move(name);
  a.space = GradedSpace(std::move(degrees));
  const int n = a.space.dim();
  a.d = d.rows() == n ? std::move(d) : SpMat<S>(n, n);
  for (int i = 0; i < n; ++i) {
    std::vector<SpVec<S>> cols;
    for (int j = 0; j < n; ++j) cols.push_back(product(i, j));
    a.left.push_back(from_columns<S>(n, cols));
  }
  a.unit = std::move(unit);
  a.idempotents = std::move(idempotents);
  if (labels.empty())
    for (int i = 0; i < n; ++i) labels.push_back("e" + std::to_string(i));
  a.labels = std::move(labels);
  a.finalize();
  return a;
}

struct Violation {
  std::string axiom;
  std::string witness;
};

/// Checks every algebra axiom exhaustively on basis elements.
template <typename S>
std::vector<Violation> validate_algebra(const DgAlgebra<S>& a) {
  std::vector<Violation> out;
  const int n = a.dim();
  auto lbl = [&](int i) { return a.labels.at(i); };
  auto deg_of = [&](const SpVec<S>& v, int expect) {
    for (auto& [k, x] : v)
      if (a.degree(k) != expect) return false;
    return true;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!deg_of(a.mul_basis(i, j), a.degree(i) + a.degree(j)))
        out.push_back({"degree", lbl(i) + "*" + lbl(j)});
  if (!GradedMap<S>(a.space, a.space, 1, a.d).respects_degree()) out.push_back({"degree", "d"});
  if (!is_zero_matrix<S>(product<S>(a.d, a.d))) out.push_back({"d^2", "d o d != 0"});
  for (int i = 0; i < n; ++i) {
    if (a.mul(a.unit, a.basis(i)) != a.basis(i)) out.push_back({"unit", "1*" + lbl(i)});
    if (a.mul(a.basis(i), a.unit) != a.basis(i)) out.push_back({"unit", lbl(i) + "*1"});
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const SpVec<S> ij = a.mul_basis(i, j);
      for (int k = 0; k < n; ++k)
        if (a.mul(ij, a.basis(k)) != a.mul(a.basis(i), a.mul_basis(j, k)))
          out.push_back({"associativity", lbl(i) + "," + lbl(j) + "," + lbl(k)});
      // d(ab) = d(a) b + (-1)^{|a|} a d(b)
      SpVec<S> lhs = a.diff(ij);
      SpVec<S> rhs = axpy<S>(a.mul(a.diff(a.basis(i)), a.basis(j)),
                             a.mul(a.basis(i), a.diff(a.basis(j))), signed_one<S>(a.degree(i)));
      if (lhs != rhs) out.push_back({"leibniz", lbl(i) + "," + lbl(j)});
    }
  // Idempotents: orthogonal, summing to the unit, in degree 0.
  SpVec<S> total;
  for (size_t p = 0; p < a.idempotents.size(); ++p) {
    const int e = a.idempotents[p];
    total = axpy<S>(total, a.basis(e), S(1));
    if (a.degree(e) != 0) out.push_back({"idempotent", lbl(e) + " not in degree 0"});
    for (size_t q = 0; q < a.idempotents.size(); ++q) {
      SpVec<S> pq = a.mul_basis(e, a.idempotents[q]);
      if (pq != (p == q ? a.basis(e) : SpVec<S>{}))
        out.push_back({"idempotent", lbl(e) + "*" + lbl(a.idempotents[q])});
    }
  }
  if (!a.idempotents.empty() && total != a.unit) out.push_back({"idempotent", "idempotents do not sum to 1"});
  return out;
}

template <typename S>
void require_valid(const DgAlgebra<S>& a) {
  auto v = validate_algebra(a);
  if (!v.empty())
    throw InvalidStructure("algebra " + a.name + ": " + v.front().axiom + " fails at " + v.front().witness);
}

template <typename S>
AlgPtr<S> share(DgAlgebra<S> a) {
  return std::make_shared<const DgAlgebra<S>>(std::move(a));
}

/// The ground field k.
template <typename S>
AlgPtr<S> field_algebra() {
  return share(make_algebra<S>("k", {0}, [](int, int) { return SpVec<S>{{0, S(1)}}; }, {}, {{0, S(1)}}, {0},
                               {"1"}));
}

/// k x ... x k (m factors).
template <typename S>
AlgPtr<S> product_of_fields(int m) {
  std::vector<int> deg(m, 0), idem;
  std::vector<std::string> labels;
  SpVec<S> unit;
  for (int i = 0; i < m; ++i) {
    idem.push_back(i);
    labels.push_back("e" + std::to_string(i + 1));
    unit.emplace_back(i, S(1));
  }
  return share(make_algebra<S>(
      "k^" + std::to_string(m), deg,
      [](int i, int j) { return i == j ? SpVec<S>{{i, S(1)}} : SpVec<S>{}; }, {}, unit, idem, labels));
}

/// k[h]/(h^N), deg h = gen_degree != 0, zero differential.
template <typename S>
AlgPtr<S> poly_algebra(int gen_degree, int order, const std::string& var = "h") {
  if (gen_degree == 0) throw std::invalid_argument("poly_algebra: generator degree 0 cannot be certified");
  if (order < 1) throw std::invalid_argument("poly_algebra: order must be >= 1");
  std::vector<int> deg;
  std::vector<std::string> labels;
  for (int i = 0; i < order; ++i) {
    deg.push_back(i * gen_degree);
    labels.push_back(i == 0 ? "1" : i == 1 ? var : var + "^" + std::to_string(i));
  }
  return share(make_algebra<S>(
      "k[" + var + "]/(" + var + "^" + std::to_string(order) + ")", deg,
      [order](int i, int j) { return i + j < order ? SpVec<S>{{i + j, S(1)}} : SpVec<S>{}; }, {}, {{0, S(1)}},
      {0}, labels));
}

/// k[h]/(h^N) standing in for k[h]; agrees with it below |degree| N |deg h|.
template <typename S>
AlgPtr<S> truncated_polynomial(int gen_degree, int order, const std::string& var = "h") {
  DgAlgebra<S> a = *poly_algebra<S>(gen_degree, order, var);
  a.artifact = order * std::abs(gen_degree);
  return share(std::move(a));
}

/// A^op with e_i^op e_j^op = (-1)^{|i||j|} (e_j e_i)^op.
template <typename S>
AlgPtr<S> opposite(const DgAlgebra<S>& a) {
  auto prod = [&a](int i, int j) {
    return scale<S>(a.mul_basis(j, i), signed_one<S>(static_cast<long long>(a.degree(i)) * a.degree(j)));
  };
  std::vector<std::string> labels;
  for (auto& l : a.labels) labels.push_back(l + "^op");
  auto op = make_algebra<S>(a.name + "^op", a.space.degrees(), prod, a.d, a.unit, a.idempotents, labels);
  op.artifact = a.artifact;
  return share(std::move(op));
}

/// A (x) B over k: (a (x) b)(a' (x) b') = (-1)^{|b||a'|} aa' (x) bb'; index i*dim(B)+j.
template <typename S>
AlgPtr<S> tensor_algebra(const DgAlgebra<S>& a, const DgAlgebra<S>& b) {
  const int nb = b.dim();
  auto prod = [&](int x, int y) {
    const int i = x / nb, j = x % nb, k = y / nb, l = y % nb;
    SpVec<S> out;
    const S sgn = signed_one<S>(static_cast<long long>(b.degree(j)) * a.degree(k));
    for (auto& [p, u] : a.mul_basis(i, k))
      for (auto& [q, v] : b.mul_basis(j, l)) out.emplace_back(p * nb + q, sgn * u * v);
    std::sort(out.begin(), out.end(), [](auto& s, auto& t) { return s.first < t.first; });
    return out;
  };
  SpMat<S> d = sum<S>(tensor_maps<S>(a.d, a.space, identity<S>(nb), 0),
                      tensor_maps<S>(identity<S>(a.dim()), a.space, b.d, 1));
  SpVec<S> unit;
  for (auto& [p, u] : a.unit)
    for (auto& [q, v] : b.unit) unit.emplace_back(p * nb + q, u * v);
  std::sort(unit.begin(), unit.end(), [](auto& s, auto& t) { return s.first < t.first; });
  std::vector<int> idem;
  for (int p : a.idempotents)
    for (int q : b.idempotents) idem.push_back(p * nb + q);
  std::vector<std::string> labels;
  for (auto& s : a.labels)
    for (auto& t : b.labels) labels.push_back(s + "(x)" + t);
  auto t = make_algebra<S>(a.name + "(x)" + b.name, tensor(a.space, b.space).degrees(), prod, d, unit, idem, labels);
  if (a.artifact || b.artifact)
    t.artifact = std::min(a.artifact.value_or(std::numeric_limits<int>::max()),
                          b.artifact.value_or(std::numeric_limits<int>::max()));
  return share(std::move(t));
}

/// Basis elements that generate the algebra: idempotents plus a complement of
/// rad^2 in rad, where rad is spanned by the non-idempotent basis elements.
/// Only meaningful when the radical is nilpotent (connective algebras and
/// square-zero extensions).
template <typename S>
std::vector<int> algebra_generators(const DgAlgebra<S>& a) {
  std::vector<int> out = a.idempotents;
  std::vector<int> rad;
  for (int i = 0; i < a.dim(); ++i)
    if (std::find(out.begin(), out.end(), i) == out.end()) rad.push_back(i);
  EchelonSpan<S> sq;
  for (int i : rad)
    for (int j : rad) sq.insert(a.mul_basis(i, j));
  // Greedily add radical basis elements independent modulo rad^2.
  for (int i : rad)
    if (sq.insert(a.basis(i))) out.push_back(i);
  if (a.idempotents.empty()) {
    out.clear();
    for (int i = 0; i < a.dim(); ++i) out.push_back(i);
  }
  return out;
}

}  // namespace sph

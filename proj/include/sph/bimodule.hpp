// dg-bimodules over basis-presented algebras and the underived bimodule
// calculus: shifts, cones, tensor products over an algebra, Hom over an
// algebra, linear duals and transposes.
//
// A (C, A)-bimodule X carries lact[c]: x -> e_c x and ract[a]: x -> x e_a.
// A right A-module is a (k, A)-bimodule; a complex is a (k, k)-bimodule.
// Signs: d(cx) = d(c)x + (-1)^{|c|} c dx,  d(xa) = d(x)a + (-1)^{|x|} x da.
#pragma once

#include <unordered_map>

#include "sph/algebra.hpp"

namespace sph {

template <typename S>
bool same_algebra(const DgAlgebra<S>& a, const DgAlgebra<S>& b) {
  if (&a == &b) return true;
  if (!(a.space == b.space) || !equal<S>(a.d, b.d) || a.unit != b.unit) return false;
  for (int i = 0; i < a.dim(); ++i)
    if (!equal<S>(a.left[i], b.left[i])) return false;
  return true;
}

template <typename S>
struct DgBimodule {
  std::string name;
  AlgPtr<S> lalg, ralg;
  GradedSpace space;
  SpMat<S> d;
  std::vector<SpMat<S>> lact, ract;
  std::vector<int> lid, rid;  // idempotent of each basis element, or -1

  int dim() const { return space.dim(); }
  int degree(int i) const { return space.degree(i); }
  Complex<S> complex() const { return Complex<S>(space, d); }
  SpMat<S> left_mult(const SpVec<S>& c) const {
    SpMat<S> m(dim(), dim());
    for (auto& [i, x] : c) m = sum<S>(m, lact[i], x);
    return m;
  }
  SpMat<S> right_mult(const SpVec<S>& a) const {
    SpMat<S> m(dim(), dim());
    for (auto& [i, x] : a) m = sum<S>(m, ract[i], x);
    return m;
  }
  bool right_homogeneous() const {
    return !ralg->idempotents.empty() && std::find(rid.begin(), rid.end(), -1) == rid.end();
  }
  bool left_homogeneous() const {
    return !lalg->idempotents.empty() && std::find(lid.begin(), lid.end(), -1) == lid.end();
  }

  void finalize() {
    prune(d);
    auto which = [&](const std::vector<SpMat<S>>& act, const std::vector<int>& idem, std::vector<int>& out) {
      out.assign(dim(), -1);
      for (int p = 0; p < static_cast<int>(idem.size()); ++p) {
        const SpMat<S>& m = act[idem[p]];
        for (int x = 0; x < dim(); ++x) {
          auto col = column<S>(m, x);
          if (col.size() == 1 && col[0].first == x && col[0].second == S(1)) out[x] = p;
        }
      }
    };
    which(lact, lalg->idempotents, lid);
    which(ract, ralg->idempotents, rid);
  }
};

template <typename S>
DgBimodule<S> make_bimodule(std::string name, AlgPtr<S> c, AlgPtr<S> a, GradedSpace v, SpMat<S> d,
                            std::vector<SpMat<S>> lact, std::vector<SpMat<S>> ract) {
  DgBimodule<S> m;
  m.name = std::move(name);
  m.lalg = std::move(c);
  m.ralg = std::move(a);
  m.space = std::move(v);
  m.d = d.rows() == m.space.dim() ? std::move(d) : SpMat<S>(m.space.dim(), m.space.dim());
  m.lact = std::move(lact);
  m.ract = std::move(ract);
  for (auto& x : m.lact) prune(x);
  for (auto& x : m.ract) prune(x);
  m.finalize();
  return m;
}

/// Exhaustive axiom check on basis elements.
template <typename S>
std::vector<Violation> validate_bimodule(const DgBimodule<S>& m) {
  std::vector<Violation> out;
  const DgAlgebra<S>& c = *m.lalg;
  const DgAlgebra<S>& a = *m.ralg;
  if (static_cast<int>(m.lact.size()) != c.dim() || static_cast<int>(m.ract.size()) != a.dim()) {
    out.push_back({"shape", "action tables do not match the algebras"});
    return out;
  }
  const SpMat<S> sgn = degree_sign<S>(m.space, 1);
  if (!GradedMap<S>(m.space, m.space, 1, m.d).respects_degree()) out.push_back({"degree", "d"});
  if (!is_zero_matrix<S>(product<S>(m.d, m.d))) out.push_back({"d^2", "d o d != 0"});
  const SpMat<S> id = identity<S>(m.dim());
  if (!equal<S>(m.left_mult(c.unit), id)) out.push_back({"unit", "left"});
  if (!equal<S>(m.right_mult(a.unit), id)) out.push_back({"unit", "right"});
  for (int i = 0; i < c.dim(); ++i) {
    if (!GradedMap<S>(m.space, m.space, c.degree(i), m.lact[i]).respects_degree())
      out.push_back({"degree", "left " + c.labels[i]});
    // d L_c = L_{dc} + (-1)^{|c|} L_c d
    SpMat<S> rhs = sum<S>(m.left_mult(c.diff(c.basis(i))), product<S>(m.lact[i], m.d), signed_one<S>(c.degree(i)));
    if (!equal<S>(product<S>(m.d, m.lact[i]), rhs)) out.push_back({"leibniz", "left " + c.labels[i]});
    for (int j = 0; j < c.dim(); ++j)
      if (!equal<S>(product<S>(m.lact[i], m.lact[j]), m.left_mult(c.mul_basis(i, j))))
        out.push_back({"associativity", "left " + c.labels[i] + "," + c.labels[j]});
  }
  for (int i = 0; i < a.dim(); ++i) {
    if (!GradedMap<S>(m.space, m.space, a.degree(i), m.ract[i]).respects_degree())
      out.push_back({"degree", "right " + a.labels[i]});
    // d R_a = R_a d + R_{da} sgn
    SpMat<S> rhs = sum<S>(product<S>(m.ract[i], m.d), product<S>(m.right_mult(a.diff(a.basis(i))), sgn));
    if (!equal<S>(product<S>(m.d, m.ract[i]), rhs)) out.push_back({"leibniz", "right " + a.labels[i]});
    for (int j = 0; j < a.dim(); ++j)
      if (!equal<S>(product<S>(m.ract[j], m.ract[i]), m.right_mult(a.mul_basis(i, j))))
        out.push_back({"associativity", "right " + a.labels[i] + "," + a.labels[j]});
  }
  for (int i = 0; i < c.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      if (!equal<S>(product<S>(m.lact[i], m.ract[j]), product<S>(m.ract[j], m.lact[i])))
        out.push_back({"commute", c.labels[i] + "," + a.labels[j]});
  return out;
}

template <typename S>
void require_valid(const DgBimodule<S>& m) {
  auto v = validate_bimodule(m);
  if (!v.empty())
    throw InvalidStructure("bimodule " + m.name + ": " + v.front().axiom + " fails at " + v.front().witness);
}

/// A as an (A, A)-bimodule.
template <typename S>
DgBimodule<S> diagonal(const AlgPtr<S>& a) {
  return make_bimodule<S>(a->name, a, a, a->space, a->d, a->left, a->right);
}

/// A complex as a (k, k)-bimodule.
template <typename S>
DgBimodule<S> as_bimodule(const Complex<S>& c, const AlgPtr<S>& k) {
  return make_bimodule<S>("complex", k, k, c.space, c.d, {identity<S>(c.dim())}, {identity<S>(c.dim())});
}

/// X[n]: degrees move down by n, d and the left action pick up signs.
template <typename S>
DgBimodule<S> shift(const DgBimodule<S>& x, int n) {
  std::vector<SpMat<S>> l;
  for (int i = 0; i < x.lalg->dim(); ++i)
    l.push_back(x.lact[i] * signed_one<S>(static_cast<long long>(n) * x.lalg->degree(i)));
  return make_bimodule<S>(x.name + "[" + std::to_string(n) + "]", x.lalg, x.ralg, x.space.shifted(n),
                          x.d * signed_one<S>(n), l, x.ract);
}

template <typename S>
SpMat<S> block_diag(const SpMat<S>& a, const SpMat<S>& b) {
  Triplets<S> t;
  add_block<S>(t, a, 0, 0);
  add_block<S>(t, b, static_cast<int>(a.rows()), static_cast<int>(a.cols()));
  return from_triplets<S>(static_cast<int>(a.rows() + b.rows()), static_cast<int>(a.cols() + b.cols()), t);
}

template <typename S>
DgBimodule<S> direct_sum(const DgBimodule<S>& x, const DgBimodule<S>& y) {
  std::vector<SpMat<S>> l, r;
  for (size_t i = 0; i < x.lact.size(); ++i) l.push_back(block_diag<S>(x.lact[i], y.lact[i]));
  for (size_t i = 0; i < x.ract.size(); ++i) r.push_back(block_diag<S>(x.ract[i], y.ract[i]));
  return make_bimodule<S>(x.name + "+" + y.name, x.lalg, x.ralg, direct_sum(x.space, y.space),
                          block_diag<S>(x.d, y.d), l, r);
}

/// Is f (matrix tgt x src) a bimodule map of the given degree:
/// f(cx) = (-1)^{|f||c|} c f(x), f(xa) = f(x) a.
template <typename S>
bool is_bimodule_map(const DgBimodule<S>& x, const DgBimodule<S>& y, const SpMat<S>& f, int deg) {
  if (f.rows() != y.dim() || f.cols() != x.dim()) return false;
  if (!GradedMap<S>(x.space, y.space, deg, f).respects_degree()) return false;
  for (int i = 0; i < x.lalg->dim(); ++i) {
    const S s = signed_one<S>(static_cast<long long>(deg) * x.lalg->degree(i));
    if (!equal<S>(product<S>(f, x.lact[i]), product<S>(y.lact[i], f) * s)) return false;
  }
  for (int i = 0; i < x.ralg->dim(); ++i)
    if (!equal<S>(product<S>(f, x.ract[i]), product<S>(y.ract[i], f))) return false;
  return true;
}

/// d f = (-1)^{deg} f d.
template <typename S>
bool is_closed(const DgBimodule<S>& x, const DgBimodule<S>& y, const SpMat<S>& f, int deg) {
  return equal<S>(product<S>(y.d, f), product<S>(f, x.d) * signed_one<S>(deg));
}

/// cone(f) = X[1] (+) Y for a closed degree-0 bimodule map f.
template <typename S>
DgBimodule<S> cone(const DgBimodule<S>& x, const DgBimodule<S>& y, const SpMat<S>& f) {
  if (!is_bimodule_map(x, y, f, 0)) throw NotChainMap("cone: not a degree-0 bimodule map");
  if (!is_closed(x, y, f, 0)) throw NotChainMap("cone: map does not commute with the differentials");
  DgBimodule<S> xs = shift(x, 1);
  Triplets<S> t;
  add_block<S>(t, xs.d, 0, 0);
  add_block<S>(t, f, x.dim(), 0);
  add_block<S>(t, y.d, x.dim(), x.dim());
  DgBimodule<S> out = direct_sum(xs, y);
  out.d = from_triplets<S>(out.dim(), out.dim(), t);
  out.name = "cone(" + x.name + "->" + y.name + ")";
  return out;
}

/// Linear map defined on basis elements by a function returning sparse vectors.
template <typename S>
SpMat<S> matrix_from(int rows, int cols, const std::function<SpVec<S>(int)>& f) {
  std::vector<SpVec<S>> c;
  c.reserve(cols);
  for (int j = 0; j < cols; ++j) c.push_back(f(j));
  return from_columns<S>(rows, c);
}

/// X (x)_A K for X a (C, A)- and K an (A, B)-bimodule, presented as a
/// quotient of X (x)_k K. Keeps enough data to project arbitrary x (x) k.
template <typename S>
struct TensorProduct {
  DgBimodule<S> module;
  int nx = 0, nk = 0;
  std::unordered_map<long long, int> pair_index;  // x*nk+k -> index in V
  std::vector<std::pair<int, int>> pairs;         // V basis
  std::vector<int> quotient_index;                // V index -> Q index or -1 (pivot)
  std::vector<int> representative;                // Q index -> V index
  EchelonSpan<S> relations;

  /// Image of x (x) k in the quotient (zero if the pair is not admissible).
  SpVec<S> project_pair(int x, int k) const {
    auto it = pair_index.find(static_cast<long long>(x) * nk + k);
    if (it == pair_index.end()) return {};
    return project({{it->second, S(1)}});
  }
  SpVec<S> project(const SpVec<S>& v) const {
    SpVec<S> r = relations.residual(v), out;
    for (auto& [i, x] : r) out.emplace_back(quotient_index[i], x);
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return out;
  }
  /// Image of (sum u_x x) (x) (sum w_k k).
  SpVec<S> project_tensor(const SpVec<S>& u, const SpVec<S>& w) const {
    std::map<int, S> acc;
    for (auto& [x, a] : u)
      for (auto& [k, b] : w) {
        auto it = pair_index.find(static_cast<long long>(x) * nk + k);
        if (it != pair_index.end()) acc[it->second] += a * b;
      }
    SpVec<S> v;
    for (auto& [i, c] : acc)
      if (!is_zero(c)) v.emplace_back(i, c);
    return project(v);
  }
};

template <typename S>
TensorProduct<S> tensor_over(const DgBimodule<S>& x, const DgBimodule<S>& k) {
  if (!same_algebra(*x.ralg, *k.lalg)) throw EndpointMismatch("tensor_over: algebras do not match");
  const DgAlgebra<S>& a = *x.ralg;
  TensorProduct<S> t;
  t.nx = x.dim();
  t.nk = k.dim();
  const bool hom = x.right_homogeneous() && k.left_homogeneous();
  std::vector<int> deg;
  for (int i = 0; i < x.dim(); ++i)
    for (int j = 0; j < k.dim(); ++j)
      if (!hom || x.rid[i] == k.lid[j]) {
        t.pair_index[static_cast<long long>(i) * t.nk + j] = static_cast<int>(t.pairs.size());
        t.pairs.emplace_back(i, j);
        deg.push_back(x.degree(i) + k.degree(j));
      }
  std::vector<int> gens = algebra_generators(a);
  if (hom)
    gens.erase(std::remove_if(gens.begin(), gens.end(),
                              [&](int g) {
                                return std::find(a.idempotents.begin(), a.idempotents.end(), g) !=
                                       a.idempotents.end();
                              }),
               gens.end());
  auto raw = [&](const SpVec<S>& u, const SpVec<S>& w) {
    std::map<int, S> acc;
    for (auto& [p, s] : u)
      for (auto& [q, r] : w) {
        auto it = t.pair_index.find(static_cast<long long>(p) * t.nk + q);
        if (it != t.pair_index.end()) acc[it->second] += s * r;
      }
    SpVec<S> v;
    for (auto& [i, c] : acc)
      if (!is_zero(c)) v.emplace_back(i, c);
    return v;
  };
  for (int g : gens)
    for (int i = 0; i < x.dim(); ++i) {
      if (hom && x.rid[i] != a.lidem[g]) continue;
      SpVec<S> xg = column<S>(x.ract[g], i);
      for (int j = 0; j < k.dim(); ++j) {
        if (hom && k.lid[j] != a.ridem[g]) continue;
        SpVec<S> rel = axpy<S>(raw(xg, {{j, S(1)}}), raw({{i, S(1)}}, column<S>(k.lact[g], j)), S(-1));
        if (!rel.empty()) t.relations.insert(rel);
      }
    }
  std::vector<int> piv = t.relations.pivot_columns();
  std::vector<char> is_piv(t.pairs.size(), 0);
  for (int p : piv) is_piv[p] = 1;
  t.quotient_index.assign(t.pairs.size(), -1);
  std::vector<int> qdeg;
  for (int i = 0; i < static_cast<int>(t.pairs.size()); ++i)
    if (!is_piv[i]) {
      t.quotient_index[i] = static_cast<int>(t.representative.size());
      t.representative.push_back(i);
      qdeg.push_back(deg[i]);
    }
  const int nq = static_cast<int>(t.representative.size());
  auto on_pairs = [&](const std::function<SpVec<S>(int, int)>& f) {
    return matrix_from<S>(nq, nq, [&](int q) {
      auto [i, j] = t.pairs[t.representative[q]];
      return f(i, j);
    });
  };
  SpMat<S> d = on_pairs([&](int i, int j) {
    return axpy<S>(t.project_tensor(column<S>(x.d, i), {{j, S(1)}}),
                   t.project_tensor({{i, S(1)}}, column<S>(k.d, j)), signed_one<S>(x.degree(i)));
  });
  std::vector<SpMat<S>> l, r;
  for (int c = 0; c < x.lalg->dim(); ++c)
    l.push_back(on_pairs([&](int i, int j) { return t.project_tensor(column<S>(x.lact[c], i), {{j, S(1)}}); }));
  for (int b = 0; b < k.ralg->dim(); ++b)
    r.push_back(on_pairs([&](int i, int j) { return t.project_tensor({{i, S(1)}}, column<S>(k.ract[b], j)); }));
  t.module = make_bimodule<S>(x.name + "(x)" + k.name, x.lalg, k.ralg, GradedSpace(qdeg), d, l, r);
  return t;
}

/// f (x) g : X (x)_A K -> X' (x)_A K',  x (x) k -> (-1)^{|g||x|} f(x) (x) g(k).
template <typename S>
SpMat<S> tensor_map(const TensorProduct<S>& src, const TensorProduct<S>& tgt, const DgBimodule<S>& x,
                    const SpMat<S>& f, const SpMat<S>& g, int g_deg) {
  const int n = src.module.dim();
  return matrix_from<S>(tgt.module.dim(), n, [&](int q) {
    auto [i, j] = src.pairs[src.representative[q]];
    return scale<S>(tgt.project_tensor(column<S>(f, i), column<S>(g, j)),
                    signed_one<S>(static_cast<long long>(g_deg) * x.degree(i)));
  });
}

/// Hom_A(X, Y) for X a (C, A)- and Y a (D, A)-bimodule, as a (D, C)-bimodule.
/// Basis element i is the right A-linear map maps[i] (Y.dim x X.dim).
template <typename S>
struct HomSpace {
  DgBimodule<S> module;
  std::vector<SpMat<S>> maps;
  int nx = 0, ny = 0;
  std::unordered_map<long long, int> free_index;  // (y*nx+x) -> basis index

  /// Coordinates of a right A-linear map (assumed to lie in the span).
  SpVec<S> coords(const SpMat<S>& phi) const {
    SpVec<S> out;
    for (int c = 0; c < phi.outerSize(); ++c)
      for (typename SpMat<S>::InnerIterator it(phi, c); it; ++it) {
        if (is_zero(it.value())) continue;
        auto f = free_index.find(static_cast<long long>(it.row()) * nx + c);
        if (f != free_index.end()) out.emplace_back(f->second, it.value());
      }
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return out;
  }
  SpMat<S> map_of(const SpVec<S>& v) const {
    SpMat<S> m(ny, nx);
    for (auto& [i, c] : v) m = sum<S>(m, maps[i], c);
    return m;
  }
};

template <typename S>
HomSpace<S> hom_over(const DgBimodule<S>& x, const DgBimodule<S>& y) {
  if (!same_algebra(*x.ralg, *y.ralg)) throw EndpointMismatch("hom_over: algebras do not match");
  const DgAlgebra<S>& a = *x.ralg;
  HomSpace<S> h;
  h.nx = x.dim();
  h.ny = y.dim();
  const bool hom = x.right_homogeneous() && y.right_homogeneous();
  std::vector<int> gens = algebra_generators(a);
  if (hom)
    gens.erase(std::remove_if(gens.begin(), gens.end(),
                              [&](int g) {
                                return std::find(a.idempotents.begin(), a.idempotents.end(), g) !=
                                       a.idempotents.end();
                              }),
               gens.end());
  std::vector<int> hdeg;
  if (x.dim() && y.dim()) {
    for (int p = y.space.min_degree() - x.space.max_degree(); p <= y.space.max_degree() - x.space.min_degree(); ++p) {
      // Variables: pairs (yi, xi) with |yi| = |xi| + p.
      std::vector<std::pair<int, int>> vars;
      std::unordered_map<long long, int> var_of;
      for (int xi = 0; xi < x.dim(); ++xi)
        for (int yi = 0; yi < y.dim(); ++yi)
          if (y.degree(yi) == x.degree(xi) + p && (!hom || y.rid[yi] == x.rid[xi])) {
            var_of[static_cast<long long>(yi) * h.nx + xi] = static_cast<int>(vars.size());
            vars.emplace_back(yi, xi);
          }
      if (vars.empty()) continue;
      std::vector<std::vector<int>> by_x(x.dim());
      for (int v = 0; v < static_cast<int>(vars.size()); ++v) by_x[vars[v].second].push_back(v);
      // Rows: for each x' and generator g, sum_xi (x' g)[xi] phi(xi) - phi(x') g = 0,
      // one row per output basis element y.
      Triplets<S> t;
      int row = 0;
      for (int xp = 0; xp < x.dim(); ++xp)
        for (int g : gens) {
          std::map<int, int> rows;
          auto row_of = [&](int yy) {
            auto it = rows.find(yy);
            if (it != rows.end()) return it->second;
            rows[yy] = row;
            return row++;
          };
          for (auto& [xi, c] : column<S>(x.ract[g], xp))
            for (int v : by_x[xi]) t.emplace_back(row_of(vars[v].first), v, c);
          for (int v : by_x[xp])
            for (auto& [yo, c] : column<S>(y.ract[g], vars[v].first)) t.emplace_back(row_of(yo), v, -c);
        }
      SpMat<S> cons = from_triplets<S>(row, static_cast<int>(vars.size()), t);
      Kernel<S> ker;
      if (row == 0) {
        ker.basis = identity<S>(static_cast<int>(vars.size()));
        for (int v = 0; v < static_cast<int>(vars.size()); ++v) ker.free_columns.push_back(v);
      } else {
        ker = kernel<S>(cons);
      }
      for (int b = 0; b < ker.basis.cols(); ++b) {
        Triplets<S> mt;
        for (typename SpMat<S>::InnerIterator it(ker.basis, b); it; ++it)
          mt.emplace_back(vars[it.row()].first, vars[it.row()].second, it.value());
        const int fv = ker.free_columns[b];
        h.free_index[static_cast<long long>(vars[fv].first) * h.nx + vars[fv].second] =
            static_cast<int>(h.maps.size());
        h.maps.push_back(from_triplets<S>(h.ny, h.nx, mt));
        hdeg.push_back(p);
      }
    }
  }
  const int n = static_cast<int>(h.maps.size());
  SpMat<S> d = matrix_from<S>(n, n, [&](int i) {
    SpMat<S> dphi = sum<S>(product<S>(y.d, h.maps[i]), product<S>(h.maps[i], x.d), -signed_one<S>(hdeg[i]));
    return h.coords(dphi);
  });
  std::vector<SpMat<S>> l, r;
  for (int c = 0; c < y.lalg->dim(); ++c)
    l.push_back(matrix_from<S>(n, n, [&](int i) { return h.coords(product<S>(y.lact[c], h.maps[i])); }));
  for (int c = 0; c < x.lalg->dim(); ++c)
    r.push_back(matrix_from<S>(n, n, [&](int i) { return h.coords(product<S>(h.maps[i], x.lact[c])); }));
  h.module = make_bimodule<S>("Hom(" + x.name + "," + y.name + ")", y.lalg, x.lalg, GradedSpace(hdeg), d, l, r);
  return h;
}

/// Opposite algebra with a cached back-link so that (A^op)^op is A itself.
template <typename S>
class OppositeCache {
 public:
  static AlgPtr<S> of(const AlgPtr<S>& a) {
    auto& c = cache();
    for (auto& [orig, op] : c) {
      if (orig.get() == a.get()) return op;
      if (op.get() == a.get()) return orig;
    }
    AlgPtr<S> op = opposite(*a);
    c.emplace_back(a, op);
    return op;
  }

 private:
  static std::vector<std::pair<AlgPtr<S>, AlgPtr<S>>>& cache() {
    static thread_local std::vector<std::pair<AlgPtr<S>, AlgPtr<S>>> c;
    return c;
  }
};

template <typename S>
AlgPtr<S> op_of(const AlgPtr<S>& a) {
  return OppositeCache<S>::of(a);
}

/// X^T: (C, A)-bimodule X viewed as an (A^op, C^op)-bimodule,
/// a^op . x = (-1)^{|a||x|} x a,  x . c^op = (-1)^{|c||x|} c x.
template <typename S>
DgBimodule<S> transpose(const DgBimodule<S>& x) {
  std::vector<SpMat<S>> l, r;
  for (int i = 0; i < x.ralg->dim(); ++i)
    l.push_back(product<S>(x.ract[i], degree_sign<S>(x.space, x.ralg->degree(i))));
  for (int i = 0; i < x.lalg->dim(); ++i)
    r.push_back(product<S>(x.lact[i], degree_sign<S>(x.space, x.lalg->degree(i))));
  return make_bimodule<S>(x.name + "^T", op_of(x.ralg), op_of(x.lalg), x.space, x.d, l, r);
}

/// Linear dual of a (C, A)-bimodule as an (A, C)-bimodule:
/// <x, a phi> = <x a, phi>,  <x, phi c> = (-1)^{|c|} <c x, phi>.
template <typename S>
DgBimodule<S> linear_dual(const DgBimodule<S>& x) {
  Complex<S> dc = dual<S>(x.complex());
  std::vector<SpMat<S>> l, r;
  for (int i = 0; i < x.ralg->dim(); ++i) l.push_back(SpMat<S>(x.ract[i].transpose()));
  for (int i = 0; i < x.lalg->dim(); ++i)
    r.push_back(SpMat<S>(x.lact[i].transpose()) * signed_one<S>(x.lalg->degree(i)));
  return make_bimodule<S>(x.name + "^*", x.ralg, x.lalg, dc.space, dc.d, l, r);
}

/// The enveloping algebra C^op (x) A; basis index c*dim(A)+a.
template <typename S>
AlgPtr<S> enveloping(const AlgPtr<S>& c, const AlgPtr<S>& a) {
  return tensor_algebra(*op_of(c), *a);
}

/// (C, A)-bimodule as a right module over env = C^op (x) A:
/// x . (c^op (x) a) = (-1)^{|c||x|} c x a.
template <typename S>
DgBimodule<S> to_right_module(const DgBimodule<S>& x, const AlgPtr<S>& env, const AlgPtr<S>& k) {
  std::vector<SpMat<S>> r;
  const int na = x.ralg->dim();
  for (int c = 0; c < x.lalg->dim(); ++c)
    for (int a = 0; a < na; ++a)
      r.push_back(product<S>(product<S>(x.lact[c], x.ract[a]), degree_sign<S>(x.space, x.lalg->degree(c))));
  return make_bimodule<S>(x.name, k, env, x.space, x.d, {identity<S>(x.dim())}, r);
}

/// Inverse of to_right_module.
template <typename S>
DgBimodule<S> from_right_module(const DgBimodule<S>& m, const AlgPtr<S>& c, const AlgPtr<S>& a) {
  const int na = a->dim();
  std::vector<SpMat<S>> l, r;
  for (int i = 0; i < c->dim(); ++i) {
    SpMat<S> acc(m.dim(), m.dim());
    for (auto& [u, s] : a->unit) acc = sum<S>(acc, m.ract[i * na + u], s);
    l.push_back(product<S>(acc, degree_sign<S>(m.space, c->degree(i))));
  }
  for (int j = 0; j < na; ++j) {
    SpMat<S> acc(m.dim(), m.dim());
    for (auto& [u, s] : c->unit) acc = sum<S>(acc, m.ract[u * na + j], s);
    r.push_back(acc);
  }
  return make_bimodule<S>(m.name, c, a, m.space, m.d, l, r);
}

/// Restricts the left action to k (forgetting it) or the right action.
template <typename S>
DgBimodule<S> forget_left(const DgBimodule<S>& x, const AlgPtr<S>& k) {
  return make_bimodule<S>(x.name, k, x.ralg, x.space, x.d, {identity<S>(x.dim())}, x.ract);
}

template <typename S>
DgBimodule<S> forget_right(const DgBimodule<S>& x, const AlgPtr<S>& k) {
  return make_bimodule<S>(x.name, x.lalg, k, x.space, x.d, x.lact, {identity<S>(x.dim())});
}

template <typename S>
std::map<int, int> homology_dims(const DgBimodule<S>& m) {
  return homology_dims(m.complex());
}

}  // namespace sph

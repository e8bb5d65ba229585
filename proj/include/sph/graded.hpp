// Degreewise finite graded vector spaces, graded maps and cochain complexes.
//
// Conventions (used everywhere in the engine):
//   (M[n])^i = M^{n+i},  d_{M[n]} = (-1)^n d_M
//   cone(f: X -> Y) = X[1] (+) Y  with  d = [[-d_X, 0], [f, d_Y]]
//   Koszul sign (-1)^{|a||b|} whenever two graded symbols are swapped.
// A graded space is stored flat: basis element i has degree deg[i]. Every
// matrix is (target dim) x (source dim).
#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "sph/errors.hpp"
#include "sph/linalg.hpp"

namespace sph {

class GradedSpace {
 public:
  GradedSpace() = default;
  explicit GradedSpace(std::vector<int> degrees) : deg_(std::move(degrees)) {}

  /// dims[d] copies of each degree d, ordered by increasing degree.
  static GradedSpace from_dims(const std::map<int, int>& dims) {
    std::vector<int> deg;
    for (auto [d, n] : dims)
      for (int i = 0; i < n; ++i) deg.push_back(d);
    return GradedSpace(std::move(deg));
  }

  int dim() const { return static_cast<int>(deg_.size()); }
  int degree(int i) const { return deg_[i]; }
  const std::vector<int>& degrees() const { return deg_; }

  std::map<int, int> dims() const {
    std::map<int, int> out;
    for (int d : deg_) ++out[d];
    return out;
  }

  std::vector<int> indices(int d) const {
    std::vector<int> out;
    for (int i = 0; i < dim(); ++i)
      if (deg_[i] == d) out.push_back(i);
    return out;
  }

  bool empty() const { return deg_.empty(); }
  int min_degree() const { return deg_.empty() ? 0 : *std::min_element(deg_.begin(), deg_.end()); }
  int max_degree() const { return deg_.empty() ? 0 : *std::max_element(deg_.begin(), deg_.end()); }

  GradedSpace shifted(int n) const {
    std::vector<int> d = deg_;
    for (int& x : d) x -= n;
    return GradedSpace(std::move(d));
  }

  friend bool operator==(const GradedSpace&, const GradedSpace&) = default;

 private:
  std::vector<int> deg_;
};

inline GradedSpace direct_sum(const GradedSpace& a, const GradedSpace& b) {
  std::vector<int> d = a.degrees();
  d.insert(d.end(), b.degrees().begin(), b.degrees().end());
  return GradedSpace(std::move(d));
}

/// Basis of a (+) b is a's basis followed by b's, flat index i*dim(b)+j.
inline GradedSpace tensor(const GradedSpace& a, const GradedSpace& b) {
  std::vector<int> d;
  d.reserve(static_cast<size_t>(a.dim()) * b.dim());
  for (int x : a.degrees())
    for (int y : b.degrees()) d.push_back(x + y);
  return GradedSpace(std::move(d));
}

inline std::string format_dims(const std::map<int, int>& dims) {
  std::string s = "{";
  bool first = true;
  for (auto [d, n] : dims) {
    if (n == 0) continue;
    s += (first ? "" : ", ") + std::to_string(d) + ":" + std::to_string(n);
    first = false;
  }
  return s + "}";
}

template <typename S>
struct GradedMap {
  GradedSpace source;
  GradedSpace target;
  int degree = 0;
  SpMat<S> mat;

  GradedMap() = default;
  GradedMap(GradedSpace src, GradedSpace tgt, int deg, SpMat<S> m)
      : source(std::move(src)), target(std::move(tgt)), degree(deg), mat(std::move(m)) {
    if (mat.rows() != target.dim() || mat.cols() != source.dim())
      throw std::invalid_argument("GradedMap: matrix shape does not match spaces");
    prune(mat);
  }

  static GradedMap zero(GradedSpace src, GradedSpace tgt, int deg) {
    SpMat<S> m(tgt.dim(), src.dim());
    return GradedMap(std::move(src), std::move(tgt), deg, std::move(m));
  }
  static GradedMap identity(const GradedSpace& v) {
    return GradedMap(v, v, 0, sph::identity<S>(v.dim()));
  }

  /// True iff every nonzero entry maps degree i to degree i + degree.
  bool respects_degree() const {
    for (int k = 0; k < mat.outerSize(); ++k)
      for (typename SpMat<S>::InnerIterator it(mat, k); it; ++it)
        if (!is_zero(it.value()) &&
            target.degree(static_cast<int>(it.row())) != source.degree(static_cast<int>(it.col())) + degree)
          return false;
    return true;
  }

  /// Matrix from source piece i to target piece i + degree.
  SpMat<S> block(int i) const {
    return submatrix<S>(mat, target.indices(i + degree), source.indices(i));
  }

  bool zero() const { return is_zero_matrix<S>(mat); }
};

/// g o f; degrees add.
template <typename S>
GradedMap<S> compose(const GradedMap<S>& g, const GradedMap<S>& f) {
  if (!(g.source == f.target)) throw std::invalid_argument("compose: spaces do not match");
  return GradedMap<S>(f.source, g.target, f.degree + g.degree, product<S>(g.mat, f.mat));
}

template <typename S>
struct Complex {
  GradedSpace space;
  SpMat<S> d;

  Complex() = default;
  /// Validates degree +1 and d o d = 0; throws InvalidComplex otherwise.
  Complex(GradedSpace v, SpMat<S> diff) : space(std::move(v)), d(std::move(diff)) {
    prune(d);
    if (d.rows() != space.dim() || d.cols() != space.dim())
      throw InvalidComplex("differential has the wrong shape");
    if (!GradedMap<S>(space, space, 1, d).respects_degree())
      throw InvalidComplex("differential is not of degree +1");
    if (!is_zero_matrix<S>(product<S>(d, d))) throw InvalidComplex("d o d != 0");
  }

  static Complex zero_differential(GradedSpace v) {
    SpMat<S> m(v.dim(), v.dim());
    return Complex(std::move(v), std::move(m));
  }

  int dim() const { return space.dim(); }
  GradedMap<S> differential() const { return GradedMap<S>(space, space, 1, d); }
};

/// Per-degree Betti numbers dim ker d_i - rank d_{i-1}.
template <typename S>
std::map<int, int> homology_dims(const Complex<S>& c) {
  std::map<int, int> out;
  if (c.space.empty()) return out;
  std::map<int, int> ranks;
  auto dims = c.space.dims();
  for (auto [deg, n] : dims) {
    auto rows = c.space.indices(deg + 1);
    ranks[deg] = rows.empty() ? 0 : rank<S>(submatrix<S>(c.d, rows, c.space.indices(deg)));
  }
  for (auto [deg, n] : dims) {
    int prev = ranks.count(deg - 1) ? ranks[deg - 1] : 0;
    int h = n - ranks[deg] - prev;
    if (h) out[deg] = h;
  }
  return out;
}

template <typename S>
GradedSpace homology(const Complex<S>& c) {
  return GradedSpace::from_dims(homology_dims(c));
}

/// Homology restricted to degrees lo..hi.
inline std::map<int, int> restrict_dims(const std::map<int, int>& h, int lo, int hi) {
  std::map<int, int> out;
  for (auto [d, n] : h)
    if (d >= lo && d <= hi && n) out[d] = n;
  return out;
}

/// Cycle representatives of a basis of H^deg(c) (columns over the full space).
template <typename S>
SpMat<S> homology_representatives(const Complex<S>& c, int deg) {
  auto here = c.space.indices(deg);
  auto below = c.space.indices(deg - 1);
  auto above = c.space.indices(deg + 1);
  SpMat<S> cycles_local;
  if (above.empty())
    cycles_local = identity<S>(static_cast<int>(here.size()));
  else
    cycles_local = kernel<S>(submatrix<S>(c.d, above, here)).basis;
  EchelonSpan<S> span;
  if (!below.empty()) {
    SpMat<S> bnd = submatrix<S>(c.d, here, below);
    for (int j = 0; j < bnd.cols(); ++j) span.insert(column<S>(bnd, j));
  }
  std::vector<SpVec<S>> reps;
  for (int j = 0; j < cycles_local.cols(); ++j) {
    auto v = column<S>(cycles_local, j);
    if (span.insert(v)) {
      SpVec<S> full;
      for (auto& [i, x] : v) full.emplace_back(here[i], x);
      reps.push_back(full);
    }
  }
  return from_columns<S>(c.dim(), reps);
}

template <typename S>
void require_chain_map(const Complex<S>& x, const Complex<S>& y, const SpMat<S>& f) {
  if (f.rows() != y.dim() || f.cols() != x.dim()) throw NotChainMap("map has the wrong shape");
  if (!GradedMap<S>(x.space, y.space, 0, f).respects_degree())
    throw NotChainMap("map is not of degree 0");
  if (!equal<S>(product<S>(f, x.d), product<S>(y.d, f)))
    throw NotChainMap("map does not commute with the differentials");
}

/// Diagonal sign matrix diag((-1)^{e * deg(i)}).
template <typename S>
SpMat<S> degree_sign(const GradedSpace& v, long long e) {
  Triplets<S> t;
  for (int i = 0; i < v.dim(); ++i) t.emplace_back(i, i, signed_one<S>(e * v.degree(i)));
  return from_triplets<S>(v.dim(), v.dim(), t);
}

/// Places blocks into a larger matrix at the given offsets.
template <typename S>
void add_block(Triplets<S>& t, const SpMat<S>& m, int row_off, int col_off, const S& scale = S(1)) {
  for (int k = 0; k < m.outerSize(); ++k)
    for (typename SpMat<S>::InnerIterator it(m, k); it; ++it)
      t.emplace_back(static_cast<int>(it.row()) + row_off, static_cast<int>(it.col()) + col_off,
                     it.value() * scale);
}

template <typename S>
Complex<S> shift(const Complex<S>& c, int n) {
  SpMat<S> d = c.d * signed_one<S>(n);
  return Complex<S>(c.space.shifted(n), d);
}

/// cone(f) = source[1] (+) target with differential [[-d_src, 0], [f, d_tgt]].
template <typename S>
Complex<S> cone(const Complex<S>& x, const Complex<S>& y, const SpMat<S>& f) {
  require_chain_map(x, y, f);
  const int nx = x.dim();
  Triplets<S> t;
  add_block<S>(t, x.d, 0, 0, S(-1));
  add_block<S>(t, f, nx, 0);
  add_block<S>(t, y.d, nx, nx);
  GradedSpace v = direct_sum(x.space.shifted(1), y.space);
  return Complex<S>(v, from_triplets<S>(v.dim(), v.dim(), t));
}

template <typename S>
Complex<S> direct_sum(const Complex<S>& x, const Complex<S>& y) {
  Triplets<S> t;
  add_block<S>(t, x.d, 0, 0);
  add_block<S>(t, y.d, x.dim(), x.dim());
  GradedSpace v = direct_sum(x.space, y.space);
  return Complex<S>(v, from_triplets<S>(v.dim(), v.dim(), t));
}

/// (f (x) g)(a (x) b) = (-1)^{|g||a|} f(a) (x) g(b), flat index i*dim + j.
template <typename S>
SpMat<S> tensor_maps(const SpMat<S>& f, const GradedSpace& f_src, const SpMat<S>& g, int g_deg) {
  Triplets<S> t;
  const int gr = static_cast<int>(g.rows()), gc = static_cast<int>(g.cols());
  for (int a = 0; a < f.outerSize(); ++a)
    for (typename SpMat<S>::InnerIterator fi(f, a); fi; ++fi) {
      const S sgn = signed_one<S>(static_cast<long long>(g_deg) * f_src.degree(a));
      for (int b = 0; b < g.outerSize(); ++b)
        for (typename SpMat<S>::InnerIterator gi(g, b); gi; ++gi)
          t.emplace_back(static_cast<int>(fi.row()) * gr + static_cast<int>(gi.row()), a * gc + b,
                         sgn * fi.value() * gi.value());
    }
  return from_triplets<S>(static_cast<int>(f.rows()) * gr, static_cast<int>(f.cols()) * gc, t);
}

template <typename S>
Complex<S> tensor_over_field(const Complex<S>& x, const Complex<S>& y) {
  SpMat<S> d = sum<S>(tensor_maps<S>(x.d, x.space, identity<S>(y.dim()), 0),
                      tensor_maps<S>(identity<S>(x.dim()), x.space, y.d, 1));
  return Complex<S>(tensor(x.space, y.space), d);
}

/// Linear dual: degrees negate, <x, d phi> = -(-1)^{|x|} <dx, phi>.
template <typename S>
Complex<S> dual(const Complex<S>& x) {
  std::vector<int> deg;
  for (int d : x.space.degrees()) deg.push_back(-d);
  SpMat<S> t = x.d.transpose();
  // entry (i*, j*) = -(-1)^{|x_i|} d[j, i]
  SpMat<S> signs = degree_sign<S>(x.space, 1);
  SpMat<S> d = (signs * t * S(-1)).eval();
  return Complex<S>(GradedSpace(deg), d);
}

inline int euler_characteristic(const std::map<int, int>& dims) {
  int chi = 0;
  for (auto [d, n] : dims) chi += sign_of(d) * n;
  return chi;
}

inline int euler_characteristic(const GradedSpace& v) {
  int chi = 0;
  for (int d : v.degrees()) chi += sign_of(d);
  return chi;
}

}  // namespace sph

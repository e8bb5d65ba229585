#include <catch_amalgamated.hpp>

#include <functional>

#include "sph/derived.hpp"

using namespace sph;
using Q = Rational;

namespace {

// Right module k over an augmented algebra with unit basis index 0.
DgBimodule<Q> residue_field(const AlgPtr<Q>& a) {
  auto k = field_algebra<Q>();
  std::vector<SpMat<Q>> r;
  for (int i = 0; i < a->dim(); ++i) r.push_back(i == 0 ? identity<Q>(1) : SpMat<Q>(1, 1));
  return make_bimodule<Q>("k", k, a, GradedSpace({0}), {}, {identity<Q>(1)}, r);
}

// Oracle: homology of the reduced bar construction B(k, A, k) of an augmented
// algebra with zero differential, words of length <= max_len. Bar degree of
// [a1|...|an] is sum |a_i| - n.
std::map<int, int> bar_homology(const DgAlgebra<Q>& a, int max_len, int lo, int hi) {
  const int n = a.dim();
  std::vector<std::vector<int>> words{{}};
  std::vector<std::vector<int>> layer{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::vector<int>> next;
    for (auto& w : layer)
      for (int i = 1; i < n; ++i) {
        auto w2 = w;
        w2.push_back(i);
        next.push_back(w2);
      }
    words.insert(words.end(), next.begin(), next.end());
    layer = next;
  }
  std::map<std::vector<int>, int> index;
  std::vector<int> deg;
  for (auto& w : words) {
    index[w] = static_cast<int>(deg.size());
    int d = 0;
    for (int i : w) d += a.degree(i) - 1;
    deg.push_back(d);
  }
  // b[a1|..|an] = sum_i (-1)^{e_i} [..|a_i a_{i+1}|..], e_i = sum_{j<=i} (|a_j| - 1)
  Triplets<Q> t;
  for (auto& w : words) {
    int e = 0;
    for (size_t i = 0; i + 1 < w.size(); ++i) {
      e += a.degree(w[i]) - 1;
      for (auto& [p, c] : a.mul_basis(w[i], w[i + 1])) {
        if (p == 0) continue;
        auto w2 = w;
        w2[i] = p;
        w2.erase(w2.begin() + i + 1);
        t.emplace_back(index.at(w2), index.at(w), c * signed_one<Q>(e));
      }
    }
  }
  // b lowers word length; it has degree +1 in bar degree.
  Complex<Q> c(GradedSpace(deg), from_triplets<Q>(static_cast<int>(deg.size()), static_cast<int>(deg.size()), t));
  return restrict_dims(homology_dims(c), lo, hi);
}

std::map<int, int> generator_degrees(const Resolution<Q>& r, int lo, int hi) {
  std::map<int, int> out;
  for (int g = 0; g < r.semifree.generators(); ++g) ++out[r.semifree.gen_degree(g)];
  return restrict_dims(out, lo, hi);
}

}  // namespace

TEST_CASE("a free module resolves to itself") {
  auto a = poly_algebra<Q>(2, 5);
  auto r = semifree_resolution(forget_left(diagonal(a), field_algebra<Q>()));
  CHECK(r.semifree.generators() == 1);
  CHECK(r.exact);
}

TEST_CASE("minimal resolutions match the bar-complex oracle") {
  struct Case {
    AlgPtr<Q> a;
    int lo, hi, len;
  };
  std::vector<Case> cases{{poly_algebra<Q>(-1, 2, "eps"), -8, 0, 8},
                          {poly_algebra<Q>(2, 3), 0, 9, 9},
                          {poly_algebra<Q>(3, 2, "x"), 0, 8, 8},
                          {poly_algebra<Q>(-2, 3, "u"), -9, 0, 9}};
  for (auto& c : cases) {
    ResolveOptions o;
    if (c.a->connectivity() > 0)
      o.gen_hi = c.hi;
    else
      o.gen_lo = c.lo;
    auto r = semifree_resolution(residue_field(c.a), o);
    CHECK(generator_degrees(r, c.lo, c.hi) == bar_homology(*c.a, c.len, c.lo, c.hi));
    CHECK(is_quasi_iso(r.semifree.module(field_algebra<Q>()).complex(), r.target.complex(), augmentation(r),
                       r.certified.shrink({c.lo, c.hi}))
              .ok);
  }
}

TEST_CASE("k over dual numbers in degree -1: Ext is k[h] with deg h = 2") {
  auto e = poly_algebra<Q>(-1, 2, "eps");
  auto kk = residue_field(e);
  auto h = derived_hom(kk, kk, {-1, 8});
  CHECK(restrict_dims(homology_dims(h.module), -1, 8) == std::map<int, int>{{0, 1}, {2, 1}, {4, 1}, {6, 1}, {8, 1}});
}

TEST_CASE("diagonal bimodule of k[h]: two-step resolution") {
  auto a = poly_algebra<Q>(2, 6);
  auto br = resolve_bimodule(diagonal(a), ResolveOptions{-1000000, 9, 512});
  std::map<int, int> gens;
  for (int g = 0; g < br.res.semifree.generators(); ++g) ++gens[br.res.semifree.gen_degree(g)];
  CHECK(gens == std::map<int, int>{{0, 1}, {1, 1}});
}

TEST_CASE("derived Hom over a truncated polynomial ring") {
  auto l = poly_algebra<Q>(2, 2);
  auto d = diagonal(l);
  auto h = derived_hom(d, d, {-6, 6});
  CHECK(homology_dims(h.module) == d.space.dims());
  auto t = derived_tensor(residue_field(l), d, {-6, 6});
  CHECK(homology_dims(t.module) == std::map<int, int>{{0, 1}});
}

TEST_CASE("quasi-isomorphism search and null-homotopies") {
  auto a = poly_algebra<Q>(2, 4);
  auto d = diagonal(a);
  auto w = find_quasi_iso(d, d, {-6, 6});
  CHECK(w.found);
  auto w2 = find_quasi_iso(d, shift(d, 1), {-6, 6});
  CHECK(w2.refuted);

  auto kk = residue_field(a);
  auto r = semifree_resolution(kk, ResolveOptions{-1000000, 8, 512});
  auto sh = semifree_hom(r.semifree, kk);
  // a boundary is null-homotopic, the augmentation is not
  auto minus = sh.complex.space.indices(-1);
  if (!minus.empty()) {
    SpVec<Q> h{{minus[0], Q(1)}};
    auto dh = apply<Q>(sh.complex.d, h);
    CHECK(null_homotopy(sh, dh).has_value());
  }
  SpVec<Q> aug;
  for (int i = 0; i < sh.complex.dim(); ++i)
    if (sh.basis[i].first == 0) aug.emplace_back(i, Q(1));
  CHECK_FALSE(null_homotopy(sh, aug).has_value());
}

TEST_CASE("truncation stability") {
  auto ext_dims = [](int n) {
    auto a = poly_algebra<Q>(2, n);
    auto kk = residue_field(a);
    return homology_dims(derived_hom(kk, kk, {-6, 6}).module);
  };
  CHECK(stability_certify(ext_dims, {-6, 6}, 5).sound);
  auto small = stability_certify(ext_dims, {-6, 6}, 3);
  CHECK_FALSE(small.sound);
  CHECK_THROWS_AS(require_stable(ext_dims, {-6, 6}, 2), Unstable);
  // finite-dimensional input: vacuously sound
  CHECK(stability_certify([](int) { return std::map<int, int>{{0, 1}}; }, {-6, 6}, 1).sound);
}

TEST_CASE("a degree-1 loop exhausts the generator budget") {
  // over k[x]/(x^2) with |x| = 1 the minimal resolution of k has infinitely
  // many generators in degree 0
  auto a = poly_algebra<Q>(1, 2, "x");
  CHECK_THROWS_AS(semifree_resolution(residue_field(a), ResolveOptions{-1000000, 4, 40}), WindowExhausted);
}

TEST_CASE("connectivity violations are reported") {
  // k[x]/(x^2) with x in degree 0
  auto bad = share(make_algebra<Q>(
      "k[x]/x^2 ungraded", {0, 0},
      [](int i, int j) { return i + j < 2 ? SpVec<Q>{{i + j, Q(1)}} : SpVec<Q>{}; }, {}, {{0, Q(1)}}, {0}));
  CHECK_THROWS_AS(semifree_resolution(residue_field(bad)), ConnectivityViolation);
}

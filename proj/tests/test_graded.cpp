#include <catch_amalgamated.hpp>

#include <random>

#include "sph/graded.hpp"

using namespace sph;
using Q = Rational;

namespace {

// Independent oracle: dense fraction-free Gaussian elimination on a copy.
int dense_rank(std::vector<std::vector<Q>> m) {
  int r = 0;
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    for (int i = 0; i < rows; ++i)
      if (i != r && m[i][c] != 0) {
        Q f = m[i][c] / m[r][c];
        for (int j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
      }
    ++r;
  }
  return r;
}

std::vector<std::vector<Q>> dense(const SpMat<Q>& s) {
  std::vector<std::vector<Q>> m(s.rows(), std::vector<Q>(s.cols(), Q(0)));
  for (int k = 0; k < s.outerSize(); ++k)
    for (SpMat<Q>::InnerIterator it(s, k); it; ++it) m[it.row()][it.col()] = it.value();
  return m;
}

std::map<int, int> oracle_homology(const Complex<Q>& c) {
  std::map<int, int> out;
  for (auto [deg, n] : c.space.dims()) {
    auto blk = [&](int i) {
      auto rows = c.space.indices(i + 1), cols = c.space.indices(i);
      if (rows.empty() || cols.empty()) return 0;
      return dense_rank(dense(submatrix<Q>(c.d, rows, cols)));
    };
    int h = n - blk(deg) - blk(deg - 1);
    if (h) out[deg] = h;
  }
  return out;
}

// k[h]/(h^3), deg h = 2, with basis 1, h, h^2 in degrees 0, 2, 4, and the
// two-term complex  A --h--> A  placed so that the map has degree +1:
// source copy shifted so its degrees are 1, 3, 5.
Complex<Q> truncated_poly_complex() {
  GradedSpace v({1, 3, 5, 0, 2, 4});
  Triplets<Q> t{{4, 0, Q(1)}, {5, 1, Q(1)}};
  return Complex<Q>(v, from_triplets<Q>(6, 6, t));
}

Complex<Q> random_complex(std::mt19937& rng) {
  // Random two-step complexes V0 -f-> V1 -g-> V2 with g f = 0: choose g, then
  // f with columns in ker g.
  std::uniform_int_distribution<int> dim(0, 3), coef(-2, 2);
  int n0 = dim(rng), n1 = dim(rng), n2 = dim(rng);
  Triplets<Q> gt;
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n1; ++j) gt.emplace_back(i, j, Q(coef(rng)));
  SpMat<Q> g = from_triplets<Q>(n2, n1, gt);
  SpMat<Q> kg = n2 ? kernel<Q>(g).basis : identity<Q>(n1);
  Triplets<Q> ft;
  for (int j = 0; j < n0; ++j)
    for (int b = 0; b < kg.cols(); ++b) {
      Q c(coef(rng));
      for (SpMat<Q>::InnerIterator it(kg, b); it; ++it) ft.emplace_back(it.row(), j, c * it.value());
    }
  SpMat<Q> f = from_triplets<Q>(n1, n0, ft);
  std::vector<int> deg;
  for (int i = 0; i < n0; ++i) deg.push_back(0);
  for (int i = 0; i < n1; ++i) deg.push_back(1);
  for (int i = 0; i < n2; ++i) deg.push_back(2);
  Triplets<Q> dt;
  add_block<Q>(dt, f, n0, 0);
  add_block<Q>(dt, g, n0 + n1, n0);
  const int n = n0 + n1 + n2;
  return Complex<Q>(GradedSpace(deg), from_triplets<Q>(n, n, dt));
}

}  // namespace

TEST_CASE("homology of the zero complex is zero") {
  Complex<Q> c = Complex<Q>::zero_differential(GradedSpace());
  CHECK(homology_dims(c).empty());
}

TEST_CASE("identity k -> k is exact") {
  Complex<Q> c(GradedSpace({0, 1}), from_triplets<Q>(2, 2, {{1, 0, Q(1)}}));
  CHECK(homology_dims(c).empty());
}

TEST_CASE("multiplication by h on a truncated polynomial ring") {
  auto c = truncated_poly_complex();
  auto h = homology_dims(c);
  CHECK(h == oracle_homology(c));
  CHECK(h == std::map<int, int>{{0, 1}, {5, 1}});
}

TEST_CASE("d o d != 0 is rejected") {
  Triplets<Q> t{{1, 0, Q(1)}, {2, 1, Q(1)}};
  CHECK_THROWS_AS(Complex<Q>(GradedSpace({0, 1, 2}), from_triplets<Q>(3, 3, t)), InvalidComplex);
}

TEST_CASE("cone of the identity is acyclic") {
  auto c = truncated_poly_complex();
  CHECK(homology_dims(cone<Q>(c, c, identity<Q>(c.dim()))).empty());
}

TEST_CASE("cone of the zero map is the shifted direct sum") {
  auto c = truncated_poly_complex();
  SpMat<Q> z(c.dim(), c.dim());
  auto k = cone<Q>(c, c, z);
  auto expected = direct_sum<Q>(shift<Q>(c, 1), c);
  CHECK(k.space == expected.space);
  CHECK(equal<Q>(k.d, expected.d));
}

TEST_CASE("cone rejects a non-chain map") {
  Complex<Q> c(GradedSpace({0, 1}), from_triplets<Q>(2, 2, {{1, 0, Q(1)}}));
  SpMat<Q> f = from_triplets<Q>(2, 2, {{0, 0, Q(1)}});
  CHECK_THROWS_AS(cone<Q>(c, c, f), NotChainMap);
}

TEST_CASE("cone of multiplication by h^(n+1) on a truncated k[h]") {
  // A = k[h] truncated at h^7, deg h = 2, n = 1: cone(h^2 : A[-4] -> A).
  const int top = 7, n = 1, s = 2 * n + 2;
  std::vector<int> src, tgt;
  for (int i = 0; i < top; ++i) src.push_back(2 * i + s), tgt.push_back(2 * i);
  GradedSpace a(src), b(tgt);
  Complex<Q> x = Complex<Q>::zero_differential(a), y = Complex<Q>::zero_differential(b);
  Triplets<Q> t;
  for (int i = 0; i + n + 1 < top; ++i) t.emplace_back(i + n + 1, i, Q(1));
  auto k = cone<Q>(x, y, from_triplets<Q>(top, top, t));
  auto h = homology_dims(k);
  // A/(h^2) in degrees 0, 2 plus the truncation artifact at the top.
  CHECK(restrict_dims(h, -20, 2 * top - 2 - 1) == std::map<int, int>{{0, 1}, {2, 1}});
}

TEST_CASE("shift conventions") {
  auto c = truncated_poly_complex();
  CHECK(shift<Q>(c, 0).space == c.space);
  auto round = shift<Q>(shift<Q>(c, 3), -3);
  CHECK(round.space == c.space);
  CHECK(equal<Q>(round.d, c.d));
  auto k = Complex<Q>::zero_differential(GradedSpace({0}));
  CHECK(shift<Q>(k, 1).space.degrees() == std::vector<int>{-1});
  std::map<int, int> shifted;
  for (auto [d, m] : homology_dims(c)) shifted[d - 5] = m;
  CHECK(homology_dims(shift<Q>(c, 5)) == shifted);
}

TEST_CASE("random complexes: homology against dense oracle, Kunneth, duality") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    auto x = random_complex(rng), y = random_complex(rng);
    auto hx = homology_dims(x), hy = homology_dims(y);
    REQUIRE(hx == oracle_homology(x));
    auto t = tensor_over_field<Q>(x, y);
    std::map<int, int> kun;
    for (auto [a, m] : hx)
      for (auto [b, n] : hy) kun[a + b] += m * n;
    CHECK(homology_dims(t) == kun);
    CHECK(euler_characteristic(t.space) == euler_characteristic(x.space) * euler_characteristic(y.space));
    auto dx = dual<Q>(x);
    std::map<int, int> neg;
    for (auto [a, m] : hx) neg[-a] = m;
    CHECK(homology_dims(dx) == neg);
    // Evaluation x -> x**, x |-> (-1)^{|x|} x**, is a chain isomorphism.
    auto ddx = dual<Q>(dx);
    SpMat<Q> ev = degree_sign<Q>(x.space, 1);
    CHECK(ddx.space == x.space);
    CHECK(equal<Q>(product<Q>(ddx.d, ev), product<Q>(ev, x.d)));
  }
}

TEST_CASE("linear solve and kernel") {
  SpMat<Q> a = from_triplets<Q>(2, 3, {{0, 0, Q(1)}, {0, 1, Q(2)}, {1, 2, Q(3)}});
  auto k = kernel<Q>(a);
  REQUIRE(k.basis.cols() == 1);
  CHECK(is_zero_matrix<Q>(product<Q>(a, k.basis)));
  SpMat<Q> b = from_triplets<Q>(2, 1, {{0, 0, Q(5)}, {1, 0, Q(6)}});
  auto x = solve<Q>(a, b);
  REQUIRE(x);
  CHECK(equal<Q>(product<Q>(a, *x), b));
  SpMat<Q> z = from_triplets<Q>(2, 1, {{0, 0, Q(1)}});
  SpMat<Q> a2 = from_triplets<Q>(2, 1, {{1, 0, Q(1)}});
  CHECK_FALSE(solve<Q>(a2, z));
}

TEST_CASE("prime field arithmetic") {
  FieldScope scope(7);
  Fp a(3), b(5);
  CHECK((a * b).value() == 1);
  CHECK((a / b * b) == a);
  CHECK((-a).value() == 4);
  CHECK_THROWS(Fp(0).inverse());
  CHECK_THROWS(Fp::set_modulus(8));
}

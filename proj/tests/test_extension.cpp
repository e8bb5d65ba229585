#include <catch_amalgamated.hpp>

#include "sph/extension.hpp"

using namespace sph;
using Q = Rational;

namespace {

AlgPtr<Q> ungraded_dual_numbers() {
  return share(make_algebra<Q>(
      "k[x]/x^2", {0, 0}, [](int i, int j) { return i + j < 2 ? SpVec<Q>{{i + j, Q(1)}} : SpVec<Q>{}; }, {},
      {{0, Q(1)}}, {0}, {"1", "x"}));
}

// A twisted on the right by the automorphism x -> c x.
DgBimodule<Q> twisted(const AlgPtr<Q>& a, int c) {
  auto r = a->right;
  r[1] = r[1] * Q(c);
  return make_bimodule<Q>("A_tau", a, a, a->space, {}, a->left, r);
}

}  // namespace

TEST_CASE("trivial extension of k by k[1] is the dual numbers in degree -1") {
  auto k = field_algebra<Q>();
  auto e = trivial_extension(k, diagonal(k), 1);
  auto oracle = poly_algebra<Q>(-1, 2, "eps");
  REQUIRE(e->space == oracle->space);
  for (int i = 0; i < 2; ++i) CHECK(equal<Q>(e->left[i], oracle->left[i]));
}

TEST_CASE("trivial extension: dimensions and square-zero part") {
  auto a = poly_algebra<Q>(2, 4);
  auto b = shift(diagonal(a), 2);
  auto e = trivial_extension(a, b, 1);
  CHECK(e->dim() == a->dim() + b.dim());
  CHECK(validate_algebra(*e).empty());
  for (int i = a->dim(); i < e->dim(); ++i)
    for (int j = a->dim(); j < e->dim(); ++j) CHECK(e->mul_basis(i, j).empty());
}

TEST_CASE("deformation by z = 0 is the identity") {
  auto a = poly_algebra<Q>(2, 4);
  auto b = shift(diagonal(a), 2);
  auto dual = dualize_bimodule(b);
  auto e = trivial_extension(a, dual.module, 1);
  auto ez = deform_extension(CentralElement<Q>{b, {}});
  CHECK(same_algebra(*e, *ez));
}

TEST_CASE("Koszul avatar: E^z for z = h has one-dimensional homology below the truncation") {
  const int n = 6;
  auto a = poly_algebra<Q>(2, n);
  auto b = shift(diagonal(a), 2);
  CentralElement<Q> z{b, {{1, Q(1)}}};
  REQUIRE(is_central(z));
  auto ez = deform_extension(z);
  CHECK(validate_algebra(*ez).empty());
  auto h = homology_dims(Complex<Q>(ez->space, ez->d));
  CHECK(restrict_dims(h, -8, 2 * n - 3) == std::map<int, int>{{0, 1}});
}

TEST_CASE("twisted dual numbers violate the derivation condition") {
  auto a = ungraded_dual_numbers();
  auto b = twisted(a, -1);
  REQUIRE(validate_bimodule(b).empty());
  CentralElement<Q> z{b, {{1, Q(1)}}};
  REQUIRE(is_central(z));
  auto chk = derivation_condition(z);
  CHECK_FALSE(chk.tensor_form);
  CHECK_FALSE(chk.pairing_form);
  CHECK_THROWS_AS(deform_extension(z), DerivationConditionFailed);
}

TEST_CASE("brute-force search: both forms of the derivation condition agree") {
  auto a = ungraded_dual_numbers();
  int failures = 0;
  for (int c : {1, -1}) {
    auto b = twisted(a, c);
    for (int u = -1; u <= 1; ++u)
      for (int v = -1; v <= 1; ++v) {
        SpVec<Q> zv;
        if (u) zv.emplace_back(0, Q(u));
        if (v) zv.emplace_back(1, Q(v));
        CentralElement<Q> z{b, zv};
        if (!is_central(z)) continue;
        auto chk = derivation_condition(z);
        CHECK(chk.tensor_form == chk.pairing_form);
        if (!chk.tensor_form) {
          ++failures;
          CHECK(c == -1);  // B != A
        }
      }
  }
  CHECK(failures > 0);
}

TEST_CASE("inverse bimodules and invertibility witnesses") {
  auto a = poly_algebra<Q>(2, 3);
  auto diag = diagonal(a);
  CHECK(dualize_bimodule(diag).module.space.dims() == diag.space.dims());
  auto w = check_invertible(diag, diag, {-6, 6});
  CHECK(w.invertible);

  auto kk = product_of_fields<Q>(2);
  auto e = [](std::vector<std::tuple<int, int>> t) {
    Triplets<Q> tr;
    for (auto& [r, c] : t) tr.emplace_back(r, c, Q(1));
    return from_triplets<Q>(2, 2, tr);
  };
  auto swap = make_bimodule<Q>("swap", kk, kk, GradedSpace({0, 0}), {}, {e({{0, 0}}), e({{1, 1}})},
                               {e({{1, 1}}), e({{0, 0}})});
  CHECK(check_invertible(swap, swap, {-2, 2}).invertible);

  auto k = field_algebra<Q>();
  auto two = direct_sum(diagonal(k), diagonal(k));
  auto r = check_invertible(two, diagonal(k), {-2, 2});
  CHECK_FALSE(r.invertible);
  CHECK(r.rank_defect == 1);
  CHECK_THROWS_AS(require_invertible(two, diagonal(k), {-2, 2}), NotInvertible);
}

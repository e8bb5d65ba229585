#include <catch_amalgamated.hpp>

#include "sph/kernel.hpp"

using namespace sph;
using Q = Rational;

namespace {

const Window kWin{-12, 12};

DgBimodule<Q> swap_bimodule(const AlgPtr<Q>& a) {
  auto m = [](int r, int c) { return from_triplets<Q>(2, 2, {{r, c, Q(1)}}); };
  return make_bimodule<Q>("swap", a, a, GradedSpace({0, 0}), {}, {m(0, 0), m(1, 1)}, {m(1, 1), m(0, 0)});
}

struct GradedExample {
  AlgPtr<Q> a, e;
  DgBimodule<Q> b;
};

// A = k[h]/h^n, B = A[2], E = A (+) B^v[1].
GradedExample graded_example(int n) {
  auto a = poly_algebra<Q>(2, n);
  auto b = shift(diagonal(a), 2);
  auto e = trivial_extension(a, dualize_bimodule(b).module, 1, "E");
  return {a, e, b};
}

}  // namespace

TEST_CASE("identity kernel: adjoint is the identity and the twist vanishes") {
  auto a = poly_algebra<Q>(2, 3);
  auto adj = right_adjunction(identity_kernel(a), kWin);
  CHECK(find_quasi_iso(diagonal(a), adj.r.module, kWin).found);
  CHECK(equal<Q>(triangle_composite(adj), identity<Q>(adj.p.dim())));
  CHECK(homology_dims(twist_kernel(adj).kernel).empty());
  CHECK(homology_dims(cotwist_kernel(adj).kernel).empty());
  auto l = left_adjunction(identity_kernel(a), kWin);
  REQUIRE(validate_bimodule(l.l).empty());
  CHECK(find_quasi_iso(diagonal(a), l.l, kWin).found);
}

TEST_CASE("swap composed with itself is the identity") {
  auto a = product_of_fields<Q>(2);
  KernelFunctor<Q> s{"swap", swap_bimodule(a)};
  auto ss = compose_kernels(s, s, kWin);
  CHECK(find_quasi_iso(diagonal(a), ss.kernel, kWin).found);
  CHECK_FALSE(find_quasi_iso(diagonal(a), s.kernel, kWin).found);
}

TEST_CASE("restriction along A -> E: FR = A (+) B[-1] and T = B") {
  auto ex = graded_example(4);
  KernelFunctor<Q> f{"j_*", restriction_kernel(ex.e, ex.a)};
  auto adj = right_adjunction(f, kWin);
  REQUIRE(adj.resolution == nullptr);
  REQUIRE(validate_bimodule(adj.r.module).empty());
  CHECK(adj.r.module.dim() == ex.e->dim());
  auto expected = direct_sum(diagonal(ex.a), shift(ex.b, -1));
  CHECK(find_quasi_iso(expected, adj.fr.module, kWin).found);
  auto t = twist_kernel(adj);
  REQUIRE(validate_bimodule(t.kernel).empty());
  CHECK(find_quasi_iso(ex.b, t.kernel, kWin).found);
  CHECK_FALSE(find_quasi_iso(diagonal(ex.a), t.kernel, kWin).found);
  CHECK(equal<Q>(triangle_composite(adj), identity<Q>(adj.p.dim())));
}

TEST_CASE("left adjoint of restriction is induction up to the twist") {
  auto ex = graded_example(4);
  KernelFunctor<Q> f{"j_*", restriction_kernel(ex.e, ex.a)};
  auto l = left_adjunction(f, kWin);
  REQUIRE(validate_bimodule(l.l).empty());
  // The left adjoint of restriction is induction: E as an (A, E)-bimodule.
  CHECK(find_quasi_iso(induction_kernel(ex.e, ex.a), l.l, kWin).found);
  REQUIRE(is_bimodule_map(diagonal(ex.a), l.fl, l.unit, 0));
  auto tp = dual_twist_kernel(l);
  REQUIRE(validate_bimodule(tp.kernel).empty());
}

TEST_CASE("composition checks endpoints") {
  auto a = poly_algebra<Q>(2, 3);
  auto b = product_of_fields<Q>(2);
  CHECK_THROWS_AS(compose_kernels(identity_kernel(a), identity_kernel(b), kWin), EndpointMismatch);
}

#include <catch_amalgamated.hpp>

#include "sph/spherical.hpp"

using namespace sph;
using Q = Rational;

namespace {

const Window kWin{-8, 8};

DgBimodule<Q> swap_bimodule(const AlgPtr<Q>& a) {
  auto m = [](int r, int c) { return from_triplets<Q>(2, 2, {{r, c, Q(1)}}); };
  return make_bimodule<Q>("swap", a, a, GradedSpace({0, 0}), {}, {m(0, 0), m(1, 1)}, {m(1, 1), m(0, 0)});
}

struct Instance {
  AlgPtr<Q> a, e;
  DgBimodule<Q> b;
  KernelFunctor<Q> j;
};

Instance make_instance(bool swap, int s) {
  auto a = swap ? product_of_fields<Q>(2) : field_algebra<Q>();
  auto b = swap ? swap_bimodule(a) : diagonal(a);
  auto e = trivial_extension(a, dualize_bimodule(b).module, s, "E");
  return {a, e, b, {"j_*", restriction_kernel(e, a)}};
}

void check_verdicts(const SphericalReport<Q>& r) {
  for (auto& c : r.conditions)
    for (auto& [xy, q] : c.certificates)
      if (q.found) CHECK(reverify(xy.first, xy.second, q));
  CHECK(two_implies_four(r).consistent);
}

}  // namespace

TEST_CASE("diagonal kernel is not spherical") {
  auto a = poly_algebra<Q>(2, 3);
  auto r = spherical_report(identity_kernel(a), kWin);
  CHECK(r.conditions[0].verdict == Verdict::refuted);
  CHECK(r.conditions[1].verdict == Verdict::refuted);
  CHECK(r.conditions[2].verdict == Verdict::refuted);
  CHECK(r.certified() == 0);
  CHECK_FALSE(r.spherical());
}

TEST_CASE("restriction to an ungraded square-zero extension: T = B[1]") {
  for (bool swap : {false, true}) {
    auto in = make_instance(swap, 0);
    auto d = spherical_data(in.j, kWin);
    CHECK(find_quasi_iso(shift(in.b, 1), d.t.kernel, kWin).found);
    auto r = spherical_report(d);
    INFO("swap " << swap);
    CHECK(r.conditions[0].verdict == Verdict::certified);
    CHECK(r.conditions[2].verdict == Verdict::certified);
    CHECK(r.spherical());
    check_verdicts(r);
  }
}

TEST_CASE("restriction to a graded square-zero extension: T = B") {
  for (bool swap : {false, true}) {
    auto in = make_instance(swap, 1);
    auto d = spherical_data(in.j, kWin);
    CHECK(find_quasi_iso(in.b, d.t.kernel, kWin).found);
    auto r = spherical_report(d);
    INFO("swap " << swap);
    CHECK(r.conditions[0].verdict == Verdict::certified);
    CHECK(r.conditions[2].verdict == Verdict::certified);
    CHECK(r.certified() == 4);
    check_verdicts(r);
  }
}

TEST_CASE("a supplied inverse candidate is used first") {
  auto in = make_instance(true, 1);
  auto d = spherical_data(in.j, kWin);
  KernelFunctor<Q> inv{"B^v", dualize_bimodule(in.b).module};
  auto c = check_condition_i(d, std::optional<KernelFunctor<Q>>(inv));
  CHECK(c.verdict == Verdict::certified);
  CHECK(c.candidate == "B^v");
}

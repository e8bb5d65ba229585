// P^n-objects in Perf(Lambda) for a finite graded Frobenius algebra Lambda,
// the functor F: k[h]-mod -> Lambda-mod sending A to P, its cotwist, the
// double-cone P-twist kernel and the Koszul-dual object S = [P[-1] -h-> P].
#pragma once

#include "sph/spherical.hpp"

namespace sph {

template <typename S>
struct PObjectModel {
  AlgPtr<S> lambda;
  DgBimodule<S> p;  // (k, Lambda)
  int n = 0;
  SpMat<S> h_action;  // degree 2, Lambda-linear, closed
};

/// Lambda = k[h]/h^{n+1}, P = Lambda, h acting by left multiplication.
template <typename S>
PObjectModel<S> default_p_model(int n) {
  PObjectModel<S> m;
  m.n = n;
  m.lambda = n == 0 ? field_algebra<S>() : poly_algebra<S>(2, n + 1, "h");
  m.p = forget_left(diagonal(m.lambda), field_algebra<S>());
  m.p.name = "P";
  m.h_action = n == 0 ? SpMat<S>(1, 1) : m.lambda->left[1];
  return m;
}

struct PObjectCertificate {
  bool ok = false;
  bool formal = false;
  std::map<int, int> ext_dims;
  std::string failure;
};

namespace detail {

/// Is the closed degree-d map f: x -> x null in H(Hom(x, x))?
template <typename S>
bool null_in_homology(const HomSpace<S>& h, const SpMat<S>& f) {
  EchelonSpan<S> image;
  for (int j = 0; j < h.module.dim(); ++j) image.insert(column<S>(h.module.d, j));
  return image.residual(h.coords(f)).empty();
}

template <typename S>
SpMat<S> power(const SpMat<S>& m, int k) {
  SpMat<S> r = identity<S>(static_cast<int>(m.rows()));
  for (int i = 0; i < k; ++i) r = product<S>(r, m);
  return r;
}

}  // namespace detail

/// Ext(P, P) = k[h]/h^{n+1} with h in degree 2, as a ring; throws ExtRingMismatch.
template <typename S>
PObjectCertificate check_p_object(const PObjectModel<S>& m, const Window& w) {
  PObjectCertificate c;
  if (!right_kprojective(m.p)) throw ExtRingMismatch("P is not K-projective over " + m.lambda->name);
  auto h = hom_over(m.p, m.p);
  c.ext_dims = restrict_dims(homology_dims(h.module), w.lo, w.hi);
  c.formal = is_zero_matrix(h.module.d);
  std::map<int, int> expected;
  for (int i = 0; i <= m.n; ++i) expected[2 * i] = 1;
  if (c.ext_dims != expected)
    throw ExtRingMismatch("Ext(P,P) has dims " + format_dims(c.ext_dims) + ", expected " + format_dims(expected));
  if (m.n > 0) {
    GradedMap<S> hm{m.p.space, m.p.space, 2, m.h_action};
    if (!hm.respects_degree() || !is_bimodule_map(m.p, m.p, m.h_action, 2) || !is_closed(m.p, m.p, m.h_action, 2))
      throw ExtRingMismatch("h is not a closed degree-2 endomorphism of P");
  }
  for (int k = 1; k <= m.n + 1; ++k) {
    const bool null = detail::null_in_homology(h, detail::power(m.h_action, k));
    if (null != (k == m.n + 1))
      throw ExtRingMismatch("h^" + std::to_string(k) + (null ? " vanishes" : " does not vanish") + " in Ext");
  }
  c.ok = true;
  return c;
}

/// Truncation order of k[h] so that artifacts stay outside the window.
inline int truncation_for(const Window& w, int n) { return (w.hi - w.lo) / 2 + n + 4; }

/// F with kernel P as an (A, Lambda)-bimodule, A = k[h]/h^N acting through h.
template <typename S>
KernelFunctor<S> build_F(const PObjectModel<S>& m, int order) {
  auto a = truncated_polynomial<S>(2, order, "h");
  GradedMap<S> hm{m.p.space, m.p.space, 2, m.h_action};
  if (!hm.respects_degree() || !is_bimodule_map(m.p, m.p, m.h_action, 2) || !is_closed(m.p, m.p, m.h_action, 2))
    throw ActionMismatch("h_action is not a closed Lambda-linear map of degree 2");
  std::vector<SpMat<S>> lact;
  for (int i = 0; i < order; ++i) lact.push_back(detail::power(m.h_action, i));
  if (!is_zero_matrix(detail::power(m.h_action, order))) throw ActionMismatch("h^N does not act by zero");
  auto k = make_bimodule<S>("P", a, m.lambda, m.p.space, m.p.d, lact, m.p.ract);
  require_valid(k);
  return {"F", k, {-kUnbounded, kUnbounded}};
}

/// C ~ [-2n-2] and C(h) = h on homology inside the window.
template <typename S>
struct CotwistShift {
  QuasiIsoWitness<S> shift;
  bool h_preserved = false;
};

template <typename S>
CotwistShift<S> cotwist_shift_check(const Adjunction<S>& adj, int n, const Window& w) {
  CotwistShift<S> out;
  auto c = cotwist_kernel(adj);
  Window cw = w.shrink(c.window);
  out.shift = find_quasi_iso(shift(diagonal(adj.p.lalg), -2 * n - 2), c.kernel, cw);
  // Left and right multiplication by h agree on H(C) in the window.
  const auto& x = c.kernel;
  const int hidx = 1;
  SpMat<S> diff = sum<S>(x.lact[hidx], x.ract[hidx], S(-1));
  auto z = kernel<S>(x.d).basis;
  EchelonSpan<S> bnd;
  for (int j = 0; j < x.dim(); ++j) bnd.insert(column<S>(x.d, j));
  out.h_preserved = true;
  for (int j = 0; j < z.cols(); ++j) {
    auto v = column<S>(z, j);
    if (v.empty() || !cw.contains(x.degree(v.front().first)) || !cw.contains(x.degree(v.front().first) + 2)) continue;
    if (!bnd.residual(apply<S>(diff, v)).empty()) out.h_preserved = false;
  }
  return out;
}

/// Two-term bimodule resolution A (x) A[-2] -(h(x)1 - 1(x)h)-> A (x) A of the diagonal.
template <typename S>
BimoduleResolution<S> diagonal_resolution(const AlgPtr<S>& a) {
  auto env = enveloping(a, a);
  auto k = field_algebra<S>();
  Semifree<S> sf(env);
  const int na = a->dim(), u = 0, h = 1;
  sf.add_generator(0, 0, {});
  SpVec<S> dg{{sf.index(0, h * na + u), S(1)}, {sf.index(0, u * na + h), S(-1)}};
  std::sort(dg.begin(), dg.end(), [](auto& p, auto& q) { return p.first < q.first; });
  sf.add_generator(1, 0, dg);
  auto diag = diagonal(a);
  auto target = to_right_module(diag, env, k);
  Resolution<S> res{sf, {{{0, S(1)}}, {}}, target, {-kUnbounded, 2 * na - 3}, false};
  auto p = from_right_module(sf.module(k, "P(diag)"), a, a);
  return {res, p, augmentation(res)};
}

/// Y = P^v (x)_k P, the map h (x) 1 - 1 (x) h: Y[-2] -> Y and evaluation Y -> Lambda.
template <typename S>
struct PTwistPieces {
  DgBimodule<S> y, ys;
  SpMat<S> u, ev;
};

template <typename S>
PTwistPieces<S> ptwist_pieces(const PObjectModel<S>& m) {
  auto pv = hom_over(m.p, diagonal(m.lambda));  // (Lambda, k)
  auto y = tensor_over(pv.module, m.p);          // (Lambda, Lambda)
  const SpMat<S>& h = m.h_action;
  SpMat<S> hv = matrix_from<S>(pv.module.dim(), pv.module.dim(),
                               [&](int i) { return pv.coords(product<S>(pv.maps[i], h)); });
  PTwistPieces<S> out;
  out.y = y.module;
  out.ys = shift(y.module, -2);
  out.u = sum<S>(tensor_map(y, y, pv.module, hv, identity<S>(m.p.dim()), 0),
                 tensor_map(y, y, pv.module, identity<S>(pv.module.dim()), h, 2), S(-1));
  out.ev = matrix_from<S>(m.lambda->dim(), y.module.dim(), [&](int q) {
    auto [i, j] = y.pairs[y.representative[q]];
    return column<S>(pv.maps[i], j);
  });
  return out;
}

/// [P^v (x)_k P [-2] -> P^v (x)_k P -> Lambda] as a (Lambda, Lambda)-bimodule.
template <typename S>
KernelFunctor<S> ptwist_kernel(const PObjectModel<S>& m) {
  auto pc = ptwist_pieces(m);
  auto d = cone(pc.ys, pc.y, pc.u);
  Triplets<S> t;
  add_block<S>(t, pc.ev, 0, pc.ys.dim());
  SpMat<S> dev = from_triplets<S>(m.lambda->dim(), d.dim(), t);
  return {"T_P", cone(d, diagonal(m.lambda), dev), {-kUnbounded, kUnbounded}};
}

/// The single cone [P^v (x)_k P -> Lambda] of a spherical object.
template <typename S>
KernelFunctor<S> spherical_object_twist(const PObjectModel<S>& m) {
  auto pc = ptwist_pieces(m);
  return {"T_S", cone(pc.y, diagonal(m.lambda), pc.ev), {-kUnbounded, kUnbounded}};
}

/// With h = 0 the double cone splits as the single cone plus P^v (x) P.
template <typename S>
QuasiIsoWitness<S> check_collapse(const PObjectModel<S>& m, const Window& w) {
  auto zero = m;
  zero.h_action = SpMat<S>(m.p.dim(), m.p.dim());
  auto split = direct_sum(spherical_object_twist(zero).kernel, ptwist_pieces(zero).y);
  return find_quasi_iso(split, ptwist_kernel(zero).kernel, w);
}

/// S = cone(h: P[-2] -> P) and F(A/h) for comparison.
template <typename S>
struct KoszulDualObject {
  DgBimodule<S> s;
  QuasiIsoWitness<S> image;
  std::map<int, int> ext_dims;
};

template <typename S>
KoszulDualObject<S> koszul_dual_object(const PObjectModel<S>& m, const KernelFunctor<S>& f, const Window& w) {
  KoszulDualObject<S> out;
  out.s = cone(shift(m.p, -2), m.p, m.h_action);
  out.s.name = "S";
  auto a = f.source();
  // A/h as a right A-module
  std::vector<SpMat<S>> r;
  for (int i = 0; i < a->dim(); ++i) r.push_back(i == 0 ? identity<S>(1) : SpMat<S>(1, 1));
  auto kmod = make_bimodule<S>("A/h", field_algebra<S>(), a, GradedSpace({0}), {}, {identity<S>(1)}, r);
  auto fk = apply_kernel(f, kmod, w);
  Window cw = w.shrink(fk.window);
  out.image = find_quasi_iso(out.s, fk.module, cw);
  out.ext_dims = restrict_dims(homology_dims(derived_hom(out.s, out.s, w).module), w.lo, w.hi);
  return out;
}

/// L against R[2n+1].
template <typename S>
struct SerreAvatar {
  QuasiIsoWitness<S> comparison;
  std::map<int, int> l_dims, r_dims;
};

template <typename S>
SerreAvatar<S> verify_serre_avatar(const SphericalData<S>& d, int n) {
  SerreAvatar<S> out;
  const Window& w = d.window;
  auto rs = shift(d.right.r.module, 2 * n + 1);
  out.l_dims = restrict_dims(homology_dims(d.left.l), w.lo, w.hi);
  out.r_dims = restrict_dims(homology_dims(rs), w.lo, w.hi);
  out.comparison = find_quasi_iso(rs, d.left.l, w);
  return out;
}

}  // namespace sph

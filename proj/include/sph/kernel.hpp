// Functors between module categories presented by bimodule kernels:
// F(M) = M (x)^L_A K for K an (A, B)-bimodule. Adjoints, units, counits,
// twists and cotwists are all built at chain level on semifree kernels.
#pragma once

#include "sph/extension.hpp"

namespace sph {

template <typename S>
struct KernelFunctor {
  std::string name;
  DgBimodule<S> kernel;  // (A, B)
  Window window{-kUnbounded, kUnbounded};

  const AlgPtr<S>& source() const { return kernel.lalg; }
  const AlgPtr<S>& target() const { return kernel.ralg; }
};

template <typename S>
KernelFunctor<S> identity_kernel(const AlgPtr<S>& a) {
  return {"id", diagonal(a), {-kUnbounded, kUnbounded}};
}

/// M (x)^L_A K for a right A-module (or (C, A)-bimodule) M.
template <typename S>
DerivedResult<S> apply_kernel(const KernelFunctor<S>& k, const DgBimodule<S>& m, const Window& w) {
  auto r = derived_tensor(m, k.kernel, w);
  r.window = r.window.shrink(k.window);
  return r;
}

/// K1 then K2: kernel K1 (x)^L_B K2.
template <typename S>
KernelFunctor<S> compose_kernels(const KernelFunctor<S>& k1, const KernelFunctor<S>& k2, const Window& w) {
  if (!same_algebra(*k1.target(), *k2.source()))
    throw EndpointMismatch("compose: " + k1.name + " ends where " + k2.name + " does not start");
  auto r = derived_tensor(k1.kernel, k2.kernel, w);
  return {k2.name + "." + k1.name, r.module, r.window.shrink(k1.window).shrink(k2.window)};
}

/// Closed degree-0 bimodule map between kernels with equal endpoints.
template <typename S>
struct NatTransform {
  KernelFunctor<S> source, target;
  SpMat<S> map;
};

template <typename S>
bool is_nat_transform(const NatTransform<S>& t) {
  return is_bimodule_map(t.source.kernel, t.target.kernel, t.map, 0) &&
         is_closed(t.source.kernel, t.target.kernel, t.map, 0);
}

/// Right B-module basis of a K-projective (A, B)-bimodule with its dual basis.
template <typename S>
struct DualBasis {
  std::vector<SpVec<S>> elements;  // x_g in P
  std::vector<SpMat<S>> duals;     // g^*: P -> B (dim B x dim P)
};

template <typename S>
DualBasis<S> dual_basis(const DgBimodule<S>& p) {
  auto res = kprojective_structure(forget_left(p, field_algebra<S>()));
  if (!res) throw NotPerfect("kernel is not K-projective over " + p.ralg->name);
  SpMat<S> aug = augmentation(*res);
  Coordinates<S> coords(aug);
  DualBasis<S> out;
  const auto& sf = res->semifree;
  const int nb = p.ralg->dim();
  std::vector<Triplets<S>> t(sf.generators());
  for (int x = 0; x < p.dim(); ++x) {
    auto c = coords.of(SpVec<S>{{x, S(1)}});
    for (auto& [b, v] : *c) {
      auto [g, r] = sf.basis(b);
      t[g].emplace_back(r, x, v);
    }
  }
  for (int g = 0; g < sf.generators(); ++g) {
    out.elements.push_back(res->aug_images[g]);
    out.duals.push_back(from_triplets<S>(nb, p.dim(), t[g]));
  }
  return out;
}

/// The adjunction F -| R for F with kernel K (A, B), on a working kernel P ~ K
/// that is K-projective over B.
template <typename S>
struct Adjunction {
  KernelFunctor<S> f;
  DgBimodule<S> p;
  std::shared_ptr<BimoduleResolution<S>> resolution;     // set when P was resolved
  std::shared_ptr<BimoduleResolution<S>> fr_resolution;  // set when FR needed a flat replacement
  HomSpace<S> r;                                      // R = Hom_B(P, B), (B, A)
  TensorProduct<S> fr;                                // R (x)_A P, (B, B)
  SpMat<S> counit;                                    // fr -> B
  TensorProduct<S> rf;                                // P (x)_B R, (A, A)
  SpMat<S> unit;                                      // A -> rf
  SpVec<S> coevaluation;                              // in rf
  Window window;

  KernelFunctor<S> right_adjoint() const { return {"R(" + f.name + ")", r.module, window}; }
  KernelFunctor<S> fr_kernel() const { return {"FR", fr.module, window}; }
  KernelFunctor<S> rf_kernel() const { return {"RF", rf.module, window}; }
};

/// Working kernel: K itself when K-projective over B, otherwise a semifree
/// bimodule replacement (generators bounded by the window).
template <typename S>
std::pair<DgBimodule<S>, std::shared_ptr<BimoduleResolution<S>>> working_kernel(const DgBimodule<S>& k,
                                                                                  const Window& w,
                                                                                  Window& sound) {
  sound = {-kUnbounded, kUnbounded};
  if (right_kprojective(k)) return {k, nullptr};
  const int c = enveloping(k.lalg, k.ralg)->connectivity();
  const int margin = (k.lalg->space.max_degree() - k.lalg->space.min_degree()) +
                     (k.ralg->space.max_degree() - k.ralg->space.min_degree()) + 2;
  ResolveOptions o;
  if (c > 0) o.gen_hi = w.hi + margin;
  if (c < 0) o.gen_lo = w.lo - margin;
  std::shared_ptr<BimoduleResolution<S>> br;
  try {
    br = std::make_shared<BimoduleResolution<S>>(resolve_bimodule(k, o));
  } catch (const ConnectivityViolation& e) {
    throw NotPerfect(std::string("kernel ") + k.name + ": " + e.what());
  }
  sound = br->res.certified.shrink(w);
  return {br->bimodule, br};
}

template <typename S>
Adjunction<S> right_adjunction(const KernelFunctor<S>& f, const Window& w) {
  Adjunction<S> adj;
  adj.f = f;
  Window sound;
  std::tie(adj.p, adj.resolution) = working_kernel(f.kernel, w, sound);
  adj.window = sound.shrink(f.window);
  const DgBimodule<S>& p = adj.p;
  auto b = diagonal(p.ralg);
  adj.r = hom_over(p, b);
  // FR = R (x)^L_A P: underived when either side is flat over A, otherwise
  // P is replaced over A^op (x) B and the counit is precomposed with it.
  SpMat<S> over;  // columns: P-side basis -> P
  DgBimodule<S> pl = p;
  if (!left_kprojective(p) && !right_kprojective(adj.r.module)) {
    const int c = enveloping(p.lalg, p.ralg)->connectivity();
    if (c == 2) throw NotPerfect("FR for " + f.name + ": enveloping algebra not connective");
    ResolveOptions o;
    if (c > 0) o.gen_hi = w.hi - adj.r.module.space.min_degree() + 1;
    if (c < 0) o.gen_lo = w.lo - adj.r.module.space.max_degree() - 1;
    adj.fr_resolution = std::make_shared<BimoduleResolution<S>>(resolve_bimodule(p, o));
    pl = adj.fr_resolution->bimodule;
    over = adj.fr_resolution->aug;
    adj.window = adj.window.shrink(w);
  }
  adj.fr = tensor_over(adj.r.module, pl);
  // counit: phi (x) x -> phi(x)
  adj.counit = matrix_from<S>(b.dim(), adj.fr.module.dim(), [&](int q) {
    auto [i, j] = adj.fr.pairs[adj.fr.representative[q]];
    return adj.fr_resolution ? apply<S>(adj.r.maps[i], column<S>(over, j)) : column<S>(adj.r.maps[i], j);
  });
  adj.rf = tensor_over(p, adj.r.module);
  auto db = dual_basis(p);
  SpVec<S> c;
  for (size_t g = 0; g < db.elements.size(); ++g)
    c = axpy<S>(c, adj.rf.project_tensor(db.elements[g], adj.r.coords(db.duals[g])), S(1));
  adj.coevaluation = c;
  auto a = diagonal(p.lalg);
  adj.unit = matrix_from<S>(adj.rf.module.dim(), a.dim(), [&](int i) {
    return apply<S>(adj.rf.module.lact[i], c);
  });
  if (!is_bimodule_map(adj.fr.module, b, adj.counit, 0) || !is_closed(adj.fr.module, b, adj.counit, 0))
    throw std::logic_error("counit is not a closed bimodule map");
  if (!is_bimodule_map(a, adj.rf.module, adj.unit, 0) || !is_closed(a, adj.rf.module, adj.unit, 0))
    throw std::logic_error("unit is not a closed bimodule map");
  return adj;
}

/// (eps F) o (F eta) on the working kernel P, as a matrix P -> P.
template <typename S>
SpMat<S> triangle_composite(const Adjunction<S>& adj) {
  const DgBimodule<S>& p = adj.p;
  auto t3 = tensor_over(adj.rf.module, p);  // (P (x) R) (x) P
  SpMat<S> f_eta = matrix_from<S>(t3.module.dim(), p.dim(), [&](int j) {
    return t3.project_tensor(adj.coevaluation, {{j, S(1)}});
  });
  SpMat<S> eps_f = matrix_from<S>(p.dim(), t3.module.dim(), [&](int q) {
    auto [qi, j] = t3.pairs[t3.representative[q]];
    auto [x, k] = adj.rf.pairs[adj.rf.representative[qi]];
    return apply<S>(p.right_mult(column<S>(adj.r.maps[k], j)), {{x, S(1)}});
  });
  return product<S>(eps_f, f_eta);
}

/// Left adjoint data through transposition: L = R(K^T)^T.
template <typename S>
struct LeftAdjunction {
  Adjunction<S> transposed;  // for F^T with kernel K^T
  DgBimodule<S> l;           // (B, A)
  DgBimodule<S> fl;          // L (x)_A K, (B, B)
  SpMat<S> unit;             // B -> FL
  DgBimodule<S> lf;          // K (x)_B L, (A, A)
  SpMat<S> counit;           // LF -> A
  Window window;

  KernelFunctor<S> left_adjoint() const { return {"L", l, window}; }
};

template <typename S>
LeftAdjunction<S> left_adjunction(const KernelFunctor<S>& f, const Window& w) {
  LeftAdjunction<S> out;
  KernelFunctor<S> ft{f.name + "^T", transpose(f.kernel), f.window};
  out.transposed = right_adjunction(ft, w);
  out.window = out.transposed.window;
  out.l = transpose(out.transposed.r.module);
  out.fl = transpose(out.transposed.rf.module);
  out.unit = out.transposed.unit;
  out.lf = transpose(out.transposed.fr.module);
  out.counit = out.transposed.counit;
  return out;
}

/// T = cone(FR -> id_B); C = cone(id_A -> RF)[-1].
template <typename S>
KernelFunctor<S> twist_kernel(const Adjunction<S>& adj) {
  return {"T", cone(adj.fr.module, diagonal(adj.p.ralg), adj.counit), adj.window};
}

template <typename S>
KernelFunctor<S> cotwist_kernel(const Adjunction<S>& adj) {
  return {"C", shift(cone(diagonal(adj.p.lalg), adj.rf.module, adj.unit), -1), adj.window};
}

/// Dual-twist candidate cone(id_B -> FL)[-1] and cotwist candidate cone(LF -> id_A).
template <typename S>
KernelFunctor<S> dual_twist_kernel(const LeftAdjunction<S>& l) {
  return {"T'", shift(cone(diagonal(l.fl.lalg), l.fl, l.unit), -1), l.window};
}

template <typename S>
KernelFunctor<S> dual_cotwist_kernel(const LeftAdjunction<S>& l) {
  return {"C'", cone(l.lf, diagonal(l.lf.lalg), l.counit), l.window};
}

}  // namespace sph

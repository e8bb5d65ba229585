// The category D_Phi built from an invertible bimodule Phi over A: objects are
// semifree A-modules x (written j^*x), morphisms j^*x -> j^*y are pairs
// (f, f') with f: x -> y and f': x -> Phi^{-1} y[1]. Phi^{-1} is realized as
// the dual bimodule Phi^v = Hom_A(Phi, A). A section sigma: id -> Phi is a
// closed central z in Phi; it twists the differential through
// sigma'_y: y (x) Phi^v -> y, y (x) b -> y b(z).
#pragma once

#include <numeric>

#include "sph/spherical.hpp"

namespace sph {

template <typename S>
struct DPhiMorphism {
  SpMat<S> f;   // x -> y
  SpMat<S> f2;  // x -> Phi^{-1} y
  int degree = 0;
};

enum class SigmaVerdict { strict, homotopy_only, refuted };

inline const char* to_string(SigmaVerdict v) {
  switch (v) {
    case SigmaVerdict::strict: return "strict";
    case SigmaVerdict::homotopy_only: return "homotopy-only";
    default: return "refuted";
  }
}

template <typename S>
class DPhi {
 public:
  DPhi(DgBimodule<S> phi, const Window& w, bool require_inverse = true)
      : a_(phi.lalg), phi_(std::move(phi)), inv_(dualize_bimodule(phi_)), window_(w) {
    if (!same_algebra(*phi_.lalg, *phi_.ralg)) throw EndpointMismatch("Phi must be an endo-bimodule");
    if (require_inverse) cert_ = require_invertible(phi_, inv_.module, w);
  }

  const AlgPtr<S>& algebra() const { return a_; }
  const DgBimodule<S>& phi() const { return phi_; }
  const HomSpace<S>& phi_inverse() const { return inv_; }
  const Window& window() const { return window_; }
  const std::optional<SpVec<S>>& sigma() const { return sigma_; }

  /// Installs sigma; no check here (see check_sigma_condition and endomorphisms).
  void set_sigma(const SpVec<S>& z) {
    if (!is_central(CentralElement<S>{phi_, z})) throw InvalidStructure("sigma is not a closed central element");
    sigma_ = z;
  }

  static void require_object(const DgBimodule<S>& x) {
    if (!right_kprojective(x)) throw InvalidStructure("object " + x.name + " is not semifree");
  }

  TensorProduct<S> inv(const DgBimodule<S>& y) const { return tensor_over(y, inv_.module); }

  /// Phi^{-1}(f) on the shifted objects: (-1)^{|f|} f (x) id.
  SpMat<S> inv_map(const DgBimodule<S>& x, const TensorProduct<S>& ix, const TensorProduct<S>& iy,
                   const SpMat<S>& f, int deg) const {
    return tensor_map(ix, iy, x, f, identity<S>(inv_.module.dim()), 0) * signed_one<S>(deg);
  }

  /// sigma'_y: Phi^{-1} y -> y (zero without a section).
  SpMat<S> sigma_map(const DgBimodule<S>& y, const TensorProduct<S>& iy) const {
    std::vector<SpVec<S>> zeta;
    for (auto& b : inv_.maps) zeta.push_back(sigma_ ? apply<S>(b, *sigma_) : SpVec<S>{});
    return matrix_from<S>(y.dim(), iy.module.dim(), [&](int q) {
      auto [i, j] = iy.pairs[iy.representative[q]];
      return apply<S>(y.right_mult(zeta[j]), {{i, S(1)}});
    });
  }

  /// Phi^{-1} y[1] (+) y with d = [[-d, 0], [sigma', d]].
  DgBimodule<S> hom_target(const DgBimodule<S>& y) const {
    auto iy = inv(y);
    return cone(iy.module, y, sigma_map(y, iy));
  }

  HomSpace<S> hom(const DgBimodule<S>& x, const DgBimodule<S>& y) const {
    require_object(x);
    return hom_over(x, hom_target(y));
  }

  /// Hom element (rows: Phi^{-1} y block, then y) as a pair.
  DPhiMorphism<S> split(const DgBimodule<S>& y, const SpMat<S>& m, int deg) const {
    const int ni = static_cast<int>(m.rows()) - y.dim();
    std::vector<int> top(ni), bottom(y.dim()), cols(m.cols());
    std::iota(top.begin(), top.end(), 0);
    std::iota(bottom.begin(), bottom.end(), ni);
    std::iota(cols.begin(), cols.end(), 0);
    return {submatrix<S>(m, bottom, cols), submatrix<S>(m, top, cols), deg};
  }

  SpMat<S> join(const DPhiMorphism<S>& p) const {
    Triplets<S> t;
    add_block<S>(t, p.f2, 0, 0);
    add_block<S>(t, p.f, static_cast<int>(p.f2.rows()), 0);
    return from_triplets<S>(static_cast<int>(p.f2.rows() + p.f.rows()), static_cast<int>(p.f.cols()), t);
  }

  /// (f, f') o (g, g') = (f g, f' g + Phi^{-1}(f) g') for g: x -> y, f: y -> z.
  DPhiMorphism<S> compose(const DPhiMorphism<S>& fp, const DPhiMorphism<S>& gp, const DgBimodule<S>& y,
                          const TensorProduct<S>& iy, const TensorProduct<S>& iz) const {
    if (fp.f.cols() != gp.f.rows()) throw EndpointMismatch("dphi compose: endpoints differ");
    SpMat<S> second = sum<S>(product<S>(fp.f2, gp.f), product<S>(inv_map(y, iy, iz, fp.f, fp.degree), gp.f2));
    return {product<S>(fp.f, gp.f), second, fp.degree + gp.degree};
  }

  DPhiMorphism<S> identity_morphism(const DgBimodule<S>& x, const TensorProduct<S>& ix) const {
    return {sph::identity<S>(x.dim()), SpMat<S>(ix.module.dim(), x.dim()), 0};
  }

  /// j_*(f, f') on x (+) Phi^{-1}x[1]: [[f, 0], [f', Phi^{-1} f]].
  SpMat<S> j_lower(const DPhiMorphism<S>& p, const DgBimodule<S>& x, const TensorProduct<S>& ix,
                   const TensorProduct<S>& iy) const {
    Triplets<S> t;
    add_block<S>(t, p.f, 0, 0);
    add_block<S>(t, p.f2, static_cast<int>(p.f.rows()), 0);
    add_block<S>(t, inv_map(x, ix, iy, p.f, p.degree), static_cast<int>(p.f.rows()), x.dim());
    return from_triplets<S>(static_cast<int>(p.f.rows() + iy.module.dim()), x.dim() + ix.module.dim(), t);
  }

  /// j_* j^* y = y (+) Phi^{-1} y[1] as an A-module (untwisted).
  DgBimodule<S> j_lower_object(const DgBimodule<S>& y) const {
    return direct_sum(y, shift(inv(y).module, 1));
  }

  /// The object underlying j^! x = j^* Phi[-1] x.
  DgBimodule<S> j_shriek(const DgBimodule<S>& x) const { return shift(tensor_over(x, phi_).module, -1); }

  /// End(j^*x) as a dg-algebra, validated. A failed axiom means the twisted
  /// differential is incompatible with the composition law.
  AlgPtr<S> endomorphisms(const DgBimodule<S>& x) const {
    auto h = hom(x, x);
    auto ix = inv(x);
    const int n = h.module.dim();
    std::vector<DPhiMorphism<S>> basis;
    for (int i = 0; i < n; ++i) basis.push_back(split(x, h.maps[i], h.module.degree(i)));
    auto prod = [&](int i, int j) { return h.coords(join(compose(basis[i], basis[j], x, ix, ix))); };
    auto e = make_algebra<S>("End(j^*" + x.name + ")", h.module.space.degrees(), prod, h.module.d,
                             h.coords(join(identity_morphism(x, ix))), {});
    auto v = validate_algebra(e);
    if (!v.empty()) throw SigmaNotStrict(v.front().axiom + " fails at " + v.front().witness);
    return share(std::move(e));
  }

 private:
  AlgPtr<S> a_;
  DgBimodule<S> phi_;
  HomSpace<S> inv_;
  Window window_;
  InvertibilityWitness<S> cert_;
  std::optional<SpVec<S>> sigma_;
};

/// Homology dimensions of Hom_{D_Phi}(j^*x, j^*y).
template <typename S>
std::map<int, int> dphi_hom_dims(const DPhi<S>& c, const DgBimodule<S>& x, const DgBimodule<S>& y) {
  return homology_dims(c.hom(x, y).module);
}

/// Phi(sigma_x) = sigma_{Phi x}: compared on Phi^v (x) Phi^v -> Phi^v as
/// b1 (x) b2 -> b1(z) b2 versus b1 b2(z).
template <typename S>
struct SigmaCheck {
  SigmaVerdict verdict = SigmaVerdict::strict;
  std::string witness;
};

template <typename S>
SigmaCheck<S> check_sigma_condition(const DPhi<S>& c, const SpVec<S>& z, const Window& w) {
  SigmaCheck<S> out;
  const auto& inv = c.phi_inverse();
  const auto& bv = inv.module;
  auto t = tensor_over(bv, bv);
  std::vector<SpVec<S>> zeta;
  for (auto& b : inv.maps) zeta.push_back(apply<S>(b, z));
  SpMat<S> delta = matrix_from<S>(bv.dim(), t.module.dim(), [&](int q) {
    auto [i, j] = t.pairs[t.representative[q]];
    return axpy<S>(apply<S>(bv.left_mult(zeta[i]), {{j, S(1)}}), apply<S>(bv.right_mult(zeta[j]), {{i, S(1)}}),
                   S(-1));
  });
  if (is_zero_matrix(delta)) return out;
  out.witness = "Phi(sigma) - sigma_Phi has rank " + std::to_string(rank<S>(delta));
  out.verdict = SigmaVerdict::refuted;
  try {
    auto k = field_algebra<S>();
    auto env = enveloping(bv.lalg, bv.ralg);
    ResolveOptions o;
    if (env->connectivity() > 0) o.gen_hi = w.hi + 2;
    if (env->connectivity() < 0) o.gen_lo = w.lo - 2;
    auto br = resolve_bimodule(t.module, o);
    auto ym = to_right_module(bv, env, k);
    auto sh = semifree_hom(br.res.semifree, ym);
    SpMat<S> f = product<S>(delta, br.aug);
    SpVec<S> v;
    for (int i = 0; i < static_cast<int>(sh.basis.size()); ++i) {
      auto [g, yi] = sh.basis[i];
      S x = f.coeff(yi, br.res.semifree.gen_index(g));
      if (!is_zero(x)) v.emplace_back(i, x);
    }
    if (null_homotopy(sh, v)) out.verdict = SigmaVerdict::homotopy_only;
  } catch (const SphError& e) {
    out.witness += std::string("; homotopy search failed: ") + e.what();
  }
  return out;
}

/// D_Phi^sigma: only for strict sigma. Probing End(j^*A) catches a refuted
/// sigma through the dg-algebra axioms even when the check is skipped.
template <typename S>
DPhi<S> dphi_sigma_category(DPhi<S> c, const SpVec<S>& z, const Window& w, bool skip_check = false) {
  if (!skip_check) {
    auto chk = check_sigma_condition(c, z, w);
    if (chk.verdict != SigmaVerdict::strict)
      throw SigmaNotStrict(std::string("sigma is ") + to_string(chk.verdict) + ": " + chk.witness);
  }
  c.set_sigma(z);
  c.endomorphisms(forget_left(diagonal(c.algebra()), field_algebra<S>()));
  return c;
}

/// Realizes j_* as restriction along A -> E_Phi = A (+) Phi^v[1] and certifies
/// that its twist is Phi.
template <typename S>
struct TwistRealization {
  AlgPtr<S> e;
  KernelFunctor<S> j;
  KernelFunctor<S> twist;
  QuasiIsoWitness<S> comparison;
};

template <typename S>
TwistRealization<S> twist_of_jlower(const DgBimodule<S>& phi, const Window& w, int s = 1) {
  TwistRealization<S> out;
  out.e = trivial_extension(phi.lalg, dualize_bimodule(phi).module, s, "E_Phi");
  out.j = {"j_*", restriction_kernel(out.e, phi.lalg)};
  auto adj = right_adjunction(out.j, w);
  out.twist = twist_kernel(adj);
  out.comparison = find_quasi_iso(shift(phi, 1 - s), out.twist.kernel, w.shrink(adj.window));
  return out;
}

/// Hom_{D_Phi^sigma}(j^*x, j^*y) against Hom_C(Lx, Ly) for L with kernel (A, C).
struct ReconstructionComparison {
  std::map<int, int> dphi_dims, source_dims;
  bool agree = false;
  Window window;
};

template <typename S>
ReconstructionComparison reconstruct_compare(const DPhi<S>& c, const KernelFunctor<S>& l, const DgBimodule<S>& x,
                                             const DgBimodule<S>& y, const Window& w) {
  ReconstructionComparison out;
  auto lx = apply_kernel(l, x, w);
  auto ly = apply_kernel(l, y, w);
  auto h = derived_hom(lx.module, ly.module, w);
  out.window = w.shrink(lx.window).shrink(ly.window).shrink(h.window);
  out.source_dims = restrict_dims(homology_dims(h.module), out.window.lo, out.window.hi);
  out.dphi_dims = restrict_dims(dphi_hom_dims(c, x, y), out.window.lo, out.window.hi);
  out.agree = out.source_dims == out.dphi_dims;
  return out;
}

}  // namespace sph

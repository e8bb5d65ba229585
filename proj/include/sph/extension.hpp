// Square-zero extensions E = A (+) B^v[s], their deformations E^z by a central
// element, inverse bimodules and invertibility witnesses.
#pragma once

#include "sph/derived.hpp"

namespace sph {

/// E = A (+) M[s] with M an (A, A)-bimodule and M.M = 0. Basis: A, then M.
template <typename S>
AlgPtr<S> trivial_extension(const AlgPtr<S>& a, const DgBimodule<S>& m, int s, const std::string& name = "") {
  if (!same_algebra(*m.lalg, *a) || !same_algebra(*m.ralg, *a))
    throw EndpointMismatch("trivial_extension: bimodule is not over the base algebra");
  const DgBimodule<S> ms = shift(m, s);
  const int na = a->dim(), nm = ms.dim();
  std::vector<int> deg = a->space.degrees();
  for (int d : ms.space.degrees()) deg.push_back(d);
  auto prod = [&](int i, int j) -> SpVec<S> {
    if (i < na && j < na) return a->mul_basis(i, j);
    if (i < na) {
      SpVec<S> v;
      for (auto& [p, c] : column<S>(ms.lact[i], j - na)) v.emplace_back(p + na, c);
      return v;
    }
    if (j < na) {
      SpVec<S> v;
      for (auto& [p, c] : column<S>(ms.ract[j], i - na)) v.emplace_back(p + na, c);
      return v;
    }
    return {};
  };
  SpMat<S> d = block_diag<S>(a->d, ms.d);
  std::vector<std::string> labels = a->labels;
  for (int i = 0; i < nm; ++i) labels.push_back("b" + std::to_string(i));
  std::string nm_ = name.empty() ? a->name + "+" + m.name + "[" + std::to_string(s) + "]" : name;
  auto e = make_algebra<S>(nm_, deg, prod, d, a->unit, a->idempotents, labels);
  if (a->artifact) e.artifact = std::max(0, *a->artifact - std::abs(s));
  require_valid(e);
  return share(std::move(e));
}

/// The inclusion j: A -> E as the (E, A)-bimodule E (restriction kernel) and
/// related bimodules are built from this index map: A sits in E at 0..dim A-1.
template <typename S>
DgBimodule<S> restriction_kernel(const AlgPtr<S>& e, const AlgPtr<S>& a) {
  std::vector<SpMat<S>> r;
  for (int i = 0; i < a->dim(); ++i) r.push_back(e->right[i]);
  return make_bimodule<S>(e->name + "|" + a->name, e, a, e->space, e->d, e->left, r);
}

/// E as an (A, E)-bimodule (induction kernel, - (x)_A E).
template <typename S>
DgBimodule<S> induction_kernel(const AlgPtr<S>& e, const AlgPtr<S>& a) {
  std::vector<SpMat<S>> l;
  for (int i = 0; i < a->dim(); ++i) l.push_back(e->left[i]);
  return make_bimodule<S>(a->name + "|" + e->name, a, e, e->space, e->d, l, e->right);
}

/// z in B (a vector of degree 0) with c z = z c for all c in A: a bimodule map A -> B.
template <typename S>
struct CentralElement {
  DgBimodule<S> host;
  SpVec<S> z;
};

template <typename S>
bool is_central(const CentralElement<S>& c) {
  const DgBimodule<S>& b = c.host;
  for (auto& [i, x] : c.z)
    if (b.degree(i) != 0) return false;
  if (!apply<S>(b.d, c.z).empty()) return false;
  for (int a = 0; a < b.lalg->dim(); ++a)
    if (apply<S>(b.lact[a], c.z) != apply<S>(b.ract[a], c.z)) return false;
  return true;
}

/// B^v = Hom_A(B, A) with its natural (A, A)-actions.
template <typename S>
HomSpace<S> dualize_bimodule(const DgBimodule<S>& b) {
  HomSpace<S> h = hom_over(b, diagonal(b.ralg));
  h.module.name = b.name + "^v";
  return h;
}

/// Result of comparing b (x) z with z (x) b and z(beta1) beta2 with beta1 z(beta2).
struct DerivationCheck {
  bool tensor_form = true;   // b (x) z = z (x) b for all basis b
  bool pairing_form = true;  // z(beta1) beta2 = beta1 z(beta2) for all beta
  std::string witness;
};

template <typename S>
DerivationCheck derivation_condition(const CentralElement<S>& c) {
  DerivationCheck out;
  const DgBimodule<S>& b = c.host;
  auto t = tensor_over(b, b);
  for (int i = 0; i < b.dim(); ++i)
    if (t.project_tensor({{i, S(1)}}, c.z) != t.project_tensor(c.z, {{i, S(1)}})) {
      out.tensor_form = false;
      if (out.witness.empty()) out.witness = "b" + std::to_string(i);
    }
  // z(beta) = beta(z) in A; check zeta(b1) b2 = b1 zeta(b2) in B^v.
  auto dual = dualize_bimodule(b);
  const auto& bv = dual.module;
  std::vector<SpVec<S>> zeta;
  for (auto& phi : dual.maps) zeta.push_back(apply<S>(phi, c.z));
  for (int i = 0; i < bv.dim(); ++i)
    for (int j = 0; j < bv.dim(); ++j) {
      SpVec<S> lhs = apply<S>(bv.left_mult(zeta[i]), {{j, S(1)}});
      SpVec<S> rhs = apply<S>(bv.right_mult(zeta[j]), {{i, S(1)}});
      if (lhs != rhs) {
        out.pairing_form = false;
        if (out.witness.empty()) out.witness = "beta" + std::to_string(i) + ",beta" + std::to_string(j);
      }
    }
  return out;
}

/// E^z: E = A (+) B^v[1] with d(beta) = beta(z) added to the differential.
template <typename S>
AlgPtr<S> deform_extension(const CentralElement<S>& c, const std::string& name = "") {
  if (!is_central(c)) throw InvalidStructure("deform_extension: z is not a closed central element");
  auto chk = derivation_condition(c);
  if (!chk.tensor_form || !chk.pairing_form)
    throw DerivationConditionFailed("b (x) z != z (x) b at " + chk.witness);
  const AlgPtr<S>& a = c.host.lalg;
  auto dual = dualize_bimodule(c.host);
  auto e = trivial_extension(a, dual.module, 1, name.empty() ? "E^z" : name);
  const int na = a->dim();
  Triplets<S> t;
  for (int i = 0; i < static_cast<int>(dual.maps.size()); ++i)
    for (auto& [p, x] : apply<S>(dual.maps[i], c.z)) t.emplace_back(p, na + i, x);
  SpMat<S> dz = from_triplets<S>(e->dim(), e->dim(), t);
  DgAlgebra<S> ez = *e;
  ez.d = sum<S>(e->d, dz);
  auto v = validate_algebra(ez);
  if (!v.empty()) throw DerivationConditionFailed(v.front().axiom + " fails at " + v.front().witness);
  return share(std::move(ez));
}

/// Witnesses B (x)^L C ~ A and C (x)^L B ~ A.
template <typename S>
struct InvertibilityWitness {
  bool invertible = false;
  int rank_defect = 0;
  QuasiIsoWitness<S> bc, cb;
};

template <typename S>
InvertibilityWitness<S> check_invertible(const DgBimodule<S>& b, const DgBimodule<S>& c, const Window& w) {
  InvertibilityWitness<S> out;
  auto diag = diagonal(b.lalg);
  auto bc = derived_tensor(b, c, w);
  auto cb = derived_tensor(c, b, w);
  Window ww = w.shrink(bc.window).shrink(cb.window);
  out.bc = find_quasi_iso(diag, bc.module, ww);
  out.cb = find_quasi_iso(diagonal(c.lalg), cb.module, ww);
  out.invertible = out.bc.found && out.cb.found;
  out.rank_defect = out.invertible ? 0 : std::max(total(out.bc.defect), total(out.cb.defect));
  return out;
}

template <typename S>
InvertibilityWitness<S> require_invertible(const DgBimodule<S>& b, const DgBimodule<S>& c, const Window& w) {
  auto r = check_invertible(b, c, w);
  if (!r.invertible) throw NotInvertible("rank defect " + std::to_string(r.rank_defect));
  return r;
}

}  // namespace sph

// Derived tensor and Hom of bimodules, quasi-isomorphism certification and
// search, null-homotopies, truncation stability.
#pragma once

#include <random>

#include "sph/semifree.hpp"

namespace sph {

/// Semifree structure of a module that is already free as a graded module,
/// with a filtration ordering of its generators; nullopt otherwise.
template <typename S>
std::optional<Resolution<S>> free_structure(const DgBimodule<S>& m) {
  const DgAlgebra<S>& r = *m.ralg;
  if (!r.homogeneous() || (m.dim() && !m.right_homogeneous())) return std::nullopt;
  std::vector<int> rad;
  for (int a = 0; a < r.dim(); ++a)
    if (std::find(r.idempotents.begin(), r.idempotents.end(), a) == r.idempotents.end()) rad.push_back(a);
  EchelonSpan<S> span;
  for (int a : rad)
    for (int x = 0; x < m.dim(); ++x) span.insert(column<S>(m.ract[a], x));
  std::vector<int> order(m.dim());
  for (int i = 0; i < m.dim(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return m.degree(a) < m.degree(b); });
  std::vector<int> gens;
  for (int x : order)
    if (span.insert({{x, S(1)}})) gens.push_back(x);
  // columns x_g . r
  std::vector<SpVec<S>> cols;
  std::vector<std::pair<int, int>> label;
  for (int gi = 0; gi < static_cast<int>(gens.size()); ++gi)
    for (int a = 0; a < r.dim(); ++a)
      if (r.lidem[a] == m.rid[gens[gi]]) {
        cols.push_back(column<S>(m.ract[a], gens[gi]));
        label.emplace_back(gi, a);
      }
  if (static_cast<int>(cols.size()) != m.dim()) return std::nullopt;
  SpMat<S> f = from_columns<S>(m.dim(), cols);
  if (rank<S>(f) != m.dim()) return std::nullopt;
  Coordinates<S> coords(f);
  const int ng = static_cast<int>(gens.size());
  std::vector<SpVec<S>> dco(ng);
  std::vector<std::vector<int>> deps(ng);
  for (int gi = 0; gi < ng; ++gi) {
    dco[gi] = *coords.of(column<S>(m.d, gens[gi]));
    for (auto& [c, x] : dco[gi]) deps[gi].push_back(label[c].first);
  }
  // topological order: dependencies first
  std::vector<int> state(ng, 0), topo;
  std::function<bool(int)> visit = [&](int g) {
    if (state[g] == 2) return true;
    if (state[g] == 1) return false;
    state[g] = 1;
    for (int h : deps[g])
      if (!visit(h)) return false;
    state[g] = 2;
    topo.push_back(g);
    return true;
  };
  for (int g = 0; g < ng; ++g)
    if (!visit(g)) return std::nullopt;
  std::vector<int> newpos(ng);
  for (int i = 0; i < ng; ++i) newpos[topo[i]] = i;
  Resolution<S> res{Semifree<S>(m.ralg), {}, m, {-1000000, 1000000}, true};
  for (int g : topo) {
    std::map<int, S> acc;
    for (auto& [c, x] : dco[g]) {
      auto [h, a] = label[c];
      acc[res.semifree.index(newpos[h], a)] += x;
    }
    SpVec<S> dg;
    for (auto& [i, x] : acc)
      if (!is_zero(x)) dg.emplace_back(i, x);
    res.semifree.add_generator(m.degree(gens[g]), m.rid[gens[g]], dg);
    res.aug_images.push_back({{gens[g], S(1)}});
  }
  return res;
}

/// Is M (a right module, left action ignored) K-projective? Detected by a
/// free structure or by a minimal resolution whose augmentation is an iso.
template <typename S>
std::optional<Resolution<S>> kprojective_structure(const DgBimodule<S>& m, int budget = 64) {
  if (auto f = free_structure(m)) return f;
  if (m.ralg->connectivity() == 2 || !m.ralg->homogeneous()) return std::nullopt;
  try {
    ResolveOptions o;
    o.budget = budget;
    auto r = semifree_resolution(m, o);
    if (r.exact) return r;
  } catch (const WindowExhausted&) {
  }
  return std::nullopt;
}

template <typename S>
bool right_kprojective(const DgBimodule<S>& x) {
  return kprojective_structure(forget_left(x, field_algebra<S>())).has_value();
}

template <typename S>
bool left_kprojective(const DgBimodule<S>& x) {
  return kprojective_structure(forget_left(transpose(x), field_algebra<S>())).has_value();
}

/// Semifree bimodule replacement P -> X over the enveloping algebra.
template <typename S>
struct BimoduleResolution {
  Resolution<S> res;        // over C^op (x) A
  DgBimodule<S> bimodule;   // P as a (C, A)-bimodule
  SpMat<S> aug;             // P -> X
};

template <typename S>
BimoduleResolution<S> resolve_bimodule(const DgBimodule<S>& x, ResolveOptions opts) {
  auto k = field_algebra<S>();
  auto env = enveloping(x.lalg, x.ralg);
  auto xm = to_right_module(x, env, k);
  std::optional<Resolution<S>> r = free_structure(xm);
  if (!r) {
    if (env->connectivity() == 2)
      throw ConnectivityViolation("bimodule resolution of " + x.name + ": enveloping algebra not connective");
    r = semifree_resolution(xm, opts);
  }
  BimoduleResolution<S> out{*r, from_right_module(r->semifree.module(k, "P(" + x.name + ")"), x.lalg, x.ralg),
                            augmentation(*r)};
  return out;
}

template <typename S>
struct DerivedResult {
  DgBimodule<S> module;
  Window window;
};

inline constexpr int kUnbounded = 1000000;

/// X (x)^L_A K for X (C, A) and K (A, B), sound on the returned window.
template <typename S>
DerivedResult<S> derived_tensor(const DgBimodule<S>& x, const DgBimodule<S>& k, const Window& w) {
  if (!same_algebra(*x.ralg, *k.lalg)) throw EndpointMismatch("derived_tensor: " + x.name + " vs " + k.name);
  if (x.dim() == 0 || k.dim() == 0 || right_kprojective(x) || left_kprojective(k))
    return {tensor_over(x, k).module, {-kUnbounded, kUnbounded}};
  // Resolve one side as a bimodule.
  auto try_left = [&]() -> std::optional<DerivedResult<S>> {
    auto env = enveloping(x.lalg, x.ralg);
    int c = env->connectivity();
    if (c == 2) return std::nullopt;
    ResolveOptions o;
    if (c > 0) o.gen_hi = w.hi - k.space.min_degree() + 1;
    if (c < 0) o.gen_lo = w.lo - k.space.max_degree() - 1;
    auto br = resolve_bimodule(x, o);
    return DerivedResult<S>{tensor_over(br.bimodule, k).module, w};
  };
  auto try_right = [&]() -> std::optional<DerivedResult<S>> {
    auto env = enveloping(k.lalg, k.ralg);
    int c = env->connectivity();
    if (c == 2) return std::nullopt;
    ResolveOptions o;
    if (c > 0) o.gen_hi = w.hi - x.space.min_degree() + 1;
    if (c < 0) o.gen_lo = w.lo - x.space.max_degree() - 1;
    auto br = resolve_bimodule(k, o);
    return DerivedResult<S>{tensor_over(x, br.bimodule).module, w};
  };
  if (auto r = try_left()) return *r;
  if (auto r = try_right()) return *r;
  throw ConnectivityViolation("derived_tensor: neither side can be resolved");
}

/// RHom_A(X, Y) for X (C, A) and Y (D, A), as a (D, C)-bimodule.
template <typename S>
DerivedResult<S> derived_hom(const DgBimodule<S>& x, const DgBimodule<S>& y, const Window& w) {
  if (x.dim() == 0 || y.dim() == 0 || right_kprojective(x))
    return {hom_over(x, y).module, {-kUnbounded, kUnbounded}};
  auto env = enveloping(x.lalg, x.ralg);
  int c = env->connectivity();
  if (c == 2) throw ConnectivityViolation("derived_hom: cannot resolve " + x.name);
  ResolveOptions o;
  if (c > 0) o.gen_hi = y.space.max_degree() - w.lo + 1;
  if (c < 0) o.gen_lo = y.space.min_degree() - w.hi - 1;
  auto br = resolve_bimodule(x, o);
  return {hom_over(br.bimodule, y).module, w};
}

/// Hom_R(P, Y) for semifree P as a complex: basis (g, y) with y = y e_{t(g)},
/// degree |y| - |g|; (D phi)(g) = d phi(g) - (-1)^{|phi|} phi(dg).
template <typename S>
struct SemifreeHom {
  const Semifree<S>* p = nullptr;
  const DgBimodule<S>* y = nullptr;
  std::vector<std::pair<int, int>> basis;
  Complex<S> complex;

  std::vector<SpVec<S>> images(const SpVec<S>& v) const {
    std::vector<SpVec<S>> out(p->generators());
    for (auto& [i, c] : v) out[basis[i].first].emplace_back(basis[i].second, c);
    for (auto& o : out) std::sort(o.begin(), o.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return out;
  }
  SpMat<S> matrix(const SpVec<S>& v) const { return p->extend(*y, images(v)); }
};

template <typename S>
SemifreeHom<S> semifree_hom(const Semifree<S>& p, const DgBimodule<S>& y) {
  SemifreeHom<S> h;
  h.p = &p;
  h.y = &y;
  const auto& idem = p.algebra()->idempotents;
  std::map<std::pair<int, int>, int> idx;
  std::vector<int> deg;
  for (int g = 0; g < p.generators(); ++g)
    for (int yi = 0; yi < y.dim(); ++yi)
      if (y.rid[yi] == p.gen_idem(g)) {
        idx[{g, yi}] = static_cast<int>(h.basis.size());
        h.basis.emplace_back(g, yi);
        deg.push_back(y.degree(yi) - p.gen_degree(g));
      }
  (void)idem;
  // d(g2) = sum c (g, r): contributes -(-1)^{|phi|} c y.r at generator g2
  std::vector<std::vector<std::tuple<int, int, S>>> uses(p.generators());  // g -> (g2, r, c)
  for (int g2 = 0; g2 < p.generators(); ++g2)
    for (auto& [b, c] : p.gen_diff(g2)) {
      auto [g, r] = p.basis(b);
      uses[g].emplace_back(g2, r, c);
    }
  const int n = static_cast<int>(h.basis.size());
  SpMat<S> d = matrix_from<S>(n, n, [&](int i) {
    auto [g, yi] = h.basis[i];
    std::map<int, S> acc;
    for (auto& [y2, c] : column<S>(y.d, yi)) acc[idx.at({g, y2})] += c;
    const S s = -signed_one<S>(deg[i]);
    for (auto& [g2, r, c] : uses[g])
      for (auto& [y2, x] : column<S>(y.ract[r], yi)) acc[idx.at({g2, y2})] += s * c * x;
    SpVec<S> out;
    for (auto& [k, x] : acc)
      if (!is_zero(x)) out.emplace_back(k, x);
    return out;
  });
  h.complex = Complex<S>(GradedSpace(deg), d);
  return h;
}

/// Certificate that a chain map is a quasi-isomorphism on a window.
struct QuasiIsoCertificate {
  bool ok = false;
  Window window;
  std::map<int, int> cone_homology;  // inside the window
};

template <typename S>
QuasiIsoCertificate is_quasi_iso(const Complex<S>& x, const Complex<S>& y, const SpMat<S>& f, const Window& w) {
  QuasiIsoCertificate c;
  c.window = w;
  c.cone_homology = restrict_dims(homology_dims(cone<S>(x, y, f)), w.lo, w.hi);
  c.ok = c.cone_homology.empty();
  return c;
}

/// A zigzag X <- P -> Y certifying X ~ Y on a window.
template <typename S>
struct QuasiIsoWitness {
  bool found = false;
  bool refuted = false;  // homology differs inside the window
  Window window;
  std::map<int, int> defect;  // cone homology of the best candidate
  std::shared_ptr<BimoduleResolution<S>> source;
  SpMat<S> map;  // P -> Y
  std::string reason;
};

inline std::map<int, int> dims_diff(const std::map<int, int>& a, const std::map<int, int>& b) {
  std::map<int, int> out;
  for (auto [d, n] : a) out[d] += n;
  for (auto [d, n] : b) out[d] -= n;
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

inline int total(const std::map<int, int>& m) {
  int t = 0;
  for (auto [d, n] : m) t += std::abs(n);
  return t;
}

/// Searches for a bimodule quasi-isomorphism X ~ Y on the window: resolves X
/// over the enveloping algebra, then tries closed degree-0 maps P -> Y.
template <typename S>
QuasiIsoWitness<S> find_quasi_iso(const DgBimodule<S>& x, const DgBimodule<S>& y, const Window& w,
                                  unsigned seed = 1, int tries = 6) {
  QuasiIsoWitness<S> out;
  out.window = w;
  auto hx = restrict_dims(homology_dims(x), w.lo, w.hi);
  auto hy = restrict_dims(homology_dims(y), w.lo, w.hi);
  if (hx != hy) {
    out.refuted = true;
    out.defect = dims_diff(hx, hy);
    out.reason = "homology differs: " + format_dims(hx) + " vs " + format_dims(hy);
    return out;
  }
  if (!same_algebra(*x.lalg, *y.lalg) || !same_algebra(*x.ralg, *y.ralg))
    throw EndpointMismatch("find_quasi_iso: endpoints differ");
  auto env = enveloping(x.lalg, x.ralg);
  auto k = field_algebra<S>();
  ResolveOptions o;
  int c = env->connectivity();
  if (c > 0) o.gen_hi = w.hi + 2;
  if (c < 0) o.gen_lo = w.lo - 2;
  auto br = std::make_shared<BimoduleResolution<S>>(resolve_bimodule(x, o));
  out.source = br;
  auto ym = to_right_module(y, env, k);
  auto sh = semifree_hom(br->res.semifree, ym);
  // closed degree-0 maps
  auto zero = sh.complex.space.indices(0);
  auto one = sh.complex.space.indices(1);
  if (zero.empty()) {
    out.defect = hx;
    out.reason = "no degree-0 maps";
    return out;
  }
  SpMat<S> blk = submatrix<S>(sh.complex.d, one, zero);
  SpMat<S> cyc = one.empty() ? identity<S>(static_cast<int>(zero.size())) : kernel<S>(blk).basis;
  if (cyc.cols() == 0) {
    out.defect = hx;
    out.reason = "no closed degree-0 maps";
    return out;
  }
  Complex<S> pc = br->bimodule.complex(), yc = y.complex();
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> coef(-3, 3);
  int best = -1;
  for (int t = 0; t < tries; ++t) {
    SpVec<S> v;
    std::map<int, S> acc;
    for (int j = 0; j < cyc.cols(); ++j) {
      int a = (t == 0 && cyc.cols() == 1) ? 1 : coef(rng);
      if (a == 0) continue;
      for (auto& [i, x2] : column<S>(cyc, j)) acc[zero[i]] += S(a) * x2;
    }
    for (auto& [i, x2] : acc)
      if (!is_zero(x2)) v.emplace_back(i, x2);
    SpMat<S> f = sh.matrix(v);
    auto cert = is_quasi_iso(pc, yc, f, w);
    int defect = total(cert.cone_homology);
    if (best < 0 || defect < best) {
      best = defect;
      out.defect = cert.cone_homology;
      out.map = f;
    }
    if (cert.ok) {
      out.found = true;
      out.reason = "cone acyclic on " + to_string(w);
      return out;
    }
  }
  out.reason = "no candidate map is a quasi-isomorphism";
  return out;
}

/// Null-homotopy h of a closed degree-0 map f: P -> Y (D h = f), if any.
template <typename S>
std::optional<SpVec<S>> null_homotopy(const SemifreeHom<S>& sh, const SpVec<S>& f) {
  auto minus = sh.complex.space.indices(-1);
  auto zero = sh.complex.space.indices(0);
  std::vector<int> pos(sh.complex.dim(), -1);
  for (int i = 0; i < static_cast<int>(zero.size()); ++i) pos[zero[i]] = i;
  SpVec<S> rhs;
  for (auto& [i, c] : f) {
    if (pos[i] < 0) return std::nullopt;
    rhs.emplace_back(pos[i], c);
  }
  if (minus.empty()) return rhs.empty() ? std::optional<SpVec<S>>(SpVec<S>{}) : std::nullopt;
  SpMat<S> a = submatrix<S>(sh.complex.d, zero, minus);
  auto sol = solve<S>(a, from_columns<S>(static_cast<int>(zero.size()), {rhs}));
  if (!sol) return std::nullopt;
  SpVec<S> h;
  for (auto& [i, c] : column<S>(*sol, 0)) h.emplace_back(minus[i], c);
  return h;
}

/// Reruns a truncation-dependent computation at N, N+1, N+2 and compares the
/// homology dimensions inside the window.
struct Stability {
  bool sound = true;
  int divergent_degree = 0;
  std::vector<std::map<int, int>> runs;
};

template <typename F>
Stability stability_certify(F&& computation, const Window& w, int n) {
  Stability s;
  for (int i = 0; i < 3; ++i) s.runs.push_back(restrict_dims(computation(n + i), w.lo, w.hi));
  for (int i = 1; i < 3; ++i) {
    auto diff = dims_diff(s.runs[0], s.runs[i]);
    if (!diff.empty()) {
      s.sound = false;
      s.divergent_degree = diff.begin()->first;
    }
  }
  return s;
}

template <typename F>
Stability require_stable(F&& computation, const Window& w, int n) {
  auto s = stability_certify(computation, w, n);
  if (!s.sound) throw Unstable("truncation unstable at degree " + std::to_string(s.divergent_degree));
  return s;
}

}  // namespace sph

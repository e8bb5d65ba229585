// Semifree right modules P = (+)_g g.e_{t(g)} R with an ordered generator list,
// and their minimal resolutions by killing homology of the augmentation cone.
#pragma once

#include "sph/bimodule.hpp"

namespace sph {

struct Window {
  int lo = -8, hi = 8;
  bool contains(int d) const { return d >= lo && d <= hi; }
  Window shrink(const Window& o) const { return {std::max(lo, o.lo), std::min(hi, o.hi)}; }
  friend bool operator==(const Window&, const Window&) = default;
};

inline std::string to_string(const Window& w) {
  return "[" + std::to_string(w.lo) + "," + std::to_string(w.hi) + "]";
}

template <typename S>
class Semifree {
 public:
  explicit Semifree(AlgPtr<S> r) : alg_(std::move(r)) {
    if (!alg_->homogeneous()) throw InvalidStructure("semifree modules need an idempotent-homogeneous algebra");
    rb_.resize(alg_->idempotents.size());
    pos_.assign(alg_->dim(), -1);
    for (int r = 0; r < alg_->dim(); ++r) {
      pos_[r] = static_cast<int>(rb_[alg_->lidem[r]].size());
      rb_[alg_->lidem[r]].push_back(r);
    }
  }

  const AlgPtr<S>& algebra() const { return alg_; }
  int generators() const { return static_cast<int>(gdeg_.size()); }
  int gen_degree(int g) const { return gdeg_[g]; }
  int gen_idem(int g) const { return gidem_[g]; }
  const SpVec<S>& gen_diff(int g) const { return gdiff_[g]; }
  int dim() const { return static_cast<int>(basis_.size()); }
  int degree(int b) const { return bdeg_[b]; }
  std::pair<int, int> basis(int b) const { return basis_[b]; }
  /// Basis index of g.r for r in e_{t(g)} R.
  int index(int g, int r) const { return offset_[g] + pos_[r]; }
  /// Index of g itself (g.e_t).
  int gen_index(int g) const { return index(g, alg_->idempotents[gidem_[g]]); }

  /// Adds a generator of degree deg with idempotent position t and d(g) = dg
  /// (an element of the existing part). Returns its number.
  int add_generator(int deg, int t, SpVec<S> dg) {
    const int g = generators();
    gdeg_.push_back(deg);
    gidem_.push_back(t);
    gdiff_.push_back(std::move(dg));
    offset_.push_back(dim());
    for (int r : rb_[t]) {
      basis_.emplace_back(g, r);
      bdeg_.push_back(deg + alg_->degree(r));
    }
    return g;
  }

  /// (g r) a = g (r a) for v an element of P.
  SpVec<S> act(const SpVec<S>& v, const SpVec<S>& a) const {
    std::map<int, S> acc;
    for (auto& [b, c] : v) {
      auto [g, r] = basis_[b];
      for (auto& [ai, ac] : a)
        for (auto& [r2, x] : alg_->mul_basis(r, ai)) acc[index(g, r2)] += c * ac * x;
    }
    return to_vec(acc);
  }

  /// d(g r) = d(g) r + (-1)^{|g|} g d(r).
  SpVec<S> diff(int b) const {
    auto [g, r] = basis_[b];
    std::map<int, S> acc;
    for (auto& [b2, c] : act(gdiff_[g], {{r, S(1)}})) acc[b2] += c;
    const S s = signed_one<S>(gdeg_[g]);
    for (auto& [r2, x] : alg_->diff(alg_->basis(r))) acc[index(g, r2)] += s * x;
    return to_vec(acc);
  }
  SpVec<S> diff(const SpVec<S>& v) const {
    std::map<int, S> acc;
    for (auto& [b, c] : v)
      for (auto& [b2, x] : diff(b)) acc[b2] += c * x;
    return to_vec(acc);
  }

  std::vector<int> indices(int deg) const {
    std::vector<int> out;
    for (int b = 0; b < dim(); ++b)
      if (bdeg_[b] == deg) out.push_back(b);
    return out;
  }

  /// P as a (k, R)-module.
  DgBimodule<S> module(const AlgPtr<S>& k, const std::string& name = "P") const {
    const int n = dim();
    SpMat<S> d = matrix_from<S>(n, n, [&](int b) { return diff(b); });
    std::vector<SpMat<S>> r;
    for (int a = 0; a < alg_->dim(); ++a)
      r.push_back(matrix_from<S>(n, n, [&](int b) { return act({{b, S(1)}}, {{a, S(1)}}); }));
    return make_bimodule<S>(name, k, alg_, GradedSpace(bdeg_), d, {identity<S>(n)}, r);
  }

  /// Module map P -> Y (a right R-module) given generator images.
  SpMat<S> extend(const DgBimodule<S>& y, const std::vector<SpVec<S>>& images) const {
    return matrix_from<S>(y.dim(), dim(), [&](int b) {
      auto [g, r] = basis_[b];
      return apply<S>(y.ract[r], images[g]);
    });
  }

 private:
  static SpVec<S> to_vec(const std::map<int, S>& m) {
    SpVec<S> out;
    for (auto& [k, x] : m)
      if (!is_zero(x)) out.emplace_back(k, x);
    return out;
  }

  AlgPtr<S> alg_;
  std::vector<std::vector<int>> rb_;
  std::vector<int> pos_;
  std::vector<int> gdeg_, gidem_, offset_;
  std::vector<SpVec<S>> gdiff_;
  std::vector<std::pair<int, int>> basis_;
  std::vector<int> bdeg_;
};

/// A semifree P with a quasi-isomorphism P -> M certified on `certified`
/// (cone of the augmentation acyclic in those degrees).
template <typename S>
struct Resolution {
  Semifree<S> semifree;
  std::vector<SpVec<S>> aug_images;  // image of each generator in M
  DgBimodule<S> target;              // the (k, R)-module M
  Window certified;
  bool exact = false;  // augmentation is an isomorphism
};

struct ResolveOptions {
  int gen_lo = -1000000, gen_hi = 1000000;  // generator degree range
  int budget = 512;
};

/// Augmentation as a matrix M.dim x P.dim.
template <typename S>
SpMat<S> augmentation(const Resolution<S>& res) {
  return res.semifree.extend(res.target, res.aug_images);
}

namespace detail {

/// Homology of cone(P -> M) in degree t: representatives as (z in P, m in M),
/// plus a span of the boundaries.
template <typename S>
struct ConeDegree {
  std::vector<std::pair<SpVec<S>, SpVec<S>>> reps;
  EchelonSpan<S> boundaries;
  std::vector<int> p_idx, m_idx;  // local basis of cone^t
};

template <typename S>
ConeDegree<S> cone_homology(const Semifree<S>& p, const std::vector<SpVec<S>>& aug, const DgBimodule<S>& m,
                            int t) {
  ConeDegree<S> out;
  // cone^s = P^{s+1} (+) M^s for s = t-1, t, t+1
  std::vector<std::vector<int>> pi(3), mi(3);
  for (int s = 0; s < 3; ++s) {
    pi[s] = p.indices(t + s);
    mi[s] = m.space.indices(t - 1 + s);
  }
  auto phi = [&](int b) {
    auto [g, r] = p.basis(b);
    return apply<S>(m.ract[r], aug[g]);
  };
  // local coordinates in piece s: P part first, then M part
  std::vector<std::unordered_map<int, int>> ploc(3), mloc(3);
  for (int s = 0; s < 3; ++s) {
    for (int i = 0; i < static_cast<int>(pi[s].size()); ++i) ploc[s][pi[s][i]] = i;
    for (int i = 0; i < static_cast<int>(mi[s].size()); ++i) mloc[s][mi[s][i]] = static_cast<int>(pi[s].size()) + i;
  }
  auto local_of = [&](int s, const SpVec<S>& z, const SpVec<S>& mm) {
    SpVec<S> v;
    for (auto& [b, c] : z) v.emplace_back(ploc[s].at(b), c);
    for (auto& [b, c] : mm) v.emplace_back(mloc[s].at(b), c);
    std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return v;
  };
  // d(z, m) = (-dz, phi(z) + dm), from piece s to s+1
  auto dcol = [&](int s, bool is_p, int idx) {
    if (is_p) return local_of(s + 1, scale<S>(p.diff(idx), S(-1)), phi(idx));
    return local_of(s + 1, {}, column<S>(m.d, idx));
  };
  auto block = [&](int s) {
    std::vector<SpVec<S>> cols;
    for (int b : pi[s]) cols.push_back(dcol(s, true, b));
    for (int b : mi[s]) cols.push_back(dcol(s, false, b));
    return from_columns<S>(static_cast<int>(pi[s + 1].size() + mi[s + 1].size()), cols);
  };
  out.p_idx = pi[1];
  out.m_idx = mi[1];
  const int n1 = static_cast<int>(pi[1].size() + mi[1].size());
  if (n1 == 0) return out;
  SpMat<S> d0 = block(0), d1 = block(1);
  SpMat<S> cyc = d1.rows() ? kernel<S>(d1).basis : identity<S>(n1);
  for (int j = 0; j < d0.cols(); ++j) out.boundaries.insert(column<S>(d0, j));
  EchelonSpan<S> span = out.boundaries;
  for (int j = 0; j < cyc.cols(); ++j) {
    auto v = column<S>(cyc, j);
    if (!span.insert(v)) continue;
    SpVec<S> z, mm;
    for (auto& [i, c] : v) {
      if (i < static_cast<int>(pi[1].size()))
        z.emplace_back(pi[1][i], c);
      else
        mm.emplace_back(mi[1][i - pi[1].size()], c);
    }
    std::sort(z.begin(), z.end(), [](auto& a, auto& b) { return a.first < b.first; });
    std::sort(mm.begin(), mm.end(), [](auto& a, auto& b) { return a.first < b.first; });
    out.reps.emplace_back(z, mm);
  }
  return out;
}

}  // namespace detail

/// Minimal semifree resolution of a right R-module M (a (k, R)-bimodule),
/// adjoining generators in degrees opts.gen_lo..gen_hi.
template <typename S>
Resolution<S> semifree_resolution(const DgBimodule<S>& m, const ResolveOptions& opts = {}) {
  const AlgPtr<S>& r = m.ralg;
  Resolution<S> res{Semifree<S>(r), {}, m, {}, false};
  if (!m.right_homogeneous() && m.dim() > 0)
    throw InvalidStructure("resolution: module basis is not idempotent-homogeneous");
  int conn = r->connectivity();
  if (m.dim() == 0) {
    res.certified = {-1000000, 1000000};
    res.exact = true;
    return res;
  }
  if (conn == 2) throw ConnectivityViolation("resolution over " + r->name + ": augmentation ideal not of one sign");
  const bool descending = conn < 0;
  int t = descending ? m.space.max_degree() : m.space.min_degree();
  int last = descending ? opts.gen_lo : opts.gen_hi;
  // Past this point generators only kill relations that exist because the
  // algebra is a truncation.
  if (r->artifact) last = descending ? std::max(last, m.space.max_degree() - *r->artifact + 3)
                                     : std::min(last, m.space.min_degree() + *r->artifact - 3);
  auto& p = res.semifree;
  bool complete = false;
  for (;; t += descending ? -1 : 1) {
    if (descending ? t < last : t > last) break;
    // cone^s vanishes for every s beyond t once M and P are exhausted.
    int pext = descending ? 1000000 : -1000000;
    for (int b = 0; b < p.dim(); ++b) pext = descending ? std::min(pext, p.degree(b)) : std::max(pext, p.degree(b));
    if (descending ? (t < m.space.min_degree() && t + 1 < pext) : (t > m.space.max_degree() && t + 1 > pext)) {
      complete = true;
      break;
    }
    for (;;) {
      auto cd = detail::cone_homology(p, res.aug_images, m, t);
      if (cd.reps.empty()) break;
      // split the first class along the idempotents; pick a non-boundary piece
      auto& [z, mm] = cd.reps.front();
      bool added = false;
      for (int q = 0; q < static_cast<int>(r->idempotents.size()) && !added; ++q) {
        const int e = r->idempotents[q];
        SpVec<S> ze = p.act(z, r->basis(e));
        SpVec<S> me = apply<S>(m.ract[e], mm);
        if (ze.empty() && me.empty()) continue;
        // local vector to test against boundaries
        std::map<int, int> loc;
        for (int i = 0; i < static_cast<int>(cd.p_idx.size()); ++i) loc[cd.p_idx[i]] = i;
        for (int i = 0; i < static_cast<int>(cd.m_idx.size()); ++i)
          loc[-1 - cd.m_idx[i]] = static_cast<int>(cd.p_idx.size()) + i;
        SpVec<S> lv;
        for (auto& [b, c] : ze) lv.emplace_back(loc.at(b), c);
        for (auto& [b, c] : me) lv.emplace_back(loc.at(-1 - b), c);
        std::sort(lv.begin(), lv.end(), [](auto& a, auto& b) { return a.first < b.first; });
        if (cd.boundaries.contains(lv)) continue;
        if (p.generators() >= opts.budget)
          throw WindowExhausted("resolution of " + m.name + " exceeded the generator budget of " +
                                std::to_string(opts.budget));
        p.add_generator(t, q, scale<S>(ze, S(-1)));
        res.aug_images.push_back(me);
        added = true;
      }
      if (!added) throw std::logic_error("resolution: homology class with no idempotent component");
    }
  }
  if (complete)
    res.certified = {-1000000, 1000000};
  else if (descending)
    res.certified = {last, 1000000};
  else
    res.certified = {-1000000, last};
  res.exact = complete && p.dim() == m.dim() && rank<S>(augmentation(res)) == m.dim();
  return res;
}


}  // namespace sph

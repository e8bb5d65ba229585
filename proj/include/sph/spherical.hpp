// The four sphericity conditions, each certified by an explicit inverse kernel
// or an explicit quasi-isomorphism, and the "any two imply the rest" check.
#pragma once

#include <array>
#include <optional>

#include "sph/kernel.hpp"

namespace sph {

enum class Verdict { certified, refuted, undetermined };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::refuted: return "refuted";
    default: return "undetermined";
  }
}

template <typename S>
struct ConditionResult {
  Verdict verdict = Verdict::undetermined;
  std::string reason;
  std::string candidate;  // name of the inverse candidate or comparison
  int rank_defect = 0;
  // Each certificate is a pair (X, Y) with a witness X <- P -> Y.
  std::vector<std::pair<std::pair<DgBimodule<S>, DgBimodule<S>>, QuasiIsoWitness<S>>> certificates;
};

template <typename S>
struct SphericalCandidates {
  std::optional<KernelFunctor<S>> twist_inverse, cotwist_inverse;
};

template <typename S>
struct SphericalReport {
  std::array<ConditionResult<S>, 4> conditions;
  Window window;
  int certified() const {
    int n = 0;
    for (auto& c : conditions) n += c.verdict == Verdict::certified;
    return n;
  }
  int refuted() const {
    int n = 0;
    for (auto& c : conditions) n += c.verdict == Verdict::refuted;
    return n;
  }
  bool spherical() const { return certified() >= 2; }
};

/// Re-checks a witness from scratch: both legs are closed bimodule maps and both cones are acyclic.
template <typename S>
bool reverify(const DgBimodule<S>& x, const DgBimodule<S>& y, const QuasiIsoWitness<S>& q) {
  if (!q.found || !q.source) return false;
  const auto& p = q.source->bimodule;
  if (!is_bimodule_map(p, y, q.map, 0) || !is_closed(p, y, q.map, 0)) return false;
  if (!is_bimodule_map(p, x, q.source->aug, 0) || !is_closed(p, x, q.source->aug, 0)) return false;
  return is_quasi_iso(p.complex(), y.complex(), q.map, q.window).ok &&
         is_quasi_iso(p.complex(), x.complex(), q.source->aug, q.window).ok;
}

namespace detail {

template <typename S>
bool acyclic_on(const DgBimodule<S>& m, const Window& w) {
  return restrict_dims(homology_dims(m), w.lo, w.hi).empty();
}

/// X ~ Y recorded into the result; returns the witness.
template <typename S>
const QuasiIsoWitness<S>& record(ConditionResult<S>& r, const DgBimodule<S>& x, const DgBimodule<S>& y,
                                 const Window& w) {
  r.certificates.push_back({{x, y}, find_quasi_iso(x, y, w)});
  return r.certificates.back().second;
}

/// m ~ diag[n] for some n with |n| <= bound, found by matching homology first.
template <typename S>
std::optional<int> shift_type(const DgBimodule<S>& m, const Window& w, int bound = 12) {
  if (!same_algebra(*m.lalg, *m.ralg)) return std::nullopt;
  auto hm = restrict_dims(homology_dims(m), w.lo, w.hi);
  auto diag = diagonal(m.lalg);
  for (int n = -bound; n <= bound; ++n) {
    auto s = shift(diag, n);
    if (restrict_dims(homology_dims(s), w.lo, w.hi) != hm) continue;
    if (find_quasi_iso(s, m, w).found) return n;
  }
  return std::nullopt;
}

/// Autoequivalence test: certified when some candidate K' has X.K' ~ diag ~ K'.X.
template <typename S>
ConditionResult<S> autoequivalence(const KernelFunctor<S>& x, std::vector<KernelFunctor<S>> candidates,
                                   const Window& w) {
  ConditionResult<S> r;
  auto diag = diagonal(x.source());
  if (!acyclic_on(diag, w) && acyclic_on(x.kernel, w)) {
    r.verdict = Verdict::refuted;
    r.rank_defect = total(restrict_dims(homology_dims(diag), w.lo, w.hi));
    r.reason = x.name + " is zero on " + to_string(w);
    return r;
  }
  if (auto n = shift_type(x.kernel, w)) candidates.insert(candidates.begin(), {"[" + std::to_string(-*n) + "]",
                                                                                shift(diag, -*n)});
  for (const auto& c : candidates) {
    ConditionResult<S> trial;
    trial.candidate = c.name;
    try {
      Window cw = w.shrink(c.window);
      auto xc = compose_kernels(x, c, cw);
      auto cx = compose_kernels(c, x, cw);
      cw = cw.shrink(xc.window).shrink(cx.window);
      const auto& a = record(trial, diag, xc.kernel, cw);
      const auto& b = a.found ? record(trial, diag, cx.kernel, cw) : a;
      if (a.found && b.found) {
        trial.verdict = Verdict::certified;
        trial.reason = "inverse " + c.name + " on " + to_string(cw);
        return trial;
      }
      trial.rank_defect = std::max(total(a.defect), total(b.defect));
      r.reason = c.name + ": " + (a.found ? b.reason : a.reason);
      r.rank_defect = trial.rank_defect;
    } catch (const SphError& e) {
      r.reason = c.name + ": " + e.what();
    }
  }
  if (r.reason.empty()) r.reason = "no inverse candidate";
  return r;
}

/// Kernel comparison X ~ Y: refuted on a homology mismatch, else certified or undetermined.
template <typename S>
ConditionResult<S> comparison(const std::string& name, const DgBimodule<S>& x, const DgBimodule<S>& y,
                              const Window& w) {
  ConditionResult<S> r;
  r.candidate = name;
  const auto& q = record(r, x, y, w);
  r.verdict = q.found ? Verdict::certified : q.refuted ? Verdict::refuted : Verdict::undetermined;
  r.rank_defect = total(q.defect);
  r.reason = q.reason;
  return r;
}

template <typename S>
ConditionResult<S> guarded(const std::function<ConditionResult<S>()>& f) {
  try {
    return f();
  } catch (const SphError& e) {
    ConditionResult<S> r;
    r.reason = e.what();
    return r;
  }
}

}  // namespace detail

/// Everything the four checks need, computed once.
template <typename S>
struct SphericalData {
  KernelFunctor<S> f;
  Adjunction<S> right;
  LeftAdjunction<S> left;
  KernelFunctor<S> t, c;
  Window window;
};

template <typename S>
SphericalData<S> spherical_data(const KernelFunctor<S>& f, const Window& w) {
  SphericalData<S> d{f, right_adjunction(f, w), left_adjunction(f, w), {}, {}, w};
  d.t = twist_kernel(d.right);
  d.c = cotwist_kernel(d.right);
  d.window = w.shrink(d.right.window).shrink(d.left.window);
  return d;
}

template <typename S>
ConditionResult<S> check_condition_i(const SphericalData<S>& d, const std::optional<KernelFunctor<S>>& cand = {}) {
  return detail::guarded<S>([&] {
    std::vector<KernelFunctor<S>> cs;
    if (cand) cs.push_back(*cand);
    cs.push_back(dual_twist_kernel(d.left));
    return detail::autoequivalence(d.t, cs, d.window);
  });
}

template <typename S>
ConditionResult<S> check_condition_ii(const SphericalData<S>& d, const std::optional<KernelFunctor<S>>& cand = {}) {
  return detail::guarded<S>([&] {
    std::vector<KernelFunctor<S>> cs;
    if (cand) cs.push_back(*cand);
    cs.push_back(dual_cotwist_kernel(d.left));
    return detail::autoequivalence(d.c, cs, d.window);
  });
}

/// R ~ L T[-1]: T first, then L.
template <typename S>
ConditionResult<S> check_condition_iii(const SphericalData<S>& d) {
  return detail::guarded<S>([&] {
    auto lt = compose_kernels(d.t, d.left.left_adjoint(), d.window);
    Window w = d.window.shrink(lt.window);
    return detail::comparison<S>("L.T[-1]", d.right.r.module, shift(lt.kernel, -1), w);
  });
}

/// R ~ C L[1]: L first, then C.
template <typename S>
ConditionResult<S> check_condition_iv(const SphericalData<S>& d) {
  return detail::guarded<S>([&] {
    auto cl = compose_kernels(d.left.left_adjoint(), d.c, d.window);
    Window w = d.window.shrink(cl.window);
    return detail::comparison<S>("C.L[1]", d.right.r.module, shift(cl.kernel, 1), w);
  });
}

template <typename S>
SphericalReport<S> spherical_report(const SphericalData<S>& d, const SphericalCandidates<S>& cand = {}) {
  SphericalReport<S> r;
  r.window = d.window;
  r.conditions[0] = check_condition_i(d, cand.twist_inverse);
  r.conditions[1] = check_condition_ii(d, cand.cotwist_inverse);
  r.conditions[2] = check_condition_iii(d);
  r.conditions[3] = check_condition_iv(d);
  return r;
}

template <typename S>
SphericalReport<S> spherical_report(const KernelFunctor<S>& f, const Window& w, const SphericalCandidates<S>& cand = {}) {
  return spherical_report(spherical_data(f, w), cand);
}

/// Instance-level consistency: two certified conditions never coexist with a refuted one.
struct Consistency {
  bool consistent = true;
  bool all_four = false;
  std::string red_flag;
};

template <typename S>
Consistency two_implies_four(const SphericalReport<S>& r) {
  Consistency c;
  c.all_four = r.certified() == 4;
  if (r.certified() >= 2 && r.refuted() > 0) {
    c.consistent = false;
    c.red_flag = "two conditions certified but " + std::to_string(r.refuted()) + " refuted";
  }
  return c;
}

}  // namespace sph

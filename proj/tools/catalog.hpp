// Built-in example catalog and the JSON report shared by sphcheck and the
// acceptance runner.
#pragma once

#include <chrono>
#include <functional>
#include <json.hpp>

#include "sph/sph.hpp"

namespace sphcli {

using json = nlohmann::ordered_json;
using sph::Window;

struct Options {
  Window window{-8, 8};
  std::optional<int> trunc;
  bool require_all = false;
};

enum class Outcome { pass, fail, undetermined };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::fail: return "fail";
    default: return "undetermined";
  }
}

inline json dims_json(const std::map<int, int>& d) {
  json a = json::array();
  for (auto [deg, n] : d)
    if (n) a.push_back({deg, n});
  return a;
}

inline json window_json(const Window& w) { return {w.lo, w.hi}; }

template <typename S>
json witness_json(const sph::QuasiIsoWitness<S>& q) {
  json j{{"found", q.found}, {"refuted", q.refuted}, {"window", window_json(q.window)}};
  if (!q.found) j["defect"] = dims_json(q.defect);
  if (!q.reason.empty()) j["reason"] = q.reason;
  return j;
}

template <typename S>
json spherical_json(const sph::SphericalReport<S>& r) {
  static const char* names[] = {"i", "ii", "iii", "iv"};
  json c = json::array();
  for (int i = 0; i < 4; ++i) {
    auto& x = r.conditions[i];
    json e{{"condition", names[i]}, {"verdict", sph::to_string(x.verdict)}, {"reason", x.reason}};
    if (!x.candidate.empty()) e["candidate"] = x.candidate;
    c.push_back(e);
  }
  auto k = sph::two_implies_four(r);
  return {{"conditions", c},
          {"certified", r.certified()},
          {"refuted", r.refuted()},
          {"consistent", k.consistent},
          {"all_four", k.all_four}};
}

/// Tasks accumulate in order; the outcome of the whole report is the worst one.
class Report {
 public:
  Report(std::string name, std::string claim, const Options& o) : opts_(o) {
    j_["example"] = std::move(name);
    j_["claim"] = std::move(claim);
    j_["window"] = window_json(o.window);
    j_["tasks"] = json::array();
    start_ = std::chrono::steady_clock::now();
  }

  void set(const std::string& key, json v) { j_[key] = std::move(v); }

  void add(const std::string& task, Outcome o, json detail = json::object(), bool required = true) {
    json t{{"task", task}, {"outcome", to_string(o)}, {"required", required || opts_.require_all}};
    t["detail"] = std::move(detail);
    j_["tasks"].push_back(t);
  }
  void add(const std::string& task, bool ok, json detail = json::object()) {
    add(task, ok ? Outcome::pass : Outcome::fail, std::move(detail));
  }

  /// Runs f and turns a library error into a failed task.
  void guarded(const std::string& task, const std::function<void()>& f) {
    try {
      f();
    } catch (const std::exception& e) {
      add(task, Outcome::fail, {{"error", e.what()}});
    }
  }

  /// 0 pass, 1 a task failed (or a required task is undetermined).
  int exit_code() const {
    for (auto& t : j_["tasks"]) {
      if (t["outcome"] == "fail") return 1;
      if (t["outcome"] == "undetermined" && t["required"].get<bool>()) return 1;
    }
    return 0;
  }

  json finish() {
    j_["outcome"] = exit_code() == 0 ? "pass" : "fail";
    j_["timing_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_)
                          .count();
    return j_;
  }

 private:
  json j_;
  Options opts_;
  std::chrono::steady_clock::time_point start_;
};

namespace ex {

using namespace sph;

template <typename S>
DgBimodule<S> swap_bimodule(const AlgPtr<S>& a) {
  auto m = [](int r, int c) { return from_triplets<S>(2, 2, {{r, c, S(1)}}); };
  return make_bimodule<S>("swap", a, a, GradedSpace({0, 0}), {}, {m(0, 0), m(1, 1)}, {m(1, 1), m(0, 0)});
}

template <typename S>
AlgPtr<S> ungraded_dual_numbers() {
  return share(make_algebra<S>(
      "k[x]/x^2", {0, 0}, [](int i, int j) { return i + j < 2 ? SpVec<S>{{i + j, S(1)}} : SpVec<S>{}; }, {},
      {{0, S(1)}}, {0}, {"1", "x"}));
}

// k as a right module over an augmented algebra with unit at index 0.
template <typename S>
DgBimodule<S> residue_field(const AlgPtr<S>& a) {
  std::vector<SpMat<S>> r;
  for (int i = 0; i < a->dim(); ++i) r.push_back(i == 0 ? identity<S>(1) : SpMat<S>(1, 1));
  return make_bimodule<S>("k", field_algebra<S>(), a, GradedSpace({0}), {}, {identity<S>(1)}, r);
}

template <typename S>
DgBimodule<S> free_module(const AlgPtr<S>& a) {
  return forget_left(diagonal(a), field_algebra<S>());
}

// Restriction along A -> A (+) B^v[s] for A = k, B = k or A = k x k, B = swap.
template <typename S>
void square_zero(Report& rep, bool swap, int s, const Options& o) {
  const std::string tag = swap ? "k x k, swap" : "k, k";
  auto a = swap ? product_of_fields<S>(2) : field_algebra<S>();
  auto b = swap ? swap_bimodule(a) : diagonal(a);
  auto e = trivial_extension(a, dualize_bimodule(b).module, s, "E");
  KernelFunctor<S> j{"j_*", restriction_kernel(e, a)};
  auto d = spherical_data(j, o.window);
  auto r = spherical_report(d);
  const int expect = s == 0 ? 1 : 0;
  auto t = find_quasi_iso(shift(b, expect), d.t.kernel, o.window.shrink(d.t.window));
  rep.add("twist [" + tag + "]", t.found, {{"expected", "B[" + std::to_string(expect) + "]"}, {"witness", witness_json(t)}});
  bool ok = r.conditions[0].verdict == Verdict::certified && r.conditions[2].verdict == Verdict::certified &&
            two_implies_four(r).consistent;
  rep.add("spherical-check [" + tag + "]", ok, spherical_json(r));
}

template <typename S>
json ex_2_2_ungraded(const Options& o) {
  Report rep("ex-2.2-ungraded", "restriction to A (+) B^v is spherical with twist B[1]; A = k, B = k", o);
  rep.guarded("square-zero", [&] { square_zero<S>(rep, false, 0, o); });
  return rep.finish();
}

template <typename S>
json ex_2_2_swap(const Options& o) {
  Report rep("ex-2.2-swap", "restriction to A (+) B^v is spherical with twist B[1]; A = k x k, B = swap", o);
  rep.guarded("square-zero", [&] { square_zero<S>(rep, true, 0, o); });
  return rep.finish();
}

template <typename S>
json ex_2_2_graded(const Options& o) {
  Report rep("ex-2.2-graded", "restriction to A (+) B^v[1] is spherical with twist B, no shift", o);
  for (bool swap : {false, true}) rep.guarded("square-zero", [&] { square_zero<S>(rep, swap, 1, o); });
  return rep.finish();
}

template <typename S>
json ex_3_1_avatar(const Options& o) {
  Report rep("ex-3.1-avatar",
             "graded Koszul avatar: A = k[h]/h^N, B = A[2], z = h; E^z has rank-one homology and the twist of "
             "restriction is a shifted diagonal",
             o);
  const int n0 = o.trunc.value_or(10);
  rep.set("truncation", n0);
  rep.guarded("avatar", [&] {
    auto build = [&](int n) {
      auto a = truncated_polynomial<S>(2, n);
      auto ez = deform_extension(CentralElement<S>{shift(diagonal(a), 2), {{1, S(1)}}});
      return std::make_pair(a, ez);
    };
    auto [a, ez] = build(n0);
    auto h = restrict_dims(homology_dims(Complex<S>(ez->space, ez->d)), o.window.lo, o.window.hi);
    rep.add("homology E^z", total(h) == 1, {{"dims", dims_json(h)}});
    auto d = spherical_data(KernelFunctor<S>{"j_*", restriction_kernel(ez, a)}, o.window);
    Window tw = o.window.shrink(d.t.window);
    auto st = detail::shift_type(d.t.kernel, tw);
    json det{{"dims", dims_json(restrict_dims(homology_dims(d.t.kernel), tw.lo, tw.hi))}};
    if (st) det["shift"] = *st;
    rep.add("twist", st.has_value(), det);
    auto r = spherical_report(d);
    rep.add("spherical-check", r.spherical() && two_implies_four(r).consistent, spherical_json(r));
    auto twist_dims = [&](int n) {
      auto [a2, e2] = build(n);
      auto t = twist_kernel(right_adjunction(KernelFunctor<S>{"j_*", restriction_kernel(e2, a2)}, o.window));
      return homology_dims(t.kernel);
    };
    auto stab = stability_certify(twist_dims, o.window, n0);
    rep.add("stability", stab.sound, {{"orders", {n0, n0 + 1, n0 + 2}}});
  });
  return rep.finish();
}

template <typename S>
json ex_3_2_deformed(const Options& o) {
  Report rep("ex-3.2-deformed", "E^z for B = A = k[x]/x^2 and central z satisfies the derivation condition", o);
  rep.guarded("deform", [&] {
    auto a = ungraded_dual_numbers<S>();
    for (int c : {0, 1}) {
      SpVec<S> z;
      if (c) z.emplace_back(1, S(1));
      CentralElement<S> ce{diagonal(a), z};
      auto chk = derivation_condition(ce);
      rep.add("derivation-condition z=" + std::string(c ? "x" : "0"), chk.tensor_form && chk.pairing_form);
      auto ez = deform_extension(ce);
      auto v = validate_algebra(*ez);
      rep.add("validate E^z z=" + std::string(c ? "x" : "0"), v.empty(),
              {{"dims", dims_json(homology_dims(Complex<S>(ez->space, ez->d)))}});
    }
  });
  return rep.finish();
}

template <typename S>
json sigma_negative(const Options& o) {
  Report rep("sigma-negative",
             "twisting the right action by x -> -x breaks the derivation condition; the deformation is refused", o);
  rep.guarded("sigma", [&] {
    auto a = ungraded_dual_numbers<S>();
    auto r = a->right;
    r[1] = r[1] * S(-1);
    auto tw = make_bimodule<S>("A_tau", a, a, a->space, {}, a->left, r);
    SpVec<S> z{{1, S(1)}};
    bool refused = false;
    std::string msg;
    try {
      deform_extension(CentralElement<S>{tw, z});
    } catch (const DerivationConditionFailed& e) {
      refused = true;
      msg = e.what();
    }
    rep.add("derivation-condition refused", refused, {{"error", msg}});
    DPhi<S> c(tw, o.window, false);
    auto chk = check_sigma_condition(c, z, o.window);
    rep.add("sigma-check", chk.verdict == SigmaVerdict::refuted, {{"verdict", to_string(chk.verdict)}});
    refused = false;
    try {
      dphi_sigma_category(c, z, o.window, true);
    } catch (const SigmaNotStrict& e) {
      refused = true;
      msg = e.what();
    }
    rep.add("dphi-sigma refused", refused, {{"error", msg}});
    DPhi<S> good(diagonal(a), o.window, false);
    auto ok = check_sigma_condition(good, z, o.window);
    rep.add("sigma-check B = A", ok.verdict == SigmaVerdict::strict, {{"verdict", to_string(ok.verdict)}});
  });
  return rep.finish();
}

template <typename S>
json thm_2_7(const std::string& name, bool swap, const Options& o) {
  Report rep(name, swap ? "the swap autoequivalence of k x k is the twist around j_*"
                        : "the shift [2] on k[h]/h^4 is the twist around j_*",
             o);
  rep.guarded("twist", [&] {
    auto a = swap ? product_of_fields<S>(2) : poly_algebra<S>(2, 4);
    auto phi = swap ? swap_bimodule(a) : shift(diagonal(a), 2);
    auto tr = twist_of_jlower(phi, o.window);
    rep.add("twist", tr.comparison.found, witness_json(tr.comparison));
    auto adj = right_adjunction(tr.j, o.window);
    auto jup = tensor_over(shift(phi, -1), induction_kernel(tr.e, a)).module;
    auto q = find_quasi_iso(jup, adj.r.module, o.window);
    rep.add("right adjoint", q.found, witness_json(q));
    auto r = spherical_report(tr.j, o.window);
    rep.add("spherical-check", r.spherical() && two_implies_four(r).consistent, spherical_json(r));
  });
  return rep.finish();
}

template <typename S>
json prop_3_3(const Options& o) {
  Report rep("prop-3.3-reconstruct", "hom dims in the sigma-deformed category agree with those of L x, L y over E^z",
             o);
  const int n = o.trunc.value_or(6);
  rep.set("truncation", n);
  rep.guarded("reconstruct", [&] {
    auto a = poly_algebra<S>(2, n);
    auto b = shift(diagonal(a), 2);
    SpVec<S> z{{1, S(1)}};
    auto c = dphi_sigma_category(DPhi<S>(b, o.window), z, o.window);
    auto ez = deform_extension(CentralElement<S>{b, z});
    KernelFunctor<S> l{"L", induction_kernel(ez, a)};
    auto p = free_module(a);
    auto cone_h = cone(shift(p, -2), p, a->left[1]);
    cone_h.name = "A/h";
    std::vector<std::pair<DgBimodule<S>, DgBimodule<S>>> objs{{p, p}, {p, shift(p, 2)}, {cone_h, p}, {p, cone_h}};
    for (auto& [x, y] : objs) {
      auto cmp = reconstruct_compare(c, l, x, y, o.window);
      rep.add("reconstruct " + x.name + "," + y.name, cmp.agree,
              {{"dphi", dims_json(cmp.dphi_dims)}, {"source", dims_json(cmp.source_dims)}});
    }
  });
  return rep.finish();
}

template <typename S>
json ex_4(int n, const Options& o) {
  Report rep("ex-4-n" + std::to_string(n),
             "F: k[h]-mod -> Lambda-mod sending A to a P^n-object is spherical with cotwist [-2n-2] and twist the "
             "P-twist",
             o);
  const int order = o.trunc.value_or(truncation_for(o.window, n));
  rep.set("n", n);
  rep.set("truncation", order);
  rep.guarded("ptwist", [&] {
    auto m = default_p_model<S>(n);
    auto pc = check_p_object(m, o.window);
    rep.add("p-object", pc.ok && pc.formal, {{"ext", dims_json(pc.ext_dims)}});
    auto f = build_F(m, order);
    auto d = spherical_data(f, o.window);
    auto cs = cotwist_shift_check(d.right, n, o.window);
    rep.add("cotwist", cs.shift.found, {{"shift", -2 * n - 2}, {"witness", witness_json(cs.shift)}});
    rep.add("cotwist preserves h", cs.h_preserved);
    auto t = twist_kernel(d.right);
    auto cmp = find_quasi_iso(ptwist_kernel(m).kernel, t.kernel, o.window.shrink(t.window));
    rep.add("compare", cmp.found, witness_json(cmp));
    if (n == 0) {
      auto q = check_collapse(m, o.window);
      rep.add("collapse", q.found, witness_json(q));
    }
    auto r = spherical_report(d);
    bool ok = r.conditions[1].verdict == Verdict::certified && r.conditions[3].verdict == Verdict::certified &&
              two_implies_four(r).consistent;
    rep.add("spherical-check", ok, spherical_json(r));
    auto sv = verify_serre_avatar(d, n);
    rep.add("serre", sv.comparison.found ? Outcome::pass : Outcome::undetermined,
            {{"l", dims_json(sv.l_dims)}, {"r_shifted", dims_json(sv.r_dims)}}, false);
    if (n == 1) {
      auto kd = koszul_dual_object(m, f, o.window);
      rep.add("koszul-dual", kd.image.found,
              {{"s", dims_json(homology_dims(kd.s))}, {"ext", dims_json(kd.ext_dims)}});
    }
  });
  return rep.finish();
}

template <typename S>
json koszul_sanity(const Options& o) {
  Report rep("koszul-duality-sanity", "Ext over k[e]/e^2, deg e = -1, of (k, k) is k[h] with deg h = 2", o);
  rep.guarded("ext", [&] {
    Window w{0, 10};
    auto e = poly_algebra<S>(-1, 2, "e");
    auto kk = residue_field(e);
    auto h = restrict_dims(homology_dims(derived_hom(kk, kk, w).module), w.lo, w.hi);
    std::map<int, int> expected;
    for (int i = 0; i <= 10; i += 2) expected[i] = 1;
    rep.add("ext", h == expected, {{"window", window_json(w)}, {"dims", dims_json(h)}});
  });
  return rep.finish();
}

}  // namespace ex

template <typename S>
std::function<json(const Options&)> entry_for(const std::string& name) {
  if (name == "ex-2.2-ungraded") return ex::ex_2_2_ungraded<S>;
  if (name == "ex-2.2-graded") return ex::ex_2_2_graded<S>;
  if (name == "ex-2.2-swap") return ex::ex_2_2_swap<S>;
  if (name == "ex-3.1-avatar") return ex::ex_3_1_avatar<S>;
  if (name == "ex-3.2-deformed") return ex::ex_3_2_deformed<S>;
  if (name == "sigma-negative") return ex::sigma_negative<S>;
  if (name == "thm-2.7-swap") return [](const Options& o) { return ex::thm_2_7<S>("thm-2.7-swap", true, o); };
  if (name == "thm-2.7-shift") return [](const Options& o) { return ex::thm_2_7<S>("thm-2.7-shift", false, o); };
  if (name == "prop-3.3-reconstruct") return ex::prop_3_3<S>;
  if (name == "ex-4-n0") return [](const Options& o) { return ex::ex_4<S>(0, o); };
  if (name == "ex-4-n1") return [](const Options& o) { return ex::ex_4<S>(1, o); };
  if (name == "ex-4-n2") return [](const Options& o) { return ex::ex_4<S>(2, o); };
  if (name == "koszul-duality-sanity") return ex::koszul_sanity<S>;
  return {};
}

inline const std::vector<std::string>& catalog() {
  static const std::vector<std::string> names{
      "ex-2.2-ungraded", "ex-2.2-graded", "ex-2.2-swap", "ex-3.1-avatar", "ex-3.2-deformed",
      "sigma-negative",  "thm-2.7-swap",  "thm-2.7-shift", "prop-3.3-reconstruct", "ex-4-n0",
      "ex-4-n1",         "ex-4-n2",       "koszul-duality-sanity"};
  return names;
}

/// Runs a built-in example; throws UnknownExample.
template <typename S>
json run_example(const std::string& name, const Options& o) {
  auto f = entry_for<S>(name);
  if (!f) throw sph::UnknownExample("unknown example '" + name + "'");
  return f(o);
}

}  // namespace sphcli

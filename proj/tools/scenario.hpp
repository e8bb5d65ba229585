// JSON scenario files (format 1): declared algebras and bimodules, then a task
// list run in order.
#pragma once

#include <set>

#include "catalog.hpp"

namespace sphcli {

using sph::ScenarioError;

namespace scn {

using namespace sph;

inline const json& need(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw ScenarioError("missing field '" + key + "'");
  return j.at(key);
}

inline int need_int(const json& j, const std::string& key) {
  const json& v = need(j, key);
  if (!v.is_number_integer()) throw ScenarioError("field '" + key + "' must be an integer");
  return v.get<int>();
}

inline std::string need_str(const json& j, const std::string& key) {
  const json& v = need(j, key);
  if (!v.is_string()) throw ScenarioError("field '" + key + "' must be a string");
  return v.get<std::string>();
}

template <typename S>
S scalar(const json& num, const json& den) {
  if (!num.is_number_integer() || !den.is_number_integer()) throw ScenarioError("entries must be integers");
  if (den.get<long long>() == 0) throw ScenarioError("zero denominator");
  return frac<S>(num.get<long long>(), den.get<long long>());
}

// [[row, col, num, den], ...]
template <typename S>
SpMat<S> matrix(const json& j, int rows, int cols) {
  if (!j.is_array()) throw ScenarioError("matrix must be an array of [row, col, num, den]");
  Triplets<S> t;
  for (auto& e : j) {
    if (!e.is_array() || e.size() != 4) throw ScenarioError("matrix entry must be [row, col, num, den]");
    int r = e[0].get<int>(), c = e[1].get<int>();
    if (r < 0 || r >= rows || c < 0 || c >= cols) throw ScenarioError("matrix entry out of range");
    t.emplace_back(r, c, scalar<S>(e[2], e[3]));
  }
  return from_triplets<S>(rows, cols, t);
}

// [[index, num, den], ...]
template <typename S>
SpVec<S> vector(const json& j, int dim) {
  if (!j.is_array()) throw ScenarioError("vector must be an array of [index, num, den]");
  std::map<int, S> acc;
  for (auto& e : j) {
    if (!e.is_array() || e.size() != 3) throw ScenarioError("vector entry must be [index, num, den]");
    int i = e[0].get<int>();
    if (i < 0 || i >= dim) throw ScenarioError("vector index out of range");
    acc[i] += scalar<S>(e[1], e[2]);
  }
  SpVec<S> v;
  for (auto& [i, x] : acc)
    if (!is_zero(x)) v.emplace_back(i, x);
  return v;
}

inline std::vector<int> degrees(const json& j) {
  if (!j.is_array()) throw ScenarioError("degrees must be an array of integers");
  std::vector<int> d;
  for (auto& x : j) {
    if (!x.is_number_integer()) throw ScenarioError("degrees must be integers");
    d.push_back(x.get<int>());
  }
  return d;
}

// Thrown when a declaration refers to one that is declared but not built yet.
struct Pending {};

template <typename S>
struct Env {
  std::map<std::string, AlgPtr<S>> algebras;
  std::map<std::string, DgBimodule<S>> bimodules;
  std::set<std::string> pending;

  const AlgPtr<S>& alg(const std::string& n) const {
    auto it = algebras.find(n);
    if (it != algebras.end()) return it->second;
    if (pending.count("a:" + n)) throw Pending{};
    throw ScenarioError("undeclared algebra '" + n + "'");
  }
  const DgBimodule<S>& bim(const std::string& n) const {
    auto it = bimodules.find(n);
    if (it != bimodules.end()) return it->second;
    if (pending.count("b:" + n)) throw Pending{};
    throw ScenarioError("undeclared bimodule '" + n + "'");
  }
};

template <typename S>
AlgPtr<S> build_algebra(const Env<S>& env, const std::string& name, const json& j) {
  const std::string type = need_str(j, "type");
  if (type == "field") return field_algebra<S>();
  if (type == "product_of_fields") return product_of_fields<S>(need_int(j, "n"));
  if (type == "polynomial") {
    const int deg = need_int(j, "degree"), order = need_int(j, "order");
    const bool trunc = j.value("truncation", false);
    return trunc ? truncated_polynomial<S>(deg, order, j.value("var", "h"))
                 : poly_algebra<S>(deg, order, j.value("var", "h"));
  }
  if (type == "trivial_extension") {
    auto m = env.bim(need_str(j, "bimodule"));
    if (j.value("dual", true)) m = dualize_bimodule(m).module;
    return trivial_extension(env.alg(need_str(j, "base")), m, need_int(j, "shift"), name);
  }
  if (type == "deformed") {
    const auto& b = env.bim(need_str(j, "bimodule"));
    return deform_extension(CentralElement<S>{b, vector<S>(need(j, "z"), b.dim())}, name);
  }
  if (type == "explicit") {
    auto deg = degrees(need(j, "degrees"));
    const int n = static_cast<int>(deg.size());
    // product entries [i, j, k, num, den]: e_i e_j has coefficient num/den on e_k
    std::vector<Triplets<S>> cols(n);
    for (auto& e : need(j, "product")) {
      if (!e.is_array() || e.size() != 5) throw ScenarioError("product entry must be [i, j, k, num, den]");
      int a = e[0].get<int>(), b = e[1].get<int>(), c = e[2].get<int>();
      if (a < 0 || a >= n || b < 0 || b >= n || c < 0 || c >= n) throw ScenarioError("product index out of range");
      cols[a].emplace_back(c, b, scalar<S>(e[3], e[4]));
    }
    std::vector<SpMat<S>> left;
    for (auto& t : cols) left.push_back(from_triplets<S>(n, n, t));
    auto prod = [&](int a, int b) { return column<S>(left[a], b); };
    SpMat<S> d = j.contains("differential") ? matrix<S>(j["differential"], n, n) : SpMat<S>(n, n);
    std::vector<int> idem;
    if (j.contains("idempotents"))
      for (auto& x : j["idempotents"]) idem.push_back(x.get<int>());
    auto a = make_algebra<S>(name, deg, prod, d, vector<S>(need(j, "unit"), n), idem);
    require_valid(a);
    return share(std::move(a));
  }
  throw ScenarioError("unknown algebra type '" + type + "'");
}

template <typename S>
DgBimodule<S> build_bimodule(const Env<S>& env, const std::string& name, const json& j) {
  const std::string type = need_str(j, "type");
  DgBimodule<S> out;
  if (type == "diagonal") {
    out = diagonal(env.alg(need_str(j, "algebra")));
  } else if (type == "free") {
    out = forget_left(diagonal(env.alg(need_str(j, "algebra"))), field_algebra<S>());
  } else if (type == "shift") {
    out = shift(env.bim(need_str(j, "of")), need_int(j, "n"));
  } else if (type == "dual") {
    out = dualize_bimodule(env.bim(need_str(j, "of"))).module;
  } else if (type == "restriction") {
    out = restriction_kernel(env.alg(need_str(j, "from")), env.alg(need_str(j, "to")));
  } else if (type == "induction") {
    out = induction_kernel(env.alg(need_str(j, "to")), env.alg(need_str(j, "from")));
  } else if (type == "direct_sum") {
    const json& of = need(j, "of");
    if (!of.is_array() || of.empty()) throw ScenarioError("direct_sum needs a non-empty list");
    out = env.bim(of[0].get<std::string>());
    for (std::size_t i = 1; i < of.size(); ++i) out = direct_sum(out, env.bim(of[i].get<std::string>()));
  } else if (type == "tensor") {
    out = tensor_over(env.bim(need_str(j, "left")), env.bim(need_str(j, "right"))).module;
  } else if (type == "explicit") {
    auto l = env.alg(need_str(j, "left")), r = env.alg(need_str(j, "right"));
    auto deg = degrees(need(j, "degrees"));
    const int n = static_cast<int>(deg.size());
    auto actions = [&](const std::string& key, const AlgPtr<S>& a) {
      const json& acts = need(j, key);
      if (!acts.is_array() || static_cast<int>(acts.size()) != a->dim())
        throw ScenarioError("'" + key + "' needs one matrix per basis element of " + a->name);
      std::vector<SpMat<S>> m;
      for (auto& x : acts) m.push_back(matrix<S>(x, n, n));
      return m;
    };
    SpMat<S> d = j.contains("differential") ? matrix<S>(j["differential"], n, n) : SpMat<S>(n, n);
    out = make_bimodule<S>(name, l, r, GradedSpace(deg), d, actions("left_action", l), actions("right_action", r));
  } else {
    throw ScenarioError("unknown bimodule type '" + type + "'");
  }
  require_valid(out);
  out.name = name;
  return out;
}

template <typename S>
json dims_of(const DgBimodule<S>& m, const Window& w) {
  return dims_json(restrict_dims(homology_dims(m), w.lo, w.hi));
}

template <typename S>
void run_task(Report& rep, const Env<S>& env, const json& t, const Options& o) {
  const std::string task = need_str(t, "task");
  const bool required = t.value("required", true);
  const std::string label = t.value("label", task);
  const Window& w = o.window;
  auto kernel = [&](const std::string& key) {
    const auto& k = env.bim(need_str(t, key));
    return KernelFunctor<S>{k.name, k};
  };
  // Optional expectation: the computed kernel is compared with a declared bimodule.
  auto expect = [&](const DgBimodule<S>& m, const Window& mw, json det) {
    if (!t.contains("expect")) {
      rep.add(label, Outcome::pass, det, required);
      return;
    }
    auto q = find_quasi_iso(env.bim(need_str(t, "expect")), m, w.shrink(mw));
    det["witness"] = witness_json(q);
    rep.add(label, q.found ? Outcome::pass : q.refuted ? Outcome::fail : Outcome::undetermined, det, required);
  };

  if (task == "validate") {
    const std::string target = need_str(t, "target");
    std::string first;
    if (env.algebras.count(target)) {
      auto v = validate_algebra(*env.alg(target));
      if (!v.empty()) first = v.front().axiom + " at " + v.front().witness;
    } else {
      auto v = validate_bimodule(env.bim(target));
      if (!v.empty()) first = v.front().axiom + " at " + v.front().witness;
    }
    json det{{"target", target}};
    if (!first.empty()) det["violation"] = first;
    rep.add(label, first.empty() ? Outcome::pass : Outcome::fail, det, required);
  } else if (task == "homology") {
    const std::string target = need_str(t, "target");
    json dims = env.algebras.count(target)
                    ? dims_json(restrict_dims(
                          homology_dims(Complex<S>(env.alg(target)->space, env.alg(target)->d)), w.lo, w.hi))
                    : dims_of(env.bim(target), w);
    json det{{"target", target}, {"dims", dims}};
    bool ok = !t.contains("dims") || t["dims"] == dims;
    rep.add(label, ok ? Outcome::pass : Outcome::fail, det, required);
  } else if (task == "twist" || task == "cotwist") {
    auto adj = right_adjunction(kernel("kernel"), w);
    auto k = task == "twist" ? twist_kernel(adj) : cotwist_kernel(adj);
    expect(k.kernel, k.window, {{"dims", dims_of(k.kernel, w.shrink(k.window))}});
  } else if (task == "spherical-check") {
    auto r = spherical_report(kernel("kernel"), w);
    auto c = two_implies_four(r);
    Outcome out = !c.consistent || r.refuted() > 0 ? Outcome::fail
                  : r.spherical()                  ? Outcome::pass
                                                   : Outcome::undetermined;
    rep.add(label, out, spherical_json(r), required);
  } else if (task == "dphi") {
    DPhi<S> c(env.bim(need_str(t, "phi")), w, t.value("require_inverse", true));
    auto dims = dphi_hom_dims(c, env.bim(need_str(t, "x")), env.bim(need_str(t, "y")));
    rep.add(label, Outcome::pass, {{"dims", dims_json(restrict_dims(dims, w.lo, w.hi))}}, required);
  } else if (task == "sigma-check") {
    const auto& phi = env.bim(need_str(t, "phi"));
    DPhi<S> c(phi, w, t.value("require_inverse", true));
    auto chk = check_sigma_condition(c, vector<S>(need(t, "z"), phi.dim()), w);
    const std::string want = t.value("expect_verdict", "strict");
    json det{{"verdict", to_string(chk.verdict)}};
    if (!chk.witness.empty()) det["witness"] = chk.witness;
    rep.add(label, want == to_string(chk.verdict) ? Outcome::pass : Outcome::fail, det, required);
  } else if (task == "ptwist") {
    const int n = need_int(t, "n");
    auto m = default_p_model<S>(n);
    check_p_object(m, w);
    auto adj = right_adjunction(build_F(m, o.trunc.value_or(truncation_for(w, n))), w);
    auto cs = cotwist_shift_check(adj, n, w);
    auto tk = twist_kernel(adj);
    auto cmp = find_quasi_iso(ptwist_kernel(m).kernel, tk.kernel, w.shrink(tk.window));
    bool ok = cs.shift.found && cs.h_preserved && cmp.found;
    rep.add(label, ok ? Outcome::pass : Outcome::fail,
            {{"cotwist", witness_json(cs.shift)}, {"h_preserved", cs.h_preserved}, {"compare", witness_json(cmp)}},
            required);
  } else if (task == "compare") {
    auto q = find_quasi_iso(env.bim(need_str(t, "x")), env.bim(need_str(t, "y")), w);
    rep.add(label, q.found ? Outcome::pass : q.refuted ? Outcome::fail : Outcome::undetermined, witness_json(q),
            required);
  } else if (task == "reconstruct") {
    const auto& phi = env.bim(need_str(t, "phi"));
    SpVec<S> z = vector<S>(need(t, "z"), phi.dim());
    auto c = dphi_sigma_category(DPhi<S>(phi, w), z, w);
    auto ez = deform_extension(CentralElement<S>{phi, z});
    KernelFunctor<S> l{"L", induction_kernel(ez, phi.lalg)};
    bool all = true;
    json pairs = json::array();
    for (auto& p : need(t, "pairs")) {
      auto cmp = reconstruct_compare(c, l, env.bim(p.at(0).get<std::string>()), env.bim(p.at(1).get<std::string>()), w);
      all = all && cmp.agree;
      pairs.push_back({{"pair", p}, {"agree", cmp.agree}, {"dphi", dims_json(cmp.dphi_dims)},
                       {"source", dims_json(cmp.source_dims)}});
    }
    rep.add(label, all ? Outcome::pass : Outcome::fail, {{"pairs", pairs}}, required);
  } else {
    throw ScenarioError("unknown task '" + task + "'");
  }
}

}  // namespace scn

/// Checks the schema and the references before running anything.
inline void check_schema(const json& s) {
  if (!s.is_object()) throw ScenarioError("scenario must be a JSON object");
  if (!s.contains("format") || s["format"] != 1) throw ScenarioError("unsupported or missing format (expected 1)");
  for (const char* k : {"algebras", "bimodules"})
    if (s.contains(k) && !s[k].is_object()) throw ScenarioError(std::string(k) + " must be an object");
  if (!s.contains("tasks") || !s["tasks"].is_array()) throw ScenarioError("tasks must be an array");
}

template <typename S>
json run_scenario(const json& s, const Options& o, const std::string& name) {
  check_schema(s);
  scn::Env<S> env;
  // Declarations may refer to each other in any order; build whatever is ready
  // until nothing is left. Dangling or cyclic references are schema errors.
  std::vector<std::pair<std::string, const json*>> todo;
  for (const char* kind : {"algebras", "bimodules"})
    if (s.contains(kind))
      for (auto& [k, v] : s[kind].items()) {
        const std::string key = std::string(kind[0] == 'a' ? "a:" : "b:") + k;
        if (!env.pending.insert(key).second) throw ScenarioError("duplicate declaration '" + k + "'");
        todo.emplace_back(key, &v);
      }
  while (!todo.empty()) {
    std::vector<std::pair<std::string, const json*>> next;
    for (auto& [key, v] : todo) {
      const std::string n = key.substr(2);
      try {
        if (key[0] == 'a')
          env.algebras[n] = scn::build_algebra(env, n, *v);
        else
          env.bimodules[n] = scn::build_bimodule(env, n, *v);
        env.pending.erase(key);
      } catch (const scn::Pending&) {
        next.push_back({key, v});
      } catch (const ScenarioError&) {
        throw;
      } catch (const std::exception& e) {
        throw ScenarioError("declaration '" + n + "': " + e.what());
      }
    }
    if (next.size() == todo.size()) throw ScenarioError("cyclic declarations starting at '" + next[0].first.substr(2) + "'");
    todo = std::move(next);
  }
  for (auto& t : s["tasks"]) {
    const std::string task = scn::need_str(t, "task");
    for (const char* key : {"kernel", "phi", "x", "y", "expect"})
      if (t.contains(key)) env.bim(t[key].get<std::string>());
    if (t.contains("target") && !env.algebras.count(t["target"]) && !env.bimodules.count(t["target"]))
      throw ScenarioError("task '" + task + "' names undeclared '" + t["target"].get<std::string>() + "'");
  }
  Report rep(name, s.value("claim", ""), o);
  for (auto& t : s["tasks"]) {
    const std::string task = t["task"];
    try {
      scn::run_task(rep, env, t, o);
    } catch (const ScenarioError&) {
      throw;
    } catch (const std::exception& e) {
      rep.add(t.value("label", task), Outcome::fail, {{"error", e.what()}}, t.value("required", true));
    }
  }
  return rep.finish();
}

}  // namespace sphcli

// sphcheck: run scenario files or built-in examples and report.
//
//   sphcheck list
//   sphcheck example <name> [--field rational|fp:<p>] [--window lo:hi] [--trunc N] [--json out]
//   sphcheck run <file> [same flags]
//
// Exit codes: 0 all tasks pass, 1 a task failed (or a required task is
// undetermined), 2 the input could not be parsed or names something unknown.
#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "scenario.hpp"

using namespace sphcli;

namespace {

struct Field {
  bool prime = false;
  std::uint32_t p = 0;
};

Field parse_field(const std::string& s) {
  if (s == "rational") return {};
  if (s.rfind("fp:", 0) == 0) {
    try {
      long long p = std::stoll(s.substr(3));
      if (p > 1 && p < (1ll << 31) && sph::is_probable_prime(static_cast<std::uint64_t>(p)))
        return {true, static_cast<std::uint32_t>(p)};
    } catch (const std::exception&) {
    }
  }
  throw sph::ScenarioError("--field must be 'rational' or 'fp:<prime>'");
}

Window parse_window(const std::string& s) {
  auto c = s.find(':');
  try {
    if (c != std::string::npos) {
      Window w{std::stoi(s.substr(0, c)), std::stoi(s.substr(c + 1))};
      if (w.lo <= w.hi) return w;
    }
  } catch (const std::exception&) {
  }
  throw sph::ScenarioError("--window must be lo:hi with lo <= hi");
}

// FNV-1a, so the scenario hash is stable across platforms and builds.
std::string fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream o;
  o << std::hex << std::setw(16) << std::setfill('0') << h;
  return o.str();
}

void print_text(const json& r, std::ostream& out) {
  out << r["example"].get<std::string>() << ": " << r["outcome"].get<std::string>() << "\n";
  if (!r["claim"].get<std::string>().empty()) out << "  " << r["claim"].get<std::string>() << "\n";
  for (auto& t : r["tasks"]) {
    std::string o = t["outcome"];
    std::string tag = o == "pass" ? "PASS" : o == "fail" ? "FAIL" : "UNDETERMINED";
    out << "  [" << tag << "] " << t["task"].get<std::string>();
    if (!t["required"].get<bool>()) out << " (optional)";
    out << "\n";
    const json& d = t["detail"];
    if (d.contains("error")) out << "      " << d["error"].get<std::string>() << "\n";
    if (d.contains("conditions"))
      for (auto& c : d["conditions"])
        out << "      (" << c["condition"].get<std::string>() << ") " << c["verdict"].get<std::string>() << ": "
            << c["reason"].get<std::string>() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spherical functor checker over dg-algebras"};
  app.require_subcommand(1);
  std::string field = "rational", window = "-8:8", json_out, target;
  int trunc = 0;
  bool require_all = false;
  auto common = [&](CLI::App* c) {
    c->add_option("--field", field, "rational or fp:<p>");
    c->add_option("--window", window, "degree window lo:hi");
    c->add_option("--trunc", trunc, "truncation order for truncated polynomial stand-ins");
    c->add_option("--json", json_out, "write the JSON report here ('-' for stdout)");
    c->add_flag("--require-all", require_all, "treat undetermined outcomes as failures");
  };
  auto* list = app.add_subcommand("list", "list built-in examples");
  auto* example = app.add_subcommand("example", "run a built-in example");
  example->add_option("name", target, "example name")->required();
  common(example);
  auto* run = app.add_subcommand("run", "run a JSON scenario file");
  run->add_option("file", target, "scenario file")->required();
  common(run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*list) {
    for (auto& n : catalog()) std::cout << n << "\n";
    return 0;
  }

  json report;
  try {
    Options o;
    const Field f = parse_field(field);
    o.window = parse_window(window);
    if (trunc > 0) o.trunc = trunc;
    o.require_all = require_all;
    std::string hashed;
    if (*example) {
      report = f.prime ? ([&] {
        sph::FieldScope scope(f.p);
        return run_example<sph::Fp>(target, o);
      })()
                       : run_example<sph::Rational>(target, o);
      hashed = target;
    } else {
      std::ifstream in(target);
      if (!in) throw sph::ScenarioError("cannot open " + target);
      json s;
      try {
        s = json::parse(in);
      } catch (const json::parse_error& e) {
        throw sph::ScenarioError(std::string("malformed JSON: ") + e.what());
      }
      std::string name = s.is_object() ? s.value("name", target) : target;
      report = f.prime ? ([&] {
        sph::FieldScope scope(f.p);
        return run_scenario<sph::Fp>(s, o, name);
      })()
                       : run_scenario<sph::Rational>(s, o, name);
      hashed = s.dump();
    }
    report["field"] = field;
    report["scenario_hash"] = fnv1a(hashed + "|" + field + "|" + window + "|" + std::to_string(trunc));
  } catch (const sph::ScenarioError& e) {
    std::cerr << "sphcheck: " << e.what() << "\n";
    return 2;
  } catch (const sph::UnknownExample& e) {
    std::cerr << "sphcheck: " << e.what() << " (try 'sphcheck list')\n";
    return 2;
  }

  if (json_out == "-") {
    std::cout << report.dump(2) << "\n";
  } else {
    print_text(report, std::cout);
    if (!json_out.empty()) {
      std::ofstream out(json_out);
      out << report.dump(2) << "\n";
      if (!out) {
        std::cerr << "sphcheck: cannot write " << json_out << "\n";
        return 2;
      }
    }
  }
  bool failed = false;
  for (auto& t : report["tasks"])
    if (t["outcome"] == "fail" || (t["outcome"] == "undetermined" && t["required"].get<bool>())) failed = true;
  return failed ? 1 : 0;
}

#include "potopt_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "potopt/error.hpp"

namespace potopt::cli {
namespace {

namespace pt = boost::property_tree;

const std::set<std::string> kKnownKeys{
    "experiment.type",     "experiment.name",     "problem.objective",    "problem.constraint",
    "problem.p",           "problem.alpha",       "problem.budget",       "domain.kind",
    "domain.lower",        "domain.upper",        "domain.radius",        "domain.dimension",
    "domain.nodes",        "source.kind",         "source.value",         "source.radius",
    "source.center",       "source.mass",         "twoball.gap_nodes",    "counterexample.n",
    "counterexample.j_factor", "counterexample.p", "solver.max_iter",     "solver.gtol",
    "solver.backtrack",    "solver.armijo",       "solver.schedule",      "analysis.support_check",
    "analysis.refine",     "output.directory",    "output.artifacts",
};

const std::set<std::string> kNumericKeys{
    "problem.p",       "problem.alpha",      "problem.budget",   "domain.lower",      "domain.upper",
    "domain.radius",   "domain.dimension",   "domain.nodes",     "source.value",      "source.radius",
    "source.center",   "source.mass",        "twoball.gap_nodes", "counterexample.n", "counterexample.j_factor",
    "counterexample.p", "solver.max_iter",   "solver.gtol",      "solver.backtrack",  "solver.armijo",
};

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x))
    fail(key + ": expected a finite number, got '" + v + "'");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) fail(key + ": expected an integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail(key + ": expected true or false");
}

class Reader {
 public:
  explicit Reader(const KeyValues& kv) : kv_(kv) {}

  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  const std::string& str(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) fail("missing required key " + key);
    used_.insert(key);
    return it->second;
  }
  std::string choice(const std::string& key, std::initializer_list<const char*> allowed) {
    const std::string& v = str(key);
    for (const char* a : allowed)
      if (v == a) return v;
    std::string list;
    for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
    fail(key + ": '" + v + "' is not one of " + list);
  }
  double num(const std::string& key) { return to_double(key, str(key)); }
  double positive(const std::string& key) {
    const double x = num(key);
    if (!(x > 0.0)) fail(key + " must be positive");
    return x;
  }
  long long integer(const std::string& key, long long lo) {
    const long long x = to_int(key, str(key));
    if (x < lo) fail(key + " must be at least " + std::to_string(lo));
    return x;
  }
  void finish() const {
    for (const auto& [k, v] : kv_)
      if (!used_.count(k)) fail("key " + k + " does not apply to this experiment");
  }

 private:
  const KeyValues& kv_;
  std::set<std::string> used_;
};

}  // namespace

bool is_numeric_key(const std::string& key) { return kNumericKeys.count(key) != 0; }

ExperimentConfig from_key_values(const KeyValues& kv) {
  for (const auto& [k, v] : kv)
    if (!kKnownKeys.count(k)) fail("unknown key " + k);

  Reader r(kv);
  ExperimentConfig c;
  c.echo = kv;
  c.type = r.choice("experiment.type", {"solve", "counterexample"}) == "solve" ? ExperimentType::Solve
                                                                            : ExperimentType::Counterexample;
  c.name = r.str("experiment.name");
  if (c.name.empty() || c.name.find_first_of("/\\ ") != std::string::npos)
    fail("experiment.name must be a non-empty file-name-safe token");

  if (c.type == ExperimentType::Solve) {
    c.objective = r.choice("problem.objective", {"energy", "lambda1", "lambda2"});
    c.constraint = r.choice("problem.constraint", {"lp", "inverse_lp", "exponential"});
    if (c.constraint == "exponential")
      c.alpha = r.positive("problem.alpha");
    else
      c.p = r.positive("problem.p");
    if (r.has("problem.budget")) {
      c.budget = r.positive("problem.budget");
      if (c.objective != "lambda1" || c.constraint != "inverse_lp")
        fail("problem.budget is supported for lambda1 with the inverse_lp constraint only");
    }
    if (c.objective == "energy" && c.constraint == "lp" && c.p < 1.0) fail("the lp energy problem needs p >= 1");
    if (c.objective != "energy" && c.constraint == "lp")
      fail("eigenvalue objectives need a decreasing constraint (inverse_lp or exponential)");

    c.domain.kind = r.choice("domain.kind", {"interval", "radial"});
    if (c.domain.kind == "interval") {
      c.domain.lower = r.num("domain.lower");
      c.domain.upper = r.num("domain.upper");
      if (!(c.domain.lower < c.domain.upper)) fail("domain.lower must be below domain.upper");
    } else {
      c.domain.radius = r.positive("domain.radius");
      c.domain.dimension = static_cast<int>(r.integer("domain.dimension", 1));
    }
    c.domain.nodes = static_cast<std::size_t>(r.integer("domain.nodes", 3));

    if (c.objective == "energy") {
      SourceConfig s;
      s.kind = r.choice("source.kind", {"constant", "indicator", "delta"});
      if (s.kind == "delta") {
        s.mass = r.num("source.mass");
        if (c.domain.kind == "interval") {
          s.center = r.num("source.center");
          if (!(s.center > c.domain.lower && s.center < c.domain.upper)) fail("source.center must be interior");
        }
      } else {
        s.value = r.num("source.value");
        if (s.kind == "indicator") s.radius = r.positive("source.radius");
      }
      c.source = s;
    }
    if (c.objective == "lambda2") {
      if (c.constraint != "inverse_lp" || c.domain.kind != "radial" || c.domain.dimension != 1)
        fail("lambda2 is built from a one-dimensional radial inverse_lp run");
      if (r.has("twoball.gap_nodes")) c.gap_nodes = static_cast<std::size_t>(r.integer("twoball.gap_nodes", 0));
    }
  } else {
    for (const std::string& s : split_list(r.str("counterexample.n"))) {
      const long long n = to_int("counterexample.n", s);
      if (n < 1) fail("counterexample.n entries must be positive");
      c.cex_n.push_back(static_cast<std::size_t>(n));
    }
    if (c.cex_n.empty()) fail("counterexample.n is empty");
    c.cex_j_factor = r.positive("counterexample.j_factor");
    c.cex_p = r.num("counterexample.p");
    if (!(c.cex_p > 0.0 && c.cex_p < 1.0)) fail("counterexample.p must lie in (0,1)");
  }

  if (r.has("solver.max_iter")) c.solver.max_iter = static_cast<int>(r.integer("solver.max_iter", 1));
  if (r.has("solver.gtol")) c.solver.gtol = r.num("solver.gtol");
  if (r.has("solver.backtrack")) c.solver.backtrack = r.num("solver.backtrack");
  if (r.has("solver.armijo")) c.solver.armijo = r.num("solver.armijo");
  if (r.has("solver.schedule"))
    for (const std::string& s : split_list(r.str("solver.schedule"))) c.solver.schedule.push_back(to_double("solver.schedule", s));
  try {
    c.solver.validate();
  } catch (const Error& e) {
    fail(std::string("solver: ") + e.what());
  }

  if (r.has("analysis.support_check")) c.support_check = to_bool("analysis.support_check", r.str("analysis.support_check"));
  if (r.has("analysis.refine")) c.refine = to_bool("analysis.refine", r.str("analysis.refine"));
  if (r.has("output.directory")) c.directory = r.str("output.directory");
  if (r.has("output.artifacts")) {
    c.artifacts = split_list(r.str("output.artifacts"));
    for (const std::string& a : c.artifacts)
      if (a != "csv" && a != "json" && a != "summary") fail("output.artifacts: unknown artifact " + a);
  }
  r.finish();
  return c;
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(std::string("config syntax: ") + e.what());
  }
  KeyValues kv;
  for (const auto& [section, body] : tree) {
    if (body.empty()) fail("key " + section + " lies outside any section");
    for (const auto& [key, value] : body) kv[section + "." + key] = trim(value.data());
  }
  return from_key_values(kv);
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_ini(const KeyValues& kv) {
  std::string out, section;
  for (const auto& [k, v] : kv) {
    const auto dot = k.find('.');
    const std::string s = k.substr(0, dot);
    if (s != section) {
      out += (out.empty() ? "[" : "\n[") + s + "]\n";
      section = s;
    }
    out += k.substr(dot + 1) + " = " + v + "\n";
  }
  return out;
}

}  // namespace potopt::cli

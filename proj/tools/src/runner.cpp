#include "potopt_cli/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <thread>

#include "potopt/analysis.hpp"
#include "potopt/error.hpp"
#include "potopt/operators.hpp"
#include "potopt/solve.hpp"

namespace potopt::cli {
namespace {

using nlohmann::json;

std::size_t refined_nodes(std::size_t nodes) { return 2 * (nodes - 1) + 1; }

Grid make_grid(const DomainConfig& d, std::size_t nodes, double scale = 1.0) {
  if (d.kind == "interval") {
    const double c = 0.5 * (d.lower + d.upper), half = 0.5 * (d.upper - d.lower) * scale;
    return make_interval(c - half, c + half, nodes);
  }
  return make_radial(d.radius * scale, d.dimension, nodes);
}

Field make_source(const SourceConfig& s, const Grid& g) {
  if (s.kind == "constant") return Field(g, [v = s.value](double) { return v; });
  if (s.kind == "indicator")
    return Field(g, [v = s.value, r = s.radius](double x) { return std::abs(x) <= r * (1.0 + 1e-12) ? v : 0.0; });
  Field f(g);
  std::size_t best = 0;
  const double c = g.kind() == GridKind::Interval ? s.center : 0.0;
  for (std::size_t i = 1; i < g.size(); ++i)
    if (std::abs(g.node(i) - c) < std::abs(g.node(best) - c)) best = i;
  f[best] = s.mass / g.weight(best);
  return f;
}

ConstraintSpec constraint_of(const ExperimentConfig& c) {
  if (c.constraint == "lp") return ConstraintSpec::lp(c.p);
  if (c.constraint == "inverse_lp") return ConstraintSpec::inverse_lp(c.p);
  return ConstraintSpec::exponential(c.alpha);
}

SolveResult solve_on(const ExperimentConfig& c, const Grid& g) {
  ProblemSpec spec{g, std::nullopt, constraint_of(c)};
  spec.options = c.solver;
  spec.objective = c.objective == "energy" ? Objective::Energy : Objective::Lambda1;
  if (c.source) spec.f = make_source(*c.source, g);
  return solve(spec);
}

std::string csv_header() { return "coordinate,u,V,f\n"; }

void csv_row(std::string& out, double x, double u, double V, double f) {
  out += format_number(x);
  out += ',';
  out += format_number(u);
  out += ',';
  out += V >= kWallPotential ? std::string("inf") : format_number(V);
  out += ',';
  out += format_number(f);
  out += '\n';
}

json support_json(const SupportReport& s) {
  json j{{"radius", s.support_radius}, {"truncation_radius", s.truncation_radius}, {"spacing", s.spacing},
         {"edge_fit", s.edge_fit}};
  if (s.decay_slope) j["decay_slope"] = *s.decay_slope;
  if (s.compared) j["stable"] = s.stable;
  return j;
}

SupportReport safe_support(const Field& u) {
  try {
    return support_radius(u);
  } catch (const Error&) {
    SupportReport s;
    s.spacing = u.grid().spacing();
    return s;
  }
}

struct Headline {
  double objective = 0.0;
  double support = 0.0;
  double M = 0.0;
};

RunOutput run_solve(const ExperimentConfig& c) {
  RunOutput out;
  json& rec = out.record;
  const Grid g = make_grid(c.domain, c.domain.nodes);
  const SolveResult r = solve_on(c, g);
  const SupportReport sup = safe_support(r.u);
  const bool l1 = c.objective == "energy" && c.constraint == "lp" && c.p == 1.0;

  json res{{"objective", r.objective},
           {"constraint_residual", r.diagnostics.constraint_residual},
           {"duality_gap", r.diagnostics.duality_gap},
           {"el_residual", r.diagnostics.el_residual},
           {"potential_cost", r.diagnostics.potential_cost},
           {"multiplier", r.multiplier},
           {"converged", r.converged},
           {"iterations", r.iterations}};
  if (c.constraint == "lp" && c.p > 1.0) res["holder_gap"] = r.diagnostics.holder_gap;
  if (l1) {
    res["M"] = r.potential.M;
    std::vector<double> plus, minus;
    for (std::size_t i : r.potential.omega_plus) plus.push_back(g.node(i));
    for (std::size_t i : r.potential.omega_minus) minus.push_back(g.node(i));
    res["omega_plus"] = plus;
    res["omega_minus"] = minus;
  }
  if (!r.epsilon_history.empty()) {
    res["epsilon_history"] = r.epsilon_history;
    res["support_history"] = r.support_history;
  }
  if (c.constraint == "exponential") res["potential_nonnegative"] = r.potential.nonnegative;

  Headline head{r.objective, sup.support_radius, r.potential.M};
  Field u = r.u, V = r.potential.V;
  Field f = c.source ? make_source(*c.source, g) : Field(g);
  double coord_scale = 1.0;
  bool converged = r.converged;

  if (c.objective == "lambda1" && c.budget != 1.0) {
    const BudgetPoint b = budget_scaling_lambda1(r, c.p, {c.budget}).front();
    res["budget"] = c.budget;
    res["dilation"] = b.t;
    res["lambda1_direct"] = b.lambda1_direct;
    res["objective"] = b.lambda1;
    head.objective = b.lambda1;
    coord_scale = 1.0 / b.t;
    const double amp = std::pow(b.t, 0.5 * g.dimension());
    u *= amp;
    for (double& v : V.values()) v = v >= kWallPotential ? v : b.t * b.t * v;
    head.support = sup.support_radius / b.t;
  }

  if (c.objective == "lambda2") {
    const TwoBallReport t = lambda2_two_ball(r, c.p, c.gap_nodes);
    res["lambda1"] = t.lambda1;
    res["lambda2"] = t.lambda2;
    res["lambda1_half_budget"] = t.lambda1_half;
    res["lambda2_single_well"] = t.lambda2_single;
    res["gap_nodes"] = t.gap_nodes;
    res["objective"] = t.lambda2;
    head.objective = t.lambda2;
    V = t.potential;
    u = eigenpairs(V, 2).eigenfunctions[1];
    f = Field(V.grid());
  }

  rec["results"] = res;
  rec["support"] = support_json(sup);

  if (c.support_check) {
    const Grid big = make_grid(c.domain, refined_nodes(c.domain.nodes), 2.0);
    const SolveResult rb = solve_on(c, big);
    const SupportReport cmp = compare_support(sup, safe_support(rb.u));
    rec["support"] = support_json(cmp);
    rec["support"]["doubled_domain_radius"] = safe_support(rb.u).support_radius;
    converged = converged && rb.converged;
  }

  if (c.refine) {
    ExperimentConfig fine = c;
    fine.refine = false;
    fine.support_check = false;
    fine.domain.nodes = refined_nodes(c.domain.nodes);
    fine.artifacts.clear();
    const RunOutput rf = run_experiment(fine);
    json ref{{"h", {g.spacing() * coord_scale, 0.5 * g.spacing() * coord_scale}},
             {"objective", {head.objective, rf.objective}},
             {"support_radius", {head.support, rf.support_radius}}};
    if (l1) ref["M"] = {head.M, rf.record["results"]["M"].get<double>()};
    rec["refinement"] = ref;
  }

  out.csv = csv_header();
  const Grid& ug = u.grid();
  for (std::size_t i = 0; i < ug.size(); ++i) csv_row(out.csv, ug.node(i) * coord_scale, u[i], V[i], f[i]);

  out.objective = head.objective;
  out.constraint_residual = r.diagnostics.constraint_residual;
  out.duality_gap = r.diagnostics.duality_gap;
  out.support_radius = head.support;
  out.converged = converged;

  out.summary = c.name + ": objective=" + format_number(head.objective);
  if (l1) {
    out.summary += " M=" + format_number(r.potential.M) + " contact={";
    for (std::size_t k = 0; k < r.potential.omega_plus.size() && k < 8; ++k)
      out.summary += (k ? "," : "") + format_number(g.node(r.potential.omega_plus[k]));
    if (r.potential.omega_plus.size() > 8) out.summary += ",...";
    out.summary += "}";
  }
  if (c.objective == "lambda2")
    out.summary += " lambda1=" + format_number(res["lambda1"].get<double>()) +
                   " half-budget=" + format_number(res["lambda1_half_budget"].get<double>());
  out.summary += " support=" + format_number(head.support);
  if (rec["support"].contains("stable")) out.summary += rec["support"]["stable"].get<bool>() ? " stable" : " unstable";
  if (sup.decay_slope) out.summary += " slope=" + format_number(*sup.decay_slope);
  out.summary += " gap=" + format_number(r.diagnostics.duality_gap);
  out.summary += converged ? " converged" : " not-converged";
  return out;
}

RunOutput run_counterexample(const ExperimentConfig& c) {
  RunOutput out;
  json rows = json::array();
  out.csv = "n,j,grid_nodes,energy,hard_wall_energy,limit_energy,budget\n";
  std::vector<double> coarse, fine, h, h2;
  for (std::size_t n : c.cex_n) {
    const auto j = static_cast<std::size_t>(std::llround(c.cex_j_factor * static_cast<double>(n * n * n)));
    if (j < 1) throw Error(ErrorCode::ConfigError, "counterexample.j_factor gives j = 0");
    const CounterexampleReport r = counterexample_energy(n, j, 0, c.cex_p);
    json row{{"n", n},
             {"j", j},
             {"grid_nodes", r.grid_nodes},
             {"energy", r.energy},
             {"hard_wall_energy", r.hard_wall_energy},
             {"limit_energy", r.limit_energy},
             {"budget", r.budget}};
    coarse.push_back(r.energy);
    h.push_back(1.0 / static_cast<double>(r.grid_nodes - 1));
    if (c.refine) {
      const CounterexampleReport rf = counterexample_energy(n, j, refined_nodes(r.grid_nodes), c.cex_p);
      fine.push_back(rf.energy);
      h2.push_back(1.0 / static_cast<double>(rf.grid_nodes - 1));
    }
    rows.push_back(row);
    out.csv += std::to_string(n) + ',' + std::to_string(j) + ',' + std::to_string(r.grid_nodes) + ',' +
               format_number(r.energy) + ',' + format_number(r.hard_wall_energy) + ',' +
               format_number(r.limit_energy) + ',' + format_number(r.budget) + '\n';
    out.summary += (out.summary.empty() ? c.name + ":" : std::string(";")) + " n=" + std::to_string(n) +
                   " E=" + format_number(r.energy) + " wall=" + format_number(r.hard_wall_energy);
  }
  out.record["results"] = {{"rows", rows}, {"objective", coarse.back()}, {"converged", true}};
  if (c.refine) out.record["refinement"] = {{"h", {h, h2}}, {"energy", {coarse, fine}}};
  out.objective = coarse.back();
  out.converged = true;
  return out;
}

bool all_finite(const json& j) {
  if (j.is_number_float()) return std::isfinite(j.get<double>());
  if (j.is_structured())
    for (const auto& v : j)
      if (!all_finite(v)) return false;
  return true;
}

}  // namespace

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

RunOutput run_experiment(const ExperimentConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  RunOutput out = config.type == ExperimentType::Solve ? run_solve(config) : run_counterexample(config);
  json& rec = out.record;
  rec["schema_version"] = kSchemaVersion;
  rec["tool"] = "potopt";
  rec["experiment"] = config.name;
  rec["config"] = config.echo;
  rec["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!all_finite(rec)) throw Error(ErrorCode::NoConvergence, "result contains non-finite numbers");
  out.exit_code = out.converged ? kOk : kNoConvergence;
  return out;
}

std::filesystem::path output_directory(const ExperimentConfig& config) {
  if (const char* env = std::getenv("POTOPT_OUT_DIR"); env && *env) return env;
  return config.directory;
}

void write_outputs(const ExperimentConfig& config, const RunOutput& out, std::ostream* summary_out) {
  const auto has = [&](const char* a) {
    return std::find(config.artifacts.begin(), config.artifacts.end(), a) != config.artifacts.end();
  };
  const std::filesystem::path dir = output_directory(config);
  if (has("csv") || has("json")) std::filesystem::create_directories(dir);
  if (has("json")) {
    std::ofstream(dir / (config.name + ".json")) << out.record.dump(2) << '\n';
  }
  if (has("csv")) {
    std::ofstream(dir / (config.name + ".csv")) << out.csv;
  }
  if (has("summary") && summary_out) *summary_out << out.summary << '\n';
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const std::string& param,
                                const std::vector<std::string>& values, unsigned jobs) {
  if (!is_numeric_key(param)) throw Error(ErrorCode::ConfigError, "cannot sweep " + param + ": not a numeric key");
  std::vector<ExperimentConfig> configs;
  for (const std::string& v : values) {
    KeyValues kv = base.echo;
    kv[param] = v;
    std::string tag = param.substr(param.find('.') + 1);
    kv["experiment.name"] = base.name + "_" + tag + "-" + v;
    configs.push_back(from_key_values(kv));
  }
  std::vector<SweepRow> rows(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      rows[i].value = values[i];
      try {
        rows[i].output = run_experiment(configs[i]);
      } catch (const std::exception& e) {
        rows[i].error = e.what();
        rows[i].output.exit_code = exit_code_for(e);
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(rows.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(worker);
  }
  return rows;
}

std::string sweep_csv(const std::string& param, const std::vector<SweepRow>& rows) {
  std::string out = param + ",objective,constraint_residual,duality_gap,support_radius,converged,exit_code\n";
  for (const SweepRow& r : rows) {
    const RunOutput& o = r.output;
    out += r.value + ',' + format_number(o.objective) + ',' + format_number(o.constraint_residual) + ',' +
           format_number(o.duality_gap) + ',' + format_number(o.support_radius) + ',' +
           (o.converged ? "true" : "false") + ',' + std::to_string(o.exit_code) + '\n';
  }
  return out;
}

int exit_code_for(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->code()) {
      case ErrorCode::ConfigError:
      case ErrorCode::InvalidArgument:
      case ErrorCode::InvalidDomain:
      case ErrorCode::MismatchedGrid:
      case ErrorCode::NegativePotential:
      case ErrorCode::UnderResolvedGrid:
      case ErrorCode::OverlappingSupports:
        return kConfigError;
      default:
        return kNoConvergence;
    }
  }
  return kConfigError;
}

}  // namespace potopt::cli

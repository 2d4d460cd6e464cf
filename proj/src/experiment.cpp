#include "pdp/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "pdp/io/csv.hpp"
#include "pdp/io/json_io.hpp"
#include "pdp/io/svg.hpp"
#include "pdp/problems/qp.hpp"
#include "pdp/problems/sparse.hpp"
#include "pdp/validate.hpp"

namespace pdp {

using nlohmann::json;

namespace {

[[noreturn]] void bad_field(const std::string& where, const std::string& why) {
  throw ConfigError("config field '" + where + "': " + why);
}

double get_num(const json& j, const std::string& where, const char* key,
               double fallback, bool required = false) {
  if (!j.contains(key)) {
    if (required) bad_field(where + "." + key, "missing");
    return fallback;
  }
  if (!j.at(key).is_number()) bad_field(where + "." + key, "must be a number");
  return j.at(key).get<double>();
}

std::string get_str(const json& j, const std::string& where, const char* key,
                    const std::string& fallback, bool required = false) {
  if (!j.contains(key)) {
    if (required) bad_field(where + "." + key, "missing");
    return fallback;
  }
  if (!j.at(key).is_string()) bad_field(where + "." + key, "must be a string");
  return j.at(key).get<std::string>();
}

void reject_unknown(const json& j, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      const std::string path =
          where.empty() ? item.key() : where + "." + item.key();
      bad_field(path, "unknown field");
    }
  }
}

SolverConfig parse_solver(const json& j, const std::string& where) {
  SolverConfig cfg;
  const std::string mode = get_str(j, where, "mode", "gradient");
  if (mode == "gradient") {
    cfg.mode = PerturbationMode::Gradient;
  } else if (mode == "proximal") {
    cfg.mode = PerturbationMode::Proximal;
  } else {
    bad_field(where + ".mode", "expected 'gradient' or 'proximal'");
  }
  if (j.contains("step")) {
    const json& s = j.at("step");
    reject_unknown(s, where + ".step", {"a", "b"});
    cfg.step.a = get_num(s, where + ".step", "a", cfg.step.a);
    cfg.step.b = get_num(s, where + ".step", "b", cfg.step.b);
  }
  cfg.rho1 = get_num(j, where, "rho1", cfg.rho1);
  cfg.rho2 = get_num(j, where, "rho2", cfg.rho2);
  cfg.max_iters = static_cast<int>(
      get_num(j, where, "max_iters", static_cast<double>(cfg.max_iters)));
  const std::string avg = get_str(j, where, "average", "weighted");
  if (avg == "weighted") {
    cfg.average = AverageKind::Weighted;
  } else if (avg == "uniform") {
    cfg.average = AverageKind::Uniform;
  } else {
    bad_field(where + ".average", "expected 'weighted' or 'uniform'");
  }
  if (j.contains("diagnostics")) {
    if (!j.at("diagnostics").is_boolean()) {
      bad_field(where + ".diagnostics", "must be a boolean");
    }
    cfg.diagnostics = j.at("diagnostics").get<bool>();
  }
  cfg.workers =
      static_cast<int>(get_num(j, where, "workers", cfg.workers));
  cfg.dual_radius = get_num(j, where, "dual_radius", cfg.dual_radius);
  return cfg;
}

const std::vector<std::string> kMethods = {
    "pdp", "pd-noperturb", "dds", "centralized-pd", "centralized-pdp"};

bool known_method(const std::string& m) {
  for (const std::string& k : kMethods) {
    if (k == m) return true;
  }
  return false;
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& j) {
  ExperimentConfig cfg;
  reject_unknown(j, "",
                 {"name", "instance", "schedule", "algorithms", "oracle",
                  "output_dir", "plot", "plot_log_gap"});
  cfg.name = get_str(j, "", "name", cfg.name);
  if (!j.contains("instance")) bad_field("instance", "missing");
  cfg.instance = j.at("instance");

  if (j.contains("schedule")) {
    const json& s = j.at("schedule");
    reject_unknown(s, "schedule",
                   {"topology", "kind", "edge_probability", "radius", "hops",
                    "seed", "window"});
    cfg.schedule.topology = get_str(s, "schedule", "topology", "ring");
    cfg.schedule.kind = get_str(s, "schedule", "kind", "fixed");
    cfg.schedule.edge_probability =
        get_num(s, "schedule", "edge_probability", 0.5);
    cfg.schedule.radius = get_num(s, "schedule", "radius", 0.6);
    cfg.schedule.hops = static_cast<int>(get_num(s, "schedule", "hops", 1));
    cfg.schedule.seed = static_cast<std::uint64_t>(
        get_num(s, "schedule", "seed", 1));
    cfg.schedule.window =
        static_cast<int>(get_num(s, "schedule", "window", 10));
  }

  if (!j.contains("algorithms") || !j.at("algorithms").is_array() ||
      j.at("algorithms").empty()) {
    bad_field("algorithms", "must be a non-empty array");
  }
  int idx = 0;
  for (const json& a : j.at("algorithms")) {
    const std::string where = "algorithms[" + std::to_string(idx) + "]";
    reject_unknown(a, where,
                   {"tag", "method", "mode", "step", "rho1", "rho2",
                    "max_iters", "average", "diagnostics", "workers",
                    "dual_radius"});
    AlgorithmConfig alg;
    alg.tag = get_str(a, where, "tag", "", true);
    alg.method = get_str(a, where, "method", "", true);
    alg.solver = parse_solver(a, where);
    cfg.algorithms.push_back(std::move(alg));
    ++idx;
  }

  if (j.contains("oracle")) {
    const json& o = j.at("oracle");
    reject_unknown(o, "oracle", {"enabled", "tol", "cache_dir"});
    if (o.contains("enabled")) {
      if (!o.at("enabled").is_boolean()) {
        bad_field("oracle.enabled", "must be a boolean");
      }
      cfg.oracle.enabled = o.at("enabled").get<bool>();
    }
    cfg.oracle.tol = get_num(o, "oracle", "tol", cfg.oracle.tol);
    cfg.oracle.cache_dir = get_str(o, "oracle", "cache_dir", "");
  }

  cfg.output_dir = get_str(j, "", "output_dir", cfg.output_dir);
  if (j.contains("plot")) {
    if (!j.at("plot").is_boolean()) bad_field("plot", "must be a boolean");
    cfg.plot = j.at("plot").get<bool>();
  }
  if (j.contains("plot_log_gap")) {
    if (!j.at("plot_log_gap").is_boolean()) {
      bad_field("plot_log_gap", "must be a boolean");
    }
    cfg.plot_log_gap = j.at("plot_log_gap").get<bool>();
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("load_experiment_config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return parse_experiment_config(j);
}

MaterializedInstance materialize_instance(const json& instance) {
  MaterializedInstance out;
  if (instance.contains("file")) {
    reject_unknown(instance, "instance", {"file"});
    const InstanceFile f =
        load_instance(instance.at("file").get<std::string>());
    out.meta = f.meta;
    if (f.kind == "dsm") {
      out.is_dsm = true;
      out.dsm = f.dsm;
      out.builtin = f.dsm.to_builtin();
    } else {
      out.builtin = f.builtin;
    }
    return out;
  }
  const std::string gen = get_str(instance, "instance", "generator", "", true);
  if (gen == "dsm") {
    reject_unknown(instance, "instance",
                   {"generator", "num_customers", "horizon", "seed"});
    DsmParams p;
    p.num_customers = static_cast<int>(get_num(
        instance, "instance", "num_customers", p.num_customers));
    p.horizon =
        static_cast<int>(get_num(instance, "instance", "horizon", p.horizon));
    p.seed = static_cast<unsigned>(get_num(instance, "instance", "seed", 1));
    out.is_dsm = true;
    out.dsm = generate_dsm(p);
    out.builtin = out.dsm.to_builtin();
  } else if (gen == "sparse") {
    reject_unknown(instance, "instance",
                   {"generator", "num_agents", "primal_dim", "map_dim",
                    "support_per_agent", "box_bound", "noise", "l1_budget",
                    "seed"});
    SparseParams p;
    p.num_agents = static_cast<int>(
        get_num(instance, "instance", "num_agents", p.num_agents));
    p.primal_dim = static_cast<int>(
        get_num(instance, "instance", "primal_dim", p.primal_dim));
    p.map_dim = static_cast<int>(
        get_num(instance, "instance", "map_dim", p.map_dim));
    p.support_per_agent = static_cast<int>(get_num(
        instance, "instance", "support_per_agent", p.support_per_agent));
    p.box_bound =
        get_num(instance, "instance", "box_bound", p.box_bound);
    p.noise = get_num(instance, "instance", "noise", p.noise);
    p.l1_budget = get_num(instance, "instance", "l1_budget", p.l1_budget);
    p.seed = static_cast<unsigned>(get_num(instance, "instance", "seed", 1));
    SparseInstance inst = generate_sparse_regression(p);
    out.builtin = std::move(inst.problem);
    json planted = json::array();
    for (const Vec& b : inst.planted_x) planted.push_back(vec_to_json(b));
    out.meta = json{{"planted_x", std::move(planted)},
                    {"l1_budget", inst.l1_budget}};
  } else if (gen == "qp") {
    reject_unknown(instance, "instance",
                   {"generator", "num_agents", "primal_dim", "map_dim",
                    "seed"});
    QpParams p;
    p.num_agents = static_cast<int>(
        get_num(instance, "instance", "num_agents", p.num_agents));
    p.primal_dim = static_cast<int>(
        get_num(instance, "instance", "primal_dim", p.primal_dim));
    p.map_dim = static_cast<int>(
        get_num(instance, "instance", "map_dim", p.map_dim));
    p.seed = static_cast<unsigned>(get_num(instance, "instance", "seed", 1));
    QpInstance inst = random_qp(p);
    out.builtin = std::move(inst.problem);
    json planted = json::array();
    for (const Vec& b : inst.planted_x) planted.push_back(vec_to_json(b));
    out.meta = json{{"planted_x", std::move(planted)},
                    {"planted_value", inst.planted_value},
                    {"planted_lambda", inst.planted_lambda}};
  } else {
    bad_field("instance.generator", "unknown generator '" + gen + "'");
  }
  return out;
}

GraphSchedule build_schedule(const ScheduleConfig& cfg, int num_nodes) {
  if (cfg.kind == "random") {
    return GraphSchedule::random(num_nodes, cfg.edge_probability, cfg.seed,
                                 cfg.window);
  }
  if (cfg.kind != "fixed") {
    bad_field("schedule.kind", "expected 'fixed' or 'random'");
  }
  Eigen::MatrixXi adj;
  if (cfg.topology == "ring") {
    adj = ring_adjacency(num_nodes, cfg.hops);
  } else if (cfg.topology == "path") {
    adj = path_adjacency(num_nodes);
  } else if (cfg.topology == "complete") {
    adj = complete_adjacency(num_nodes);
  } else if (cfg.topology == "erdos_renyi") {
    adj = erdos_renyi_adjacency(num_nodes, cfg.edge_probability, cfg.seed);
  } else if (cfg.topology == "geometric") {
    adj = geometric_adjacency(num_nodes, cfg.radius, cfg.seed);
  } else {
    bad_field("schedule.topology", "unknown topology '" + cfg.topology + "'");
  }
  return GraphSchedule::fixed(metropolis_weights(adj), cfg.window);
}

namespace {

int schedule_nodes_for(const AlgorithmConfig& alg,
                       const MaterializedInstance& inst) {
  if (alg.method == "dds") return inst.dsm.num_customers;
  return inst.builtin.dims.num_agents;
}

bool needs_schedule(const std::string& method) {
  return method == "pdp" || method == "pd-noperturb" || method == "dds";
}

TraceRow centralized_row(const ProblemSpec& spec, const std::vector<Vec>& avg,
                         const std::vector<Vec>& now, const Vec& lambda,
                         int k, double a_k) {
  TraceRow row;
  row.k = k;
  row.a_k = a_k;
  row.obj_avg = objective(spec, avg);
  row.obj_raw = objective(spec, now);
  const Vec g_avg = sum_g(spec, avg);
  row.viol = g_avg.cwiseMax(0.0).norm();
  row.compl_slack = std::abs(lambda.dot(g_avg));
  row.dual_disagree = 0.0;
  row.y_disagree = 0.0;
  row.z_disagree = 0.0;
  row.pert_residual = std::numeric_limits<double>::quiet_NaN();
  return row;
}

// Runs either centralized recursion with the same diminishing steps and
// running-average reporting as the distributed loops.
RunTrace run_centralized(const ProblemSpec& spec, const AlgorithmConfig& alg,
                         const std::function<void(int, const std::vector<Vec>&)>&
                             on_iteration) {
  const SolverConfig& cfg = alg.solver;
  const double radius =
      cfg.dual_radius > 0.0 ? cfg.dual_radius : dual_ball_radius(spec);
  CentralizedState st = centralized_init(spec, cfg.x0);
  std::vector<Vec> avg = st.xs;
  RunTrace trace;
  trace.rows.reserve(cfg.max_iters);
  double step_mass = 0.0;
  for (int k = 1; k <= cfg.max_iters; ++k) {
    const double a_k = cfg.step.at(k);
    step_mass += a_k;
    const double w =
        cfg.average == AverageKind::Weighted ? a_k / step_mass : 1.0 / k;
    const std::vector<Vec> pre = st.xs;
    if (alg.method == "centralized-pd") {
      centralized_pd_step(spec, a_k, st);
    } else {
      centralized_pdp_step(spec, cfg, a_k, radius, st);
    }
    for (std::size_t i = 0; i < avg.size(); ++i) {
      avg[i] += w * (pre[i] - avg[i]);
    }
    trace.rows.push_back(centralized_row(spec, avg, st.xs, st.lambda, k, a_k));
    if (on_iteration) on_iteration(k, avg);
  }
  return trace;
}

}  // namespace

std::string CheckReport::to_string() const {
  std::ostringstream out;
  for (const std::string& e : errors) out << "error: " << e << "\n";
  for (const std::string& w : warnings) out << "warning: " << w << "\n";
  for (const std::string& i : info) out << i << "\n";
  out << (ok() ? "OK" : "FAILED") << "\n";
  return out.str();
}

CheckReport check_config(const ExperimentConfig& cfg) {
  CheckReport rep;

  MaterializedInstance inst;
  ProblemSpec spec;
  bool have_spec = false;
  try {
    inst = materialize_instance(cfg.instance);
    spec = to_spec(inst.builtin);
    const ValidationReport v = validate_problem(spec);
    if (!v.ok()) {
      rep.errors.push_back("instance failed validation:\n" + v.to_string());
    } else {
      have_spec = true;
    }
  } catch (const std::exception& e) {
    rep.errors.push_back(std::string("instance: ") + e.what());
  }

  std::vector<std::string> tags;
  for (const AlgorithmConfig& alg : cfg.algorithms) {
    const std::string where = "algorithm '" + alg.tag + "'";
    if (alg.tag.empty()) rep.errors.push_back("algorithm with empty tag");
    for (const std::string& t : tags) {
      if (t == alg.tag) rep.errors.push_back("duplicate tag '" + alg.tag + "'");
    }
    tags.push_back(alg.tag);
    if (!known_method(alg.method)) {
      rep.errors.push_back(where + ": unknown method '" + alg.method + "'");
      continue;
    }
    if (alg.method == "dds" && !inst.is_dsm) {
      rep.errors.push_back(where +
                           ": dds only applies to scheduling instances");
    }
    if (alg.solver.max_iters < 1) {
      rep.errors.push_back(where + ": max_iters must be >= 1");
    }
    if (alg.solver.step.a <= 0.0 || alg.solver.step.b < 0.0) {
      rep.errors.push_back(where + ": step needs a > 0 and b >= 0");
    }
    if (alg.solver.workers < 1) {
      rep.errors.push_back(where + ": workers must be >= 1");
    }
    const bool uses_rho =
        alg.method == "pdp" || alg.method == "centralized-pdp";
    if (uses_rho && (alg.solver.rho1 <= 0.0 || alg.solver.rho2 <= 0.0)) {
      rep.errors.push_back(where + ": rho1 and rho2 must be positive");
    }
    if (have_spec && uses_rho) {
      try {
        const double radius = alg.solver.dual_radius > 0.0
                                  ? alg.solver.dual_radius
                                  : dual_ball_radius(spec);
        const double bound =
            theorem_rho1_bound(spec, alg.solver.mode, radius);
        std::ostringstream line;
        line << where << ": effective D_lambda = " << radius
             << ", rho1 bound = " << bound;
        rep.info.push_back(line.str());
        if (alg.solver.rho1 > bound) {
          std::ostringstream w;
          w << where << ": rho1 = " << alg.solver.rho1
            << " exceeds the bound " << bound;
          rep.warnings.push_back(w.str());
        }
      } catch (const std::exception& e) {
        rep.errors.push_back(where + ": " + e.what());
      }
    }
  }

  if (have_spec) {
    int max_nodes = 0;
    bool any_schedule = false;
    for (const AlgorithmConfig& alg : cfg.algorithms) {
      if (!needs_schedule(alg.method)) continue;
      any_schedule = true;
      max_nodes = std::max(max_nodes, schedule_nodes_for(alg, inst));
    }
    if (any_schedule) {
      try {
        const GraphSchedule sched = build_schedule(cfg.schedule, max_nodes);
        const int horizon = cfg.schedule.kind == "random"
                                ? std::max(20 * cfg.schedule.window, 200)
                                : std::max(2 * cfg.schedule.window, 20);
        const NetworkCheck nc = check_assumption4(sched, horizon);
        if (!nc.pass) {
          rep.errors.push_back("schedule fails the consensus assumptions: " +
                               nc.detail);
        } else {
          std::ostringstream line;
          line << "schedule ok over " << horizon
               << " rounds: min diagonal = " << nc.min_diagonal
               << ", min positive entry = " << nc.min_positive_entry;
          rep.info.push_back(line.str());
        }
      } catch (const std::exception& e) {
        rep.errors.push_back(std::string("schedule: ") + e.what());
      }
    }
  }
  return rep;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  MaterializedInstance inst = materialize_instance(cfg.instance);
  const ProblemSpec spec = to_spec(inst.builtin);
  validate_problem(spec).require();

  std::filesystem::create_directories(cfg.output_dir);

  json summary;
  summary["name"] = cfg.name;
  summary["instance"] =
      json{{"kind", inst.is_dsm ? "dsm" : "builtin"},
           {"name", inst.builtin.name},
           {"num_agents", inst.builtin.dims.num_agents},
           {"primal_dim", inst.builtin.dims.primal_dim},
           {"map_dim", inst.builtin.dims.map_dim},
           {"constraint_dim", inst.builtin.dims.constraint_dim}};
  summary["schedule"] = json{{"topology", cfg.schedule.topology},
                             {"kind", cfg.schedule.kind},
                             {"seed", cfg.schedule.seed},
                             {"window", cfg.schedule.window}};

  ReferenceSolution ref;
  bool have_ref = false;
  if (cfg.oracle.enabled) {
    OracleOptions opts;
    opts.tol = cfg.oracle.tol;
    opts.cache_dir = cfg.oracle.cache_dir;
    ref = solve_reference(spec, opts);
    have_ref = true;
    summary["oracle"] = json{{"value", ref.value},
                             {"method", ref.method},
                             {"feas_residual", ref.feas_residual},
                             {"compl_residual", ref.compl_residual},
                             {"stat_residual", ref.stat_residual}};
  }

  if (inst.is_dsm) {
    summary["dsm"] =
        json{{"unscheduled_cost", inst.dsm.cost(inst.dsm.unscheduled())}};
  }

  std::vector<PlotSeries> series;
  json algs;
  for (const AlgorithmConfig& alg : cfg.algorithms) {
    RunTrace trace;
    // Objective series for the plot and the scheduling report: for DSM
    // instances this is the original cost of the customer running average,
    // for everything else the traced objective of the running average.
    std::vector<double> objective_curve;
    double scheduled_cost = std::numeric_limits<double>::quiet_NaN();

    const auto collect_dsm = [&](const std::vector<Vec>& customer_avg) {
      const double c = inst.dsm.cost(customer_avg);
      objective_curve.push_back(c);
      scheduled_cost = c;
    };

    if (alg.method == "pdp" || alg.method == "pd-noperturb") {
      const GraphSchedule sched =
          build_schedule(cfg.schedule, schedule_nodes_for(alg, inst));
      RunCallbacks cbs;
      if (inst.is_dsm) {
        cbs.on_iteration = [&](int, const std::vector<AgentState>& st) {
          std::vector<Vec> cust(inst.dsm.num_customers);
          for (int i = 0; i < inst.dsm.num_customers; ++i) {
            cust[i] = st[i].x_avg;
          }
          collect_dsm(cust);
        };
      }
      trace = alg.method == "pdp"
                  ? run_pdp(spec, alg.solver, sched, cbs).trace
                  : distributed_pd_noperturb_run(spec, alg.solver, sched, cbs)
                        .trace;
    } else if (alg.method == "dds") {
      if (!inst.is_dsm) {
        throw ConfigError("run_experiment: dds needs a scheduling instance");
      }
      const GraphSchedule sched =
          build_schedule(cfg.schedule, inst.dsm.num_customers);
      DdsCallbacks cbs;
      cbs.on_iteration = [&](int, const std::vector<DdsState>& st) {
        std::vector<Vec> cust(st.size());
        for (std::size_t i = 0; i < st.size(); ++i) cust[i] = st[i].x_avg;
        collect_dsm(cust);
      };
      trace = dds_run(inst.dsm, alg.solver, sched, cbs).trace;
    } else if (alg.method == "centralized-pd" ||
               alg.method == "centralized-pdp") {
      std::function<void(int, const std::vector<Vec>&)> cb;
      if (inst.is_dsm) {
        cb = [&](int, const std::vector<Vec>& avg) {
          std::vector<Vec> cust(avg.begin(),
                                avg.begin() + inst.dsm.num_customers);
          collect_dsm(cust);
        };
      }
      trace = run_centralized(spec, alg, cb);
    } else {
      throw ConfigError("run_experiment: unknown method '" + alg.method + "'");
    }

    write_trace_csv(
        (std::filesystem::path(cfg.output_dir) / (alg.tag + ".csv")).string(),
        trace);

    if (!inst.is_dsm) {
      objective_curve.clear();
      for (const TraceRow& r : trace.rows) objective_curve.push_back(r.obj_avg);
    }

    const TraceRow& last = trace.rows.back();
    json a;
    a["method"] = alg.method;
    a["iterations"] = last.k;
    a["final_obj_avg"] = last.obj_avg;
    a["final_viol"] = last.viol;
    a["final_compl_slack"] = last.compl_slack;
    a["final_dual_disagree"] = last.dual_disagree;
    if (inst.is_dsm) a["scheduled_cost"] = scheduled_cost;
    if (have_ref) {
      const double obj =
          inst.is_dsm ? scheduled_cost : last.obj_avg;
      a["oracle_gap"] = obj - ref.value;
    }
    if (!trace.warnings.empty()) a["warnings"] = trace.warnings;
    algs[alg.tag] = std::move(a);

    PlotSeries ps;
    ps.label = alg.tag;
    ps.x.resize(objective_curve.size());
    for (std::size_t i = 0; i < objective_curve.size(); ++i) {
      ps.x[i] = static_cast<double>(i + 1);
    }
    if (cfg.plot_log_gap && have_ref) {
      ps.y.resize(objective_curve.size());
      for (std::size_t i = 0; i < objective_curve.size(); ++i) {
        ps.y[i] = std::abs(objective_curve[i] - ref.value);
      }
    } else {
      ps.y = objective_curve;
    }
    series.push_back(std::move(ps));
  }
  summary["algorithms"] = std::move(algs);

  if (cfg.plot) {
    PlotOptions popts;
    popts.title = cfg.name;
    popts.x_label = "iteration";
    if (cfg.plot_log_gap && have_ref) {
      popts.y_label = "objective gap";
      popts.log_y = true;
    } else {
      popts.y_label = inst.is_dsm ? "cost" : "objective";
    }
    write_svg_plot(
        (std::filesystem::path(cfg.output_dir) / "convergence.svg").string(),
        series, popts);
  }

  ExperimentResult out;
  out.output_dir = cfg.output_dir;
  out.summary = summary;
  std::ofstream sf(std::filesystem::path(cfg.output_dir) / "summary.json");
  if (!sf) throw Error("run_experiment: cannot write summary.json");
  sf << summary.dump(2) << "\n";
  return out;
}

}  // namespace pdp

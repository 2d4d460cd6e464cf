#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "pdp/baselines.hpp"
#include "pdp/network.hpp"
#include "pdp/oracle.hpp"
#include "pdp/problems/dsm.hpp"

namespace pdp {

struct ScheduleConfig {
  std::string topology = "ring";  // ring|path|complete|erdos_renyi|geometric
  std::string kind = "fixed";     // fixed|random (fresh draw every round)
  double edge_probability = 0.5;
  double radius = 0.6;
  int hops = 1;
  std::uint64_t seed = 1;
  int window = 10;  // Q, rounds per connectivity window
};

struct AlgorithmConfig {
  std::string tag;     // output file stem, unique within the config
  std::string method;  // pdp|pd-noperturb|dds|centralized-pd|centralized-pdp
  SolverConfig solver;
};

struct OracleConfig {
  bool enabled = false;
  double tol = 1e-8;
  std::string cache_dir;
};

struct ExperimentConfig {
  std::string name = "experiment";
  nlohmann::json instance;  // generator parameters or {"file": path}
  ScheduleConfig schedule;
  std::vector<AlgorithmConfig> algorithms;
  OracleConfig oracle;
  std::string output_dir = "out";
  bool plot = true;
  // With the oracle on, plot |objective - reference| on a log axis instead
  // of the raw objective.
  bool plot_log_gap = false;
};

ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);

// Instance the config resolves to. Every instance carries the serializable
// problem; scheduling instances also keep the original cost evaluator for
// reporting in terms of the unreformulated objective.
struct MaterializedInstance {
  BuiltinProblem builtin;
  bool is_dsm = false;
  DsmInstance dsm;
  nlohmann::json meta;
};

MaterializedInstance materialize_instance(const nlohmann::json& instance);

GraphSchedule build_schedule(const ScheduleConfig& cfg, int num_nodes);

struct CheckReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  std::vector<std::string> info;

  bool ok() const { return errors.empty(); }
  std::string to_string() const;
};

// Static validation: schema and value checks, problem validation, step-size
// bound warnings, consensus assumption check, effective dual radius.
CheckReport check_config(const ExperimentConfig& cfg);

struct ExperimentResult {
  std::string output_dir;
  nlohmann::json summary;
};

// Runs every algorithm in the config against the materialized instance,
// writing <tag>.csv per algorithm, summary.json, and convergence.svg when
// plotting is enabled. Output bytes depend only on the config and seeds.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace pdp

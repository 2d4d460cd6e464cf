#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pdp/experiment.hpp"
#include "pdp/io/csv.hpp"
#include "pdp/io/json_io.hpp"
#include "pdp/io/svg.hpp"
#include "pdp/problems/sparse.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kRuntimeFailure = 2;

int cmd_run(const std::string& config_path) {
  const pdp::ExperimentConfig cfg = pdp::load_experiment_config(config_path);
  const pdp::CheckReport report = pdp::check_config(cfg);
  for (const std::string& w : report.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  if (!report.ok()) {
    for (const std::string& e : report.errors) {
      std::cerr << "error: " << e << "\n";
    }
    return kValidationFailure;
  }
  const pdp::ExperimentResult result = pdp::run_experiment(cfg);
  std::cout << "wrote " << result.output_dir << "\n";
  for (const auto& [tag, data] : result.summary.at("algorithms").items()) {
    std::cout << "  " << tag << ": final objective "
              << data.at("final_obj_avg").get<double>() << ", violation "
              << data.at("final_viol").get<double>() << "\n";
  }
  return kOk;
}

int cmd_check(const std::string& config_path) {
  const pdp::ExperimentConfig cfg = pdp::load_experiment_config(config_path);
  const pdp::CheckReport report = pdp::check_config(cfg);
  std::cout << report.to_string();
  return report.ok() ? kOk : kValidationFailure;
}

int cmd_generate_dsm(const pdp::DsmParams& params, const std::string& out) {
  pdp::InstanceFile file;
  file.kind = "dsm";
  file.dsm = pdp::generate_dsm(params);
  file.meta = nlohmann::json{{"generator", "dsm"}, {"seed", params.seed}};
  pdp::save_instance(out, file);
  std::cout << "wrote " << out << "\n";
  return kOk;
}

int cmd_generate_sparse(const pdp::SparseParams& params,
                        const std::string& out) {
  const pdp::SparseInstance inst = pdp::generate_sparse_regression(params);
  pdp::InstanceFile file;
  file.kind = "builtin";
  file.builtin = inst.problem;
  nlohmann::json planted = nlohmann::json::array();
  for (const pdp::Vec& b : inst.planted_x) {
    planted.push_back(pdp::vec_to_json(b));
  }
  file.meta = nlohmann::json{{"generator", "sparse"},
                             {"seed", params.seed},
                             {"planted_x", std::move(planted)},
                             {"l1_budget", inst.l1_budget}};
  pdp::save_instance(out, file);
  std::cout << "wrote " << out << "\n";
  return kOk;
}

int cmd_compare(const std::string& dir, bool log_scale) {
  std::vector<std::string> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".csv") {
      paths.push_back(entry.path().string());
    }
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) {
    std::cerr << "error: no CSV traces in " << dir << "\n";
    return kValidationFailure;
  }

  std::vector<pdp::PlotSeries> series;
  std::printf("%-20s %8s %16s %12s %14s\n", "trace", "rounds", "objective",
              "violation", "dual spread");
  for (const std::string& p : paths) {
    const pdp::RunTrace trace = pdp::read_trace_csv(p);
    if (trace.rows.empty()) continue;
    const pdp::TraceRow& last = trace.rows.back();
    const std::string stem = std::filesystem::path(p).stem().string();
    std::printf("%-20s %8d %16.8g %12.4g %14.4g\n", stem.c_str(), last.k,
                last.obj_avg, last.viol, last.dual_disagree);
    pdp::PlotSeries s;
    s.label = stem;
    for (const pdp::TraceRow& r : trace.rows) {
      s.x.push_back(static_cast<double>(r.k));
      s.y.push_back(r.obj_avg);
    }
    series.push_back(std::move(s));
  }

  pdp::PlotOptions opts;
  opts.title = "trace comparison";
  opts.x_label = "iteration";
  opts.y_label = "objective";
  opts.log_y = log_scale;
  const std::string out =
      (std::filesystem::path(dir) / "compare.svg").string();
  pdp::write_svg_plot(out, series, opts);
  std::cout << "wrote " << out << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Consensus-based primal-dual perturbation experiment harness"};
  app.require_subcommand(1);

  std::string run_config;
  CLI::App* run = app.add_subcommand("run", "Run experiments from a config");
  run->add_option("config", run_config, "JSON experiment config")
      ->required()
      ->check(CLI::ExistingFile);

  std::string check_config_path;
  CLI::App* check =
      app.add_subcommand("check-config", "Validate a config without running");
  check->add_option("config", check_config_path, "JSON experiment config")
      ->required()
      ->check(CLI::ExistingFile);

  CLI::App* generate =
      app.add_subcommand("generate", "Generate an instance file");
  generate->require_subcommand(1);

  pdp::DsmParams dsm_params;
  std::string dsm_out;
  CLI::App* gen_dsm =
      generate->add_subcommand("dsm", "Demand scheduling instance");
  gen_dsm->add_option("-n,--num-customers", dsm_params.num_customers,
                      "Number of customers");
  gen_dsm->add_option("-t,--horizon", dsm_params.horizon, "Time slots");
  gen_dsm->add_option("-s,--seed", dsm_params.seed, "Generator seed");
  gen_dsm->add_option("-o,--output", dsm_out, "Output JSON path")->required();

  pdp::SparseParams sparse_params;
  std::string sparse_out;
  CLI::App* gen_sparse =
      generate->add_subcommand("sparse", "Sparse regression instance");
  gen_sparse->add_option("-n,--num-agents", sparse_params.num_agents,
                         "Number of agents");
  gen_sparse->add_option("-k,--primal-dim", sparse_params.primal_dim,
                         "Per-agent dimension");
  gen_sparse->add_option("-m,--map-dim", sparse_params.map_dim,
                         "Regression rows");
  gen_sparse->add_option("--support", sparse_params.support_per_agent,
                         "Planted nonzeros per agent");
  gen_sparse->add_option("--box-bound", sparse_params.box_bound,
                         "Box half-width");
  gen_sparse->add_option("--noise", sparse_params.noise,
                         "Observation noise level");
  gen_sparse->add_option("--l1-budget", sparse_params.l1_budget,
                         "Total l1 budget (< 0 plants the exact norm)");
  gen_sparse->add_option("-s,--seed", sparse_params.seed, "Generator seed");
  gen_sparse->add_option("-o,--output", sparse_out, "Output JSON path")
      ->required();

  std::string compare_dir;
  bool compare_log = false;
  CLI::App* compare =
      app.add_subcommand("compare", "Tabulate and plot traces in a directory");
  compare->add_option("dir", compare_dir, "Directory with RunTrace CSVs")
      ->required()
      ->check(CLI::ExistingDirectory);
  compare->add_flag("--log", compare_log, "Log-scale objective axis");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_config);
    if (check->parsed()) return cmd_check(check_config_path);
    if (generate->parsed()) {
      if (gen_dsm->parsed()) return cmd_generate_dsm(dsm_params, dsm_out);
      if (gen_sparse->parsed()) {
        return cmd_generate_sparse(sparse_params, sparse_out);
      }
    }
    if (compare->parsed()) return cmd_compare(compare_dir, compare_log);
  } catch (const pdp::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const pdp::DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const pdp::ModeMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const pdp::SlaterViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const pdp::GradientMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
  return kOk;
}

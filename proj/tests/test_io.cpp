#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "pdp/io/csv.hpp"
#include "pdp/io/json_io.hpp"
#include "pdp/io/svg.hpp"
#include "pdp/problems/qp.hpp"

using namespace pdp;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "pdp-io-test") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

RunTrace sample_trace() {
  RunTrace trace;
  for (int k = 1; k <= 3; ++k) {
    TraceRow row;
    row.k = k;
    row.a_k = 1.0 / (10.0 + k);
    row.obj_avg = std::sqrt(2.0) * k;
    row.obj_raw = -1.0 / 3.0;
    row.viol = 1e-300;
    row.compl_slack = 0.0;
    row.dual_disagree = 1.2345678901234567e-4;
    row.y_disagree = 7.0;
    row.z_disagree = 8.0;
    row.pert_residual = k == 2 ? std::numeric_limits<double>::quiet_NaN()
                               : -2.5e-9;
    trace.rows.push_back(row);
  }
  return trace;
}

}  // namespace

TEST_CASE("vectors and matrices survive a serialized round trip") {
  Vec v(3);
  v << 1.0 / 3.0, -std::sqrt(2.0), 4e-17;
  const nlohmann::json reparsed = nlohmann::json::parse(vec_to_json(v).dump());
  CHECK((vec_from_json(reparsed) - v).norm() == 0.0);

  Mat m(2, 3);
  m << 1.0, 2.0, 3.0, 4.0, 5.0, 1.0 / 7.0;
  const nlohmann::json mj = nlohmann::json::parse(mat_to_json(m).dump());
  CHECK((mat_from_json(mj) - m).norm() == 0.0);

  nlohmann::json bad = mat_to_json(m);
  bad["rows"] = 5;
  CHECK_THROWS_AS(mat_from_json(bad), DimensionMismatch);
}

TEST_CASE("builtin problems round trip through json") {
  const BuiltinProblem original = random_qp({3, 2, 2, 19}).problem;
  const BuiltinProblem back =
      builtin_from_json(nlohmann::json::parse(builtin_to_json(original).dump()));

  CHECK(back.name == original.name);
  CHECK(back.cache_key == original.cache_key);
  CHECK(back.dims.num_agents == 3);

  const ProblemSpec a = to_spec(original);
  const ProblemSpec b = to_spec(back);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Vec> xs(3);
    for (auto& x : xs) {
      x = Vec(2);
      x << u(rng), u(rng);
    }
    CHECK(objective(a, xs) == objective(b, xs));
    CHECK((sum_g(a, xs) - sum_g(b, xs)).norm() == 0.0);
  }
}

TEST_CASE("demand scheduling instances round trip through json") {
  const DsmInstance original = generate_dsm({4, 6, 5});
  const DsmInstance back =
      dsm_from_json(nlohmann::json::parse(dsm_to_json(original).dump()));

  CHECK(back.num_customers == 4);
  CHECK(back.horizon == 6);
  CHECK(back.pi_p == original.pi_p);
  CHECK((back.bid - original.bid).norm() == 0.0);
  CHECK((back.z_max - original.z_max).norm() == 0.0);

  const std::vector<Vec> mid = original.unscheduled();
  CHECK(back.cost(mid) == original.cost(mid));
  CHECK(back.to_builtin().cache_key == original.to_builtin().cache_key);
}

TEST_CASE("instance files carry their kind and metadata") {
  TempDir tmp;
  const std::string path = (tmp.path / "instance.json").string();

  InstanceFile file;
  file.kind = "builtin";
  file.builtin = random_qp({2, 2, 2, 23}).problem;
  file.meta = nlohmann::json{{"planted_value", 1.25}};
  save_instance(path, file);

  const InstanceFile loaded = load_instance(path);
  CHECK(loaded.kind == "builtin");
  CHECK(loaded.builtin.cache_key == file.builtin.cache_key);
  CHECK(loaded.meta.at("planted_value").get<double>() == 1.25);

  InstanceFile dsm_file;
  dsm_file.kind = "dsm";
  dsm_file.dsm = generate_dsm({3, 5, 2});
  const std::string dsm_path = (tmp.path / "dsm.json").string();
  save_instance(dsm_path, dsm_file);
  CHECK((load_instance(dsm_path).dsm.bid - dsm_file.dsm.bid).norm() == 0.0);

  InstanceFile bad;
  bad.kind = "parquet";
  CHECK_THROWS_AS(save_instance(path, bad), ConfigError);
  CHECK_THROWS_AS(load_instance((tmp.path / "missing.json").string()), Error);

  const std::string mangled = (tmp.path / "mangled.json").string();
  std::ofstream(mangled) << "{ kind: oops";
  CHECK_THROWS_AS(load_instance(mangled), ConfigError);

  const std::string alien = (tmp.path / "alien.json").string();
  std::ofstream(alien) << "{\"kind\": \"tsv\"}";
  CHECK_THROWS_AS(load_instance(alien), ConfigError);
}

TEST_CASE("trace csv uses the fixed schema and survives a round trip") {
  CHECK(std::string(kTraceCsvHeader) ==
        "k,a_k,obj_avg,obj_raw,viol,compl_slack,dual_disagree,y_disagree,"
        "z_disagree,pert_residual");

  const RunTrace trace = sample_trace();
  const std::string text = trace_to_csv(trace);
  CHECK(text.find("nan") != std::string::npos);

  TempDir tmp;
  const std::string path = (tmp.path / "trace.csv").string();
  write_trace_csv(path, trace);
  const RunTrace back = read_trace_csv(path);

  REQUIRE(back.rows.size() == trace.rows.size());
  for (std::size_t r = 0; r < trace.rows.size(); ++r) {
    const TraceRow& a = trace.rows[r];
    const TraceRow& b = back.rows[r];
    CHECK(a.k == b.k);
    CHECK(a.a_k == b.a_k);
    CHECK(a.obj_avg == b.obj_avg);
    CHECK(a.obj_raw == b.obj_raw);
    CHECK(a.viol == b.viol);
    CHECK(a.compl_slack == b.compl_slack);
    CHECK(a.dual_disagree == b.dual_disagree);
    CHECK(a.y_disagree == b.y_disagree);
    CHECK(a.z_disagree == b.z_disagree);
    if (std::isnan(a.pert_residual)) {
      CHECK(std::isnan(b.pert_residual));
    } else {
      CHECK(a.pert_residual == b.pert_residual);
    }
  }

  // Writing the parsed trace again reproduces the bytes.
  CHECK(trace_to_csv(back) == text);
}

TEST_CASE("trace csv rejects malformed files") {
  TempDir tmp;
  const std::string path = (tmp.path / "bad.csv").string();

  std::ofstream(path) << "totally,different,header\n";
  CHECK_THROWS_AS(read_trace_csv(path), ConfigError);

  std::ofstream(path) << std::string(kTraceCsvHeader) + "\n1,2,3\n";
  CHECK_THROWS_AS(read_trace_csv(path), ConfigError);

  std::ofstream(path) << std::string(kTraceCsvHeader) +
                             "\n1,0.1,0.2,0.3,0,0,0,0,0,oops\n";
  CHECK_THROWS_AS(read_trace_csv(path), ConfigError);

  CHECK_THROWS_AS(read_trace_csv((tmp.path / "missing.csv").string()), Error);
}

TEST_CASE("svg plots are deterministic and honor the log scale") {
  PlotSeries rising{"rising", {1.0, 2.0, 3.0}, {1.0, 10.0, 100.0}};
  PlotSeries mixed{"mixed", {1.0, 2.0, 3.0}, {-5.0, 0.0, 4.0}};
  PlotOptions opts;
  opts.title = "residuals";
  opts.x_label = "round";
  opts.y_label = "gap";

  const std::string flat = render_svg_plot({rising, mixed}, opts);
  CHECK(flat == render_svg_plot({rising, mixed}, opts));
  CHECK(flat.find("<svg") != std::string::npos);
  CHECK(flat.find("rising") != std::string::npos);
  CHECK(flat.find("mixed") != std::string::npos);
  CHECK(flat.find("residuals") != std::string::npos);

  opts.log_y = true;
  const std::string logged = render_svg_plot({rising, mixed}, opts);
  CHECK(logged.find("nan") == std::string::npos);
  CHECK(logged.find("inf") == std::string::npos);
  CHECK(logged != flat);

  TempDir tmp;
  const std::string path = (tmp.path / "plot.svg").string();
  write_svg_plot(path, {rising}, opts);
  CHECK(fs::file_size(path) > 0);
}

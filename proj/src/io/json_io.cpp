#include "pdp/io/json_io.hpp"

#include <fstream>

namespace pdp {

using nlohmann::json;

json vec_to_json(const Vec& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vec vec_from_json(const json& j) {
  const auto raw = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(raw.data(),
                               static_cast<Eigen::Index>(raw.size()));
}

json mat_to_json(const Mat& m) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Mat mat_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw DimensionMismatch("mat_from_json: data length != rows * cols");
  }
  Mat m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[k++];
  }
  return m;
}

json builtin_to_json(const BuiltinProblem& p) {
  json j;
  j["name"] = p.name;
  j["cache_key"] = p.cache_key;
  j["dims"] = json{{"num_agents", p.dims.num_agents},
                   {"primal_dim", p.dims.primal_dim},
                   {"map_dim", p.dims.map_dim},
                   {"constraint_dim", p.dims.constraint_dim}};
  j["cost"] = json{{"Q", mat_to_json(p.cost.Q)},
                   {"q", vec_to_json(p.cost.q)},
                   {"c", p.cost.c}};
  json agents = json::array();
  for (const BuiltinAgent& a : p.agents) {
    json ja;
    ja["f_matrix"] = mat_to_json(a.f_matrix);
    if (a.affine_g) {
      ja["affine_g"] =
          json{{"G", mat_to_json(a.affine_g->G)}, {"h", vec_to_json(a.affine_g->h)}};
    }
    if (a.l1_g) ja["l1_g"] = json{{"offset", a.l1_g->offset}};
    if (a.box) {
      ja["box"] =
          json{{"lo", vec_to_json(a.box->lo)}, {"hi", vec_to_json(a.box->hi)}};
    }
    if (a.polytope) {
      ja["polytope"] = json{{"A", mat_to_json(a.polytope->A)},
                            {"b", vec_to_json(a.polytope->b)},
                            {"lo", vec_to_json(a.polytope->lo)},
                            {"hi", vec_to_json(a.polytope->hi)}};
    }
    agents.push_back(std::move(ja));
  }
  j["agents"] = std::move(agents);
  json slater = json::array();
  for (const Vec& s : p.slater_points) slater.push_back(vec_to_json(s));
  j["slater_points"] = std::move(slater);
  j["q_tilde"] = p.q_tilde;
  j["delta"] = p.delta;
  return j;
}

BuiltinProblem builtin_from_json(const json& j) {
  BuiltinProblem p;
  p.name = j.at("name").get<std::string>();
  p.cache_key = j.value("cache_key", std::string());
  const json& d = j.at("dims");
  p.dims.num_agents = d.at("num_agents").get<int>();
  p.dims.primal_dim = d.at("primal_dim").get<int>();
  p.dims.map_dim = d.at("map_dim").get<int>();
  p.dims.constraint_dim = d.at("constraint_dim").get<int>();
  const json& c = j.at("cost");
  p.cost.Q = mat_from_json(c.at("Q"));
  p.cost.q = vec_from_json(c.at("q"));
  p.cost.c = c.at("c").get<double>();
  for (const json& ja : j.at("agents")) {
    BuiltinAgent a;
    a.f_matrix = mat_from_json(ja.at("f_matrix"));
    if (ja.contains("affine_g")) {
      a.affine_g = AffineConstraint{mat_from_json(ja.at("affine_g").at("G")),
                                    vec_from_json(ja.at("affine_g").at("h"))};
    }
    if (ja.contains("l1_g")) {
      a.l1_g = L1Constraint{ja.at("l1_g").at("offset").get<double>()};
    }
    if (ja.contains("box")) {
      a.box = BoxSet{vec_from_json(ja.at("box").at("lo")),
                     vec_from_json(ja.at("box").at("hi"))};
    }
    if (ja.contains("polytope")) {
      a.polytope = PolytopeSet{mat_from_json(ja.at("polytope").at("A")),
                               vec_from_json(ja.at("polytope").at("b")),
                               vec_from_json(ja.at("polytope").at("lo")),
                               vec_from_json(ja.at("polytope").at("hi"))};
    }
    p.agents.push_back(std::move(a));
  }
  for (const json& s : j.at("slater_points")) {
    p.slater_points.push_back(vec_from_json(s));
  }
  p.q_tilde = j.value("q_tilde", 0.0);
  p.delta = j.value("delta", 1.0);
  return p;
}

json dsm_to_json(const DsmInstance& inst) {
  json j;
  j["num_customers"] = inst.num_customers;
  j["horizon"] = inst.horizon;
  json psi = json::array();
  for (const Mat& m : inst.psi) psi.push_back(mat_to_json(m));
  j["psi"] = std::move(psi);
  json lo = json::array(), hi = json::array();
  for (const Vec& v : inst.lo) lo.push_back(vec_to_json(v));
  for (const Vec& v : inst.hi) hi.push_back(vec_to_json(v));
  j["lo"] = std::move(lo);
  j["hi"] = std::move(hi);
  j["bid"] = vec_to_json(inst.bid);
  j["pi_p"] = inst.pi_p;
  j["pi_s"] = inst.pi_s;
  j["z_max"] = vec_to_json(inst.z_max);
  return j;
}

DsmInstance dsm_from_json(const json& j) {
  DsmInstance inst;
  inst.num_customers = j.at("num_customers").get<int>();
  inst.horizon = j.at("horizon").get<int>();
  for (const json& m : j.at("psi")) inst.psi.push_back(mat_from_json(m));
  for (const json& v : j.at("lo")) inst.lo.push_back(vec_from_json(v));
  for (const json& v : j.at("hi")) inst.hi.push_back(vec_from_json(v));
  inst.bid = vec_from_json(j.at("bid"));
  inst.pi_p = j.at("pi_p").get<double>();
  inst.pi_s = j.at("pi_s").get<double>();
  inst.z_max = vec_from_json(j.at("z_max"));
  return inst;
}

void save_instance(const std::string& path, const InstanceFile& inst) {
  json j;
  j["kind"] = inst.kind;
  if (inst.kind == "builtin") {
    j["problem"] = builtin_to_json(inst.builtin);
  } else if (inst.kind == "dsm") {
    j["dsm"] = dsm_to_json(inst.dsm);
  } else {
    throw ConfigError("save_instance: unknown kind '" + inst.kind + "'");
  }
  if (!inst.meta.is_null()) j["meta"] = inst.meta;
  std::ofstream out(path);
  if (!out) throw Error("save_instance: cannot open " + path);
  out << j.dump(2) << "\n";
}

InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("load_instance: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("load_instance: " + path + " is not valid JSON: " +
                      e.what());
  }
  InstanceFile inst;
  inst.kind = j.at("kind").get<std::string>();
  if (inst.kind == "builtin") {
    inst.builtin = builtin_from_json(j.at("problem"));
  } else if (inst.kind == "dsm") {
    inst.dsm = dsm_from_json(j.at("dsm"));
  } else {
    throw ConfigError("load_instance: unknown kind '" + inst.kind + "'");
  }
  if (j.contains("meta")) inst.meta = j.at("meta");
  return inst;
}

}  // namespace pdp

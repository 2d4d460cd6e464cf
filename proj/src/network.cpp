#include "pdp/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace pdp {
namespace {

constexpr double kStochasticTol = 1e-12;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void require_symmetric(const Eigen::MatrixXi& adj) {
  if (adj.rows() != adj.cols()) {
    throw AsymmetricAdjacency("adjacency matrix is not square");
  }
  for (Eigen::Index i = 0; i < adj.rows(); ++i) {
    if (adj(i, i) != 0) {
      throw AsymmetricAdjacency("adjacency matrix has a self loop");
    }
    for (Eigen::Index j = i + 1; j < adj.cols(); ++j) {
      if ((adj(i, j) != 0) != (adj(j, i) != 0)) {
        throw AsymmetricAdjacency("adjacency matrix is not symmetric");
      }
    }
  }
}

// Strong connectivity of the directed graph with edge j -> i whenever
// union(i, j) holds, via reachability from node 0 in both directions.
bool strongly_connected(const Eigen::MatrixXi& edges) {
  const int n = static_cast<int>(edges.rows());
  auto reaches_all = [n, &edges](bool transpose) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int u = 0; u < n; ++u) {
        const int e = transpose ? edges(u, v) : edges(v, u);
        if (e != 0 && !seen[u]) {
          seen[u] = 1;
          ++count;
          stack.push_back(u);
        }
      }
    }
    return count == n;
  };
  return reaches_all(false) && reaches_all(true);
}

}  // namespace

double WeightMatrix::stochastic_residual() const {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    worst = std::max(worst, std::abs(w.row(i).sum() - 1.0));
    worst = std::max(worst, std::abs(w.col(i).sum() - 1.0));
  }
  return worst;
}

double WeightMatrix::min_diagonal() const { return w.diagonal().minCoeff(); }

double WeightMatrix::min_positive_entry() const {
  double smallest = 1.0;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      if (w(i, j) > 0.0) smallest = std::min(smallest, w(i, j));
    }
  }
  return smallest;
}

WeightMatrix make_weight_matrix(Mat w) {
  if (w.rows() != w.cols() || w.rows() == 0) {
    throw DimensionMismatch("weight matrix must be square and nonempty");
  }
  if (w.minCoeff() < 0.0) {
    throw Error("weight matrix has a negative entry");
  }
  WeightMatrix out{std::move(w)};
  if (out.stochastic_residual() > kStochasticTol) {
    std::ostringstream msg;
    msg << "weight matrix is not doubly stochastic (residual "
        << out.stochastic_residual() << ")";
    throw Error(msg.str());
  }
  return out;
}

WeightMatrix metropolis_weights(const Eigen::MatrixXi& adjacency) {
  require_symmetric(adjacency);
  const int n = static_cast<int>(adjacency.rows());
  std::vector<int> degree(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (adjacency(i, j) != 0) ++degree[i];
    }
  }
  Mat w = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j || adjacency(i, j) == 0) continue;
      w(i, j) = 1.0 / (1.0 + std::max(degree[i], degree[j]));
      off += w(i, j);
    }
    w(i, i) = 1.0 - off;
  }
  return make_weight_matrix(std::move(w));
}

Eigen::MatrixXi ring_adjacency(int n, int hops) {
  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int h = 1; h <= hops; ++h) {
      const int j = (i + h) % n;
      if (j != i) adj(i, j) = adj(j, i) = 1;
    }
  }
  return adj;
}

Eigen::MatrixXi path_adjacency(int n) {
  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) adj(i, i + 1) = adj(i + 1, i) = 1;
  return adj;
}

Eigen::MatrixXi complete_adjacency(int n) {
  Eigen::MatrixXi adj = Eigen::MatrixXi::Ones(n, n);
  adj.diagonal().setZero();
  return adj;
}

Eigen::MatrixXi erdos_renyi_adjacency(int n, double edge_prob,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (unit(rng) < edge_prob) adj(i, j) = adj(j, i) = 1;
    }
  }
  return adj;
}

Eigen::MatrixXi geometric_adjacency(int n, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<double, double>> pos(n);
  for (auto& p : pos) p = {unit(rng), unit(rng)};
  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = pos[i].first - pos[j].first;
      const double dy = pos[i].second - pos[j].second;
      if (std::hypot(dx, dy) <= radius) adj(i, j) = adj(j, i) = 1;
    }
  }
  // Chain neighbors in x order so sparse draws still give one component.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&pos](int a, int b) { return pos[a].first < pos[b].first; });
  for (int i = 0; i + 1 < n; ++i) {
    adj(order[i], order[i + 1]) = adj(order[i + 1], order[i]) = 1;
  }
  return adj;
}

GraphSchedule GraphSchedule::fixed(WeightMatrix w, int window) {
  GraphSchedule s;
  s.kind_ = Kind::Fixed;
  s.num_nodes_ = w.size();
  s.window_ = window;
  s.matrices_.push_back(std::move(w));
  return s;
}

GraphSchedule GraphSchedule::cycle(std::vector<WeightMatrix> ws, int window) {
  if (ws.empty()) throw Error("cycle schedule needs at least one matrix");
  GraphSchedule s;
  s.kind_ = Kind::Cycle;
  s.num_nodes_ = ws.front().size();
  for (const WeightMatrix& w : ws) {
    if (w.size() != s.num_nodes_) {
      throw DimensionMismatch("cycle schedule mixes matrix sizes");
    }
  }
  s.window_ = window;
  s.matrices_ = std::move(ws);
  return s;
}

GraphSchedule GraphSchedule::random(int n, double edge_prob,
                                    std::uint64_t seed, int window) {
  if (n < 1 || edge_prob < 0.0 || edge_prob > 1.0) {
    throw Error("random schedule needs n >= 1 and edge_prob in [0, 1]");
  }
  GraphSchedule s;
  s.kind_ = Kind::Random;
  s.num_nodes_ = n;
  s.window_ = window;
  s.edge_prob_ = edge_prob;
  s.seed_ = seed;
  return s;
}

WeightMatrix GraphSchedule::at(int k) const {
  if (k < 1) throw Error("schedule rounds are 1-based");
  switch (kind_) {
    case Kind::Fixed:
      return matrices_.front();
    case Kind::Cycle:
      return matrices_[(k - 1) % matrices_.size()];
    case Kind::Random:
      return metropolis_weights(erdos_renyi_adjacency(
          num_nodes_, edge_prob_,
          splitmix64(seed_ ^ (0x51ed2700ULL + static_cast<std::uint64_t>(k)))));
  }
  throw Error("unreachable schedule kind");
}

NetworkCheck check_assumption4(const GraphSchedule& schedule, int horizon) {
  NetworkCheck out;
  const int n = schedule.num_nodes();
  const int q = std::max(1, schedule.window());
  if (horizon < q) {
    out.detail = "horizon shorter than the connectivity window";
    return out;
  }

  double worst_residual = 0.0;
  double min_diag = 1.0;
  double min_pos = 1.0;
  std::vector<Eigen::MatrixXi> unions;  // edge union per window offset
  Eigen::MatrixXi window_union = Eigen::MatrixXi::Zero(n, n);
  std::vector<Eigen::MatrixXi> recent;  // last q edge sets

  out.windows_connected = true;
  for (int k = 1; k <= horizon; ++k) {
    const WeightMatrix wk = schedule.at(k);
    if (wk.size() != n) {
      out.detail = "schedule produced a matrix of the wrong size";
      return out;
    }
    if (wk.w.minCoeff() < 0.0) {
      out.detail = "negative weight at round " + std::to_string(k);
      return out;
    }
    worst_residual = std::max(worst_residual, wk.stochastic_residual());
    min_diag = std::min(min_diag, wk.min_diagonal());
    min_pos = std::min(min_pos, wk.min_positive_entry());

    Eigen::MatrixXi edges = Eigen::MatrixXi::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j && wk.w(i, j) > 0.0) edges(i, j) = 1;
      }
    }
    recent.push_back(std::move(edges));
    if (static_cast<int>(recent.size()) < q) continue;

    window_union.setZero();
    for (const auto& e : recent) window_union += e;
    if (!strongly_connected(window_union)) {
      out.windows_connected = false;
      if (out.first_bad_window < 0) out.first_bad_window = k - q + 1;
    }
    recent.erase(recent.begin());
  }

  out.max_stochastic_residual = worst_residual;
  out.min_diagonal = min_diag;
  out.min_positive_entry = min_pos;
  out.pass = out.windows_connected && min_diag > 0.0 &&
             worst_residual <= kStochasticTol;
  if (!out.pass) {
    std::ostringstream msg;
    if (!out.windows_connected) {
      msg << "window starting at round " << out.first_bad_window
          << " is not strongly connected; ";
    }
    if (min_diag <= 0.0) msg << "a diagonal weight vanished; ";
    if (worst_residual > kStochasticTol) {
      msg << "stochasticity residual " << worst_residual << "; ";
    }
    out.detail = msg.str();
  }
  return out;
}

std::vector<Vec> mix(const WeightMatrix& w, const std::vector<Vec>& values) {
  const int n = w.size();
  if (static_cast<int>(values.size()) != n) {
    throw DimensionMismatch("mix: value count does not match matrix size");
  }
  std::vector<Vec> out(n);
  for (int i = 0; i < n; ++i) {
    Vec acc = w.w(i, 0) * values[0];
    for (int j = 1; j < n; ++j) {
      if (w.w(i, j) != 0.0) acc.noalias() += w.w(i, j) * values[j];
    }
    out[i] = std::move(acc);
  }
  return out;
}

}  // namespace pdp

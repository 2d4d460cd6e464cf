#pragma once

#include <string>
#include <vector>

#include "pdp/types.hpp"

namespace pdp {

// Mixing matrix for one consensus round. Construction validates that the
// matrix is square, entrywise nonnegative and doubly stochastic to 1e-12.
struct WeightMatrix {
  Mat w;

  int size() const { return static_cast<int>(w.rows()); }
  double stochastic_residual() const;  // max row/column sum deviation from 1
  double min_diagonal() const;
  double min_positive_entry() const;   // smallest strictly positive entry
};

WeightMatrix make_weight_matrix(Mat w);

// Metropolis rule on an undirected graph: w_ij = 1 / (1 + max(deg_i, deg_j))
// across edges, diagonal absorbs the remainder. Always doubly stochastic.
WeightMatrix metropolis_weights(const Eigen::MatrixXi& adjacency);

// Undirected graph helpers used by the built-in schedules.
Eigen::MatrixXi ring_adjacency(int n, int hops = 1);
Eigen::MatrixXi path_adjacency(int n);
Eigen::MatrixXi complete_adjacency(int n);
Eigen::MatrixXi erdos_renyi_adjacency(int n, double edge_prob, std::uint64_t seed);
// Random geometric graph on the unit square; extra nearest-neighbor edges
// are added along the x-sorted order so the result is always connected.
Eigen::MatrixXi geometric_adjacency(int n, double radius, std::uint64_t seed);

// Sequence of mixing matrices W(k), k >= 1, together with the window length
// Q over which edge unions are expected to make the graph connected.
class GraphSchedule {
 public:
  static GraphSchedule fixed(WeightMatrix w, int window = 1);
  static GraphSchedule cycle(std::vector<WeightMatrix> ws, int window);
  // Fresh Erdos-Renyi draw each round, deterministic in (seed, k).
  static GraphSchedule random(int n, double edge_prob, std::uint64_t seed,
                              int window);

  WeightMatrix at(int k) const;
  int num_nodes() const { return num_nodes_; }
  int window() const { return window_; }

  enum class Kind { Fixed, Cycle, Random };
  Kind kind() const { return kind_; }
  const std::vector<WeightMatrix>& matrices() const { return matrices_; }
  double edge_prob() const { return edge_prob_; }
  std::uint64_t seed() const { return seed_; }

 private:
  Kind kind_ = Kind::Fixed;
  std::vector<WeightMatrix> matrices_;
  int num_nodes_ = 0;
  int window_ = 1;
  double edge_prob_ = 0.0;
  std::uint64_t seed_ = 0;
};

struct NetworkCheck {
  bool pass = false;
  double max_stochastic_residual = 0.0;
  double min_diagonal = 0.0;
  double min_positive_entry = 0.0;  // measured eta over the horizon
  bool windows_connected = false;
  int first_bad_window = -1;  // starting round of the first failing window
  std::string detail;
};

// Verifies the consensus assumptions over rounds 1..horizon: entrywise
// nonnegative, doubly stochastic to 1e-12, strictly positive diagonal, and
// every length-Q window whose edge union must be strongly connected.
NetworkCheck check_assumption4(const GraphSchedule& schedule, int horizon);

// One synchronous gossip round: out[i] = sum_j W(i, j) in[j].
std::vector<Vec> mix(const WeightMatrix& w, const std::vector<Vec>& values);

}  // namespace pdp

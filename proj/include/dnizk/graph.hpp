#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dnizk/rng.hpp"

namespace dnizk::graph {

// Simple connected undirected graph with injective node identifiers.
// Ports at each node list neighbors in ascending-identifier order unless
// the builder shuffles them; with kt0 set, nodes may use port numbers
// but never a neighbor's identifier.
struct BuildOptions {
  std::optional<uint64_t> scramble_ids_seed;  // ids drawn injectively from [1, n^2]
  std::optional<std::vector<uint64_t>> explicit_ids;
  std::optional<uint64_t> shuffle_ports_seed;
  bool kt0 = false;
};

class Configuration {
 public:
  using Options = BuildOptions;

  static Configuration build(size_t n,
                             const std::vector<std::pair<size_t, size_t>>& edges,
                             const Options& opts = {});

  size_t n() const { return n_; }
  bool kt0() const { return kt0_; }
  size_t degree(size_t u) const { return ports_[u].size(); }
  const std::vector<size_t>& ports(size_t u) const { return ports_[u]; }
  bool adjacent(size_t u, size_t v) const { return adj_[u * n_ + v] != 0; }
  uint64_t id(size_t u) const { return ids_[u]; }
  const std::vector<uint64_t>& ids() const { return ids_; }
  size_t max_degree() const;

  std::vector<std::pair<size_t, size_t>> edge_list() const;  // u < v

 private:
  size_t n_ = 0;
  bool kt0_ = false;
  std::vector<std::vector<size_t>> ports_;
  std::vector<uint64_t> ids_;
  std::vector<uint8_t> adj_;
};

struct PlantedInstance {
  Configuration config;
  std::vector<uint64_t> coloring;  // proper c-coloring witness
};

// Random c-partite graph with balanced classes, cross-class edges kept
// with edge_prob, plus a random cross-class spanning structure so the
// result is connected.  edge_prob = 1 on n = 6, c = 3 yields K_{2,2,2}.
PlantedInstance gen_planted_colorable(size_t n, uint64_t c, double edge_prob,
                                      RandomStream& rng,
                                      const Configuration::Options& opts = {});

Configuration gen_clique(size_t k, const Configuration::Options& opts = {});
Configuration gen_cycle(size_t len, const Configuration::Options& opts = {});
Configuration gen_star(size_t n, const Configuration::Options& opts = {});
Configuration gen_bipartite(size_t n, double edge_prob, RandomStream& rng,
                            const Configuration::Options& opts = {});
Configuration gen_with_triangle(size_t n, double edge_prob, RandomStream& rng,
                                const Configuration::Options& opts = {});

bool proper_coloring(const Configuration& g, const std::vector<uint64_t>& col,
                     uint64_t c);
// Backtracking decider; feasible at desk scale.
bool is_colorable(const Configuration& g, uint64_t c);
std::optional<std::vector<uint64_t>> find_coloring(const Configuration& g, uint64_t c);
size_t count_triangles(const Configuration& g);

struct Distance3Coloring {
  std::vector<uint64_t> color;
  uint64_t palette;  // colors fit in [palette]
};
// Greedy coloring of the cube graph: nodes within distance 3 get
// distinct colors.
Distance3Coloring distance3_coloring(const Configuration& g);
bool valid_distance3_coloring(const Configuration& g,
                              const std::vector<uint64_t>& color);

// Text format: header "n=<int>", then one line per node "id: id id ...".
std::string write_graph(const Configuration& g);
Configuration read_graph(const std::string& text,
                         const Configuration::Options& opts = {});

}  // namespace dnizk::graph

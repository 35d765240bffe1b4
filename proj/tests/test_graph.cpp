#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "dnizk/graph.hpp"

using namespace dnizk;
using graph::Configuration;

// every assignment tried, no pruning
static bool exhaustive_colorable(const Configuration& g, uint64_t c) {
  size_t n = g.n();
  std::vector<uint64_t> col(n, 0);
  while (true) {
    if (graph::proper_coloring(g, col, c)) return true;
    size_t k = 0;
    while (k < n && ++col[k] == c) col[k++] = 0;
    if (k == n) return false;
  }
}

// trace of the cubed adjacency matrix counts closed triangles 6 times
static size_t trace_triangles(const Configuration& g) {
  size_t n = g.n();
  std::vector<uint64_t> a(n * n, 0), a2(n * n, 0);
  for (size_t i = 0; i < n; i++)
    for (size_t j = 0; j < n; j++) a[i * n + j] = g.adjacent(i, j) ? 1 : 0;
  for (size_t i = 0; i < n; i++)
    for (size_t k = 0; k < n; k++)
      for (size_t j = 0; j < n; j++) a2[i * n + j] += a[i * n + k] * a[k * n + j];
  uint64_t trace = 0;
  for (size_t i = 0; i < n; i++)
    for (size_t k = 0; k < n; k++) trace += a2[i * n + k] * a[k * n + i];
  return trace / 6;
}

TEST_CASE("colorability decider agrees with exhaustive search") {
  RandomStream rng(5);
  CHECK_FALSE(graph::is_colorable(graph::gen_clique(4), 3));
  CHECK(graph::is_colorable(graph::gen_cycle(5), 3));
  CHECK_FALSE(graph::is_colorable(graph::gen_cycle(5), 2));
  for (int k = 0; k < 20; k++) {
    auto g = graph::gen_with_triangle(6, 0.4, rng);
    for (uint64_t c = 2; c <= 4; c++)
      CHECK(graph::is_colorable(g, c) == exhaustive_colorable(g, c));
  }
}

TEST_CASE("find_coloring returns a checkable witness") {
  auto g = graph::gen_cycle(6);
  auto w = graph::find_coloring(g, 2);
  REQUIRE(w.has_value());
  CHECK(graph::proper_coloring(g, *w, 2));
  CHECK_FALSE(graph::find_coloring(graph::gen_clique(4), 3).has_value());
}

TEST_CASE("triangle count agrees with the matrix-trace oracle") {
  RandomStream rng(11);
  CHECK(graph::count_triangles(graph::gen_clique(3)) == 1);
  CHECK(graph::count_triangles(graph::gen_clique(4)) == 4);
  CHECK(graph::count_triangles(graph::gen_cycle(5)) == 0);
  for (int k = 0; k < 20; k++) {
    auto g = graph::gen_with_triangle(7, 0.35, rng);
    CHECK(graph::count_triangles(g) == trace_triangles(g));
    CHECK(graph::count_triangles(g) >= 1);
  }
  for (int k = 0; k < 10; k++) {
    auto g = graph::gen_bipartite(8, 0.5, rng);
    CHECK(graph::count_triangles(g) == 0);
  }
}

TEST_CASE("dense planted instance is the complete tripartite graph") {
  RandomStream rng(3);
  auto planted = graph::gen_planted_colorable(6, 3, 1.0, rng);
  const Configuration& g = planted.config;
  CHECK(g.n() == 6);
  for (size_t u = 0; u < 6; u++) CHECK(g.degree(u) == 4);
  CHECK(graph::count_triangles(g) == 8);
  CHECK(graph::proper_coloring(g, planted.coloring, 3));
}

TEST_CASE("planted witnesses stay proper across densities") {
  RandomStream rng(17);
  for (size_t n : {5, 8, 16})
    for (double p : {0.2, 0.6}) {
      auto planted = graph::gen_planted_colorable(n, 3, p, rng);
      CHECK(graph::proper_coloring(planted.config, planted.coloring, 3));
      CHECK(graph::is_colorable(planted.config, 3));
    }
}

TEST_CASE("disconnected and malformed inputs are refused") {
  CHECK_THROWS(Configuration::build(4, {{0, 1}, {2, 3}}));   // two components
  CHECK_THROWS(Configuration::build(2, {{0, 0}}));           // self-loop
  CHECK_THROWS(Configuration::build(2, {{0, 5}}));           // out of range
  CHECK_THROWS(Configuration::build(1, {}));                 // too small
}

TEST_CASE("ports list neighbors by ascending identifier") {
  auto g = graph::gen_star(5);
  for (size_t p = 0; p + 1 < g.degree(0); p++)
    CHECK(g.id(g.ports(0)[p]) < g.id(g.ports(0)[p + 1]));
}

TEST_CASE("scrambled identifiers stay injective and in range") {
  Configuration::Options opts;
  opts.scramble_ids_seed = 31;
  auto g = graph::gen_cycle(8, opts);
  std::set<uint64_t> seen;
  for (size_t u = 0; u < 8; u++) {
    uint64_t id = g.id(u);
    CHECK(id >= 1);
    CHECK(id <= 64);
    seen.insert(id);
  }
  CHECK(seen.size() == 8);
}

// pairwise BFS distances, independently of the coloring routine
static bool pairwise_distance3_ok(const Configuration& g,
                                  const std::vector<uint64_t>& color) {
  size_t n = g.n();
  for (size_t s = 0; s < n; s++) {
    std::vector<int> dist(n, -1);
    std::vector<size_t> frontier{s};
    dist[s] = 0;
    for (int d = 0; d < 3 && !frontier.empty(); d++) {
      std::vector<size_t> next;
      for (size_t x : frontier)
        for (size_t v : g.ports(x))
          if (dist[v] < 0) {
            dist[v] = d + 1;
            next.push_back(v);
          }
      frontier = std::move(next);
    }
    for (size_t v = 0; v < n; v++)
      if (v != s && dist[v] > 0 && color[v] == color[s]) return false;
  }
  return true;
}

TEST_CASE("distance-3 coloring separates cube neighborhoods") {
  auto path = Configuration::build(4, {{0, 1}, {1, 2}, {2, 3}});
  auto d3 = graph::distance3_coloring(path);
  std::set<uint64_t> distinct(d3.color.begin(), d3.color.end());
  CHECK(distinct.size() == 4);  // everything within distance 3 of everything

  RandomStream rng(23);
  for (int k = 0; k < 10; k++) {
    auto g = graph::gen_with_triangle(9, 0.3, rng);
    auto got = graph::distance3_coloring(g);
    CHECK(pairwise_distance3_ok(g, got.color));
    CHECK(graph::valid_distance3_coloring(g, got.color));
    uint64_t delta = g.max_degree();
    CHECK(got.palette <= std::min<uint64_t>(g.n(), delta * delta * delta + 1));
    for (uint64_t c : got.color) CHECK(c < got.palette);
  }
}

TEST_CASE("graph files round-trip including identifiers") {
  Configuration::Options opts;
  opts.scramble_ids_seed = 77;
  RandomStream rng(9);
  auto g = graph::gen_with_triangle(7, 0.4, rng, opts);
  std::string text = graph::write_graph(g);
  auto back = graph::read_graph(text);
  REQUIRE(back.n() == g.n());
  for (size_t u = 0; u < g.n(); u++) {
    CHECK(back.id(u) == g.id(u));
    CHECK(back.degree(u) == g.degree(u));
  }
  for (size_t u = 0; u < g.n(); u++)
    for (size_t v = 0; v < g.n(); v++) CHECK(back.adjacent(u, v) == g.adjacent(u, v));
}

#include "dnizk/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dnizk::graph {

Configuration Configuration::build(size_t n,
                                   const std::vector<std::pair<size_t, size_t>>& edges,
                                   const Options& opts) {
  if (n < 2) throw std::invalid_argument("configuration needs at least two nodes");
  Configuration g;
  g.n_ = n;
  g.kt0_ = opts.kt0;
  g.adj_.assign(n * n, 0);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop");
    g.adj_[u * n + v] = g.adj_[v * n + u] = 1;
  }

  g.ids_.resize(n);
  if (opts.explicit_ids) {
    if (opts.explicit_ids->size() != n)
      throw std::invalid_argument("explicit id count mismatch");
    g.ids_ = *opts.explicit_ids;
    std::set<uint64_t> distinct(g.ids_.begin(), g.ids_.end());
    if (distinct.size() != n || distinct.count(0))
      throw std::invalid_argument("ids must be nonzero and injective");
  } else if (opts.scramble_ids_seed) {
    // injective draw from [1, n^2]
    RandomStream rng(label_key(*opts.scramble_ids_seed, "scramble-ids"));
    std::set<uint64_t> used;
    for (size_t u = 0; u < n; u++) {
      uint64_t id;
      do {
        id = 1 + rng.uniform_below(uint64_t(n) * n);
      } while (!used.insert(id).second);
      g.ids_[u] = id;
    }
  } else {
    for (size_t u = 0; u < n; u++) g.ids_[u] = u + 1;
  }

  g.ports_.resize(n);
  for (size_t u = 0; u < n; u++) {
    for (size_t v = 0; v < n; v++)
      if (g.adj_[u * n + v]) g.ports_[u].push_back(v);
    std::sort(g.ports_[u].begin(), g.ports_[u].end(),
              [&](size_t a, size_t b) { return g.ids_[a] < g.ids_[b]; });
  }
  if (opts.shuffle_ports_seed) {
    RandomStream rng(label_key(*opts.shuffle_ports_seed, "shuffle-ports"));
    for (size_t u = 0; u < n; u++) {
      auto& p = g.ports_[u];
      for (size_t i = p.size(); i > 1; i--)
        std::swap(p[i - 1], p[rng.uniform_below(i)]);
    }
  }

  // connectivity
  std::vector<char> seen(n, 0);
  std::queue<size_t> q;
  q.push(0);
  seen[0] = 1;
  size_t reached = 1;
  while (!q.empty()) {
    size_t u = q.front();
    q.pop();
    for (size_t v : g.ports_[u])
      if (!seen[v]) {
        seen[v] = 1;
        reached++;
        q.push(v);
      }
  }
  if (reached != n) throw std::invalid_argument("graph is not connected");
  return g;
}

size_t Configuration::max_degree() const {
  size_t d = 0;
  for (size_t u = 0; u < n_; u++) d = std::max(d, degree(u));
  return d;
}

std::vector<std::pair<size_t, size_t>> Configuration::edge_list() const {
  std::vector<std::pair<size_t, size_t>> edges;
  for (size_t u = 0; u < n_; u++)
    for (size_t v = u + 1; v < n_; v++)
      if (adjacent(u, v)) edges.emplace_back(u, v);
  return edges;
}

PlantedInstance gen_planted_colorable(size_t n, uint64_t c, double edge_prob,
                                      RandomStream& rng,
                                      const Configuration::Options& opts) {
  if (c < 2 || n < c) throw std::invalid_argument("need n >= c >= 2");
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (size_t i = n; i > 1; i--) std::swap(order[i - 1], order[rng.uniform_below(i)]);

  std::vector<uint64_t> col(n);
  for (size_t pos = 0; pos < n; pos++) col[order[pos]] = pos % c;

  std::vector<std::pair<size_t, size_t>> edges;
  // spanning structure: each node attaches to an earlier node of a
  // different class (one always exists since classes alternate)
  for (size_t pos = 1; pos < n; pos++) {
    std::vector<size_t> candidates;
    for (size_t p = 0; p < pos; p++)
      if (col[order[p]] != col[order[pos]]) candidates.push_back(order[p]);
    edges.emplace_back(order[pos], candidates[rng.uniform_below(candidates.size())]);
  }
  const uint64_t threshold = uint64_t(edge_prob * double(uint64_t(1) << 53));
  for (size_t u = 0; u < n; u++)
    for (size_t v = u + 1; v < n; v++) {
      if (col[u] == col[v]) continue;
      if ((rng.next() >> 11) < threshold) edges.emplace_back(u, v);
    }
  return PlantedInstance{Configuration::build(n, edges, opts), std::move(col)};
}

Configuration gen_clique(size_t k, const Configuration::Options& opts) {
  std::vector<std::pair<size_t, size_t>> edges;
  for (size_t u = 0; u < k; u++)
    for (size_t v = u + 1; v < k; v++) edges.emplace_back(u, v);
  return Configuration::build(k, edges, opts);
}

Configuration gen_cycle(size_t len, const Configuration::Options& opts) {
  if (len < 3) throw std::invalid_argument("cycle needs length >= 3");
  std::vector<std::pair<size_t, size_t>> edges;
  for (size_t u = 0; u < len; u++) edges.emplace_back(u, (u + 1) % len);
  return Configuration::build(len, edges, opts);
}

Configuration gen_star(size_t n, const Configuration::Options& opts) {
  std::vector<std::pair<size_t, size_t>> edges;
  for (size_t v = 1; v < n; v++) edges.emplace_back(0, v);
  return Configuration::build(n, edges, opts);
}

Configuration gen_bipartite(size_t n, double edge_prob, RandomStream& rng,
                            const Configuration::Options& opts) {
  auto planted = gen_planted_colorable(n, 2, edge_prob, rng, opts);
  return std::move(planted.config);
}

Configuration gen_with_triangle(size_t n, double edge_prob, RandomStream& rng,
                                const Configuration::Options& opts) {
  if (n < 3) throw std::invalid_argument("need n >= 3");
  std::vector<std::pair<size_t, size_t>> edges;
  for (size_t u = 1; u < n; u++) edges.emplace_back(u, rng.uniform_below(u));
  const uint64_t threshold = uint64_t(edge_prob * double(uint64_t(1) << 53));
  for (size_t u = 0; u < n; u++)
    for (size_t v = u + 1; v < n; v++)
      if ((rng.next() >> 11) < threshold) edges.emplace_back(u, v);
  // plant one triangle
  size_t a = rng.uniform_below(n), b, c;
  do { b = rng.uniform_below(n); } while (b == a);
  do { c = rng.uniform_below(n); } while (c == a || c == b);
  edges.emplace_back(a, b);
  edges.emplace_back(a, c);
  edges.emplace_back(b, c);
  return Configuration::build(n, edges, opts);
}

bool proper_coloring(const Configuration& g, const std::vector<uint64_t>& col,
                     uint64_t c) {
  if (col.size() != g.n()) return false;
  for (uint64_t x : col)
    if (x >= c) return false;
  for (auto [u, v] : g.edge_list())
    if (col[u] == col[v]) return false;
  return true;
}

static bool color_rec(const Configuration& g, std::vector<uint64_t>& col, size_t u,
                      uint64_t c) {
  if (u == g.n()) return true;
  for (uint64_t x = 0; x < c; x++) {
    bool ok = true;
    for (size_t v : g.ports(u))
      if (v < u && col[v] == x) {
        ok = false;
        break;
      }
    if (!ok) continue;
    col[u] = x;
    if (color_rec(g, col, u + 1, c)) return true;
  }
  return false;
}

bool is_colorable(const Configuration& g, uint64_t c) {
  std::vector<uint64_t> col(g.n(), 0);
  return color_rec(g, col, 0, c);
}

std::optional<std::vector<uint64_t>> find_coloring(const Configuration& g, uint64_t c) {
  std::vector<uint64_t> col(g.n(), 0);
  if (!color_rec(g, col, 0, c)) return std::nullopt;
  return col;
}

size_t count_triangles(const Configuration& g) {
  size_t count = 0;
  for (size_t u = 0; u < g.n(); u++)
    for (size_t v = u + 1; v < g.n(); v++) {
      if (!g.adjacent(u, v)) continue;
      for (size_t w = v + 1; w < g.n(); w++)
        if (g.adjacent(u, w) && g.adjacent(v, w)) count++;
    }
  return count;
}

static std::vector<size_t> within_distance3(const Configuration& g, size_t u) {
  std::vector<int> dist(g.n(), -1);
  std::queue<size_t> q;
  q.push(u);
  dist[u] = 0;
  std::vector<size_t> near;
  while (!q.empty()) {
    size_t x = q.front();
    q.pop();
    if (dist[x] == 3) continue;
    for (size_t v : g.ports(x))
      if (dist[v] < 0) {
        dist[v] = dist[x] + 1;
        near.push_back(v);
        q.push(v);
      }
  }
  return near;
}

Distance3Coloring distance3_coloring(const Configuration& g) {
  std::vector<uint64_t> color(g.n(), UINT64_MAX);
  uint64_t used = 0;
  for (size_t u = 0; u < g.n(); u++) {
    std::set<uint64_t> taken;
    for (size_t v : within_distance3(g, u))
      if (color[v] != UINT64_MAX) taken.insert(color[v]);
    uint64_t x = 0;
    while (taken.count(x)) x++;
    color[u] = x;
    used = std::max(used, x + 1);
  }
  size_t delta = g.max_degree();
  uint64_t cap = std::min<uint64_t>(g.n(), delta * delta * delta + 1);
  if (used > cap) throw std::logic_error("distance-3 palette exceeded bound");
  return Distance3Coloring{std::move(color), std::max<uint64_t>(used, 1)};
}

bool valid_distance3_coloring(const Configuration& g,
                              const std::vector<uint64_t>& color) {
  for (size_t u = 0; u < g.n(); u++)
    for (size_t v : within_distance3(g, u))
      if (v != u && color[v] == color[u]) return false;
  return true;
}

std::string write_graph(const Configuration& g) {
  std::ostringstream out;
  out << "n=" << g.n() << "\n";
  for (size_t u = 0; u < g.n(); u++) {
    out << g.id(u) << ":";
    for (size_t v : g.ports(u)) out << " " << g.id(v);
    out << "\n";
  }
  return out.str();
}

Configuration read_graph(const std::string& text,
                         const Configuration::Options& opts) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header) || header.rfind("n=", 0) != 0)
    throw std::invalid_argument("missing n= header");
  size_t n = std::stoul(header.substr(2));

  std::vector<uint64_t> ids;
  std::vector<std::vector<uint64_t>> nbr_ids;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("bad line: " + line);
    ids.push_back(std::stoull(line.substr(0, colon)));
    std::istringstream rest(line.substr(colon + 1));
    std::vector<uint64_t> nbrs;
    uint64_t id;
    while (rest >> id) nbrs.push_back(id);
    nbr_ids.push_back(std::move(nbrs));
  }
  if (ids.size() != n) throw std::invalid_argument("node count mismatch");

  std::vector<std::pair<size_t, size_t>> edges;
  auto index_of = [&](uint64_t id) {
    for (size_t i = 0; i < n; i++)
      if (ids[i] == id) return i;
    throw std::invalid_argument("unknown id " + std::to_string(id));
  };
  for (size_t u = 0; u < n; u++)
    for (uint64_t id : nbr_ids[u]) {
      size_t v = index_of(id);
      if (u < v) edges.emplace_back(u, v);
    }
  // a file's ids survive the round trip unless a scramble is requested
  Configuration::Options effective = opts;
  if (!opts.scramble_ids_seed && !opts.explicit_ids) effective.explicit_ids = ids;
  return Configuration::build(n, edges, effective);
}

}  // namespace dnizk::graph

#include "dnizk/engine.hpp"

#include <cstdlib>

namespace dnizk::engine {

std::vector<uint64_t> Protocol::drawn_randomness(const NodeCtx&) const { return {}; }

size_t Protocol::cert_bytes_for(size_t) const { return cert_bytes(); }

static LocalView local_view(const graph::Configuration& g, size_t u, bool hide_ids) {
  LocalView lv;
  lv.n = g.n();
  lv.index = u;
  lv.degree = g.degree(u);
  if (!hide_ids) {
    lv.id = g.id(u);
    for (size_t v : g.ports(u)) lv.neighbor_ids.push_back(g.id(v));
  }
  return lv;
}

static RunResult run_phases(const graph::Configuration& g, const Protocol& p,
                            const std::vector<Bytes>& sigma, SharedRandomness shared,
                            bool honest, bool record_views) {
  const size_t n = g.n();
  const bool hide_ids = g.kt0();
  const int rounds = p.rounds();

  if (honest)
    for (size_t u = 0; u < n; u++)
      if (sigma[u].size() != p.cert_bytes_for(g.degree(u)))
        throw MessageSizeViolation("certificate size " +
                                   std::to_string(sigma[u].size()) + " at node " +
                                   std::to_string(u) + ", expected " +
                                   std::to_string(p.cert_bytes_for(g.degree(u))));

  std::vector<LocalView> locals(n);
  std::vector<uint64_t> private_seeds(n, 0);
  for (size_t u = 0; u < n; u++) {
    locals[u] = local_view(g, u, hide_ids);
    if (p.uses_private_randomness())
      private_seeds[u] = label_key(shared.seed(), "node-private/" + std::to_string(u));
  }

  // received[u][round][port]
  std::vector<std::vector<std::vector<Bytes>>> received(n);
  for (size_t u = 0; u < n; u++)
    received[u].assign(rounds, std::vector<Bytes>(g.degree(u)));

  auto ctx_for = [&](size_t u) {
    NodeCtx ctx;
    ctx.local = locals[u];
    ctx.sigma = &sigma[u];
    ctx.shared = &shared;
    ctx.private_seed = private_seeds[u];
    ctx.received = &received[u];
    return ctx;
  };

  RunResult rr;
  rr.protocol = p.name();
  rr.seed = shared.seed();
  rr.message_sizes.resize(rounds);

  for (int round = 0; round < rounds; round++) {
    // all sends of a round are computed before any delivery
    std::vector<std::vector<Bytes>> outbox(n);
    for (size_t u = 0; u < n; u++) {
      NodeCtx ctx = ctx_for(u);
      outbox[u].resize(g.degree(u));
      for (size_t port = 0; port < g.degree(u); port++) {
        outbox[u][port] = p.node_send(ctx, round, port);
        if (honest && outbox[u][port].size() != p.message_bytes(round))
          throw MessageSizeViolation("round " + std::to_string(round) +
                                     " message size " +
                                     std::to_string(outbox[u][port].size()) +
                                     ", expected " +
                                     std::to_string(p.message_bytes(round)));
        rr.message_sizes[round].push_back(outbox[u][port].size());
      }
    }
    for (size_t u = 0; u < n; u++)
      for (size_t port = 0; port < g.degree(u); port++) {
        size_t v = g.ports(u)[port];
        size_t back = 0;
        while (g.ports(v)[back] != u) back++;
        received[v][round][back] = outbox[u][port];
      }
  }

  rr.verdicts.resize(n);
  rr.all_accept = true;
  for (size_t u = 0; u < n; u++) {
    rr.verdicts[u] = p.node_verify(ctx_for(u));
    if (rr.verdicts[u] != Verdict::accept) rr.all_accept = false;
  }

  for (size_t u = 0; u < n; u++) rr.cert_sizes.push_back(sigma[u].size());
  if (record_views) {
    for (size_t u = 0; u < n; u++) {
      View w;
      w.state = locals[u];
      w.seed = shared.seed();
      w.randomness = p.drawn_randomness(ctx_for(u));
      w.sigma = sigma[u];
      w.received = received[u];
      rr.views.push_back(std::move(w));
    }
  }
  return rr;
}

static void check_params(const graph::Configuration& g, const Protocol& p) {
  if (p.node_count() != g.n())
    throw ProtocolParameterMismatch("protocol resolved for n=" +
                                    std::to_string(p.node_count()) +
                                    " but configuration has n=" +
                                    std::to_string(g.n()));
}

RunResult run(const graph::Configuration& g, const Protocol& p,
              const ProverStrategy& s, uint64_t seed) {
  check_params(g, p);
  std::vector<Bytes> sigma = s.certificates(g);  // before randomness exists
  if (sigma.size() != g.n())
    throw ProtocolParameterMismatch("strategy produced wrong certificate count");
  return run_phases(g, p, sigma, SharedRandomness(seed), s.honest(), true);
}

TrialStats soundness_trial(const graph::Configuration& g, const Protocol& p,
                           const ProverStrategy& s, uint64_t trials, uint64_t seed) {
  check_params(g, p);
  if (p.in_language(g))
    throw PositiveInstanceSupplied("soundness trial on a positive instance");
  std::vector<Bytes> sigma = s.certificates(g);
  TrialStats st;
  st.trials = trials;
  for (uint64_t k = 0; k < trials; k++) {
    uint64_t trial_seed = label_key(seed, "trial/" + std::to_string(k));
    RunResult rr =
        run_phases(g, p, sigma, SharedRandomness(trial_seed), false, false);
    if (rr.all_accept) st.accepted++;
  }
  return st;
}

TrialStats completeness_trial(const graph::Configuration& g, const Protocol& p,
                              const ProverStrategy& s, uint64_t trials,
                              uint64_t seed) {
  check_params(g, p);
  TrialStats st;
  st.trials = trials;
  for (uint64_t k = 0; k < trials; k++) {
    uint64_t trial_seed = label_key(seed, "trial/" + std::to_string(k));
    RunResult rr = run(g, p, s, trial_seed);
    if (rr.all_accept) st.accepted++;
  }
  return st;
}

ExactSoundness exact_soundness(const graph::Configuration& g, const Protocol& p,
                               const ProverStrategy& s) {
  check_params(g, p);
  if (!p.enumerable_challenge())
    throw NotEnumerable("protocol draws more shared randomness than one challenge");
  std::vector<Bytes> sigma = s.certificates(g);
  ExactSoundness ex;
  ex.denominator = p.challenge_hi() - p.challenge_lo();
  ex.node_accept_count.assign(g.n(), 0);
  for (uint64_t x = p.challenge_lo(); x < p.challenge_hi(); x++) {
    SharedRandomness shared(0);
    shared.force_challenge(x);
    RunResult rr = run_phases(g, p, sigma, shared, false, false);
    if (rr.all_accept) ex.accept_count++;
    for (size_t u = 0; u < g.n(); u++)
      if (rr.verdicts[u] == Verdict::accept) ex.node_accept_count[u]++;
  }
  return ex;
}

nlohmann::json RunResult::to_json(bool include_views) const {
  nlohmann::json j;
  j["schema"] = "dnizk-run/1";
  j["protocol"] = protocol;
  j["seed"] = seed;
  j["all_accept"] = all_accept;
  std::vector<int> v;
  for (Verdict verdict : verdicts) v.push_back(int(verdict));
  j["verdicts"] = v;
  j["cert_bytes"] = cert_sizes;
  j["message_bytes"] = message_sizes;
  if (include_views) {
    nlohmann::json views_j = nlohmann::json::array();
    for (const View& w : views) {
      nlohmann::json wj;
      wj["id"] = w.state.id;
      wj["degree"] = w.state.degree;
      wj["seed"] = w.seed;
      wj["randomness"] = w.randomness;
      wj["sigma"] = wire::to_hex(w.sigma);
      nlohmann::json rounds_j = nlohmann::json::array();
      for (const auto& round : w.received) {
        nlohmann::json ports_j = nlohmann::json::array();
        for (const Bytes& msg : round) ports_j.push_back(wire::to_hex(msg));
        rounds_j.push_back(ports_j);
      }
      wj["received"] = rounds_j;
      views_j.push_back(wj);
    }
    j["views"] = views_j;
  }
  return j;
}

size_t thread_budget() {
  const char* env = std::getenv("DNIZK_THREADS");
  if (!env) return 1;
  long v = std::atol(env);
  return v > 0 ? size_t(v) : 1;
}

LocalView make_local_view(const graph::Configuration& g, size_t u) {
  return local_view(g, u, g.kt0());
}

}  // namespace dnizk::engine

#include "dnizk/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "dnizk/stats.hpp"

namespace dnizk::experiment {

using nlohmann::json;

// Parameter resolution and graph construction reject bad specs, not broken
// machinery; surface those as spec errors so the command line exits 2.
template <typename Fn>
static auto resolved(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    throw SpecError(std::string("invalid parameters: ") + e.what());
  }
}

Instance build_instance(const Spec& spec) {
  return resolved([&] {
    RandomStream rng(label_key(spec.seed, "graph"));
    const std::string& kind = spec.graph;
    if (kind.rfind("file:", 0) == 0) {
      std::ifstream in(kind.substr(5));
      if (!in) throw SpecError("cannot read graph file " + kind.substr(5));
      std::stringstream buf;
      buf << in.rdbuf();
      return Instance{graph::read_graph(buf.str()), std::nullopt};
    }
    if (kind == "k2")
      return Instance{graph::Configuration::build(2, {{0, 1}}), std::nullopt};
    if (kind == "k222") {
      auto planted = graph::gen_planted_colorable(6, 3, 1.0, rng);
      return Instance{std::move(planted.config), std::move(planted.coloring)};
    }
    if (kind == "planted") {
      auto planted = graph::gen_planted_colorable(spec.n, spec.colors, 0.5, rng);
      return Instance{std::move(planted.config), std::move(planted.coloring)};
    }
    if (kind == "clique") return Instance{graph::gen_clique(spec.n), std::nullopt};
    if (kind == "cycle") return Instance{graph::gen_cycle(spec.n), std::nullopt};
    if (kind == "star") return Instance{graph::gen_star(spec.n), std::nullopt};
    if (kind == "bipartite")
      return Instance{graph::gen_bipartite(spec.n, 0.5, rng), std::nullopt};
    if (kind == "with-triangle")
      return Instance{graph::gen_with_triangle(spec.n, 0.3, rng), std::nullopt};
    throw SpecError("unknown graph source '" + kind + "'");
  });
}

static std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

static triangle::IdMode parse_id_mode(const std::string& s) {
  if (s == "ids") return triangle::IdMode::ids;
  if (s == "idfree") return triangle::IdMode::idfree;
  throw SpecError("id mode must be ids or idfree");
}

static std::vector<uint64_t> coloring_witness(const Instance& inst, uint64_t c) {
  if (inst.coloring) return *inst.coloring;
  auto found = graph::find_coloring(inst.config, c);
  if (!found) throw SpecError("honest run needs a proper coloring and none exists");
  return *found;
}

static std::vector<uint64_t> cheat_witness(size_t n, uint64_t c) {
  std::vector<uint64_t> w(n);
  for (size_t u = 0; u < n; u++) w[u] = u % c;
  return w;
}

static json exact_json(const engine::ExactSoundness& ex) {
  json j;
  j["denominator"] = ex.denominator;
  j["accept_count"] = ex.accept_count;
  j["probability"] = ex.probability();
  j["node_accept_count"] = ex.node_accept_count;
  return j;
}

static json spec_echo(const Spec& spec, const graph::Configuration& g) {
  json j;
  j["protocol"] = spec.protocol;
  j["graph"] = spec.graph;
  j["n"] = g.n();
  j["trials"] = spec.trials;
  j["seed"] = spec.seed;
  j["strategy"] = spec.strategy;
  return j;
}

// ------------------------------------------------------------------

static json run_coloring(const Spec& spec, const Instance& inst) {
  const graph::Configuration& g = inst.config;
  auto pr = resolved([&] {
    return coloring::ColoringParams::resolve(g.n(), spec.colors, spec.soundness,
                                             spec.q_override,
                                             spec.private_randomness);
  });
  coloring::ColoringProtocol proto(pr);
  bool member = proto.in_language(g);

  std::unique_ptr<engine::ProverStrategy> strat;
  uint64_t pseed = label_key(spec.seed, "prover");
  if (spec.strategy == "honest") {
    if (!member) throw SpecError("honest prover needs an instance in the language");
    strat = std::make_unique<coloring::HonestStrategy>(pr, coloring_witness(inst, pr.c),
                                                       pseed);
  } else if (spec.strategy == "wrong-witness") {
    strat = std::make_unique<coloring::WrongWitnessStrategy>(
        pr, cheat_witness(g.n(), pr.c), pseed);
  } else if (spec.strategy == "zero-forcing") {
    strat = std::make_unique<coloring::ZeroForcingStrategy>(
        pr, cheat_witness(g.n(), pr.c), pseed);
  } else {
    throw SpecError("unknown coloring strategy '" + spec.strategy + "'");
  }

  json params;
  params["c"] = pr.c;
  params["q"] = pr.q;
  params["private_randomness"] = pr.private_randomness;
  params["cert_elements"] = pr.cert_words();
  params["edge_elements"] = pr.private_randomness ? json() : json(pr.c + 2);
  params["soundness_bound"] = double(2 * pr.c) / double(pr.q - pr.c);

  json results;
  engine::TrialStats st =
      member ? engine::completeness_trial(g, proto, *strat, spec.trials, spec.seed)
             : engine::soundness_trial(g, proto, *strat, spec.trials, spec.seed);
  results["trials"] = st.trials;
  results["acceptance_frequency"] = st.frequency();
  if (spec.exact) results["exact"] = exact_json(engine::exact_soundness(g, proto, *strat));
  results["probe"] = engine::run(g, proto, *strat, label_key(spec.seed, "probe"))
                         .to_json(false);

  json report;
  report["schema"] = "dnizk-report/1";
  report["command"] = "run";
  report["spec"] = spec_echo(spec, g);
  report["params"] = params;
  report["results"] = results;
  return report;
}

static json run_triangle(const Spec& spec, const Instance& inst) {
  const graph::Configuration& g = inst.config;
  auto pr = resolved([&] {
    return triangle::TriangleParams::resolve(g, spec.alpha, spec.improved,
                                             parse_id_mode(spec.id_mode),
                                             spec.q_override);
  });
  triangle::TriangleProtocol proto(pr);
  bool member = proto.in_language(g);

  std::unique_ptr<engine::ProverStrategy> strat;
  uint64_t pseed = label_key(spec.seed, "prover");
  if (spec.strategy == "honest") {
    if (!member) throw SpecError("honest prover needs an instance in the language");
    strat = std::make_unique<triangle::HonestStrategy>(pr, pseed);
  } else if (spec.strategy == "zero-forcing") {
    strat = std::make_unique<triangle::ZeroForcingStrategy>(pr, pseed);
  } else {
    throw SpecError("unknown triangle strategy '" + spec.strategy + "'");
  }

  json params;
  params["alpha"] = pr.alpha;
  params["alpha_eff"] = pr.alpha_eff;
  params["B"] = pr.B;
  params["n_eff"] = pr.n_eff;
  params["q"] = pr.q;
  params["improved"] = pr.improved;
  params["id_mode"] = spec.id_mode;
  params["cert_elements"] = pr.cert_words();
  params["edge_elements"] = pr.msg_words();
  params["soundness_bound"] = double(2 * pr.B) / double(pr.q - pr.B);

  json results;
  engine::TrialStats st =
      member ? engine::completeness_trial(g, proto, *strat, spec.trials, spec.seed)
             : engine::soundness_trial(g, proto, *strat, spec.trials, spec.seed);
  results["trials"] = st.trials;
  results["acceptance_frequency"] = st.frequency();
  if (spec.exact) results["exact"] = exact_json(engine::exact_soundness(g, proto, *strat));
  results["probe"] = engine::run(g, proto, *strat, label_key(spec.seed, "probe"))
                         .to_json(false);

  json report;
  report["schema"] = "dnizk-report/1";
  report["command"] = "run";
  report["spec"] = spec_echo(spec, g);
  report["params"] = params;
  report["results"] = results;
  return report;
}

static json run_universal(const Spec& spec, const Instance& inst) {
  const graph::Configuration& g = inst.config;
  if (spec.exact) throw SpecError("exact enumeration needs a single-challenge protocol");
  auto pr = resolved([&] { return universal::UniversalParams::resolve(g, spec.equality_t); });
  universal::ColorabilityProperty property(spec.colors);
  universal::RandomOracle oracle(label_key(spec.seed, "oracle"));
  universal::IdealNizkBackend backend(oracle, property);
  universal::UniversalProtocol proto(pr, property, oracle, backend);
  bool member = proto.in_language(g);

  std::vector<uint64_t> witness;
  if (auto w = inst.coloring; w && member)
    witness = *w;
  else if (member)
    witness = coloring_witness(inst, spec.colors);
  else if (spec.strategy == "honest")
    throw SpecError("honest prover needs an instance in the language");

  std::unique_ptr<engine::ProverStrategy> strat;
  uint64_t pseed = label_key(spec.seed, "prover");
  if (spec.strategy == "honest")
    strat = std::make_unique<universal::HonestStrategy>(pr, witness, oracle, backend,
                                                        pseed);
  else if (spec.strategy == "inconsistent-matrix")
    strat = std::make_unique<universal::InconsistentMatrixStrategy>(
        pr, witness, oracle, backend, pseed);
  else if (spec.strategy == "missing-edge")
    strat = std::make_unique<universal::MissingEdgeStrategy>(pr, witness, oracle,
                                                             backend, pseed);
  else
    throw SpecError("unknown universal strategy '" + spec.strategy + "'");

  json params;
  params["t"] = pr.t;
  params["K"] = pr.code.K;
  params["q_rs"] = pr.code.q_rs;
  params["property"] = property.name();
  params["cert_bytes"] = pr.cert_len();
  params["message_bytes"] = pr.t * 8;

  json results;
  try {
    engine::TrialStats st =
        member ? engine::completeness_trial(g, proto, *strat, spec.trials, spec.seed)
               : engine::soundness_trial(g, proto, *strat, spec.trials, spec.seed);
    results["trials"] = st.trials;
    results["acceptance_frequency"] = st.frequency();
    results["probe"] = engine::run(g, proto, *strat, label_key(spec.seed, "probe"))
                           .to_json(false);
  } catch (const universal::WitnessInvalid& e) {
    throw SpecError(std::string("the ideal backend refused the witness: ") + e.what());
  }

  json report;
  report["schema"] = "dnizk-report/1";
  report["command"] = "run";
  report["spec"] = spec_echo(spec, g);
  report["params"] = params;
  report["results"] = results;
  return report;
}

std::string cmd_run(const Spec& spec) {
  Instance inst = build_instance(spec);
  json report;
  if (spec.protocol == "coloring")
    report = run_coloring(spec, inst);
  else if (spec.protocol == "triangle")
    report = run_triangle(spec, inst);
  else if (spec.protocol == "universal")
    report = run_universal(spec, inst);
  else
    throw SpecError("unknown protocol '" + spec.protocol + "'");
  return report.dump(2) + "\n";
}

// ------------------------------------------------------------------

double DistributionReport::max_tv() const {
  double m = 0.0;
  for (const auto& [name, d] : tv) m = std::max(m, d);
  return m;
}

namespace {

// Everything zk_compare needs to know about one protocol instance.
struct ZkSamplers {
  std::function<engine::View(uint64_t)> real;
  std::function<engine::View(uint64_t)> sim;
  std::function<std::vector<uint64_t>(const engine::View&)> coords;
  std::function<bool(const engine::View&)> check;
  std::function<std::vector<std::vector<uint64_t>>(const engine::View&)> msgs;
  uint64_t q = 0;
  std::vector<size_t> skip_uniform;
};

}  // namespace

static size_t projection_cells(const Projection& p, uint64_t q) {
  size_t cells = 1;
  for (size_t k = 0; k < p.coords.size(); k++) {
    cells *= q;
    if (cells > 1u << 20)
      throw SpecError("projection " + p.name + " has too many cells");
  }
  return cells;
}

static size_t projection_index(const Projection& p, uint64_t q,
                               const std::vector<std::vector<uint64_t>>& msgs) {
  size_t idx = 0;
  for (auto [port, word] : p.coords) idx = idx * q + msgs.at(port).at(word);
  return idx;
}

static DistributionReport zk_compare(const ZkSamplers& S, uint64_t chi2_samples,
                                     uint64_t tv_samples,
                                     const std::vector<Projection>& projections) {
  DistributionReport rep;
  uint64_t total = std::max(chi2_samples, tv_samples);

  std::vector<std::vector<uint64_t>> coord_real, coord_sim;
  std::vector<std::vector<uint64_t>> proj_real, proj_sim;
  for (const Projection& p : projections) {
    proj_real.emplace_back(projection_cells(p, S.q), 0);
    proj_sim.emplace_back(projection_cells(p, S.q), 0);
  }

  for (uint64_t k = 0; k < total; k++) {
    engine::View wr = S.real(k);
    engine::View ws = S.sim(k);
    if (!S.check(ws)) rep.violations++;
    if (k < chi2_samples) {
      auto cr = S.coords(wr);
      auto cs = S.coords(ws);
      if (coord_real.empty()) {
        coord_real.assign(cr.size(), std::vector<uint64_t>(S.q, 0));
        coord_sim.assign(cs.size(), std::vector<uint64_t>(S.q, 0));
      }
      for (size_t i = 0; i < cr.size(); i++) coord_real[i][cr[i]]++;
      for (size_t i = 0; i < cs.size(); i++) coord_sim[i][cs[i]]++;
    }
    if (k < tv_samples && !projections.empty()) {
      auto mr = S.msgs(wr);
      auto ms = S.msgs(ws);
      for (size_t p = 0; p < projections.size(); p++) {
        proj_real[p][projection_index(projections[p], S.q, mr)]++;
        proj_sim[p][projection_index(projections[p], S.q, ms)]++;
      }
    }
  }

  for (size_t i = 0; i < coord_real.size(); i++) {
    bool skip = std::find(S.skip_uniform.begin(), S.skip_uniform.end(), i) !=
                S.skip_uniform.end();
    if (!skip) {
      rep.min_uniform_p =
          std::min(rep.min_uniform_p, stats::chi2_uniform_pvalue(coord_real[i]));
      rep.min_uniform_p =
          std::min(rep.min_uniform_p, stats::chi2_uniform_pvalue(coord_sim[i]));
    }
    rep.min_two_sample_p =
        std::min(rep.min_two_sample_p,
                 stats::chi2_two_sample_pvalue(coord_real[i], coord_sim[i]));
  }
  for (size_t p = 0; p < projections.size(); p++)
    rep.tv.emplace_back(projections[p].name,
                        stats::tv_distance(proj_real[p], proj_sim[p]));
  return rep;
}

DistributionReport zk_coloring(const coloring::ColoringParams& pr,
                               const graph::Configuration& g,
                               const std::vector<uint64_t>& witness, size_t target,
                               uint64_t chi2_samples, uint64_t tv_samples,
                               const std::vector<Projection>& projections,
                               uint64_t seed) {
  coloring::ColoringProtocol proto(pr);
  engine::LocalView local = engine::make_local_view(g, target);
  ZkSamplers S;
  S.q = pr.q;
  S.skip_uniform = {0};  // the color index lives in [c], not all of [q]
  S.real = [&, seed](uint64_t k) {
    coloring::HonestStrategy strat(pr, witness,
                                   label_key(seed, "prover/" + std::to_string(k)));
    return engine::run(g, proto, strat, label_key(seed, "shared/" + std::to_string(k)))
        .views[target];
  };
  S.sim = [&, seed](uint64_t k) {
    return coloring::simulate_view(pr, local,
                                   label_key(seed, "sim/" + std::to_string(k)));
  };
  S.coords = [&](const engine::View& w) { return coloring::view_coordinates(pr, w); };
  S.check = [&](const engine::View& w) { return coloring::view_passes_checks(pr, w); };
  S.msgs = [&](const engine::View& w) {
    std::vector<std::vector<uint64_t>> out;
    for (const Bytes& m : w.received.at(0)) {
      auto words = wire::parse_words(m, pr.c + 2, pr.q);
      if (!words) throw std::invalid_argument("unparseable received message");
      out.push_back(std::move(*words));
    }
    return out;
  };
  return zk_compare(S, chi2_samples, tv_samples, projections);
}

DistributionReport zk_triangle(const triangle::TriangleParams& pr,
                               const graph::Configuration& g, size_t target,
                               uint64_t chi2_samples, uint64_t tv_samples,
                               const std::vector<Projection>& projections,
                               uint64_t seed) {
  triangle::TriangleProtocol proto(pr);
  engine::LocalView local = engine::make_local_view(g, target);
  ZkSamplers S;
  S.q = pr.q;
  S.real = [&, seed](uint64_t k) {
    triangle::HonestStrategy strat(pr, label_key(seed, "prover/" + std::to_string(k)));
    return engine::run(g, proto, strat, label_key(seed, "shared/" + std::to_string(k)))
        .views[target];
  };
  S.sim = [&, seed](uint64_t k) {
    return triangle::simulate_view(pr, local,
                                   label_key(seed, "sim/" + std::to_string(k)));
  };
  S.coords = [&](const engine::View& w) { return triangle::view_coordinates(pr, w); };
  S.check = [&](const engine::View& w) { return triangle::view_passes_checks(pr, w); };
  S.msgs = [&](const engine::View& w) {
    std::vector<std::vector<uint64_t>> out;
    for (const Bytes& m : w.received.at(0)) {
      auto words = wire::parse_words(m, pr.msg_words(), pr.q);
      if (!words) throw std::invalid_argument("unparseable received message");
      out.push_back(std::move(*words));
    }
    return out;
  };
  return zk_compare(S, chi2_samples, tv_samples, projections);
}

std::vector<Projection> default_projections(size_t ports, size_t words_per_port,
                                            uint64_t q) {
  std::vector<Projection> ps;
  bool pairs = q * q <= 200;
  for (size_t p = 0; p < ports; p++) {
    Projection pj;
    if (pairs && words_per_port >= 2) {
      pj.name = "port" + std::to_string(p) + ":w0w1";
      pj.coords = {{p, 0}, {p, 1}};
    } else {
      pj.name = "port" + std::to_string(p) + ":w0";
      pj.coords = {{p, 0}};
    }
    ps.push_back(std::move(pj));
  }
  if (ports >= 2 && pairs) {
    Projection cross;
    cross.name = "cross:w0";
    cross.coords = {{0, 0}, {1, 0}};
    ps.push_back(std::move(cross));
  }
  return ps;
}

// ------------------------------------------------------------------

std::vector<CoalitionCheck> universal_coalition_checks(
    const graph::Configuration& g, const universal::UniversalParams& pr,
    const universal::GraphProperty& property,
    const std::vector<std::vector<size_t>>& coalitions, uint64_t seed) {
  // node index holding each canonical rank
  std::vector<size_t> index_of_rank(g.n());
  for (size_t u = 0; u < g.n(); u++) index_of_rank[pr.rank_of(g.id(u))] = u;

  std::vector<CoalitionCheck> out;
  for (size_t ci = 0; ci < coalitions.size(); ci++) {
    const std::vector<size_t>& members = coalitions[ci];
    CoalitionCheck check;
    check.members = members;

    universal::RandomOracle oracle(
        label_key(seed, "oracle/" + std::to_string(ci)));
    universal::IdealNizkBackend backend(oracle, property);
    std::vector<engine::LocalView> states;
    for (size_t u : members) states.push_back(engine::make_local_view(g, u));
    auto sim = universal::simulate_coalition(
        pr, oracle, backend, states, label_key(seed, "coalition/" + std::to_string(ci)));

    // inspect what the simulator fed the oracle, before verification
    // replays openings
    std::set<size_t> member_ranks(sim.ranks.begin(), sim.ranks.end());
    check.log_clean = true;
    for (const Bytes& entry : oracle.log()) {
      auto fields = universal::decode_commit_preimage(entry);
      if (!fields || fields->bit != 1) continue;
      if (member_ranks.count(fields->i) || member_ranks.count(fields->j)) continue;
      if (fields->i < g.n() && fields->j < g.n() &&
          g.adjacent(index_of_rank[fields->i], index_of_rank[fields->j]))
        check.log_clean = false;
    }

    check.views_pass = true;
    for (const engine::View& w : sim.views)
      if (!universal::view_verifies(pr, oracle, backend, w)) check.views_pass = false;

    check.openings_match = true;
    for (size_t k = 0; k < members.size(); k++) {
      auto cert = universal::UniversalCert::parse(pr, sim.views[k].sigma);
      if (!cert) {
        check.openings_match = false;
        break;
      }
      for (size_t j = 0; j < pr.n; j++) {
        uint8_t truth =
            g.adjacent(members[k], index_of_rank[j]) && index_of_rank[j] != members[k]
                ? 1
                : 0;
        if (cert->openings[j].bit != truth || cert->openings[pr.n + j].bit != truth)
          check.openings_match = false;
      }
    }
    out.push_back(std::move(check));
  }
  return out;
}

// ------------------------------------------------------------------

static json zk_field_protocol_json(const DistributionReport& rep) {
  json j;
  j["violations"] = rep.violations;
  j["min_uniform_p"] = rep.min_uniform_p;
  j["min_two_sample_p"] = rep.min_two_sample_p;
  json tv = json::object();
  for (const auto& [name, d] : rep.tv) tv[name] = d;
  j["tv"] = tv;
  return j;
}

std::string cmd_zk_test(const Spec& spec) {
  Instance inst = build_instance(spec);
  const graph::Configuration& g = inst.config;
  json report;
  report["schema"] = "dnizk-report/1";
  report["command"] = "zk-test";
  report["spec"] = spec_echo(spec, g);

  if (spec.protocol == "universal") {
    auto pr = resolved([&] { return universal::UniversalParams::resolve(g, spec.equality_t); });
    universal::ColorabilityProperty property(spec.colors);
    if (g.n() > 16) throw SpecError("coalition sweep covers n up to 16");
    std::vector<std::vector<size_t>> coalitions;
    for (size_t u = 0; u < g.n(); u++) coalitions.push_back({u});
    for (size_t u = 0; u < g.n(); u++)
      for (size_t v = u + 1; v < g.n(); v++) coalitions.push_back({u, v});
    std::vector<size_t> all(g.n());
    for (size_t u = 0; u < g.n(); u++) all[u] = u;
    coalitions.push_back(all);
    auto checks =
        universal_coalition_checks(g, pr, property, coalitions, spec.seed);
    json arr = json::array();
    bool ok = true;
    for (const CoalitionCheck& c : checks) {
      json jc;
      jc["members"] = c.members;
      jc["views_pass"] = c.views_pass;
      jc["openings_match"] = c.openings_match;
      jc["log_clean"] = c.log_clean;
      arr.push_back(jc);
      ok = ok && c.ok();
    }
    report["results"]["coalitions"] = arr;
    report["results"]["all_ok"] = ok;
    return report.dump(2) + "\n";
  }

  if (spec.private_randomness)
    throw SpecError("distribution tests cover the shared-randomness variant");

  size_t target = 0;
  for (size_t u = 0; u < g.n(); u++)
    if (g.degree(u) > g.degree(target)) target = u;

  if (spec.protocol == "coloring") {
    auto pr = resolved([&] {
      return coloring::ColoringParams::resolve(g.n(), spec.colors, spec.soundness,
                                               spec.q_override, false);
    });
    auto witness = coloring_witness(inst, pr.c);
    auto projections = default_projections(g.degree(target), pr.c + 2, pr.q);
    auto rep = zk_coloring(pr, g, witness, target, spec.trials, spec.trials,
                           projections, spec.seed);
    report["params"] = {{"c", pr.c}, {"q", pr.q}, {"target", target}};
    report["results"] = zk_field_protocol_json(rep);
  } else if (spec.protocol == "triangle") {
    auto pr = resolved([&] {
      return triangle::TriangleParams::resolve(g, spec.alpha, spec.improved,
                                               parse_id_mode(spec.id_mode),
                                               spec.q_override);
    });
    auto projections = default_projections(g.degree(target), pr.msg_words(), pr.q);
    auto rep = zk_triangle(pr, g, target, spec.trials, spec.trials, projections,
                           spec.seed);
    report["params"] = {{"B", pr.B}, {"q", pr.q}, {"target", target}};
    report["results"] = zk_field_protocol_json(rep);
  } else {
    throw SpecError("unknown protocol '" + spec.protocol + "'");
  }
  return report.dump(2) + "\n";
}

// ------------------------------------------------------------------

namespace {

struct SweepCell {
  size_t n = 0;
  uint64_t c = 3;
  uint64_t alpha = 3;
  std::optional<double> s;
};

}  // namespace

static std::string sweep_coloring_row(const Spec& spec, const SweepCell& cell) {
  auto pr = resolved([&] {
    return coloring::ColoringParams::resolve(cell.n, cell.c, cell.s, std::nullopt,
                                             false);
  });
  coloring::ColoringProtocol proto(pr);
  uint64_t cell_seed = label_key(spec.seed, "cell/coloring/" + std::to_string(cell.n) +
                                                "/" + std::to_string(cell.c) + "/" +
                                                (cell.s ? format_double(*cell.s) : ""));
  RandomStream rng(label_key(cell_seed, "graph"));

  std::string completeness, exact;
  if (cell.n >= cell.c) {
    auto planted = graph::gen_planted_colorable(cell.n, cell.c, 0.5, rng);
    coloring::HonestStrategy honest(pr, planted.coloring, label_key(cell_seed, "h"));
    auto st = engine::completeness_trial(planted.config, proto, honest,
                                         std::max<uint64_t>(spec.trials, 1), cell_seed);
    completeness = format_double(st.frequency());
  }
  if (cell.n >= cell.c + 1 && pr.q <= 4096) {
    // clique on c+1 nodes plus a chain, so the instance stays negative
    std::vector<std::pair<size_t, size_t>> edges;
    for (size_t i = 0; i <= cell.c; i++)
      for (size_t j = i + 1; j <= cell.c; j++) edges.push_back({i, j});
    for (size_t i = cell.c + 1; i < cell.n; i++) edges.push_back({i - 1, i});
    auto neg = graph::Configuration::build(cell.n, edges);
    coloring::ZeroForcingStrategy cheat(pr, cheat_witness(cell.n, pr.c),
                                        label_key(cell_seed, "z"));
    exact = format_double(engine::exact_soundness(neg, proto, cheat).probability());
  }

  std::string row = "coloring," + std::to_string(cell.n) + "," +
                    std::to_string(cell.c) + ",," +
                    (cell.s ? format_double(*cell.s) : "") + "," +
                    std::to_string(pr.q) + ",,," +
                    std::to_string(pr.cert_words()) + "," +
                    std::to_string(pr.c + 2) + "," +
                    format_double(double(2 * pr.c) / double(pr.q - pr.c)) + "," +
                    exact + "," + completeness;
  return row;
}

static std::string sweep_triangle_row(const Spec& spec, const SweepCell& cell) {
  uint64_t cell_seed = label_key(spec.seed, "cell/triangle/" + std::to_string(cell.n) +
                                                "/" + std::to_string(cell.alpha));
  RandomStream rng(label_key(cell_seed, "graph"));
  auto pos = resolved([&] { return graph::gen_bipartite(cell.n, 0.5, rng); });
  auto pr = resolved([&] {
    return triangle::TriangleParams::resolve(pos, cell.alpha, spec.improved,
                                             parse_id_mode(spec.id_mode));
  });
  triangle::TriangleProtocol proto(pr);
  triangle::HonestStrategy honest(pr, label_key(cell_seed, "h"));
  auto st = engine::completeness_trial(pos, proto, honest,
                                       std::max<uint64_t>(spec.trials, 1), cell_seed);

  std::string exact;
  auto neg = resolved([&] { return graph::gen_with_triangle(cell.n, 0.3, rng); });
  auto neg_pr = resolved([&] {
    return triangle::TriangleParams::resolve(neg, cell.alpha, spec.improved,
                                             parse_id_mode(spec.id_mode));
  });
  if (neg_pr.q <= 4096) {
    triangle::TriangleProtocol neg_proto(neg_pr);
    triangle::ZeroForcingStrategy cheat(neg_pr, label_key(cell_seed, "z"));
    exact =
        format_double(engine::exact_soundness(neg, neg_proto, cheat).probability());
  }

  std::string row = "triangle," + std::to_string(cell.n) + ",," +
                    std::to_string(cell.alpha) + ",," + std::to_string(pr.q) + "," +
                    std::to_string(pr.B) + ",," + std::to_string(pr.cert_words()) +
                    "," + std::to_string(pr.msg_words()) + "," +
                    format_double(double(2 * pr.B) / double(pr.q - pr.B)) + "," +
                    exact + "," + format_double(st.frequency());
  return row;
}

static std::string sweep_universal_row(const Spec& spec, const SweepCell& cell) {
  uint64_t cell_seed = label_key(spec.seed, "cell/universal/" + std::to_string(cell.n));
  RandomStream rng(label_key(cell_seed, "graph"));
  auto planted =
      resolved([&] { return graph::gen_planted_colorable(cell.n, cell.c, 0.5, rng); });
  auto pr =
      resolved([&] { return universal::UniversalParams::resolve(planted.config,
                                                                spec.equality_t); });
  universal::ColorabilityProperty property(cell.c);
  universal::RandomOracle oracle(label_key(cell_seed, "oracle"));
  universal::IdealNizkBackend backend(oracle, property);
  universal::UniversalProtocol proto(pr, property, oracle, backend);
  universal::HonestStrategy honest(pr, planted.coloring, oracle, backend,
                                   label_key(cell_seed, "h"));
  auto st = engine::completeness_trial(planted.config, proto, honest,
                                       std::max<uint64_t>(spec.trials, 1), cell_seed);
  std::string row = "universal," + std::to_string(cell.n) + "," +
                    std::to_string(cell.c) + ",,,,," + std::to_string(pr.t) + "," +
                    std::to_string(pr.cert_len()) + "," + std::to_string(pr.t * 8) +
                    ",,," + format_double(st.frequency());
  return row;
}

std::string cmd_sweep(const Spec& spec) {
  std::vector<size_t> ns = spec.n_list.empty() ? std::vector<size_t>{spec.n}
                                               : spec.n_list;
  std::vector<uint64_t> cs =
      spec.colors_list.empty() ? std::vector<uint64_t>{spec.colors} : spec.colors_list;
  std::vector<uint64_t> alphas =
      spec.alpha_list.empty() ? std::vector<uint64_t>{spec.alpha} : spec.alpha_list;
  std::vector<std::optional<double>> ss;
  if (spec.soundness_list.empty())
    ss.push_back(spec.soundness);
  else
    for (double s : spec.soundness_list) ss.push_back(s);

  std::vector<SweepCell> cells;
  if (spec.protocol == "coloring") {
    for (size_t n : ns)
      for (uint64_t c : cs)
        for (const auto& s : ss) cells.push_back({n, c, 0, s});
  } else if (spec.protocol == "triangle") {
    for (size_t n : ns)
      for (uint64_t a : alphas) cells.push_back({n, 3, a, std::nullopt});
  } else if (spec.protocol == "universal") {
    for (size_t n : ns) cells.push_back({n, spec.colors, 0, std::nullopt});
  } else {
    throw SpecError("unknown protocol '" + spec.protocol + "'");
  }

  std::vector<std::string> rows(cells.size());
  std::exception_ptr row_error;  // first failure wins; workers must not throw
  std::mutex error_mutex;
  auto work = [&](size_t lo, size_t hi) {
    try {
      for (size_t k = lo; k < hi; k++) {
        if (spec.protocol == "coloring")
          rows[k] = sweep_coloring_row(spec, cells[k]);
        else if (spec.protocol == "triangle")
          rows[k] = sweep_triangle_row(spec, cells[k]);
        else
          rows[k] = sweep_universal_row(spec, cells[k]);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!row_error) row_error = std::current_exception();
    }
  };
  size_t threads = std::min(engine::thread_budget(), cells.size());
  if (threads <= 1) {
    work(0, cells.size());
  } else {
    std::vector<std::thread> pool;
    size_t chunk = (cells.size() + threads - 1) / threads;
    for (size_t t = 0; t < threads; t++)
      pool.emplace_back(work, t * chunk, std::min(cells.size(), (t + 1) * chunk));
    for (auto& th : pool) th.join();
  }
  if (row_error) std::rethrow_exception(row_error);

  std::string csv =
      "protocol,n,c,alpha,s,q,B,t,cert_elements,edge_elements,soundness_bound,"
      "exact_soundness,completeness\n";
  for (const std::string& row : rows) csv += row + "\n";
  return csv;
}

std::string cmd_gen_graph(const Spec& spec) {
  return graph::write_graph(build_instance(spec).config);
}

}  // namespace dnizk::experiment

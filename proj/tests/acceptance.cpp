// Acceptance gate: one pass/fail line per criterion, nonzero exit if any
// fail.  Seeds and tolerances are pinned here on purpose — reruns must
// reproduce these numbers byte for byte.

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "dnizk/coloring.hpp"
#include "dnizk/engine.hpp"
#include "dnizk/experiment.hpp"
#include "dnizk/graph.hpp"
#include "dnizk/stats.hpp"
#include "dnizk/triangle.hpp"
#include "dnizk/universal.hpp"

using namespace dnizk;

static int g_failures = 0;

namespace {

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void criterion(int number, const std::string& label, bool ok, double secs,
               double budget_secs, const std::string& detail) {
  if (secs >= budget_secs) ok = false;
  if (!ok) g_failures++;
  std::printf("%s criterion %d: %s — %s [%.2fs / %.0fs]\n", ok ? "PASS" : "FAIL",
              number, label.c_str(), detail.c_str(), secs, budget_secs);
  std::fflush(stdout);
}

graph::PlantedInstance planted(size_t n, double p, uint64_t seed) {
  RandomStream rng(seed);
  return graph::gen_planted_colorable(n, 3, p, rng);
}

// ------------------------------------------------------------------

void criterion_1() {
  Timer t;
  bool ok = true;
  std::string detail;
  uint64_t total = 0;

  struct Case {
    std::string name;
    graph::PlantedInstance inst;
  };
  std::vector<Case> cases;
  {
    auto k2 = graph::gen_clique(2);
    auto w = graph::find_coloring(k2, 3);
    cases.push_back({"K2", {k2, *w}});
  }
  cases.push_back({"K222", planted(6, 1.0, 101)});
  cases.push_back({"planted8", planted(8, 0.5, 102)});
  cases.push_back({"planted16", planted(16, 0.5, 103)});
  cases.push_back({"planted32", planted(32, 0.5, 104)});

  for (const auto& c : cases) {
    auto pr = coloring::ColoringParams::resolve(c.inst.config.n());
    coloring::ColoringProtocol proto(pr);
    coloring::HonestStrategy s(pr, c.inst.coloring, 7);
    auto ts = engine::completeness_trial(c.inst.config, proto, s, 100, 1001);
    total += ts.accepted;
    if (ts.accepted != 100) {
      ok = false;
      detail += c.name + " accepted " + std::to_string(ts.accepted) + "/100; ";
    }
  }
  if (ok)
    detail = "acceptance " + std::to_string(total) + "/500 across 5 instances x 100 seeds";
  criterion(1, "coloring completeness", ok, t.seconds(), 5.0, detail);
}

void criterion_2() {
  Timer t;
  bool ok = true;
  std::string detail;
  auto k4 = graph::gen_clique(4);
  for (uint64_t q : {5ull, 7ull, 11ull}) {
    auto pr = coloring::ColoringParams::resolve(4, 3, std::nullopt, q);
    coloring::ColoringProtocol proto(pr);
    coloring::ZeroForcingStrategy s(pr, {0, 1, 2, 0}, 2024);
    auto ex = engine::exact_soundness(k4, proto, s);
    bool cell = ex.accept_count <= 6 && ex.accept_count < q - 3;
    ok = ok && cell;
    detail += "q=" + std::to_string(q) + ":" + std::to_string(ex.accept_count) + "/" +
              std::to_string(ex.denominator) + " ";
  }
  criterion(2, "coloring zero-forcing exact counts", ok, t.seconds(), 1.0, detail);
}

void criterion_3() {
  Timer t;
  bool ok = true;
  std::string detail;
  for (uint64_t c : {2ull, 3ull, 5ull})
    for (double s : {1.0 / 16, 1.0 / 64}) {
      auto pr = coloring::ColoringParams::resolve(c + 1, c, s);
      bool window = double(pr.q) > 3.0 * double(c) / s &&
                    double(pr.q) <= 6.0 * double(c) / s;
      auto kc1 = graph::gen_clique(size_t(c) + 1);
      std::vector<uint64_t> improper(c + 1);
      for (uint64_t u = 0; u < c; u++) improper[u] = u;
      improper[c] = 0;
      coloring::ColoringProtocol proto(pr);
      coloring::ZeroForcingStrategy strat(pr, improper, 33);
      auto ex = engine::exact_soundness(kc1, proto, strat);
      double bound = 2.0 * double(c) / double(pr.q - c);
      bool cell = window && ex.probability() <= bound;
      ok = ok && cell;
      char buf[96];
      std::snprintf(buf, sizeof buf, "c=%" PRIu64 ",s=1/%d:q=%" PRIu64 ",%.4f<=%.4f ",
                    c, int(1.0 / s), pr.q, ex.probability(), bound);
      detail += buf;
    }
  criterion(3, "soundness-target windows and bounds", ok, t.seconds(), 5.0, detail);
}

void criterion_4() {
  Timer t;
  bool ok = true;
  std::string detail;
  uint64_t total = 0, want = 0;

  std::vector<std::pair<std::string, graph::Configuration>> cases;
  cases.emplace_back("C5", graph::gen_cycle(5));
  {
    RandomStream rng(201);
    cases.emplace_back("bip8", graph::gen_bipartite(8, 0.5, rng));
    cases.emplace_back("bip16", graph::gen_bipartite(16, 0.5, rng));
  }
  for (const auto& [name, g] : cases)
    for (uint64_t alpha : {3, 4})
      for (triangle::IdMode mode : {triangle::IdMode::ids, triangle::IdMode::idfree}) {
        auto pr = triangle::TriangleParams::resolve(g, alpha, false, mode);
        triangle::TriangleProtocol proto(pr);
        triangle::HonestStrategy s(pr, 11);
        auto ts = engine::completeness_trial(g, proto, s, 100, 2001);
        total += ts.accepted;
        want += 100;
        if (ts.accepted != 100) {
          ok = false;
          detail += name + "/a" + std::to_string(alpha) +
                    (mode == triangle::IdMode::idfree ? "/idfree" : "/ids") + " " +
                    std::to_string(ts.accepted) + "/100; ";
        }
      }
  if (ok)
    detail = "acceptance " + std::to_string(total) + "/" + std::to_string(want) +
             " across 12 cells x 100 seeds";
  criterion(4, "triangle completeness", ok, t.seconds(), 10.0, detail);
}

void criterion_5() {
  Timer t;
  bool ok = true;
  std::string detail;

  auto check_graph = [&](const std::string& name, const graph::Configuration& g) {
    uint64_t n = g.n();
    auto pr = triangle::TriangleParams::resolve(g, 3);
    triangle::TriangleProtocol proto(pr);
    triangle::ZeroForcingStrategy s(pr, 3001);
    auto ex = engine::exact_soundness(g, proto, s);
    uint64_t cap = 2 * ((n + 2) / 3);  // 2 * ceil(n / alpha)
    bool basic = ex.accept_count <= cap;

    auto imp = triangle::TriangleParams::resolve(g, 3, true);
    triangle::TriangleProtocol iproto(imp);
    triangle::ZeroForcingStrategy is(imp, 3001);
    auto iex = engine::exact_soundness(g, iproto, is);
    bool improved = iex.probability() < 1.0 / double(n);
    ok = ok && basic && improved;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s:%" PRIu64 "<=%" PRIu64 ",improved %.5f<%.5f ",
                  name.c_str(), ex.accept_count, cap, iex.probability(),
                  1.0 / double(n));
    detail += buf;
  };

  check_graph("K3", graph::gen_clique(3));
  RandomStream rng(205);
  check_graph("tri9", graph::gen_with_triangle(9, 0.4, rng));
  criterion(5, "triangle zero-forcing exact counts", ok, t.seconds(), 10.0, detail);
}

void criterion_6() {
  Timer t;
  bool ok = true;
  std::string detail;

  {
    auto inst = planted(8, 0.5, 301);
    auto pr = coloring::ColoringParams::resolve(8);
    coloring::ColoringProtocol proto(pr);
    coloring::HonestStrategy s(pr, inst.coloring, 5);
    auto rr = engine::run(inst.config, proto, s, 17);
    size_t cert_words = 2 + 2 * (2 * pr.c + 1);
    size_t edge_words = pr.c + 2;
    for (size_t sz : rr.cert_sizes) ok = ok && sz == cert_words * 8;
    for (size_t sz : rr.message_sizes[0]) ok = ok && sz == edge_words * 8;
    detail += "coloring cert=" + std::to_string(cert_words) + "w edge=" +
              std::to_string(edge_words) + "w ";
  }
  for (uint64_t alpha : {3, 4}) {
    auto g = graph::gen_cycle(5);
    auto pr = triangle::TriangleParams::resolve(g, alpha);
    triangle::TriangleProtocol proto(pr);
    triangle::HonestStrategy s(pr, 6);
    auto rr = engine::run(g, proto, s, 19);
    size_t cert_words = pr.alpha_eff + 2 * (2 * pr.B + 1);
    size_t edge_words = (pr.B + 1) + pr.alpha_eff;
    for (size_t sz : rr.cert_sizes) ok = ok && sz == cert_words * 8;
    for (size_t sz : rr.message_sizes[0]) ok = ok && sz == edge_words * 8;
    detail += "triangle a=" + std::to_string(alpha) + " cert=" +
              std::to_string(cert_words) + "w edge=" + std::to_string(edge_words) +
              "w ";
  }
  criterion(6, "message accounting", ok, t.seconds(), 5.0, detail);
}

void criterion_7() {
  Timer t;
  bool ok = true;
  std::string detail;
  const uint64_t chi2_n = 100000, tv_n = 1000000;
  const double p_floor = 1e-3, tv_cap = 0.01;

  {
    auto k2 = graph::gen_clique(2);
    auto pr = coloring::ColoringParams::resolve(2);  // q = 5
    auto projections =
        experiment::default_projections(1, pr.c + 2, pr.q);
    auto rep = experiment::zk_coloring(pr, k2, {0, 1}, 0, chi2_n, tv_n,
                                       projections, 4001);
    bool cell = rep.violations == 0 && rep.min_uniform_p > p_floor &&
                rep.min_two_sample_p > p_floor && rep.max_tv() <= tv_cap;
    ok = ok && cell;
    char buf[128];
    std::snprintf(buf, sizeof buf, "K2: viol=%" PRIu64 " pu=%.4g p2=%.4g tv=%.4f ",
                  rep.violations, rep.min_uniform_p, rep.min_two_sample_p,
                  rep.max_tv());
    detail += buf;
  }
  {
    auto star = graph::gen_star(4);  // K_{1,3}, target = hub
    auto pr = triangle::TriangleParams::resolve(star, 3);
    auto projections =
        experiment::default_projections(3, pr.msg_words(), pr.q);
    auto rep = experiment::zk_triangle(pr, star, 0, chi2_n, tv_n, projections, 4002);
    bool cell = rep.violations == 0 && rep.min_uniform_p > p_floor &&
                rep.min_two_sample_p > p_floor && rep.max_tv() <= tv_cap;
    ok = ok && cell;
    char buf[128];
    std::snprintf(buf, sizeof buf, "K13: viol=%" PRIu64 " pu=%.4g p2=%.4g tv=%.4f",
                  rep.violations, rep.min_uniform_p, rep.min_two_sample_p,
                  rep.max_tv());
    detail += buf;
  }
  criterion(7, "zero-knowledge distribution suite", ok, t.seconds(), 120.0, detail);
}

void criterion_8() {
  Timer t;
  bool ok = true;
  std::string detail;
  auto pr = universal::EqualityParams::resolve(32, 4);  // K = 8, codeword 16
  field::PrimeField f = pr.fld();

  RandomStream rng(501);
  std::vector<uint64_t> a(pr.K);
  for (auto& s : a) s = rng.uniform_below(1ull << 32);

  uint64_t equal_accept = 0;
  for (uint64_t k = 0; k < 1000; k++) {
    SharedRandomness shared(label_key(5002, "eq/" + std::to_string(k)));
    auto coords = universal::draw_coordinates(pr, shared, "eq-acceptance");
    auto va = universal::symbols_at(pr, a, coords);
    auto vb = universal::symbols_at(pr, a, coords);
    if (va == vb) equal_accept++;
  }
  ok = ok && equal_accept == 1000;

  // worst case: difference polynomial with roots exactly 0..K-2
  std::vector<uint64_t> diff{1};
  for (uint64_t root = 0; root + 1 < pr.K; root++) {
    std::vector<uint64_t> next(diff.size() + 1, 0);
    for (size_t kk = 0; kk < diff.size(); kk++) {
      next[kk + 1] = f.add(next[kk + 1], diff[kk]);
      next[kk] = f.add(next[kk], f.mul(f.neg(root), diff[kk]));
    }
    diff = next;
  }
  std::vector<uint64_t> b(pr.K);
  for (size_t kk = 0; kk < pr.K; kk++) b[kk] = f.add(a[kk], diff[kk]);
  auto wa = universal::codeword(pr, a);
  auto wb = universal::codeword(pr, b);
  size_t agree = 0;
  for (size_t x = 0; x < wa.size(); x++) agree += (wa[x] == wb[x]);
  ok = ok && agree == pr.K - 1;

  auto binom = [](uint64_t n, uint64_t k) {
    double v = 1.0;
    for (uint64_t i = 0; i < k; i++) v = v * double(n - i) / double(i + 1);
    return v;
  };
  double exact = binom(pr.K - 1, pr.t) / binom(2 * pr.K, pr.t);
  const uint64_t mc_n = 100000;
  uint64_t mc_accept = 0;
  for (uint64_t k = 0; k < mc_n; k++) {
    SharedRandomness shared(label_key(5003, "mc/" + std::to_string(k)));
    auto coords = universal::draw_coordinates(pr, shared, "eq-acceptance");
    auto va = universal::symbols_at(pr, a, coords);
    auto vb = universal::symbols_at(pr, b, coords);
    if (va == vb) mc_accept++;
  }
  double mc = double(mc_accept) / double(mc_n);
  double sigma = std::sqrt(exact * (1.0 - exact) / double(mc_n));
  bool close = std::fabs(mc - exact) <= 3.0 * sigma;
  bool bounded = exact <= std::pow(2.0, -double(pr.t));
  ok = ok && close && bounded;

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "equal 1000/1000, agree=%zu, exact=%.5f mc=%.5f (3s=%.5f), 2^-t=%.5f",
                agree, exact, mc, 3.0 * sigma, std::pow(2.0, -double(pr.t)));
  detail = buf;
  criterion(8, "equality comparison", ok, t.seconds(), 30.0, detail);
}

void criterion_9() {
  Timer t;
  bool ok = true;
  std::string detail;
  universal::ColorabilityProperty prop(3);

  for (size_t n : {6, 10}) {
    auto inst = planted(n, n == 6 ? 0.6 : 0.4, 600 + n);
    auto pr = universal::UniversalParams::resolve(inst.config);
    universal::RandomOracle oracle(6001 + n);
    universal::IdealNizkBackend backend(oracle, prop);
    universal::UniversalProtocol proto(pr, prop, oracle, backend);
    universal::HonestStrategy s(pr, inst.coloring, oracle, backend, 9);
    auto ts = engine::completeness_trial(inst.config, proto, s, 100, 6100);
    ok = ok && ts.accepted == 100;
    detail += "n=" + std::to_string(n) + ":" + std::to_string(ts.accepted) + "/100 ";
  }

  {
    auto inst = planted(6, 0.6, 606);
    auto pr = universal::UniversalParams::resolve(inst.config);
    universal::RandomOracle oracle(6007);
    universal::IdealNizkBackend backend(oracle, prop);
    universal::UniversalProtocol proto(pr, prop, oracle, backend);
    universal::InconsistentMatrixStrategy s(pr, inst.coloring, oracle, backend, 13);
    const uint64_t trials = 10000;
    auto ts = engine::completeness_trial(inst.config, proto, s, trials, 6200);
    double caught = 1.0 - ts.frequency();
    double p_escape = std::pow(2.0, -double(pr.t));
    double sigma = std::sqrt(p_escape * (1.0 - p_escape) / double(trials));
    bool cell = caught >= 1.0 - p_escape - 3.0 * sigma;
    ok = ok && cell;
    char buf[96];
    std::snprintf(buf, sizeof buf, "inconsistent caught=%.4f (floor %.4f) ", caught,
                  1.0 - p_escape - 3.0 * sigma);
    detail += buf;
  }

  {
    auto inst = planted(6, 0.8, 607);
    auto pr = universal::UniversalParams::resolve(inst.config);
    universal::RandomOracle oracle(6008);
    universal::IdealNizkBackend backend(oracle, prop);
    universal::UniversalProtocol proto(pr, prop, oracle, backend);
    universal::MissingEdgeStrategy s(pr, inst.coloring, oracle, backend, 15);
    auto [ra, rb] = s.dropped(inst.config);
    size_t ua = 0, ub = 0;
    for (size_t u = 0; u < pr.n; u++) {
      if (pr.rank_of(inst.config.id(u)) == ra) ua = u;
      if (pr.rank_of(inst.config.id(u)) == rb) ub = u;
    }
    uint64_t caught = 0;
    const uint64_t trials = 100;
    for (uint64_t k = 0; k < trials; k++) {
      auto rr = engine::run(inst.config, proto, s,
                            label_key(6300, "t/" + std::to_string(k)));
      if (rr.verdicts[ua] == engine::Verdict::reject &&
          rr.verdicts[ub] == engine::Verdict::reject)
        caught++;
    }
    ok = ok && caught == trials;
    detail += "missing-edge endpoints reject " + std::to_string(caught) + "/" +
              std::to_string(trials);
  }
  criterion(9, "universal compiler", ok, t.seconds(), 60.0, detail);
}

void criterion_10() {
  Timer t;
  auto inst = planted(6, 0.6, 700);
  auto pr = universal::UniversalParams::resolve(inst.config);
  universal::ColorabilityProperty prop(3);

  std::vector<std::vector<size_t>> coalitions;
  for (size_t u = 0; u < 6; u++) coalitions.push_back({u});
  for (size_t u = 0; u < 6; u++)
    for (size_t v = u + 1; v < 6; v++) coalitions.push_back({u, v});
  coalitions.push_back({0, 1, 2, 3, 4, 5});

  auto checks =
      experiment::universal_coalition_checks(inst.config, pr, prop, coalitions, 7001);
  bool ok = checks.size() == coalitions.size();
  size_t passed = 0;
  std::string detail;
  for (const auto& c : checks) {
    if (c.ok()) {
      passed++;
    } else {
      ok = false;
      detail += "size-" + std::to_string(c.members.size()) + " {";
      for (size_t m : c.members) detail += std::to_string(m) + " ";
      detail += "} views=" + std::to_string(c.views_pass) +
                " openings=" + std::to_string(c.openings_match) +
                " log=" + std::to_string(c.log_clean) + "; ";
    }
  }
  if (ok)
    detail = std::to_string(passed) + "/" + std::to_string(coalitions.size()) +
             " coalitions: views pass, openings match, oracle log clean";
  criterion(10, "coalition simulation", ok, t.seconds(), 30.0, detail);
}

void criterion_11() {
  Timer t;
  bool ok = true;
  std::string detail = "byte-identical: ";

  auto twice_equal = [&](const std::string& name, experiment::Spec spec,
                         std::string (*fn)(const experiment::Spec&)) {
    std::string first = fn(spec);
    std::string second = fn(spec);
    bool same = first == second && !first.empty();
    ok = ok && same;
    detail += name + (same ? "=yes " : "=NO ");
  };

  experiment::Spec run_spec;
  run_spec.command = "run";
  run_spec.protocol = "coloring";
  run_spec.graph = "clique";
  run_spec.n = 4;
  run_spec.strategy = "zero-forcing";
  run_spec.exact = true;
  run_spec.trials = 50;
  run_spec.seed = 8001;
  twice_equal("run", run_spec, experiment::cmd_run);

  experiment::Spec tri_spec;
  tri_spec.command = "run";
  tri_spec.protocol = "triangle";
  tri_spec.graph = "cycle";
  tri_spec.n = 5;
  tri_spec.alpha = 4;
  tri_spec.trials = 50;
  tri_spec.seed = 8002;
  twice_equal("run-triangle", tri_spec, experiment::cmd_run);

  experiment::Spec zk_spec;
  zk_spec.command = "zk-test";
  zk_spec.protocol = "coloring";
  zk_spec.graph = "k2";
  zk_spec.n = 2;
  zk_spec.trials = 2000;
  zk_spec.seed = 8003;
  twice_equal("zk-test", zk_spec, experiment::cmd_zk_test);

  experiment::Spec sweep_spec;
  sweep_spec.command = "sweep";
  sweep_spec.protocol = "triangle";
  sweep_spec.graph = "bipartite";
  sweep_spec.n_list = {8, 10};
  sweep_spec.alpha_list = {3, 4};
  sweep_spec.trials = 20;
  sweep_spec.seed = 8004;
  twice_equal("sweep", sweep_spec, experiment::cmd_sweep);

  experiment::Spec gen_spec;
  gen_spec.command = "gen-graph";
  gen_spec.graph = "planted";
  gen_spec.n = 12;
  gen_spec.seed = 8005;
  twice_equal("gen-graph", gen_spec, experiment::cmd_gen_graph);

  criterion(11, "report determinism", ok, t.seconds(), 60.0, detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  if (g_failures == 0) {
    std::printf("all 11 criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", g_failures);
  return 1;
}

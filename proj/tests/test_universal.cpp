#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "dnizk/engine.hpp"
#include "dnizk/graph.hpp"
#include "dnizk/stats.hpp"
#include "dnizk/universal.hpp"

using namespace dnizk;
using namespace dnizk::universal;

TEST_CASE("oracle queries replay and distinct inputs spread") {
  RandomOracle oracle(7);
  Bytes a{1, 2, 3}, b{1, 2, 4};
  Digest da = oracle.query(a);
  CHECK(oracle.query(a) == da);
  CHECK(oracle.query(b) != da);
  CHECK(oracle.log().size() == 3);
  CHECK(oracle.log()[0] == a);
  oracle.clear_log();
  CHECK(oracle.log().empty());
  CHECK(oracle.query(a) == da);  // table survives the log wipe

  RandomOracle other(8);
  CHECK(other.query(a) != da);  // keyed

  std::set<Digest> seen;
  for (uint32_t k = 0; k < 10000; k++) {
    Bytes input;
    wire::put_u32(input, k);
    seen.insert(oracle.query(input));
  }
  CHECK(seen.size() == 10000);
}

TEST_CASE("programmed entries pin the table") {
  RandomOracle oracle(3);
  Bytes in{9, 9};
  Digest out{};
  out[0] = 0xab;
  oracle.program(in, out);
  CHECK(oracle.query(in) == out);
  CHECK_THROWS(oracle.program(in, Digest{}));  // conflicting pin
}

TEST_CASE("commitments open only with the exact preimage") {
  RandomOracle oracle(11);
  RandomStream rng(4);
  Opening op;
  Digest d = commit(oracle, 2, 5, 1, rng, op);
  CHECK(open_verify(oracle, d, 2, 5, 1, op.randomness));
  CHECK_FALSE(open_verify(oracle, d, 2, 5, 0, op.randomness));
  CHECK_FALSE(open_verify(oracle, d, 5, 2, 1, op.randomness));
  auto wrong = op.randomness;
  wrong[0] ^= 1;
  CHECK_FALSE(open_verify(oracle, d, 2, 5, 1, wrong));

  Bytes pre = commit_preimage(2, 5, 1, op.randomness);
  auto fields = decode_commit_preimage(pre);
  REQUIRE(fields.has_value());
  CHECK(fields->i == 2);
  CHECK(fields->j == 5);
  CHECK(fields->bit == 1);
  CHECK_FALSE(decode_commit_preimage(Bytes{0x02, 0, 0}).has_value());
}

TEST_CASE("no two recorded preimages collide") {
  RandomOracle oracle(13);
  RandomStream rng(6);
  Opening op;
  for (uint32_t k = 0; k < 2000; k++) commit(oracle, k, k + 1, k & 1, rng, op);
  std::set<Digest> digests;
  for (const auto& [pre, dig] : oracle.table()) digests.insert(dig);
  CHECK(digests.size() == oracle.table().size());
}

TEST_CASE("commitment bytes look the same for either bit") {
  RandomOracle oracle(17);
  RandomStream rng(8);
  Opening op;
  std::vector<uint64_t> zero_counts(256, 0), one_counts(256, 0);
  for (uint32_t k = 0; k < 4000; k++) {
    Digest d0 = commit(oracle, k, 0, 0, rng, op);
    Digest d1 = commit(oracle, k, 1, 1, rng, op);
    zero_counts[d0[0]]++;
    one_counts[d1[0]]++;
  }
  CHECK(stats::chi2_two_sample_pvalue(zero_counts, one_counts) > 1e-4);
  CHECK(stats::chi2_uniform_pvalue(zero_counts) > 1e-4);
}

TEST_CASE("code parameters and symbol packing") {
  auto pr = EqualityParams::resolve(10, 3);
  CHECK(pr.K == 3);
  CHECK(pr.codeword_len() == 6);
  CHECK(pr.q_rs == 4294967311ull);  // first prime past 2^32

  Bytes msg{0x01, 0x00, 0x00, 0x00, 0xff, 0xff, 0xff, 0xff, 0x02, 0x03};
  auto symbols = encode_symbols(pr, msg);
  REQUIRE(symbols.size() == 3);
  CHECK(symbols[0] == 1);
  CHECK(symbols[1] == 0xffffffffull);
  CHECK(symbols[2] == 0x0302);  // zero-padded tail
  CHECK_THROWS(encode_symbols(pr, Bytes{1, 2}));
  CHECK_THROWS(EqualityParams::resolve(0, 1));
  CHECK_THROWS(EqualityParams::resolve(8, 0));
  CHECK_THROWS(EqualityParams::resolve(8, 5));  // t beyond the codeword
}

// independent power-sum evaluation
static uint64_t naive_eval(const field::PrimeField& f,
                           const std::vector<uint64_t>& coeffs, uint64_t x) {
  uint64_t acc = 0, xpow = 1;
  for (uint64_t c : coeffs) {
    acc = f.add(acc, f.mul(c, xpow));
    xpow = f.mul(xpow, x);
  }
  return acc;
}

TEST_CASE("codewords are the low-degree evaluations") {
  auto pr = EqualityParams::resolve(16, 4);  // K = 4
  field::PrimeField f = pr.fld();
  RandomStream rng(5);
  std::vector<uint64_t> symbols(pr.K);
  for (auto& s : symbols) s = rng.uniform_below(1ull << 32);
  auto word = codeword(pr, symbols);
  REQUIRE(word.size() == 8);
  for (size_t x = 0; x < word.size(); x++)
    CHECK(word[x] == naive_eval(f, symbols, uint64_t(x)));
  auto vals = symbols_at(pr, symbols, std::vector<uint64_t>{1, 5, 7});
  CHECK(vals == std::vector<uint64_t>{word[1], word[5], word[7]});
}

TEST_CASE("distinct messages agree on few coordinates") {
  auto pr = EqualityParams::resolve(32, 5);  // K = 8, codeword 16
  field::PrimeField f = pr.fld();
  RandomStream rng(21);
  std::vector<uint64_t> a(pr.K);
  for (auto& s : a) s = rng.uniform_below(1ull << 32);

  // one flipped byte: the difference is a monomial, vanishing only at 0
  auto b = a;
  b[3] ^= 0x100;
  auto wa = codeword(pr, a), wb = codeword(pr, b);
  size_t agree = 0;
  for (size_t x = 0; x < wa.size(); x++) agree += (wa[x] == wb[x]);
  CHECK(agree == 1);

  // worst case: difference with roots at 0..K-2 gives exactly K-1 agreements
  std::vector<uint64_t> diff{1};
  for (uint64_t root = 0; root + 1 < pr.K; root++) {
    std::vector<uint64_t> next(diff.size() + 1, 0);
    for (size_t k = 0; k < diff.size(); k++) {
      next[k + 1] = f.add(next[k + 1], diff[k]);
      next[k] = f.add(next[k], f.mul(f.neg(root), diff[k]));
    }
    diff = next;
  }
  REQUIRE(diff.size() == pr.K);
  std::vector<uint64_t> c(pr.K);
  for (size_t k = 0; k < pr.K; k++) c[k] = f.add(a[k], diff[k]);
  auto wc = codeword(pr, c);
  agree = 0;
  for (size_t x = 0; x < wa.size(); x++) agree += (wa[x] == wc[x]);
  CHECK(agree == pr.K - 1);
}

TEST_CASE("coordinate draws are t distinct sorted replayable points") {
  auto pr = EqualityParams::resolve(64, 4);
  SharedRandomness shared(42);
  auto coords = draw_coordinates(pr, shared, "eq-test");
  REQUIRE(coords.size() == 4);
  CHECK(std::is_sorted(coords.begin(), coords.end()));
  for (size_t k = 1; k < coords.size(); k++) CHECK(coords[k] != coords[k - 1]);
  for (uint64_t x : coords) CHECK(x < pr.codeword_len());
  CHECK(draw_coordinates(pr, shared, "eq-test") == coords);
  SharedRandomness replay(42);
  CHECK(draw_coordinates(pr, replay, "eq-test") == coords);
}

TEST_CASE("colorability property agrees with the graph decider") {
  ColorabilityProperty prop(3);
  RandomStream rng(14);
  for (int k = 0; k < 10; k++) {
    auto g = graph::gen_with_triangle(6, 0.5, rng);
    std::vector<uint8_t> adj(36, 0);
    for (size_t i = 0; i < 6; i++)
      for (size_t j = 0; j < 6; j++) adj[i * 6 + j] = g.adjacent(i, j);
    CHECK(prop.holds(6, adj) == graph::is_colorable(g, 3));
    auto w = graph::find_coloring(g, 3);
    if (w) {
      CHECK(prop.check(6, adj, *w));
      auto bad = *w;
      bad[0] = bad[1] = 0;
      if (g.adjacent(0, 1)) CHECK_FALSE(prop.check(6, adj, bad));
    }
  }
}

static NizkWitness honest_witness(const UniversalParams& pr,
                                  const graph::Configuration& g,
                                  RandomOracle& oracle,
                                  const std::vector<uint64_t>& prop_witness,
                                  std::vector<Digest>& matrix_out, uint64_t seed) {
  NizkWitness w;
  w.n = pr.n;
  w.adj = canonical_adjacency(pr, g);
  w.property_witness = prop_witness;
  RandomStream rng(seed);
  matrix_out.resize(pr.n * pr.n);
  w.openings.resize(pr.n * pr.n);
  for (size_t i = 0; i < pr.n; i++)
    for (size_t j = 0; j < pr.n; j++)
      matrix_out[i * pr.n + j] = commit(oracle, uint32_t(i), uint32_t(j),
                                        w.adj[i * pr.n + j], rng,
                                        w.openings[i * pr.n + j]);
  return w;
}

TEST_CASE("ideal backend proves valid witnesses and only those") {
  RandomStream grng(31);
  auto planted = graph::gen_planted_colorable(5, 3, 0.7, grng);
  auto pr = UniversalParams::resolve(planted.config);
  ColorabilityProperty prop(3);
  RandomOracle oracle(23);
  IdealNizkBackend backend(oracle, prop);

  std::vector<Digest> matrix;
  NizkWitness w = honest_witness(pr, planted.config, oracle, planted.coloring,
                                 matrix, 77);
  Bytes stmt = statement_bytes(pr.n, matrix);
  CHECK_FALSE(backend.verify(stmt, Bytes(32, 0)));  // nothing registered yet

  Bytes proof = backend.prove(stmt, w);
  CHECK(proof.size() == 32);
  CHECK(backend.verify(stmt, proof));
  Bytes other = proof;
  other[0] ^= 1;
  CHECK_FALSE(backend.verify(stmt, other));  // wrong token

  NizkWitness bad = w;
  bad.adj[1] ^= 1;  // opening no longer matches the statement
  CHECK_THROWS_AS(backend.prove(stmt, bad), WitnessInvalid);

  NizkWitness improper = w;
  improper.property_witness[0] = improper.property_witness[1];
  bool adjacent01 = planted.config.adjacent(0, 1);
  if (adjacent01) CHECK_THROWS_AS(backend.prove(stmt, improper), WitnessInvalid);

  Bytes sim_stmt = stmt;
  sim_stmt[4] ^= 1;  // a different statement
  Bytes sim = backend.simulate(sim_stmt);
  CHECK(backend.verify(sim_stmt, sim));  // simulation registers witness-free
}

TEST_CASE("universal certificates round-trip and reject truncation") {
  RandomStream grng(3);
  auto planted = graph::gen_planted_colorable(4, 3, 1.0, grng);
  auto pr = UniversalParams::resolve(planted.config);
  UniversalCert cert;
  cert.statement.assign(pr.statement_len(), 0x5a);
  cert.statement[0] = uint8_t(pr.n);
  cert.statement[1] = cert.statement[2] = cert.statement[3] = 0;
  cert.openings.resize(2 * pr.n);
  for (size_t k = 0; k < cert.openings.size(); k++) {
    cert.openings[k].bit = k & 1;
    cert.openings[k].randomness[0] = uint8_t(k);
  }
  cert.proof.assign(32, 0xcd);
  Bytes bytes = cert.serialize();
  CHECK(bytes.size() == pr.cert_len());
  auto back = UniversalCert::parse(pr, bytes);
  REQUIRE(back.has_value());
  CHECK(back->statement == cert.statement);
  CHECK(back->proof == cert.proof);
  CHECK(back->openings.size() == cert.openings.size());
  for (size_t k = 0; k < cert.openings.size(); k++) {
    CHECK(back->openings[k].bit == cert.openings[k].bit);
    CHECK(back->openings[k].randomness == cert.openings[k].randomness);
  }
  Bytes cut(bytes.begin(), bytes.end() - 1);
  CHECK_FALSE(UniversalCert::parse(pr, cut).has_value());
}

TEST_CASE("honest universal runs convince every node") {
  RandomStream grng(9);
  auto planted = graph::gen_planted_colorable(6, 3, 0.6, grng);
  auto pr = UniversalParams::resolve(planted.config);
  ColorabilityProperty prop(3);
  RandomOracle oracle(41);
  IdealNizkBackend backend(oracle, prop);
  UniversalProtocol p(pr, prop, oracle, backend);
  HonestStrategy s(pr, planted.coloring, oracle, backend, 19);
  for (uint64_t seed : {1, 2, 3}) {
    auto rr = engine::run(planted.config, p, s, seed);
    CHECK(rr.all_accept);
    for (size_t sz : rr.cert_sizes) CHECK(sz == pr.cert_len());
    for (size_t sz : rr.message_sizes[0]) CHECK(sz == pr.t * 8);
    for (const auto& v : rr.views) CHECK(view_verifies(pr, oracle, backend, v));
    auto tampered = rr.views[0];
    tampered.sigma[12 + 2] ^= 1;  // inside the statement
    CHECK_FALSE(view_verifies(pr, oracle, backend, tampered));
  }
}

TEST_CASE("dropping an edge is caught by its endpoints every time") {
  RandomStream grng(13);
  auto planted = graph::gen_planted_colorable(6, 3, 0.8, grng);
  auto pr = UniversalParams::resolve(planted.config);
  ColorabilityProperty prop(3);
  RandomOracle oracle(43);
  IdealNizkBackend backend(oracle, prop);
  UniversalProtocol p(pr, prop, oracle, backend);
  MissingEdgeStrategy s(pr, planted.coloring, oracle, backend, 7);
  auto [ra, rb] = s.dropped(planted.config);
  for (uint64_t seed : {1, 2, 3, 4, 5}) {
    auto rr = engine::run(planted.config, p, s, seed);
    CHECK_FALSE(rr.all_accept);
    size_t ua = 0, ub = 0;
    for (size_t u = 0; u < pr.n; u++) {
      if (pr.rank_of(planted.config.id(u)) == ra) ua = u;
      if (pr.rank_of(planted.config.id(u)) == rb) ub = u;
    }
    CHECK(rr.verdicts[ua] == engine::Verdict::reject);
    CHECK(rr.verdicts[ub] == engine::Verdict::reject);
  }
}

TEST_CASE("two matrices for one graph are flagged by the comparison") {
  RandomStream grng(15);
  auto planted = graph::gen_planted_colorable(6, 3, 0.7, grng);
  auto pr = UniversalParams::resolve(planted.config);
  ColorabilityProperty prop(3);
  RandomOracle oracle(47);
  IdealNizkBackend backend(oracle, prop);
  UniversalProtocol p(pr, prop, oracle, backend);
  InconsistentMatrixStrategy s(pr, planted.coloring, oracle, backend, 11);
  auto ts = engine::completeness_trial(planted.config, p, s, 200, 5);
  // different digests give near-random codewords; escapes need agreement
  // on every sampled coordinate, bounded by 2^-t = 1/8 per run
  CHECK(ts.accepted <= 45);
  CHECK(ts.accepted < ts.trials);
}

TEST_CASE("coalition simulation produces verifying views with true openings") {
  RandomStream grng(17);
  auto planted = graph::gen_planted_colorable(6, 3, 0.6, grng);
  const auto& g = planted.config;
  auto pr = UniversalParams::resolve(g);
  ColorabilityProperty prop(3);
  RandomOracle oracle(53);
  IdealNizkBackend backend(oracle, prop);

  std::vector<engine::LocalView> states;
  states.push_back(engine::make_local_view(g, 0));
  states.push_back(engine::make_local_view(g, 3));
  auto out = simulate_coalition(pr, oracle, backend, states, 31);
  REQUIRE(out.views.size() == 2);
  for (const auto& v : out.views) CHECK(view_verifies(pr, oracle, backend, v));

  // member openings carry the true incident bits
  for (size_t k = 0; k < out.views.size(); k++) {
    size_t u = (k == 0) ? 0 : 3;
    size_t ru = out.ranks[k];
    auto cert = UniversalCert::parse(pr, out.views[k].sigma);
    REQUIRE(cert.has_value());
    for (size_t j = 0; j < pr.n; j++) {
      size_t other = 0;
      for (size_t v = 0; v < pr.n; v++)
        if (pr.rank_of(g.id(v)) == j) other = v;
      CHECK(cert->openings[j].bit == (g.adjacent(u, other) ? 1 : 0));
      CHECK(cert->openings[pr.n + j].bit == (g.adjacent(other, u) ? 1 : 0));
    }
    (void)ru;
  }
}

#include "dnizk/universal.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace dnizk::universal {

using field::PrimeField;

Digest RandomOracle::query(std::span<const uint8_t> input) {
  std::lock_guard<std::mutex> hold(gate_);
  Bytes key(input.begin(), input.end());
  log_.push_back(key);
  auto it = table_.find(key);
  if (it != table_.end()) return it->second;
  Digest d = mix256(key_, input);
  table_.emplace(std::move(key), d);
  return d;
}

void RandomOracle::program(std::span<const uint8_t> input, const Digest& output) {
  std::lock_guard<std::mutex> hold(gate_);
  Bytes key(input.begin(), input.end());
  auto it = table_.find(key);
  if (it != table_.end()) {
    if (it->second != output)
      throw std::logic_error("oracle point already fixed differently");
    return;
  }
  table_.emplace(std::move(key), output);
}

// -------------------------------------------------------------------

Bytes commit_preimage(uint32_t i, uint32_t j, uint8_t bit,
                      std::span<const uint8_t> randomness) {
  if (randomness.size() != 16)
    throw std::invalid_argument("commitment randomness must be 16 bytes");
  Bytes pre;
  pre.push_back(0x01);
  wire::put_u32be(pre, i);
  wire::put_u32be(pre, j);
  pre.push_back(bit);
  pre.insert(pre.end(), randomness.begin(), randomness.end());
  return pre;
}

std::optional<CommitFields> decode_commit_preimage(std::span<const uint8_t> bytes) {
  if (bytes.size() != 26 || bytes[0] != 0x01) return std::nullopt;
  CommitFields f;
  for (int k = 0; k < 4; k++) {
    f.i = (f.i << 8) | bytes[1 + k];
    f.j = (f.j << 8) | bytes[5 + k];
  }
  f.bit = bytes[9];
  return f;
}

Digest commit(RandomOracle& oracle, uint32_t i, uint32_t j, uint8_t bit,
              RandomStream& rng, Opening& opening_out) {
  opening_out.bit = bit;
  rng.fill(opening_out.randomness);
  return oracle.query(commit_preimage(i, j, bit, opening_out.randomness));
}

bool open_verify(RandomOracle& oracle, const Digest& digest, uint32_t i, uint32_t j,
                 uint8_t bit, std::span<const uint8_t> randomness) {
  if (bit > 1 || randomness.size() != 16) return false;
  return oracle.query(commit_preimage(i, j, bit, randomness)) == digest;
}

// -------------------------------------------------------------------

EqualityParams EqualityParams::resolve(size_t msg_len, size_t t) {
  if (msg_len == 0) throw CodeParameterMismatch("empty message");
  EqualityParams pr;
  pr.msg_len = msg_len;
  pr.K = (msg_len + 3) / 4;
  pr.t = t;
  pr.q_rs = field::find_prime((uint64_t(1) << 32) + 1, (uint64_t(1) << 32) + 200);
  if (t == 0 || t > 2 * pr.K)
    throw CodeParameterMismatch("t=" + std::to_string(t) + " outside [1, " +
                                std::to_string(2 * pr.K) + "]");
  if (2 * pr.K >= pr.q_rs) throw CodeParameterMismatch("message too long for the code field");
  return pr;
}

std::vector<uint64_t> encode_symbols(const EqualityParams& pr,
                                     std::span<const uint8_t> msg) {
  if (msg.size() != pr.msg_len)
    throw CodeParameterMismatch("message length " + std::to_string(msg.size()) +
                                ", code expects " + std::to_string(pr.msg_len));
  std::vector<uint64_t> symbols(pr.K, 0);
  for (size_t b = 0; b < msg.size(); b++)
    symbols[b / 4] |= uint64_t(msg[b]) << (8 * (b % 4));
  return symbols;
}

static uint64_t horner(const PrimeField& f, std::span<const uint64_t> coeffs,
                       uint64_t x) {
  uint64_t acc = 0;
  for (size_t k = coeffs.size(); k > 0; k--) acc = f.add(f.mul(acc, x), coeffs[k - 1]);
  return acc;
}

std::vector<uint64_t> codeword(const EqualityParams& pr,
                               std::span<const uint64_t> symbols) {
  if (symbols.size() != pr.K) throw CodeParameterMismatch("symbol count mismatch");
  PrimeField f = pr.fld();
  std::vector<uint64_t> word(pr.codeword_len());
  for (size_t x = 0; x < word.size(); x++) word[x] = horner(f, symbols, x);
  return word;
}

std::vector<uint64_t> draw_coordinates(const EqualityParams& pr,
                                       const SharedRandomness& shared,
                                       std::string_view label) {
  RandomStream s = shared.stream(label);
  std::set<uint64_t> picked;
  while (picked.size() < pr.t) picked.insert(s.uniform_below(pr.codeword_len()));
  return {picked.begin(), picked.end()};
}

std::vector<uint64_t> symbols_at(const EqualityParams& pr,
                                 std::span<const uint64_t> symbols,
                                 std::span<const uint64_t> coords) {
  if (symbols.size() != pr.K) throw CodeParameterMismatch("symbol count mismatch");
  PrimeField f = pr.fld();
  std::vector<uint64_t> vals;
  vals.reserve(coords.size());
  for (uint64_t x : coords) vals.push_back(horner(f, symbols, x));
  return vals;
}

// -------------------------------------------------------------------

std::string ColorabilityProperty::name() const {
  return std::to_string(c_) + "-colorable";
}

bool ColorabilityProperty::check(size_t n, const std::vector<uint8_t>& adj,
                                 const std::vector<uint64_t>& witness) const {
  if (adj.size() != n * n || witness.size() != n) return false;
  for (uint64_t col : witness)
    if (col >= c_) return false;
  for (size_t i = 0; i < n; i++)
    for (size_t j = i + 1; j < n; j++)
      if (adj[i * n + j] && witness[i] == witness[j]) return false;
  return true;
}

bool ColorabilityProperty::holds(size_t n, const std::vector<uint8_t>& adj) const {
  if (adj.size() != n * n) return false;
  std::vector<uint64_t> col(n, 0);
  size_t u = 0;
  // backtracking over color assignments in node order
  while (true) {
    if (u == n) return true;
    bool ok = false;
    for (; col[u] < c_; col[u]++) {
      ok = true;
      for (size_t v = 0; v < u; v++)
        if (adj[u * n + v] && col[v] == col[u]) {
          ok = false;
          break;
        }
      if (ok) break;
    }
    if (ok) {
      u++;
      if (u < n) col[u] = 0;
      continue;
    }
    if (u == 0) return false;
    u--;
    col[u]++;
  }
}

// -------------------------------------------------------------------

Bytes IdealNizkBackend::token(const Bytes& statement) {
  Bytes pre;
  pre.push_back(0x02);
  pre.insert(pre.end(), statement.begin(), statement.end());
  Digest d = oracle_.query(pre);
  return Bytes(d.begin(), d.end());
}

Bytes IdealNizkBackend::prove(const Bytes& statement, const NizkWitness& w) {
  const size_t n = w.n;
  if (w.adj.size() != n * n || w.openings.size() != n * n)
    throw WitnessInvalid("witness shape mismatch");
  if (statement.size() != 4 + 32 * n * n)
    throw WitnessInvalid("statement length mismatch");
  uint32_t hdr = 0;
  for (int k = 0; k < 4; k++) hdr |= uint32_t(statement[k]) << (8 * k);
  if (hdr != n) throw WitnessInvalid("statement node count mismatch");
  for (size_t i = 0; i < n; i++)
    for (size_t j = 0; j < n; j++) {
      uint8_t bit = w.adj[i * n + j];
      if (bit > 1 || w.adj[i * n + j] != w.adj[j * n + i] || (i == j && bit))
        throw WitnessInvalid("committed matrix is not a graph");
      const Opening& op = w.openings[i * n + j];
      if (op.bit != bit) throw WitnessInvalid("opening bit mismatch");
      Digest d = oracle_.query(commit_preimage(uint32_t(i), uint32_t(j), bit,
                                               op.randomness));
      if (!std::equal(d.begin(), d.end(), statement.begin() + 4 + 32 * (i * n + j)))
        throw WitnessInvalid("opening does not recompute the statement");
    }
  if (!property_.check(n, w.adj, w.property_witness))
    throw WitnessInvalid("property witness rejected");
  registered_.insert(statement);
  return token(statement);
}

bool IdealNizkBackend::verify(const Bytes& statement, std::span<const uint8_t> proof) {
  if (proof.size() != 32 || !registered_.count(statement)) return false;
  Bytes t = token(statement);
  return std::equal(t.begin(), t.end(), proof.begin());
}

Bytes IdealNizkBackend::simulate(const Bytes& statement) {
  registered_.insert(statement);
  return token(statement);
}

// -------------------------------------------------------------------

UniversalParams UniversalParams::resolve(const graph::Configuration& g,
                                         std::optional<size_t> t_override) {
  if (g.kt0())
    throw std::invalid_argument("the compiled protocol needs neighbor identifiers");
  UniversalParams pr;
  pr.n = g.n();
  pr.sorted_ids = g.ids();
  std::sort(pr.sorted_ids.begin(), pr.sorted_ids.end());
  pr.t = t_override ? *t_override : size_t(std::bit_width(uint64_t(pr.n - 1)));
  pr.code = EqualityParams::resolve(pr.statement_len(), pr.t);
  return pr;
}

size_t UniversalParams::rank_of(uint64_t id) const {
  auto it = std::lower_bound(sorted_ids.begin(), sorted_ids.end(), id);
  if (it == sorted_ids.end() || *it != id)
    throw std::out_of_range("identifier " + std::to_string(id) + " not in table");
  return size_t(it - sorted_ids.begin());
}

Bytes statement_bytes(size_t n, const std::vector<Digest>& matrix) {
  Bytes out;
  wire::put_u32(out, uint32_t(n));
  for (const Digest& d : matrix) out.insert(out.end(), d.begin(), d.end());
  return out;
}

std::optional<std::vector<Digest>> statement_matrix(const UniversalParams& pr,
                                                    std::span<const uint8_t> statement) {
  if (statement.size() != pr.statement_len()) return std::nullopt;
  uint32_t hdr = 0;
  for (int k = 0; k < 4; k++) hdr |= uint32_t(statement[k]) << (8 * k);
  if (hdr != pr.n) return std::nullopt;
  std::vector<Digest> matrix(pr.n * pr.n);
  for (size_t k = 0; k < matrix.size(); k++)
    std::copy_n(statement.begin() + 4 + 32 * k, 32, matrix[k].begin());
  return matrix;
}

std::vector<uint8_t> canonical_adjacency(const UniversalParams& pr,
                                         const graph::Configuration& g) {
  std::vector<uint8_t> adj(pr.n * pr.n, 0);
  for (size_t u = 0; u < g.n(); u++) {
    size_t ru = pr.rank_of(g.id(u));
    for (size_t v : g.ports(u)) adj[ru * pr.n + pr.rank_of(g.id(v))] = 1;
  }
  return adj;
}

Bytes UniversalCert::serialize() const {
  Bytes out;
  wire::put_u32(out, uint32_t(statement.size()));
  out.insert(out.end(), statement.begin(), statement.end());
  wire::put_u32(out, uint32_t(openings.size() * 17));
  for (const Opening& op : openings) {
    out.push_back(op.bit);
    out.insert(out.end(), op.randomness.begin(), op.randomness.end());
  }
  wire::put_u32(out, uint32_t(proof.size()));
  out.insert(out.end(), proof.begin(), proof.end());
  return out;
}

std::optional<UniversalCert> UniversalCert::parse(const UniversalParams& pr,
                                                  std::span<const uint8_t> bytes) {
  auto read_len = [&](size_t at) -> uint32_t {
    uint32_t v = 0;
    for (int k = 0; k < 4; k++) v |= uint32_t(bytes[at + k]) << (8 * k);
    return v;
  };
  if (bytes.size() != pr.cert_len()) return std::nullopt;
  size_t off = 0;
  if (read_len(off) != pr.statement_len()) return std::nullopt;
  off += 4;
  UniversalCert cert;
  cert.statement.assign(bytes.begin() + off, bytes.begin() + off + pr.statement_len());
  off += pr.statement_len();
  if (read_len(off) != 34 * pr.n) return std::nullopt;
  off += 4;
  for (size_t k = 0; k < 2 * pr.n; k++) {
    Opening op;
    op.bit = bytes[off];
    if (op.bit > 1) return std::nullopt;
    std::copy_n(bytes.begin() + off + 1, 16, op.randomness.begin());
    cert.openings.push_back(op);
    off += 17;
  }
  if (read_len(off) != 32) return std::nullopt;
  off += 4;
  cert.proof.assign(bytes.begin() + off, bytes.begin() + off + 32);
  return cert;
}

bool UniversalProtocol::in_language(const graph::Configuration& g) const {
  return property_.holds(pr_.n, canonical_adjacency(pr_, g));
}

Bytes UniversalProtocol::node_send(const engine::NodeCtx& ctx, int, size_t) const {
  auto cert = UniversalCert::parse(pr_, *ctx.sigma);
  if (!cert) return {};
  auto coords = draw_coordinates(pr_.code, *ctx.shared, "universal/eq");
  auto symbols = encode_symbols(pr_.code, cert->statement);
  return wire::pack_words(symbols_at(pr_.code, symbols, coords));
}

// The three checks a node runs, shared between the live protocol and
// view replay.
static bool checks_pass(const UniversalParams& pr, RandomOracle& oracle,
                        NizkBackend& backend, const engine::LocalView& local,
                        const UniversalCert& cert,
                        const std::vector<uint64_t>& coords,
                        const std::vector<Bytes>& received) {
  auto matrix = statement_matrix(pr, cert.statement);
  if (!matrix) return false;
  size_t ru = 0;
  std::set<size_t> nbr;
  try {
    ru = pr.rank_of(local.id);
    for (uint64_t id : local.neighbor_ids) nbr.insert(pr.rank_of(id));
  } catch (const std::out_of_range&) {
    return false;
  }
  for (size_t j = 0; j < pr.n; j++) {
    uint8_t expect = nbr.count(j) ? 1 : 0;
    const Opening& row = cert.openings[j];
    const Opening& col = cert.openings[pr.n + j];
    if (row.bit != expect || col.bit != expect) return false;
    if (!open_verify(oracle, (*matrix)[ru * pr.n + j], uint32_t(ru), uint32_t(j),
                     row.bit, row.randomness))
      return false;
    if (!open_verify(oracle, (*matrix)[j * pr.n + ru], uint32_t(j), uint32_t(ru),
                     col.bit, col.randomness))
      return false;
  }
  if (!backend.verify(cert.statement, cert.proof)) return false;

  auto symbols = encode_symbols(pr.code, cert.statement);
  auto own = symbols_at(pr.code, symbols, coords);
  if (received.size() != local.degree) return false;
  for (const Bytes& msg : received) {
    auto got = wire::parse_words(msg, pr.t, pr.code.q_rs);
    if (!got || *got != own) return false;
  }
  return true;
}

engine::Verdict UniversalProtocol::node_verify(const engine::NodeCtx& ctx) const {
  auto cert = UniversalCert::parse(pr_, *ctx.sigma);
  if (!cert) return engine::Verdict::reject;
  auto coords = draw_coordinates(pr_.code, *ctx.shared, "universal/eq");
  return checks_pass(pr_, oracle_, backend_, ctx.local, *cert, coords,
                     (*ctx.received)[0])
             ? engine::Verdict::accept
             : engine::Verdict::reject;
}

std::vector<uint64_t> UniversalProtocol::drawn_randomness(
    const engine::NodeCtx& ctx) const {
  return draw_coordinates(pr_.code, *ctx.shared, "universal/eq");
}

bool view_verifies(const UniversalParams& pr, RandomOracle& oracle,
                   NizkBackend& backend, const engine::View& w) {
  auto cert = UniversalCert::parse(pr, w.sigma);
  if (!cert) return false;
  return checks_pass(pr, oracle, backend, w.state, *cert, w.randomness,
                     w.received.at(0));
}

// -------------------------------------------------------------------

struct CommittedMatrix {
  std::vector<Digest> digests;
  std::vector<Opening> openings;
  Bytes statement;
};

static CommittedMatrix commit_matrix(const UniversalParams& pr, RandomOracle& oracle,
                                     const std::vector<uint8_t>& adj,
                                     RandomStream& rng) {
  CommittedMatrix m;
  m.digests.resize(pr.n * pr.n);
  m.openings.resize(pr.n * pr.n);
  for (size_t i = 0; i < pr.n; i++)
    for (size_t j = 0; j < pr.n; j++) {
      size_t k = i * pr.n + j;
      m.digests[k] = commit(oracle, uint32_t(i), uint32_t(j), adj[k], rng,
                            m.openings[k]);
    }
  m.statement = statement_bytes(pr.n, m.digests);
  return m;
}

static Bytes cert_for_rank(const UniversalParams& pr, const CommittedMatrix& m,
                           const Bytes& proof, size_t ru) {
  UniversalCert cert;
  cert.statement = m.statement;
  for (size_t j = 0; j < pr.n; j++) cert.openings.push_back(m.openings[ru * pr.n + j]);
  for (size_t i = 0; i < pr.n; i++) cert.openings.push_back(m.openings[i * pr.n + ru]);
  cert.proof = proof;
  return cert.serialize();
}

std::vector<Bytes> HonestStrategy::certificates(const graph::Configuration& g) const {
  RandomStream rng(label_key(seed_, "merlin"));
  std::vector<uint8_t> adj = canonical_adjacency(pr_, g);
  CommittedMatrix m = commit_matrix(pr_, oracle_, adj, rng);
  Bytes proof = backend_.prove(m.statement, {pr_.n, adj, m.openings, witness_});
  std::vector<Bytes> out;
  for (size_t u = 0; u < g.n(); u++)
    out.push_back(cert_for_rank(pr_, m, proof, pr_.rank_of(g.id(u))));
  return out;
}

std::vector<Bytes> InconsistentMatrixStrategy::certificates(
    const graph::Configuration& g) const {
  RandomStream rng_a(label_key(seed_, "matrix-a"));
  RandomStream rng_b(label_key(seed_, "matrix-b"));
  std::vector<uint8_t> adj = canonical_adjacency(pr_, g);
  CommittedMatrix a = commit_matrix(pr_, oracle_, adj, rng_a);
  CommittedMatrix b = commit_matrix(pr_, oracle_, adj, rng_b);
  Bytes proof_a = backend_.prove(a.statement, {pr_.n, adj, a.openings, witness_});
  Bytes proof_b = backend_.prove(b.statement, {pr_.n, adj, b.openings, witness_});
  std::vector<Bytes> out;
  for (size_t u = 0; u < g.n(); u++) {
    const CommittedMatrix& m = u == 0 ? a : b;
    out.push_back(cert_for_rank(pr_, m, u == 0 ? proof_a : proof_b,
                                pr_.rank_of(g.id(u))));
  }
  return out;
}

std::pair<size_t, size_t> MissingEdgeStrategy::dropped(
    const graph::Configuration& g) const {
  std::vector<uint8_t> adj = canonical_adjacency(pr_, g);
  for (size_t i = 0; i < pr_.n; i++)
    for (size_t j = i + 1; j < pr_.n; j++)
      if (adj[i * pr_.n + j]) return {i, j};
  throw std::logic_error("edgeless configuration");
}

std::vector<Bytes> MissingEdgeStrategy::certificates(
    const graph::Configuration& g) const {
  RandomStream rng(label_key(seed_, "merlin"));
  std::vector<uint8_t> adj = canonical_adjacency(pr_, g);
  auto [i, j] = dropped(g);
  adj[i * pr_.n + j] = adj[j * pr_.n + i] = 0;
  CommittedMatrix m = commit_matrix(pr_, oracle_, adj, rng);
  Bytes proof = backend_.prove(m.statement, {pr_.n, adj, m.openings, witness_});
  std::vector<Bytes> out;
  for (size_t u = 0; u < g.n(); u++)
    out.push_back(cert_for_rank(pr_, m, proof, pr_.rank_of(g.id(u))));
  return out;
}

// -------------------------------------------------------------------

CoalitionOutput simulate_coalition(const UniversalParams& pr, RandomOracle& oracle,
                                   NizkBackend& backend,
                                   const std::vector<engine::LocalView>& states,
                                   uint64_t seed) {
  RandomStream rng(label_key(seed, "coalition-sim"));
  std::set<size_t> members;
  // adjacency known to the coalition: bit or absent
  std::map<std::pair<size_t, size_t>, uint8_t> known;
  CoalitionOutput out;
  for (const engine::LocalView& st : states) {
    size_t r = pr.rank_of(st.id);
    members.insert(r);
    out.ranks.push_back(r);
    std::set<size_t> nbr;
    for (uint64_t id : st.neighbor_ids) nbr.insert(pr.rank_of(id));
    for (size_t j = 0; j < pr.n; j++) {
      uint8_t bit = nbr.count(j) ? 1 : 0;
      known[{r, j}] = bit;
      known[{j, r}] = bit;
    }
  }

  CommittedMatrix m;
  m.digests.resize(pr.n * pr.n);
  m.openings.resize(pr.n * pr.n);
  for (size_t i = 0; i < pr.n; i++)
    for (size_t j = 0; j < pr.n; j++) {
      size_t k = i * pr.n + j;
      uint8_t bit = 0;  // pairs away from the coalition commit to 0
      if (auto it = known.find({i, j}); it != known.end()) bit = it->second;
      if (i == j) bit = 0;
      m.digests[k] = commit(oracle, uint32_t(i), uint32_t(j), bit, rng,
                            m.openings[k]);
    }
  m.statement = statement_bytes(pr.n, m.digests);
  Bytes proof = backend.simulate(m.statement);

  SharedRandomness sim_shared(label_key(seed, "sim-shared"));
  auto coords = draw_coordinates(pr.code, sim_shared, "universal/eq");
  auto values = wire::pack_words(
      symbols_at(pr.code, encode_symbols(pr.code, m.statement), coords));

  for (size_t k = 0; k < states.size(); k++) {
    engine::View w;
    w.state = states[k];
    w.seed = seed;
    w.randomness = coords;
    w.sigma = cert_for_rank(pr, m, proof, out.ranks[k]);
    w.received.assign(1, std::vector<Bytes>(states[k].degree, values));
    out.views.push_back(std::move(w));
  }
  return out;
}

}  // namespace dnizk::universal

#pragma once

#include <array>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "dnizk/engine.hpp"
#include "dnizk/field.hpp"
#include "dnizk/graph.hpp"

namespace dnizk::universal {

struct WitnessInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CodeParameterMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Digest = std::array<uint8_t, 32>;

// Memoized uniform function: a fresh query draws its answer from a keyed
// stream, a repeated query replays the table.  Entries can be
// pre-programmed, and every query is logged; the log is what the
// zero-knowledge tests inspect.
class RandomOracle {
 public:
  explicit RandomOracle(uint64_t key) : key_(key) {}

  Digest query(std::span<const uint8_t> input);
  // Pin input -> output before anything queries it.
  void program(std::span<const uint8_t> input, const Digest& output);

  const std::vector<Bytes>& log() const { return log_; }
  void clear_log() { log_.clear(); }
  const std::map<Bytes, Digest>& table() const { return table_; }

 private:
  uint64_t key_;
  std::map<Bytes, Digest> table_;
  std::vector<Bytes> log_;
  std::mutex gate_;  // queries serialize; everything else is ours alone
};

// -------------------------------------------------------------------
// bit commitments

struct Opening {
  uint8_t bit = 0;
  std::array<uint8_t, 16> randomness{};
};

// tag 0x01 | i | j (4-byte big-endian each) | bit | 16 randomness bytes
Bytes commit_preimage(uint32_t i, uint32_t j, uint8_t bit,
                      std::span<const uint8_t> randomness);
struct CommitFields {
  uint32_t i = 0, j = 0;
  uint8_t bit = 0;
};
std::optional<CommitFields> decode_commit_preimage(std::span<const uint8_t> bytes);

Digest commit(RandomOracle& oracle, uint32_t i, uint32_t j, uint8_t bit,
              RandomStream& rng, Opening& opening_out);
bool open_verify(RandomOracle& oracle, const Digest& digest, uint32_t i, uint32_t j,
                 uint8_t bit, std::span<const uint8_t> randomness);

// -------------------------------------------------------------------
// equality over a rate-1/2 Reed-Solomon code

// Messages split into K four-byte symbols, read as coefficients over a
// prime field just above 2^32 and evaluated at the points [2K]; shared
// randomness picks t distinct coordinates and neighbors compare values
// there.  Unequal messages agree on at most K-1 coordinates.
struct EqualityParams {
  size_t msg_len = 0;  // bytes; fixed across all parties
  size_t K = 0;
  size_t t = 0;
  uint64_t q_rs = 0;

  static EqualityParams resolve(size_t msg_len, size_t t);

  field::PrimeField fld() const { return field::PrimeField(q_rs); }
  size_t codeword_len() const { return 2 * K; }
};

// Four LE bytes per symbol, zero-padded tail.
std::vector<uint64_t> encode_symbols(const EqualityParams& pr,
                                     std::span<const uint8_t> msg);
std::vector<uint64_t> codeword(const EqualityParams& pr,
                               std::span<const uint64_t> symbols);
// t distinct coordinates in [2K], ascending.
std::vector<uint64_t> draw_coordinates(const EqualityParams& pr,
                                       const SharedRandomness& shared,
                                       std::string_view label);
std::vector<uint64_t> symbols_at(const EqualityParams& pr,
                                 std::span<const uint64_t> symbols,
                                 std::span<const uint64_t> coords);

// -------------------------------------------------------------------
// the NP property being certified

class GraphProperty {
 public:
  virtual ~GraphProperty() = default;
  virtual std::string name() const = 0;
  // adj is a row-major n x n 0/1 matrix.
  virtual bool check(size_t n, const std::vector<uint8_t>& adj,
                     const std::vector<uint64_t>& witness) const = 0;
  virtual bool holds(size_t n, const std::vector<uint8_t>& adj) const = 0;
};

class ColorabilityProperty final : public GraphProperty {
 public:
  explicit ColorabilityProperty(uint64_t colors = 3) : c_(colors) {}
  std::string name() const override;
  bool check(size_t n, const std::vector<uint8_t>& adj,
             const std::vector<uint64_t>& witness) const override;
  bool holds(size_t n, const std::vector<uint8_t>& adj) const override;

 private:
  uint64_t c_;
};

// -------------------------------------------------------------------
// proof backend

struct NizkWitness {
  size_t n = 0;
  std::vector<uint8_t> adj;        // the committed matrix in the clear
  std::vector<Opening> openings;   // n*n, row-major
  std::vector<uint64_t> property_witness;
};

class NizkBackend {
 public:
  virtual ~NizkBackend() = default;
  virtual Bytes prove(const Bytes& statement, const NizkWitness& witness) = 0;
  virtual bool verify(const Bytes& statement, std::span<const uint8_t> proof) = 0;
  virtual Bytes simulate(const Bytes& statement) = 0;
};

// Ideal functionality: prove checks the witness (openings recompute the
// statement digests, the matrix is a graph with the property), registers
// the statement, and tokens it through the oracle; verify accepts iff
// registered with a matching token; simulate registers witness-free.
class IdealNizkBackend final : public NizkBackend {
 public:
  IdealNizkBackend(RandomOracle& oracle, const GraphProperty& property)
      : oracle_(oracle), property_(property) {}

  Bytes prove(const Bytes& statement, const NizkWitness& witness) override;
  bool verify(const Bytes& statement, std::span<const uint8_t> proof) override;
  Bytes simulate(const Bytes& statement) override;

 private:
  Bytes token(const Bytes& statement);
  RandomOracle& oracle_;
  const GraphProperty& property_;
  std::set<Bytes> registered_;
};

// -------------------------------------------------------------------
// the compiled protocol

// The prover commits to the whole adjacency matrix (ordered pairs, zero
// diagonal), hands every node the matrix, the openings of its own row
// and column, and one proof that the committed graph has the property.
// A node accepts iff its openings recompute and match its true
// neighborhood, the proof verifies, and the equality comparison of the
// matrix with each neighbor passes.
struct UniversalParams {
  size_t n = 0;
  size_t t = 0;  // equality coordinates; default ceil(log2 n)
  EqualityParams code;
  std::vector<uint64_t> sorted_ids;  // canonical ordering = ascending id

  static UniversalParams resolve(const graph::Configuration& g,
                                 std::optional<size_t> t_override = std::nullopt);

  size_t rank_of(uint64_t id) const;
  size_t statement_len() const { return 4 + 32 * n * n; }
  size_t cert_len() const { return 12 + statement_len() + 34 * n + 32; }
};

struct UniversalCert {
  Bytes statement;                // u32 n | n^2 digests
  std::vector<Opening> openings;  // row of the holder, then its column
  Bytes proof;

  Bytes serialize() const;
  static std::optional<UniversalCert> parse(const UniversalParams& pr,
                                            std::span<const uint8_t> bytes);
};

Bytes statement_bytes(size_t n, const std::vector<Digest>& matrix);
std::optional<std::vector<Digest>> statement_matrix(const UniversalParams& pr,
                                                    std::span<const uint8_t> statement);

// Row-major adjacency bits of the configuration under the canonical
// ordering.
std::vector<uint8_t> canonical_adjacency(const UniversalParams& pr,
                                         const graph::Configuration& g);

class UniversalProtocol final : public engine::Protocol {
 public:
  UniversalProtocol(UniversalParams pr, const GraphProperty& property,
                    RandomOracle& oracle, NizkBackend& backend)
      : pr_(std::move(pr)), property_(property), oracle_(oracle), backend_(backend) {}
  const UniversalParams& params() const { return pr_; }

  std::string name() const override { return "universal"; }
  size_t node_count() const override { return pr_.n; }
  size_t cert_bytes() const override { return pr_.cert_len(); }
  size_t message_bytes(int) const override { return pr_.t * 8; }
  bool in_language(const graph::Configuration& g) const override;
  Bytes node_send(const engine::NodeCtx& ctx, int round, size_t port) const override;
  engine::Verdict node_verify(const engine::NodeCtx& ctx) const override;
  std::vector<uint64_t> drawn_randomness(const engine::NodeCtx& ctx) const override;

 private:
  UniversalParams pr_;
  const GraphProperty& property_;
  RandomOracle& oracle_;
  NizkBackend& backend_;
};

// All checks of node_verify applied to a recorded view; what the
// simulator's output is tested against.
bool view_verifies(const UniversalParams& pr, RandomOracle& oracle,
                   NizkBackend& backend, const engine::View& w);

class HonestStrategy final : public engine::ProverStrategy {
 public:
  HonestStrategy(UniversalParams pr, std::vector<uint64_t> property_witness,
                 RandomOracle& oracle, NizkBackend& backend, uint64_t seed)
      : pr_(std::move(pr)), witness_(std::move(property_witness)), oracle_(oracle),
        backend_(backend), seed_(seed) {}
  std::string name() const override { return "honest"; }
  bool honest() const override { return true; }
  std::vector<Bytes> certificates(const graph::Configuration& g) const override;

 private:
  UniversalParams pr_;
  std::vector<uint64_t> witness_;
  RandomOracle& oracle_;
  NizkBackend& backend_;
  uint64_t seed_;
};

// Two commitment matrices over the same true graph (fresh randomness),
// both proven; node 0 gets one, everybody else the other.  Openings and
// proofs all check out, so only the equality comparison can object.
class InconsistentMatrixStrategy final : public engine::ProverStrategy {
 public:
  InconsistentMatrixStrategy(UniversalParams pr, std::vector<uint64_t> property_witness,
                             RandomOracle& oracle, NizkBackend& backend, uint64_t seed)
      : pr_(std::move(pr)), witness_(std::move(property_witness)), oracle_(oracle),
        backend_(backend), seed_(seed) {}
  std::string name() const override { return "inconsistent-matrix"; }
  bool honest() const override { return false; }
  std::vector<Bytes> certificates(const graph::Configuration& g) const override;

 private:
  UniversalParams pr_;
  std::vector<uint64_t> witness_;
  RandomOracle& oracle_;
  NizkBackend& backend_;
  uint64_t seed_;
};

// Commits to the graph minus one edge.  The doctored matrix still has
// the property, so the proof goes through; the dropped edge's endpoints
// see an opened 0 where they know a neighbor, and reject every time.
class MissingEdgeStrategy final : public engine::ProverStrategy {
 public:
  MissingEdgeStrategy(UniversalParams pr, std::vector<uint64_t> property_witness,
                      RandomOracle& oracle, NizkBackend& backend, uint64_t seed)
      : pr_(std::move(pr)), witness_(std::move(property_witness)), oracle_(oracle),
        backend_(backend), seed_(seed) {}
  std::string name() const override { return "missing-edge"; }
  bool honest() const override { return false; }
  std::vector<Bytes> certificates(const graph::Configuration& g) const override;
  // Endpoints of the dropped edge, in canonical rank space.
  std::pair<size_t, size_t> dropped(const graph::Configuration& g) const;

 private:
  UniversalParams pr_;
  std::vector<uint64_t> witness_;
  RandomOracle& oracle_;
  NizkBackend& backend_;
  uint64_t seed_;
};

// -------------------------------------------------------------------
// coalition simulator

// Builds one matrix committing true bits for pairs touching the
// coalition and 0 elsewhere, simulates the proof, and assembles each
// member's view; it never holds a witness and never feeds a
// non-coalition edge's true bit to the oracle.
struct CoalitionOutput {
  std::vector<size_t> ranks;         // coalition members, canonical order
  std::vector<engine::View> views;   // aligned with ranks
};

CoalitionOutput simulate_coalition(const UniversalParams& pr, RandomOracle& oracle,
                                   NizkBackend& backend,
                                   const std::vector<engine::LocalView>& states,
                                   uint64_t seed);

}  // namespace dnizk::universal

#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dnizk/graph.hpp"
#include "dnizk/rng.hpp"
#include "dnizk/wire.hpp"

namespace dnizk::engine {

struct ProtocolParameterMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MessageSizeViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PositiveInstanceSupplied : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotEnumerable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Verdict : uint8_t { reject = 0, accept = 1 };

// What a node may read about itself.  id and neighbor_ids are zeroed /
// empty when the knowledge model hides them.
struct LocalView {
  size_t n = 0;
  size_t index = 0;  // engine bookkeeping; protocols must not key logic on it
  uint64_t id = 0;
  std::vector<uint64_t> neighbor_ids;
  size_t degree = 0;
};

struct NodeCtx {
  LocalView local;
  const Bytes* sigma = nullptr;
  const SharedRandomness* shared = nullptr;
  uint64_t private_seed = 0;  // set when the protocol uses private randomness
  // received[round][port]
  const std::vector<std::vector<Bytes>>* received = nullptr;
};

class Protocol {
 public:
  virtual ~Protocol() = default;
  virtual std::string name() const = 0;
  virtual size_t node_count() const = 0;
  virtual int rounds() const { return 1; }
  virtual bool uses_private_randomness() const { return false; }
  virtual size_t cert_bytes() const = 0;
  // Honest certificate size for a node of the given degree; protocols
  // whose certificates carry per-neighbor data override this.
  virtual size_t cert_bytes_for(size_t degree) const;
  virtual size_t message_bytes(int round) const = 0;

  // True when the only shared draw is one challenge point in
  // [challenge_lo, challenge_hi).
  virtual bool enumerable_challenge() const { return false; }
  virtual uint64_t challenge_lo() const { return 0; }
  virtual uint64_t challenge_hi() const { return 0; }

  virtual bool in_language(const graph::Configuration& g) const = 0;

  virtual Bytes node_send(const NodeCtx& ctx, int round, size_t port) const = 0;
  virtual Verdict node_verify(const NodeCtx& ctx) const = 0;
  // Shared values the node consumed, for the recorded view.
  virtual std::vector<uint64_t> drawn_randomness(const NodeCtx& ctx) const;
};

class ProverStrategy {
 public:
  virtual ~ProverStrategy() = default;
  virtual std::string name() const = 0;
  virtual bool honest() const = 0;
  // Phase 1: runs before any shared randomness exists.  Must be a pure
  // function of the configuration and the strategy's own seed.
  virtual std::vector<Bytes> certificates(const graph::Configuration& g) const = 0;
};

// Everything node v sees in a run: its state, the randomness it
// consumed, its certificate, and the messages it received.
struct View {
  LocalView state;
  uint64_t seed = 0;
  std::vector<uint64_t> randomness;
  Bytes sigma;
  std::vector<std::vector<Bytes>> received;  // [round][port]
};

struct RunResult {
  std::string protocol;
  uint64_t seed = 0;
  std::vector<Verdict> verdicts;
  bool all_accept = false;
  std::vector<size_t> cert_sizes;
  // message_sizes[round][k] for directed edges enumerated as (u asc, port asc)
  std::vector<std::vector<size_t>> message_sizes;
  std::vector<View> views;

  nlohmann::json to_json(bool include_views = false) const;
};

RunResult run(const graph::Configuration& g, const Protocol& p,
              const ProverStrategy& s, uint64_t seed);

struct TrialStats {
  uint64_t trials = 0;
  uint64_t accepted = 0;  // runs where every node accepted
  double frequency() const { return trials ? double(accepted) / double(trials) : 0.0; }
};

// Certificates fixed once from the strategy; shared randomness fresh per
// trial.  Requires a negative instance.
TrialStats soundness_trial(const graph::Configuration& g, const Protocol& p,
                           const ProverStrategy& s, uint64_t trials, uint64_t seed);

TrialStats completeness_trial(const graph::Configuration& g, const Protocol& p,
                              const ProverStrategy& s, uint64_t trials,
                              uint64_t seed);

struct ExactSoundness {
  uint64_t denominator = 0;      // admissible challenge count
  uint64_t accept_count = 0;     // challenges on which every node accepts
  std::vector<uint64_t> node_accept_count;
  double probability() const {
    return denominator ? double(accept_count) / double(denominator) : 0.0;
  }
};

// Enumerates every admissible challenge point.  NotEnumerable when the
// protocol draws anything else from the shared tape.
ExactSoundness exact_soundness(const graph::Configuration& g, const Protocol& p,
                               const ProverStrategy& s);

size_t thread_budget();  // DNIZK_THREADS, default 1

// The node-local slice of a configuration, as the run would hand it to
// the protocol.  Simulators take this as their only graph knowledge.
LocalView make_local_view(const graph::Configuration& g, size_t u);

}  // namespace dnizk::engine

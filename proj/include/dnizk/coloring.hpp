#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "dnizk/engine.hpp"
#include "dnizk/field.hpp"
#include "dnizk/graph.hpp"

namespace dnizk::coloring {

struct ImproperWitness : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Proof of c-colorability.  Each node u holds a degree-c polynomial C_u
// that is 1 at its color, 0 at the other colors, and random at c; the
// certificate shares sum_{v ~ u} C_u C_v additively so nodes can test it
// at the color points and one random point without learning it.
struct ColoringParams {
  size_t n = 0;
  uint64_t c = 3;
  uint64_t q = 0;
  std::optional<double> soundness;  // target; narrows the prime window
  bool private_randomness = false;

  // Default prime window (n', 2n'] with n' = max(n, c + 1); a soundness
  // target s switches to (3c/s, 6c/s].
  static ColoringParams resolve(size_t n, uint64_t c = 3,
                                std::optional<double> soundness = std::nullopt,
                                std::optional<uint64_t> q_override = std::nullopt,
                                bool private_randomness = false);

  field::PrimeField fld() const { return field::PrimeField(q); }
  size_t share_len() const { return size_t(2 * c + 1); }
  size_t cert_words() const { return 2 + 2 * share_len(); }
};

// Values 0/1 on the color points, r at point c; degree <= c.
field::Polynomial color_polynomial(const ColoringParams& pr, uint64_t col, uint64_t r);

struct Cert {
  uint64_t col = 0;
  uint64_t r = 0;
  std::vector<uint64_t> p0;  // share_len coefficients, low first
  std::vector<uint64_t> h;

  Bytes serialize(const ColoringParams& pr) const;
  static std::optional<Cert> parse(const ColoringParams& pr,
                                   std::span<const uint8_t> bytes);
};

// Honest prover: permute the witness colors, draw r_u and H_u, share
// P_u = sum C_u C_v as P0_u = P_u - sum_{v ~ u} H_v.
std::vector<Cert> merlin(const ColoringParams& pr, const graph::Configuration& g,
                         const std::vector<uint64_t>& witness, RandomStream& rng,
                         bool require_proper = true);

class ColoringProtocol final : public engine::Protocol {
 public:
  explicit ColoringProtocol(ColoringParams pr) : pr_(pr) {}
  const ColoringParams& params() const { return pr_; }

  std::string name() const override { return "coloring"; }
  size_t node_count() const override { return pr_.n; }
  int rounds() const override { return pr_.private_randomness ? 2 : 1; }
  bool uses_private_randomness() const override { return pr_.private_randomness; }
  size_t cert_bytes() const override { return pr_.cert_words() * 8; }
  size_t message_bytes(int round) const override;
  bool enumerable_challenge() const override { return true; }
  uint64_t challenge_lo() const override { return pr_.c; }
  uint64_t challenge_hi() const override { return pr_.q; }
  bool in_language(const graph::Configuration& g) const override {
    return graph::is_colorable(g, pr_.c);
  }
  Bytes node_send(const engine::NodeCtx& ctx, int round, size_t port) const override;
  engine::Verdict node_verify(const engine::NodeCtx& ctx) const override;
  std::vector<uint64_t> drawn_randomness(const engine::NodeCtx& ctx) const override;

 private:
  uint64_t istar(const engine::NodeCtx& ctx) const;
  ColoringParams pr_;
};

class HonestStrategy final : public engine::ProverStrategy {
 public:
  HonestStrategy(ColoringParams pr, std::vector<uint64_t> witness, uint64_t seed)
      : pr_(pr), witness_(std::move(witness)), seed_(seed) {}
  std::string name() const override { return "honest"; }
  bool honest() const override { return true; }
  std::vector<Bytes> certificates(const graph::Configuration& g) const override;

 private:
  ColoringParams pr_;
  std::vector<uint64_t> witness_;
  uint64_t seed_;
};

// Honest algebra on an improper witness, nothing patched: the share sum
// is nonzero at some color point, so a node rejects outright.
class WrongWitnessStrategy final : public engine::ProverStrategy {
 public:
  WrongWitnessStrategy(ColoringParams pr, std::vector<uint64_t> witness, uint64_t seed)
      : pr_(pr), witness_(std::move(witness)), seed_(seed) {}
  std::string name() const override { return "wrong-witness"; }
  bool honest() const override { return false; }
  std::vector<Bytes> certificates(const graph::Configuration& g) const override;

 private:
  ColoringParams pr_;
  std::vector<uint64_t> witness_;
  uint64_t seed_;
};

// Honest algebra on an improper witness, then every P0_u overwritten
// with -sum_{v ~ u} H_v so the reconstructed share sum is the zero
// polynomial.  The color-point checks all pass; only the random-point
// comparison against sum C_u C_v can catch it.
class ZeroForcingStrategy final : public engine::ProverStrategy {
 public:
  ZeroForcingStrategy(ColoringParams pr, std::vector<uint64_t> witness, uint64_t seed)
      : pr_(pr), witness_(std::move(witness)), seed_(seed) {}
  std::string name() const override { return "zero-forcing"; }
  bool honest() const override { return false; }
  std::vector<Bytes> certificates(const graph::Configuration& g) const override;

 private:
  ColoringParams pr_;
  std::vector<uint64_t> witness_;
  uint64_t seed_;
};

// Honest run with one node's P0 shifted by a constant: its share sum is
// nonzero at every color point, so that node rejects for every
// challenge.
class NullityBreakStrategy final : public engine::ProverStrategy {
 public:
  NullityBreakStrategy(ColoringParams pr, std::vector<uint64_t> witness,
                       size_t target, uint64_t seed)
      : pr_(pr), witness_(std::move(witness)), target_(target), seed_(seed) {}
  std::string name() const override { return "nullity-break"; }
  bool honest() const override { return false; }
  std::vector<Bytes> certificates(const graph::Configuration& g) const override;

 private:
  ColoringParams pr_;
  std::vector<uint64_t> witness_;
  size_t target_;
  uint64_t seed_;
};

// Honest certificates except one node, which gets unparseable bytes.
class GarbageStrategy final : public engine::ProverStrategy {
 public:
  GarbageStrategy(ColoringParams pr, std::vector<uint64_t> witness, size_t target,
                  uint64_t seed)
      : pr_(pr), witness_(std::move(witness)), target_(target), seed_(seed) {}
  std::string name() const override { return "garbage"; }
  bool honest() const override { return false; }
  std::vector<Bytes> certificates(const graph::Configuration& g) const override;

 private:
  ColoringParams pr_;
  std::vector<uint64_t> witness_;
  size_t target_;
  uint64_t seed_;
};

// Local simulator for the shared-randomness protocol: samples a view of
// one node from its state alone.  Neighbor values are uniform except one
// designated neighbor (lowest port) whose values complete the two check
// identities.
engine::View simulate_view(const ColoringParams& pr, const engine::LocalView& local,
                           uint64_t seed);

// Flattened field-element coordinates of a view, for distribution
// tests: col, r, p0, h, then per port h(0..c-1), h(i*), C_v(i*).
std::vector<uint64_t> view_coordinates(const ColoringParams& pr,
                                       const engine::View& w);
// True when the view satisfies both verification identities.
bool view_passes_checks(const ColoringParams& pr, const engine::View& w);

}  // namespace dnizk::coloring

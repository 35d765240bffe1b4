#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "dnizk/engine.hpp"
#include "dnizk/field.hpp"
#include "dnizk/graph.hpp"

namespace dnizk::triangle {

struct IdOutOfRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class IdMode { ids, idfree };

// Proof of triangle-freeness.  Node identifiers split into a pair
// (i, t) in [B] x [alpha_eff]; node u holds, per track t, a degree-B
// polynomial P_{u,t} that indicates which slots of track t are
// neighbors of u, with a random value at point B.  The share sum
// covers sum_{v ~ u} sum_t P_{u,t} P_{v,t}, which vanishes on [B]
// exactly when no triangle goes through u.
struct TriangleParams {
  size_t n = 0;
  uint64_t alpha = 3;      // clamped to >= 3
  uint64_t n_eff = 0;      // n, or the color-palette size when id-free
  uint64_t B = 0;          // ceil(n_eff / alpha)
  uint64_t alpha_eff = 0;  // ceil(n_eff / B)
  uint64_t q = 0;
  bool improved = false;   // prime window (n_eff^3/alpha_eff, 2 n_eff^3/alpha_eff]
  IdMode id_mode = IdMode::ids;
  std::vector<uint64_t> sorted_ids;  // dense re-indexing table (ids mode)

  static TriangleParams resolve(const graph::Configuration& g, uint64_t alpha,
                                bool improved = false, IdMode mode = IdMode::ids,
                                std::optional<uint64_t> q_override = std::nullopt);

  field::PrimeField fld() const { return field::PrimeField(q); }
  size_t share_len() const { return size_t(2 * B + 1); }
  size_t cert_words() const { return alpha_eff + 2 * share_len(); }
  size_t msg_words() const { return (B + 1) + alpha_eff; }
  unsigned color_bits() const;
  size_t bundle_bytes(size_t degree) const;  // id-free prefix, incl. length word
  size_t rank_of(uint64_t id) const;         // dense index of an identifier
};

// (id mod B, id div B); bijective on [B * alpha_eff].
std::pair<uint64_t, uint64_t> id_split(uint64_t dense_id, uint64_t B,
                                       uint64_t alpha_eff);

// Indicator of `slots` on track t over the points [B], random value at
// B; degree <= B.
field::Polynomial track_polynomial(const TriangleParams& pr,
                                   const std::vector<std::pair<uint64_t, uint64_t>>& slots,
                                   uint64_t t, uint64_t r);

struct Cert {
  std::vector<uint64_t> colors;  // id-free only: own color, then per port
  std::vector<uint64_t> r_vec;   // alpha_eff values
  std::vector<uint64_t> p0, h;   // share_len coefficients each

  Bytes serialize(const TriangleParams& pr) const;
  static std::optional<Cert> parse(const TriangleParams& pr, size_t degree,
                                   std::span<const uint8_t> bytes);
};

std::vector<Cert> merlin(const TriangleParams& pr, const graph::Configuration& g,
                         RandomStream& rng, bool require_negative = true,
                         const std::vector<uint64_t>* coloring_override = nullptr);

class TriangleProtocol final : public engine::Protocol {
 public:
  explicit TriangleProtocol(TriangleParams pr) : pr_(std::move(pr)) {}
  const TriangleParams& params() const { return pr_; }

  std::string name() const override { return "triangle"; }
  size_t node_count() const override { return pr_.n; }
  size_t cert_bytes() const override { return pr_.cert_words() * 8; }
  size_t cert_bytes_for(size_t degree) const override;
  size_t message_bytes(int) const override { return pr_.msg_words() * 8; }
  bool enumerable_challenge() const override { return true; }
  uint64_t challenge_lo() const override { return pr_.B; }
  uint64_t challenge_hi() const override { return pr_.q; }
  bool in_language(const graph::Configuration& g) const override {
    return graph::count_triangles(g) == 0;
  }
  Bytes node_send(const engine::NodeCtx& ctx, int round, size_t port) const override;
  engine::Verdict node_verify(const engine::NodeCtx& ctx) const override;
  std::vector<uint64_t> drawn_randomness(const engine::NodeCtx& ctx) const override;

 private:
  TriangleParams pr_;
};

class HonestStrategy final : public engine::ProverStrategy {
 public:
  HonestStrategy(TriangleParams pr, uint64_t seed) : pr_(std::move(pr)), seed_(seed) {}
  std::string name() const override { return "honest"; }
  bool honest() const override { return true; }
  std::vector<Bytes> certificates(const graph::Configuration& g) const override;

 private:
  TriangleParams pr_;
  uint64_t seed_;
};

// Honest algebra on a graph with triangles, then P0_u := -sum H_v so
// the reconstructed share sum is identically zero.
class ZeroForcingStrategy final : public engine::ProverStrategy {
 public:
  ZeroForcingStrategy(TriangleParams pr, uint64_t seed)
      : pr_(std::move(pr)), seed_(seed) {}
  std::string name() const override { return "zero-forcing"; }
  bool honest() const override { return false; }
  std::vector<Bytes> certificates(const graph::Configuration& g) const override;

 private:
  TriangleParams pr_;
  uint64_t seed_;
};

// Id-free honest algebra with a supplied (possibly improper) coloring
// bundle: a color collision can fake a triangle and force a reject, but
// never hides one.
class BundleOverrideStrategy final : public engine::ProverStrategy {
 public:
  BundleOverrideStrategy(TriangleParams pr, std::vector<uint64_t> coloring,
                         uint64_t seed)
      : pr_(std::move(pr)), coloring_(std::move(coloring)), seed_(seed) {}
  std::string name() const override { return "bundle-override"; }
  bool honest() const override { return false; }
  std::vector<Bytes> certificates(const graph::Configuration& g) const override;

 private:
  TriangleParams pr_;
  std::vector<uint64_t> coloring_;
  uint64_t seed_;
};

engine::View simulate_view(const TriangleParams& pr, const engine::LocalView& local,
                           uint64_t seed);

// r_vec, p0, h, then per port h(0..B-1), h(i*), per-track values at i*.
std::vector<uint64_t> view_coordinates(const TriangleParams& pr,
                                       const engine::View& w);
bool view_passes_checks(const TriangleParams& pr, const engine::View& w);

}  // namespace dnizk::triangle

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace dnizk {

uint64_t mix64(uint64_t x);
uint64_t hash_bytes64(std::span<const uint8_t> data, uint64_t seed = 0);
uint64_t label_key(uint64_t seed, std::string_view label);

// 256-bit keyed mixer used where the model calls for a random function.
std::array<uint8_t, 32> mix256(uint64_t key, std::span<const uint8_t> data);

// splitmix64 counter stream.
class RandomStream {
 public:
  explicit RandomStream(uint64_t key) : state_(key) {}

  uint64_t next();
  uint64_t uniform_below(uint64_t m);                    // [0, m), unbiased
  uint64_t uniform_range(uint64_t lo, uint64_t hi);      // [lo, hi)
  void fill(std::span<uint8_t> out);

 private:
  uint64_t state_;
};

// Randomness shared by all nodes but hidden from the prover.  Draws are
// addressed by label, not call order: the same label always yields the
// same value within a run, so nodes need no coordination to agree.
class SharedRandomness {
 public:
  explicit SharedRandomness(uint64_t seed) : seed_(seed) {}

  uint64_t seed() const { return seed_; }

  RandomStream stream(std::string_view label) const {
    return RandomStream(label_key(seed_, label));
  }
  uint64_t uniform_range(std::string_view label, uint64_t lo, uint64_t hi) const {
    RandomStream s = stream(label);
    return s.uniform_range(lo, hi);
  }

  // Challenge-point draws go through here so exact enumeration can pin
  // them; all other draws are never forced.
  uint64_t challenge(std::string_view label, uint64_t lo, uint64_t hi) const;
  // Same, but sourced from a node's private seed instead of the shared
  // tape (one challenge per node in the private-randomness variant).
  uint64_t private_challenge(uint64_t private_seed, std::string_view label,
                             uint64_t lo, uint64_t hi) const;
  void force_challenge(uint64_t v) { forced_ = v; }

 private:
  uint64_t seed_;
  std::optional<uint64_t> forced_;
};

}  // namespace dnizk

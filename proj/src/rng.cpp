#include "dnizk/rng.hpp"

#include <cstring>
#include <stdexcept>

namespace dnizk {

static uint64_t splitmix_step(uint64_t& s) {
  uint64_t z = (s += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

uint64_t mix64(uint64_t x) {
  uint64_t s = x;
  return splitmix_step(s);
}

uint64_t hash_bytes64(std::span<const uint8_t> data, uint64_t seed) {
  // FNV-1a with a finalizer strong enough for key derivation.
  uint64_t h = 0xcbf29ce484222325ull ^ seed;
  for (uint8_t b : data) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return mix64(h ^ (h >> 32));
}

uint64_t label_key(uint64_t seed, std::string_view label) {
  std::span<const uint8_t> bytes(reinterpret_cast<const uint8_t*>(label.data()),
                                 label.size());
  return mix64(hash_bytes64(bytes, mix64(seed ^ 0xA5A5A5A55A5A5A5Aull)));
}

std::array<uint8_t, 32> mix256(uint64_t key, std::span<const uint8_t> data) {
  uint64_t lane[4] = {mix64(key ^ 0x243F6A8885A308D3ull), mix64(key ^ 0x13198A2E03707344ull),
                      mix64(key ^ 0xA4093822299F31D0ull), mix64(key ^ 0x082EFA98EC4E6C89ull)};
  size_t off = 0;
  while (off < data.size()) {
    uint64_t chunk = 0;
    size_t take = std::min<size_t>(8, data.size() - off);
    std::memcpy(&chunk, data.data() + off, take);
    off += take;
    for (int i = 0; i < 4; i++) {
      uint64_t rotated = (chunk << (13 * i)) | (chunk >> ((64 - 13 * i) % 64));
      lane[i] = mix64(lane[i] ^ rotated ^ (0x9E3779B97F4A7C15ull * (i + 1)));
    }
  }
  for (int i = 0; i < 4; i++) lane[i] = mix64(lane[i] ^ (uint64_t)data.size());
  for (int round = 0; round < 2; round++)
    for (int i = 0; i < 4; i++) lane[i] = mix64(lane[i] ^ lane[(i + 1) % 4]);
  std::array<uint8_t, 32> out;
  for (int i = 0; i < 4; i++) std::memcpy(out.data() + 8 * i, &lane[i], 8);
  return out;
}

uint64_t RandomStream::next() { return splitmix_step(state_); }

uint64_t RandomStream::uniform_below(uint64_t m) {
  if (m == 0) throw std::invalid_argument("uniform_below: empty range");
  uint64_t limit = -m % m;  // 2^64 mod m; reject below it
  for (;;) {
    uint64_t v = next();
    if (v >= limit) return v % m;
  }
}

uint64_t RandomStream::uniform_range(uint64_t lo, uint64_t hi) {
  if (lo >= hi) throw std::invalid_argument("uniform_range: empty range");
  return lo + uniform_below(hi - lo);
}

void RandomStream::fill(std::span<uint8_t> out) {
  size_t off = 0;
  while (off < out.size()) {
    uint64_t v = next();
    size_t take = std::min<size_t>(8, out.size() - off);
    std::memcpy(out.data() + off, &v, take);
    off += take;
  }
}

uint64_t SharedRandomness::challenge(std::string_view label, uint64_t lo,
                                     uint64_t hi) const {
  if (forced_) {
    if (*forced_ < lo || *forced_ >= hi)
      throw std::out_of_range("forced challenge outside admissible range");
    return *forced_;
  }
  return uniform_range(label, lo, hi);
}

uint64_t SharedRandomness::private_challenge(uint64_t private_seed,
                                             std::string_view label, uint64_t lo,
                                             uint64_t hi) const {
  if (forced_) {
    if (*forced_ < lo || *forced_ >= hi)
      throw std::out_of_range("forced challenge outside admissible range");
    return *forced_;
  }
  RandomStream s(label_key(private_seed, label));
  return s.uniform_range(lo, hi);
}

}  // namespace dnizk

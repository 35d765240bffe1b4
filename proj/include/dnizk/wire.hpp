#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dnizk {

using Bytes = std::vector<uint8_t>;

namespace wire {

// Field elements travel as 8-byte little-endian words.
void put_u64(Bytes& out, uint64_t v);
void put_u32(Bytes& out, uint32_t v);
void put_u32be(Bytes& out, uint32_t v);
uint64_t get_u64(std::span<const uint8_t> in, size_t word_index);

Bytes pack_words(std::span<const uint64_t> words);
// nullopt unless the buffer is exactly `count` words, each below `bound`.
std::optional<std::vector<uint64_t>> parse_words(std::span<const uint8_t> in,
                                                 size_t count, uint64_t bound);

std::string to_hex(std::span<const uint8_t> data);

class BitWriter {
 public:
  void put(uint64_t value, unsigned bits);
  Bytes take();

 private:
  Bytes out_;
  unsigned used_ = 0;  // bits filled in the last byte
};

class BitReader {
 public:
  explicit BitReader(std::span<const uint8_t> data) : data_(data) {}
  std::optional<uint64_t> get(unsigned bits);

 private:
  std::span<const uint8_t> data_;
  size_t pos_ = 0;  // bit position
};

}  // namespace wire
}  // namespace dnizk

#include "dnizk/wire.hpp"

#include <cstring>

namespace dnizk::wire {

void put_u64(Bytes& out, uint64_t v) {
  for (int i = 0; i < 8; i++) out.push_back(uint8_t(v >> (8 * i)));
}

void put_u32(Bytes& out, uint32_t v) {
  for (int i = 0; i < 4; i++) out.push_back(uint8_t(v >> (8 * i)));
}

void put_u32be(Bytes& out, uint32_t v) {
  for (int i = 3; i >= 0; i--) out.push_back(uint8_t(v >> (8 * i)));
}

uint64_t get_u64(std::span<const uint8_t> in, size_t word_index) {
  uint64_t v = 0;
  std::memcpy(&v, in.data() + 8 * word_index, 8);
  return v;
}

Bytes pack_words(std::span<const uint64_t> words) {
  Bytes out;
  out.reserve(words.size() * 8);
  for (uint64_t w : words) put_u64(out, w);
  return out;
}

std::optional<std::vector<uint64_t>> parse_words(std::span<const uint8_t> in,
                                                 size_t count, uint64_t bound) {
  if (in.size() != count * 8) return std::nullopt;
  std::vector<uint64_t> words(count);
  for (size_t i = 0; i < count; i++) {
    words[i] = get_u64(in, i);
    if (words[i] >= bound) return std::nullopt;
  }
  return words;
}

std::string to_hex(std::span<const uint8_t> data) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(data.size() * 2);
  for (uint8_t b : data) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 15]);
  }
  return s;
}

void BitWriter::put(uint64_t value, unsigned bits) {
  for (unsigned i = 0; i < bits; i++) {
    if (used_ == 0) out_.push_back(0);
    if ((value >> i) & 1) out_.back() |= uint8_t(1u << used_);
    used_ = (used_ + 1) % 8;
  }
}

Bytes BitWriter::take() { return std::move(out_); }

std::optional<uint64_t> BitReader::get(unsigned bits) {
  uint64_t v = 0;
  for (unsigned i = 0; i < bits; i++) {
    size_t byte = (pos_ + i) / 8, bit = (pos_ + i) % 8;
    if (byte >= data_.size()) return std::nullopt;
    if ((data_[byte] >> bit) & 1) v |= uint64_t(1) << i;
  }
  pos_ += bits;
  return v;
}

}  // namespace dnizk::wire

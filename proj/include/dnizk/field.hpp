#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dnizk/rng.hpp"

namespace dnizk::field {

struct NoPrimeInRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DuplicateAbscissa : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FieldMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic Miller-Rabin, exact for any 64-bit input.
bool is_prime(uint64_t n);

// Smallest prime p with lo <= p <= hi, or NoPrimeInRange.
uint64_t find_prime(uint64_t lo, uint64_t hi);

// Prime field F_q for q up to 2^61; products go through unsigned
// __int128 so no reduction step can overflow.
class PrimeField {
 public:
  static constexpr uint64_t max_modulus = uint64_t(1) << 61;

  explicit PrimeField(uint64_t q);

  uint64_t modulus() const { return q_; }

  uint64_t add(uint64_t a, uint64_t b) const {
    uint64_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  uint64_t sub(uint64_t a, uint64_t b) const { return a >= b ? a - b : a + q_ - b; }
  uint64_t neg(uint64_t a) const { return a == 0 ? 0 : q_ - a; }
  uint64_t mul(uint64_t a, uint64_t b) const {
    return uint64_t((unsigned __int128)a * b % q_);
  }
  uint64_t pow(uint64_t a, uint64_t e) const;
  uint64_t inv(uint64_t a) const;

  bool element(uint64_t a) const { return a < q_; }
  uint64_t uniform(RandomStream& rng) const { return rng.uniform_below(q_); }

  bool operator==(const PrimeField& o) const { return q_ == o.q_; }

 private:
  uint64_t q_;
};

// Coefficients lowest-degree first.  degree_bound is the declared cap,
// kept alongside the coefficients so shares serialize at a fixed width
// regardless of the numeric degree.
class Polynomial {
 public:
  Polynomial(PrimeField f, std::vector<uint64_t> coeffs, size_t degree_bound);
  Polynomial(PrimeField f, std::vector<uint64_t> coeffs);  // bound from length

  static Polynomial zero(PrimeField f, size_t degree_bound = 0);
  // degree_bound + 1 coefficients drawn uniformly.
  static Polynomial random(PrimeField f, size_t degree_bound, RandomStream& rng);
  // Lagrange through the given points; abscissae must be distinct.
  static Polynomial interpolate(PrimeField f,
                                std::span<const std::pair<uint64_t, uint64_t>> points);

  uint64_t eval(uint64_t x) const;

  Polynomial add(const Polynomial& o) const;
  Polynomial sub(const Polynomial& o) const;
  Polynomial mul(const Polynomial& o) const;
  Polynomial scale(uint64_t k) const;

  // Value equality: trailing zero coefficients are ignored.
  bool operator==(const Polynomial& o) const;

  const PrimeField& field() const { return field_; }
  const std::vector<uint64_t>& coeffs() const { return coeffs_; }
  size_t degree_bound() const { return degree_bound_; }
  std::vector<uint64_t> coeffs_padded(size_t len) const;

 private:
  PrimeField field_;
  std::vector<uint64_t> coeffs_;
  size_t degree_bound_;
};

}  // namespace dnizk::field

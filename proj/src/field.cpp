#include "dnizk/field.hpp"

namespace dnizk::field {

static uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return uint64_t((unsigned __int128)a * b % m);
}

static uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                     29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    s++;
  }
  // this witness set is exact below 2^64
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                     29ull, 31ull, 37ull}) {
    uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; i++) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

uint64_t find_prime(uint64_t lo, uint64_t hi) {
  for (uint64_t p = lo; p <= hi; p++) {
    if (is_prime(p)) return p;
    if (p == UINT64_MAX) break;
  }
  throw NoPrimeInRange("no prime in [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
}

PrimeField::PrimeField(uint64_t q) : q_(q) {
  if (q > max_modulus) throw std::invalid_argument("modulus exceeds 2^61");
  if (!is_prime(q)) throw std::invalid_argument("modulus is not prime");
}

uint64_t PrimeField::pow(uint64_t a, uint64_t e) const { return powmod(a, e, q_); }

uint64_t PrimeField::inv(uint64_t a) const {
  if (a == 0) throw std::invalid_argument("inverse of zero");
  return powmod(a, q_ - 2, q_);
}

Polynomial::Polynomial(PrimeField f, std::vector<uint64_t> coeffs, size_t degree_bound)
    : field_(f), coeffs_(std::move(coeffs)), degree_bound_(degree_bound) {
  if (coeffs_.size() > degree_bound_ + 1)
    throw std::invalid_argument("coefficient count exceeds degree bound");
  for (uint64_t c : coeffs_)
    if (!field_.element(c)) throw std::invalid_argument("coefficient out of field");
}

Polynomial::Polynomial(PrimeField f, std::vector<uint64_t> coeffs)
    : field_(f),
      coeffs_(std::move(coeffs)),
      degree_bound_(coeffs_.empty() ? 0 : coeffs_.size() - 1) {
  for (uint64_t c : coeffs_)
    if (!field_.element(c)) throw std::invalid_argument("coefficient out of field");
}

Polynomial Polynomial::zero(PrimeField f, size_t degree_bound) {
  return Polynomial(f, {}, degree_bound);
}

Polynomial Polynomial::random(PrimeField f, size_t degree_bound, RandomStream& rng) {
  std::vector<uint64_t> c(degree_bound + 1);
  for (auto& x : c) x = f.uniform(rng);
  return Polynomial(f, std::move(c), degree_bound);
}

Polynomial Polynomial::interpolate(
    PrimeField f, std::span<const std::pair<uint64_t, uint64_t>> points) {
  size_t k = points.size();
  for (size_t i = 0; i < k; i++)
    for (size_t j = i + 1; j < k; j++)
      if (points[i].first == points[j].first)
        throw DuplicateAbscissa("repeated abscissa " +
                                std::to_string(points[i].first));
  if (k == 0) return zero(f);

  // full product prod(x - x_j), then divide out (x - x_i) per basis term
  std::vector<uint64_t> prod(k + 1, 0);
  prod[0] = 1;
  size_t len = 1;
  for (size_t j = 0; j < k; j++) {
    uint64_t xj = f.neg(points[j].first % f.modulus());
    prod[len] = 0;
    for (size_t t = len; t > 0; t--)
      prod[t] = f.add(prod[t - 1], f.mul(prod[t], xj));
    prod[0] = f.mul(prod[0], xj);
    len++;
  }

  std::vector<uint64_t> acc(k, 0);
  std::vector<uint64_t> basis(k);
  for (size_t i = 0; i < k; i++) {
    uint64_t xi = points[i].first % f.modulus();
    // synthetic division of prod by (x - x_i)
    uint64_t carry = 0;
    for (size_t t = k; t-- > 0;) {
      basis[t] = f.add(prod[t + 1], f.mul(carry, xi));
      carry = basis[t];
    }
    uint64_t denom = 1;
    for (size_t j = 0; j < k; j++)
      if (j != i) denom = f.mul(denom, f.sub(xi, points[j].first % f.modulus()));
    uint64_t w = f.mul(points[i].second % f.modulus(), f.inv(denom));
    for (size_t t = 0; t < k; t++) acc[t] = f.add(acc[t], f.mul(basis[t], w));
  }
  return Polynomial(f, std::move(acc), k == 0 ? 0 : k - 1);
}

uint64_t Polynomial::eval(uint64_t x) const {
  uint64_t r = 0;
  for (size_t i = coeffs_.size(); i-- > 0;)
    r = field_.add(field_.mul(r, x % field_.modulus()), coeffs_[i]);
  return r;
}

static void check_field(const PrimeField& a, const PrimeField& b) {
  if (!(a == b)) throw FieldMismatch("operands over different fields");
}

Polynomial Polynomial::add(const Polynomial& o) const {
  check_field(field_, o.field_);
  std::vector<uint64_t> c(std::max(coeffs_.size(), o.coeffs_.size()), 0);
  for (size_t i = 0; i < c.size(); i++) {
    uint64_t a = i < coeffs_.size() ? coeffs_[i] : 0;
    uint64_t b = i < o.coeffs_.size() ? o.coeffs_[i] : 0;
    c[i] = field_.add(a, b);
  }
  return Polynomial(field_, std::move(c), std::max(degree_bound_, o.degree_bound_));
}

Polynomial Polynomial::sub(const Polynomial& o) const {
  check_field(field_, o.field_);
  std::vector<uint64_t> c(std::max(coeffs_.size(), o.coeffs_.size()), 0);
  for (size_t i = 0; i < c.size(); i++) {
    uint64_t a = i < coeffs_.size() ? coeffs_[i] : 0;
    uint64_t b = i < o.coeffs_.size() ? o.coeffs_[i] : 0;
    c[i] = field_.sub(a, b);
  }
  return Polynomial(field_, std::move(c), std::max(degree_bound_, o.degree_bound_));
}

Polynomial Polynomial::mul(const Polynomial& o) const {
  check_field(field_, o.field_);
  if (coeffs_.empty() || o.coeffs_.empty())
    return zero(field_, degree_bound_ + o.degree_bound_);
  std::vector<uint64_t> c(coeffs_.size() + o.coeffs_.size() - 1, 0);
  for (size_t i = 0; i < coeffs_.size(); i++)
    for (size_t j = 0; j < o.coeffs_.size(); j++)
      c[i + j] = field_.add(c[i + j], field_.mul(coeffs_[i], o.coeffs_[j]));
  return Polynomial(field_, std::move(c), degree_bound_ + o.degree_bound_);
}

Polynomial Polynomial::scale(uint64_t k) const {
  std::vector<uint64_t> c(coeffs_);
  for (auto& x : c) x = field_.mul(x, k % field_.modulus());
  return Polynomial(field_, std::move(c), degree_bound_);
}

bool Polynomial::operator==(const Polynomial& o) const {
  if (!(field_ == o.field_)) return false;
  size_t m = std::max(coeffs_.size(), o.coeffs_.size());
  for (size_t i = 0; i < m; i++) {
    uint64_t a = i < coeffs_.size() ? coeffs_[i] : 0;
    uint64_t b = i < o.coeffs_.size() ? o.coeffs_[i] : 0;
    if (a != b) return false;
  }
  return true;
}

std::vector<uint64_t> Polynomial::coeffs_padded(size_t len) const {
  if (coeffs_.size() > len)
    throw std::invalid_argument("padding below coefficient count");
  std::vector<uint64_t> c(coeffs_);
  c.resize(len, 0);
  return c;
}

}  // namespace dnizk::field

#include "dnizk/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace dnizk::stats {

// Regularized incomplete gamma, series branch: P(a, x) for x < a + 1.
static double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int k = 0; k < 500; k++) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued-fraction branch: Q(a, x) for x >= a + 1 (Lentz).
static double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int k = 1; k < 500; k++) {
    double an = -double(k) * (double(k) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double chi2_sf(double stat, double dof) {
  if (dof <= 0.0) throw std::invalid_argument("dof must be positive");
  if (stat <= 0.0) return 1.0;
  double a = dof / 2.0, x = stat / 2.0;
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi2_uniform_pvalue(std::span<const uint64_t> counts) {
  if (counts.size() < 2) return 1.0;
  uint64_t total = 0;
  for (uint64_t c : counts) total += c;
  if (total == 0) return 1.0;
  double expect = double(total) / double(counts.size());
  double stat = 0.0;
  for (uint64_t c : counts) {
    double d = double(c) - expect;
    stat += d * d / expect;
  }
  return chi2_sf(stat, double(counts.size() - 1));
}

double chi2_two_sample_pvalue(std::span<const uint64_t> a,
                              std::span<const uint64_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("histogram sizes differ");
  uint64_t na = 0, nb = 0;
  for (uint64_t c : a) na += c;
  for (uint64_t c : b) nb += c;
  if (na == 0 || nb == 0) return 1.0;
  double ra = std::sqrt(double(nb) / double(na));
  double rb = std::sqrt(double(na) / double(nb));
  double stat = 0.0;
  size_t cells = 0;
  for (size_t k = 0; k < a.size(); k++) {
    if (a[k] == 0 && b[k] == 0) continue;
    cells++;
    double d = ra * double(a[k]) - rb * double(b[k]);
    stat += d * d / double(a[k] + b[k]);
  }
  if (cells < 2) return 1.0;
  return chi2_sf(stat, double(cells - 1));
}

double tv_distance(std::span<const uint64_t> a, std::span<const uint64_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("histogram sizes differ");
  uint64_t na = 0, nb = 0;
  for (uint64_t c : a) na += c;
  for (uint64_t c : b) nb += c;
  if (na == 0 || nb == 0) return na == nb ? 0.0 : 1.0;
  double acc = 0.0;
  for (size_t k = 0; k < a.size(); k++)
    acc += std::fabs(double(a[k]) / double(na) - double(b[k]) / double(nb));
  return acc / 2.0;
}

}  // namespace dnizk::stats

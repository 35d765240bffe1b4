#include "dnizk/coloring.hpp"

#include <cmath>

namespace dnizk::coloring {

using field::Polynomial;
using field::PrimeField;

ColoringParams ColoringParams::resolve(size_t n, uint64_t c,
                                       std::optional<double> soundness,
                                       std::optional<uint64_t> q_override,
                                       bool private_randomness) {
  if (c < 2) throw std::invalid_argument("need at least two colors");
  ColoringParams pr;
  pr.n = n;
  pr.c = c;
  pr.soundness = soundness;
  pr.private_randomness = private_randomness;
  if (q_override) {
    pr.q = *q_override;
    if (!field::is_prime(pr.q)) throw std::invalid_argument("q must be prime");
  } else if (soundness) {
    double s = *soundness;
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("soundness in (0,1)");
    double lo_edge = 3.0 * double(c) / s, hi_edge = 6.0 * double(c) / s;
    uint64_t lo = uint64_t(std::floor(lo_edge)) + 1;
    uint64_t hi = uint64_t(std::floor(hi_edge));
    pr.q = field::find_prime(lo, hi);
  } else {
    uint64_t base = std::max<uint64_t>(n, c + 1);
    pr.q = field::find_prime(base + 1, 2 * base);
  }
  if (pr.q <= c + 1)
    throw std::invalid_argument("q leaves no room for a challenge point");
  return pr;
}

field::Polynomial color_polynomial(const ColoringParams& pr, uint64_t col,
                                   uint64_t r) {
  PrimeField f = pr.fld();
  std::vector<std::pair<uint64_t, uint64_t>> pts;
  for (uint64_t i = 0; i < pr.c; i++) pts.emplace_back(i, i == col ? 1 : 0);
  pts.emplace_back(pr.c, r);
  return Polynomial::interpolate(f, pts);
}

Bytes Cert::serialize(const ColoringParams& pr) const {
  std::vector<uint64_t> words;
  words.reserve(pr.cert_words());
  words.push_back(col);
  words.push_back(r);
  words.insert(words.end(), p0.begin(), p0.end());
  words.insert(words.end(), h.begin(), h.end());
  return wire::pack_words(words);
}

std::optional<Cert> Cert::parse(const ColoringParams& pr,
                                std::span<const uint8_t> bytes) {
  auto words = wire::parse_words(bytes, pr.cert_words(), pr.q);
  if (!words) return std::nullopt;
  if ((*words)[0] >= pr.c) return std::nullopt;
  Cert cert;
  cert.col = (*words)[0];
  cert.r = (*words)[1];
  size_t len = pr.share_len();
  cert.p0.assign(words->begin() + 2, words->begin() + 2 + len);
  cert.h.assign(words->begin() + 2 + len, words->end());
  return cert;
}

std::vector<Cert> merlin(const ColoringParams& pr, const graph::Configuration& g,
                         const std::vector<uint64_t>& witness, RandomStream& rng,
                         bool require_proper) {
  const size_t n = g.n();
  if (witness.size() != n) throw ImproperWitness("witness length mismatch");
  for (uint64_t x : witness)
    if (x >= pr.c) throw ImproperWitness("color out of range");
  if (require_proper && !graph::proper_coloring(g, witness, pr.c))
    throw ImproperWitness("witness is not a proper coloring");

  PrimeField f = pr.fld();
  std::vector<uint64_t> perm(pr.c);
  for (uint64_t i = 0; i < pr.c; i++) perm[i] = i;
  for (size_t i = pr.c; i > 1; i--) std::swap(perm[i - 1], perm[rng.uniform_below(i)]);

  std::vector<Cert> certs(n);
  std::vector<Polynomial> C, H;
  C.reserve(n);
  H.reserve(n);
  for (size_t u = 0; u < n; u++) {
    certs[u].col = perm[witness[u]];
    certs[u].r = f.uniform(rng);
    C.push_back(color_polynomial(pr, certs[u].col, certs[u].r));
    H.push_back(Polynomial::random(f, 2 * pr.c, rng));
    certs[u].h = H[u].coeffs_padded(pr.share_len());
  }
  for (size_t u = 0; u < n; u++) {
    Polynomial p0 = Polynomial::zero(f, 2 * pr.c);
    for (size_t v : g.ports(u)) p0 = p0.add(C[u].mul(C[v])).sub(H[v]);
    certs[u].p0 = p0.coeffs_padded(pr.share_len());
  }
  return certs;
}

static std::vector<Bytes> pack_certs(const ColoringParams& pr,
                                     const std::vector<Cert>& certs) {
  std::vector<Bytes> out;
  out.reserve(certs.size());
  for (const Cert& cert : certs) out.push_back(cert.serialize(pr));
  return out;
}

size_t ColoringProtocol::message_bytes(int round) const {
  if (!pr_.private_randomness) return (pr_.c + 2) * 8;
  return round == 0 ? (pr_.c + 1) * 8 : 2 * 8;
}

uint64_t ColoringProtocol::istar(const engine::NodeCtx& ctx) const {
  if (pr_.private_randomness)
    return ctx.shared->private_challenge(ctx.private_seed, "coloring/istar", pr_.c,
                                         pr_.q);
  return ctx.shared->challenge("coloring/istar", pr_.c, pr_.q);
}

Bytes ColoringProtocol::node_send(const engine::NodeCtx& ctx, int round,
                                  size_t port) const {
  auto cert = Cert::parse(pr_, *ctx.sigma);
  if (!cert) return {};
  PrimeField f = pr_.fld();
  Polynomial h(f, cert->h);
  Polynomial c_poly = color_polynomial(pr_, cert->col, cert->r);

  std::vector<uint64_t> words;
  if (!pr_.private_randomness) {
    uint64_t point = istar(ctx);
    for (uint64_t i = 0; i < pr_.c; i++) words.push_back(h.eval(i));
    words.push_back(h.eval(point));
    words.push_back(c_poly.eval(point));
  } else if (round == 0) {
    words.push_back(istar(ctx));
    for (uint64_t i = 0; i < pr_.c; i++) words.push_back(h.eval(i));
  } else {
    auto req = wire::parse_words((*ctx.received)[0][port], pr_.c + 1, pr_.q);
    if (!req) return {};
    uint64_t point = (*req)[0];
    words.push_back(h.eval(point));
    words.push_back(c_poly.eval(point));
  }
  return wire::pack_words(words);
}

engine::Verdict ColoringProtocol::node_verify(const engine::NodeCtx& ctx) const {
  auto cert = Cert::parse(pr_, *ctx.sigma);
  if (!cert) return engine::Verdict::reject;
  PrimeField f = pr_.fld();
  Polynomial p0(f, cert->p0);
  Polynomial c_poly = color_polynomial(pr_, cert->col, cert->r);
  const size_t deg = ctx.local.degree;
  uint64_t point = istar(ctx);

  if (!pr_.private_randomness) {
    std::vector<std::vector<uint64_t>> msgs(deg);
    for (size_t p = 0; p < deg; p++) {
      auto m = wire::parse_words((*ctx.received)[0][p], pr_.c + 2, pr_.q);
      if (!m) return engine::Verdict::reject;
      msgs[p] = std::move(*m);
    }
    for (uint64_t i = 0; i < pr_.c; i++) {
      uint64_t sum = p0.eval(i);
      for (size_t p = 0; p < deg; p++) sum = f.add(sum, msgs[p][i]);
      if (sum != 0) return engine::Verdict::reject;
    }
    uint64_t colors = 0, shares = p0.eval(point);
    for (size_t p = 0; p < deg; p++) {
      colors = f.add(colors, msgs[p][pr_.c + 1]);
      shares = f.add(shares, msgs[p][pr_.c]);
    }
    uint64_t lhs = f.mul(c_poly.eval(point), colors);
    return lhs == shares ? engine::Verdict::accept : engine::Verdict::reject;
  }

  std::vector<std::vector<uint64_t>> first(deg), second(deg);
  for (size_t p = 0; p < deg; p++) {
    auto m0 = wire::parse_words((*ctx.received)[0][p], pr_.c + 1, pr_.q);
    auto m1 = wire::parse_words((*ctx.received)[1][p], 2, pr_.q);
    if (!m0 || !m1) return engine::Verdict::reject;
    first[p] = std::move(*m0);
    second[p] = std::move(*m1);
  }
  for (uint64_t i = 0; i < pr_.c; i++) {
    uint64_t sum = p0.eval(i);
    for (size_t p = 0; p < deg; p++) sum = f.add(sum, first[p][1 + i]);
    if (sum != 0) return engine::Verdict::reject;
  }
  uint64_t colors = 0, shares = p0.eval(point);
  for (size_t p = 0; p < deg; p++) {
    colors = f.add(colors, second[p][1]);
    shares = f.add(shares, second[p][0]);
  }
  uint64_t lhs = f.mul(c_poly.eval(point), colors);
  return lhs == shares ? engine::Verdict::accept : engine::Verdict::reject;
}

std::vector<uint64_t> ColoringProtocol::drawn_randomness(
    const engine::NodeCtx& ctx) const {
  return {istar(ctx)};
}

std::vector<Bytes> HonestStrategy::certificates(const graph::Configuration& g) const {
  RandomStream rng(label_key(seed_, "merlin"));
  return pack_certs(pr_, merlin(pr_, g, witness_, rng));
}

std::vector<Bytes> WrongWitnessStrategy::certificates(
    const graph::Configuration& g) const {
  RandomStream rng(label_key(seed_, "merlin"));
  return pack_certs(pr_, merlin(pr_, g, witness_, rng, false));
}

std::vector<Bytes> ZeroForcingStrategy::certificates(
    const graph::Configuration& g) const {
  RandomStream rng(label_key(seed_, "merlin"));
  std::vector<Cert> certs = merlin(pr_, g, witness_, rng, false);
  PrimeField f = pr_.fld();
  for (size_t u = 0; u < g.n(); u++) {
    Polynomial acc = Polynomial::zero(f, 2 * pr_.c);
    for (size_t v : g.ports(u)) acc = acc.add(Polynomial(f, certs[v].h));
    certs[u].p0 = Polynomial::zero(f, 2 * pr_.c).sub(acc).coeffs_padded(
        pr_.share_len());
  }
  return pack_certs(pr_, certs);
}

std::vector<Bytes> NullityBreakStrategy::certificates(
    const graph::Configuration& g) const {
  RandomStream rng(label_key(seed_, "merlin"));
  std::vector<Cert> certs = merlin(pr_, g, witness_, rng);
  PrimeField f = pr_.fld();
  certs[target_].p0[0] = f.add(certs[target_].p0[0], 1);
  return pack_certs(pr_, certs);
}

std::vector<Bytes> GarbageStrategy::certificates(const graph::Configuration& g) const {
  RandomStream rng(label_key(seed_, "merlin"));
  std::vector<Bytes> out = pack_certs(pr_, merlin(pr_, g, witness_, rng));
  RandomStream junk(label_key(seed_, "junk"));
  Bytes garbage(5);
  junk.fill(garbage);
  out[target_] = garbage;
  return out;
}

engine::View simulate_view(const ColoringParams& pr, const engine::LocalView& local,
                           uint64_t seed) {
  PrimeField f = pr.fld();
  RandomStream rng(label_key(seed, "coloring-sim"));
  const size_t deg = local.degree;
  const size_t len = pr.share_len();

  uint64_t point = rng.uniform_range(pr.c, pr.q);
  Cert cert;
  cert.col = rng.uniform_below(pr.c);
  cert.r = f.uniform(rng);
  cert.p0.resize(len);
  cert.h.resize(len);
  for (auto& x : cert.p0) x = f.uniform(rng);
  for (auto& x : cert.h) x = f.uniform(rng);

  Polynomial p0(f, cert.p0);
  Polynomial c_poly = color_polynomial(pr, cert.col, cert.r);

  // per-port words: h(0..c-1), h(i*), C_v(i*)
  std::vector<std::vector<uint64_t>> msgs(deg, std::vector<uint64_t>(pr.c + 2));
  for (uint64_t i = 0; i < pr.c; i++) {
    uint64_t others = 0;
    for (size_t p = 1; p < deg; p++) {
      msgs[p][i] = f.uniform(rng);
      others = f.add(others, msgs[p][i]);
    }
    msgs[0][i] = f.neg(f.add(p0.eval(i), others));
  }
  uint64_t colors = 0;
  for (size_t p = 0; p < deg; p++) {
    msgs[p][pr.c + 1] = f.uniform(rng);
    colors = f.add(colors, msgs[p][pr.c + 1]);
  }
  uint64_t others = 0;
  for (size_t p = 1; p < deg; p++) {
    msgs[p][pr.c] = f.uniform(rng);
    others = f.add(others, msgs[p][pr.c]);
  }
  uint64_t lhs = f.mul(c_poly.eval(point), colors);
  msgs[0][pr.c] = f.sub(lhs, f.add(p0.eval(point), others));

  engine::View w;
  w.state = local;
  w.seed = seed;
  w.randomness = {point};
  w.sigma = cert.serialize(pr);
  w.received.resize(1);
  for (size_t p = 0; p < deg; p++) w.received[0].push_back(wire::pack_words(msgs[p]));
  return w;
}

std::vector<uint64_t> view_coordinates(const ColoringParams& pr,
                                       const engine::View& w) {
  auto cert = Cert::parse(pr, w.sigma);
  if (!cert) throw std::invalid_argument("view certificate unparseable");
  std::vector<uint64_t> coords;
  coords.push_back(cert->col);
  coords.push_back(cert->r);
  coords.insert(coords.end(), cert->p0.begin(), cert->p0.end());
  coords.insert(coords.end(), cert->h.begin(), cert->h.end());
  for (const Bytes& msg : w.received.at(0)) {
    auto words = wire::parse_words(msg, pr.c + 2, pr.q);
    if (!words) throw std::invalid_argument("view message unparseable");
    coords.insert(coords.end(), words->begin(), words->end());
  }
  return coords;
}

bool view_passes_checks(const ColoringParams& pr, const engine::View& w) {
  auto cert = Cert::parse(pr, w.sigma);
  if (!cert) return false;
  PrimeField f = pr.fld();
  Polynomial p0(f, cert->p0);
  Polynomial c_poly = color_polynomial(pr, cert->col, cert->r);
  uint64_t point = w.randomness.at(0);
  std::vector<std::vector<uint64_t>> msgs;
  for (const Bytes& msg : w.received.at(0)) {
    auto words = wire::parse_words(msg, pr.c + 2, pr.q);
    if (!words) return false;
    msgs.push_back(std::move(*words));
  }
  for (uint64_t i = 0; i < pr.c; i++) {
    uint64_t sum = p0.eval(i);
    for (const auto& m : msgs) sum = f.add(sum, m[i]);
    if (sum != 0) return false;
  }
  uint64_t colors = 0, shares = p0.eval(point);
  for (const auto& m : msgs) {
    colors = f.add(colors, m[pr.c + 1]);
    shares = f.add(shares, m[pr.c]);
  }
  return f.mul(c_poly.eval(point), colors) == shares;
}

}  // namespace dnizk::coloring

#include "dnizk/triangle.hpp"

#include <algorithm>
#include <bit>

namespace dnizk::triangle {

using field::Polynomial;
using field::PrimeField;

TriangleParams TriangleParams::resolve(const graph::Configuration& g, uint64_t alpha,
                                       bool improved, IdMode mode,
                                       std::optional<uint64_t> q_override) {
  TriangleParams pr;
  pr.n = g.n();
  pr.alpha = std::max<uint64_t>(alpha, 3);
  pr.improved = improved;
  pr.id_mode = mode;
  if (mode == IdMode::ids) {
    if (g.kt0())
      throw std::invalid_argument("ids mode needs neighbor identifiers");
    pr.n_eff = g.n();
    pr.sorted_ids = g.ids();
    std::sort(pr.sorted_ids.begin(), pr.sorted_ids.end());
  } else {
    uint64_t delta = g.max_degree();
    pr.n_eff = std::max<uint64_t>(
        2, std::min<uint64_t>(g.n(), delta * delta * delta));
  }
  pr.B = (pr.n_eff + pr.alpha - 1) / pr.alpha;
  pr.alpha_eff = (pr.n_eff + pr.B - 1) / pr.B;
  if (q_override) {
    if (!field::is_prime(*q_override)) throw std::invalid_argument("q must be prime");
    pr.q = *q_override;
  } else {
    unsigned __int128 m;
    if (improved) {
      unsigned __int128 cube =
          (unsigned __int128)pr.n_eff * pr.n_eff * pr.n_eff;
      m = (cube + pr.alpha_eff - 1) / pr.alpha_eff;
    } else {
      m = (unsigned __int128)pr.n_eff * pr.alpha_eff;
    }
    if (m >= (unsigned __int128)1 << 60)
      throw std::invalid_argument("prime window exceeds the field limit");
    pr.q = field::find_prime(uint64_t(m) + 1, 2 * uint64_t(m));
  }
  if (pr.q <= pr.B) throw std::invalid_argument("q leaves no challenge point");
  return pr;
}

unsigned TriangleParams::color_bits() const {
  return unsigned(std::bit_width(n_eff - 1) ? std::bit_width(n_eff - 1) : 1);
}

size_t TriangleParams::bundle_bytes(size_t degree) const {
  return 4 + ((degree + 1) * color_bits() + 7) / 8;
}

size_t TriangleParams::rank_of(uint64_t id) const {
  auto it = std::lower_bound(sorted_ids.begin(), sorted_ids.end(), id);
  if (it == sorted_ids.end() || *it != id)
    throw IdOutOfRange("identifier " + std::to_string(id) + " not in table");
  return size_t(it - sorted_ids.begin());
}

std::pair<uint64_t, uint64_t> id_split(uint64_t dense_id, uint64_t B,
                                       uint64_t alpha_eff) {
  if (dense_id >= B * alpha_eff)
    throw IdOutOfRange("dense id " + std::to_string(dense_id) + " outside [" +
                       std::to_string(B * alpha_eff) + "]");
  return {dense_id % B, dense_id / B};
}

field::Polynomial track_polynomial(
    const TriangleParams& pr,
    const std::vector<std::pair<uint64_t, uint64_t>>& slots, uint64_t t,
    uint64_t r) {
  std::vector<std::pair<uint64_t, uint64_t>> pts;
  for (uint64_t i = 0; i < pr.B; i++) {
    bool present = false;
    for (const auto& s : slots)
      if (s.first == i && s.second == t) {
        present = true;
        break;
      }
    pts.emplace_back(i, present ? 1 : 0);
  }
  pts.emplace_back(pr.B, r);
  return Polynomial::interpolate(pr.fld(), pts);
}

Bytes Cert::serialize(const TriangleParams& pr) const {
  Bytes out;
  if (pr.id_mode == IdMode::idfree) {
    wire::BitWriter bw;
    for (uint64_t c : colors) bw.put(c, pr.color_bits());
    Bytes packed = bw.take();
    wire::put_u32(out, uint32_t(packed.size()));
    out.insert(out.end(), packed.begin(), packed.end());
  }
  std::vector<uint64_t> words;
  words.reserve(pr.cert_words());
  words.insert(words.end(), r_vec.begin(), r_vec.end());
  words.insert(words.end(), p0.begin(), p0.end());
  words.insert(words.end(), h.begin(), h.end());
  Bytes tail = wire::pack_words(words);
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

std::optional<Cert> Cert::parse(const TriangleParams& pr, size_t degree,
                                std::span<const uint8_t> bytes) {
  Cert cert;
  size_t off = 0;
  if (pr.id_mode == IdMode::idfree) {
    size_t expect = pr.bundle_bytes(degree) - 4;
    if (bytes.size() < 4) return std::nullopt;
    uint32_t len = 0;
    for (int i = 0; i < 4; i++) len |= uint32_t(bytes[i]) << (8 * i);
    if (len != expect || bytes.size() < 4 + expect) return std::nullopt;
    wire::BitReader br(bytes.subspan(4, expect));
    for (size_t k = 0; k < degree + 1; k++) {
      auto c = br.get(pr.color_bits());
      if (!c || *c >= pr.n_eff) return std::nullopt;
      cert.colors.push_back(*c);
    }
    off = 4 + expect;
  }
  auto words = wire::parse_words(bytes.subspan(off), pr.cert_words(), pr.q);
  if (!words) return std::nullopt;
  size_t len = pr.share_len();
  cert.r_vec.assign(words->begin(), words->begin() + pr.alpha_eff);
  cert.p0.assign(words->begin() + pr.alpha_eff,
                 words->begin() + pr.alpha_eff + len);
  cert.h.assign(words->begin() + pr.alpha_eff + len, words->end());
  return cert;
}

std::vector<Cert> merlin(const TriangleParams& pr, const graph::Configuration& g,
                         RandomStream& rng, bool require_negative,
                         const std::vector<uint64_t>* coloring_override) {
  if (require_negative && graph::count_triangles(g) != 0)
    throw std::invalid_argument("instance has a triangle");
  const size_t n = g.n();
  PrimeField f = pr.fld();

  std::vector<uint64_t> rank(n);
  if (pr.id_mode == IdMode::ids) {
    for (size_t u = 0; u < n; u++) rank[u] = pr.rank_of(g.id(u));
  } else if (coloring_override) {
    if (coloring_override->size() != n)
      throw std::invalid_argument("coloring override length mismatch");
    for (size_t u = 0; u < n; u++) {
      if ((*coloring_override)[u] >= pr.n_eff)
        throw IdOutOfRange("override color outside palette");
      rank[u] = (*coloring_override)[u];
    }
  } else {
    auto d3 = graph::distance3_coloring(g);
    if (d3.palette > pr.n_eff)
      throw std::logic_error("distance-3 palette exceeds the id space");
    std::vector<uint64_t> perm(pr.n_eff);
    for (uint64_t i = 0; i < pr.n_eff; i++) perm[i] = i;
    for (size_t i = pr.n_eff; i > 1; i--)
      std::swap(perm[i - 1], perm[rng.uniform_below(i)]);
    for (size_t u = 0; u < n; u++) rank[u] = perm[d3.color[u]];
  }

  std::vector<std::vector<std::pair<uint64_t, uint64_t>>> nbr_slots(n);
  for (size_t u = 0; u < n; u++)
    for (size_t v : g.ports(u))
      nbr_slots[u].push_back(id_split(rank[v], pr.B, pr.alpha_eff));

  std::vector<Cert> certs(n);
  std::vector<std::vector<Polynomial>> P(n);
  std::vector<Polynomial> H;
  H.reserve(n);
  for (size_t u = 0; u < n; u++) {
    for (uint64_t t = 0; t < pr.alpha_eff; t++) {
      certs[u].r_vec.push_back(f.uniform(rng));
      P[u].push_back(track_polynomial(pr, nbr_slots[u], t, certs[u].r_vec[t]));
    }
    H.push_back(Polynomial::random(f, 2 * pr.B, rng));
    certs[u].h = H[u].coeffs_padded(pr.share_len());
    if (pr.id_mode == IdMode::idfree) {
      certs[u].colors.push_back(rank[u]);
      for (size_t v : g.ports(u)) certs[u].colors.push_back(rank[v]);
    }
  }
  for (size_t u = 0; u < n; u++) {
    Polynomial p0 = Polynomial::zero(f, 2 * pr.B);
    for (size_t v : g.ports(u)) {
      for (uint64_t t = 0; t < pr.alpha_eff; t++)
        p0 = p0.add(P[u][t].mul(P[v][t]));
      p0 = p0.sub(H[v]);
    }
    certs[u].p0 = p0.coeffs_padded(pr.share_len());
  }
  return certs;
}

static std::vector<Bytes> pack_certs(const TriangleParams& pr,
                                     const std::vector<Cert>& certs) {
  std::vector<Bytes> out;
  out.reserve(certs.size());
  for (const Cert& cert : certs) out.push_back(cert.serialize(pr));
  return out;
}

// Slots of the node's neighbors, from whichever identifier source the
// mode prescribes; nullopt when the certificate or table is unusable.
static std::optional<std::vector<std::pair<uint64_t, uint64_t>>> neighbor_slots(
    const TriangleParams& pr, const engine::NodeCtx& ctx, const Cert& cert) {
  std::vector<std::pair<uint64_t, uint64_t>> slots;
  try {
    if (pr.id_mode == IdMode::ids) {
      for (uint64_t id : ctx.local.neighbor_ids)
        slots.push_back(id_split(pr.rank_of(id), pr.B, pr.alpha_eff));
    } else {
      for (size_t p = 0; p < ctx.local.degree; p++)
        slots.push_back(id_split(cert.colors[1 + p], pr.B, pr.alpha_eff));
    }
  } catch (const IdOutOfRange&) {
    return std::nullopt;
  }
  return slots;
}

size_t TriangleProtocol::cert_bytes_for(size_t degree) const {
  size_t base = pr_.cert_words() * 8;
  return pr_.id_mode == IdMode::idfree ? base + pr_.bundle_bytes(degree) : base;
}

Bytes TriangleProtocol::node_send(const engine::NodeCtx& ctx, int, size_t) const {
  auto cert = Cert::parse(pr_, ctx.local.degree, *ctx.sigma);
  if (!cert) return {};
  auto slots = neighbor_slots(pr_, ctx, *cert);
  if (!slots) return {};
  PrimeField f = pr_.fld();
  uint64_t point = ctx.shared->challenge("triangle/istar", pr_.B, pr_.q);
  Polynomial h(f, cert->h);
  std::vector<uint64_t> words;
  for (uint64_t i = 0; i < pr_.B; i++) words.push_back(h.eval(i));
  words.push_back(h.eval(point));
  for (uint64_t t = 0; t < pr_.alpha_eff; t++)
    words.push_back(track_polynomial(pr_, *slots, t, cert->r_vec[t]).eval(point));
  return wire::pack_words(words);
}

engine::Verdict TriangleProtocol::node_verify(const engine::NodeCtx& ctx) const {
  auto cert = Cert::parse(pr_, ctx.local.degree, *ctx.sigma);
  if (!cert) return engine::Verdict::reject;
  auto slots = neighbor_slots(pr_, ctx, *cert);
  if (!slots) return engine::Verdict::reject;
  PrimeField f = pr_.fld();
  uint64_t point = ctx.shared->challenge("triangle/istar", pr_.B, pr_.q);
  const size_t deg = ctx.local.degree;

  std::vector<std::vector<uint64_t>> msgs(deg);
  for (size_t p = 0; p < deg; p++) {
    auto m = wire::parse_words((*ctx.received)[0][p], pr_.msg_words(), pr_.q);
    if (!m) return engine::Verdict::reject;
    msgs[p] = std::move(*m);
  }

  Polynomial p0(f, cert->p0);
  for (uint64_t i = 0; i < pr_.B; i++) {
    uint64_t sum = p0.eval(i);
    for (size_t p = 0; p < deg; p++) sum = f.add(sum, msgs[p][i]);
    if (sum != 0) return engine::Verdict::reject;
  }

  std::vector<uint64_t> own(pr_.alpha_eff);
  for (uint64_t t = 0; t < pr_.alpha_eff; t++)
    own[t] = track_polynomial(pr_, *slots, t, cert->r_vec[t]).eval(point);
  uint64_t lhs = 0, rhs = p0.eval(point);
  for (size_t p = 0; p < deg; p++) {
    for (uint64_t t = 0; t < pr_.alpha_eff; t++)
      lhs = f.add(lhs, f.mul(own[t], msgs[p][pr_.B + 1 + t]));
    rhs = f.add(rhs, msgs[p][pr_.B]);
  }
  return lhs == rhs ? engine::Verdict::accept : engine::Verdict::reject;
}

std::vector<uint64_t> TriangleProtocol::drawn_randomness(
    const engine::NodeCtx& ctx) const {
  return {ctx.shared->challenge("triangle/istar", pr_.B, pr_.q)};
}

std::vector<Bytes> HonestStrategy::certificates(const graph::Configuration& g) const {
  RandomStream rng(label_key(seed_, "merlin"));
  return pack_certs(pr_, merlin(pr_, g, rng));
}

std::vector<Bytes> ZeroForcingStrategy::certificates(
    const graph::Configuration& g) const {
  RandomStream rng(label_key(seed_, "merlin"));
  std::vector<Cert> certs = merlin(pr_, g, rng, false);
  PrimeField f = pr_.fld();
  for (size_t u = 0; u < g.n(); u++) {
    Polynomial acc = Polynomial::zero(f, 2 * pr_.B);
    for (size_t v : g.ports(u)) acc = acc.add(Polynomial(f, certs[v].h));
    certs[u].p0 =
        Polynomial::zero(f, 2 * pr_.B).sub(acc).coeffs_padded(pr_.share_len());
  }
  return pack_certs(pr_, certs);
}

std::vector<Bytes> BundleOverrideStrategy::certificates(
    const graph::Configuration& g) const {
  RandomStream rng(label_key(seed_, "merlin"));
  return pack_certs(pr_, merlin(pr_, g, rng, false, &coloring_));
}

engine::View simulate_view(const TriangleParams& pr, const engine::LocalView& local,
                           uint64_t seed) {
  PrimeField f = pr.fld();
  RandomStream rng(label_key(seed, "triangle-sim"));
  const size_t deg = local.degree;

  uint64_t point = rng.uniform_range(pr.B, pr.q);
  Cert cert;
  if (pr.id_mode == IdMode::idfree) {
    // closed neighborhood gets distinct uniform colors
    std::vector<uint64_t> drawn;
    while (drawn.size() < deg + 1) {
      uint64_t c = rng.uniform_below(pr.n_eff);
      if (std::find(drawn.begin(), drawn.end(), c) == drawn.end())
        drawn.push_back(c);
    }
    cert.colors = drawn;
  }
  for (uint64_t t = 0; t < pr.alpha_eff; t++) cert.r_vec.push_back(f.uniform(rng));
  cert.p0.resize(pr.share_len());
  cert.h.resize(pr.share_len());
  for (auto& x : cert.p0) x = f.uniform(rng);
  for (auto& x : cert.h) x = f.uniform(rng);

  std::vector<std::pair<uint64_t, uint64_t>> slots;
  if (pr.id_mode == IdMode::ids) {
    for (uint64_t id : local.neighbor_ids)
      slots.push_back(id_split(pr.rank_of(id), pr.B, pr.alpha_eff));
  } else {
    for (size_t p = 0; p < deg; p++)
      slots.push_back(id_split(cert.colors[1 + p], pr.B, pr.alpha_eff));
  }

  Polynomial p0(f, cert.p0);
  std::vector<uint64_t> own(pr.alpha_eff);
  for (uint64_t t = 0; t < pr.alpha_eff; t++)
    own[t] = track_polynomial(pr, slots, t, cert.r_vec[t]).eval(point);

  std::vector<std::vector<uint64_t>> msgs(deg,
                                          std::vector<uint64_t>(pr.msg_words()));
  for (uint64_t i = 0; i < pr.B; i++) {
    uint64_t others = 0;
    for (size_t p = 1; p < deg; p++) {
      msgs[p][i] = f.uniform(rng);
      others = f.add(others, msgs[p][i]);
    }
    msgs[0][i] = f.neg(f.add(p0.eval(i), others));
  }
  uint64_t cross = 0;
  for (size_t p = 0; p < deg; p++)
    for (uint64_t t = 0; t < pr.alpha_eff; t++) {
      msgs[p][pr.B + 1 + t] = f.uniform(rng);
      cross = f.add(cross, f.mul(own[t], msgs[p][pr.B + 1 + t]));
    }
  uint64_t others = 0;
  for (size_t p = 1; p < deg; p++) {
    msgs[p][pr.B] = f.uniform(rng);
    others = f.add(others, msgs[p][pr.B]);
  }
  msgs[0][pr.B] = f.sub(cross, f.add(p0.eval(point), others));

  engine::View w;
  w.state = local;
  w.seed = seed;
  w.randomness = {point};
  w.sigma = cert.serialize(pr);
  w.received.resize(1);
  for (size_t p = 0; p < deg; p++) w.received[0].push_back(wire::pack_words(msgs[p]));
  return w;
}

std::vector<uint64_t> view_coordinates(const TriangleParams& pr,
                                       const engine::View& w) {
  auto cert = Cert::parse(pr, w.state.degree, w.sigma);
  if (!cert) throw std::invalid_argument("view certificate unparseable");
  std::vector<uint64_t> coords;
  coords.insert(coords.end(), cert->r_vec.begin(), cert->r_vec.end());
  coords.insert(coords.end(), cert->p0.begin(), cert->p0.end());
  coords.insert(coords.end(), cert->h.begin(), cert->h.end());
  for (const Bytes& msg : w.received.at(0)) {
    auto words = wire::parse_words(msg, pr.msg_words(), pr.q);
    if (!words) throw std::invalid_argument("view message unparseable");
    coords.insert(coords.end(), words->begin(), words->end());
  }
  return coords;
}

bool view_passes_checks(const TriangleParams& pr, const engine::View& w) {
  auto cert = Cert::parse(pr, w.state.degree, w.sigma);
  if (!cert) return false;
  PrimeField f = pr.fld();
  uint64_t point = w.randomness.at(0);
  const size_t deg = w.state.degree;

  std::vector<std::pair<uint64_t, uint64_t>> slots;
  try {
    if (pr.id_mode == IdMode::ids) {
      for (uint64_t id : w.state.neighbor_ids)
        slots.push_back(id_split(pr.rank_of(id), pr.B, pr.alpha_eff));
    } else {
      for (size_t p = 0; p < deg; p++)
        slots.push_back(id_split(cert->colors[1 + p], pr.B, pr.alpha_eff));
    }
  } catch (const IdOutOfRange&) {
    return false;
  }

  std::vector<std::vector<uint64_t>> msgs;
  for (const Bytes& msg : w.received.at(0)) {
    auto words = wire::parse_words(msg, pr.msg_words(), pr.q);
    if (!words) return false;
    msgs.push_back(std::move(*words));
  }
  Polynomial p0(f, cert->p0);
  for (uint64_t i = 0; i < pr.B; i++) {
    uint64_t sum = p0.eval(i);
    for (const auto& m : msgs) sum = f.add(sum, m[i]);
    if (sum != 0) return false;
  }
  std::vector<uint64_t> own(pr.alpha_eff);
  for (uint64_t t = 0; t < pr.alpha_eff; t++)
    own[t] = track_polynomial(pr, slots, t, cert->r_vec[t]).eval(point);
  uint64_t lhs = 0, rhs = p0.eval(point);
  for (const auto& m : msgs) {
    for (uint64_t t = 0; t < pr.alpha_eff; t++)
      lhs = f.add(lhs, f.mul(own[t], m[pr.B + 1 + t]));
    rhs = f.add(rhs, m[pr.B]);
  }
  return lhs == rhs;
}

}  // namespace dnizk::triangle

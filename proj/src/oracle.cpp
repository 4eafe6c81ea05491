#include "rinv/oracle.hpp"

#include <stdexcept>

namespace rinv {

namespace {

// splitmix64; deterministic across platforms.
struct Rng {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  int uniform(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

}  // namespace

PolyContext::PolyContext(int max_degree) : d_(max_degree) {
  const int base = d_ + 1;
  packed_.assign(base * base * base * base, -1);
  for (int deg = 0; deg <= d_; ++deg)
    for (int e0 = deg; e0 >= 0; --e0)
      for (int e1 = deg - e0; e1 >= 0; --e1)
        for (int e2 = deg - e0 - e1; e2 >= 0; --e2) {
          const int e3 = deg - e0 - e1 - e2;
          const std::array<std::uint8_t, 4> e{
              static_cast<std::uint8_t>(e0), static_cast<std::uint8_t>(e1),
              static_cast<std::uint8_t>(e2), static_cast<std::uint8_t>(e3)};
          packed_[((e0 * base + e1) * base + e2) * base + e3] =
              static_cast<int>(exps_.size());
          exps_.push_back(e);
          deg_.push_back(deg);
        }
  for (int v = 0; v < 4; ++v) {
    std::array<std::uint8_t, 4> e{0, 0, 0, 0};
    e[v] = 1;
    var_[v] = index_of(e);
  }
}

int PolyContext::index_of(const std::array<std::uint8_t, 4>& e) const {
  const int base = d_ + 1;
  if (e[0] + e[1] + e[2] + e[3] > d_) return -1;
  return packed_[((e[0] * base + e[1]) * base + e[2]) * base + e[3]];
}

Poly::Poly(const PolyContext* ctx) : ctx_(ctx), c_(ctx->count(), Rational(0)) {}

Poly Poly::constant(const PolyContext* ctx, const Rational& c) {
  Poly p(ctx);
  p.c_[0] = c;
  return p;
}

bool Poly::zero() const {
  for (const auto& x : c_)
    if (x != 0) return false;
  return true;
}

Poly& Poly::operator+=(const Poly& o) {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (o.c_[i] != 0) c_[i] += o.c_[i];
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (o.c_[i] != 0) c_[i] -= o.c_[i];
  return *this;
}

Poly Poly::mul(const Poly& o, int out_deg) const {
  if (out_deg < 0) out_deg = ctx_->max_degree();
  Poly r(ctx_);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    const int di = ctx_->total_degree(static_cast<int>(i));
    if (di > out_deg) break;  // graded order
    const auto& ei = ctx_->exponents(static_cast<int>(i));
    for (std::size_t j = 0; j < o.c_.size(); ++j) {
      if (o.c_[j] == 0) continue;
      if (di + ctx_->total_degree(static_cast<int>(j)) > out_deg) break;
      const auto& ej = ctx_->exponents(static_cast<int>(j));
      const std::array<std::uint8_t, 4> e{
          static_cast<std::uint8_t>(ei[0] + ej[0]), static_cast<std::uint8_t>(ei[1] + ej[1]),
          static_cast<std::uint8_t>(ei[2] + ej[2]), static_cast<std::uint8_t>(ei[3] + ej[3])};
      r.c_[ctx_->index_of(e)] += c_[i] * o.c_[j];
    }
  }
  return r;
}

Poly Poly::diff(int var) const {
  Poly r(ctx_);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    auto e = ctx_->exponents(static_cast<int>(i));
    if (e[var] == 0) continue;
    const int k = e[var];
    e[var] = static_cast<std::uint8_t>(k - 1);
    r.c_[ctx_->index_of(e)] += c_[i] * k;
  }
  return r;
}

Poly& Poly::scale(const Rational& c) {
  for (auto& x : c_)
    if (x != 0) x *= c;
  return *this;
}

PolyMetric PolyMetric::flat(const PolyContext* ctx, int signature) {
  PolyMetric m;
  m.degree = ctx->max_degree();
  m.signature = signature;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      m.g[a][b] = Poly::constant(ctx, a == b ? Rational(m.eta(a)) : Rational(0));
  return m;
}

PolyMetric PolyMetric::random(const PolyContext* ctx, std::uint64_t seed, int signature) {
  PolyMetric m = flat(ctx, signature);
  Rng rng{seed};
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b)
      for (int idx = 1; idx < ctx->count(); ++idx) {
        const Rational c(rng.uniform(-3, 3));
        m.g[a][b].at(idx) += c;
        if (a != b) m.g[b][a].at(idx) += c;
      }
  return m;
}

const Rational& CurvatureJet::component(int k, const std::vector<int>& idx) const {
  std::size_t flat = 0;
  for (int v : idx) flat = flat * 4 + static_cast<std::size_t>(v);
  return covR[k][flat];
}

MetricGeometry christoffel(const PolyMetric& metric) {
  const PolyContext* ctx = metric.g[0][0].ctx();
  const int D = ctx->max_degree();
  MetricGeometry geo;

  // Inverse metric by Neumann series: g = eta + h, g^-1 = sum (-eta h)^k eta.
  std::array<std::array<Poly, 4>, 4> h, term;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      h[a][b] = metric.g[a][b];
      h[a][b].at(0) -= Rational(a == b ? metric.eta(a) : 0);
      geo.ginv[a][b] = Poly::constant(ctx, a == b ? Rational(metric.eta(a)) : Rational(0));
      term[a][b] = geo.ginv[a][b];
    }
  for (int it = 0; it < D; ++it) {
    // term <- -eta h term
    std::array<std::array<Poly, 4>, 4> next;
    bool any = false;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        Poly acc(ctx);
        for (int e = 0; e < 4; ++e) acc += h[a][e].mul(term[e][b]);
        acc.scale(Rational(-metric.eta(a)));
        any = any || !acc.zero();
        next[a][b] = std::move(acc);
      }
    if (!any) break;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) geo.ginv[a][b] += next[a][b];
    term = std::move(next);
  }

  // Christoffel symbols Gamma^a_{bc}, needed to degree D-1.
  const int dG = D - 1;
  for (int b = 0; b < 4; ++b)
    for (int c = b; c < 4; ++c) {
      std::array<Poly, 4> lower;
      for (int d = 0; d < 4; ++d) {
        lower[d] = metric.g[d][c].diff(b);
        lower[d] += metric.g[d][b].diff(c);
        lower[d] -= metric.g[b][c].diff(d);
      }
      for (int a = 0; a < 4; ++a) {
        Poly acc(ctx);
        for (int d = 0; d < 4; ++d) acc += geo.ginv[a][d].mul(lower[d], dG);
        acc.scale(Rational(1, 2));
        geo.gamma[a][b][c] = acc;
        if (b != c) geo.gamma[a][c][b] = geo.gamma[a][b][c];
      }
    }
  return geo;
}

CurvatureJet curvature_jet(const PolyMetric& metric, int maxderiv) {
  const PolyContext* ctx = metric.g[0][0].ctx();
  const int D = ctx->max_degree();
  if (D < maxderiv + 2)
    throw std::invalid_argument("polynomial degree too small for requested jet depth");

  const MetricGeometry geo = christoffel(metric);
  const auto& Gamma = geo.gamma;

  // R_{abc}^d = -d_a Gamma^d_{bc} + d_b Gamma^d_{ac}
  //            + Gamma^e_{ac} Gamma^d_{be} - Gamma^e_{bc} Gamma^d_{ae},
  // then all indices down. Degree D-2.
  const int dR = D - 2;
  std::vector<Poly> riem(256);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        std::array<Poly, 4> up;
        for (int d = 0; d < 4; ++d) {
          Poly acc = Gamma[d][a][c].diff(b);
          acc -= Gamma[d][b][c].diff(a);
          for (int e = 0; e < 4; ++e) {
            acc += Gamma[e][a][c].mul(Gamma[d][b][e], dR);
            acc -= Gamma[e][b][c].mul(Gamma[d][a][e], dR);
          }
          up[d] = std::move(acc);
        }
        for (int d = 0; d < 4; ++d) {
          Poly acc(ctx);
          for (int e = 0; e < 4; ++e) acc += metric.g[e][d].mul(up[e], dR);
          riem[static_cast<std::size_t>(((a * 4 + b) * 4 + c) * 4 + d)] = std::move(acc);
        }
      }

  // Covariant derivatives, new index appended last (innermost-first layout).
  CurvatureJet jet;
  jet.maxderiv = maxderiv;
  jet.signature = metric.signature;
  jet.covR.resize(maxderiv + 1);
  std::vector<Poly> cur = std::move(riem);
  int rank = 4;
  for (int k = 0; k <= maxderiv; ++k) {
    jet.covR[k].resize(cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i) jet.covR[k][i] = cur[i].value_at_origin();
    if (k == maxderiv) break;
    const int deg = D - 2 - (k + 1);
    std::vector<Poly> next(cur.size() * 4);
    std::vector<int> idx(rank);
    for (std::size_t flat = 0; flat < cur.size(); ++flat) {
      std::size_t f = flat;
      for (int p = rank - 1; p >= 0; --p) {
        idx[p] = static_cast<int>(f & 3);
        f >>= 2;
      }
      for (int b = 0; b < 4; ++b) {
        Poly acc = cur[flat].diff(b);
        for (int p = 0; p < rank; ++p) {
          const int save = idx[p];
          std::size_t base = 0;
          for (int q = 0; q < rank; ++q) base = base * 4 + static_cast<std::size_t>(q == p ? 0 : idx[q]);
          const std::size_t stride = 1ull << (2 * (rank - 1 - p));
          for (int e = 0; e < 4; ++e)
            acc -= Gamma[e][b][save].mul(cur[base + stride * static_cast<std::size_t>(e)], deg);
        }
        next[flat * 4 + static_cast<std::size_t>(b)] = std::move(acc);
      }
    }
    cur = std::move(next);
    ++rank;
  }
  return jet;
}

namespace {

int eps_sign(const int v[4]) {
  int sign = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (v[i] == v[j]) return 0;
      if (v[i] > v[j]) sign = -sign;
    }
  return sign;
}

}  // namespace

Rational eval_monomial(const Monomial& m, const CurvatureJet& jet) {
  const Case& c = m.cs;
  for (auto l : c.lambdas)
    if (l > jet.maxderiv) throw std::invalid_argument("jet depth too small for case " + c.str());
  const int n = c.slot_count();
  std::vector<int> pair_of_slot(n, -1), first_slot, second_slot;
  for (int s = 0; s < n; ++s)
    if (m.pairing[s] > s) {
      pair_of_slot[s] = pair_of_slot[m.pairing[s]] = static_cast<int>(first_slot.size());
      first_slot.push_back(s);
      second_slot.push_back(m.pairing[s]);
    }
  const int npairs = n / 2;
  const auto spans = factor_spans(c);
  const int eb = eps_begin(c);

  std::vector<int> v(npairs, 0), slot_val(n, 0);
  Rational total(0);
  for (;;) {
    for (int p = 0; p < npairs; ++p) slot_val[first_slot[p]] = slot_val[second_slot[p]] = v[p];
    int weight = 1;
    for (int p = 0; p < npairs; ++p)
      if (v[p] == 0) weight *= jet.signature;  // eta^{00} on each contracted pair
    Rational prod(weight);
    if (c.dual) {
      const int sg = eps_sign(&slot_val[eb]);
      if (sg == 0) prod = 0;
      else if (sg < 0) prod = -prod;
    }
    if (prod != 0) {
      for (int f = 0; f < c.degree() && prod != 0; ++f) {
        std::size_t flat = 0;
        for (int k = 0; k < spans[f].size(); ++k)
          flat = flat * 4 + static_cast<std::size_t>(slot_val[spans[f].begin + k]);
        const Rational& comp = jet.covR[spans[f].lambda][flat];
        if (comp == 0) prod = 0;
        else prod *= comp;
      }
      total += prod;
    }
    int p = npairs - 1;
    while (p >= 0 && v[p] == 3) v[p--] = 0;
    if (p < 0) break;
    ++v[p];
  }
  return total;
}

void JetEvaluator::add_case(const Case& c, const std::vector<Pairing>& entries) {
  entries_[c] = entries;
}

Rational JetEvaluator::value(const InvariantId& id) const {
  auto it = entries_.find(id.cs);
  if (it == entries_.end()) throw std::invalid_argument("unknown case " + id.cs.str());
  if (id.index < 1 || id.index > static_cast<std::int32_t>(it->second.size()))
    throw std::invalid_argument("unknown invariant " + id.str());
  auto& cache = cache_[id.cs];
  if (cache.empty()) cache.resize(it->second.size(), {false, Rational(0)});
  auto& slot = cache[id.index - 1];
  if (!slot.first) {
    slot.second = eval_monomial(Monomial{id.cs, it->second[id.index - 1]}, *jet_);
    slot.first = true;
  }
  return slot.second;
}

Rational JetEvaluator::value(const LinComb& comb) const {
  Rational total(0);
  for (const auto& [id, coeff] : comb.terms) total += coeff * value(id);
  for (const auto& [key, coeff] : comb.products) {
    Rational prod = coeff;
    for (const auto& id : key) {
      if (prod == 0) break;
      prod *= value(id);
    }
    total += prod;
  }
  return total;
}

}  // namespace rinv

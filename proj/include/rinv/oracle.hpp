#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "rinv/lincomb.hpp"
#include "rinv/monomial.hpp"
#include "rinv/rational.hpp"

namespace rinv {

// Truncated polynomial in the 4 chart coordinates, exact coefficients.
// Exponent tuples are indexed densely up to the shared degree bound.
class PolyContext;

class Poly {
 public:
  Poly() = default;
  explicit Poly(const PolyContext* ctx);
  static Poly constant(const PolyContext* ctx, const Rational& c);

  const PolyContext* ctx() const { return ctx_; }
  bool zero() const;
  const Rational& at(int idx) const { return c_[idx]; }
  Rational& at(int idx) { return c_[idx]; }
  const Rational& value_at_origin() const { return c_[0]; }

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  // Product truncated to total degree out_deg (negative: context bound).
  Poly mul(const Poly& o, int out_deg = -1) const;
  Poly diff(int var) const;
  Poly& scale(const Rational& c);

 private:
  const PolyContext* ctx_ = nullptr;
  std::vector<Rational> c_;
};

class PolyContext {
 public:
  explicit PolyContext(int max_degree);
  int max_degree() const { return d_; }
  int count() const { return static_cast<int>(exps_.size()); }
  const std::array<std::uint8_t, 4>& exponents(int idx) const { return exps_[idx]; }
  int total_degree(int idx) const { return deg_[idx]; }
  // Index of an exponent tuple, -1 when above the bound.
  int index_of(const std::array<std::uint8_t, 4>& e) const;
  int var_index(int var) const { return var_[var]; }

 private:
  int d_;
  std::vector<std::array<std::uint8_t, 4>> exps_;  // graded order, constant first
  std::vector<int> deg_;
  std::vector<int> packed_;  // (d+1)-ary packed exponents -> index
  std::array<int, 4> var_;
};

// g_ab = eta_ab + h_ab with h a random symmetric polynomial, zero at the
// origin, so the chart is exactly orthonormal there. signature -1 gives
// eta = diag(-1,1,1,1), +1 the Euclidean identity.
struct PolyMetric {
  int degree = 0;
  int signature = -1;
  std::array<std::array<Poly, 4>, 4> g;

  static PolyMetric flat(const PolyContext* ctx, int signature);
  // Seeded integer coefficients in [-3,3] on every monomial of degree 1..D.
  static PolyMetric random(const PolyContext* ctx, std::uint64_t seed, int signature);
  int eta(int a) const { return a == 0 ? signature : 1; }
};

// Inverse metric and Christoffel symbols as truncated polynomials; the
// building blocks of the jet, exposed so tests can pin the conventions
// against first principles.
struct MetricGeometry {
  std::array<std::array<Poly, 4>, 4> ginv;
  std::array<std::array<std::array<Poly, 4>, 4>, 4> gamma;  // gamma[a][b][c] = Gamma^a_bc
};
MetricGeometry christoffel(const PolyMetric& g);

// Components of the curvature tensor and its first maxderiv covariant
// derivatives at the origin. Index order per slot layout: four curvature
// indices then derivative indices innermost-first.
struct CurvatureJet {
  int maxderiv = 0;
  int signature = -1;
  std::vector<std::vector<Rational>> covR;  // covR[k]: 4^(4+k) components

  const Rational& component(int k, const std::vector<int>& idx) const;
};

// Exact jets from Christoffel symbols of the metric; requires the metric's
// polynomial degree >= maxderiv + 2 so the top derivatives keep full
// coefficient content.
CurvatureJet curvature_jet(const PolyMetric& g, int maxderiv);

// Exact value of one scalar monomial on the jet: sum over all index
// assignments of the contraction pattern, eta weights on every pair,
// epsilon components at the origin for the dual factor.
Rational eval_monomial(const Monomial& m, const CurvatureJet& jet);

// Values for every indexed invariant of the cases present, so combinations
// and relation sweeps evaluate by dot product.
class JetEvaluator {
 public:
  JetEvaluator(const CurvatureJet* jet) : jet_(jet) {}
  // Registers a case table's entries for id lookups.
  void add_case(const Case& c, const std::vector<Pairing>& entries);
  Rational value(const InvariantId& id) const;
  Rational value(const LinComb& comb) const;

 private:
  const CurvatureJet* jet_;
  std::map<Case, std::vector<Pairing>> entries_;
  mutable std::map<Case, std::vector<std::pair<bool, Rational>>> cache_;
};

}  // namespace rinv

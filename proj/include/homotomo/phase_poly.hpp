#pragma once

// Normal-ordered polynomials in a, a^dag with Laurent dependence on e^{i phi}:
//   A = sum c_{n,m,k} a^dag^n a^m e^{i k phi}.

#include "homotomo/exact.hpp"

#include <Eigen/Dense>

#include <compare>
#include <functional>
#include <map>
#include <string>

namespace homotomo {

struct Monomial {
  int n = 0;  // power of a^dag
  int m = 0;  // power of a
  int k = 0;  // phase index
  auto operator<=>(const Monomial&) const = default;
};

struct DegreeBudget {
  int max_degree = 24;  // n + m
  int max_phase = 24;   // |k|
  std::size_t max_terms = 200000;
};

/// Ordering parameter s: -1 normal, 0 symmetric, +1 antinormal.
struct OrderingTag {
  mpq_class s;
  static OrderingTag normal() { return {mpq_class(-1)}; }
  static OrderingTag symmetric() { return {mpq_class(0)}; }
  static OrderingTag antinormal() { return {mpq_class(1)}; }
};

class PhasePolyOperator {
 public:
  using Terms = std::map<Monomial, Coeff>;

  PhasePolyOperator() = default;
  PhasePolyOperator(Coeff c) { add(Monomial{}, c); }
  PhasePolyOperator(long c) : PhasePolyOperator(Coeff(c)) {}

  static PhasePolyOperator term(int n, int m, int k, const Coeff& c = Coeff(1));
  static PhasePolyOperator annihilation() { return term(0, 1, 0); }
  static PhasePolyOperator creation() { return term(1, 0, 0); }
  static PhasePolyOperator phase(int k) { return term(0, 0, k); }
  /// X_phi = (a^dag e^{i phi} + a e^{-i phi}) / 2.
  static PhasePolyOperator quadrature();

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Coeff coeff(const Monomial& mono) const;
  void add(const Monomial& mono, const Coeff& c);

  int max_degree() const;
  int max_abs_phase() const;
  void check(const DegreeBudget& budget) const;

  PhasePolyOperator adjoint() const;
  /// Multiplies every term by e^{i shift phi}.
  PhasePolyOperator shifted(int shift) const;

  std::string str() const;

  PhasePolyOperator& operator+=(const PhasePolyOperator& o);
  PhasePolyOperator& operator-=(const PhasePolyOperator& o);
  PhasePolyOperator& operator*=(const Coeff& c);

  friend PhasePolyOperator operator+(PhasePolyOperator a, const PhasePolyOperator& b) { return a += b; }
  friend PhasePolyOperator operator-(PhasePolyOperator a, const PhasePolyOperator& b) { return a -= b; }
  friend PhasePolyOperator operator*(PhasePolyOperator a, const Coeff& c) { return a *= c; }
  friend PhasePolyOperator operator*(const Coeff& c, PhasePolyOperator a) { return a *= c; }
  friend bool operator==(const PhasePolyOperator& a, const PhasePolyOperator& b) { return a.terms_ == b.terms_; }

 private:
  Terms terms_;
};

/// Product AB brought to normal order with [a, a^dag] = 1.
PhasePolyOperator wick_multiply(const PhasePolyOperator& A, const PhasePolyOperator& B,
                                const DegreeBudget& budget = {});
PhasePolyOperator power(const PhasePolyOperator& A, int j, const DegreeBudget& budget = {});

/// Exact average over phi in [0, pi) with measure d phi / pi.
PhasePolyOperator phase_average(const PhasePolyOperator& A);

/// Reinterprets each monomial as :a^dag^n a^m:_from and re-expresses it in ordering `to`.
PhasePolyOperator reorder(const PhasePolyOperator& A, const OrderingTag& from, const OrderingTag& to);

/// X_phi^j in normal order, built from the symmetric-ordered expansion.
PhasePolyOperator quadrature_power(int j, const DegreeBudget& budget = {});

/// 2^{-n/2} H_n(sqrt 2 X_phi) = sum_k C(n,k) a^dag^k a^{n-k} e^{i phi (2k-n)}.
PhasePolyOperator hermite_of_quadrature(int n);

/// Substitutes e^{i phi} = u (|u| = 1 not required) leaving phase index 0.
PhasePolyOperator evaluate_phase(const PhasePolyOperator& A, const CRational& u);

/// Fock-space matrix of A at phase phi, truncated to `dim`; each monomial
/// a^dag^n a^m is formed exactly before truncation.
Eigen::MatrixXcd to_matrix(const PhasePolyOperator& A, int dim, double phi = 0.0);

}  // namespace homotomo

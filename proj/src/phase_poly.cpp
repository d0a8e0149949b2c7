#include "homotomo/phase_poly.hpp"

#include "homotomo/errors.hpp"
#include "homotomo/special.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace homotomo {

PhasePolyOperator PhasePolyOperator::term(int n, int m, int k, const Coeff& c) {
  PhasePolyOperator r;
  r.add(Monomial{n, m, k}, c);
  return r;
}

PhasePolyOperator PhasePolyOperator::quadrature() {
  const Coeff half(CRational(mpq_class(1, 2)));
  return term(1, 0, 1, half) + term(0, 1, -1, half);
}

Coeff PhasePolyOperator::coeff(const Monomial& mono) const {
  auto it = terms_.find(mono);
  return it == terms_.end() ? Coeff() : it->second;
}

void PhasePolyOperator::add(const Monomial& mono, const Coeff& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(mono, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

int PhasePolyOperator::max_degree() const {
  int d = 0;
  for (const auto& [mono, c] : terms_) d = std::max(d, mono.n + mono.m);
  return d;
}

int PhasePolyOperator::max_abs_phase() const {
  int d = 0;
  for (const auto& [mono, c] : terms_) d = std::max(d, std::abs(mono.k));
  return d;
}

void PhasePolyOperator::check(const DegreeBudget& budget) const {
  if (max_degree() > budget.max_degree)
    throw ResourceError("degree " + std::to_string(max_degree()) + " exceeds budget " +
                        std::to_string(budget.max_degree));
  if (max_abs_phase() > budget.max_phase)
    throw ResourceError("phase index " + std::to_string(max_abs_phase()) + " exceeds budget " +
                        std::to_string(budget.max_phase));
  if (size() > budget.max_terms) throw ResourceError("term count exceeds budget");
}

PhasePolyOperator PhasePolyOperator::adjoint() const {
  PhasePolyOperator r;
  for (const auto& [mono, c] : terms_) r.terms_.emplace(Monomial{mono.m, mono.n, -mono.k}, c.conj());
  return r;
}

PhasePolyOperator PhasePolyOperator::shifted(int shift) const {
  PhasePolyOperator r;
  for (const auto& [mono, c] : terms_) r.terms_.emplace(Monomial{mono.n, mono.m, mono.k + shift}, c);
  return r;
}

std::string PhasePolyOperator::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [mono, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "[" << c.str() << "]";
    if (mono.n) os << " a+^" << mono.n;
    if (mono.m) os << " a^" << mono.m;
    if (mono.k) os << " e^{" << mono.k << "i phi}";
  }
  return os.str();
}

PhasePolyOperator& PhasePolyOperator::operator+=(const PhasePolyOperator& o) {
  for (const auto& [mono, c] : o.terms_) add(mono, c);
  return *this;
}

PhasePolyOperator& PhasePolyOperator::operator-=(const PhasePolyOperator& o) {
  for (const auto& [mono, c] : o.terms_) add(mono, -c);
  return *this;
}

PhasePolyOperator& PhasePolyOperator::operator*=(const Coeff& c) {
  Terms out;
  for (auto& [mono, v] : terms_) {
    Coeff w = v * c;
    if (!w.is_zero()) out.emplace(mono, std::move(w));
  }
  terms_ = std::move(out);
  return *this;
}

PhasePolyOperator wick_multiply(const PhasePolyOperator& A, const PhasePolyOperator& B,
                                const DegreeBudget& budget) {
  PhasePolyOperator r;
  for (const auto& [p, cp] : A.terms()) {
    for (const auto& [q, cq] : B.terms()) {
      const Coeff c = cp * cq;
      // a^m a^dag^n = sum_j C(m,j) C(n,j) j! a^dag^{n-j} a^{m-j}
      const int jmax = std::min(p.m, q.n);
      for (int j = 0; j <= jmax; ++j) {
        const mpz_class w = binomial_exact(p.m, j) * binomial_exact(q.n, j) * factorial_exact(j);
        const Monomial mono{p.n + q.n - j, p.m + q.m - j, p.k + q.k};
        if (mono.n + mono.m > budget.max_degree || std::abs(mono.k) > budget.max_phase)
          throw ResourceError("wick_multiply: product exceeds degree budget");
        r.add(mono, c * CRational(mpq_class(w)));
      }
    }
    if (r.size() > budget.max_terms) throw ResourceError("wick_multiply: term count exceeds budget");
  }
  return r;
}

PhasePolyOperator power(const PhasePolyOperator& A, int j, const DegreeBudget& budget) {
  PhasePolyOperator r(1);
  for (int i = 0; i < j; ++i) r = wick_multiply(r, A, budget);
  return r;
}

PhasePolyOperator phase_average(const PhasePolyOperator& A) {
  PhasePolyOperator r;
  for (const auto& [mono, c] : A.terms()) {
    if (mono.k == 0) {
      r.add(mono, c);
    } else if (mono.k % 2 != 0) {
      // (1/pi) int_0^pi e^{ik phi} d phi = 2i / (k pi) for odd k
      r.add(Monomial{mono.n, mono.m, 0}, c * Coeff::inv_pi(CRational(0, mpq_class(2, mono.k))));
    }
  }
  return r;
}

PhasePolyOperator reorder(const PhasePolyOperator& A, const OrderingTag& from, const OrderingTag& to) {
  const mpq_class t = (from.s - to.s) / 2;
  if (sgn(t) == 0) return A;
  PhasePolyOperator r;
  for (const auto& [mono, c] : A.terms()) {
    // :a^dag^k a^l:_s = sum_j k! l! / (j! (k-j)! (l-j)!) ((s-r)/2)^j :a^dag^{k-j} a^{l-j}:_r
    const int jmax = std::min(mono.n, mono.m);
    mpq_class tj = 1;
    for (int j = 0; j <= jmax; ++j, tj *= t) {
      const mpz_class w = binomial_exact(mono.n, j) * binomial_exact(mono.m, j) * factorial_exact(j);
      r.add(Monomial{mono.n - j, mono.m - j, mono.k}, c * CRational(mpq_class(w) * tj));
    }
  }
  return r;
}

PhasePolyOperator quadrature_power(int j, const DegreeBudget& budget) {
  if (j < 0) throw std::invalid_argument("quadrature_power: negative exponent");
  if (j > budget.max_degree || j > budget.max_phase)
    throw ResourceError("quadrature_power: degree exceeds budget");
  PhasePolyOperator sym;
  const mpq_class scale(mpz_class(1), mpz_class(1) << j);
  for (int l = 0; l <= j; ++l)
    sym.add(Monomial{l, j - l, 2 * l - j}, CRational(scale * binomial_exact(j, l)));
  PhasePolyOperator r = reorder(sym, OrderingTag::symmetric(), OrderingTag::normal());
  r.check(budget);
  return r;
}

PhasePolyOperator hermite_of_quadrature(int n) {
  if (n < 0) throw std::invalid_argument("hermite_of_quadrature: negative order");
  PhasePolyOperator r;
  for (int k = 0; k <= n; ++k) r.add(Monomial{k, n - k, 2 * k - n}, CRational(mpq_class(binomial_exact(n, k))));
  return r;
}

PhasePolyOperator evaluate_phase(const PhasePolyOperator& A, const CRational& u) {
  PhasePolyOperator r;
  for (const auto& [mono, c] : A.terms()) r.add(Monomial{mono.n, mono.m, 0}, c * pow(u, mono.k));
  return r;
}

Eigen::MatrixXcd to_matrix(const PhasePolyOperator& A, int dim, double phi) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [mono, c] : A.terms()) {
    const std::complex<double> v = c.to_complex() * std::polar(1.0, mono.k * phi);
    // <p| a^dag^n a^m |q> with p - n = q - m = r >= 0
    for (int r = 0; r + std::max(mono.n, mono.m) < dim; ++r) {
      const int p = r + mono.n, q = r + mono.m;
      const double amp = std::exp(0.5 * (log_factorial(p) + log_factorial(q)) - log_factorial(r));
      out(p, q) += v * amp;
    }
  }
  return out;
}

}  // namespace homotomo

#include "homotomo/exact.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace homotomo {

CRational CRational::inverse() const {
  const mpq_class n = norm();
  if (sgn(n) == 0) throw std::domain_error("CRational: division by zero");
  return {re / n, -im / n};
}

std::string CRational::str() const {
  if (sgn(im) == 0) return re.get_str();
  if (sgn(re) == 0) return im.get_str() + "i";
  std::string s = "(" + re.get_str();
  s += sgn(im) > 0 ? "+" : "-";
  s += mpq_class(abs(im)).get_str() + "i)";
  return s;
}

CRational pow(const CRational& z, int k) {
  if (k < 0) return pow(z.inverse(), -k);
  CRational result(1), base = z;
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

CRational Coeff::part(int power) const {
  auto it = parts_.find(power);
  return it == parts_.end() ? CRational() : it->second;
}

void Coeff::add_power(int power, const CRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = parts_.try_emplace(power, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) parts_.erase(it);
  }
}

Coeff Coeff::conj() const {
  Coeff r;
  for (const auto& [p, c] : parts_) r.parts_.emplace(p, c.conj());
  return r;
}

std::complex<double> Coeff::to_complex() const {
  std::complex<double> v = 0.0;
  for (const auto& [p, c] : parts_) v += c.to_complex() * std::pow(std::numbers::pi, -p);
  return v;
}

std::string Coeff::str() const {
  if (parts_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, c] : parts_) {
    if (!first) os << " + ";
    first = false;
    os << c.str();
    if (p == 1) os << "/pi";
    else if (p != 0) os << "/pi^" << p;
  }
  return os.str();
}

Coeff& Coeff::operator+=(const Coeff& o) {
  for (const auto& [p, c] : o.parts_) add_power(p, c);
  return *this;
}

Coeff& Coeff::operator-=(const Coeff& o) {
  for (const auto& [p, c] : o.parts_) add_power(p, -c);
  return *this;
}

Coeff& Coeff::operator*=(const Coeff& o) {
  Coeff r;
  for (const auto& [p, c] : parts_)
    for (const auto& [q, d] : o.parts_) r.add_power(p + q, c * d);
  parts_ = std::move(r.parts_);
  return *this;
}

Coeff& Coeff::operator*=(const CRational& c) {
  if (c.is_zero()) {
    parts_.clear();
    return *this;
  }
  for (auto& [p, v] : parts_) v *= c;
  return *this;
}

mpz_class binomial_exact(long n, long k) {
  if (k < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

mpz_class factorial_exact(long n) {
  if (n < 0) throw std::domain_error("factorial of negative integer");
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

}  // namespace homotomo

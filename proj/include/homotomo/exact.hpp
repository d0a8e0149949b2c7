#pragma once

// Exact complex rationals and coefficients that are polynomials in 1/pi.

#include <gmpxx.h>

#include <complex>
#include <map>
#include <string>

namespace homotomo {

struct CRational {
  mpq_class re{0}, im{0};

  CRational() = default;
  CRational(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }
  CRational(long r) : re(r), im(0) {}
  CRational(int r) : re(r), im(0) {}

  static CRational i() { return {0, 1}; }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  CRational conj() const { return {re, -im}; }
  mpq_class norm() const { return re * re + im * im; }
  CRational inverse() const;

  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
  std::string str() const;

  CRational& operator+=(const CRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  CRational& operator-=(const CRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  CRational& operator*=(const CRational& o) {
    mpq_class r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  CRational& operator/=(const CRational& o) { return *this *= o.inverse(); }

  friend CRational operator+(CRational a, const CRational& b) { return a += b; }
  friend CRational operator-(CRational a, const CRational& b) { return a -= b; }
  friend CRational operator*(CRational a, const CRational& b) { return a *= b; }
  friend CRational operator/(CRational a, const CRational& b) { return a /= b; }
  friend CRational operator-(const CRational& a) { return {-a.re, -a.im}; }
  friend bool operator==(const CRational& a, const CRational& b) { return a.re == b.re && a.im == b.im; }
};

CRational pow(const CRational& z, int k);

/// Exact scalar of the form sum_p c_p pi^{-p}; p = 0 and p = 1 are the usual cases.
class Coeff {
 public:
  Coeff() = default;
  Coeff(CRational c) { add_power(0, std::move(c)); }
  Coeff(long c) : Coeff(CRational(c)) {}
  Coeff(int c) : Coeff(CRational(c)) {}
  static Coeff inv_pi(CRational c) {
    Coeff r;
    r.add_power(1, std::move(c));
    return r;
  }

  bool is_zero() const { return parts_.empty(); }
  const std::map<int, CRational>& parts() const { return parts_; }
  CRational part(int power) const;
  void add_power(int power, const CRational& c);

  Coeff conj() const;
  /// Numeric value using the double-precision pi.
  std::complex<double> to_complex() const;
  std::string str() const;

  Coeff& operator+=(const Coeff& o);
  Coeff& operator-=(const Coeff& o);
  Coeff& operator*=(const Coeff& o);
  Coeff& operator*=(const CRational& c);

  friend Coeff operator+(Coeff a, const Coeff& b) { return a += b; }
  friend Coeff operator-(Coeff a, const Coeff& b) { return a -= b; }
  friend Coeff operator*(Coeff a, const Coeff& b) { return a *= b; }
  friend Coeff operator*(Coeff a, const CRational& b) { return a *= b; }
  friend Coeff operator-(const Coeff& a) { return a * CRational(-1); }
  friend bool operator==(const Coeff& a, const Coeff& b) { return a.parts_ == b.parts_; }

 private:
  std::map<int, CRational> parts_;
};

/// Binomial coefficient and factorial as exact integers.
mpz_class binomial_exact(long n, long k);
mpz_class factorial_exact(long n);

}  // namespace homotomo

#include "homotomo/identities.hpp"

#include "homotomo/errors.hpp"

#include <array>
#include <map>
#include <tuple>
#include <sstream>
#include <utility>

namespace homotomo {
namespace {

constexpr std::array<std::pair<IdentityId, const char*>, 10> kNames{{
    {IdentityId::MainEquiv, "MAIN_EQUIV"},
    {IdentityId::HermiteEquiv, "HERMITE_EQUIV"},
    {IdentityId::TruncHermite, "TRUNC_HERMITE"},
    {IdentityId::Richter, "RICHTER"},
    {IdentityId::Symm, "SYMM"},
    {IdentityId::SOrder, "S_ORDER"},
    {IdentityId::MuNu, "MU_NU"},
    {IdentityId::Resample, "RESAMPLE"},
    {IdentityId::Poisson, "POISSON"},
    {IdentityId::DisplacementSeries, "DISPLACEMENT_SERIES"},
}};

Coeff rational(const mpq_class& q) { return Coeff(CRational(q)); }

mpq_class inverse_binomial(int n, int k) { return mpq_class(mpz_class(1), binomial_exact(n, k)); }

/// X^0 .. X^j by repeated multiplication.
std::vector<PhasePolyOperator> quadrature_powers(int j, const DegreeBudget& budget) {
  std::vector<PhasePolyOperator> xs{PhasePolyOperator(1)};
  const auto X = PhasePolyOperator::quadrature();
  for (int i = 1; i <= j; ++i) xs.push_back(wick_multiply(xs.back(), X, budget));
  return xs;
}

/// sum_m N! / (m! (N-2m)!) c^m (2X)^{N-2m}, m = 0..mmax.
PhasePolyOperator hermite_like(int N, int mmax, const mpq_class& c, const DegreeBudget& budget) {
  PhasePolyOperator r;
  mpq_class cm = 1;
  for (int m = 0; m <= mmax && 2 * m <= N; ++m, cm *= c) {
    const int d = N - 2 * m;
    const mpq_class w = mpq_class(factorial_exact(N), factorial_exact(m) * factorial_exact(d)) * cm * (mpz_class(1) << d);
    r += quadrature_power(d, budget) * rational(w);
  }
  return r;
}

PhasePolyOperator normal_monomial(int n, int m) { return PhasePolyOperator::term(n, m, 0); }

void check_degree(int degree, const DegreeBudget& budget) {
  if (degree < 0) throw std::invalid_argument("identity parameters must be nonnegative");
  if (degree > budget.max_degree)
    throw ResourceError("identity degree " + std::to_string(degree) + " exceeds budget " +
                        std::to_string(budget.max_degree));
}

struct Routes {
  PhasePolyOperator residual;
  std::string failed;
  void compare(const PhasePolyOperator& lhs, const PhasePolyOperator& rhs, const std::string& route) {
    PhasePolyOperator d = lhs - rhs;
    if (!d.is_zero() && residual.is_zero()) {
      residual = std::move(d);
      failed = route;
    }
  }
};

IdentityReport main_equiv(const IdentityParams& p, bool hermite, const DegreeBudget& budget) {
  check_degree(p.p, budget);
  const PhasePolyOperator base = hermite ? hermite_of_quadrature(p.p) : quadrature_power(p.p, budget);
  const int shift = p.sign * (p.p + 2 * p.q + 2);
  IdentityReport r{hermite ? IdentityId::HermiteEquiv : IdentityId::MainEquiv, {}, phase_average(base.shifted(shift)), false, {}};
  return r;
}

IdentityReport trunc_hermite(const IdentityParams& p, const DegreeBudget& budget) {
  const int l = p.p, n = p.q, N = 2 * l + n;
  check_degree(N, budget);
  // Terms of H_N(kappa X) with m > l: (-1)^m N!/(m!(N-2m)!) (2 kappa)^{N-2m} X^{N-2m}.
  PhasePolyOperator dropped;
  for (int m = l + 1; 2 * m <= N; ++m) {
    const int d = N - 2 * m;
    mpq_class w(factorial_exact(N), factorial_exact(m) * factorial_exact(d));
    mpq_class tk = 2 * p.kappa, pk = 1;
    for (int i = 0; i < d; ++i) pk *= tk;
    w *= pk;
    if (m % 2) w = -w;
    dropped += quadrature_power(d, budget) * rational(w);
  }
  IdentityReport r{IdentityId::TruncHermite, {}, phase_average(dropped.shifted(p.sign * n)), false, {}};
  return r;
}

IdentityReport richter(const IdentityParams& p, const DegreeBudget& budget) {
  const int n = p.p, m = p.q;
  check_degree(n + m, budget);
  const PhasePolyOperator rhs =
      phase_average(hermite_of_quadrature(n + m).shifted(m - n)) * rational(inverse_binomial(n + m, n));
  return {IdentityId::Richter, {}, normal_monomial(n, m) - rhs, false, {}};
}

IdentityReport symm(const IdentityParams& p, const DegreeBudget& budget) {
  const int n = p.p, m = p.q, N = n + m;
  check_degree(N, budget);
  const PhasePolyOperator lhs = reorder(normal_monomial(n, m), OrderingTag::symmetric(), OrderingTag::normal());
  const mpq_class scale = inverse_binomial(N, m) * mpq_class(mpz_class(1) << N);
  const PhasePolyOperator rhs = phase_average(quadrature_power(N, budget).shifted(m - n)) * rational(scale);
  return {IdentityId::Symm, {}, lhs - rhs, false,
          "final exponent of X_phi read as n+m (printed as n+k in the source formula)"};
}

IdentityReport s_order(const IdentityParams& p, const DegreeBudget& budget) {
  const int k = p.p, l = p.q, N = k + l;
  check_degree(N, budget);
  const PhasePolyOperator lhs = reorder(normal_monomial(k, l), OrderingTag{p.s}, OrderingTag::normal());
  const Coeff scale = rational(inverse_binomial(N, k));
  auto rhs = [&](int mmax, const mpq_class& c) {
    return phase_average(hermite_like(N, mmax, c, budget).shifted(l - k)) * scale;
  };
  Routes routes;
  routes.compare(lhs, rhs(N / 2, p.s / 2), "full Hermite sum");
  routes.compare(lhs, rhs(std::min(k, l), p.s / 2), "truncated Hermite sum");
  std::string note = "expansion weight (s/2)^m per contraction";
  if (!routes.failed.empty()) note += "; failed route: " + routes.failed;
  const bool literal_ok = (lhs - rhs(N / 2, -p.s / 2)).is_zero();
  note += literal_ok ? "; printed form with sqrt(s/2)^{k+l} H(sqrt(2/s) X) also agrees"
                     : "; printed form with sqrt(s/2)^{k+l} H(sqrt(2/s) X) disagrees (it carries (-s/2)^m)";
  return {IdentityId::SOrder, {}, routes.residual, false, note};
}

IdentityReport mu_nu(const IdentityParams& p, const DegreeBudget& budget) {
  const int n = p.p;
  check_degree(n, budget);
  const PhasePolyOperator base = PhasePolyOperator::annihilation() * Coeff(p.mu) + PhasePolyOperator::creation() * Coeff(p.nu);
  const PhasePolyOperator lhs = power(base, n, budget);
  PhasePolyOperator kernel;
  for (int j = 0; j <= n; ++j) kernel.add(Monomial{0, 0, (n - j) - j}, Coeff(pow(p.nu, j) * pow(p.mu, n - j)));
  const PhasePolyOperator two_x_n = quadrature_power(n, budget) * rational(mpq_class(mpz_class(1) << n));
  const PhasePolyOperator rhs = phase_average(wick_multiply(two_x_n, kernel, budget));
  return {IdentityId::MuNu, {}, lhs - rhs, false, {}};
}

IdentityReport resample(const IdentityParams& p, const DegreeBudget& budget) {
  const int n = p.p;
  check_degree(n, budget);
  const PhasePolyOperator xn = quadrature_power(n, budget);
  const PhasePolyOperator lhs = evaluate_phase(xn, p.u);
  // sin((n+1) psi) / sin psi = sum_j e^{i (n-2j) psi}, psi = phi - phi0
  PhasePolyOperator integrand;
  for (int j = 0; j <= n; ++j) integrand += xn.shifted(n - 2 * j) * Coeff(pow(p.u, -(n - 2 * j)));
  return {IdentityId::Resample, {}, lhs - phase_average(integrand), false, {}};
}

/// Maps e^{2 i n phi} to theta(n) and drops the phase; used for the kappa_eps moments.
PhasePolyOperator kappa_moments(const PhasePolyOperator& A, bool step_theta) {
  PhasePolyOperator r;
  for (const auto& [mono, c] : A.terms()) {
    if (mono.k % 2 != 0) throw std::logic_error("kappa moments need even phase indices");
    if (!step_theta || mono.k >= 0) r.add(Monomial{mono.n, mono.m, 0}, c);
  }
  return r;
}

IdentityReport poisson(const IdentityParams& p, const DegreeBudget& budget) {
  const int k = p.p, deg = p.odd ? 2 * k + 1 : 2 * k;
  check_degree(deg, budget);
  const PhasePolyOperator xd = quadrature_power(deg, budget);
  const Coeff inv_pi = Coeff::inv_pi(1);
  const PhasePolyOperator lhs = evaluate_phase(xd, 1) * inv_pi;
  Routes routes;

  // Lemma form over a common denominator 1 - e^{2 i phi}.
  PhasePolyOperator numerator = p.odd ? xd.shifted(-(2 * k + 1)) - xd.shifted(2 * k + 3)
                                      : xd.shifted(-2 * k) - xd.shifted(2 * k + 2);
  PhasePolyOperator remainder;
  const PhasePolyOperator quotient = divide_one_minus_phase(numerator, 2, &remainder);
  if (!remainder.is_zero()) throw std::logic_error("Poisson numerator not divisible by 1 - e^{2i phi}");
  routes.compare(lhs, phase_average(quotient) * inv_pi, "lemma form");

  // eps -> 1 route: truncated geometric tails plus the kappa_eps moments.
  auto eps_route = [&](bool step_theta) {
    const PhasePolyOperator base = p.odd ? xd.shifted(1) : xd;
    const int up = k + 1, down = p.odd ? k + 2 : k + 1;
    PhasePolyOperator tails;
    for (int j = 0; j <= deg + 1; ++j) {
      tails -= base.shifted(2 * (up + j));
      tails -= base.shifted(-2 * (down + j));
    }
    return (phase_average(tails) + kappa_moments(base, step_theta)) * inv_pi;
  };
  routes.compare(lhs, eps_route(false), "eps route");
  std::string note = "kappa_eps moments taken as eps^{|n|} -> 1 for all n";
  const bool step_ok = (lhs - eps_route(true)).is_zero();
  note += step_ok ? "; step-function moments also agree here" : "; step-function moments theta(n) would fail here";
  if (!routes.failed.empty()) note += "; failed route: " + routes.failed;
  return {IdentityId::Poisson, {}, routes.residual, false, note};
}

IdentityReport displacement_series(const IdentityParams& p, const DegreeBudget& budget) {
  const int N = p.p;
  check_degree(N, budget);
  const CRational& al = p.alpha;
  const CRational mac = -al.conj();
  const auto xs = quadrature_powers(N, budget);
  auto inv_fact = [](int s) { return mpq_class(mpz_class(1), factorial_exact(s)); };
  auto two_x = [&](int s) { return xs[s] * rational(mpq_class(mpz_class(1) << s)); };

  // Exponential series of alpha a^dag - alpha^* a.
  const PhasePolyOperator gen = PhasePolyOperator::creation() * Coeff(al) + PhasePolyOperator::annihilation() * Coeff(mac);
  PhasePolyOperator series, gen_s(1);
  for (int s = 0; s <= N; ++s) {
    if (s > 0) gen_s = wick_multiply(gen_s, gen, budget);
    series += gen_s * rational(inv_fact(s));
  }

  // Symmetric-ordered binomial expansion.
  PhasePolyOperator symmetric;
  for (int s = 0; s <= N; ++s)
    for (int k = 0; k <= s; ++k)
      symmetric.add(Monomial{s - k, k, 0},
                    Coeff(pow(al, s - k) * pow(mac, k) * CRational(mpq_class(binomial_exact(s, k)) * inv_fact(s))));
  symmetric = reorder(symmetric, OrderingTag::symmetric(), OrderingTag::normal());

  // Double series (2 alpha e^{-i phi} X)^n (-2 alpha^* e^{i phi} X)^k / (n+k)!.
  PhasePolyOperator dbl;
  for (int s = 0; s <= N; ++s)
    for (int n = 0; n <= s; ++n)
      dbl += two_x(s).shifted((s - n) - n) * Coeff(pow(al, n) * pow(mac, s - n) * CRational(inv_fact(s)));
  dbl = phase_average(dbl);

  // eps = 1 form with the separate e^{+i n phi} / e^{-i n phi} branches.
  PhasePolyOperator eps;
  for (int n = 0; n <= N; ++n)
    for (int k = 0; n + 2 * k <= N; ++k) {
      const int d = n + 2 * k;
      const CRational f(inv_fact(d));
      const PhasePolyOperator x = two_x(d);
      eps += x.shifted(n) * Coeff(pow(mac, n + k) * pow(al, k) * f);
      eps += x.shifted(-n) * Coeff(pow(mac, k) * pow(al, n + k) * f);
      if (n == 0) eps -= x * Coeff(pow(mac, k) * pow(al, k) * f);
    }
  eps = phase_average(eps);

  Routes routes;
  routes.compare(series, symmetric, "symmetric-ordered expansion");
  routes.compare(series, dbl, "double series");
  routes.compare(series, eps, "eps-regularized form");
  std::string note = "partial sums through total degree " + std::to_string(N) + " agree term by term";
  if (!routes.failed.empty()) note = "failed route: " + routes.failed;
  return {IdentityId::DisplacementSeries, {}, routes.residual, false, note};
}

}  // namespace

std::string identity_name(IdentityId id) {
  for (const auto& [i, name] : kNames)
    if (i == id) return name;
  return "UNKNOWN";
}

std::optional<IdentityId> parse_identity(const std::string& name) {
  for (const auto& [i, n] : kNames)
    if (name == n) return i;
  return std::nullopt;
}

std::string IdentityParams::describe(IdentityId id) const {
  std::ostringstream os;
  const char* pm = sign > 0 ? "+" : "-";
  switch (id) {
    case IdentityId::MainEquiv:
    case IdentityId::HermiteEquiv: os << "k=" << p << ",n=" << q << ",sign=" << pm; break;
    case IdentityId::TruncHermite: os << "l=" << p << ",n=" << q << ",kappa=" << kappa.get_str() << ",sign=" << pm; break;
    case IdentityId::Richter:
    case IdentityId::Symm: os << "n=" << p << ",m=" << q; break;
    case IdentityId::SOrder: os << "k=" << p << ",l=" << q << ",s=" << s.get_str(); break;
    case IdentityId::MuNu: os << "n=" << p << ",mu=" << mu.str() << ",nu=" << nu.str(); break;
    case IdentityId::Resample: os << "n=" << p << ",u=" << u.str(); break;
    case IdentityId::Poisson: os << (odd ? "ODD" : "EVEN") << ",k=" << p; break;
    case IdentityId::DisplacementSeries: os << "alpha=" << alpha.str() << ",order=" << p; break;
  }
  return os.str();
}

PhasePolyOperator divide_one_minus_phase(const PhasePolyOperator& A, int step, PhasePolyOperator* remainder) {
  // N = Q (1 - w), w = e^{i step phi}: Q_k = sum_{j <= k} N_j within each residue class of k,
  // and the full class sum is the remainder.
  std::map<std::tuple<int, int, int>, std::map<int, Coeff>> groups;
  for (const auto& [mono, c] : A.terms())
    groups[{mono.n, mono.m, ((mono.k % step) + step) % step}][mono.k] = c;
  PhasePolyOperator q, rem;
  for (const auto& [key, series] : groups) {
    const auto& [n, m, cls] = key;
    (void)cls;
    const int kmin = series.begin()->first, kmax = series.rbegin()->first;
    Coeff acc;
    for (int k = kmin; k <= kmax; k += step) {
      if (auto it = series.find(k); it != series.end()) acc += it->second;
      if (k < kmax) q.add(Monomial{n, m, k}, acc);
    }
    rem.add(Monomial{n, m, 0}, acc);
  }
  if (remainder) *remainder = rem;
  return q;
}

IdentityReport verify_identity(IdentityId id, const IdentityParams& params, const DegreeBudget& budget) {
  IdentityReport r;
  switch (id) {
    case IdentityId::MainEquiv: r = main_equiv(params, false, budget); break;
    case IdentityId::HermiteEquiv: r = main_equiv(params, true, budget); break;
    case IdentityId::TruncHermite: r = trunc_hermite(params, budget); break;
    case IdentityId::Richter: r = richter(params, budget); break;
    case IdentityId::Symm: r = symm(params, budget); break;
    case IdentityId::SOrder: r = s_order(params, budget); break;
    case IdentityId::MuNu: r = mu_nu(params, budget); break;
    case IdentityId::Resample: r = resample(params, budget); break;
    case IdentityId::Poisson: r = poisson(params, budget); break;
    case IdentityId::DisplacementSeries: r = displacement_series(params, budget); break;
    default: throw std::invalid_argument("unknown identity id");
  }
  r.id = id;
  r.params = params.describe(id);
  r.passed = r.residual.is_zero();
  return r;
}

std::vector<IdentityReport> run_identity_suite(const SuiteLimits& lim, std::optional<IdentityId> only,
                                               const DegreeBudget& budget) {
  std::vector<IdentityReport> out;
  auto want = [&](IdentityId id) { return !only || *only == id; };
  auto run = [&](IdentityId id, const IdentityParams& p) { out.push_back(verify_identity(id, p, budget)); };

  for (IdentityId id : {IdentityId::MainEquiv, IdentityId::HermiteEquiv}) {
    if (!want(id)) continue;
    for (int k = 0; k <= lim.main_k; ++k)
      for (int n = 0; n <= lim.main_n; ++n)
        for (int sign : {1, -1}) {
          IdentityParams p;
          p.p = k, p.q = n, p.sign = sign;
          run(id, p);
        }
  }
  if (want(IdentityId::TruncHermite))
    for (int l = 0; l <= lim.trunc_l; ++l)
      for (int n = 0; n <= lim.trunc_n; ++n)
        for (const mpq_class& kappa : {mpq_class(1), mpq_class(3, 2)})
          for (int sign : {1, -1}) {
            IdentityParams p;
            p.p = l, p.q = n, p.kappa = kappa, p.sign = sign;
            run(IdentityId::TruncHermite, p);
          }
  if (want(IdentityId::Richter))
    for (int n = 0; n <= lim.richter; ++n)
      for (int m = 0; n + m <= lim.richter; ++m) {
        IdentityParams p;
        p.p = n, p.q = m;
        run(IdentityId::Richter, p);
      }
  if (want(IdentityId::Symm))
    for (int n = 0; n <= lim.symm; ++n)
      for (int m = 0; n + m <= lim.symm; ++m) {
        IdentityParams p;
        p.p = n, p.q = m;
        run(IdentityId::Symm, p);
      }
  if (want(IdentityId::SOrder))
    for (int k = 0; k <= lim.s_order; ++k)
      for (int l = 0; k + l <= lim.s_order; ++l)
        for (int s : {-1, 0, 1}) {
          IdentityParams p;
          p.p = k, p.q = l, p.s = s;
          run(IdentityId::SOrder, p);
        }
  if (want(IdentityId::MuNu))
    for (int n = 0; n <= lim.mu_nu; ++n) {
      IdentityParams p;
      p.p = n;
      p.mu = CRational(mpq_class(2, 3), mpq_class(1, 5));
      p.nu = CRational(mpq_class(-1, 2), mpq_class(3, 4));
      run(IdentityId::MuNu, p);
    }
  if (want(IdentityId::Resample))
    for (int n = 0; n <= lim.resample; ++n)
      for (const CRational& u : {CRational(1), CRational(mpq_class(3, 5), mpq_class(4, 5)),
                                 CRational(mpq_class(-5, 13), mpq_class(12, 13))}) {
        IdentityParams p;
        p.p = n, p.u = u;
        run(IdentityId::Resample, p);
      }
  if (want(IdentityId::Poisson))
    for (int k = 0; k <= lim.poisson; ++k)
      for (bool odd : {false, true}) {
        IdentityParams p;
        p.p = k, p.odd = odd;
        run(IdentityId::Poisson, p);
      }
  if (want(IdentityId::DisplacementSeries))
    for (int order = 0; order <= lim.displacement_order; ++order) {
      IdentityParams p;
      p.p = order;
      p.alpha = CRational(mpq_class(3, 10), mpq_class(1, 5));
      run(IdentityId::DisplacementSeries, p);
    }
  return out;
}

}  // namespace homotomo

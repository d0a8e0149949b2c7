#include "kernels_detail.hpp"

#include "homotomo/errors.hpp"
#include "homotomo/special.hpp"

#include <cmath>
#include <sstream>

namespace homotomo {
namespace {

std::vector<double> parse_numbers(const std::string& args, const std::string& text) {
  std::vector<double> out;
  if (args.empty()) return out;
  std::stringstream ss(args);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + item + "' in kernel descriptor '" + text + "'");
    }
    if (used != item.size() || !std::isfinite(v)) throw ConfigError("bad number '" + item + "' in kernel descriptor '" + text + "'");
    out.push_back(v);
  }
  return out;
}

int as_index(double v, const std::string& text) {
  if (v < 0 || v != std::floor(v) || v > 10000) throw ConfigError("bad index in kernel descriptor '" + text + "'");
  return static_cast<int>(v);
}

void check_eta(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("efficiency must lie in (0, 1]");
}

}  // namespace

EstimatorKernel EstimatorKernel::dyad(int n, int d, double eta) {
  if (n < 0 || d < 0) throw ConfigError("dyad indices must be nonnegative");
  check_eta(eta);
  EstimatorKernel k;
  k.kind = KernelKind::Dyad;
  k.n = n;
  k.m = d;
  k.eta = eta;
  return k;
}

EstimatorKernel EstimatorKernel::moment(int n, int m) {
  if (n < 0 || m < 0) throw ConfigError("moment indices must be nonnegative");
  EstimatorKernel k;
  k.kind = KernelKind::Moment;
  k.n = n;
  k.m = m;
  return k;
}

EstimatorKernel EstimatorKernel::displacement(cplx alpha) {
  EstimatorKernel k;
  k.kind = KernelKind::Displacement;
  k.alpha = alpha;
  return k;
}

EstimatorKernel EstimatorKernel::simple_a() {
  EstimatorKernel k;
  k.kind = KernelKind::SimpleA;
  k.m = 1;
  return k;
}

EstimatorKernel EstimatorKernel::simple_num() {
  EstimatorKernel k;
  k.kind = KernelKind::SimpleNum;
  k.n = k.m = 1;
  return k;
}

EstimatorKernel EstimatorKernel::moment_dual(int n, int m, int order) {
  if (n < 0 || m < 0 || order < 0) throw ConfigError("moment-dual indices must be nonnegative");
  EstimatorKernel k;
  k.kind = KernelKind::MomentDual;
  k.n = n;
  k.m = m;
  k.order = order;
  return k;
}

EstimatorKernel EstimatorKernel::unbounded_g(const Eigen::MatrixXcd& target, GQuadrature gq) {
  if (target.rows() < 1 || target.rows() != target.cols()) throw ConfigError("UNBOUNDED_G target must be square");
  EstimatorKernel k;
  k.kind = KernelKind::UnboundedG;
  k.target = target;
  k.gq = gq;
  return k;
}

EstimatorKernel EstimatorKernel::parse(const std::string& text, double eta) {
  check_eta(eta);
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::vector<double> v = parse_numbers(colon == std::string::npos ? "" : text.substr(colon + 1), text);
  auto need = [&](std::size_t count) {
    if (v.size() != count)
      throw ConfigError("kernel descriptor '" + text + "' expects " + std::to_string(count) + " parameters");
  };
  EstimatorKernel k;
  if (name == "moment") {
    need(2);
    k = moment(as_index(v[0], text), as_index(v[1], text));
  } else if (name == "disp") {
    need(2);
    k = displacement({v[0], v[1]});
  } else if (name == "dyad") {
    need(2);
    return dyad(as_index(v[0], text), as_index(v[1], text), eta);
  } else if (name == "dual") {
    need(3);
    k = moment_dual(as_index(v[0], text), as_index(v[1], text), as_index(v[2], text));
  } else if (name == "g") {
    need(2);
    const int n = as_index(v[0], text), m = as_index(v[1], text);
    Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(std::max(n, m) + 1, std::max(n, m) + 1);
    X(n, m) = 1.0;
    k = unbounded_g(X);
  } else if (name == "a") {
    need(0);
    k = simple_a();
  } else if (name == "num") {
    need(0);
    k = simple_num();
  } else {
    throw ConfigError("unknown kernel descriptor '" + text + "'");
  }
  return eta == 1.0 ? k : unbias_eta(k, eta);
}

std::string EstimatorKernel::describe() const {
  std::ostringstream os;
  os.precision(15);
  switch (kind) {
    case KernelKind::Dyad: os << "dyad:" << n << ',' << m; break;
    case KernelKind::Moment: os << "moment:" << n << ',' << m; break;
    case KernelKind::Displacement: os << "disp:" << alpha.real() << ',' << alpha.imag(); break;
    case KernelKind::SimpleA: os << "a"; break;
    case KernelKind::SimpleNum: os << "num"; break;
    case KernelKind::MomentDual: os << "dual:" << n << ',' << m << ',' << order; break;
    case KernelKind::UnboundedG: {
      os << "g[" << target.rows() << "x" << target.cols() << "]";
      // single-entry targets print in descriptor form
      Eigen::Index r = 0, c = 0;
      if ((target.array() != cplx(0.0)).count() == 1) {
        target.cwiseAbs().maxCoeff(&r, &c);
        if (target(r, c) == cplx(1.0)) {
          os.str("");
          os << "g:" << r << ',' << c;
        }
      }
      break;
    }
  }
  if (eta != 1.0) os << "@eta=" << eta;
  return os.str();
}

Eigen::MatrixXcd EstimatorKernel::target_operator(int dim) const {
  const Eigen::MatrixXcd a = ladder(dim);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  auto moment_op = [&](int p, int q) {
    Eigen::MatrixXcd ad = Eigen::MatrixXcd::Identity(dim, dim), am = ad;
    for (int i = 0; i < p; ++i) ad = ad * a.adjoint();
    for (int i = 0; i < q; ++i) am = am * a;
    return Eigen::MatrixXcd(ad * am);
  };
  switch (kind) {
    case KernelKind::Dyad:
      if (n + m < dim) out(n, n + m) = 1.0;
      break;
    case KernelKind::Moment: out = moment_op(n, m); break;
    case KernelKind::SimpleA: out = a; break;
    case KernelKind::SimpleNum: out = a.adjoint() * a; break;
    case KernelKind::Displacement: out = homotomo::displacement(alpha, dim); break;
    case KernelKind::MomentDual:
      if (n < dim && m < dim) out(n, m) = 1.0;
      break;
    case KernelKind::UnboundedG: {
      const Eigen::Index s = std::min<Eigen::Index>(dim, target.rows());
      out.topLeftCorner(s, s) = target.topLeftCorner(s, s);
      break;
    }
  }
  return out;
}

KernelEvaluator::KernelEvaluator(const EstimatorKernel& kernel) : kernel_(kernel) {
  const EstimatorKernel& k = kernel_;
  check_eta(k.eta);
  const double nbar = eta_to_nbar(k.eta);
  switch (k.kind) {
    case KernelKind::Dyad: {
      auto dw = std::make_shared<const detail::DyadWeights>(detail::make_dyad_weights(k.n, k.m, k.eta));
      const int d = k.m;
      fn_ = [dw, d](double x, double phi) { return detail::dyad_radial(*dw, dw->w, x) * std::polar(1.0, d * phi); };
      if (k.eta == 1.0) err_ = [dw](double x) { return std::abs(detail::dyad_radial(*dw, dw->werr, x)); };
      break;
    }
    case KernelKind::Moment:
    case KernelKind::SimpleA:
    case KernelKind::SimpleNum: {
      if (k.eta < 1.0 && !(k.eta > 0.5)) throw InsufficientEfficiency("moment unbiasing needs eta > 1/2");
      const int n = k.n, m = k.m;
      if (k.eta == 1.0)
        fn_ = [n, m](double x, double phi) { return eval_moment(n, m, x, phi); };
      else
        fn_ = [n, m, nbar](double x, double phi) { return detail::noisy_moment(n, m, nbar, x, phi); };
      break;
    }
    case KernelKind::Displacement: {
      const cplx alpha = k.alpha;
      const double gain = std::exp(nbar * std::norm(alpha));
      fn_ = [alpha, gain](double x, double phi) { return gain * eval_displacement(alpha, x, phi); };
      break;
    }
    case KernelKind::MomentDual: {
      const int n = k.n, m = k.m, order = k.order;
      if (k.eta == 1.0) {
        fn_ = [n, m, order](double x, double phi) { return detail::moment_dual_value(n, m, order, x, phi); };
      } else {
        if (!(k.eta > 0.5)) throw InsufficientEfficiency("moment-dual unbiasing needs eta > 1/2");
        // |n><m| = sum_t (-1)^t / (t! sqrt(n! m!)) a^dag^{n+t} a^{m+t}
        std::vector<double> c(order + 1);
        for (int t = 0; t <= order; ++t)
          c[t] = (t % 2 ? -1.0 : 1.0) * std::exp(-log_factorial(t) - 0.5 * (log_factorial(n) + log_factorial(m)));
        fn_ = [n, m, nbar, c](double x, double phi) {
          cplx acc = 0.0;
          for (std::size_t t = 0; t < c.size(); ++t) acc += c[t] * detail::noisy_moment(n + t, m + t, nbar, x, phi);
          return acc;
        };
      }
      break;
    }
    case KernelKind::UnboundedG: {
      if (k.eta != 1.0) throw ConfigError("UNBOUNDED_G kernels are defined for eta = 1 only");
      auto g = std::make_shared<const detail::UnboundedG>(k.target, k.gq);
      fn_ = [g](double x, double phi) { return (*g)(x, phi); };
      break;
    }
  }
}

EstimatorKernel unbias_eta(EstimatorKernel kernel, double eta) {
  check_eta(eta);
  if (eta < 1.0 && !(eta > 0.5))
    throw InsufficientEfficiency("unbiased reconstruction needs eta > 1/2 (got " + std::to_string(eta) + ")");
  if (kernel.kind == KernelKind::UnboundedG && eta != 1.0)
    throw ConfigError("UNBOUNDED_G kernels are defined for eta = 1 only");
  kernel.eta = eta;
  return kernel;
}

EstimatorKernel unbias_gaussian(EstimatorKernel kernel, double nbar) {
  if (!(nbar >= 0.0)) throw ConfigError("thermal noise occupation must be nonnegative");
  if (!(nbar < 0.5))
    throw InsufficientEfficiency("Gaussian-noise unbiasing needs nbar < 1/2 (got " + std::to_string(nbar) + ")");
  return unbias_eta(std::move(kernel), 1.0 / (1.0 + 2.0 * nbar));
}

cplx unbias_gaussian_coefficient(cplx coefficient, cplx alpha, double nbar) {
  if (!(nbar >= 0.0)) throw ConfigError("thermal noise occupation must be nonnegative");
  return coefficient * std::exp(nbar * std::norm(alpha));
}

}  // namespace homotomo

#include "genlasso/loss.hpp"

#include "genlasso/errors.hpp"

#include <cmath>

namespace genlasso {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

const char* to_string(LossFamily f) {
  switch (f) {
    case LossFamily::squared: return "squared";
    case LossFamily::logistic: return "logistic";
    case LossFamily::poisson: return "poisson";
    case LossFamily::custom: return "custom";
  }
  return "unknown";
}

LossFamily parse_loss_family(const std::string& name) {
  if (name == "squared") return LossFamily::squared;
  if (name == "logistic") return LossFamily::logistic;
  if (name == "poisson") return LossFamily::poisson;
  throw InputError("unknown loss family '" + name + "' (expected squared|logistic|poisson)");
}

LossSpec LossSpec::squared() {
  LossSpec l;
  l.family = LossFamily::squared;
  l.psi = [](const Vector& z) { return 0.5 * z.squaredNorm(); };
  l.grad_psi = [](const Vector& z) -> Vector { return z; };
  l.hess_psi = [](const Vector& z) -> Vector { return Vector::Ones(z.size()); };
  l.conj = [](const Vector& w) { return 0.5 * w.squaredNorm(); };
  l.grad_conj = [](const Vector& w) -> Vector { return w; };
  l.hess_conj = [](const Vector& w) -> Vector { return Vector::Ones(w.size()); };
  return l;
}

LossSpec LossSpec::logistic() {
  LossSpec l;
  l.family = LossFamily::logistic;
  l.psi = [](const Vector& z) { return z.unaryExpr(&softplus).sum(); };
  l.grad_psi = [](const Vector& z) -> Vector { return z.unaryExpr(&sigmoid); };
  l.hess_psi = [](const Vector& z) -> Vector {
    return z.unaryExpr([](double t) {
      const double s = sigmoid(t);
      return s * (1.0 - s);
    });
  };
  l.conj = [](const Vector& w) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if (w(i) < 0.0 || w(i) > 1.0) return kInf;
      total += xlogx(w(i)) + xlogx(1.0 - w(i));
    }
    return total;
  };
  l.grad_conj = [](const Vector& w) -> Vector {
    return w.unaryExpr([](double t) { return std::log(t) - std::log1p(-t); });
  };
  l.hess_conj = [](const Vector& w) -> Vector {
    return w.unaryExpr([](double t) { return 1.0 / (t * (1.0 - t)); });
  };
  l.conj_lower = 0.0;
  l.conj_upper = 1.0;
  return l;
}

LossSpec LossSpec::poisson() {
  LossSpec l;
  l.family = LossFamily::poisson;
  l.psi = [](const Vector& z) { return z.array().exp().sum(); };
  l.grad_psi = [](const Vector& z) -> Vector { return z.array().exp(); };
  l.hess_psi = [](const Vector& z) -> Vector { return z.array().exp(); };
  l.conj = [](const Vector& w) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if (w(i) < 0.0) return kInf;
      total += xlogx(w(i)) - w(i);
    }
    return total;
  };
  l.grad_conj = [](const Vector& w) -> Vector { return w.array().log(); };
  l.hess_conj = [](const Vector& w) -> Vector { return w.array().inverse(); };
  l.conj_lower = 0.0;
  return l;
}

LossSpec LossSpec::of(LossFamily family) {
  switch (family) {
    case LossFamily::squared: return squared();
    case LossFamily::logistic: return logistic();
    case LossFamily::poisson: return poisson();
    case LossFamily::custom: break;
  }
  throw InputError("LossSpec::of: no built-in for a custom family");
}

bool LossSpec::in_conj_domain_interior(const Vector& w) const {
  return conj_domain_margin(w) > 0.0;
}

double LossSpec::conj_domain_margin(const Vector& w) const {
  double margin = kInf;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w(i))) return -kInf;
    margin = std::min(margin, w(i) - conj_lower);
    margin = std::min(margin, conj_upper - w(i));
  }
  return margin;
}

}  // namespace genlasso

#pragma once

// Separable cumulant functions psi for GLM losses G(z; y) = -y^T z + psi(z),
// together with their conjugates. The three built-in families are squared,
// logistic (Bernoulli) and Poisson.

#include "genlasso/linalg.hpp"

#include <functional>
#include <limits>
#include <string>

namespace genlasso {

enum class LossFamily { squared, logistic, poisson, custom };

const char* to_string(LossFamily f);
/// Parses "squared" | "logistic" | "poisson"; throws InputError otherwise.
LossFamily parse_loss_family(const std::string& name);

struct LossSpec {
  LossFamily family = LossFamily::squared;

  std::function<double(const Vector&)> psi;
  std::function<Vector(const Vector&)> grad_psi;
  /// Diagonal of the Hessian of psi (psi is separable).
  std::function<Vector(const Vector&)> hess_psi;
  /// psi^*; +infinity outside its domain.
  std::function<double(const Vector&)> conj;
  std::function<Vector(const Vector&)> grad_conj;
  std::function<Vector(const Vector&)> hess_conj;

  /// dom(psi^*) is the box [conj_lower, conj_upper]^n; the range of grad psi
  /// is its interior.
  double conj_lower = -std::numeric_limits<double>::infinity();
  double conj_upper = std::numeric_limits<double>::infinity();

  static LossSpec squared();
  static LossSpec logistic();
  static LossSpec poisson();
  static LossSpec of(LossFamily family);

  bool in_conj_domain_interior(const Vector& w) const;
  /// Smallest distance from w to the boundary of dom(psi^*) (inf when the
  /// domain is all of R^n).
  double conj_domain_margin(const Vector& w) const;

  /// G(z; y) = -y^T z + psi(z).
  double loss(const Vector& z, const Vector& y) const { return psi(z) - y.dot(z); }
};

}  // namespace genlasso

#pragma once

#include "genlasso/linalg.hpp"
#include "genlasso/loss.hpp"

namespace genlasso {

/// Bregman projection of `a` onto the affine set c + span(L) with respect to
/// f = psi^* of `loss`:
///   argmin_{x in c + L}  f(x) - f(a) - <grad f(a), x - a>.
/// The result x satisfies P_L grad f(x) = P_L grad f(a) and
/// P_{L^perp} x = P_{L^perp} c.
///
/// Throws InputError if `a` is outside the interior of dom(f) or dimensions
/// disagree, and NumericalError if c + L misses the interior of dom(f) or
/// Newton's method fails to reach residual_tol.
Vector bregman_project_affine(const LossSpec& loss, const Vector& c, const SubspaceBasis& L,
                              const Vector& a, const NumericTolerances& tol = {});

}  // namespace genlasso

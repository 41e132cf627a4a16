#pragma once

#include "asymlink/calculus.hpp"
#include "asymlink/domain.hpp"
#include "asymlink/rng.hpp"

namespace asymlink {

/// Random k-vector field with polynomial blade coefficients of the given
/// degree (≤ 2), with analytic partial derivatives. Shared fixture for the
/// calculus / divergence-theorem checks.
MultiVectorField random_poly_field(RngStream& rng, int n, int k, int degree = 2);

struct GaussCheckReport {
    MultiVector volume_side;    // ∫_Ω div(V) ω                (grade k−1)
    MultiVector boundary_side;  // (−1)^{(k+1)ℓ} ∫_∂Ω N·V dA  (grade k−1)
    double scale = 0.0;         // max of the two norms (≥ floor)
    double rel_residual = 0.0;  // ‖difference‖ / scale
};

/// Two independent quadratures of the divergence-theorem identity
///   ∫_Ω div(V) ω = (−1)^{(k+1)ℓ} ∫_∂Ω N·V dA,  ℓ = n−k−1,
/// volume side by deterministic QMC over Ω, boundary side by QMC on ∂Ω.
/// Ball domains only (exact boundary measure).
GaussCheckReport gauss_divergence_check(const MultiVectorField& V, const Domain& d,
                                        long long volume_points = 200000,
                                        long long boundary_points = 100000,
                                        const FDConfig& fd = {});

}  // namespace asymlink

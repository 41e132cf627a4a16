#pragma once

#include <cstdint>
#include <vector>

#include "asymlink/calculus.hpp"
#include "asymlink/domain.hpp"
#include "asymlink/estimate.hpp"

namespace asymlink {

struct BSConfig {
    long long samples = 200000;
    /// Exclusion radius around the evaluation point; <= 0 means 1e-3·diam(Ω).
    double eps_excl = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    /// Exact support of V, when known. bs() then samples only inside it (the
    /// integrand carries a V(y) factor, so the restriction is exact); the
    /// verification path mixes support and domain samples 50/50 with importance
    /// weights, since its integrand also has an off-support −V(x) part.
    const SupportRegion* support = nullptr;
};

struct BSResult {
    MultiVector value;
    double std_error = 0.0;  // one-sigma proxy on the multivector norm
    long long n_samples = 0;
};

/// Monte-Carlo estimate of the generalized Biot-Savart operator
///   BS(V)(x) = (−1)^k/a_n ∫_Ω cross((x−y)/‖x−y‖ⁿ, V(y)) dy,
/// samples inside the ε_excl ball dropped (their measure contribution too).
BSResult bs(const MultiVectorField& V, const Domain& d, const Vec& x,
            const BSConfig& cfg);

/// Same integral over an explicit fixed sample set (common random numbers):
/// the workhorse for finite-differencing BS in x without 1/h noise blowup.
MultiVector bs_fixed_samples(const MultiVectorField& V, const Domain& d, const Vec& x,
                             const std::vector<Vec>& ys, double eps_excl);

/// Variance-reduced variant used by the verification path: the singular part
/// is split off as (∫_Ω K(x−y) dy) × V(x) with the vector moment computed by
/// deterministic radial-chord quadrature (non-singular after substitution),
/// leaving Monte Carlo only the Lipschitz-tamed remainder K × (V(y) − V(x)).
/// weights: per-sample importance weights 1/p(yᵢ) (nullptr = uniform over Ω).
MultiVector bs_fixed_samples_subtracted(const MultiVectorField& V, const Domain& d,
                                        const Vec& x, const std::vector<Vec>& ys,
                                        double eps_excl, int moment_directions = 4096,
                                        const std::vector<double>* weights = nullptr);

/// Max over test points of ‖rot(BS(V)) − V‖ / max(‖V‖, floor), with rot taken
/// by central differences of the fixed-sample estimator (common random numbers
/// across the whole stencil; fresh samples per test point).
double verify_rot_bs(const MultiVectorField& V, const Domain& d,
                     const std::vector<Vec>& test_points, const BSConfig& cfg,
                     const FDConfig& fd);

/// Dense deterministic QMC reference for the same integral (n = 3 oracle).
MultiVector bs_reference_qmc(const MultiVectorField& V, const Domain& d, const Vec& x,
                             long long points, double eps_excl);

}  // namespace asymlink

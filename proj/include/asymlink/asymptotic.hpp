#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include "asymlink/estimate.hpp"
#include "asymlink/flows.hpp"
#include "asymlink/linking.hpp"

namespace asymlink {

/// Growing rectangle schedule T_i = [0, (i+1)·tau]^k.
struct ErgodicSchedule {
    int k = 1;
    double tau = 2.0 * std::numbers::pi;  // periodic orbits close exactly
    int length = 6;

    Rectangle rect(int i) const {
        return Rectangle::cube(k, (i + 1) * tau);
    }
};

struct MCConfig {
    long long pairs = 10000;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    /// Near-collision cutoff; <= 0 means 1e-3·diam(Ω).
    double delta_near = 0.0;
    double max_resample_frac = 0.01;
    /// Quadrature nodes per tau of orbit parameter (ergodic averaging).
    int nodes_per_tau = 8;
};

/// f(p,q) = (−1)^k [(q−p) × X(p)] · Y(q) / (a_n ‖q−p‖ⁿ); the integrand whose
/// Ω×Ω integral is I(Φ,Ψ). Throws NearCollisionError below delta_near.
double kernel_f(const Action& Phi, const Action& Psi, const Vec& p, const Vec& q,
                double delta_near = 0.0);

/// |f| ≤ ‖X(p)‖‖Y(q)‖ / (a_n‖q−p‖^{n−1}) — exposed for the bound test.
double kernel_f_bound(const Action& Phi, const Action& Psi, const Vec& p, const Vec& q);

/// Monte-Carlo ∬_{Ω×Ω} f(p,q) dp dq. Near-collision pairs are resampled and
/// counted; exceeding max_resample_frac aborts.
Estimate I_two_actions(const Action& Phi, const Action& Psi, const MCConfig& cfg);

/// Same invariant through the Biot-Savart route: ∫_Ω ⟨BS(X)(q), Y(q)⟩ dq with a
/// fresh inner MC estimate of BS per outer sample.
Estimate I_two_actions_bs(const Action& Phi, const Action& Psi, const MCConfig& cfg,
                          long long inner_samples = 2000);

/// Finite-time normalized linking lk_{T,S}(p,q) through explicit θ-manifolds.
struct LkTsResult {
    double raw = 0.0;         // lk(θ_Φ(p,T), θ_Ψ(q,S))
    double normalized = 0.0;  // raw / (λ_k(T)·λ_ℓ(S))
    double error_proxy = 0.0; // quadrature refinement proxy on raw
    double cone_part = 0.0;   // raw contribution of terms touching any cone
};

LkTsResult lk_TS(const Action& Phi, const Action& Psi, const Vec& p, const Vec& q,
                 const Rectangle& T, const Rectangle& S, const Vec& apex_p,
                 const Vec& apex_q, const QuadratureConfig& quad = {});

/// Rectangle means h_i(p) = (1/λ(T_i)) ∫_{T_i} h(Φ_t(p)) dt for every schedule
/// index, by midpoint tensor quadrature along the integrated orbit.
std::vector<double> ergodic_mean(const std::function<double(const Vec&)>& h,
                                 const Action& Phi, const Vec& p,
                                 const ErgodicSchedule& schedule, int nodes_per_tau = 8);

struct ConvergenceRow {
    int schedule_index = 0;
    double side = 0.0;  // rectangle side length
    double estimate = 0.0;
    double std_error = 0.0;
};

struct AsymptoticResult {
    Estimate final;  // largest schedule index
    std::vector<ConvergenceRow> table;
    long long pairs = 0;
    long long resampled = 0;
};

/// lk(Φ,Ψ): MC over pairs (p,q) of the ergodic mean of f under the product
/// action Θ_{(t,s)}(p,q) = (Φ_t(p), Ψ_s(q)), with the convergence table across
/// the schedule. Deterministic across worker counts.
AsymptoticResult asymptotic_lk(const Action& Phi, const Action& Psi,
                               const ErgodicSchedule& schedule, const MCConfig& cfg);

/// g(p) = (−1)^k/a_n ∫_N ((y−p)×X(p))·U(y)/‖y−p‖ⁿ dη(y) by patch quadrature.
double kernel_g(const Action& Phi, const SingularManifold& N, const Vec& p,
                const QuadratureConfig& quad = {}, double delta_near = 0.0);

/// lk(Φ,N): MC over points p of the ergodic mean of g along the Φ-orbit.
AsymptoticResult lk_action_manifold(const Action& Phi, const SingularManifold& N,
                                    const ErgodicSchedule& schedule, const MCConfig& cfg,
                                    const QuadratureConfig& quad = {});

/// I(Φ,N) = ∫_Ω g(p) dp (direct route).
Estimate I_action_manifold(const Action& Phi, const SingularManifold& N,
                           const MCConfig& cfg, const QuadratureConfig& quad = {});

/// I(Φ,N) = ∫_N ⟨BS(X)(y), tangent wedge⟩ dη (Biot-Savart route).
Estimate I_action_manifold_bs(const Action& Phi, const SingularManifold& N,
                              const MCConfig& cfg, const QuadratureConfig& quad = {},
                              long long inner_samples = 4000);

/// E(Φ) = ∫_Ω ‖X(p)‖² dp.
Estimate energy(const Action& Phi, const MCConfig& cfg);

struct EnergyBoundReport {
    Estimate E;
    Estimate I_self;
    double gamma = 0.0;
    double margin = 0.0;  // Γ·E − |I|
    bool holds = false;
};

/// |lk(Φ,Φ)| ≤ Γ·E(Φ) for n = 2k+1 (I(Φ,Φ) standing in for lk by the main
/// theorem); errors out on dimension mismatch.
EnergyBoundReport energy_bound_check(const Action& Phi, double gamma,
                                     const MCConfig& cfg);

/// Mean lk_TS over sampled pairs for two apex choices — the apex-independence
/// spot check (the ergodic estimator itself never references an apex).
std::pair<Estimate, Estimate> apex_independence_check(
    const Action& Phi, const Action& Psi, int pairs, const Rectangle& T,
    const Rectangle& S, const Vec& apex_p1, const Vec& apex_q1, const Vec& apex_p2,
    const Vec& apex_q2, const QuadratureConfig& quad, std::uint64_t seed);

}  // namespace asymlink

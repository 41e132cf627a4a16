#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "asymlink/calculus.hpp"
#include "asymlink/domain.hpp"
#include "asymlink/multivector.hpp"
#include "asymlink/vec.hpp"

namespace asymlink {

/// Parameter rectangle [0,T₁]×…×[0,T_k].
struct Rectangle {
    std::vector<double> sides;

    Rectangle() = default;
    explicit Rectangle(std::vector<double> s) : sides(std::move(s)) {}
    static Rectangle cube(int k, double side) {
        return Rectangle(std::vector<double>(k, side));
    }

    int dim() const { return static_cast<int>(sides.size()); }
    double measure() const {
        double m = 1.0;
        for (double s : sides) m *= s;
        return m;
    }
};

/// One midpoint quadrature node of a patch: parameter, image point, raw tangent
/// vectors, and weight = cell measure × patch orientation.
struct PatchNode {
    std::vector<double> t;
    Vec x;
    std::vector<Vec> tangents;
    double weight = 0.0;
};

/// Oriented smooth map of a rectangle into ℝⁿ with tangent data.
struct ParamPatch {
    int dim = 0;
    Rectangle rect;
    std::function<Vec(const std::vector<double>&)> map;
    std::function<std::vector<Vec>(const std::vector<double>&)> tangent;
    int orientation = 1;
    std::string label;
    bool interior = false;  // image expected inside the ambient domain

    /// Optional fast path producing all midpoint nodes for a given per-axis
    /// resolution; falls back to pointwise map/tangent calls when absent.
    std::function<std::vector<PatchNode>(const std::vector<int>&)> nodes_hook;
};

/// Midpoint tensor-grid nodes, counts per axis (uses nodes_hook when present).
std::vector<PatchNode> patch_nodes(const ParamPatch& p, const std::vector<int>& counts);

/// Rough diameter of the patch image from a coarse node sample.
double patch_diameter(const ParamPatch& p);

/// Conservative ℝᵏ-action: k commuting divergence-free generators tangent to ∂Ω.
struct Action {
    Domain domain;
    std::vector<VectorField> generators;
    double dt = 1e-2;
    std::optional<SupportRegion> support;

    int k() const { return static_cast<int>(generators.size()); }
    int n() const { return domain.dim(); }

    /// X¹∧…∧Xᵏ at p.
    MultiVector wedge_at(const Vec& p) const;
    std::vector<Vec> generator_values(const Vec& p) const;
};

/// Builds an action with the default step Δt = 1e-2·diam(Ω)/max‖Xⁱ‖ (max taken
/// over a deterministic point sample).
Action make_action(const Domain& domain, std::vector<VectorField> generators);

/// Uniform point from the action's support when one is attached (rejection
/// from its bounding box), otherwise uniform over the whole domain.
Vec sample_action_point(const Action& a, RngStream& rng);

/// Measure of the region sample_action_point draws from: support volume when
/// attached, vol(Ω) otherwise. Monte Carlo scale factor for such samples.
double action_sample_volume(const Action& a);

/// Φ_t(p) = φ¹_{t₁}∘…∘φᵏ_{t_k}(p) by fixed-step RK4 (φᵏ applied first).
/// Small outward drift (≤1e-6) is projected back; larger escape is an error.
Vec flow(const Action& a, const std::vector<double>& t, const Vec& p);

/// Orbit patch t ↦ Φ_t(p) over T with analytic tangents Xⁱ(Φ_t(p)).
ParamPatch orbit_patch(const Action& a, const Vec& p, const Rectangle& T);

/// The 2k cone patches σ_{iδ}(p,T): (r,t^i) ↦ (1−r)Φ(t^{iδ},p) + r·apex,
/// oriented by (−1)^{i+δ} so orbit + cones close up as a cycle.
std::vector<ParamPatch> cone_patches(const Action& a, const Vec& p, const Rectangle& T,
                                     const Vec& apex);

/// Orbit closure θ_Φ(p,T) = Φ(T,p) ∪ σ(p,T).
struct ClosedOrbitManifold {
    ParamPatch orbit;
    std::vector<ParamPatch> cones;
    Vec apex;

    /// Max distance between orbit boundary faces and matching r=0 cone edges.
    double closure_gap(int samples_per_axis = 7) const;
};

ClosedOrbitManifold orbit_closure(const Action& a, const Vec& p, const Rectangle& T,
                                  const Vec& apex);

struct ActionDiagnostics {
    double max_bracket = 0.0;
    double max_divergence = 0.0;
    double max_normal_component = 0.0;
};

ActionDiagnostics action_diagnostics(const Action& a, int samples, RngStream& rng);

/// Uniform-ish boundary sample (ball/ellipsoid); used by tangency diagnostics.
Vec sample_boundary_one(const Domain& d, RngStream& rng);

}  // namespace asymlink

#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "asymlink/flows.hpp"
#include "asymlink/linking.hpp"

namespace asymlink {

/// C² bump in the tube-distance coordinate: 1 on [0, rho/3], quintic smoothstep
/// down to 0 on [rho/3, 2·rho/3], 0 beyond. Constant on orbits by construction
/// (it only reads action-invariant coordinates).
struct BumpProfile {
    double rho = 0.2;

    double inner() const { return rho / 3.0; }
    double outer() const { return 2.0 * rho / 3.0; }
    double operator()(double d) const;
};

/// A solid-torus tube around a (possibly spun) circle:
///   circle in the (u, w)-plane, center (u0, w0), radius a,
/// where u = x[u_axis] and w is either x[w_axis] (plain) or the spun radius
/// sqrt(x[w_axis]² + x[spin_axis]²). Generators are the circle rotation plus
/// one rigid spin rotation per spin axis — all exactly divergence-free,
/// pairwise commuting, 2π-periodic, and supported in the tube.
struct TubeSpec {
    int n = 3;
    int u_axis = 1;
    double u0 = 0.0;
    int w_axis = 0;
    double w0 = 0.0;
    int spin_axis = -1;  // -1: no spin
    double radius = 0.4;       // a
    BumpProfile bump;          // tube profile in d
    /// axes (with offsets) transverse to the tube, entering d².
    std::vector<std::pair<int, double>> other;
    double time_scale = 1.0;
    std::vector<int> flip_signs;  // generator indices to negate

    int k() const { return spin_axis >= 0 ? 2 : 1; }
    /// Invariant distance-to-core coordinate d(x).
    double tube_distance(const Vec& x) const;
    std::vector<VectorField> generators() const;
    /// A point on the core torus (all angles zero).
    Vec core_point() const;
    /// Euclidean point of the core torus at given angles (theta, then spin).
    Vec core_point_at(double theta, double spin_angle) const;
    /// The core torus as an oriented patch, oriented consistently with the
    /// orbit orientation induced by the generators (flips included).
    ParamPatch core_patch() const;

    /// Exact measure of the generator support {d(x) < 2ρ/3}. Closed form: the
    /// tube around the (closed, embedded) core circle has volume
    /// 2πa·vol(B^m)·s^m with m = 1 + other.size(); spinning multiplies by
    /// 2π·w0 exactly, since the Jacobian weight ζ averages to w0 over the disc.
    double support_volume() const;
    /// Axis-aligned bounding box of the support, for rejection sampling.
    void support_box(Vec& lo, Vec& hi) const;
    /// Support region ready to attach to an Action.
    SupportRegion support_region() const;
};

struct Scenario {
    std::string name;
    Domain domain;
    int k = 1, l = 1;
    Action Phi;
    Action Psi;               // valid when has_psi
    SingularManifold N;       // valid when has_manifold
    bool has_psi = false;
    bool has_manifold = false;
    TubeSpec tube_phi, tube_psi;
    Vec core_p, core_q;
    Vec apex_p, apex_q;           // default apexes (max distance from the tubes)
    Vec apex_p_alt, apex_q_alt;   // alternates for the apex-independence check
    double tau = 2.0 * std::numbers::pi;
    double expected_core_link = 1.0;  // sign convention pinned by the Hopf case
    std::string notes;
};

/// Pair of linked tube actions in the unit ball. Supported dimension
/// triples: (3,1,1), (4,2,1), (5,2,2). time_scale multiplies the Φ generators;
/// flip_phi negates the first Φ generator (target linking negates).
Scenario build_linked_tori(int n, int k, int l, double rho = 0.0,
                           double time_scale = 1.0, bool flip_phi = false);

/// Tube action (k = n−2) linking a fixed round circle N once. n = 3 supported.
Scenario build_action_vs_circle(int n, int k, bool flip_n = false);

std::vector<std::string> list_scenarios();
Scenario build_scenario(const std::string& name);

}  // namespace asymlink

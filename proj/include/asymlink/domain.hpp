#pragma once

#include <functional>
#include <string>
#include <vector>

#include "asymlink/rng.hpp"
#include "asymlink/vec.hpp"

namespace asymlink {

/// Compact convex domain Ω ⊂ ℝⁿ: unit-ball-style balls, axis boxes, ellipsoids.
/// Boxes are for sampling tests only (no smooth boundary).
class Domain {
public:
    enum class Kind { Ball, Box, Ellipsoid };

    /// Empty 0-dimensional placeholder (so aggregates holding a Domain can be
    /// default-constructed before configuration).
    Domain() = default;

    static Domain ball(int n, double radius = 1.0, Vec center = {});
    static Domain box(const Vec& lo, const Vec& hi);
    static Domain ellipsoid(int n, const Vec& semi_axes, Vec center = {});

    int dim() const { return n_; }
    Kind kind() const { return kind_; }
    const Vec& center() const { return center_; }

    bool contains(const Vec& x) const { return signed_distance(x) <= 0.0; }
    /// Negative inside, zero on ∂Ω, positive outside (exact for ball/box,
    /// smooth equivalent level function scaled to first order for ellipsoid).
    double signed_distance(const Vec& x) const;
    /// Outward unit normal at (or near) a boundary point.
    Vec boundary_normal(const Vec& x) const;

    double volume() const { return volume_; }
    double diameter() const;
    void bounding_box(Vec& lo, Vec& hi) const;

    /// Project a point slightly outside back onto Ω̄ (used by flow drift control).
    Vec project_inside(const Vec& x) const;

private:
    int n_ = 0;
    Kind kind_ = Kind::Ball;
    Vec center_;
    double radius_ = 1.0;  // ball
    Vec semi_;             // ellipsoid semi-axes
    Vec lo_, hi_;          // box
    double volume_ = 0.0;
};

/// i.i.d. uniform points in Ω by rejection from the bounding box.
/// Errors out if the empirical acceptance rate degenerates below 1e-3.
std::vector<Vec> sample_uniform(const Domain& d, RngStream& rng, int count);
Vec sample_uniform_one(const Domain& d, RngStream& rng);

/// A region of known measure with a membership test, e.g. the exact support of
/// a compactly supported field. Lets Monte Carlo integrals whose integrand
/// vanishes off the region sample only inside it (an exact restriction, not an
/// approximation) — essential when the region is a thin sliver of Ω.
struct SupportRegion {
    double volume = 0.0;  // exact measure of the region
    Vec lo, hi;           // bounding box for rejection sampling
    std::function<bool(const Vec&)> inside;
};

/// Uniform point in the region by rejection from its bounding box.
Vec sample_region(const SupportRegion& r, RngStream& rng);

/// (n−1)-volume a_n of the unit sphere S^{n-1}: 2π^{n/2}/Γ(n/2).
double sphere_area(int n);

/// Volume of the unit n-ball.
double unit_ball_volume(int n);

struct GammaQuadConfig {
    int grid_per_axis = 9;     // deterministic q-grid (first min(n,4) axes + center)
    int directions = 2048;     // QMC directions for the radial-shell integral
    double margin_sigmas = 3.0;
};

/// Certified upper bound Γ ≥ sup_q ∫_Ω ‖p−q‖^{1−n} dp.
/// Combines a grid-maximized radial-shell quadrature (plus error margin) with the
/// closed-form bound a_n·R* for the equal-volume ball (symmetric rearrangement),
/// and returns the larger of the two so it never under-estimates.
double gamma_bound(const Domain& d, const GammaQuadConfig& quad = {});

/// Radial-shell quadrature of ∫_Ω ‖p−q‖^{1−n} dp for a fixed q (non-singular
/// after the substitution p = q + r·u); exposed for tests.
double singular_radial_integral(const Domain& d, const Vec& q, int directions,
                                double* std_error = nullptr);

// ---- deterministic low-discrepancy helpers ----

/// Halton sequence point (index >= 0) in [0,1]^d, prime bases.
std::vector<double> halton_point(long long index, int d);

/// Inverse standard normal CDF (Acklam's rational approximation).
double inverse_normal_cdf(double p);

/// Deterministic QMC points filling a ball of given radius/center.
std::vector<Vec> qmc_ball_points(int n, double radius, const Vec& center, int count);

/// Deterministic QMC points on the sphere of given radius/center.
std::vector<Vec> qmc_sphere_points(int n, double radius, const Vec& center, int count);

}  // namespace asymlink

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "asymlink/estimate.hpp"
#include "asymlink/flows.hpp"
#include "asymlink/multivector.hpp"

namespace asymlink {

/// Closed oriented (possibly singular) submanifold given as oriented patches.
struct SingularManifold {
    std::vector<ParamPatch> patches;
    std::string label;
    int dim() const { return patches.empty() ? 0 : patches[0].dim; }
};

SingularManifold flipped(SingularManifold m);

struct QuadratureConfig {
    int points_per_axis = 24;
    /// Near-collision cutoff; <= 0 means 1e-3 × (combined bounding diameter).
    double delta_near = 0.0;
    int max_subdivision_depth = 2;
};

struct NearCollisionError : std::runtime_error {
    explicit NearCollisionError(const std::string& what) : std::runtime_error(what) {}
};

/// Gauss linking form: (−1)^k/a_n · (tx × ty')·(y−x)-style triple, evaluated on
/// raw tangent wedges so parametrization metric factors cancel:
///   kernel = (−1)^k/a_n · *( (y−x) ∧ tx ∧ ty ) / ‖y−x‖ⁿ.
double linking_kernel(const Vec& x, const MultiVector& tx, const Vec& y,
                      const MultiVector& ty, double delta_near = 0.0);

/// Same kernel on decomposable tangents (determinant fast path).
double linking_kernel_det(const Vec& x, const std::vector<Vec>& tx, const Vec& y,
                          const std::vector<Vec>& ty, double delta_near = 0.0);

/// Gauss-integral linking number of two disjoint cycles: midpoint tensor
/// quadrature per patch pair with one dyadic refinement as the error proxy.
/// Close patch pairs get their resolution scaled up (max_subdivision_depth
/// doublings). Summation is a fixed pairwise tree, bit-stable across workers.
Estimate link(const SingularManifold& A, const SingularManifold& B,
              const QuadratureConfig& q = {});

/// Sampled lower bound on dist(A,B) (dense nodes minus a first-order margin).
double min_distance(const SingularManifold& A, const SingularManifold& B);

/// Drops pairs of patches that coincide pointwise (≤ tol) with opposite
/// orientations — e.g. cone pairs over an exactly periodic orbit face, which
/// cancel in any integral but would otherwise sit on top of each other.
std::vector<ParamPatch> prune_cancelling_patches(std::vector<ParamPatch> patches,
                                                 double tol = 1e-9);

}  // namespace asymlink

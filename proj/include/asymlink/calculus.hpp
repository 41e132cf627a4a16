#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "asymlink/multivector.hpp"
#include "asymlink/vec.hpp"

namespace asymlink {

struct FDConfig {
    double h = 1e-5;  // central differences
};

/// Smooth map ℝⁿ → Λ_r(ℝⁿ). `partial`, when present, is the analytic
/// coefficient-wise derivative ∂F/∂x_j and takes precedence over finite
/// differences in every derived operator.
struct MultiVectorField {
    int n = 0;
    int grade = 0;
    std::function<MultiVector(const Vec&)> eval;
    std::function<MultiVector(const Vec&, int)> partial;  // optional: d/dx_j

    MultiVector operator()(const Vec& x) const { return eval(x); }
};

/// Plain vector field as the grade-1 special case.
struct VectorField {
    int n = 0;
    std::function<Vec(const Vec&)> eval;
    std::function<Vec(const Vec&, int)> partial;  // optional: d/dx_j

    Vec operator()(const Vec& x) const { return eval(x); }
};

MultiVectorField as_multivector_field(const VectorField& v);

/// ∂F/∂x_j at x: analytic if available, else central difference.
MultiVector partial_derivative(const MultiVectorField& F, const Vec& x, int j,
                               const FDConfig& fd);

/// Coefficient-wise exterior derivative: F = Σ f_I e_I ↦ Σ ∇f_I ∧ e_I, grade k+1.
/// For k = n the result is the zero grade-n field.
MultiVectorField grad_field(const MultiVectorField& F, const FDConfig& fd = {});

/// rot(F) = (−1)^{(k+1)ℓ} * ∇F with ℓ = n−k−1; requires k ≤ n−1.
MultiVectorField rot_field(const MultiVectorField& F, const FDConfig& fd = {});

/// div(F) = (−1)^{(k+1)ℓ} * ∇(*F) with ℓ = n−k−1; requires k ≥ 1.
MultiVectorField div_field(const MultiVectorField& F, const FDConfig& fd = {});

/// [U,V] = U(V) − V(U), coordinatewise.
VectorField lie_bracket(const VectorField& U, const VectorField& V, const FDConfig& fd = {});

/// Scalar divergence of a grade-1 field (coefficient trace), convenience.
double divergence_scalar(const VectorField& V, const Vec& x, const FDConfig& fd = {});

/// Max residual over `points` of the product rule
///   div(V¹∧…∧Vᵏ) = (−1)^k Σ_i (−1)^i div(Vⁱ) V¹∧…V̂ⁱ…∧Vᵏ
///                + (−1)^k Σ_{i<j} (−1)^{i+j} [Vⁱ,Vʲ]∧V¹∧…V̂ⁱ…V̂ʲ…∧Vᵏ
/// with both sides evaluated through finite differences.
double check_div_product(const std::vector<VectorField>& fields, const FDConfig& fd,
                         const std::vector<Vec>& points);

}  // namespace asymlink

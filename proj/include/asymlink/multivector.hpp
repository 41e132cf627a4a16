#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "asymlink/vec.hpp"

namespace asymlink {

// Blades are canonical multi-indices stored as bitmasks: bit i-1 set <=> index i
// present (indices 1..n, n <= 16). Signs come from counting inversions of
// concatenated index sequences, so all sign bookkeeping is exact integers.
using BladeMask = std::uint32_t;

/// Sign (+1/-1) of the shuffle merging sorted index sets a and b; 0 if they overlap.
int merge_sign(BladeMask a, BladeMask b);

/// Strictly increasing multi-index in 1..n.
struct MultiIndex {
    BladeMask mask = 0;
    int n = 0;

    MultiIndex() = default;
    MultiIndex(std::vector<int> indices, int ambient);

    int length() const;
    std::vector<int> indices() const;
};

/// Sparse element of Λ_r(ℝⁿ): coefficients over canonical blades of one grade.
class MultiVector {
public:
    MultiVector() = default;
    MultiVector(int n, int grade);

    /// Basis blade e_I (indices 1-based, strictly increasing).
    static MultiVector blade(int n, std::vector<int> indices, double coeff = 1.0);
    static MultiVector scalar(int n, double value);
    /// Grade-1 vector with the coordinates of v.
    static MultiVector vector(const Vec& v);

    int n() const { return n_; }
    int grade() const { return grade_; }
    const std::map<BladeMask, double>& coeffs() const { return coeffs_; }

    double coeff(BladeMask m) const;
    double coeff(const std::vector<int>& indices) const;
    void set_coeff(BladeMask m, double c);

    /// Coefficient of the empty blade (grade 0 only).
    double scalar_part() const;
    /// Grade-1 multivector as a coordinate vector.
    Vec to_vec() const;

    bool is_zero(double tol = 0.0) const;
    double norm2() const;
    double norm() const;

    MultiVector& operator+=(const MultiVector& o);
    MultiVector& operator-=(const MultiVector& o);
    MultiVector& operator*=(double s);
    friend MultiVector operator+(MultiVector a, const MultiVector& b) { return a += b; }
    friend MultiVector operator-(MultiVector a, const MultiVector& b) { return a -= b; }
    friend MultiVector operator*(MultiVector a, double s) { return a *= s; }
    friend MultiVector operator*(double s, MultiVector a) { return a *= s; }
    friend MultiVector operator-(MultiVector a) { return a *= -1.0; }

    std::string to_string() const;

private:
    int n_ = 0;
    int grade_ = 0;
    std::map<BladeMask, double> coeffs_;  // ordered -> deterministic iteration
};

/// Exterior product. Grade overflow (r+s > n) yields the zero grade-n element.
MultiVector wedge(const MultiVector& a, const MultiVector& b);

/// Hodge star: hodge(e_I) = sign(I,I^c) e_{I^c}; hodge∘hodge = (−1)^{r(n−r)} id.
MultiVector hodge(const MultiVector& a);

/// Generalized cross product *(a∧b), grade n−r−s (zero scalar on overflow).
MultiVector cross(const MultiVector& a, const MultiVector& b);

/// Generalized dot product *(a∧*b), grade s−r (zero when r > s).
MultiVector dot(const MultiVector& a, const MultiVector& b);

/// Scalar (a×b)·c = *(a∧b∧c); requires grades summing to n.
double triple(const MultiVector& a, const MultiVector& b, const MultiVector& c);

/// Wedge of a list of vectors, as a grade-k multivector.
MultiVector wedge_vectors(const std::vector<Vec>& vs);

}  // namespace asymlink

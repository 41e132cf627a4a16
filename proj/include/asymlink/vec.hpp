#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace asymlink {

/// Fixed-capacity point/vector in R^n, n <= 16. Value type, no heap.
class Vec {
public:
    static constexpr int kMaxDim = 16;

    Vec() : n_(0) { a_.fill(0.0); }
    explicit Vec(int n) : n_(n) {
        assert(n >= 0 && n <= kMaxDim);
        a_.fill(0.0);
    }
    Vec(std::initializer_list<double> xs) : n_(static_cast<int>(xs.size())) {
        assert(n_ <= kMaxDim);
        a_.fill(0.0);
        int i = 0;
        for (double x : xs) a_[i++] = x;
    }
    static Vec unit(int n, int axis) {
        Vec e(n);
        e[axis] = 1.0;
        return e;
    }

    int dim() const { return n_; }
    double operator[](int i) const { return a_[i]; }
    double& operator[](int i) { return a_[i]; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < n_; ++i) a_[i] += o.a_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < n_; ++i) a_[i] -= o.a_[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < n_; ++i) a_[i] *= s;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(Vec a, double s) { return a *= s; }
    friend Vec operator*(double s, Vec a) { return a *= s; }
    friend Vec operator-(Vec a) { return a *= -1.0; }

    friend double dot(const Vec& a, const Vec& b) {
        double s = 0.0;
        for (int i = 0; i < a.n_; ++i) s += a.a_[i] * b.a_[i];
        return s;
    }

    double norm2() const { return dot(*this, *this); }
    double norm() const { return std::sqrt(norm2()); }

private:
    int n_;
    std::array<double, kMaxDim> a_;
};

inline double dist(const Vec& a, const Vec& b) { return (a - b).norm(); }

/// Determinant of the n x n matrix whose columns are `cols` (partial-pivot LU).
inline double det_columns(const std::vector<Vec>& cols) {
    const int n = static_cast<int>(cols.size());
    std::array<std::array<double, Vec::kMaxDim>, Vec::kMaxDim> m{};
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) m[i][j] = cols[j][i];
    double det = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        if (m[piv][c] == 0.0) return 0.0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (int r = c + 1; r < n; ++r) {
            const double f = m[r][c] / m[c][c];
            for (int j = c; j < n; ++j) m[r][j] -= f * m[c][j];
        }
    }
    return det;
}

}  // namespace asymlink

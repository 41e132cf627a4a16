#include "asymlink/multivector.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace asymlink {

int merge_sign(BladeMask a, BladeMask b) {
    if (a & b) return 0;
    // Count pairs (i in a, j in b) with i > j: for each bit of a, bits of b below it.
    int inv = 0;
    BladeMask rest = a;
    while (rest) {
        const BladeMask lowest = rest & (~rest + 1u);
        inv += std::popcount(b & (lowest - 1u));
        rest &= rest - 1u;
    }
    return (inv & 1) ? -1 : 1;
}

MultiIndex::MultiIndex(std::vector<int> indices, int ambient) : n(ambient) {
    int prev = 0;
    for (int i : indices) {
        if (i <= prev || i > n)
            throw std::invalid_argument("multi-index must be strictly increasing in 1..n");
        mask |= 1u << (i - 1);
        prev = i;
    }
}

int MultiIndex::length() const { return std::popcount(mask); }

std::vector<int> MultiIndex::indices() const {
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) out.push_back(i + 1);
    return out;
}

MultiVector::MultiVector(int n, int grade) : n_(n), grade_(grade) {
    if (n < 0 || n > 16 || grade < 0 || grade > n)
        throw std::invalid_argument("bad multivector shape");
}

MultiVector MultiVector::blade(int n, std::vector<int> indices, double coeff) {
    MultiIndex mi(std::move(indices), n);
    MultiVector m(n, mi.length());
    m.set_coeff(mi.mask, coeff);
    return m;
}

MultiVector MultiVector::scalar(int n, double value) {
    MultiVector m(n, 0);
    m.set_coeff(0, value);
    return m;
}

MultiVector MultiVector::vector(const Vec& v) {
    MultiVector m(v.dim(), 1);
    for (int i = 0; i < v.dim(); ++i) m.set_coeff(1u << i, v[i]);
    return m;
}

double MultiVector::coeff(BladeMask m) const {
    auto it = coeffs_.find(m);
    return it == coeffs_.end() ? 0.0 : it->second;
}

double MultiVector::coeff(const std::vector<int>& indices) const {
    return coeff(MultiIndex(indices, n_).mask);
}

void MultiVector::set_coeff(BladeMask m, double c) {
    if (std::popcount(m) != grade_)
        throw std::invalid_argument("blade grade mismatch");
    if (c == 0.0)
        coeffs_.erase(m);
    else
        coeffs_[m] = c;
}

double MultiVector::scalar_part() const {
    if (grade_ != 0) throw std::logic_error("scalar_part of nonzero grade");
    return coeff(BladeMask{0});
}

Vec MultiVector::to_vec() const {
    if (grade_ != 1) throw std::logic_error("to_vec needs grade 1");
    Vec v(n_);
    for (auto& [m, c] : coeffs_) v[std::countr_zero(m)] = c;
    return v;
}

bool MultiVector::is_zero(double tol) const {
    for (auto& [m, c] : coeffs_)
        if (std::abs(c) > tol) return false;
    return true;
}

double MultiVector::norm2() const {
    double s = 0.0;
    for (auto& [m, c] : coeffs_) s += c * c;
    return s;
}

double MultiVector::norm() const { return std::sqrt(norm2()); }

MultiVector& MultiVector::operator+=(const MultiVector& o) {
    if (n_ != o.n_ || grade_ != o.grade_)
        throw std::invalid_argument("multivector shape mismatch in +");
    for (auto& [m, c] : o.coeffs_) {
        double v = coeff(m) + c;
        if (v == 0.0)
            coeffs_.erase(m);
        else
            coeffs_[m] = v;
    }
    return *this;
}

MultiVector& MultiVector::operator-=(const MultiVector& o) {
    if (n_ != o.n_ || grade_ != o.grade_)
        throw std::invalid_argument("multivector shape mismatch in -");
    for (auto& [m, c] : o.coeffs_) {
        double v = coeff(m) - c;
        if (v == 0.0)
            coeffs_.erase(m);
        else
            coeffs_[m] = v;
    }
    return *this;
}

MultiVector& MultiVector::operator*=(double s) {
    if (s == 0.0) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [m, c] : coeffs_) c *= s;
    return *this;
}

std::string MultiVector::to_string() const {
    std::ostringstream os;
    if (coeffs_.empty()) return "0";
    bool first = true;
    for (auto& [m, c] : coeffs_) {
        if (!first) os << " + ";
        first = false;
        os << c;
        if (m) {
            os << "*e";
            for (int i = 0; i < n_; ++i)
                if (m & (1u << i)) os << (i + 1);
        }
    }
    return os.str();
}

MultiVector wedge(const MultiVector& a, const MultiVector& b) {
    if (a.n() != b.n()) throw std::invalid_argument("wedge: dimension mismatch");
    const int n = a.n();
    const int g = a.grade() + b.grade();
    if (g > n) return MultiVector(n, n);  // Λ_{>n} = 0 by convention
    MultiVector out(n, g);
    for (auto& [ma, ca] : a.coeffs()) {
        for (auto& [mb, cb] : b.coeffs()) {
            const int s = merge_sign(ma, mb);
            if (!s) continue;
            const BladeMask m = ma | mb;
            const double v = out.coeff(m) + s * ca * cb;
            out.set_coeff(m, v);
        }
    }
    return out;
}

MultiVector hodge(const MultiVector& a) {
    const int n = a.n();
    const BladeMask full = (n == 32) ? ~0u : ((1u << n) - 1u);
    MultiVector out(n, n - a.grade());
    for (auto& [m, c] : a.coeffs()) {
        const BladeMask comp = full & ~m;
        out.set_coeff(comp, merge_sign(m, comp) * c);
    }
    return out;
}

MultiVector cross(const MultiVector& a, const MultiVector& b) {
    if (a.grade() + b.grade() > a.n()) return MultiVector(a.n(), 0);
    return hodge(wedge(a, b));
}

MultiVector dot(const MultiVector& a, const MultiVector& b) {
    if (a.grade() > b.grade()) return MultiVector(a.n(), 0);
    return hodge(wedge(a, hodge(b)));
}

double triple(const MultiVector& a, const MultiVector& b, const MultiVector& c) {
    if (a.grade() + b.grade() + c.grade() != a.n())
        throw std::invalid_argument("triple: grades must sum to n");
    return hodge(wedge(wedge(a, b), c)).scalar_part();
}

MultiVector wedge_vectors(const std::vector<Vec>& vs) {
    if (vs.empty()) throw std::invalid_argument("wedge_vectors: empty list");
    MultiVector out = MultiVector::vector(vs[0]);
    for (std::size_t i = 1; i < vs.size(); ++i) out = wedge(out, MultiVector::vector(vs[i]));
    return out;
}

}  // namespace asymlink

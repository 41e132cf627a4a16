#include "asymlink/calculus.hpp"

#include <cmath>
#include <stdexcept>

namespace asymlink {

MultiVectorField as_multivector_field(const VectorField& v) {
    MultiVectorField F;
    F.n = v.n;
    F.grade = 1;
    F.eval = [v](const Vec& x) { return MultiVector::vector(v.eval(x)); };
    if (v.partial)
        F.partial = [v](const Vec& x, int j) { return MultiVector::vector(v.partial(x, j)); };
    return F;
}

MultiVector partial_derivative(const MultiVectorField& F, const Vec& x, int j,
                               const FDConfig& fd) {
    if (F.partial) return F.partial(x, j);
    Vec xp = x, xm = x;
    xp[j] += fd.h;
    xm[j] -= fd.h;
    return (F.eval(xp) - F.eval(xm)) * (0.5 / fd.h);
}

MultiVectorField grad_field(const MultiVectorField& F, const FDConfig& fd) {
    const int n = F.n;
    MultiVectorField G;
    G.n = n;
    if (F.grade == n) {
        // d of a top form truncates to zero; keep grade n by convention
        G.grade = n;
        G.eval = [n](const Vec&) { return MultiVector(n, n); };
        return G;
    }
    G.grade = F.grade + 1;
    MultiVectorField base = F;
    G.eval = [base, fd, n](const Vec& x) {
        MultiVector out(n, base.grade + 1);
        for (int j = 0; j < n; ++j) {
            MultiVector dj = partial_derivative(base, x, j, fd);
            MultiVector ej = MultiVector::blade(n, {j + 1});
            out += wedge(ej, dj);
        }
        return out;
    };
    return G;
}

namespace {
int rot_div_sign(int k, int n) {
    const int l = n - k - 1;
    return (((k + 1) * l) % 2) ? -1 : 1;
}
}  // namespace

MultiVectorField rot_field(const MultiVectorField& F, const FDConfig& fd) {
    if (F.grade > F.n - 1) throw std::invalid_argument("rot_field: grade must be <= n-1");
    const double s = rot_div_sign(F.grade, F.n);
    MultiVectorField g = grad_field(F, fd);
    MultiVectorField R;
    R.n = F.n;
    R.grade = F.n - F.grade - 1;
    R.eval = [g, s](const Vec& x) { return s * hodge(g.eval(x)); };
    return R;
}

MultiVectorField div_field(const MultiVectorField& F, const FDConfig& fd) {
    if (F.grade < 1) throw std::invalid_argument("div_field: grade must be >= 1");
    const double s = rot_div_sign(F.grade, F.n);
    MultiVectorField dualF;
    dualF.n = F.n;
    dualF.grade = F.n - F.grade;
    MultiVectorField base = F;
    dualF.eval = [base](const Vec& x) { return hodge(base.eval(x)); };
    if (base.partial)
        dualF.partial = [base](const Vec& x, int j) { return hodge(base.partial(x, j)); };
    MultiVectorField g = grad_field(dualF, fd);
    MultiVectorField D;
    D.n = F.n;
    D.grade = F.grade - 1;
    D.eval = [g, s](const Vec& x) { return s * hodge(g.eval(x)); };
    return D;
}

namespace {
Vec vf_partial(const VectorField& V, const Vec& x, int j, const FDConfig& fd) {
    if (V.partial) return V.partial(x, j);
    Vec xp = x, xm = x;
    xp[j] += fd.h;
    xm[j] -= fd.h;
    return (V.eval(xp) - V.eval(xm)) * (0.5 / fd.h);
}
}  // namespace

VectorField lie_bracket(const VectorField& U, const VectorField& V, const FDConfig& fd) {
    if (U.n != V.n) throw std::invalid_argument("lie_bracket: dimension mismatch");
    VectorField B;
    B.n = U.n;
    B.eval = [U, V, fd](const Vec& x) {
        const Vec u = U.eval(x), v = V.eval(x);
        Vec out(x.dim());
        for (int j = 0; j < x.dim(); ++j) {
            out += u[j] * vf_partial(V, x, j, fd) - v[j] * vf_partial(U, x, j, fd);
        }
        return out;
    };
    return B;
}

double divergence_scalar(const VectorField& V, const Vec& x, const FDConfig& fd) {
    double s = 0.0;
    for (int j = 0; j < V.n; ++j) s += vf_partial(V, x, j, fd)[j];
    return s;
}

double check_div_product(const std::vector<VectorField>& fields, const FDConfig& fd,
                         const std::vector<Vec>& points) {
    const int k = static_cast<int>(fields.size());
    if (k == 0) throw std::invalid_argument("check_div_product: no fields");
    const int n = fields[0].n;
    if (k > n - 1) throw std::invalid_argument("check_div_product: need k <= n-1");

    MultiVectorField wedged;
    wedged.n = n;
    wedged.grade = k;
    wedged.eval = [fields, n](const Vec& x) {
        std::vector<Vec> vs;
        vs.reserve(fields.size());
        for (auto& f : fields) vs.push_back(f.eval(x));
        return wedge_vectors(vs);
    };
    MultiVectorField lhs = div_field(wedged, fd);

    const int ksign = (k % 2) ? -1 : 1;
    double max_res = 0.0;
    for (const Vec& x : points) {
        MultiVector rhs(n, k - 1);
        // divergence terms
        for (int i = 0; i < k; ++i) {
            std::vector<Vec> rest;
            for (int j = 0; j < k; ++j)
                if (j != i) rest.push_back(fields[j].eval(x));
            const double sgn = ksign * (((i + 1) % 2) ? -1.0 : 1.0);
            const double di = divergence_scalar(fields[i], x, fd);
            if (k == 1)
                rhs += MultiVector::scalar(n, sgn * di);
            else
                rhs += (sgn * di) * wedge_vectors(rest);
        }
        // bracket terms
        for (int i = 0; i < k; ++i) {
            for (int j = i + 1; j < k; ++j) {
                std::vector<Vec> vs;
                vs.push_back(lie_bracket(fields[i], fields[j], fd).eval(x));
                for (int m = 0; m < k; ++m)
                    if (m != i && m != j) vs.push_back(fields[m].eval(x));
                const double sgn = ksign * (((i + j + 2) % 2) ? -1.0 : 1.0);
                if (k == 2)
                    rhs += MultiVector::vector(vs[0]) * sgn;
                else
                    rhs += sgn * wedge_vectors(vs);
            }
        }
        const double res = (lhs.eval(x) - rhs).norm();
        if (res > max_res) max_res = res;
    }
    return max_res;
}

}  // namespace asymlink

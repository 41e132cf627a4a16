#include "asymlink/gauss.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "asymlink/parallel.hpp"

namespace asymlink {

MultiVectorField random_poly_field(RngStream& rng, int n, int k, int degree) {
    struct Poly {
        BladeMask m = 0;
        double c0 = 0.0;
        std::array<double, Vec::kMaxDim> lin{};
        std::array<std::array<double, Vec::kMaxDim>, Vec::kMaxDim> quad{};
    };
    auto polys = std::make_shared<std::vector<Poly>>();
    for (BladeMask m = 0; m < (1u << n); ++m) {
        if (std::popcount(m) != k) continue;
        Poly p;
        p.m = m;
        p.c0 = rng.uniform(-1.0, 1.0);
        if (degree >= 1)
            for (int i = 0; i < n; ++i) p.lin[i] = rng.uniform(-1.0, 1.0);
        if (degree >= 2)
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) p.quad[i][j] = rng.uniform(-1.0, 1.0);
        polys->push_back(p);
    }
    MultiVectorField F;
    F.n = n;
    F.grade = k;
    F.eval = [polys, n, k](const Vec& x) {
        MultiVector mv(n, k);
        for (const auto& p : *polys) {
            double v = p.c0;
            for (int i = 0; i < n; ++i) {
                v += p.lin[i] * x[i];
                for (int j = i; j < n; ++j) v += p.quad[i][j] * x[i] * x[j];
            }
            mv.set_coeff(p.m, v);
        }
        return mv;
    };
    F.partial = [polys, n, k](const Vec& x, int m) {
        MultiVector mv(n, k);
        for (const auto& p : *polys) {
            double v = p.lin[m] + 2.0 * p.quad[m][m] * x[m];
            for (int i = 0; i < m; ++i) v += p.quad[i][m] * x[i];
            for (int j = m + 1; j < n; ++j) v += p.quad[m][j] * x[j];
            mv.set_coeff(p.m, v);
        }
        return mv;
    };
    return F;
}

GaussCheckReport gauss_divergence_check(const MultiVectorField& V, const Domain& d,
                                        long long volume_points,
                                        long long boundary_points,
                                        const FDConfig& fd) {
    if (d.kind() != Domain::Kind::Ball)
        throw std::invalid_argument("gauss_divergence_check: ball domains only");
    const int n = d.dim();
    const int k = V.grade;
    if (k < 1 || k > n)
        throw std::invalid_argument("gauss_divergence_check: need 1 <= grade <= n");
    const int l = n - k - 1;
    const double sign = (((k + 1) * l) % 2) ? -1.0 : 1.0;
    const double radius = std::pow(d.volume() / unit_ball_volume(n), 1.0 / n);

    const MultiVectorField divV = div_field(V, fd);
    const std::vector<Vec> vol_pts =
        qmc_ball_points(n, radius, d.center(), static_cast<int>(volume_points));
    const std::vector<Vec> bdy_pts =
        qmc_sphere_points(n, radius, d.center(), static_cast<int>(boundary_points));

    const int nblocks = 64;
    std::vector<MultiVector> vsum(nblocks, MultiVector(n, k - 1));
    std::vector<MultiVector> bsum(nblocks, MultiVector(n, k - 1));
    parallel_blocks(nblocks, [&](int b) {
        MultiVector av(n, k - 1), ab(n, k - 1);
        const std::size_t v0 = vol_pts.size() * b / nblocks;
        const std::size_t v1 = vol_pts.size() * (b + 1) / nblocks;
        for (std::size_t i = v0; i < v1; ++i) av += divV.eval(vol_pts[i]);
        const std::size_t s0 = bdy_pts.size() * b / nblocks;
        const std::size_t s1 = bdy_pts.size() * (b + 1) / nblocks;
        for (std::size_t i = s0; i < s1; ++i) {
            const Vec normal = (bdy_pts[i] - d.center()) * (1.0 / radius);
            ab += dot(MultiVector::vector(normal), V.eval(bdy_pts[i]));
        }
        vsum[b] = av;
        bsum[b] = ab;
    });
    MultiVector vol_total(n, k - 1), bdy_total(n, k - 1);
    for (int b = 0; b < nblocks; ++b) {
        vol_total += vsum[b];
        bdy_total += bsum[b];
    }

    GaussCheckReport rep{MultiVector(n, k - 1), MultiVector(n, k - 1), 0.0, 0.0};
    rep.volume_side = vol_total * (d.volume() / vol_pts.size());
    const double area = sphere_area(n) * std::pow(radius, n - 1);
    rep.boundary_side = bdy_total * (sign * area / bdy_pts.size());
    rep.scale = std::max({rep.volume_side.norm(), rep.boundary_side.norm(), 1e-12});
    rep.rel_residual = (rep.volume_side - rep.boundary_side).norm() / rep.scale;
    return rep;
}

}  // namespace asymlink

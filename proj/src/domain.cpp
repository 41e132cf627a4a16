#include "asymlink/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace asymlink {

Domain Domain::ball(int n, double radius, Vec center) {
    if (n < 1 || radius <= 0.0) throw std::invalid_argument("bad ball");
    if (center.dim() == 0) center = Vec(n);
    Domain d;
    d.n_ = n;
    d.kind_ = Kind::Ball;
    d.center_ = center;
    d.radius_ = radius;
    d.volume_ = unit_ball_volume(n) * std::pow(radius, n);
    return d;
}

Domain Domain::box(const Vec& lo, const Vec& hi) {
    Domain d;
    d.n_ = lo.dim();
    d.kind_ = Kind::Box;
    d.lo_ = lo;
    d.hi_ = hi;
    d.center_ = 0.5 * (lo + hi);
    d.volume_ = 1.0;
    for (int i = 0; i < d.n_; ++i) {
        if (hi[i] <= lo[i]) throw std::invalid_argument("bad box");
        d.volume_ *= hi[i] - lo[i];
    }
    return d;
}

Domain Domain::ellipsoid(int n, const Vec& semi_axes, Vec center) {
    if (center.dim() == 0) center = Vec(n);
    Domain d;
    d.n_ = n;
    d.kind_ = Kind::Ellipsoid;
    d.center_ = center;
    d.semi_ = semi_axes;
    d.volume_ = unit_ball_volume(n);
    for (int i = 0; i < n; ++i) {
        if (semi_axes[i] <= 0.0) throw std::invalid_argument("bad ellipsoid");
        d.volume_ *= semi_axes[i];
    }
    return d;
}

double Domain::signed_distance(const Vec& x) const {
    switch (kind_) {
        case Kind::Ball:
            return (x - center_).norm() - radius_;
        case Kind::Box: {
            // Exact SDF of an axis box.
            double inside = -1e300;
            double out2 = 0.0;
            bool outside = false;
            for (int i = 0; i < n_; ++i) {
                const double d = std::max(lo_[i] - x[i], x[i] - hi_[i]);
                inside = std::max(inside, d);
                if (d > 0.0) {
                    outside = true;
                    out2 += d * d;
                }
            }
            return outside ? std::sqrt(out2) : inside;
        }
        case Kind::Ellipsoid: {
            // Level function ‖diag(1/a)(x−c)‖ − 1, scaled by min semi-axis so the
            // gradient has roughly unit magnitude near ∂Ω.
            double s = 0.0, amin = semi_[0];
            for (int i = 0; i < n_; ++i) {
                const double t = (x[i] - center_[i]) / semi_[i];
                s += t * t;
                amin = std::min(amin, semi_[i]);
            }
            return (std::sqrt(s) - 1.0) * amin;
        }
    }
    return 0.0;
}

Vec Domain::boundary_normal(const Vec& x) const {
    switch (kind_) {
        case Kind::Ball: {
            Vec d = x - center_;
            const double r = d.norm();
            if (r == 0.0) throw std::invalid_argument("normal at center undefined");
            return d * (1.0 / r);
        }
        case Kind::Box: {
            // face with largest inward distance
            int best = 0;
            double bestd = -1e300, sign = 1.0;
            for (int i = 0; i < n_; ++i) {
                if (x[i] - hi_[i] > bestd) { bestd = x[i] - hi_[i]; best = i; sign = 1.0; }
                if (lo_[i] - x[i] > bestd) { bestd = lo_[i] - x[i]; best = i; sign = -1.0; }
            }
            return Vec::unit(n_, best) * sign;
        }
        case Kind::Ellipsoid: {
            Vec g(n_);
            for (int i = 0; i < n_; ++i)
                g[i] = (x[i] - center_[i]) / (semi_[i] * semi_[i]);
            const double r = g.norm();
            if (r == 0.0) throw std::invalid_argument("normal at center undefined");
            return g * (1.0 / r);
        }
    }
    return Vec(n_);
}

double Domain::diameter() const {
    switch (kind_) {
        case Kind::Ball:
            return 2.0 * radius_;
        case Kind::Box:
            return (hi_ - lo_).norm();
        case Kind::Ellipsoid: {
            double m = 0.0;
            for (int i = 0; i < n_; ++i) m = std::max(m, semi_[i]);
            return 2.0 * m;
        }
    }
    return 0.0;
}

void Domain::bounding_box(Vec& lo, Vec& hi) const {
    lo = Vec(n_);
    hi = Vec(n_);
    for (int i = 0; i < n_; ++i) {
        switch (kind_) {
            case Kind::Ball:
                lo[i] = center_[i] - radius_;
                hi[i] = center_[i] + radius_;
                break;
            case Kind::Box:
                lo[i] = lo_[i];
                hi[i] = hi_[i];
                break;
            case Kind::Ellipsoid:
                lo[i] = center_[i] - semi_[i];
                hi[i] = center_[i] + semi_[i];
                break;
        }
    }
}

Vec Domain::project_inside(const Vec& x) const {
    const double sd = signed_distance(x);
    if (sd <= 0.0) return x;
    switch (kind_) {
        case Kind::Ball: {
            Vec d = x - center_;
            return center_ + d * (radius_ / d.norm());
        }
        case Kind::Box: {
            Vec y = x;
            for (int i = 0; i < n_; ++i) y[i] = std::clamp(y[i], lo_[i], hi_[i]);
            return y;
        }
        case Kind::Ellipsoid: {
            // first-order pullback along the level-set gradient (adequate for the
            // tiny drifts flow() is allowed to correct)
            return x - boundary_normal(x) * sd;
        }
    }
    return x;
}

Vec sample_uniform_one(const Domain& d, RngStream& rng) {
    Vec lo, hi;
    d.bounding_box(lo, hi);
    long long proposals = 0, accepted = 0;
    for (;;) {
        ++proposals;
        Vec x = rng.uniform_box(lo, hi);
        if (d.contains(x)) {
            ++accepted;
            return x;
        }
        if (proposals >= 100000 && accepted == 0)
            throw std::runtime_error("sample_uniform: rejection acceptance below 1e-3");
    }
}

Vec sample_region(const SupportRegion& r, RngStream& rng) {
    for (long long tries = 0; tries < 1000000; ++tries) {
        Vec x = rng.uniform_box(r.lo, r.hi);
        if (r.inside(x)) return x;
    }
    throw std::runtime_error("sample_region: rejection acceptance degenerated");
}

std::vector<Vec> sample_uniform(const Domain& d, RngStream& rng, int count) {
    if (count < 1) throw std::invalid_argument("sample_uniform: count >= 1");
    Vec lo, hi;
    d.bounding_box(lo, hi);
    std::vector<Vec> out;
    out.reserve(count);
    long long proposals = 0;
    while (static_cast<int>(out.size()) < count) {
        ++proposals;
        Vec x = rng.uniform_box(lo, hi);
        if (d.contains(x)) out.push_back(x);
        if (proposals > 10000 &&
            static_cast<double>(out.size()) / static_cast<double>(proposals) < 1e-3)
            throw std::runtime_error("sample_uniform: rejection acceptance below 1e-3");
    }
    return out;
}

double sphere_area(int n) {
    if (n < 2) throw std::invalid_argument("sphere_area: n >= 2");
    return 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
}

double unit_ball_volume(int n) {
    return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

std::vector<double> halton_point(long long index, int d) {
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
    std::vector<double> x(d);
    for (int j = 0; j < d; ++j) {
        const int b = primes[j];
        double f = 1.0, r = 0.0;
        long long i = index + 1;  // skip the all-zeros point
        while (i > 0) {
            f /= b;
            r += f * static_cast<double>(i % b);
            i /= b;
        }
        x[j] = r;
    }
    return x;
}

double inverse_normal_cdf(double p) {
    // Acklam's algorithm, |relative error| < 1.15e-9.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double dd[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    double q, r;
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("inverse_normal_cdf: p in (0,1)");
    if (p < plow) {
        q = std::sqrt(-2 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1);
    }
    if (p > phigh) {
        q = std::sqrt(-2 * std::log(1 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1);
    }
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

namespace {
Vec halton_direction(long long index, int n) {
    // Gaussian mapping of a Halton point -> uniform direction on S^{n-1}.
    std::vector<double> u = halton_point(index, n);
    Vec g(n);
    for (int i = 0; i < n; ++i) {
        double p = std::clamp(u[i], 1e-12, 1.0 - 1e-12);
        g[i] = inverse_normal_cdf(p);
    }
    const double r = g.norm();
    return r > 0.0 ? g * (1.0 / r) : Vec::unit(n, 0);
}
}  // namespace

std::vector<Vec> qmc_ball_points(int n, double radius, const Vec& center, int count) {
    std::vector<Vec> pts;
    pts.reserve(count);
    for (long long i = 0; i < count; ++i) {
        std::vector<double> u = halton_point(i, n + 1);
        Vec dir = halton_direction(i, n);
        const double r = radius * std::pow(std::clamp(u[n], 1e-15, 1.0), 1.0 / n);
        pts.push_back(center + dir * r);
    }
    return pts;
}

std::vector<Vec> qmc_sphere_points(int n, double radius, const Vec& center, int count) {
    std::vector<Vec> pts;
    pts.reserve(count);
    for (long long i = 0; i < count; ++i) pts.push_back(center + halton_direction(i, n) * radius);
    return pts;
}

double singular_radial_integral(const Domain& d, const Vec& q, int directions,
                                double* std_error) {
    // ∫_Ω ‖p−q‖^{1−n} dp = ∫_{S^{n-1}} ∫_0^{R} 1_Ω(q + r u) dr dσ(u): the radial
    // measure r^{n-1} dr cancels the kernel, so the integrand is just the chord
    // length of Ω along each ray — bounded and QMC-friendly.
    const int n = d.dim();
    Vec lo, hi;
    d.bounding_box(lo, hi);
    double rmax = 0.0;
    for (int i = 0; i < n; ++i)
        rmax = std::max({rmax, std::abs(hi[i] - q[i]), std::abs(q[i] - lo[i])});
    rmax *= std::sqrt(static_cast<double>(n));
    const int radial = 64;
    double sum = 0.0, sum2 = 0.0;
    for (long long i = 0; i < directions; ++i) {
        const Vec u = halton_direction(i, n);
        double chord = 0.0;
        for (int j = 0; j < radial; ++j) {
            const double r = rmax * (j + 0.5) / radial;
            if (d.contains(q + u * r)) chord += rmax / radial;
        }
        sum += chord;
        sum2 += chord * chord;
    }
    const double mean = sum / directions;
    if (std_error) {
        const double var = std::max(0.0, sum2 / directions - mean * mean);
        *std_error = sphere_area(n) * std::sqrt(var / directions);
    }
    return sphere_area(n) * mean;
}

double gamma_bound(const Domain& d, const GammaQuadConfig& quad) {
    const int n = d.dim();
    // Closed-form certificate: symmetric rearrangement turns Ω into the
    // equal-volume ball B(R*) centered at q, for which the integral is a_n·R*.
    const double rstar = std::pow(d.volume() / unit_ball_volume(n), 1.0 / n);
    const double certified = sphere_area(n) * rstar;

    // Grid-maximized quadrature (+ margin), mostly a sharpness diagnostic; the
    // returned bound is the max of the two so it can only over-estimate.
    Vec lo, hi;
    d.bounding_box(lo, hi);
    const int gdims = std::min(n, 4);
    const int g = quad.grid_per_axis;
    long long total = 1;
    for (int i = 0; i < gdims; ++i) total *= g;
    double best = 0.0;
    for (long long idx = 0; idx <= total; ++idx) {
        Vec q = d.center();
        if (idx < total) {
            long long rem = idx;
            for (int i = 0; i < gdims; ++i) {
                const int c = static_cast<int>(rem % g);
                rem /= g;
                q[i] = lo[i] + (hi[i] - lo[i]) * (c + 0.5) / g;
            }
            if (!d.contains(q)) continue;
        }
        double se = 0.0;
        const double val = singular_radial_integral(d, q, quad.directions, &se);
        best = std::max(best, val + quad.margin_sigmas * se);
    }
    return std::max(certified, best);
}

}  // namespace asymlink

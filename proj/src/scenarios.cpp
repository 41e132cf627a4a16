#include "asymlink/scenarios.hpp"

#include <cmath>
#include <stdexcept>

namespace asymlink {

double BumpProfile::operator()(double d) const {
    const double a = inner(), b = outer();
    if (d <= a) return 1.0;
    if (d >= b) return 0.0;
    const double s = (d - a) / (b - a);
    return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

double TubeSpec::tube_distance(const Vec& x) const {
    const double u = x[u_axis] - u0;
    double w;
    if (spin_axis >= 0)
        w = std::sqrt(x[w_axis] * x[w_axis] + x[spin_axis] * x[spin_axis]);
    else
        w = x[w_axis];
    const double dw = w - w0;
    const double rho_c = std::sqrt(u * u + dw * dw);
    double d2 = (rho_c - radius) * (rho_c - radius);
    for (const auto& [axis, off] : other) {
        const double t = x[axis] - off;
        d2 += t * t;
    }
    return std::sqrt(d2);
}

std::vector<VectorField> TubeSpec::generators() const {
    std::vector<double> dir(static_cast<std::size_t>(k()), time_scale);
    for (int idx : flip_signs) dir[idx] = -dir[idx];

    const TubeSpec spec = *this;  // capture by value: specs are tiny

    VectorField base;
    base.n = n;
    base.eval = [spec, s = dir[0]](const Vec& x) {
        Vec v(spec.n);
        const double d = spec.tube_distance(x);
        if (d >= spec.bump.outer()) return v;
        const double lam = s * spec.bump(d);
        const double u = x[spec.u_axis] - spec.u0;
        if (spec.spin_axis < 0) {
            v[spec.u_axis] = -lam * (x[spec.w_axis] - spec.w0);
            v[spec.w_axis] = lam * u;
        } else {
            const double zr = x[spec.w_axis], zs = x[spec.spin_axis];
            const double zeta = std::sqrt(zr * zr + zs * zs);
            // zeta > 0 on the support: the core keeps w0 − a − 2ρ/3 > 0.
            const double f = lam * spec.w0 / zeta;
            v[spec.u_axis] = -f * (zeta - spec.w0);
            const double radial = f * u / zeta;
            v[spec.w_axis] = radial * zr;
            v[spec.spin_axis] = radial * zs;
        }
        return v;
    };

    std::vector<VectorField> out{base};
    if (spin_axis >= 0) {
        VectorField spin;
        spin.n = n;
        spin.eval = [spec, s = dir[1]](const Vec& x) {
            Vec v(spec.n);
            const double d = spec.tube_distance(x);
            if (d >= spec.bump.outer()) return v;
            const double lam = s * spec.bump(d);
            v[spec.w_axis] = -lam * x[spec.spin_axis];
            v[spec.spin_axis] = lam * x[spec.w_axis];
            return v;
        };
        out.push_back(spin);
    }
    return out;
}

Vec TubeSpec::core_point_at(double theta, double spin_angle) const {
    Vec x(n);
    for (const auto& [axis, off] : other) x[axis] = off;
    x[u_axis] = u0 + radius * std::sin(theta);
    const double w = w0 + radius * std::cos(theta);
    if (spin_axis < 0) {
        x[w_axis] = w;
    } else {
        x[w_axis] = w * std::cos(spin_angle);
        x[spin_axis] = w * std::sin(spin_angle);
    }
    return x;
}

Vec TubeSpec::core_point() const { return core_point_at(0.0, 0.0); }

ParamPatch TubeSpec::core_patch() const {
    const TubeSpec spec = *this;
    ParamPatch p;
    p.dim = k();
    p.rect = Rectangle::cube(p.dim, 2.0 * std::numbers::pi);
    p.map = [spec](const std::vector<double>& t) {
        return spec.core_point_at(t[0], spec.spin_axis >= 0 ? t[1] : 0.0);
    };
    p.tangent = [spec](const std::vector<double>& t) {
        const double th = t[0];
        std::vector<Vec> tan;
        Vec dth(spec.n);
        dth[spec.u_axis] = spec.radius * std::cos(th);
        const double dw = -spec.radius * std::sin(th);
        if (spec.spin_axis < 0) {
            dth[spec.w_axis] = dw;
            tan.push_back(dth);
        } else {
            const double al = t[1];
            dth[spec.w_axis] = dw * std::cos(al);
            dth[spec.spin_axis] = dw * std::sin(al);
            tan.push_back(dth);
            const double w = spec.w0 + spec.radius * std::cos(th);
            Vec dal(spec.n);
            dal[spec.w_axis] = -w * std::sin(al);
            dal[spec.spin_axis] = w * std::cos(al);
            tan.push_back(dal);
        }
        return tan;
    };
    // The base generator runs the core circle in the −θ direction (before
    // flips); spins match their angle parameter. Fold that into orientation.
    std::vector<double> dir(static_cast<std::size_t>(k()), time_scale);
    for (int idx : flip_signs) dir[idx] = -dir[idx];
    double o = -(dir[0] < 0.0 ? -1.0 : 1.0);
    for (std::size_t i = 1; i < dir.size(); ++i) o *= dir[i] < 0.0 ? -1.0 : 1.0;
    p.orientation = o < 0.0 ? -1 : 1;
    p.label = "core-torus";
    p.interior = true;
    return p;
}

double TubeSpec::support_volume() const {
    const double s = bump.outer();
    const int m = 1 + static_cast<int>(other.size());
    double v = 2.0 * std::numbers::pi * radius * unit_ball_volume(m) * std::pow(s, m);
    if (spin_axis >= 0) v *= 2.0 * std::numbers::pi * w0;
    return v;
}

void TubeSpec::support_box(Vec& lo, Vec& hi) const {
    lo = Vec(n);
    hi = Vec(n);
    const double s = bump.outer();
    auto set = [&](int axis, double c, double r) {
        lo[axis] = c - r;
        hi[axis] = c + r;
    };
    set(u_axis, u0, radius + s);
    if (spin_axis >= 0) {
        set(w_axis, 0.0, w0 + radius + s);
        set(spin_axis, 0.0, w0 + radius + s);
    } else {
        set(w_axis, w0, radius + s);
    }
    for (const auto& [axis, off] : other) set(axis, off, s);
}

SupportRegion TubeSpec::support_region() const {
    SupportRegion r;
    r.volume = support_volume();
    support_box(r.lo, r.hi);
    const TubeSpec spec = *this;
    r.inside = [spec](const Vec& x) { return spec.tube_distance(x) < spec.bump.outer(); };
    return r;
}

namespace {

/// Deterministic apex search: QMC candidates in the 0.8-ball scored by the
/// clearance to both tube supports; successive picks repel each other so the
/// four apexes (two defaults + two alternates) stay distinct.
std::vector<Vec> pick_apexes(const Domain& d, const TubeSpec& A, const TubeSpec& B) {
    const std::vector<Vec> cand = qmc_ball_points(d.dim(), 0.8, Vec(d.dim()), 512);
    std::vector<Vec> picked;
    for (int round = 0; round < 4; ++round) {
        double best = -1.0;
        Vec best_pt(d.dim());
        for (const Vec& c : cand) {
            double score = std::min(A.tube_distance(c) - A.bump.outer(),
                                    B.tube_distance(c) - B.bump.outer());
            for (const Vec& p : picked) score = std::min(score, dist(c, p));
            if (score > best) {
                best = score;
                best_pt = c;
            }
        }
        picked.push_back(best_pt);
    }
    return picked;
}

Scenario assemble_tube_pair(std::string name, int n, TubeSpec A, TubeSpec B) {
    Scenario sc;
    sc.name = std::move(name);
    sc.domain = Domain::ball(n);
    sc.k = A.k();
    sc.l = B.k();
    sc.tube_phi = A;
    sc.tube_psi = B;
    sc.Phi = make_action(sc.domain, A.generators());
    sc.Psi = make_action(sc.domain, B.generators());
    sc.Phi.support = A.support_region();
    sc.Psi.support = B.support_region();
    sc.has_psi = true;
    sc.core_p = A.core_point();
    sc.core_q = B.core_point();
    const std::vector<Vec> apexes = pick_apexes(sc.domain, A, B);
    sc.apex_p = apexes[0];
    sc.apex_q = apexes[1];
    sc.apex_p_alt = apexes[2];
    sc.apex_q_alt = apexes[3];
    return sc;
}

}  // namespace

Scenario build_linked_tori(int n, int k, int l, double rho, double time_scale,
                           bool flip_phi) {
    if (rho <= 0.0) rho = (n == 3) ? 0.2 : 0.1;
    TubeSpec A, B;
    A.n = B.n = n;
    A.bump.rho = B.bump.rho = rho;
    A.time_scale = time_scale;
    if (n == 3 && k == 1 && l == 1) {
        // Perpendicular key-ring circles: N's near crossing sits at M's center.
        A.u_axis = 1; A.w_axis = 0; A.w0 = 0.0; A.radius = 0.4;
        A.other = {{2, 0.0}};
        B.u_axis = 2; B.w_axis = 0; B.w0 = 0.4; B.radius = 0.4;
        B.other = {{1, 0.0}};
        // Clockwise base rotation on Φ pins lk(core, core) = +1.
        A.flip_signs = {0};
    } else if (n == 4 && k == 2 && l == 1) {
        // Same ring pair pushed into {x0 > 0}, then M spun into x3.
        A.u_axis = 1; A.w_axis = 0; A.w0 = 0.32; A.spin_axis = 3; A.radius = 0.2;
        A.other = {{2, 0.0}};
        B.u_axis = 2; B.w_axis = 0; B.w0 = 0.52; B.radius = 0.2;
        B.other = {{1, 0.0}, {3, 0.0}};
        A.flip_signs = {0};
    } else if (n == 5 && k == 2 && l == 2) {
        // Ring pair at x2 = 0.32 inside {x0 > 0} ∩ {x2 > 0}; M spun into x3
        // (radial x0), N spun into x4 (radial x2) — each spin keeps both
        // manifolds in the positive half-space of its rotation radial axis,
        // so every spin preserves the single transverse crossing.
        A.u_axis = 1; A.w_axis = 0; A.w0 = 0.30; A.spin_axis = 3; A.radius = 0.2;
        A.other = {{2, 0.32}, {4, 0.0}};
        B.u_axis = 0; B.u0 = 0.50; B.w_axis = 2; B.w0 = 0.32; B.spin_axis = 4;
        B.radius = 0.2;
        B.other = {{1, 0.0}, {3, 0.0}};
        A.flip_signs = {0};
        // Ψ's spin runs opposite to Φ's so the pair links +1, not −1.
        B.flip_signs = {1};
    } else {
        throw std::invalid_argument(
            "build_linked_tori: supported (n,k,l) are (3,1,1), (4,2,1), (5,2,2)");
    }
    if (flip_phi) {
        if (A.flip_signs.empty())
            A.flip_signs = {0};
        else
            A.flip_signs.clear();
    }

    std::string name = (n == 3) ? "arnold-n3"
                                : "tori-n" + std::to_string(n) + "-k" +
                                      std::to_string(k) + "l" + std::to_string(l);
    Scenario sc = assemble_tube_pair(std::move(name), n, A, B);
    sc.expected_core_link = flip_phi ? -1.0 : 1.0;
    sc.notes = "pair of linked solid-torus tube actions in the unit ball";
    return sc;
}

Scenario build_action_vs_circle(int n, int k, bool flip_n) {
    if (n != 3 || k != 1)
        throw std::invalid_argument("build_action_vs_circle: only (n,k) = (3,1)");
    Scenario sc = build_linked_tori(3, 1, 1);
    sc.name = "action-circle-n3";
    sc.has_psi = false;

    const TubeSpec B = sc.tube_psi;  // the circle replaces Ψ's core torus
    ParamPatch circle;
    circle.dim = 1;
    circle.rect = Rectangle::cube(1, 2.0 * std::numbers::pi);
    circle.map = [B](const std::vector<double>& t) { return B.core_point_at(t[0], 0.0); };
    circle.tangent = [B](const std::vector<double>& t) {
        Vec v(3);
        v[B.u_axis] = B.radius * std::cos(t[0]);
        v[B.w_axis] = -B.radius * std::sin(t[0]);
        return std::vector<Vec>{v};
    };
    // θ runs opposite to the tube's base generator, so −1 matches the torus pair.
    circle.orientation = flip_n ? 1 : -1;
    circle.label = "round-circle";
    circle.interior = true;
    sc.N.patches = {circle};
    sc.N.label = "round-circle";
    sc.has_manifold = true;
    sc.expected_core_link = flip_n ? -1.0 : 1.0;
    sc.notes = "tube action linking a fixed round circle once";
    return sc;
}

std::vector<std::string> list_scenarios() {
    return {"arnold-n3", "tori-n4-k2l1", "tori-n5-k2l2", "action-circle-n3"};
}

Scenario build_scenario(const std::string& name) {
    if (name == "arnold-n3") return build_linked_tori(3, 1, 1);
    if (name == "tori-n4-k2l1") return build_linked_tori(4, 2, 1);
    if (name == "tori-n5-k2l2") return build_linked_tori(5, 2, 2);
    if (name == "action-circle-n3") return build_action_vs_circle(3, 1);
    throw std::invalid_argument("unknown scenario: " + name);
}

}  // namespace asymlink

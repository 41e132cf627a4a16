#include <doctest.h>

#include <cmath>
#include <numbers>

#include "asymlink/flows.hpp"
#include "asymlink/scenarios.hpp"

using namespace asymlink;

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

VectorField rotation(int n, int i, int j) {
    VectorField v;
    v.n = n;
    v.eval = [n, i, j](const Vec& x) {
        Vec out(n);
        out[i] = -x[j];
        out[j] = x[i];
        return out;
    };
    return v;
}

}  // namespace

TEST_CASE("rotation flow is periodic and satisfies the group law") {
    const Action a = make_action(Domain::ball(3), {rotation(3, 0, 1)});
    const Vec p{0.4, 0.1, -0.3};
    CHECK(dist(flow(a, {kTau}, p), p) <= 1e-8);
    const Vec lhs = flow(a, {1.1}, flow(a, {0.6}, p));
    CHECK(dist(lhs, flow(a, {1.7}, p)) <= 1e-8);
}

TEST_CASE("commuting generators flow in either order") {
    const Action a =
        make_action(Domain::ball(4), {rotation(4, 0, 1), rotation(4, 2, 3)});
    const Vec p{0.3, 0.2, -0.1, 0.4};
    const Vec ab = flow(a, {0.8, 0.0}, flow(a, {0.0, 1.3}, p));
    const Vec ba = flow(a, {0.0, 1.3}, flow(a, {0.8, 0.0}, p));
    CHECK(dist(ab, ba) <= 1e-7);
    CHECK(dist(flow(a, {0.8, 1.3}, p), ab) <= 1e-7);
}

TEST_CASE("non-tangent field escapes the domain") {
    VectorField c;
    c.n = 3;
    c.eval = [](const Vec&) { return Vec{1.0, 0.0, 0.0}; };
    const Action a = make_action(Domain::ball(3), {c});
    CHECK_THROWS(flow(a, {5.0}, Vec{0.9, 0.0, 0.0}));
}

TEST_CASE("time-t maps preserve volume") {
    const Scenario sc = build_scenario("arnold-n3");
    const Vec p = sc.tube_phi.core_point_at(0.9, 0.0) + Vec{0.0, 0.0, 0.02};
    const double h = 1e-5;
    const std::vector<double> t{1.7};
    std::vector<Vec> cols;
    for (int j = 0; j < 3; ++j) {
        Vec pp = p, pm = p;
        pp[j] += h;
        pm[j] -= h;
        cols.push_back((flow(sc.Phi, t, pp) - flow(sc.Phi, t, pm)) * (1.0 / (2.0 * h)));
    }
    CHECK(det_columns(cols) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("scaled generators reparametrize the flow") {
    const Scenario base = build_scenario("arnold-n3");
    const Scenario fast = build_linked_tori(3, 1, 1, 0.0, 2.5);
    const Vec p = base.tube_phi.core_point_at(0.3, 0.0);
    CHECK(dist(flow(base.Phi, {2.5 * 0.7}, p), flow(fast.Phi, {0.7}, p)) <= 1e-7);
}

TEST_CASE("orbit patch tangents match finite differences of the map") {
    const Scenario sc = build_scenario("tori-n4-k2l1");
    const ParamPatch orbit =
        orbit_patch(sc.Phi, sc.core_p, Rectangle::cube(2, kTau));
    const std::vector<double> t{1.2, 0.4};
    const auto tans = orbit.tangent(t);
    const double h = 1e-4;
    for (int i = 0; i < 2; ++i) {
        auto tp = t, tm = t;
        tp[i] += h;
        tm[i] -= h;
        const Vec fd = (orbit.map(tp) - orbit.map(tm)) * (1.0 / (2.0 * h));
        CHECK(dist(fd, tans[i]) <= 1e-6);
    }
}

TEST_CASE("orbit closure gap is tiny on periodic and generic windows") {
    const Scenario sc = build_scenario("arnold-n3");
    const auto closed =
        orbit_closure(sc.Phi, sc.core_p, Rectangle::cube(1, kTau), sc.apex_p);
    CHECK(closed.closure_gap() <= 1e-9);
    // off-period window: cones are genuine, closure still exact by construction
    const auto open =
        orbit_closure(sc.Phi, sc.core_p, Rectangle::cube(1, 2.0), sc.apex_p);
    CHECK(open.closure_gap() <= 1e-9);
    CHECK(open.cones.size() == 2);
}

TEST_CASE("k=1 cones are segments from the orbit endpoints to the apex") {
    const Scenario sc = build_scenario("arnold-n3");
    const Rectangle T = Rectangle::cube(1, 2.0);
    const auto cones = cone_patches(sc.Phi, sc.core_p, T, sc.apex_p);
    REQUIRE(cones.size() == 2);
    for (const auto& c : cones) {
        REQUIRE(c.dim == 1);  // parameter is r alone
        const Vec at0 = c.map({0.0});
        const Vec at1 = c.map({1.0});
        CHECK(dist(at1, sc.apex_p) <= 1e-12);  // r=1 edge collapses to the apex
        const Vec mid = c.map({0.5});
        CHECK(dist(mid, (at0 + sc.apex_p) * 0.5) <= 1e-12);  // straight segment
    }
}

TEST_CASE("action diagnostics: scenario fields are conservative") {
    for (const auto& name : {"arnold-n3", "tori-n4-k2l1"}) {
        const Scenario sc = build_scenario(name);
        RngStream rng(21, 0);
        const auto d = action_diagnostics(sc.Phi, 150, rng);
        CHECK(d.max_bracket <= 1e-6);
        CHECK(d.max_divergence <= 1e-6);
        CHECK(d.max_normal_component <= 1e-6);
    }
}

TEST_CASE("action diagnostics flag non-commuting pairs") {
    VectorField e1;
    e1.n = 3;
    e1.eval = [](const Vec&) { return Vec{1.0, 0.0, 0.0}; };
    VectorField shear;
    shear.n = 3;
    shear.eval = [](const Vec& x) { return Vec{0.0, x[0], 0.0}; };
    Action a;
    a.domain = Domain::ball(3);
    a.generators = {e1, shear};
    a.dt = 1e-2;
    RngStream rng(22, 0);
    const auto d = action_diagnostics(a, 100, rng);
    CHECK(d.max_bracket >= 0.5);  // [e1, x1 e2] = e2
}

TEST_CASE("zero action has zero diagnostics") {
    VectorField z;
    z.n = 3;
    z.eval = [](const Vec&) { return Vec(3); };
    Action a;
    a.domain = Domain::ball(3);
    a.generators = {z};
    a.dt = 1e-2;
    RngStream rng(23, 0);
    const auto d = action_diagnostics(a, 50, rng);
    CHECK(d.max_bracket == 0.0);
    CHECK(d.max_divergence == 0.0);
    CHECK(d.max_normal_component == 0.0);
}

TEST_CASE("support-aware sampling draws inside the support") {
    const Scenario sc = build_scenario("arnold-n3");
    REQUIRE(sc.Phi.support.has_value());
    CHECK(action_sample_volume(sc.Phi) ==
          doctest::Approx(sc.tube_phi.support_volume()).epsilon(1e-12));
    RngStream rng(24, 0);
    for (int i = 0; i < 300; ++i) {
        const Vec p = sample_action_point(sc.Phi, rng);
        CHECK(sc.tube_phi.tube_distance(p) < sc.tube_phi.bump.outer());
        CHECK(sc.domain.contains(p));
    }
    // without a support the fallback is the whole domain
    Action plain = sc.Phi;
    plain.support.reset();
    CHECK(action_sample_volume(plain) == doctest::Approx(sc.domain.volume()));
}

TEST_CASE("wedge accessor multiplies out the generators") {
    const Scenario sc = build_scenario("tori-n4-k2l1");
    const Vec p = sc.core_p;
    const auto vals = sc.Phi.generator_values(p);
    const auto w = sc.Phi.wedge_at(p);
    CHECK((w - wedge_vectors(vals)).norm() <= 1e-14);
    CHECK(w.grade() == 2);
}

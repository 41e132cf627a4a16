#include <doctest.h>

#include <cmath>
#include <numbers>

#include "asymlink/asymptotic.hpp"
#include "asymlink/rng.hpp"
#include "asymlink/scenarios.hpp"

using namespace asymlink;

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

Action zero_action(int n) {
    VectorField z;
    z.n = n;
    z.eval = [n](const Vec&) { return Vec(n); };
    Action a;
    a.domain = Domain::ball(n);
    a.generators = {z};
    a.dt = 1e-2;
    return a;
}

}  // namespace

TEST_CASE("pair kernel respects its norm bound") {
    const Scenario sc = build_scenario("arnold-n3");
    RngStream rng(61, 0);
    for (int i = 0; i < 200; ++i) {
        const Vec p = sample_action_point(sc.Phi, rng);
        const Vec q = sample_action_point(sc.Psi, rng);
        const double f = kernel_f(sc.Phi, sc.Psi, p, q);
        CHECK(std::abs(f) <= kernel_f_bound(sc.Phi, sc.Psi, p, q) * (1.0 + 1e-12));
    }
}

TEST_CASE("pair integral is exactly linear in a generator rescale") {
    const Scenario base = build_scenario("arnold-n3");
    const Scenario fast = build_linked_tori(3, 1, 1, 0.0, 2.5);
    MCConfig cfg;
    cfg.pairs = 1500;
    cfg.seed = 62;
    const auto a = I_two_actions(base.Phi, base.Psi, cfg);
    const auto b = I_two_actions(fast.Phi, base.Psi, cfg);
    CHECK(b.value == doctest::Approx(2.5 * a.value).epsilon(1e-9));
    CHECK(b.std_error == doctest::Approx(2.5 * a.std_error).epsilon(1e-9));
}

TEST_CASE("pair integral vanishes against a trivial partner") {
    const Scenario sc = build_scenario("arnold-n3");
    MCConfig cfg;
    cfg.pairs = 500;
    cfg.seed = 63;
    const auto e = I_two_actions(sc.Phi, zero_action(3), cfg);
    CHECK(e.value == 0.0);
    CHECK(e.std_error == 0.0);
}

TEST_CASE("exchanging the actions carries the grade sign") {
    MCConfig cfg;
    cfg.pairs = 6000;
    cfg.seed = 64;

    // n=3, k=l=1: sign (+1)
    const Scenario s3 = build_scenario("arnold-n3");
    const auto a = I_two_actions(s3.Phi, s3.Psi, cfg);
    const auto b = I_two_actions(s3.Psi, s3.Phi, cfg);
    CHECK(std::abs(a.value - b.value) <= 3.0 * (a.std_error + b.std_error));

    // n=5, k=l=2: sign (-1)^{(k+1)(l+1)} = -1
    const Scenario s5 = build_scenario("tori-n5-k2l2");
    const auto c = I_two_actions(s5.Phi, s5.Psi, cfg);
    const auto d = I_two_actions(s5.Psi, s5.Phi, cfg);
    CHECK(std::abs(c.value + d.value) <= 3.0 * (c.std_error + d.std_error));
    CHECK(std::abs(c.value) >= 2.0 * c.std_error);  // signal, not just noise
}

TEST_CASE("ergodic means of invariant and constant observables are exact") {
    const Scenario sc = build_scenario("arnold-n3");
    ErgodicSchedule sch;
    sch.k = 1;
    sch.length = 4;
    const Vec p = sc.tube_phi.core_point_at(0.7, 0.0);

    const auto spec = sc.tube_phi;
    const auto inv = ergodic_mean(
        [&spec](const Vec& x) { return spec.tube_distance(x); }, sc.Phi, p, sch);
    for (double m : inv)
        CHECK(m == doctest::Approx(spec.tube_distance(p)).epsilon(1e-6));

    const auto cst =
        ergodic_mean([](const Vec&) { return 3.25; }, sc.Phi, p, sch);
    for (double m : cst) CHECK(m == doctest::Approx(3.25).epsilon(1e-12));
}

TEST_CASE("ergodic mean of a coordinate decays like one over the window") {
    // Unit-speed rotation sampled on windows T_i = (i+1)·tau with tau = 1, not
    // commensurate with the 2π period: the running average of x0 is O(1/T).
    VectorField rot;
    rot.n = 3;
    rot.eval = [](const Vec& x) { return Vec{-x[1], x[0], 0.0}; };
    Action a = make_action(Domain::ball(3), {rot});
    ErgodicSchedule sch;
    sch.k = 1;
    sch.tau = 1.0;
    sch.length = 8;
    const Vec p{0.5, 0.0, 0.1};
    const auto means = ergodic_mean([](const Vec& x) { return x[0]; }, a, p, sch, 32);
    for (int i = 0; i < sch.length; ++i) {
        const double T = (i + 1) * sch.tau;
        CHECK(std::abs(means[i]) <= 2.0 * 0.5 / T);  // |∫sin|≤2·amplitude
    }
}

TEST_CASE("finite-time linking of core points counts winding multiplicity") {
    const Scenario sc = build_scenario("arnold-n3");
    QuadratureConfig quad;
    quad.points_per_axis = 24;
    for (const auto& [r, s] : {std::pair{1, 1}, std::pair{2, 1}}) {
        const auto res =
            lk_TS(sc.Phi, sc.Psi, sc.core_p, sc.core_q, Rectangle::cube(1, r * kTau),
                  Rectangle::cube(1, s * kTau), sc.apex_p, sc.apex_q, quad);
        CHECK(std::abs(res.raw - r * s * sc.expected_core_link) <= 0.1 * r * s);
        CHECK(std::abs(res.cone_part) <= 0.02 * r * s);  // periodic: cones cancel
        CHECK(res.normalized ==
              doctest::Approx(res.raw / (r * kTau * s * kTau)).epsilon(1e-12));
    }
}

TEST_CASE("standard error shrinks like the square root of the sample count") {
    const Scenario sc = build_scenario("arnold-n3");
    MCConfig small;
    small.pairs = 2000;
    small.seed = 65;
    MCConfig big = small;
    big.pairs = 8 * small.pairs;
    const auto a = I_two_actions(sc.Phi, sc.Psi, small);
    const auto b = I_two_actions(sc.Phi, sc.Psi, big);
    const double ratio = a.std_error / b.std_error;
    CHECK(ratio >= 1.6);  // ideal sqrt(8) ≈ 2.83, generous band for noise
    CHECK(ratio <= 5.0);
}

TEST_CASE("finite-time linking mean is apex independent") {
    const Scenario sc = build_scenario("arnold-n3");
    QuadratureConfig quad;
    quad.points_per_axis = 12;
    const auto [e1, e2] = apex_independence_check(
        sc.Phi, sc.Psi, 24, Rectangle::cube(1, kTau), Rectangle::cube(1, kTau),
        sc.apex_p, sc.apex_q, sc.apex_p_alt, sc.apex_q_alt, quad, 66);
    CHECK(std::abs(e1.value - e2.value) <=
          2.0 * (e1.std_error + e2.std_error) + 0.02 * std::abs(e1.value) + 1e-4);
}

TEST_CASE("energy fixtures") {
    MCConfig cfg;
    cfg.pairs = 3000;
    cfg.seed = 67;
    CHECK(energy(zero_action(3), cfg).value == 0.0);

    const Scenario base = build_scenario("arnold-n3");
    const Scenario fast = build_linked_tori(3, 1, 1, 0.0, 2.5);
    const auto e1 = energy(base.Phi, cfg);
    const auto e2 = energy(fast.Phi, cfg);
    CHECK(e2.value == doctest::Approx(2.5 * 2.5 * e1.value).epsilon(1e-9));
    CHECK(e1.value > 0.0);
}

TEST_CASE("energy bound rejects dimension mismatches") {
    const Scenario sc = build_scenario("tori-n4-k2l1");  // n=4, k=2: 2k+1 = 5 ≠ 4
    MCConfig cfg;
    cfg.pairs = 100;
    CHECK_THROWS(energy_bound_check(sc.Phi, 10.0, cfg));
}

TEST_CASE("manifold integral flips sign with the manifold orientation") {
    const Scenario sc = build_scenario("action-circle-n3");
    MCConfig cfg;
    cfg.pairs = 1500;
    cfg.seed = 68;
    QuadratureConfig quad;
    quad.points_per_axis = 32;
    const auto a = I_action_manifold(sc.Phi, sc.N, cfg, quad);
    const auto b = I_action_manifold(sc.Phi, flipped(sc.N), cfg, quad);
    CHECK(b.value == doctest::Approx(-a.value).epsilon(1e-9));
}

TEST_CASE("direct and field-based pair integrals agree") {
    const Scenario sc = build_scenario("arnold-n3");
    MCConfig cfg;
    cfg.pairs = 6000;
    cfg.seed = 69;
    const auto direct = I_two_actions(sc.Phi, sc.Psi, cfg);
    MCConfig outer = cfg;
    outer.pairs = 150;
    const auto field = I_two_actions_bs(sc.Phi, sc.Psi, outer, 2000);
    CHECK(std::abs(direct.value - field.value) <=
          3.0 * (direct.std_error + field.std_error));
}

TEST_CASE("convergence table is populated consistently") {
    const Scenario sc = build_scenario("arnold-n3");
    ErgodicSchedule sch;
    sch.k = 1;
    sch.length = 2;
    MCConfig cfg;
    cfg.pairs = 200;
    cfg.seed = 70;
    cfg.nodes_per_tau = 6;
    const auto res = asymptotic_lk(sc.Phi, sc.Psi, sch, cfg);
    REQUIRE(static_cast<int>(res.table.size()) == sch.length);
    CHECK(res.table[0].side == doctest::Approx(kTau));
    CHECK(res.table[1].side == doctest::Approx(2.0 * kTau));
    CHECK(res.pairs == cfg.pairs);
    CHECK(res.final.value == doctest::Approx(res.table.back().estimate));
    CHECK(res.final.n_samples == cfg.pairs);
}

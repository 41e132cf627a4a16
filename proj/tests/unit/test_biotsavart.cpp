#include <doctest.h>

#include <cmath>

#include "asymlink/biotsavart.hpp"
#include "asymlink/gauss.hpp"
#include "asymlink/rng.hpp"

using namespace asymlink;

namespace {

MultiVectorField zero_field(int n, int grade) {
    MultiVectorField F;
    F.n = n;
    F.grade = grade;
    F.eval = [n](const Vec&) { return MultiVector::blade(n, {1}, 0.0); };
    return F;
}

}  // namespace

TEST_CASE("zero field has zero field and zero residual") {
    const Domain d = Domain::ball(3);
    const auto Z = zero_field(3, 1);
    BSConfig cfg;
    cfg.samples = 5000;
    cfg.seed = 51;
    const auto r = bs(Z, d, Vec{0.2, 0.1, -0.1}, cfg);
    CHECK(r.value.norm() <= 1e-14);
    CHECK(r.std_error <= 1e-14);

    const std::vector<Vec> pts{Vec{0.1, 0.0, 0.2}, Vec{-0.2, 0.1, 0.0}};
    CHECK(verify_rot_bs(Z, d, pts, cfg, FDConfig{1e-2}) <= 1e-12);
}

TEST_CASE("estimator is linear in the field for matched sample sets") {
    RngStream rng(52, 0);
    const Domain d = Domain::ball(3);
    const auto V = random_poly_field(rng, 3, 1);
    MultiVectorField V2 = V;
    V2.eval = [V](const Vec& x) { return V.eval(x) * 2.0; };
    BSConfig cfg;
    cfg.samples = 20000;
    cfg.seed = 52;
    cfg.stream = 3;
    const Vec x{0.3, -0.1, 0.2};
    const auto a = bs(V, d, x, cfg);
    const auto b = bs(V2, d, x, cfg);
    CHECK((b.value - a.value * 2.0).norm() <= 1e-12 * (1.0 + a.value.norm()));
}

TEST_CASE("monte carlo estimate matches the deterministic reference in R3") {
    RngStream rng(53, 0);
    const Domain d = Domain::ball(3);
    const auto V = random_poly_field(rng, 3, 1);
    const Vec x{0.25, 0.1, -0.2};
    const double eps = 0.02;
    BSConfig cfg;
    cfg.samples = 400000;
    cfg.seed = 53;
    cfg.eps_excl = eps;
    const auto mc = bs(V, d, x, cfg);
    const auto ref = bs_reference_qmc(V, d, x, 400000, eps);
    CHECK((mc.value - ref).norm() <= 4.0 * mc.std_error + 1e-3);
}

TEST_CASE("halving the exclusion radius moves the value within noise") {
    RngStream rng(54, 0);
    const Domain d = Domain::ball(3);
    const auto V = random_poly_field(rng, 3, 1);
    const Vec x{0.1, 0.2, 0.1};
    BSConfig a;
    a.samples = 200000;
    a.seed = 54;
    a.eps_excl = 0.04;
    BSConfig b = a;
    b.stream = 1;
    b.eps_excl = 0.02;
    const auto ra = bs(V, d, x, a);
    const auto rb = bs(V, d, x, b);
    CHECK((ra.value - rb.value).norm() <=
          4.0 * (ra.std_error + rb.std_error) + 2e-3);
}

TEST_CASE("translation equivariance") {
    RngStream rng(55, 0);
    const auto V = random_poly_field(rng, 3, 1);
    const Vec shift{0.15, -0.1, 0.2};
    MultiVectorField Vs = V;
    Vs.eval = [V, shift](const Vec& y) { return V.eval(y - shift); };
    const Domain d0 = Domain::ball(3);
    const Domain d1 = Domain::ball(3, 1.0, shift);
    const Vec x{0.2, 0.1, -0.1};
    BSConfig cfg;
    cfg.samples = 300000;
    cfg.seed = 55;
    cfg.eps_excl = 0.02;
    const auto a = bs(V, d0, x, cfg);
    cfg.stream = 7;
    const auto b = bs(Vs, d1, x + shift, cfg);
    CHECK((a.value - b.value).norm() <= 4.0 * (a.std_error + b.std_error) + 2e-3);
}

TEST_CASE("fixed-sample and subtracted estimators agree on smooth fields") {
    RngStream rng(56, 0);
    const Domain d = Domain::ball(3);
    const auto V = random_poly_field(rng, 3, 1);
    const Vec x{0.15, -0.05, 0.1};
    std::vector<Vec> ys;
    RngStream srng(56, 1);
    for (int i = 0; i < 200000; ++i) ys.push_back(sample_uniform_one(d, srng));
    const auto plain = bs_fixed_samples(V, d, x, ys, 0.03);
    const auto subtracted = bs_fixed_samples_subtracted(V, d, x, ys, 0.03);
    // same draw, different variance-reduction; statistical gap only
    CHECK((plain - subtracted).norm() <= 0.02 * (1.0 + plain.norm()));
}

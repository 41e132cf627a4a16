#include <doctest.h>

#include <cmath>

#include "asymlink/calculus.hpp"
#include "asymlink/gauss.hpp"
#include "asymlink/rng.hpp"

using namespace asymlink;

namespace {

Vec random_point(RngStream& rng, int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.uniform(-0.7, 0.7);
    return v;
}

VectorField grade1(int n, std::function<Vec(const Vec&)> f) {
    VectorField v;
    v.n = n;
    v.eval = std::move(f);
    return v;
}

}  // namespace

TEST_CASE("grad of a linear coefficient is the constant wedge") {
    MultiVectorField F;
    F.n = 3;
    F.grade = 1;
    F.eval = [](const Vec& x) { return MultiVector::blade(3, {2}, x[0]); };
    const auto g = grad_field(F).eval(Vec{0.3, -0.2, 0.5});
    CHECK(g.grade() == 2);
    CHECK(g.coeff({1, 2}) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(g.norm() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("grad of a constant field vanishes") {
    MultiVectorField F;
    F.n = 4;
    F.grade = 2;
    F.eval = [](const Vec&) { return MultiVector::blade(4, {1, 3}, 2.5); };
    CHECK(grad_field(F).eval(Vec{0.1, 0.2, 0.3, 0.4}).norm() <= 1e-9);
}

TEST_CASE("grad kills coefficients depending only on their own indices") {
    // F = x2 e12: the only gradient direction is e2, and e2 wedge e12 = 0.
    MultiVectorField F;
    F.n = 3;
    F.grade = 2;
    F.eval = [](const Vec& x) { return MultiVector::blade(3, {1, 2}, x[1]); };
    CHECK(grad_field(F).eval(Vec{0.3, 0.1, -0.4}).norm() <= 1e-9);
}

TEST_CASE("rot is the classical curl on R3 vector fields") {
    MultiVectorField F;
    F.n = 3;
    F.grade = 1;
    F.eval = [](const Vec& x) {
        return MultiVector::vector(Vec{-x[1], x[0], 0.0});
    };
    const auto r = rot_field(F).eval(Vec{0.2, 0.1, -0.3});
    CHECK(dist(r.to_vec(), Vec{0.0, 0.0, 2.0}) <= 1e-8);
}

TEST_CASE("rot of a constant field vanishes") {
    MultiVectorField F;
    F.n = 4;
    F.grade = 1;
    F.eval = [](const Vec&) { return MultiVector::blade(4, {2}, 1.5); };
    CHECK(rot_field(F).eval(Vec{0.1, 0.0, 0.2, -0.1}).norm() <= 1e-9);
}

TEST_CASE("div fixed examples") {
    MultiVectorField F;
    F.n = 3;
    F.grade = 1;
    F.eval = [](const Vec& x) { return MultiVector::blade(3, {1}, x[0]); };
    CHECK(div_field(F).eval(Vec{0.4, 0.2, 0.1}).scalar_part() ==
          doctest::Approx(1.0).epsilon(1e-8));

    MultiVectorField G;
    G.n = 3;
    G.grade = 2;
    G.eval = [](const Vec& x) { return MultiVector::blade(3, {1, 2}, x[1]); };
    const auto d = div_field(G).eval(Vec{0.4, 0.2, 0.1});
    CHECK(d.coeff(std::vector<int>{1}) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(d.coeff(std::vector<int>{2})) <= 1e-9);
    CHECK(std::abs(d.coeff(std::vector<int>{3})) <= 1e-9);
}

TEST_CASE("div of a scalar field is an error") {
    MultiVectorField F;
    F.n = 3;
    F.grade = 0;
    F.eval = [](const Vec&) { return MultiVector::scalar(3, 1.0); };
    CHECK_THROWS(div_field(F));
}

TEST_CASE("lie bracket fixtures") {
    const Vec at{0.3, -0.2, 0.1};
    auto c1 = grade1(3, [](const Vec&) { return Vec{1, 0, 0}; });
    auto c2 = grade1(3, [](const Vec&) { return Vec{0, 1, 0}; });
    CHECK(lie_bracket(c1, c2).eval(at).norm() <= 1e-8);

    auto xe1 = grade1(3, [](const Vec& x) { return Vec{x[0], 0, 0}; });
    CHECK(dist(lie_bracket(xe1, c1).eval(at), Vec{-1, 0, 0}) <= 1e-8);

    // rotations in disjoint coordinate planes commute
    auto r01 = grade1(4, [](const Vec& x) { return Vec{-x[1], x[0], 0, 0}; });
    auto r23 = grade1(4, [](const Vec& x) { return Vec{0, 0, -x[3], x[2]}; });
    CHECK(lie_bracket(r01, r23).eval(Vec{0.2, 0.1, -0.3, 0.4}).norm() <= 1e-8);
}

TEST_CASE("divergence product rule on polynomial fields") {
    RngStream rng(31, 0);
    std::vector<Vec> pts;
    for (int i = 0; i < 8; ++i) pts.push_back(random_point(rng, 4));

    // random degree-2 polynomial vector fields, n=4, k=2
    std::vector<VectorField> fields;
    for (int i = 0; i < 2; ++i) {
        auto F = random_poly_field(rng, 4, 1);
        VectorField v;
        v.n = 4;
        v.eval = [F](const Vec& x) { return F.eval(x).to_vec(); };
        fields.push_back(v);
    }
    CHECK(check_div_product(fields, FDConfig{1e-4}, pts) <= 1e-5);
}

TEST_CASE("divergence product rule trivial cases") {
    RngStream rng(32, 0);
    std::vector<Vec> pts;
    for (int i = 0; i < 6; ++i) pts.push_back(random_point(rng, 4));

    // commuting divergence-free rotations: both sides vanish
    auto r01 = grade1(4, [](const Vec& x) { return Vec{-x[1], x[0], 0, 0}; });
    auto r23 = grade1(4, [](const Vec& x) { return Vec{0, 0, -x[3], x[2]}; });
    CHECK(check_div_product({r01, r23}, FDConfig{1e-4}, pts) <= 1e-6);

    // k=1 reduces to div(V) = div(V)
    auto poly = random_poly_field(rng, 4, 1);
    VectorField v;
    v.n = 4;
    v.eval = [poly](const Vec& x) { return poly.eval(x).to_vec(); };
    CHECK(check_div_product({v}, FDConfig{1e-4}, pts) <= 1e-8);
}

TEST_CASE("rot of the cross equals div of the wedge") {
    RngStream rng(33, 0);
    for (int n : {3, 4}) {
        const auto Fu = random_poly_field(rng, n, 1);
        const auto Fv = random_poly_field(rng, n, 1);
        MultiVectorField C;  // cross(U,V), grade n-2, no analytic partials
        C.n = n;
        C.grade = n - 2;
        C.eval = [Fu, Fv](const Vec& x) { return cross(Fu.eval(x), Fv.eval(x)); };
        MultiVectorField W;  // U wedge V, grade 2
        W.n = n;
        W.grade = 2;
        W.eval = [Fu, Fv](const Vec& x) { return wedge(Fu.eval(x), Fv.eval(x)); };
        const auto lhs = rot_field(C, FDConfig{1e-5});
        const auto rhs = div_field(W, FDConfig{1e-5});
        for (int i = 0; i < 6; ++i) {
            const Vec p = random_point(rng, n);
            CHECK((lhs.eval(p) - rhs.eval(p)).norm() <= 1e-5);
        }
    }
}

TEST_CASE("grad of grad decays linearly with the step") {
    RngStream rng(34, 0);
    const auto F = random_poly_field(rng, 3, 1);
    MultiVectorField noderiv = F;
    noderiv.partial = nullptr;  // force the finite-difference path twice
    const Vec p = random_point(rng, 3);
    auto resid = [&](double h) {
        return grad_field(grad_field(noderiv, FDConfig{h}), FDConfig{h}).eval(p).norm();
    };
    // central differences are exact on quadratics, so both residuals are tiny
    CHECK(resid(1e-3) <= 1e-9);
    CHECK(resid(1e-4) <= 1e-9);
}

TEST_CASE("analytic partials of polynomial fields match finite differences") {
    RngStream rng(35, 0);
    for (int n : {3, 5}) {
        const auto F = random_poly_field(rng, n, 2);
        for (int trial = 0; trial < 4; ++trial) {
            const Vec p = random_point(rng, n);
            for (int j = 0; j < n; ++j) {
                const double h = 1e-5;
                Vec pp = p, pm = p;
                pp[j] += h;
                pm[j] -= h;
                const auto fd = (F.eval(pp) - F.eval(pm)) * (1.0 / (2.0 * h));
                CHECK((F.partial(p, j) - fd).norm() <= 1e-7);
            }
        }
    }
}

TEST_CASE("rot via analytic partials matches the finite-difference path") {
    RngStream rng(36, 0);
    const auto F = random_poly_field(rng, 4, 1);
    MultiVectorField fd_only = F;
    fd_only.partial = nullptr;
    for (int i = 0; i < 5; ++i) {
        const Vec p = random_point(rng, 4);
        const auto a = rot_field(F).eval(p);
        const auto b = rot_field(fd_only, FDConfig{1e-5}).eval(p);
        CHECK((a - b).norm() <= 1e-8);
    }
}

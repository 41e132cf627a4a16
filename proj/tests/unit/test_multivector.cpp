#include <doctest.h>

#include <cmath>

#include "asymlink/multivector.hpp"
#include "asymlink/rng.hpp"

using namespace asymlink;

namespace {

MultiVector random_blade_mv(RngStream& rng, int n, int grade) {
    MultiVector out(n, grade);
    // dense over all C(n, grade) blades, coefficients in [-1, 1]
    for (BladeMask m = 0; m < (1u << n); ++m)
        if (__builtin_popcount(m) == grade) out.set_coeff(m, rng.uniform(-1.0, 1.0));
    return out;
}

Vec random_vec(RngStream& rng, int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.uniform(-1.0, 1.0);
    return v;
}

}  // namespace

TEST_CASE("wedge on basis blades") {
    const auto e1 = MultiVector::blade(3, {1});
    const auto e2 = MultiVector::blade(3, {2});
    CHECK(wedge(e1, e2).coeff({1, 2}) == 1.0);
    CHECK(wedge(e1, e1).is_zero());
    const auto e12 = MultiVector::blade(4, {1, 2});
    const auto e3 = MultiVector::blade(4, {3});
    CHECK(wedge(e12, e3).coeff({1, 2, 3}) == 1.0);
    CHECK(wedge(e3, e12).coeff({1, 2, 3}) == 1.0);  // (-1)^{1*2} = +1
}

TEST_CASE("wedge dimension mismatch throws") {
    CHECK_THROWS(wedge(MultiVector::blade(3, {1}), MultiVector::blade(4, {2})));
}

TEST_CASE("wedge grade overflow is the zero grade-n element") {
    const auto a = MultiVector::blade(3, {1, 2});
    const auto b = MultiVector::blade(3, {2, 3});
    const auto c = wedge(a, b);
    CHECK(c.grade() == 3);
    CHECK(c.is_zero());
    CHECK(cross(a, b).is_zero());  // same overflow through the hodge
}

TEST_CASE("wedge graded anticommutativity") {
    RngStream rng(11, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform() * 5);  // 3..7
        const int r = static_cast<int>(rng.uniform() * (n + 1));
        const int s = static_cast<int>(rng.uniform() * (n + 1));
        const auto a = random_blade_mv(rng, n, r);
        const auto b = random_blade_mv(rng, n, s);
        const double sign = (r * s) % 2 ? -1.0 : 1.0;
        CHECK((wedge(a, b) - sign * wedge(b, a)).norm() <= 1e-12);
    }
}

TEST_CASE("wedge associativity") {
    RngStream rng(12, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 4 + static_cast<int>(rng.uniform() * 3);
        const auto a = random_blade_mv(rng, n, 1);
        const auto b = random_blade_mv(rng, n, 1);
        const auto c = random_blade_mv(rng, n, 2);
        CHECK((wedge(wedge(a, b), c) - wedge(a, wedge(b, c))).norm() <= 1e-12);
    }
}

TEST_CASE("hodge fixed examples") {
    CHECK(hodge(MultiVector::blade(3, {1, 2})).coeff(std::vector<int>{3}) == 1.0);
    CHECK(hodge(MultiVector::blade(3, {1, 3})).coeff(std::vector<int>{2}) == -1.0);
    const auto twice = hodge(hodge(MultiVector::blade(4, {1})));
    CHECK(twice.coeff(std::vector<int>{1}) == -1.0);  // (-1)^{r(n-r)}, r=1, n=4
}

TEST_CASE("hodge involution sign, exact") {
    RngStream rng(13, 0);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform() * 5);
        const int r = static_cast<int>(rng.uniform() * (n + 1));
        const auto a = random_blade_mv(rng, n, r);
        const double sign = (r * (n - r)) % 2 ? -1.0 : 1.0;
        CHECK((hodge(hodge(a)) - sign * a).norm() == 0.0);
    }
}

TEST_CASE("cross fixed examples") {
    const auto e1 = MultiVector::blade(3, {1});
    const auto e2 = MultiVector::blade(3, {2});
    CHECK(cross(e1, e2).coeff(std::vector<int>{3}) == 1.0);
    CHECK(cross(MultiVector::blade(3, {1, 2}), MultiVector::blade(3, {2})).is_zero());
    CHECK(cross(MultiVector::blade(4, {1, 2}), MultiVector::blade(4, {3})).coeff(std::vector<int>{4}) ==
          1.0);
}

TEST_CASE("cross matches classical cross product on R3 vectors") {
    RngStream rng(14, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec u = random_vec(rng, 3), v = random_vec(rng, 3);
        const Vec classical{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                            u[0] * v[1] - u[1] * v[0]};
        const Vec got = cross(MultiVector::vector(u), MultiVector::vector(v)).to_vec();
        CHECK(dist(got, classical) <= 1e-12);
    }
}

TEST_CASE("dot fixed examples") {
    CHECK(dot(MultiVector::blade(3, {1}), MultiVector::blade(3, {1, 2})).coeff(std::vector<int>{2}) ==
          -1.0);
    CHECK(dot(MultiVector::blade(3, {1}), MultiVector::blade(3, {2, 3})).is_zero());
    for (int n = 3; n <= 6; ++n)
        CHECK(dot(MultiVector::blade(n, {1, 2}), MultiVector::blade(n, {1, 2}))
                  .scalar_part() == 1.0);
}

TEST_CASE("dot of equal-grade arguments is the Euclidean pairing") {
    RngStream rng(15, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform() * 4);
        const int r = 1 + static_cast<int>(rng.uniform() * (n - 1));
        const auto a = random_blade_mv(rng, n, r);
        const auto b = random_blade_mv(rng, n, r);
        double pairing = 0.0;
        for (const auto& [m, c] : a.coeffs()) pairing += c * b.coeff(m);
        CHECK(dot(a, b).scalar_part() == doctest::Approx(pairing).epsilon(1e-12));
    }
}

TEST_CASE("triple fixed examples and determinant oracle") {
    CHECK(triple(MultiVector::blade(3, {1}), MultiVector::blade(3, {2}),
                 MultiVector::blade(3, {3})) == 1.0);
    CHECK_THROWS(triple(MultiVector::blade(3, {1}), MultiVector::blade(3, {2}),
                        MultiVector::blade(3, {1, 2})));

    RngStream rng(16, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform() * 4);  // 3..6
        // decomposable u (grade r), v (grade s), w (rest): triple = det of columns
        const int r = 1 + static_cast<int>(rng.uniform() * (n - 2));
        const int s = 1 + static_cast<int>(rng.uniform() * (n - r - 1));
        const int m = n - r - s;
        std::vector<Vec> cols;
        for (int i = 0; i < n; ++i) cols.push_back(random_vec(rng, n));
        auto wedge_cols = [&](int from, int count) {
            MultiVector acc = MultiVector::vector(cols[from]);
            for (int i = 1; i < count; ++i)
                acc = wedge(acc, MultiVector::vector(cols[from + i]));
            return acc;
        };
        const double t = triple(wedge_cols(0, r), wedge_cols(r, s), wedge_cols(r + s, m));
        CHECK(t == doctest::Approx(det_columns(cols)).epsilon(1e-10));
    }
}

TEST_CASE("triple vanishes on repeated factors") {
    RngStream rng(17, 0);
    const Vec u = random_vec(rng, 4), v = random_vec(rng, 4);
    const auto uv = wedge(MultiVector::vector(u), MultiVector::vector(v));
    CHECK(std::abs(triple(MultiVector::vector(u), MultiVector::vector(v), uv)) <= 1e-14);
}

TEST_CASE("triple Hadamard-style bound") {
    RngStream rng(18, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform() * 5);
        const int r = 1 + static_cast<int>(rng.uniform() * (n - 2));
        const int s = 1 + static_cast<int>(rng.uniform() * (n - r - 1));
        const auto u = random_blade_mv(rng, n, r);
        const auto v = random_blade_mv(rng, n, s);
        const auto w = random_blade_mv(rng, n, n - r - s);
        CHECK(std::abs(triple(u, v, w)) <= u.norm() * v.norm() * w.norm() + 1e-12);
    }
}

TEST_CASE("double cross reduction on vectors") {
    RngStream rng(19, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform() * 5);
        const Vec u = random_vec(rng, n), v = random_vec(rng, n), w = random_vec(rng, n);
        const auto lhs =
            cross(MultiVector::vector(u),
                  cross(MultiVector::vector(v), MultiVector::vector(w)));
        const double sign = n % 2 ? -1.0 : 1.0;
        const Vec rhs = sign * (dot(u, v) * w - dot(u, w) * v);
        CHECK((lhs - MultiVector::vector(rhs)).norm() <= 1e-12);
    }
}

TEST_CASE("cross-of-cross equals dot-of-wedge") {
    RngStream rng(20, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform() * 5);
        const int s = 1 + static_cast<int>(rng.uniform() * (n - 2));
        const int m = 1 + static_cast<int>(rng.uniform() * (n - s - 1));
        const auto u = random_blade_mv(rng, n, 1);
        const auto v = random_blade_mv(rng, n, s);
        const auto w = random_blade_mv(rng, n, m);
        const auto lhs = cross(u, cross(v, w));
        const auto rhs = dot(u, wedge(v, w));
        CHECK((lhs - rhs).norm() <= 1e-12);
    }
}

TEST_CASE("interior product expansion on vector-by-wedge") {
    RngStream rng(21, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform() * 5);
        const int k = 1 + static_cast<int>(rng.uniform() * (n - 1));
        const Vec u = random_vec(rng, n);
        std::vector<Vec> vs;
        for (int i = 0; i < k; ++i) vs.push_back(random_vec(rng, n));
        const auto lhs = dot(MultiVector::vector(u), wedge_vectors(vs));
        MultiVector rhs(n, k - 1);
        for (int i = 0; i < k; ++i) {
            std::vector<Vec> rest;
            for (int j = 0; j < k; ++j)
                if (j != i) rest.push_back(vs[j]);
            const double c = (i % 2 ? -1.0 : 1.0) * dot(u, vs[i]);
            rhs += c * (rest.empty() ? MultiVector::scalar(n, 1.0) : wedge_vectors(rest));
        }
        const double sign = ((k - 1) * (n - k)) % 2 ? -1.0 : 1.0;
        CHECK((lhs - sign * rhs).norm() <= 1e-12);
    }
}

TEST_CASE("merge sign is exact on overlaps and swaps") {
    CHECK(merge_sign(0b001, 0b010) == 1);   // e1, e2 -> +e12
    CHECK(merge_sign(0b010, 0b001) == -1);  // e2, e1 -> -e12
    CHECK(merge_sign(0b011, 0b001) == 0);   // overlap
}

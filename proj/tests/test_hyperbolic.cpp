#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "supnorm/hyperbolic.hpp"

using namespace supnorm;

namespace {

// independent oracle: cosh(dist) = 1 + |tau - tau'|^2 / (2 eta eta'),
// sigma = cosh^2(dist/2) = (1 + cosh(dist)) / 2
double sigma_oracle(const UpperHalfPoint& a, const UpperHalfPoint& b) {
    double dx = a.xi - b.xi, dy = a.eta - b.eta;
    double cosh_d = 1.0 + (dx * dx + dy * dy) / (2.0 * a.eta * b.eta);
    return 0.5 * (1.0 + cosh_d);
}

} // namespace

TEST_CASE("type invariants") {
    CHECK_THROWS_AS(UpperHalfPoint(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(UpperHalfPoint(0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(UpperHalfPoint(std::nan(""), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(GroupElement(1, 1, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(GroupElement(2, 0, 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(DomainTruncation(0.0), std::invalid_argument);
    CHECK(GroupElement(0, -1, 1, 0) == GroupElement::inversion());
}

TEST_CASE("mobius action") {
    UpperHalfPoint i(0.0, 1.0);
    UpperHalfPoint r1 = mobius_apply(GroupElement::identity(), i);
    CHECK(r1.xi == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r1.eta == doctest::Approx(1.0).epsilon(1e-15));

    UpperHalfPoint r2 = mobius_apply(GroupElement::inversion(), i); // S fixes i
    CHECK(r2.xi == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r2.eta == doctest::Approx(1.0).epsilon(1e-15));

    UpperHalfPoint r3 = mobius_apply(GroupElement::translation(1), UpperHalfPoint(0.3, 0.7));
    CHECK(r3.xi == doctest::Approx(1.3).epsilon(1e-15));
    CHECK(r3.eta == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("displacement values") {
    UpperHalfPoint i(0.0, 1.0);
    CHECK(displacement(i, i) == 1.0); // exact at coincident points
    CHECK(displacement(i, UpperHalfPoint(0.0, 2.0)) == doctest::Approx(9.0 / 8.0).epsilon(1e-15));
    CHECK(displacement(i, UpperHalfPoint(0.0, 2.0)) ==
          doctest::Approx(sigma_oracle(i, UpperHalfPoint(0.0, 2.0))).epsilon(1e-14));
    CHECK(displacement(i, UpperHalfPoint(1.0, 1.0)) == doctest::Approx(5.0 / 4.0).epsilon(1e-15));
}

TEST_CASE("hyperbolic distance") {
    UpperHalfPoint i(0.0, 1.0);
    CHECK(hyp_distance(i, i) == 0.0);
    CHECK(hyp_distance(i, UpperHalfPoint(0.0, std::exp(1.0))) ==
          doctest::Approx(1.0).epsilon(1e-13));
    CHECK(hyp_distance(i, UpperHalfPoint(1.0, 1.0)) ==
          doctest::Approx(2.0 * std::acosh(std::sqrt(1.25))).epsilon(1e-14));
}

TEST_CASE("displacement equals cosh^2 of half the distance") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0), v(0.2, 4.0);
    for (int t = 0; t < 200; ++t) {
        UpperHalfPoint a(u(rng), v(rng)), b(u(rng), v(rng));
        double d = hyp_distance(a, b);
        double c = std::cosh(0.5 * d);
        CHECK(displacement(a, b) == doctest::Approx(c * c).epsilon(1e-12));
    }
}

TEST_CASE("mobius invariance of the displacement") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-2.0, 2.0), v(0.2, 4.0);
    std::uniform_int_distribution<int> shift(-3, 3), len(1, 5);
    for (int t = 0; t < 100; ++t) {
        UpperHalfPoint a(u(rng), v(rng)), b(u(rng), v(rng));
        GroupElement g = GroupElement::translation(shift(rng));
        for (int j = 0, L = len(rng); j < L; ++j)
            g = g * GroupElement::inversion() * GroupElement::translation(shift(rng));
        double before = displacement(a, b);
        double after = displacement(mobius_apply(g, a), mobius_apply(g, b));
        CHECK(after == doctest::Approx(before).epsilon(1e-10));
    }
}

TEST_CASE("reduction basics") {
    ReducedPoint r1 = reduce_to_fundamental_domain(UpperHalfPoint(0.0, 1.0));
    CHECK(r1.map == GroupElement::identity());

    ReducedPoint r2 = reduce_to_fundamental_domain(UpperHalfPoint(7.0, 1.0));
    CHECK(r2.map == GroupElement::translation(-7));
    CHECK(r2.point.xi == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r2.point.eta == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("reduction against the brute-force height oracle") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-5.0, 5.0), v(0.04, 3.0);
    for (int t = 0; t < 20; ++t) {
        UpperHalfPoint tau(u(rng), v(rng));
        ReducedPoint red = reduce_to_fundamental_domain(tau);
        CHECK(std::abs(red.point.xi) <= 0.5 + 1e-12);
        CHECK(red.point.xi * red.point.xi + red.point.eta * red.point.eta >= 1.0 - 1e-12);
        CHECK(red.point.eta >= std::sqrt(3.0) / 2.0 - 1e-12);

        UpperHalfPoint mapped = mobius_apply(red.map, tau);
        CHECK(std::abs(mapped.value() - red.point.value()) <= 1e-12);

        // maximal height over coprime bottom rows |c|, |d| <= 50
        double best = 0.0;
        for (int c = -50; c <= 50; ++c)
            for (int d = -50; d <= 50; ++d) {
                if (std::gcd(std::abs(c), std::abs(d)) != 1) continue;
                double u2 = (c * tau.xi + d) * (c * tau.xi + d) + c * c * tau.eta * tau.eta;
                best = std::max(best, tau.eta / u2);
            }
        CHECK(red.point.eta == doctest::Approx(best).epsilon(1e-9));
    }
}

TEST_CASE("reduction is idempotent, including on the boundary") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(-5.0, 5.0), v(0.05, 3.0);
    for (int t = 0; t < 50; ++t) {
        ReducedPoint red = reduce_to_fundamental_domain(UpperHalfPoint(u(rng), v(rng)));
        ReducedPoint again = reduce_to_fundamental_domain(red.point);
        CHECK(again.map == GroupElement::identity());
        CHECK(again.point.xi == red.point.xi);
        CHECK(again.point.eta == red.point.eta);
    }
    // boundary ties are accepted as they come
    ReducedPoint tie = reduce_to_fundamental_domain(UpperHalfPoint(0.5, 2.0));
    CHECK(tie.map == GroupElement::identity());
    CHECK(tie.point.xi == 0.5);
}

TEST_CASE("sigma >= 1 with equality only at coincident points") {
    for (double xi = -0.5; xi <= 0.5; xi += 0.1) {
        for (double eta = 0.5; eta <= 3.0; eta += 0.25) {
            UpperHalfPoint p(xi, eta);
            CHECK(displacement(p, p) == 1.0);
            UpperHalfPoint q(xi + 0.05, eta);
            CHECK(displacement(p, q) > 1.0);
        }
    }
}

TEST_CASE("cusp neighborhood membership") {
    DomainTruncation y2(2.0);
    CHECK(in_cusp_neighborhood(UpperHalfPoint(0.0, 3.0), y2));
    CHECK_FALSE(in_cusp_neighborhood(UpperHalfPoint(0.0, 1.0), y2));
    double h = 40.0 / (4.0 * 3.14159265358979323846);
    CHECK(in_cusp_neighborhood(UpperHalfPoint(0.0, h), DomainTruncation(h))); // closed set
}

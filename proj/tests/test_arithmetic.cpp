#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "supnorm/arithmetic.hpp"
#include "supnorm/errors.hpp"
#include "supnorm/numeric.hpp"

using namespace supnorm;

namespace {

std::vector<GroupElement> brute_within(const UpperHalfPoint& tau, double R,
                                       std::int64_t entries) {
    std::vector<GroupElement> out;
    for (const auto& g : enumerate_elements(tau, EnumerationBudget::by_max_entry(entries)))
        if (displacement(tau, mobius_apply(g, tau)) <= R) out.push_back(g);
    return out;
}

} // namespace

TEST_CASE("budget validation") {
    CHECK_THROWS_AS(EnumerationBudget{}.validate(), std::invalid_argument);
    CHECK_THROWS_AS(EnumerationBudget::by_displacement(0.5), std::invalid_argument);
    CHECK_THROWS_AS(EnumerationBudget::by_max_entry(0), std::invalid_argument);
}

TEST_CASE("enumeration at the minimal radius") {
    UpperHalfPoint two_i(0.0, 2.0);
    auto only_center = enumerate_elements(two_i, EnumerationBudget::by_displacement(1.0));
    REQUIRE(only_center.size() == 2); // +-identity fix a generic point
    CHECK(only_center[0] == GroupElement::identity().negate());
    CHECK(only_center[1] == GroupElement::identity());

    UpperHalfPoint i(0.0, 1.0);
    auto stab = enumerate_elements(i, EnumerationBudget::by_displacement(1.0));
    CHECK(stab.size() == 4); // +-id and +-S fix i
    CHECK(std::count(stab.begin(), stab.end(), GroupElement::inversion()) == 1);
    CHECK(std::count(stab.begin(), stab.end(), GroupElement::inversion().negate()) == 1);
}

TEST_CASE("enumeration equals the brute-force entry scan") {
    UpperHalfPoint two_i(0.0, 2.0);
    auto fast = enumerate_elements(two_i, EnumerationBudget::by_displacement(3.0));
    auto brute = brute_within(two_i, 3.0, 60);
    CHECK(fast == brute);

    // 5 x 5 reduced grid, radius 4
    for (int a = 0; a < 5; ++a) {
        for (int b = 0; b < 5; ++b) {
            UpperHalfPoint tau(-0.4 + 0.2 * a, 0.95 + 0.25 * b);
            auto f = enumerate_elements(tau, EnumerationBudget::by_displacement(4.0));
            CHECK(f == brute_within(tau, 4.0, 60));
        }
    }
}

TEST_CASE("element cap raises a truncation error") {
    UpperHalfPoint tau(0.13, 0.95);
    CHECK_THROWS_AS(
        enumerate_elements(tau, EnumerationBudget::by_displacement(100.0, 10)),
        truncation_error);
}

TEST_CASE("counting function") {
    GroupData group = make_sl2z_group_data();
    UpperHalfPoint two_i(0.0, 2.0);

    CHECK(counting_function(two_i, 0.0, group) == 0);
    CHECK(counting_function(two_i, 1.5, group) == 0); // nothing moves 2i by less

    // brute-force oracle at rho = 3
    long brute = 0;
    double R = 0.5 * (1.0 + std::cosh(3.0));
    for (const auto& g : brute_within(two_i, R, 60)) {
        if (excluded_from_counting(g)) continue;
        if (hyp_distance(two_i, mobius_apply(g, two_i)) <= 3.0) ++brute;
    }
    CHECK(counting_function(two_i, 3.0, group) == brute);
    CHECK(brute > 0);

    long prev = -1;
    for (double rho = 0.0; rho <= 3.5; rho += 0.21) {
        long n = counting_function(two_i, rho, group);
        CHECK(n >= prev);
        prev = n;
    }
}

TEST_CASE("exclusion rule") {
    CHECK(excluded_from_counting(GroupElement::identity()));
    CHECK(excluded_from_counting(GroupElement::identity().negate()));
    CHECK(excluded_from_counting(GroupElement::translation(5)));
    CHECK(excluded_from_counting(GroupElement::inversion()));       // trace 0
    CHECK(excluded_from_counting(GroupElement(1, -1, 1, 0)));       // trace 1
    CHECK_FALSE(excluded_from_counting(GroupElement(1, 0, 1, 1)));  // parabolic at 0
    CHECK_FALSE(excluded_from_counting(GroupElement(2, 1, 1, 1)));  // hyperbolic
}

TEST_CASE("injectivity radius of the modular data") {
    GroupData group = make_sl2z_group_data();
    // attained at tau = i by the parabolic fixing 0: dist = arccosh(3/2)
    CHECK(group.injectivity_radius == doctest::Approx(std::acosh(1.5)).epsilon(1e-9));
    CHECK(group.center_order == 2);
    CHECK(group.num_cusps == 1);
    CHECK(group.elliptic_orders == std::vector<int>{2, 3});
}

TEST_CASE("counting inequality right-hand side") {
    GroupData group = make_sl2z_group_data();
    double r = group.injectivity_radius;
    UpperHalfPoint two_i(0.0, 2.0);

    SUBCASE("precondition") {
        CHECK_THROWS_AS(jl_rhs(6.0, 0.2 * r, r, 2, two_i, group), std::invalid_argument);
    }

    SUBCASE("empty Stieltjes part leaves boundary + tail") {
        double delta = 0.5 * r; // below the first jump at 2i
        CHECK(counting_function(two_i, delta, group) == 0);
        double k = 6.0;
        double rhs = jl_rhs(k, delta, r, 2, two_i, group);
        // recompute the two analytic terms independently
        double q = 0.25 * r;
        double fd = std::pow(std::cosh(0.5 * delta), -k);
        double boundary = 4.0 * std::cosh(q) / std::sinh(q) * std::sinh(delta) * fd;
        double tail = integrate_simpson(
            [&](double rho) {
                return std::pow(std::cosh(0.5 * rho), -k) * std::sinh(rho + 0.5 * r);
            },
            delta, delta + 80.0, 200000);
        double expected = boundary + tail / (std::sinh(q) * std::sinh(q));
        CHECK(rhs == doctest::Approx(expected).epsilon(1e-10));
    }

    SUBCASE("refinement oracle for the tail integral") {
        double rhs1 = jl_rhs(6.0, 0.5, 1.0, 2, two_i, group);
        // independent dense quadrature of the tail term
        double boundary = 4.0 * std::cosh(0.25) / std::sinh(0.25) * std::sinh(0.5) *
                          std::pow(std::cosh(0.25), -6.0);
        double tail = integrate_simpson(
            [&](double rho) {
                return std::pow(std::cosh(0.5 * rho), -6.0) * std::sinh(rho + 0.5);
            },
            0.5, 90.0, 400000);
        double stieltjes = jl_lhs_truncated(6.0, two_i, 0.5);
        double expected = stieltjes + boundary + tail / (std::sinh(0.25) * std::sinh(0.25));
        CHECK(rhs1 == doctest::Approx(expected).epsilon(1e-10));
    }

    SUBCASE("inequality margin on samples") {
        for (double k : {5.0, 8.0, 12.0, 20.0}) {
            for (double delta : {0.5 * r, r, 2.0 * r}) {
                UpperHalfPoint tau(0.21, 1.3);
                double lhs = jl_lhs_truncated(k, tau, 6.0);
                double rhs = jl_rhs(k, delta, r, 2, tau, group);
                CHECK(rhs - lhs >= -1e-10);
            }
        }
    }
}

TEST_CASE("congruence membership") {
    for (std::int64_t N : {1, 4, 8, 12}) {
        CHECK(is_member_gamma0(GroupElement::identity(), N));
        CHECK(is_member_gamma01(GroupElement::identity(), N));
        CHECK(is_member_gamma0(GroupElement(1, 0, N, 1), N));
        CHECK(is_member_gamma01(GroupElement(1, 0, N, 1), N));
        CHECK(is_member_gamma01(GroupElement::translation(1), N));
    }
    CHECK_FALSE(is_member_gamma0(GroupElement::inversion(), 4));
    CHECK_FALSE(is_member_gamma01(GroupElement(1, 0, 4, 1), 8));
    CHECK(is_member_gamma0(GroupElement(1, 0, 8, 1), 8));
    CHECK_FALSE(is_member_gamma01(GroupElement(3, 1, 8, 3), 8)); // d != 1 mod 8
}

TEST_CASE("euler phi and gamma0 index") {
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(4) == 2);
    CHECK(euler_phi(8) == 4);
    CHECK(euler_phi(12) == 4);
    CHECK(euler_phi(24) == 8);
    CHECK(index_gamma0(4) == 6);
    CHECK(index_gamma0(8) == 12);
    CHECK(index_gamma0(12) == 24);
}

TEST_CASE("index formula against the coset oracle") {
    CHECK(index_gamma01(1) == 12);
    CHECK(index_gamma01(2) == 48);
    CHECK(index_gamma01(3) == 96);
    CHECK_THROWS_AS(index_gamma01(0), std::invalid_argument);
    for (std::int64_t m = 1; m <= 6; ++m) {
        CHECK(index_gamma01(m) == coset_count_bruteforce(m));
        // the phi(m) variant disagrees with the oracle whenever phi(4m) != phi(m)
        std::int64_t phi_m_version = index_gamma0(4 * m) * euler_phi(m);
        CHECK(phi_m_version != coset_count_bruteforce(m));
    }
    CHECK_THROWS_AS(coset_count_bruteforce(17), std::invalid_argument);
}

TEST_CASE("coset oracle sanity") {
    // the full group has a single coset
    CHECK(coset_count_subgroup(8, [](std::int64_t, std::int64_t, std::int64_t, std::int64_t) {
              return true;
          }) == 1);
    // Gamma_0(N) image: index N prod (1 + 1/p)
    CHECK(coset_count_subgroup(4, [](std::int64_t, std::int64_t, std::int64_t c, std::int64_t) {
              return c % 4 == 0;
          }) == 6);
}

TEST_CASE("group data validation") {
    GroupData bad = make_sl2z_group_data();
    bad.center_order = 3;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = make_sl2z_group_data();
    bad.injectivity_radius = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = make_sl2z_group_data();
    bad.elliptic_orders = {1};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

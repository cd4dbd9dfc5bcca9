#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "supnorm/hyperbolic.hpp"

namespace supnorm {

/// Cusp/elliptic/injectivity data of the group the bound evaluators run on.
/// For the concrete modular group use make_sl2z_group_data().
struct GroupData {
    int num_cusps = 1;
    std::vector<int> elliptic_orders;        // each >= 2
    double injectivity_radius = 0.0;         // > 0
    int center_order = 2;                    // 1 or 2
    std::vector<GroupElement> cusp_scalings; // one per cusp

    void validate() const;
};

/// SL2(Z) data: one cusp (scaling = identity), elliptic orders {2,3},
/// |center| = 2, and the injectivity radius measured numerically as the
/// minimum of dist(tau, g*tau) over non-excluded g and a grid of tau in the
/// fundamental domain truncated at height 2.
GroupData make_sl2z_group_data();

/// Exactly one of the two bounds is active.
struct EnumerationBudget {
    std::optional<double> max_displacement;  // sigma(tau, g*tau) <= bound
    std::optional<std::int64_t> max_entry;   // |a|,|b|,|c|,|d| <= bound
    std::size_t max_elements = 4000000;

    static EnumerationBudget by_displacement(double bound, std::size_t cap = 4000000);
    static EnumerationBudget by_max_entry(std::int64_t bound);
    void validate() const;
};

/// All g in SL2(Z) within the budget, sorted by (sigma(tau, g*tau), a, b, c, d).
/// The displacement mode is complete: every g with sigma <= bound is listed.
std::vector<GroupElement> enumerate_elements(const UpperHalfPoint& tau,
                                             const EnumerationBudget& budget);

/// Membership test for the counting function's excluded set: +-translations
/// (c = 0, necessarily trace +-2) and elliptic elements (|trace| < 2).
bool excluded_from_counting(const GroupElement& g);

/// N(tau; rho): number of non-excluded g with dist(tau, g*tau) <= rho.
long counting_function(const UpperHalfPoint& tau, double rho, const GroupData& group);

/// Sorted displacements dist(tau, g*tau) <= rho of the counted elements,
/// i.e. the jump locations of N(tau; .) on [0, rho].
std::vector<double> counting_jumps(const UpperHalfPoint& tau, double rho);

/// Right-hand side of the counting inequality for f(rho) = cosh^-k(rho/2):
/// finite Stieltjes part over [0, delta], boundary term, and the tail
/// integral (adaptive quadrature, abs tol 1e-12). Requires delta >= r/2.
double jl_rhs(double k, double delta, double r_gamma, int center_order,
              const UpperHalfPoint& tau, const GroupData& group);

/// Truncated left-hand side sum_{g counted, dist <= radius} cosh^-k(dist/2);
/// a lower bound for the full Stieltjes integral.
double jl_lhs_truncated(double k, const UpperHalfPoint& tau, double radius);

bool is_member_gamma0(const GroupElement& g, std::int64_t N);
bool is_member_gamma01(const GroupElement& g, std::int64_t N);

std::int64_t euler_phi(std::int64_t n);

/// [SL2(Z) : Gamma_0(N)] = N * prod_{p | N} (1 + 1/p).
std::int64_t index_gamma0(std::int64_t N);

/// [SL2(Z) : Gamma_{0,1}(4m)] computed as index_gamma0(4m) * phi(4m).
std::int64_t index_gamma01(std::int64_t m);

/// Independent oracle: coset count of the image of Gamma_{0,1}(4m) inside
/// SL2(Z/4mZ) by explicit orbit enumeration. Requires 4m <= 64.
std::int64_t coset_count_bruteforce(std::int64_t m);

/// Coset count of an arbitrary subgroup of SL2(Z/N) given by a membership
/// predicate on reduced entries (0 <= a,b,c,d < N). Backs the oracle above.
std::int64_t coset_count_subgroup(std::int64_t N,
                                  const std::function<bool(std::int64_t, std::int64_t,
                                                           std::int64_t, std::int64_t)>& member);

} // namespace supnorm

#pragma once

#include <complex>
#include <cstdint>

namespace supnorm {

/// A point tau = xi + i*eta of the upper half-plane (eta > 0, enforced).
struct UpperHalfPoint {
    double xi;
    double eta;

    UpperHalfPoint(double xi_, double eta_);
    explicit UpperHalfPoint(std::complex<double> tau) : UpperHalfPoint(tau.real(), tau.imag()) {}

    std::complex<double> value() const { return {xi, eta}; }
};

/// Integer matrix (a b; c d) with a*d - b*c = 1, checked at construction.
struct GroupElement {
    std::int64_t a, b, c, d;

    GroupElement(std::int64_t a_, std::int64_t b_, std::int64_t c_, std::int64_t d_);

    static GroupElement identity() { return {1, 0, 0, 1}; }
    static GroupElement translation(std::int64_t n) { return {1, n, 0, 1}; }
    static GroupElement inversion() { return {0, -1, 1, 0}; } // S

    GroupElement operator*(const GroupElement& o) const;
    GroupElement inverse() const { return {d, -b, -c, a}; }
    GroupElement negate() const { return {-a, -b, -c, -d}; }
    std::int64_t trace() const { return a + d; }

    bool operator==(const GroupElement&) const = default;
};

/// Truncation height Y > 0 of the fundamental domain (the cusp neighborhood
/// starts at height Y).
struct DomainTruncation {
    double Y;
    explicit DomainTruncation(double y);
};

/// Fractional linear action (a*tau + b) / (c*tau + d). Well defined on the
/// upper half-plane; the image height is eta / |c*tau + d|^2.
UpperHalfPoint mobius_apply(const GroupElement& g, const UpperHalfPoint& tau);

/// sigma(tau, tau') = |tau - conj(tau')|^2 / (4 Im(tau) Im(tau')). Always >= 1,
/// equals cosh^2(dist/2).
double displacement(const UpperHalfPoint& tau, const UpperHalfPoint& tau2);

/// Hyperbolic distance, 2*arccosh(sqrt(sigma)).
double hyp_distance(const UpperHalfPoint& tau, const UpperHalfPoint& tau2);

struct ReducedPoint {
    UpperHalfPoint point; // in {|xi| <= 1/2, |tau| >= 1} up to 1e-12
    GroupElement map;     // map * tau == point
};

/// Reduces tau into the standard fundamental domain of SL2(Z) by alternating
/// integer translations and inversions. Boundary points are accepted as they
/// come; no tie-break is applied on |xi| = 1/2 or |tau| = 1.
ReducedPoint reduce_to_fundamental_domain(const UpperHalfPoint& tau);

/// True iff a reduced point lies in the closed cusp neighborhood {eta >= Y}.
bool in_cusp_neighborhood(const UpperHalfPoint& tau, const DomainTruncation& trunc);

} // namespace supnorm

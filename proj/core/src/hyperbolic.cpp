#include "supnorm/hyperbolic.hpp"

#include <cmath>
#include <stdexcept>

namespace supnorm {

namespace {
constexpr double kReduceTol = 1e-12;
constexpr int kReduceCap = 10000;
} // namespace

UpperHalfPoint::UpperHalfPoint(double xi_, double eta_) : xi(xi_), eta(eta_) {
    if (!(eta > 0.0) || !std::isfinite(xi) || !std::isfinite(eta))
        throw std::invalid_argument("UpperHalfPoint: eta must be finite and > 0");
}

GroupElement::GroupElement(std::int64_t a_, std::int64_t b_, std::int64_t c_, std::int64_t d_)
    : a(a_), b(b_), c(c_), d(d_) {
    if (a * d - b * c != 1) throw std::invalid_argument("GroupElement: determinant must be 1");
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

DomainTruncation::DomainTruncation(double y) : Y(y) {
    if (!(Y > 0.0)) throw std::invalid_argument("DomainTruncation: Y must be > 0");
}

UpperHalfPoint mobius_apply(const GroupElement& g, const UpperHalfPoint& tau) {
    std::complex<double> t = tau.value();
    std::complex<double> den(double(g.c) * tau.xi + double(g.d), double(g.c) * tau.eta);
    std::complex<double> num = double(g.a) * t + std::complex<double>(double(g.b), 0.0);
    std::complex<double> w = num / den;
    // Image height directly, to avoid a sign flip from rounding near the axis.
    double eta = tau.eta / std::norm(den);
    return {w.real(), eta};
}

double displacement(const UpperHalfPoint& tau, const UpperHalfPoint& tau2) {
    double dx = tau.xi - tau2.xi;
    double sy = tau.eta + tau2.eta;
    double sigma = (dx * dx + sy * sy) / (4.0 * tau.eta * tau2.eta);
    return sigma < 1.0 ? 1.0 : sigma; // rounding guard; sigma >= 1 identically
}

double hyp_distance(const UpperHalfPoint& tau, const UpperHalfPoint& tau2) {
    return 2.0 * std::acosh(std::sqrt(displacement(tau, tau2)));
}

ReducedPoint reduce_to_fundamental_domain(const UpperHalfPoint& tau) {
    double xi = tau.xi, eta = tau.eta;
    GroupElement g = GroupElement::identity();
    for (int iter = 0; iter < kReduceCap; ++iter) {
        double n = std::nearbyint(xi);
        // Skip the translation on the |xi| = 1/2 boundary so that reduction is
        // idempotent there.
        if (n != 0.0 && std::abs(xi) > 0.5 + kReduceTol) {
            xi -= n;
            g = GroupElement::translation(-std::llround(n)) * g;
        }
        double norm2 = xi * xi + eta * eta;
        if (norm2 >= 1.0 - kReduceTol && std::abs(xi) <= 0.5 + kReduceTol)
            return {UpperHalfPoint(xi, eta), g};
        if (norm2 >= 1.0 - kReduceTol) continue; // translate again next round
        // tau -> -1/tau
        xi = -xi / norm2;
        eta = eta / norm2;
        g = GroupElement::inversion() * g;
    }
    throw std::runtime_error("reduce_to_fundamental_domain: iteration cap reached");
}

bool in_cusp_neighborhood(const UpperHalfPoint& tau, const DomainTruncation& trunc) {
    return tau.eta >= trunc.Y;
}

} // namespace supnorm

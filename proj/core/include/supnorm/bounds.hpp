#pragma once

#include <cstdint>
#include <string>

#include "supnorm/arithmetic.hpp"
#include "supnorm/hyperbolic.hpp"
#include "supnorm/qseries.hpp"
#include "supnorm/theta_jacobi.hpp"

namespace supnorm {

/// One measured-vs-bound comparison. The margin is always recomputed from
/// the stored fields, never carried separately.
struct BoundReport {
    std::string name;
    double k = 0.0;
    int m = 0; // 0 when inapplicable
    double lhs_measured = 0.0;
    double rhs_bound = 0.0;
    std::string config_digest;

    double margin() const { return rhs_bound - lhs_measured; }
};

struct BergmanConfig {
    double k = 12.0;               // >= 5, hypothesis of every bound used
    double tail_tol = 1e-6;        // absolute bound on the reported tail
    double initial_displacement = 64.0;
    double max_displacement = 1e6; // give up beyond this radius
    std::size_t max_elements = 4000000;

    void validate() const;
};

struct BergmanValue {
    double value;        // truncated series, real part
    double tail_bound;   // over-estimate of the dropped terms
    double radius;       // displacement radius actually summed
    std::size_t terms;   // group elements in the sum
};

/// Diagonal Bergman-kernel series (2i)^k (k-1)/(4pi) sum_g (tau - g conj(tau))^-k
/// (c conj(tau) + d)^-k eta^k over the enumerated elements, in deterministic
/// order with compensated summation; +-g pairs are merged for even k. The
/// tail combines the counting-inequality bound at the achieved radius with
/// explicit bounds for the translation and elliptic families the counting
/// function excludes.
BergmanValue bergman_diag_series(const UpperHalfPoint& tau, const GroupData& group,
                                 const BergmanConfig& cfg);

/// (k-1)/(2pi) + 3(k-1)/(pi cosh^(k-4)(r/4)) (1 + 1/sinh^2(r/4)).
double prop1_rhs(double k, double r_gamma);

struct IntegralCheck {
    double lhs;
    double rhs;
    double margin; // rhs - lhs
};

/// Imported integral bound: lhs = sinh^-2(r/4) Int_delta^inf sinh(rho + r/2)
/// cosh^-k(rho/2) drho against its closed-form majorant.
IntegralCheck prop1_eqn4_check(double k, double delta, double r_gamma);

/// Full cofinite bound: prop1_rhs + elliptic term + cusp term at tau.
double prop3_rhs(double k, const GroupData& group, const UpperHalfPoint& tau);

/// Imported bound for the parabolic sum: lhs = (k-1)/(2pi) sum_{n != 0}
/// cosh^-k(dist(tau, tau2 + n)/2), rhs in closed form.
IntegralCheck prop3_eqn5_check(double k, const UpperHalfPoint& tau, const UpperHalfPoint& tau2);

/// Gamma((k-1)/2) / Gamma(k/2) via log-gamma.
double gamma_ratio(double k);

/// Explicit sup bound with the cusp term taken at height k/(4 pi), where the
/// sup over the domain is attained on the truncated boundary.
double sup_bound_rhs_at_truncation_height(double k, const GroupData& group);

BoundReport thm4_report(double k, const GroupData& group, double measured_sup);
BoundReport cor5_report(double k, const GroupData& group, double measured_sup);

/// Uniform finite-index version; the unnamed proof constants default to the
/// values the cofinite chain supplies (not taken from the source text) and
/// can be overridden.
BoundReport thm6_report(double k, const GroupData& group, double measured_sup,
                        double c_ell = -1.0, double c_par = -1.0);

/// Bound at the measured argmax itself: rhs = prop3_rhs(k, group, argmax).
BoundReport prop3_argmax_report(double k, const GroupData& group, double measured_sup,
                                const UpperHalfPoint& argmax);

/// Explicit chain constant for sup(||f||^2 eta^(1/2)) of an L2-normalized
/// weight-k form: (k-1)/(4pi) sqrt(eta0) (A1 + A2), eta0 = (k+1/2)/(4pi);
/// scaled by the L2 mass for aggregates.
double auxlem_rhs(double k, const GroupData& group);

BoundReport auxlem_report(double k, const GroupData& group, double measured_sup,
                          double l2_mass = 1.0);

struct Thm11Options {
    JacobiQuadrature quad;          // for the normalization precondition
    JacobiSearchConfig search;      // for the 4-d sup
    SupnormSearchConfig h_search;   // for the per-component sups
    double normalization_tol = 1e-5;
};

/// Explicit sup-norm chain for an L2-normalized Jacobi form given through its
/// theta components: lhs is the measured 4-d sup, rhs is
/// 2m sum_mu sup(||h_mu||^2 eta^(1/2)) + (2 sqrt2 + (2/sqrt3)^(1/2)) sqrt(m)
/// sum_mu sup ||h_mu||^2, the per-component sups also being probed at the
/// lhs argmax.
BoundReport thm11_report(const ThetaComponentVector& h, double k, int m,
                         const Thm11Options& opts = {});

/// L2 mass sum_mu ||h_mu||^2 of the components over their own group,
/// computed as [Gamma_0 : Gamma_{0,1}(4m)] times the aggregate integral over
/// the reduced domain (the aggregate is invariant under the full group).
double theta_component_l2_mass(const ThetaComponentVector& h, const JacobiQuadrature& quad);

} // namespace supnorm

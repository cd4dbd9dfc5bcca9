#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>

#include "supnorm/hyperbolic.hpp"

namespace supnorm {

/// Truncated Fourier expansion sum c(n) q^(n/denom), q = e^(2 pi i tau).
/// Exponent numerators >= trunc_num are dropped; arithmetic keeps the
/// truncation closed (lcm of denominators, min of truncation orders).
/// Values are immutable once built; the builders below construct their
/// coefficients in exact 128-bit integer arithmetic before conversion.
class QSeries {
public:
    QSeries(std::int64_t denom, std::int64_t trunc_num, double weight, int level);

    std::int64_t denom() const { return denom_; }
    std::int64_t trunc_num() const { return trunc_num_; }
    double trunc_order() const { return double(trunc_num_) / double(denom_); }
    double weight() const { return weight_; }
    int level() const { return level_; }
    const std::map<std::int64_t, std::complex<double>>& coeffs() const { return coeffs_; }

    /// Coefficient of q^(num/denom()); zero when absent.
    std::complex<double> coeff(std::int64_t num) const;
    void set_coeff(std::int64_t num, std::complex<double> v);
    bool is_zero() const { return coeffs_.empty(); }

    QSeries operator+(const QSeries& o) const;
    QSeries operator-(const QSeries& o) const;
    QSeries operator*(const QSeries& o) const;
    QSeries operator*(std::complex<double> s) const;

private:
    std::int64_t denom_;
    std::int64_t trunc_num_;
    double weight_;
    int level_;
    std::map<std::int64_t, std::complex<double>> coeffs_;
};

/// Normalized Eisenstein series E_4 or E_6 (constant term 1), integral
/// exponents below trunc.
QSeries eisenstein_series(int k, std::int64_t trunc);

/// Discriminant cusp form, (E_4^3 - E_6^2)/1728, exact integer coefficients
/// below trunc. Leading coefficient (q^1) is 1.
QSeries delta_series(std::int64_t trunc);

/// r-th power of the eta function, q^(r/24) prod (1 - q^n)^r, with
/// denominator 24 and exponents below trunc (in q-units).
QSeries eta_power(int r, std::int64_t trunc);

struct EvalOptions {
    double tol = 1e-12;
    double eta_min = 0.5;
    // Tail majorant |c(x)| <= amplitude * exp(growth_rate * x) on the dropped
    // exponents x >= trunc_order. amplitude = 0 means 2 * max |stored coeff|.
    double growth_rate = 1.0;
    double amplitude = 0.0;
    bool require_certificate = true;
};

struct EvalResult {
    std::complex<double> value;
    double tail_bound;
    bool certified; // tail_bound <= tol
};

/// Evaluates the truncated expansion at tau together with a geometric-series
/// bound on the dropped tail. Throws truncation_error if the bound cannot be
/// brought below tol and certificates are required.
EvalResult eval_qseries(const QSeries& f, const UpperHalfPoint& tau, const EvalOptions& opts = {});

/// Squared pointwise Petersson norm |f(tau)|^2 eta^k.
double petersson_norm_point(const QSeries& f, double k, const UpperHalfPoint& tau);

struct PeterssonQuadrature {
    enum class Rule { midpoint, simpson, gauss4 };
    double Y_max = 12.0;
    int n_xi = 400;
    int n_eta = 400;
    Rule rule = Rule::midpoint;
    double tol = 1e-6;
    bool check_estimate = true; // throw accuracy_error when the estimate misses tol
};

struct InnerProductResult {
    std::complex<double> value;
    double error_estimate; // against the half-resolution grid
};

/// Petersson inner product over the reduced domain {|xi| <= 1/2, |tau| >= 1,
/// eta <= Y_max} by composite quadrature with log-spaced height panels.
InnerProductResult petersson_inner(const QSeries& f, const QSeries& g, double k,
                                   const PeterssonQuadrature& quad);

/// Integral of integrand(tau) over the same reduced domain with respect to
/// the hyperbolic measure dxi deta / eta^2; the quadrature engine behind
/// petersson_inner, exposed for other domain integrals.
std::complex<double> fd_hyperbolic_integral(
    const std::function<std::complex<double>(const UpperHalfPoint&)>& integrand,
    const PeterssonQuadrature& quad, int n_xi, int n_eta);

struct SupnormSearchConfig {
    int grid_xi = 96;
    int grid_eta = 96;
    double height_cap = 0.0; // 0 => max(2, k / (2 pi))
    int refine_rounds = 60;
    int restarts = 3;
};

struct SupnormResult {
    double sup;
    UpperHalfPoint argmax;
};

/// Best-found maximum of the squared pointwise norm over the truncated
/// fundamental domain: coarse grid plus coordinate descent from the top
/// cells. Deterministic given the config; the result is a lower bound
/// for the true supremum.
SupnormResult supnorm_search(const QSeries& f, double k, const SupnormSearchConfig& cfg = {});

/// Same search driven by an arbitrary nonnegative function on the domain.
SupnormResult supnorm_search_fn(const std::function<double(const UpperHalfPoint&)>& norm_fn,
                                double k, const SupnormSearchConfig& cfg = {});

struct WeightProfileMax {
    double eta0;
    double max_value;
};

/// Maximum of eta^(k+1/2) e^(-4 pi eta): attained at eta0 = (k + 1/2)/(4 pi).
WeightProfileMax aux_weight_profile_max(double k);

} // namespace supnorm

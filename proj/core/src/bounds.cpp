#include "supnorm/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "supnorm/errors.hpp"
#include "supnorm/numeric.hpp"

namespace supnorm {

namespace {

constexpr double kPi = std::numbers::pi;

double cosh_pow_neg(double x, double p) {
    // cosh^-p(x), stable for large x
    double ax = std::abs(x);
    double lc = ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
    return std::exp(-p * lc);
}

std::complex<double> cpow_int(std::complex<double> z, long e) {
    std::complex<double> r{1.0, 0.0};
    std::complex<double> b = z;
    long n = e;
    while (n > 0) {
        if (n & 1) r *= b;
        n >>= 1;
        if (n) b *= b;
    }
    return r;
}

bool is_integer(double k) { return std::floor(k) == k && std::abs(k) < 1e9; }

// Tail terms of the counting inequality at delta (boundary + integral), for
// f(rho) = cosh^-k(rho/2); bounds the sum over non-excluded elements beyond
// distance delta.
double jl_tail_terms(double k, double delta, double r_gamma, int cent) {
    double q = 0.25 * r_gamma;
    double boundary = 2.0 * double(cent) * std::cosh(q) / std::sinh(q) * std::sinh(delta) *
                      cosh_pow_neg(0.5 * delta, k);
    auto integrand = [&](double rho) {
        return cosh_pow_neg(0.5 * rho, k) * std::sinh(rho + 0.5 * r_gamma);
    };
    double hi = delta + 10.0;
    while (integrand(hi) > 1e-20 && hi < delta + 4000.0) hi += 5.0;
    double integral = integrate_adaptive(integrand, delta, hi, 1e-12);
    return boundary + double(cent) / (2.0 * std::sinh(q) * std::sinh(q)) * integral;
}

// sum_{|n| > n0} sigma(tau, tau + n)^{-k/2}, both signs of the translation.
double translation_tail(const UpperHalfPoint& tau, double R, double k) {
    double eta = tau.eta;
    auto n0 = static_cast<std::int64_t>(std::floor(2.0 * eta * std::sqrt(std::max(0.0, R - 1.0))));
    KahanSum s;
    for (std::int64_t n = n0 + 1; n < n0 + 100000000; ++n) {
        double sigma = 1.0 + double(n) * double(n) / (4.0 * eta * eta);
        double term = 2.0 * std::pow(sigma, -0.5 * k);
        s.add(term);
        if (term < 1e-22 * (1.0 + s.value())) break;
    }
    return s.value();
}

// Dyadic-shell over-count of everything beyond radius R: the entry bound
// |g_ij| <= kappa ||M||_F with 2 cosh(dist) = ||M||_F^2 turns each shell
// sigma <= X into at most (2 kappa sqrt(4X-2) + 1)^4 integer matrices. Gross,
// but safely covers the elliptic family the counting function excludes.
double elliptic_shell_tail(const UpperHalfPoint& tau, double R, double k) {
    double kappa = tau.eta + (tau.xi * tau.xi + 1.0) / tau.eta;
    KahanSum s;
    double X = R;
    for (int j = 0; j < 400; ++j) {
        double upper = 2.0 * X;
        double count = std::pow(2.0 * kappa * std::sqrt(4.0 * upper - 2.0) + 1.0, 4.0);
        double term = count * std::pow(X, -0.5 * k);
        s.add(term);
        if (term < 1e-22 * (1.0 + s.value())) break;
        X = upper;
    }
    return s.value();
}

std::string digest(const std::ostringstream& os) { return os.str(); }

} // namespace

void BergmanConfig::validate() const {
    if (!(k >= 5.0)) throw std::invalid_argument("BergmanConfig: k must be >= 5");
    if (!(tail_tol > 0.0)) throw std::invalid_argument("BergmanConfig: tail_tol must be > 0");
    if (!(initial_displacement >= 1.0) || !(max_displacement >= initial_displacement))
        throw std::invalid_argument("BergmanConfig: bad displacement range");
}

BergmanValue bergman_diag_series(const UpperHalfPoint& tau, const GroupData& group,
                                 const BergmanConfig& cfg) {
    cfg.validate();
    group.validate();
    const double k = cfg.k;
    const bool even_int = is_integer(k) && (std::int64_t(k) % 2 == 0);

    for (double R = cfg.initial_displacement;; R *= 2.0) {
        double rho = 2.0 * std::acosh(std::sqrt(R));
        double tail = (k - 1.0) / (4.0 * kPi) *
                      (jl_tail_terms(k, rho, group.injectivity_radius, group.center_order) +
                       translation_tail(tau, R, k) + elliptic_shell_tail(tau, R, k));
        if (tail > cfg.tail_tol) {
            if (2.0 * R > cfg.max_displacement)
                throw truncation_error("bergman_diag_series: tail bound not met within the "
                                       "displacement cap",
                                       R, tail);
            continue;
        }

        auto elements = enumerate_elements(
            tau, EnumerationBudget::by_displacement(R, cfg.max_elements));

        const std::complex<double> t = tau.value(), tbar = std::conj(t);
        const std::complex<double> two_i{0.0, 2.0};
        std::complex<double> front =
            is_integer(k) ? cpow_int(two_i, long(k)) : std::exp(k * std::log(two_i));
        front *= (k - 1.0) / (4.0 * kPi);
        const double eta_k = std::pow(tau.eta, k);

        KahanSum re, im;
        std::size_t terms = 0;
        for (const auto& g : elements) {
            double weight = 1.0;
            if (even_int) {
                // merge the +-g pair: keep the representative with (c, d) > 0
                if (g.c < 0 || (g.c == 0 && g.d < 0)) continue;
                weight = 2.0;
            }
            std::complex<double> w = mobius_apply(g, tau).value();
            std::complex<double> den1 = t - std::conj(w);
            std::complex<double> den2 = double(g.c) * tbar + double(g.d);
            std::complex<double> term;
            if (is_integer(k))
                term = 1.0 / (cpow_int(den1, long(k)) * cpow_int(den2, long(k)));
            else
                term = std::exp(-k * (std::log(den1) + std::log(den2)));
            term *= front * eta_k * weight;
            re.add(term.real());
            im.add(term.imag());
            ++terms;
        }
        return {re.value(), tail, R, terms};
    }
}

double prop1_rhs(double k, double r_gamma) {
    if (!(k >= 5.0)) throw std::invalid_argument("prop1_rhs: k must be >= 5");
    if (!(r_gamma > 0.0)) throw std::invalid_argument("prop1_rhs: r_gamma must be > 0");
    double q = 0.25 * r_gamma;
    double s = std::sinh(q);
    return (k - 1.0) / (2.0 * kPi) +
           3.0 * (k - 1.0) / kPi * cosh_pow_neg(q, k - 4.0) * (1.0 + 1.0 / (s * s));
}

IntegralCheck prop1_eqn4_check(double k, double delta, double r_gamma) {
    if (!(k >= 5.0)) throw std::invalid_argument("prop1_eqn4_check: k must be >= 5");
    if (!(delta >= 0.0)) throw std::invalid_argument("prop1_eqn4_check: delta must be >= 0");
    if (!(r_gamma > 0.0)) throw std::invalid_argument("prop1_eqn4_check: r_gamma must be > 0");
    double q = 0.25 * r_gamma;
    double s2inv = 1.0 / (std::sinh(q) * std::sinh(q));
    auto integrand = [&](double rho) {
        return std::sinh(rho + 0.5 * r_gamma) * cosh_pow_neg(0.5 * rho, k);
    };
    double hi = delta + 10.0;
    while (integrand(hi) > 1e-20 && hi < delta + 4000.0) hi += 5.0;
    double lhs = s2inv * integrate_adaptive(integrand, delta, hi, 1e-12);
    double rhs = 4.0 / (k - 2.0) * cosh_pow_neg(0.5 * delta, k - 2.0) * (2.0 + s2inv) +
                 8.0 / (k - 4.0) * cosh_pow_neg(0.5 * delta, k - 4.0) * s2inv;
    return {lhs, rhs, rhs - lhs};
}

double gamma_ratio(double k) {
    if (!(k > 1.0)) throw std::invalid_argument("gamma_ratio: k must be > 1");
    return std::exp(std::lgamma(0.5 * (k - 1.0)) - std::lgamma(0.5 * k));
}

double prop3_rhs(double k, const GroupData& group, const UpperHalfPoint& tau) {
    group.validate();
    double value = prop1_rhs(k, group.injectivity_radius);
    double ell = 0.0;
    for (int mj : group.elliptic_orders) ell += double(mj - 1);
    value += (k - 1.0) / (4.0 * kPi) * ell;
    double cusp = 0.0;
    for (const auto& scaling : group.cusp_scalings)
        cusp += mobius_apply(scaling.inverse(), tau).eta;
    value += 2.0 * (k - 1.0) / std::sqrt(kPi) * gamma_ratio(k) * cusp;
    return value;
}

IntegralCheck prop3_eqn5_check(double k, const UpperHalfPoint& tau, const UpperHalfPoint& tau2) {
    if (!(k >= 5.0)) throw std::invalid_argument("prop3_eqn5_check: k must be >= 5");
    KahanSum lhs_sum;
    // cosh^-k(dist/2) = sigma^(-k/2); terms decay like |n|^-k
    for (std::int64_t n = 1;; ++n) {
        UpperHalfPoint shifted_p(tau2.xi + double(n), tau2.eta);
        UpperHalfPoint shifted_m(tau2.xi - double(n), tau2.eta);
        double term = std::pow(displacement(tau, shifted_p), -0.5 * k) +
                      std::pow(displacement(tau, shifted_m), -0.5 * k);
        lhs_sum.add(term);
        if (term < 1e-18 * (1.0 + lhs_sum.value()) || n > 100000000) break;
    }
    double lhs = (k - 1.0) / (2.0 * kPi) * lhs_sum.value();
    double e1 = tau.eta, e2 = tau2.eta;
    double rhs = (k - 1.0) / std::sqrt(kPi) * gamma_ratio(k) *
                 std::pow(4.0 * e1 * e2, 0.5 * k) / std::pow(e1 + e2, k - 1.0);
    return {lhs, rhs, rhs - lhs};
}

double sup_bound_rhs_at_truncation_height(double k, const GroupData& group) {
    group.validate();
    double value = prop1_rhs(k, group.injectivity_radius);
    double ell = 0.0;
    for (int mj : group.elliptic_orders) ell += double(mj - 1);
    value += (k - 1.0) / (4.0 * kPi) * ell;
    // On the truncated boundary every Im(sigma_j^-1 tau) is at most k/(4 pi).
    value += 2.0 * (k - 1.0) / std::sqrt(kPi) * gamma_ratio(k) * (k / (4.0 * kPi)) *
             double(group.num_cusps);
    return value;
}

namespace {

std::string report_digest(double k, int m, const char* extra = "") {
    std::ostringstream os;
    os << "k=" << k << ";m=" << m << (*extra ? ";" : "") << extra;
    return digest(os);
}

} // namespace

BoundReport thm4_report(double k, const GroupData& group, double measured_sup) {
    return {"thm4", k, 0, measured_sup, sup_bound_rhs_at_truncation_height(k, group),
            report_digest(k, 0, "chain=truncation-height")};
}

BoundReport cor5_report(double k, const GroupData& group, double measured_sup) {
    return {"cor5", k, 0, measured_sup, sup_bound_rhs_at_truncation_height(k, group),
            report_digest(k, 0, "chain=truncation-height")};
}

BoundReport thm6_report(double k, const GroupData& group, double measured_sup, double c_ell,
                        double c_par) {
    group.validate();
    if (c_ell < 0.0) {
        double ell = 0.0;
        for (int mj : group.elliptic_orders) ell += double(mj - 1);
        c_ell = ell / (4.0 * kPi); // (k-1) c_ell reproduces the elliptic term
    }
    if (c_par < 0.0) {
        // sup over k >= 5 of the cusp term divided by k^(3/2), using
        // sqrt(k) gamma_ratio <= 2
        c_par = double(group.num_cusps) / std::pow(kPi, 1.5);
    }
    double q = 0.25 * group.injectivity_radius;
    double s = std::sinh(q);
    double rhs = (k - 1.0) / (2.0 * kPi) +
                 3.0 * (k - 1.0) / kPi * cosh_pow_neg(q, k - 4.0) * (1.0 + 1.0 / (s * s)) +
                 (k - 1.0) * c_ell + std::pow(k, 1.5) * c_par;
    std::ostringstream os;
    os << "c_ell=" << c_ell << ";c_par=" << c_par << ";constants=assembled-not-from-source";
    return {"thm6", k, 0, measured_sup, rhs, "k=" + std::to_string(k) + ";" + digest(os)};
}

BoundReport prop3_argmax_report(double k, const GroupData& group, double measured_sup,
                                const UpperHalfPoint& argmax) {
    std::ostringstream os;
    os << "k=" << k << ";argmax=" << argmax.xi << "+" << argmax.eta << "i";
    return {"prop3_argmax", k, 0, measured_sup, prop3_rhs(k, group, argmax), digest(os)};
}

double auxlem_rhs(double k, const GroupData& group) {
    group.validate();
    double q = 0.25 * group.injectivity_radius;
    double s = std::sinh(q);
    double ell = 0.0;
    for (int mj : group.elliptic_orders) ell += double(mj - 1);
    // A1 bounds the non-parabolic sum, A2 the parabolic sum at height eta0.
    double a1 = 2.0 + 12.0 * cosh_pow_neg(q, k - 4.0) * (1.0 + 1.0 / (s * s)) + ell;
    double a2 = 2.0 + 2.0 * gamma_ratio(k) * (k + 0.5) / std::sqrt(kPi);
    double eta0 = (k + 0.5) / (4.0 * kPi);
    return (k - 1.0) / (4.0 * kPi) * std::sqrt(eta0) * (a1 + a2);
}

BoundReport auxlem_report(double k, const GroupData& group, double measured_sup,
                          double l2_mass) {
    if (!(l2_mass > 0.0)) throw std::invalid_argument("auxlem_report: l2_mass must be > 0");
    std::ostringstream os;
    os << "k=" << k << ";l2_mass=" << l2_mass;
    return {"auxlem", k, 0, measured_sup, auxlem_rhs(k, group) * l2_mass, digest(os)};
}

double theta_component_l2_mass(const ThetaComponentVector& h, const JacobiQuadrature& quad) {
    h.validate();
    InnerProductResult ip = jacobi_inner_theta(h, h, quad);
    double index = double(index_gamma01(h.index));
    return index * std::sqrt(4.0 * h.index) * ip.value.real();
}

BoundReport thm11_report(const ThetaComponentVector& h, double k, int m,
                         const Thm11Options& opts) {
    h.validate();
    if (h.index != m) throw std::invalid_argument("thm11_report: index mismatch");

    InnerProductResult norm = jacobi_inner_theta(h, h, opts.quad);
    if (std::abs(norm.value.real() - 1.0) > opts.normalization_tol ||
        std::abs(norm.value.imag()) > opts.normalization_tol)
        throw accuracy_error("thm11_report: the components are not L2-normalized",
                             std::abs(norm.value - std::complex<double>{1.0, 0.0}),
                             opts.normalization_tol);

    auto norm_fn = [&](const JacobiPoint& p) {
        std::complex<double> v = assemble_jacobi_scaled(h, p);
        return std::norm(v) * std::pow(p.tau.eta, k);
    };
    JacobiSupnormResult sup = jacobi_supnorm_search_fn(norm_fn, k, opts.search);

    SupnormSearchConfig hcfg = opts.h_search;
    if (hcfg.height_cap <= 0.0) hcfg.height_cap = std::max(2.0, (k - 0.5) / (2.0 * kPi));
    const UpperHalfPoint& at_argmax = sup.argmax.tau;
    double sum_weighted = 0.0, sum_plain = 0.0;
    for (int mu = 0; mu < 2 * m; ++mu) {
        const QSeries& hm = h.components[mu];
        auto plain = [&](const UpperHalfPoint& tau) {
            return petersson_norm_point(hm, k - 0.5, tau);
        };
        auto weighted = [&](const UpperHalfPoint& tau) {
            return plain(tau) * std::sqrt(tau.eta);
        };
        double sp = supnorm_search_fn(plain, k - 0.5, hcfg).sup;
        double sw = supnorm_search_fn(weighted, k - 0.5, hcfg).sup;
        // also probe the 4-d argmax so the pointwise chain closes there
        sp = std::max(sp, plain(at_argmax));
        sw = std::max(sw, weighted(at_argmax));
        sum_plain += sp;
        sum_weighted += sw;
    }
    double c_small = 2.0 * std::sqrt(2.0) + std::sqrt(2.0 / std::sqrt(3.0));
    double rhs = 2.0 * double(m) * sum_weighted + c_small * std::sqrt(double(m)) * sum_plain;

    std::ostringstream os;
    os << "k=" << k << ";m=" << m << ";norm=" << norm.value.real()
       << ";c_small=" << c_small;
    return {"thm11", k, m, sup.sup, rhs, digest(os)};
}

} // namespace supnorm

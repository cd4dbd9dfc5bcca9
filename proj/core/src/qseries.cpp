#include "supnorm/qseries.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "supnorm/errors.hpp"
#include "supnorm/numeric.hpp"

#include "int_series.hpp"

namespace supnorm {

namespace {

using detail::IntSeries;
using detail::int128;
using detail::divisor_power_sum;
using detail::euler_product;

double to_double(int128 v) { return static_cast<double>(v); }

IntSeries eisenstein_int(int k, std::int64_t trunc) {
    IntSeries s(trunc);
    s.c[0] = 1;
    std::int64_t factor = (k == 4) ? 240 : -504;
    int e = k - 1;
    for (std::int64_t n = 1; n < trunc; ++n) s.c[n] = int128(factor) * divisor_power_sum(n, e);
    return s;
}

QSeries from_int_series(const IntSeries& s, std::int64_t denom, std::int64_t num_scale,
                        std::int64_t num_shift, std::int64_t trunc_num, double weight,
                        int level) {
    QSeries q(denom, trunc_num, weight, level);
    for (std::int64_t i = 0; i < s.trunc; ++i) {
        if (s.c[i] == 0) continue;
        std::int64_t num = i * num_scale + num_shift;
        if (num >= trunc_num) continue;
        q.set_coeff(num, {to_double(s.c[i]), 0.0});
    }
    return q;
}

constexpr double kPi = std::numbers::pi;

} // namespace

QSeries::QSeries(std::int64_t denom, std::int64_t trunc_num, double weight, int level)
    : denom_(denom), trunc_num_(trunc_num), weight_(weight), level_(level) {
    if (denom_ < 1) throw std::invalid_argument("QSeries: denom must be >= 1");
    if (level_ < 1) throw std::invalid_argument("QSeries: level must be >= 1");
}

std::complex<double> QSeries::coeff(std::int64_t num) const {
    auto it = coeffs_.find(num);
    return it == coeffs_.end() ? std::complex<double>{0.0, 0.0} : it->second;
}

void QSeries::set_coeff(std::int64_t num, std::complex<double> v) {
    if (num >= trunc_num_) return; // beyond the truncation order
    if (v == std::complex<double>{0.0, 0.0})
        coeffs_.erase(num);
    else
        coeffs_[num] = v;
}

QSeries QSeries::operator+(const QSeries& o) const {
    std::int64_t d = std::lcm(denom_, o.denom_);
    std::int64_t sa = d / denom_, sb = d / o.denom_;
    std::int64_t tn = std::min(trunc_num_ * sa, o.trunc_num_ * sb);
    QSeries r(d, tn, weight_, std::lcm(level_, o.level_));
    for (const auto& [n, v] : coeffs_) r.set_coeff(n * sa, v);
    for (const auto& [n, v] : o.coeffs_) r.set_coeff(n * sb, r.coeff(n * sb) + v);
    return r;
}

QSeries QSeries::operator-(const QSeries& o) const { return *this + o * std::complex<double>{-1.0, 0.0}; }

QSeries QSeries::operator*(const QSeries& o) const {
    std::int64_t d = std::lcm(denom_, o.denom_);
    std::int64_t sa = d / denom_, sb = d / o.denom_;
    std::int64_t tn = std::min(trunc_num_ * sa, o.trunc_num_ * sb);
    QSeries r(d, tn, weight_ + o.weight_, std::lcm(level_, o.level_));
    for (const auto& [n, v] : coeffs_) {
        for (const auto& [m, w] : o.coeffs_) {
            std::int64_t e = n * sa + m * sb;
            if (e >= tn) break; // o.coeffs_ iterates in increasing exponent order
            r.set_coeff(e, r.coeff(e) + v * w);
        }
    }
    return r;
}

QSeries QSeries::operator*(std::complex<double> s) const {
    QSeries r(denom_, trunc_num_, weight_, level_);
    if (s == std::complex<double>{0.0, 0.0}) return r;
    for (const auto& [n, v] : coeffs_) r.set_coeff(n, v * s);
    return r;
}

QSeries eisenstein_series(int k, std::int64_t trunc) {
    if (k != 4 && k != 6)
        throw std::invalid_argument("eisenstein_series: only k = 4 and k = 6 are built");
    if (trunc < 1) throw std::invalid_argument("eisenstein_series: trunc must be >= 1");
    return from_int_series(eisenstein_int(k, trunc), 1, 1, 0, trunc, double(k), 1);
}

QSeries delta_series(std::int64_t trunc) {
    if (trunc < 2) throw std::invalid_argument("delta_series: trunc must be >= 2");
    try {
        IntSeries e4 = eisenstein_int(4, trunc), e6 = eisenstein_int(6, trunc);
        IntSeries delta = e4.pow(3).sub(e6.pow(2)).exact_div(1728);
        return from_int_series(delta, 1, 1, 0, trunc, 12.0, 1);
    } catch (const std::overflow_error&) {
        std::clog << "delta_series: 128-bit construction overflowed, rebuilding in floating point\n";
        QSeries e4 = eisenstein_series(4, trunc), e6 = eisenstein_series(6, trunc);
        return (e4 * e4 * e4 - e6 * e6) * std::complex<double>{1.0 / 1728.0, 0.0};
    }
}

QSeries eta_power(int r, std::int64_t trunc) {
    if (r < 1) throw std::invalid_argument("eta_power: r must be >= 1");
    if (trunc < 1) throw std::invalid_argument("eta_power: trunc must be >= 1");
    IntSeries p = euler_product(trunc).pow(r);
    // exponents (24 j + r) / 24, kept below trunc
    return from_int_series(p, 24, 24, r, trunc * 24, double(r) / 2.0, 1);
}

EvalResult eval_qseries(const QSeries& f, const UpperHalfPoint& tau, const EvalOptions& opts) {
    double amplitude = opts.amplitude;
    if (amplitude <= 0.0) {
        double mx = 0.0;
        for (const auto& [n, v] : f.coeffs()) mx = std::max(mx, std::abs(v));
        amplitude = 2.0 * mx;
    }

    std::complex<double> acc{0.0, 0.0};
    const double d = double(f.denom());
    for (const auto& [n, v] : f.coeffs()) {
        double x = double(n) / d;
        std::complex<double> e = std::exp(std::complex<double>(0.0, 2.0 * kPi * x) * tau.value());
        acc += v * e;
    }

    // Geometric majorant on the dropped exponents x >= trunc_order, step 1/denom.
    double tail = 0.0;
    if (amplitude > 0.0) {
        double rate = (opts.growth_rate - 2.0 * kPi * tau.eta) / d;
        if (rate >= 0.0) {
            tail = std::numeric_limits<double>::infinity();
        } else {
            double rho = std::exp(rate);
            tail = amplitude * std::pow(rho, double(f.trunc_num())) / (1.0 - rho);
        }
    }

    EvalResult res{acc, tail, tail <= opts.tol};
    if (!res.certified && opts.require_certificate)
        throw truncation_error("eval_qseries: tail bound exceeds tolerance", f.trunc_order(), tail);
    return res;
}

double petersson_norm_point(const QSeries& f, double k, const UpperHalfPoint& tau) {
    EvalResult r = eval_qseries(f, tau);
    return std::norm(r.value) * std::pow(tau.eta, k);
}

namespace {

double domain_floor(double xi) { return std::sqrt(std::max(0.0, 1.0 - xi * xi)); }

// One column: integral over eta in [a(xi), Y] of integrand / eta^2,
// log-spaced panels, rule applied per panel.
std::complex<double> column_integral(
    const std::function<std::complex<double>(const UpperHalfPoint&)>& integrand, double xi,
    double ymax, int n_eta, PeterssonQuadrature::Rule rule) {
    double a = domain_floor(xi);
    if (a >= ymax) return {0.0, 0.0};
    double v1 = std::log(a), v2 = std::log(ymax);
    auto point_value = [&](double v) -> std::complex<double> {
        double eta = std::exp(v);
        // d eta = eta dv, measure deta / eta^2 -> dv / eta
        return integrand(UpperHalfPoint(xi, eta)) / eta;
    };
    std::complex<double> acc{0.0, 0.0};
    double h = (v2 - v1) / n_eta;
    switch (rule) {
        case PeterssonQuadrature::Rule::midpoint:
            for (int j = 0; j < n_eta; ++j) acc += point_value(v1 + (j + 0.5) * h) * h;
            break;
        case PeterssonQuadrature::Rule::simpson: {
            int n = n_eta % 2 ? n_eta + 1 : n_eta;
            h = (v2 - v1) / n;
            acc = point_value(v1) + point_value(v2);
            for (int j = 1; j < n; ++j)
                acc += point_value(v1 + j * h) * ((j % 2) ? 4.0 : 2.0);
            acc *= h / 3.0;
            break;
        }
        case PeterssonQuadrature::Rule::gauss4:
            for (int j = 0; j < n_eta; ++j) {
                double lo = v1 + j * h;
                for (int q = 0; q < 4; ++q) {
                    double v = lo + 0.5 * h * (1.0 + GaussLegendre4::node[q]);
                    acc += point_value(v) * (0.5 * h * GaussLegendre4::weight[q]);
                }
            }
            break;
    }
    return acc;
}

} // namespace

std::complex<double> fd_hyperbolic_integral(
    const std::function<std::complex<double>(const UpperHalfPoint&)>& integrand,
    const PeterssonQuadrature& quad, int n_xi, int n_eta) {
    auto column = [&](double xi) {
        return column_integral(integrand, xi, quad.Y_max, n_eta, quad.rule);
    };
    std::complex<double> acc{0.0, 0.0};
    double h = 1.0 / n_xi;
    switch (quad.rule) {
        case PeterssonQuadrature::Rule::midpoint: {
            KahanSum sr, si;
            for (int i = 0; i < n_xi; ++i) {
                std::complex<double> cv = column(-0.5 + (double(i) + 0.5) * h) * h;
                sr.add(cv.real());
                si.add(cv.imag());
            }
            acc = {sr.value(), si.value()};
            break;
        }
        case PeterssonQuadrature::Rule::simpson: {
            int n = n_xi % 2 ? n_xi + 1 : n_xi;
            double hh = 1.0 / n;
            std::complex<double> s = column(-0.5) + column(0.5);
            for (int j = 1; j < n; ++j) s += column(-0.5 + j * hh) * ((j % 2) ? 4.0 : 2.0);
            acc = s * (hh / 3.0);
            break;
        }
        case PeterssonQuadrature::Rule::gauss4: {
            KahanSum sr, si;
            for (int i = 0; i < n_xi; ++i) {
                double lo = -0.5 + i * h;
                for (int q = 0; q < 4; ++q) {
                    double xi = lo + 0.5 * h * (1.0 + GaussLegendre4::node[q]);
                    std::complex<double> cv = column(xi) * (0.5 * h * GaussLegendre4::weight[q]);
                    sr.add(cv.real());
                    si.add(cv.imag());
                }
            }
            acc = {sr.value(), si.value()};
            break;
        }
    }
    return acc;
}

InnerProductResult petersson_inner(const QSeries& f, const QSeries& g, double k,
                                   const PeterssonQuadrature& quad) {
    if (!(quad.Y_max > 1.0)) throw std::invalid_argument("petersson_inner: Y_max must be > 1");
    if (!(quad.tol > 0.0)) throw std::invalid_argument("petersson_inner: tol must be > 0");
    if (quad.n_xi < 4 || quad.n_eta < 4)
        throw std::invalid_argument("petersson_inner: need at least 4 panels per direction");
    bool same = (&f == &g);
    auto integrand = [&](const UpperHalfPoint& tau) -> std::complex<double> {
        std::complex<double> fv = eval_qseries(f, tau).value;
        std::complex<double> gv = same ? fv : eval_qseries(g, tau).value;
        return fv * std::conj(gv) * std::pow(tau.eta, k);
    };
    std::complex<double> full = fd_hyperbolic_integral(integrand, quad, quad.n_xi, quad.n_eta);
    std::complex<double> half =
        fd_hyperbolic_integral(integrand, quad, quad.n_xi / 2, quad.n_eta / 2);
    double est = std::abs(full - half);
    if (quad.check_estimate && est > quad.tol * std::max(1.0, std::abs(full)))
        throw accuracy_error("petersson_inner: refinement estimate exceeds tolerance", est,
                             quad.tol);
    return {full, est};
}

SupnormResult supnorm_search_fn(const std::function<double(const UpperHalfPoint&)>& norm_fn,
                                double k, const SupnormSearchConfig& cfg) {
    double cap = cfg.height_cap > 0.0 ? cfg.height_cap : std::max(2.0, k / (2.0 * kPi));
    struct Cell {
        double value;
        double xi, eta;
    };
    std::vector<Cell> top;
    auto consider = [&](double xi, double eta, std::vector<Cell>& sink) {
        double v = norm_fn(UpperHalfPoint(xi, eta));
        sink.push_back({v, xi, eta});
    };

    std::vector<Cell> cells;
    cells.reserve(std::size_t(cfg.grid_xi + 1) * (cfg.grid_eta + 1));
    for (int i = 0; i <= cfg.grid_xi; ++i) {
        double xi = -0.5 + double(i) / cfg.grid_xi;
        double lo = domain_floor(xi);
        if (lo >= cap) continue;
        for (int j = 0; j <= cfg.grid_eta; ++j) {
            double eta = lo * std::pow(cap / lo, double(j) / cfg.grid_eta);
            consider(xi, eta, cells);
        }
    }
    std::sort(cells.begin(), cells.end(), [](const Cell& l, const Cell& r) {
        if (l.value != r.value) return l.value > r.value;
        if (l.xi != r.xi) return l.xi < r.xi;
        return l.eta < r.eta;
    });
    int restarts = std::min<std::size_t>(cfg.restarts, cells.size());

    Cell best = cells.empty() ? Cell{0.0, 0.0, 1.0} : cells.front();
    for (int s = 0; s < restarts; ++s) {
        double xi = cells[s].xi, eta = cells[s].eta, val = cells[s].value;
        double step_xi = 1.0 / cfg.grid_xi, step_eta = 0.5 * (cap - 1.0) / cfg.grid_eta + 1e-3;
        for (int round = 0; round < cfg.refine_rounds; ++round) {
            bool improved = false;
            for (auto [dx, de] : {std::pair{step_xi, 0.0}, {-step_xi, 0.0},
                                  {0.0, step_eta}, {0.0, -step_eta}}) {
                double nxi = std::clamp(xi + dx, -0.5, 0.5);
                double neta = std::clamp(eta + de, domain_floor(nxi), cap);
                double v = norm_fn(UpperHalfPoint(nxi, neta));
                if (v > val) {
                    val = v;
                    xi = nxi;
                    eta = neta;
                    improved = true;
                }
            }
            if (!improved) {
                step_xi *= 0.5;
                step_eta *= 0.5;
                if (step_xi < 1e-9 && step_eta < 1e-9) break;
            }
        }
        if (val > best.value) best = {val, xi, eta};
    }
    return {best.value, UpperHalfPoint(best.xi, best.eta)};
}

SupnormResult supnorm_search(const QSeries& f, double k, const SupnormSearchConfig& cfg) {
    return supnorm_search_fn(
        [&](const UpperHalfPoint& tau) { return petersson_norm_point(f, k, tau); }, k, cfg);
}

WeightProfileMax aux_weight_profile_max(double k) {
    if (!(k > 0.0)) throw std::invalid_argument("aux_weight_profile_max: k must be > 0");
    double eta0 = (k + 0.5) / (4.0 * kPi);
    return {eta0, std::pow(eta0, k + 0.5) * std::exp(-4.0 * kPi * eta0)};
}

} // namespace supnorm

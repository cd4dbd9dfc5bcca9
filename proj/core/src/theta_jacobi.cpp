#include "supnorm/theta_jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "supnorm/errors.hpp"
#include "supnorm/numeric.hpp"

#include "int_series.hpp"

namespace supnorm {

namespace {

constexpr double kPi = std::numbers::pi;

std::complex<double> cis(double t) { return {std::cos(t), std::sin(t)}; }

struct ThetaWindow {
    std::int64_t lo, hi; // summation range in n
    double tail_scaled;  // bound on the dropped scaled terms
};

// Scaled terms are exp(-a (u + y/eta)^2) with a = 2 pi m eta and u = n - mu/2m;
// the window covers |u + y/eta| <= W with W grown until the Gaussian tail
// majorant 2 e^{-aW^2} / (1 - e^{-2aW}) is below tol.
ThetaWindow theta_window(int mu, int m, const JacobiPoint& p, double tol) {
    double eta = p.tau.eta, y = p.z.imag();
    double a = 2.0 * kPi * m * eta;
    double center = double(mu) / (2.0 * m) - y / eta; // u + y/eta = 0 at n = center
    for (double w = 1.0; w < 1.1e6; w += 1.0) {
        double bound = 2.0 * std::exp(-a * w * w) / (1.0 - std::exp(-2.0 * a * w));
        if (bound <= tol) {
            auto lo = static_cast<std::int64_t>(std::floor(center - w - 1.0));
            auto hi = static_cast<std::int64_t>(std::ceil(center + w + 1.0));
            return {lo, hi, bound};
        }
    }
    throw truncation_error("theta_eval: tail bound cannot be met within the window cap", 1e6,
                           tol);
}

std::complex<double> theta_scaled_sum(int mu, int m, const JacobiPoint& p,
                                      const ThetaWindow& win) {
    double eta = p.tau.eta, xi = p.tau.xi;
    double x = p.z.real(), y = p.z.imag();
    double yr = y / eta;
    std::complex<double> acc{0.0, 0.0};
    for (std::int64_t n = win.lo; n <= win.hi; ++n) {
        double u = double(n) - double(mu) / (2.0 * m);
        double mag = std::exp(-2.0 * kPi * m * eta * (u + yr) * (u + yr));
        double phase = 2.0 * kPi * m * (xi * u * u + 2.0 * x * u);
        acc += mag * cis(phase);
    }
    return acc;
}

void check_theta_args(int mu, int m, double tol) {
    if (m < 1) throw std::invalid_argument("theta: index m must be >= 1");
    if (mu < 0 || mu >= 2 * m) throw std::invalid_argument("theta: mu must be in [0, 2m)");
    if (!(tol > 0.0)) throw std::invalid_argument("theta: tol must be > 0");
}

} // namespace

ThetaValue theta_eval_scaled(int mu, int m, const JacobiPoint& p, double tol) {
    check_theta_args(mu, m, tol);
    ThetaWindow win = theta_window(mu, m, p, tol);
    return {theta_scaled_sum(mu, m, p, win), win.tail_scaled};
}

ThetaValue theta_eval(int mu, int m, const JacobiPoint& p, double tol) {
    check_theta_args(mu, m, tol);
    double eta = p.tau.eta, y = p.z.imag();
    double blowup = std::exp(2.0 * kPi * m * y * y / eta);
    // Aim the scaled tail so that the raw tail meets tol.
    ThetaWindow win = theta_window(mu, m, p, tol / blowup);
    std::complex<double> s = theta_scaled_sum(mu, m, p, win);
    return {s * blowup, win.tail_scaled * blowup};
}

double theta_pet_norm(int mu, int m, const JacobiPoint& p) {
    ThetaValue v = theta_eval_scaled(mu, m, p);
    return std::norm(v.value) * std::sqrt(p.tau.eta);
}

ThetaSumBound theta_sum_bound_check(int m, const JacobiPoint& p) {
    if (m < 1) throw std::invalid_argument("theta_sum_bound_check: m must be >= 1");
    double eta = p.tau.eta;
    KahanSum lhs;
    for (int mu = 0; mu < 2 * m; ++mu) lhs.add(theta_pet_norm(mu, m, p));
    double root = 1.0 + 1.0 / std::sqrt(2.0 * m * eta);
    double rhs = 2.0 * m * std::sqrt(eta) * root * root;
    return {lhs.value(), rhs, rhs - lhs.value()};
}

JacobiFormCoeffs::JacobiFormCoeffs(int weight, int index, std::int64_t trunc_n)
    : weight_(weight), index_(index), trunc_n_(trunc_n) {
    if (index_ < 1) throw std::invalid_argument("JacobiFormCoeffs: index must be >= 1");
    if (trunc_n_ < 1) throw std::invalid_argument("JacobiFormCoeffs: trunc_n must be >= 1");
}

std::complex<double> JacobiFormCoeffs::coeff(std::int64_t n, std::int64_t r) const {
    auto it = coeffs_.find({n, r});
    return it == coeffs_.end() ? std::complex<double>{0.0, 0.0} : it->second;
}

void JacobiFormCoeffs::set_coeff(std::int64_t n, std::int64_t r, std::complex<double> v) {
    if (4 * index_ * n - r * r <= 0)
        throw std::invalid_argument("JacobiFormCoeffs: cusp support requires 4mn - r^2 > 0");
    if (n > trunc_n_) return;
    if (v == std::complex<double>{0.0, 0.0})
        coeffs_.erase({n, r});
    else
        coeffs_[{n, r}] = v;
}

std::complex<double> JacobiFormCoeffs::eval(const JacobiPoint& p) const {
    std::complex<double> acc{0.0, 0.0};
    std::complex<double> tau = p.tau.value();
    for (const auto& [key, v] : coeffs_) {
        auto [n, r] = key;
        acc += v * std::exp(std::complex<double>(0.0, 2.0 * kPi) *
                            (double(n) * tau + double(r) * p.z));
    }
    return acc;
}

std::complex<double> JacobiFormCoeffs::eval_scaled(const JacobiPoint& p) const {
    double eta = p.tau.eta, xi = p.tau.xi;
    double x = p.z.real(), yr = p.z.imag() / eta;
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [key, v] : coeffs_) {
        auto [n, r] = key;
        // n + r yr + m yr^2 = m (yr + r/2m)^2 + (4mn - r^2)/(4m) > 0 on the support
        double mag = std::exp(-2.0 * kPi * eta *
                              (double(n) + double(r) * yr + double(index_) * yr * yr));
        double phase = 2.0 * kPi * (double(n) * xi + double(r) * x);
        acc += v * (mag * cis(phase));
    }
    return acc;
}

JacobiFormCoeffs JacobiFormCoeffs::scaled_by(std::complex<double> s) const {
    JacobiFormCoeffs r(weight_, index_, trunc_n_);
    for (const auto& [key, v] : coeffs_) r.coeffs_[key] = v * s;
    return r;
}

void ThetaComponentVector::validate() const {
    if (index < 1) throw std::invalid_argument("ThetaComponentVector: index must be >= 1");
    if (components.size() != static_cast<std::size_t>(2 * index))
        throw std::invalid_argument("ThetaComponentVector: need exactly 2m components");
}

std::complex<double> assemble_jacobi(const ThetaComponentVector& h, const JacobiPoint& p) {
    h.validate();
    std::complex<double> acc{0.0, 0.0};
    for (int mu = 0; mu < 2 * h.index; ++mu) {
        if (h.components[mu].is_zero()) continue;
        std::complex<double> hv = eval_qseries(h.components[mu], p.tau).value;
        acc += hv * theta_eval(mu, h.index, p).value;
    }
    return acc;
}

std::complex<double> assemble_jacobi_scaled(const ThetaComponentVector& h, const JacobiPoint& p) {
    h.validate();
    std::complex<double> acc{0.0, 0.0};
    for (int mu = 0; mu < 2 * h.index; ++mu) {
        if (h.components[mu].is_zero()) continue;
        std::complex<double> hv = eval_qseries(h.components[mu], p.tau).value;
        acc += hv * theta_eval_scaled(mu, h.index, p).value;
    }
    return acc;
}

ThetaComponentVector extract_h_mu(const JacobiFormCoeffs& phi) {
    const int m = phi.index();
    const std::int64_t two_m = 2 * m, four_m = 4 * m;
    ThetaComponentVector out;
    out.index = m;
    out.weight = phi.weight();
    std::int64_t trunc_num = four_m * (phi.trunc_n() + 1);
    for (int mu = 0; mu < two_m; ++mu)
        out.components.emplace_back(four_m, trunc_num, phi.weight() - 0.5, int(four_m));

    for (const auto& [key, v] : phi.coeffs()) {
        auto [n, r] = key;
        // theta_{mu,m} carries zeta-exponents = -mu (mod 2m)
        std::int64_t mu = ((-r) % two_m + two_m) % two_m;
        std::int64_t num = four_m * n - r * r; // exponent (4mn - r^2) / 4m
        QSeries& h = out.components[static_cast<std::size_t>(mu)];
        std::complex<double> existing = h.coeff(num);
        if (existing != std::complex<double>{0.0, 0.0}) {
            if (std::abs(existing - v) > 1e-10 * std::max(1.0, std::abs(v)))
                throw std::invalid_argument(
                    "extract_h_mu: coefficients violate the discriminant dependence");
            continue;
        }
        h.set_coeff(num, v);
    }
    return out;
}

JacobiFormCoeffs phi_10_1(std::int64_t trunc_n) {
    if (trunc_n < 3) throw std::invalid_argument("phi_10_1: trunc_n must be >= 3");
    detail::IntSeries p18 = detail::euler_product(trunc_n).pow(18);

    // theta_1(tau,z)^2 = sum_{a,b odd} (-1)^r q^{(a^2+b^2)/8} zeta^r, r = (a+b)/2;
    // multiplied by eta^18 = q^{3/4} sum_j p18_j q^j the q-exponent becomes
    // (a^2+b^2-2)/8 + 1 + j, an integer.
    std::map<std::pair<std::int64_t, std::int64_t>, detail::int128> acc;
    auto amax = static_cast<std::int64_t>(std::sqrt(double(8 * trunc_n))) + 3;
    for (std::int64_t a = -amax; a <= amax; a += 2) {
        if (a % 2 == 0) continue;
        for (std::int64_t b = -amax; b <= amax; ++b) {
            if ((b % 2 + 2) % 2 == 0) continue;
            std::int64_t q8 = a * a + b * b - 2;
            if (q8 % 8 != 0) continue; // a, b odd makes this exact
            std::int64_t K = q8 / 8;
            if (K + 1 > trunc_n) continue;
            std::int64_t r = (a + b) / 2;
            std::int64_t sign = (r % 2 == 0) ? 1 : -1;
            for (std::int64_t j = 0; K + 1 + j <= trunc_n && j < p18.trunc; ++j) {
                if (p18.c[j] == 0) continue;
                acc[{K + 1 + j, r}] += sign * p18.c[j];
            }
        }
    }

    // Normalize by the first nonzero coefficient in (n, r) order.
    detail::int128 lead = 0;
    for (const auto& [key, v] : acc) {
        if (v != 0) {
            lead = v;
            break;
        }
    }
    if (lead == 0) throw std::logic_error("phi_10_1: construction produced the zero form");

    JacobiFormCoeffs phi(10, 1, trunc_n);
    for (const auto& [key, v] : acc) {
        if (v == 0) continue;
        auto [n, r] = key;
        if (4 * n - r * r <= 0)
            throw std::logic_error("phi_10_1: cusp support violated during construction");
        phi.set_coeff(n, r, {double(v) / double(lead), 0.0});
    }
    return phi;
}

double jacobi_pet_norm(const JacobiFormCoeffs& phi, const JacobiPoint& p) {
    std::complex<double> v = phi.eval_scaled(p);
    return std::norm(v) * std::pow(p.tau.eta, double(phi.weight()));
}

double jacobi_pet_norm(std::complex<double> raw_value, double k, int m, const JacobiPoint& p) {
    double eta = p.tau.eta, y = p.z.imag();
    return std::norm(raw_value) * std::pow(eta, k) * std::exp(-4.0 * kPi * m * y * y / eta);
}

namespace {

struct RProfile {
    std::int64_t r_min = 0, r_max = 0;
    // g_r(tau) = sum_n c(n, r) e^{2 pi i n tau}
    std::vector<std::complex<double>> g;

    std::complex<double>& at(std::int64_t r) { return g[static_cast<std::size_t>(r - r_min)]; }
    std::complex<double> at(std::int64_t r) const {
        return g[static_cast<std::size_t>(r - r_min)];
    }
};

RProfile r_profile(const JacobiFormCoeffs& phi, const UpperHalfPoint& tau) {
    RProfile pr;
    if (phi.coeffs().empty()) return pr;
    pr.r_min = pr.r_max = phi.coeffs().begin()->first.second;
    for (const auto& [key, v] : phi.coeffs()) {
        pr.r_min = std::min(pr.r_min, key.second);
        pr.r_max = std::max(pr.r_max, key.second);
    }
    pr.g.assign(static_cast<std::size_t>(pr.r_max - pr.r_min + 1), {0.0, 0.0});
    std::complex<double> t = tau.value();
    for (const auto& [key, v] : phi.coeffs()) {
        auto [n, r] = key;
        pr.at(r) += v * std::exp(std::complex<double>(0.0, 2.0 * kPi * double(n)) * t);
    }
    return pr;
}

// Integral over E_tau = [0,1] x [0,eta] of phi1 conj(phi2) e^{-4 pi m y^2/eta}
// dx dy: midpoint in x (exact once n_x exceeds the zeta-bandwidth), GL4 panels
// in y.
std::complex<double> z_cell_integral(const RProfile& p1, const RProfile& p2, bool same, int m,
                                     const UpperHalfPoint& tau, int n_x, int n_y) {
    double eta = tau.eta;
    std::int64_t r_lo = std::min(p1.r_min, same ? p1.r_min : p2.r_min);
    std::int64_t r_hi = std::max(p1.r_max, same ? p1.r_max : p2.r_max);
    if (p1.g.empty() || (!same && p2.g.empty())) return {0.0, 0.0};

    auto value_at = [&](const RProfile& pr, double x, const std::vector<double>& decay)
        -> std::complex<double> {
        std::complex<double> acc{0.0, 0.0};
        for (std::int64_t r = pr.r_min; r <= pr.r_max; ++r) {
            std::complex<double> gr = pr.at(r);
            if (gr == std::complex<double>{0.0, 0.0}) continue;
            acc += gr * decay[static_cast<std::size_t>(r - r_lo)] * cis(2.0 * kPi * double(r) * x);
        }
        return acc;
    };

    std::complex<double> total{0.0, 0.0};
    double hy = eta / n_y;
    std::vector<double> decay(static_cast<std::size_t>(r_hi - r_lo + 1));
    for (int jy = 0; jy < n_y; ++jy) {
        for (int q = 0; q < 4; ++q) {
            double y = hy * (jy + 0.5 * (1.0 + GaussLegendre4::node[q]));
            double wy = 0.5 * hy * GaussLegendre4::weight[q];
            // Half the Gaussian weight on each factor keeps both bounded.
            for (std::int64_t r = r_lo; r <= r_hi; ++r)
                decay[static_cast<std::size_t>(r - r_lo)] =
                    std::exp(-2.0 * kPi * (double(r) * y + double(m) * y * y / eta));
            std::complex<double> row{0.0, 0.0};
            double hx = 1.0 / n_x;
            for (int jx = 0; jx < n_x; ++jx) {
                double x = (jx + 0.5) * hx;
                std::complex<double> v1 = value_at(p1, x, decay);
                std::complex<double> v2 = same ? v1 : value_at(p2, x, decay);
                row += v1 * std::conj(v2) * hx;
            }
            total += row * wy;
        }
    }
    return total;
}

} // namespace

InnerProductResult jacobi_inner_4d(const JacobiFormCoeffs& phi1, const JacobiFormCoeffs& phi2,
                                   const JacobiQuadrature& quad) {
    if (phi1.weight() != phi2.weight() || phi1.index() != phi2.index())
        throw std::invalid_argument("jacobi_inner_4d: weight and index must match");
    const int m = phi1.index();
    const double k = double(phi1.weight());
    bool same = (&phi1 == &phi2);

    PeterssonQuadrature pq;
    pq.Y_max = quad.Y_max;
    pq.rule = PeterssonQuadrature::Rule::gauss4;

    auto run = [&](int nxi, int neta, int nx, int ny) {
        auto integrand = [&](const UpperHalfPoint& tau) -> std::complex<double> {
            RProfile p1 = r_profile(phi1, tau);
            RProfile p2 = same ? RProfile{} : r_profile(phi2, tau);
            std::complex<double> cell =
                z_cell_integral(p1, same ? p1 : p2, same, m, tau, nx, ny);
            // remaining measure factor eta^k / eta (the engine supplies 1/eta^2)
            return cell * std::pow(tau.eta, k - 1.0);
        };
        return fd_hyperbolic_integral(integrand, pq, nxi, neta);
    };

    std::complex<double> full = run(quad.n_xi, quad.n_eta, quad.n_x, quad.n_y);
    std::complex<double> half =
        run(quad.n_xi / 2, quad.n_eta / 2, std::max(8, quad.n_x / 2), quad.n_y / 2);
    double est = std::abs(full - half);
    if (quad.check_estimate && est > quad.tol * std::max(1e-300, std::abs(full)))
        throw accuracy_error("jacobi_inner_4d: refinement estimate exceeds tolerance", est,
                             quad.tol);
    return {full, est};
}

InnerProductResult jacobi_inner_theta(const ThetaComponentVector& h1,
                                      const ThetaComponentVector& h2,
                                      const JacobiQuadrature& quad) {
    h1.validate();
    h2.validate();
    if (h1.index != h2.index || h1.weight != h2.weight)
        throw std::invalid_argument("jacobi_inner_theta: weight and index must match");
    const int m = h1.index;
    const double k = h1.weight;
    bool same = (&h1 == &h2);

    PeterssonQuadrature pq;
    pq.Y_max = quad.Y_max;
    pq.rule = PeterssonQuadrature::Rule::gauss4;

    auto integrand = [&](const UpperHalfPoint& tau) -> std::complex<double> {
        std::complex<double> s{0.0, 0.0};
        for (int mu = 0; mu < 2 * m; ++mu) {
            std::complex<double> a = eval_qseries(h1.components[mu], tau).value;
            std::complex<double> b = same ? a : eval_qseries(h2.components[mu], tau).value;
            s += a * std::conj(b);
        }
        return s * std::pow(tau.eta, k - 0.5);
    };
    std::complex<double> full = fd_hyperbolic_integral(integrand, pq, quad.n_xi, quad.n_eta);
    std::complex<double> half =
        fd_hyperbolic_integral(integrand, pq, quad.n_xi / 2, quad.n_eta / 2);
    double scale = 1.0 / std::sqrt(4.0 * m);
    double est = std::abs(full - half) * scale;
    if (quad.check_estimate && est > quad.tol * std::max(1e-300, std::abs(full) * scale))
        throw accuracy_error("jacobi_inner_theta: refinement estimate exceeds tolerance", est,
                             quad.tol);
    return {full * scale, est};
}

JacobiSupnormResult jacobi_supnorm_search_fn(
    const std::function<double(const JacobiPoint&)>& norm_fn, double k,
    const JacobiSearchConfig& cfg) {
    double cap = cfg.height_cap > 0.0 ? cfg.height_cap : std::max(2.0, k / (2.0 * kPi));
    auto floor_at = [](double xi) { return std::sqrt(std::max(0.0, 1.0 - xi * xi)); };
    auto point = [](double xi, double eta, double x, double ty) {
        return JacobiPoint{UpperHalfPoint(xi, eta), {x, ty * eta}};
    };

    struct Cell {
        double value, xi, eta, x, ty;
    };
    std::vector<Cell> cells;
    for (int i = 0; i <= cfg.grid_xi; ++i) {
        double xi = -0.5 + double(i) / cfg.grid_xi;
        double lo = floor_at(xi);
        if (lo >= cap) continue;
        for (int j = 0; j <= cfg.grid_eta; ++j) {
            double eta = lo * std::pow(cap / lo, double(j) / cfg.grid_eta);
            for (int ix = 0; ix <= cfg.grid_x; ++ix) {
                double x = double(ix) / cfg.grid_x;
                for (int iy = 0; iy <= cfg.grid_y; ++iy) {
                    double ty = double(iy) / cfg.grid_y;
                    cells.push_back({norm_fn(point(xi, eta, x, ty)), xi, eta, x, ty});
                }
            }
        }
    }
    std::sort(cells.begin(), cells.end(), [](const Cell& l, const Cell& r) {
        if (l.value != r.value) return l.value > r.value;
        if (l.xi != r.xi) return l.xi < r.xi;
        if (l.eta != r.eta) return l.eta < r.eta;
        if (l.x != r.x) return l.x < r.x;
        return l.ty < r.ty;
    });

    Cell best = cells.empty() ? Cell{0.0, 0.0, 1.0, 0.0, 0.0} : cells.front();
    int restarts = std::min<std::size_t>(static_cast<std::size_t>(cfg.restarts), cells.size());
    for (int s = 0; s < restarts; ++s) {
        Cell cur = cells[static_cast<std::size_t>(s)];
        double sxi = 1.0 / cfg.grid_xi, seta = (cap - 1.0) / cfg.grid_eta,
               sx = 1.0 / cfg.grid_x, sty = 1.0 / cfg.grid_y;
        for (int round = 0; round < cfg.refine_rounds; ++round) {
            bool improved = false;
            const double moves[4][4] = {{sxi, 0, 0, 0}, {0, seta, 0, 0}, {0, 0, sx, 0},
                                        {0, 0, 0, sty}};
            for (const auto& mv : moves) {
                for (double sgn : {1.0, -1.0}) {
                    double xi = std::clamp(cur.xi + sgn * mv[0], -0.5, 0.5);
                    double eta = std::clamp(cur.eta + sgn * mv[1], floor_at(xi), cap);
                    double x = std::clamp(cur.x + sgn * mv[2], 0.0, 1.0);
                    double ty = std::clamp(cur.ty + sgn * mv[3], 0.0, 1.0);
                    double v = norm_fn(point(xi, eta, x, ty));
                    if (v > cur.value) {
                        cur = {v, xi, eta, x, ty};
                        improved = true;
                    }
                }
            }
            if (!improved) {
                sxi *= 0.5;
                seta *= 0.5;
                sx *= 0.5;
                sty *= 0.5;
                if (sxi < 1e-9 && seta < 1e-9 && sx < 1e-9 && sty < 1e-9) break;
            }
        }
        if (cur.value > best.value) best = cur;
    }
    return {best.value, JacobiPoint{UpperHalfPoint(best.xi, best.eta), {best.x, best.ty * best.eta}}};
}

JacobiSupnormResult jacobi_supnorm_search(const JacobiFormCoeffs& phi,
                                          const JacobiSearchConfig& cfg) {
    return jacobi_supnorm_search_fn(
        [&](const JacobiPoint& p) { return jacobi_pet_norm(phi, p); }, double(phi.weight()),
        cfg);
}

ChainCheck cauchy_schwarz_chain_check(const ThetaComponentVector& h, double k, int m,
                                      const JacobiPoint& p) {
    h.validate();
    if (h.index != m) throw std::invalid_argument("cauchy_schwarz_chain_check: index mismatch");
    double eta = p.tau.eta;
    std::complex<double> phi_scaled{0.0, 0.0};
    KahanSum sum_h, sum_theta;
    for (int mu = 0; mu < 2 * m; ++mu) {
        std::complex<double> hv = eval_qseries(h.components[mu], p.tau).value;
        std::complex<double> tv = theta_eval_scaled(mu, m, p).value;
        phi_scaled += hv * tv;
        sum_h.add(std::norm(hv) * std::pow(eta, k - 0.5));
        sum_theta.add(std::norm(tv) * std::sqrt(eta));
    }
    double lhs = std::norm(phi_scaled) * std::pow(eta, k);
    double rhs = sum_h.value() * sum_theta.value();
    return {lhs, rhs, rhs - lhs};
}

} // namespace supnorm

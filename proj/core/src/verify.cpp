#include "supnorm/verify.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "supnorm/errors.hpp"
#include "supnorm/io.hpp"
#include "supnorm/numeric.hpp"

namespace supnorm {

namespace {

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double rel_diff(double a, double b) {
    double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

struct Sampler {
    std::mt19937_64 rng;
    explicit Sampler(std::uint64_t seed) : rng(seed) {}

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    }
    int uniform_int(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    }
    UpperHalfPoint tau_in_domain(double eta_lo = 0.87, double eta_hi = 1.8) {
        return {uniform(-0.5, 0.5), uniform(eta_lo, eta_hi)};
    }
};

} // namespace

QSeries one_dimensional_cusp_form(double k, std::int64_t trunc) {
    auto ik = static_cast<std::int64_t>(k);
    if (double(ik) != k) throw std::invalid_argument("one_dimensional_cusp_form: integer k only");
    QSeries delta = delta_series(trunc);
    switch (ik) {
        case 12: return delta;
        case 16: return delta * eisenstein_series(4, trunc);
        case 18: return delta * eisenstein_series(6, trunc);
        case 20: {
            QSeries e4 = eisenstein_series(4, trunc);
            return delta * e4 * e4;
        }
        case 22: return delta * eisenstein_series(4, trunc) * eisenstein_series(6, trunc);
        case 26: {
            QSeries e4 = eisenstein_series(4, trunc);
            return delta * e4 * e4 * eisenstein_series(6, trunc);
        }
        default:
            throw std::invalid_argument(
                "one_dimensional_cusp_form: weight must be one of 12, 16, 18, 20, 22, 26");
    }
}

std::vector<GroupElement> cocycle_sample(std::uint64_t seed, int count,
                                         const UpperHalfPoint& tau) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> word_len(1, 3), shift(-3, 3);
    std::vector<GroupElement> out;
    std::set<std::array<std::int64_t, 4>> seen;
    int attempts = 0;
    while (static_cast<int>(out.size()) < count && attempts < 200000) {
        ++attempts;
        GroupElement g = GroupElement::translation(shift(rng));
        int len = word_len(rng);
        for (int i = 0; i < len; ++i)
            g = g * GroupElement::inversion() * GroupElement::translation(shift(rng));
        std::complex<double> den(double(g.c) * tau.xi + double(g.d), double(g.c) * tau.eta);
        double u = std::norm(den);
        if (u < 1.0 / 3.0 || u > 3.0) continue;
        if (g == GroupElement::identity()) continue;
        if (!seen.insert({g.a, g.b, g.c, g.d}).second) continue;
        out.push_back(g);
    }
    return out;
}

SweepRow normalized_sup_row(double k, const GroupData& group, std::int64_t trunc,
                            const SupnormSearchConfig& search, const PeterssonQuadrature& quad) {
    QSeries f = one_dimensional_cusp_form(k, trunc);
    double inner = petersson_inner(f, f, k, quad).value.real();
    SupnormResult raw = supnorm_search(f, k, search);
    double measured = raw.sup / inner;
    return {k, inner, measured, raw.argmax, prop3_rhs(k, group, raw.argmax),
            sup_bound_rhs_at_truncation_height(k, group)};
}

NormalizedJacobiForm normalized_phi_10_1(const JacobiQuadrature& quad, std::int64_t trunc_n) {
    JacobiFormCoeffs phi = phi_10_1(trunc_n);
    ThetaComponentVector h = extract_h_mu(phi);
    double raw = jacobi_inner_theta(h, h, quad).value.real();
    if (!(raw > 0.0)) throw std::logic_error("normalized_phi_10_1: nonpositive norm");
    double s = 1.0 / std::sqrt(raw);
    ThetaComponentVector hn;
    hn.index = h.index;
    hn.weight = h.weight;
    for (const auto& c : h.components) hn.components.push_back(c * std::complex<double>{s, 0.0});
    return {phi.scaled_by({s, 0.0}), std::move(hn), raw};
}

std::string VerifyReport::to_csv() const {
    std::ostringstream os;
    os << "name,pass,lhs,rhs,detail\n";
    for (const auto& c : checks)
        os << c.name << ',' << (c.pass ? 1 : 0) << ',' << format_double(c.lhs) << ','
           << format_double(c.rhs) << ',' << '"' << c.detail << '"' << '\n';
    return os.str();
}

namespace {

struct Runner {
    const VerifyConfig& cfg;
    VerifyReport& report;
    GroupData group = make_sl2z_group_data();

    void add(const std::string& name, bool pass, double lhs, double rhs,
             const std::string& detail, double secs) {
        report.checks.push_back({name, pass, lhs, rhs, detail, secs});
        report.ok = report.ok && pass;
    }

    template <typename F>
    void run(const std::string& name, F&& body) {
        auto t0 = Clock::now();
        try {
            auto [pass, lhs, rhs, detail] = body();
            add(name, pass, lhs, rhs, detail, seconds_since(t0));
        } catch (const std::exception& e) {
            add(name, false, 0.0, 0.0, std::string("exception: ") + e.what(),
                seconds_since(t0));
        }
    }
};

using CheckTuple = std::tuple<bool, double, double, std::string>;

} // namespace

VerifyReport run_verify(const VerifyConfig& cfg) {
    VerifyReport report;
    Runner R{cfg, report};
    const bool quick = cfg.quick;
    const GroupData& group = R.group;
    const double r_gamma = group.injectivity_radius;

    // ---- hyperbolic module -------------------------------------------------

    R.run("displacement_mobius_invariance", [&]() -> CheckTuple {
        Sampler s(cfg.seed + 1);
        double worst = 0.0;
        int n = quick ? 10 : 50;
        for (int i = 0; i < n; ++i) {
            UpperHalfPoint a(s.uniform(-2, 2), s.uniform(0.2, 3.0));
            UpperHalfPoint b(s.uniform(-2, 2), s.uniform(0.2, 3.0));
            GroupElement g = GroupElement::translation(s.uniform_int(-3, 3));
            int len = s.uniform_int(1, 4);
            for (int j = 0; j < len; ++j)
                g = g * GroupElement::inversion() * GroupElement::translation(s.uniform_int(-3, 3));
            worst = std::max(worst, rel_diff(displacement(mobius_apply(g, a), mobius_apply(g, b)),
                                             displacement(a, b)));
        }
        return {worst <= 1e-10, worst, 1e-10, "max relative drift"};
    });

    R.run("displacement_distance_consistency", [&]() -> CheckTuple {
        Sampler s(cfg.seed + 2);
        double worst = 0.0;
        for (int i = 0; i < (quick ? 10 : 50); ++i) {
            UpperHalfPoint a = s.tau_in_domain(0.3, 4.0), b = s.tau_in_domain(0.3, 4.0);
            double d = hyp_distance(a, b);
            double c = std::cosh(0.5 * d);
            worst = std::max(worst, rel_diff(c * c, displacement(a, b)));
        }
        return {worst <= 1e-12, worst, 1e-12, "cosh^2(d/2) vs sigma"};
    });

    R.run("reduction_oracle", [&]() -> CheckTuple {
        Sampler s(cfg.seed + 3);
        double worst = 0.0;
        bool ok = true;
        for (int i = 0; i < (quick ? 8 : 25); ++i) {
            UpperHalfPoint tau(s.uniform(-8, 8), s.uniform(0.05, 4.0));
            ReducedPoint red = reduce_to_fundamental_domain(tau);
            ok = ok && std::abs(red.point.xi) <= 0.5 + 1e-12 &&
                 red.point.xi * red.point.xi + red.point.eta * red.point.eta >= 1.0 - 1e-12;
            UpperHalfPoint mapped = mobius_apply(red.map, tau);
            worst = std::max(worst, std::abs(mapped.value() - red.point.value()));
            // brute-force oracle: the reduced height is the maximum of
            // eta/|c tau + d|^2 over coprime |c|,|d| <= 50
            if (i < 5) {
                double best = 0.0;
                for (int c = -50; c <= 50; ++c)
                    for (int d = -50; d <= 50; ++d) {
                        if (std::gcd(std::abs(c), std::abs(d)) != 1) continue;
                        double u = std::norm(std::complex<double>(c * tau.xi + d, c * tau.eta));
                        best = std::max(best, tau.eta / u);
                    }
                ok = ok && rel_diff(best, red.point.eta) <= 1e-9;
            }
            ReducedPoint again = reduce_to_fundamental_domain(red.point);
            ok = ok && again.map == GroupElement::identity();
        }
        return {ok && worst <= 1e-12, worst, 1e-12, "map*tau vs reduced point"};
    });

    // ---- arithmetic module -------------------------------------------------

    R.run("enumeration_completeness", [&]() -> CheckTuple {
        int grid = quick ? 2 : 5;
        std::int64_t entry_bound = 60;
        bool ok = true;
        std::size_t total = 0;
        for (int i = 0; i < grid && ok; ++i) {
            for (int j = 0; j < grid && ok; ++j) {
                UpperHalfPoint tau(-0.4 + 0.8 * double(i) / std::max(1, grid - 1),
                                   0.9 + 0.9 * double(j) / std::max(1, grid - 1));
                double R = 4.0;
                auto fast = enumerate_elements(tau, EnumerationBudget::by_displacement(R));
                auto brute = enumerate_elements(tau, EnumerationBudget::by_max_entry(entry_bound));
                std::vector<GroupElement> filtered;
                for (const auto& g : brute)
                    if (displacement(tau, mobius_apply(g, tau)) <= R) filtered.push_back(g);
                ok = fast == filtered;
                total += fast.size();
            }
        }
        return {ok, double(total), 0.0, "fast enumeration vs entry scan, sigma <= 4"};
    });

    R.run("counting_monotone", [&]() -> CheckTuple {
        UpperHalfPoint tau(0.0, 2.0);
        long prev = -1;
        bool ok = true;
        for (double rho = 0.0; rho <= 4.0; rho += 0.25) {
            long n = counting_function(tau, rho, group);
            ok = ok && n >= prev;
            prev = n;
        }
        return {ok, double(prev), 0.0, "N(tau; rho) nondecreasing on the ladder"};
    });

    R.run("counting_inequality_margins", [&]() -> CheckTuple {
        Sampler s(cfg.seed + 4);
        const double ks[4] = {5, 8, 12, 20};
        const double deltas[3] = {0.5 * r_gamma, r_gamma, 2.0 * r_gamma};
        double worst = 1e300;
        int n = quick ? 6 : 20;
        for (int i = 0; i < n; ++i) {
            UpperHalfPoint tau = s.tau_in_domain();
            double k = ks[i % 4], delta = deltas[i % 3];
            double lhs = jl_lhs_truncated(k, tau, 6.0);
            double rhs = jl_rhs(k, delta, r_gamma, group.center_order, tau, group);
            worst = std::min(worst, rhs - lhs);
        }
        return {worst >= -1e-10, worst, -1e-10, "min margin over samples"};
    });

    R.run("imported_bound_tail_integral", [&]() -> CheckTuple {
        Sampler s(cfg.seed + 5);
        double worst = 1e300;
        const double ks[6] = {5, 6.5, 8, 12, 20, 26};
        for (int i = 0; i < 20; ++i) {
            double k = ks[i % 6];
            double r = s.uniform(0.4, 2.0);
            double delta = (i % 4 == 0) ? 0.0 : s.uniform(0.0, 2.0);
            IntegralCheck c = prop1_eqn4_check(k, delta, r);
            worst = std::min(worst, c.margin);
        }
        return {worst >= -1e-10, worst, -1e-10, "min margin over samples"};
    });

    R.run("imported_bound_parabolic_sum", [&]() -> CheckTuple {
        Sampler s(cfg.seed + 6);
        double worst = 1e300;
        const double ks[4] = {5, 8, 12, 20};
        for (int i = 0; i < 20; ++i) {
            UpperHalfPoint a(s.uniform(-0.5, 0.5), s.uniform(0.6, 3.0));
            UpperHalfPoint b(s.uniform(-0.5, 0.5), s.uniform(0.6, 3.0));
            IntegralCheck c = prop3_eqn5_check(ks[i % 4], a, b);
            worst = std::min(worst, c.margin);
        }
        return {worst >= -1e-10, worst, -1e-10, "min margin over samples"};
    });

    R.run("index_oracle", [&]() -> CheckTuple {
        bool ok = true;
        std::ostringstream detail;
        for (std::int64_t m = 1; m <= 6; ++m) {
            std::int64_t formula = index_gamma01(m);
            std::int64_t counted = coset_count_bruteforce(m);
            std::int64_t with_phi_m = index_gamma0(4 * m) * euler_phi(m);
            ok = ok && formula == counted;
            if (m <= 3)
                detail << "m=" << m << ":phi(4m)-form=" << formula << ",oracle=" << counted
                       << ",phi(m)-form=" << with_phi_m << ";";
        }
        detail << "phi(4m) version matches the coset oracle";
        return {ok, 0.0, 0.0, detail.str()};
    });

    // ---- qseries module ----------------------------------------------------

    R.run("eisenstein_divisor_oracle", [&]() -> CheckTuple {
        QSeries e4 = eisenstein_series(4, cfg.trunc), e6 = eisenstein_series(6, cfg.trunc);
        double worst = 0.0;
        for (std::int64_t n = 1; n < cfg.trunc; ++n) {
            double s3 = 0, s5 = 0;
            for (std::int64_t d = 1; d <= n; ++d)
                if (n % d == 0) {
                    s3 += std::pow(double(d), 3);
                    s5 += std::pow(double(d), 5);
                }
            worst = std::max(worst, rel_diff(e4.coeff(n).real(), 240.0 * s3));
            worst = std::max(worst, rel_diff(e6.coeff(n).real(), -504.0 * s5));
        }
        bool consts = e4.coeff(0) == std::complex<double>{1, 0} &&
                      e6.coeff(0) == std::complex<double>{1, 0};
        return {consts && worst <= 1e-12, worst, 1e-12, "divisor sums"};
    });

    R.run("ring_consistency", [&]() -> CheckTuple {
        QSeries delta = delta_series(cfg.trunc);
        QSeries eta24 = eta_power(24, cfg.trunc);
        double worst = 0.0;
        for (std::int64_t n = 0; n < cfg.trunc; ++n)
            worst = std::max(worst, rel_diff(delta.coeff(n).real(), eta24.coeff(24 * n).real()));
        return {worst <= 1e-12, worst, 1e-12, "delta vs eta^24 coefficients"};
    });

    R.run("eta_cube_pattern", [&]() -> CheckTuple {
        QSeries eta3 = eta_power(3, 30);
        // eta^3 = sum (-1)^n (2n+1) q^{(2n+1)^2/8}; exponents (2n+1)^2 * 3/24
        double worst = 0.0;
        KahanSum mass;
        for (const auto& [num, v] : eta3.coeffs()) mass.add(std::abs(v));
        double expected_mass = 0.0;
        for (std::int64_t n = 0;; ++n) {
            std::int64_t num = 3 * (2 * n + 1) * (2 * n + 1);
            if (num >= eta3.trunc_num()) break;
            double want = (n % 2 ? -1.0 : 1.0) * double(2 * n + 1);
            worst = std::max(worst, std::abs(eta3.coeff(num).real() - want));
            expected_mass += std::abs(want);
        }
        bool sparse = rel_diff(mass.value(), expected_mass) <= 1e-12;
        return {worst <= 1e-12 && sparse, worst, 1e-12, "odd-square support and signs"};
    });

    R.run("modularity_cocycle", [&]() -> CheckTuple {
        UpperHalfPoint tau0(0.0, 1.7);
        auto gs = cocycle_sample(cfg.seed + 7, quick ? 12 : 50, tau0);
        QSeries delta = delta_series(cfg.trunc);
        QSeries e4 = eisenstein_series(4, cfg.trunc), e6 = eisenstein_series(6, cfg.trunc);
        struct Form {
            QSeries f;
            double k;
        };
        std::vector<Form> forms;
        forms.push_back({delta, 12});
        forms.push_back({delta * e4, 16});
        forms.push_back({delta * e6, 18});
        forms.push_back({delta * e4 * e6, 22});
        forms.push_back({delta * e4 * e4, 20});
        forms.push_back({delta * delta, 24});
        double worst = 0.0;
        for (const auto& [f, k] : forms) {
            double base = std::abs(eval_qseries(f, tau0).value);
            for (const auto& g : gs) {
                UpperHalfPoint gt = mobius_apply(g, tau0);
                double lhs = std::abs(eval_qseries(f, gt).value);
                double u = std::abs(std::complex<double>(double(g.c) * tau0.xi + double(g.d),
                                                         double(g.c) * tau0.eta));
                double rhs = std::pow(u, k) * base;
                worst = std::max(worst, rel_diff(lhs, rhs));
            }
        }
        return {worst <= 1e-9, worst, 1e-9, "cocycle identity across built forms"};
    });

    R.run("petersson_dual_rule", [&]() -> CheckTuple {
        QSeries delta = delta_series(cfg.trunc);
        PeterssonQuadrature a;
        a.rule = PeterssonQuadrature::Rule::gauss4;
        a.n_xi = quick ? 32 : 64;
        a.n_eta = quick ? 48 : 96;
        a.check_estimate = false;
        PeterssonQuadrature b;
        b.rule = PeterssonQuadrature::Rule::simpson;
        b.n_xi = quick ? 256 : 512;
        b.n_eta = quick ? 320 : 640;
        b.check_estimate = false;
        double va = petersson_inner(delta, delta, 12.0, a).value.real();
        double vb = petersson_inner(delta, delta, 12.0, b).value.real();
        double rd = rel_diff(va, vb);
        return {rd <= 1e-8, rd, 1e-8, "gauss4 vs simpson, <Delta,Delta> = " + format_double(va)};
    });

    R.run("quadrature_richardson", [&]() -> CheckTuple {
        QSeries delta = delta_series(cfg.trunc);
        PeterssonQuadrature ref;
        ref.rule = PeterssonQuadrature::Rule::gauss4;
        ref.n_xi = 64;
        ref.n_eta = 96;
        ref.check_estimate = false;
        double truth = petersson_inner(delta, delta, 12.0, ref).value.real();
        auto mid = [&](int n) {
            PeterssonQuadrature q;
            q.rule = PeterssonQuadrature::Rule::midpoint;
            q.n_xi = n;
            q.n_eta = n;
            q.check_estimate = false;
            return petersson_inner(delta, delta, 12.0, q).value.real();
        };
        double e1 = std::abs(mid(50) - truth), e2 = std::abs(mid(100) - truth);
        double ratio = e1 / std::max(e2, 1e-300);
        bool ok = ratio >= 2.0 && ratio <= 8.0; // order 2 within a factor 2
        return {ok, ratio, 4.0, "midpoint error ratio under refinement"};
    });

    R.run("aux_profile", [&]() -> CheckTuple {
        auto [eta0, maxv] = aux_weight_profile_max(11.5);
        double h = 1e-6;
        auto profile = [&](double eta) { return std::pow(eta, 12.0) * std::exp(-4.0 * kPi * eta); };
        double deriv = (profile(eta0 + h) - profile(eta0 - h)) / (2.0 * h * maxv);
        bool monotone = true;
        double prev = profile(eta0);
        for (double eta = eta0 * 1.05; eta < eta0 * 8; eta *= 1.17) {
            double cur = profile(eta);
            monotone = monotone && cur < prev;
            prev = cur;
        }
        bool at = rel_diff(eta0, 12.0 / (4.0 * kPi)) <= 1e-15;
        return {std::abs(deriv) <= 1e-6 && monotone && at, std::abs(deriv), 1e-6,
                "stationary and decreasing past eta0"};
    });

    R.run("gamma_ratio_brackets", [&]() -> CheckTuple {
        bool ok = true;
        for (double k = 5; k <= 10000; k *= 1.37) {
            double v = std::sqrt(k) * gamma_ratio(k);
            ok = ok && v >= 1.0 && v <= 2.0;
        }
        double asym = std::sqrt(10000.0) * gamma_ratio(10000.0);
        ok = ok && std::abs(asym - std::sqrt(2.0)) <= 0.01 * std::sqrt(2.0);
        return {ok, asym, std::sqrt(2.0), "sqrt(k) Gamma((k-1)/2)/Gamma(k/2)"};
    });

    // ---- theta / jacobi module ----------------------------------------------

    R.run("theta_identities", [&]() -> CheckTuple {
        Sampler s(cfg.seed + 8);
        double worst = 0.0;
        for (int i = 0; i < (quick ? 6 : 20); ++i) {
            int m = 1 + (i % 4);
            int mu = s.uniform_int(0, 2 * m - 1);
            JacobiPoint p{s.tau_in_domain(0.7, 2.0), {s.uniform(0, 1), s.uniform(-0.8, 0.8)}};
            std::complex<double> lhs = theta_eval(mu, m, p).value;
            JacobiPoint shifted{p.tau,
                                p.z - double(mu) * p.tau.value() / (2.0 * double(m))};
            std::complex<double> factor =
                std::exp(std::complex<double>(0.0, kPi) *
                         (double(mu) * double(mu) * p.tau.value() / (2.0 * double(m)) -
                          2.0 * double(mu) * p.z));
            std::complex<double> rhs = theta_eval(0, m, shifted).value * factor;
            worst = std::max(worst, rel_diff(std::abs(lhs), std::abs(rhs)));
            worst = std::max(worst, std::abs(lhs - rhs) /
                                        std::max(1e-300, std::abs(lhs)));
            // z -> z + 1 only rotates by e^{-2 pi i mu}
            JacobiPoint plus1{p.tau, p.z + 1.0};
            std::complex<double> rot = theta_eval(mu, m, plus1).value;
            worst = std::max(worst, rel_diff(std::abs(rot), std::abs(lhs)));
            // closed form for the pointwise norm
            double n1 = theta_pet_norm(mu, m, p);
            double y = p.z.imag(), eta = p.tau.eta;
            double yshift = y - double(mu) * eta / (2.0 * double(m));
            double n2 = std::norm(theta_eval(0, m, shifted).value) * std::sqrt(eta) *
                        std::exp(-4.0 * kPi * double(m) * yshift * yshift / eta);
            worst = std::max(worst, rel_diff(n1, n2));
        }
        return {worst <= 1e-11, worst, 1e-11, "mu-shift, z-periodicity, norm closed form"};
    });

    R.run("theta_lattice_invariance", [&]() -> CheckTuple {
        Sampler s(cfg.seed + 9);
        double worst = 0.0;
        for (int i = 0; i < (quick ? 6 : 16); ++i) {
            int m = 1 + (i % 8);
            JacobiPoint p{s.tau_in_domain(0.7, 2.0), {s.uniform(0, 1), s.uniform(0, 1.2)}};
            auto agg = [&](const JacobiPoint& q) {
                KahanSum sum;
                for (int mu = 0; mu < 2 * m; ++mu) sum.add(theta_pet_norm(mu, m, q));
                return sum.value();
            };
            double base = agg(p);
            worst = std::max(worst, rel_diff(base, agg({p.tau, p.z + 1.0})));
            worst = std::max(worst, rel_diff(base, agg({p.tau, p.z + p.tau.value()})));
        }
        return {worst <= 1e-10, worst, 1e-10, "sum_mu norm^2 under z -> z+1, z -> z+tau"};
    });

    R.run("theta_sum_bound_grid", [&]() -> CheckTuple {
        double worst = 1e300;
        int n = quick ? 4 : 10;
        for (int m = 1; m <= 8; ++m) {
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    for (int c = 0; c < n; ++c)
                        for (int d = 0; d < n; ++d) {
                            double xi = -0.5 + (a + 0.5) / n;
                            double eta = 0.87 * std::pow(3.0 / 0.87, (b + 0.5) / n);
                            double x = (c + 0.5) / n;
                            double y = eta * (d + 0.5) / n;
                            ThetaSumBound r =
                                theta_sum_bound_check(m, {UpperHalfPoint(xi, eta), {x, y}});
                            worst = std::min(worst, r.margin);
                        }
        }
        // large-height limit: lhs/(2m sqrt(eta)) -> 1 from below
        bool limit_ok = true;
        for (double eta : {10.0, 100.0}) {
            ThetaSumBound r = theta_sum_bound_check(2, {UpperHalfPoint(0.1, eta), {0.3, 0.0}});
            double ratio = r.lhs / (4.0 * std::sqrt(eta));
            limit_ok = limit_ok && ratio <= 1.0 && ratio >= 1.0 - 2.0 / std::sqrt(eta);
        }
        return {worst >= 0.0 && limit_ok, worst, 0.0, "min margin over the (m, xi, eta, x, y) grid"};
    });

    R.run("phi_support_discriminant", [&]() -> CheckTuple {
        JacobiFormCoeffs phi = phi_10_1(quick ? 12 : 24);
        bool support = true;
        double worst = 0.0;
        std::map<std::pair<std::int64_t, std::int64_t>, std::complex<double>> classes;
        for (const auto& [key, v] : phi.coeffs()) {
            auto [n, r] = key;
            support = support && (4 * n - r * r > 0);
            std::pair<std::int64_t, std::int64_t> cls{4 * n - r * r, ((r % 2) + 2) % 2};
            auto it = classes.find(cls);
            if (it == classes.end())
                classes[cls] = v;
            else
                worst = std::max(worst, std::abs(it->second - v) / std::max(1.0, std::abs(v)));
        }
        bool lead = phi.coeff(1, -1) == std::complex<double>{1.0, 0.0};
        return {support && lead && worst <= 1e-10, worst, 1e-10,
                "cusp support, normalization, discriminant classes"};
    });

    R.run("extract_roundtrip", [&]() -> CheckTuple {
        JacobiFormCoeffs phi = phi_10_1(quick ? 12 : 24);
        ThetaComponentVector h = extract_h_mu(phi);
        Sampler s(cfg.seed + 10);
        double worst = 0.0;
        for (int i = 0; i < (quick ? 6 : 20); ++i) {
            JacobiPoint p{s.tau_in_domain(0.85, 1.8), {s.uniform(0, 1), s.uniform(0, 1.0)}};
            std::complex<double> direct = phi.eval(p);
            std::complex<double> assembled = assemble_jacobi(h, p);
            worst = std::max(worst, std::abs(direct - assembled) /
                                        std::max(1e-300, std::abs(direct)));
        }
        return {worst <= 1e-10, worst, 1e-10, "assemble(extract(phi)) vs phi"};
    });

    R.run("jacobi_invariance", [&]() -> CheckTuple {
        JacobiFormCoeffs phi = phi_10_1(24);
        Sampler s(cfg.seed + 11);
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            JacobiPoint p{UpperHalfPoint(s.uniform(-0.45, 0.45), s.uniform(0.9, 1.6)),
                          {s.uniform(0, 1), s.uniform(0, 1.4)}};
            double base = jacobi_pet_norm(phi, p);
            // tau -> tau + 1
            worst = std::max(worst, rel_diff(base, jacobi_pet_norm(
                phi, {UpperHalfPoint(p.tau.xi + 1.0, p.tau.eta), p.z})));
            // (tau, z) -> (-1/tau, z/tau)
            std::complex<double> t = p.tau.value();
            std::complex<double> ti = -1.0 / t;
            worst = std::max(worst, rel_diff(base, jacobi_pet_norm(
                phi, {UpperHalfPoint(ti), p.z / t})));
            // z -> z + lambda tau + mu
            for (int lam = -1; lam <= 1; ++lam)
                for (int mu = -1; mu <= 1; ++mu)
                    worst = std::max(
                        worst, rel_diff(base, jacobi_pet_norm(
                                             phi, {p.tau, p.z + double(lam) * t + double(mu)})));
        }
        return {worst <= 1e-8, worst, 1e-8, "group and lattice invariance of the norm"};
    });

    R.run("inner_product_two_route", [&]() -> CheckTuple {
        JacobiFormCoeffs phi = phi_10_1(24);
        ThetaComponentVector h = extract_h_mu(phi);
        JacobiQuadrature q;
        if (quick) {
            q.n_xi = 12;
            q.n_eta = 16;
            q.n_x = 16;
            q.n_y = 16;
        }
        q.check_estimate = false;
        InnerProductResult four = jacobi_inner_4d(phi, phi, q);
        InnerProductResult theta = jacobi_inner_theta(h, h, q);
        double rd = rel_diff(four.value.real(), theta.value.real());
        return {rd <= 1e-5, rd, 1e-5,
                "4d = " + format_double(four.value.real()) +
                    ", theta = " + format_double(theta.value.real())};
    });

    R.run("cauchy_schwarz_chain", [&]() -> CheckTuple {
        JacobiFormCoeffs phi = phi_10_1(24);
        ThetaComponentVector h = extract_h_mu(phi);
        Sampler s(cfg.seed + 12);
        double worst = 1e300;
        for (int i = 0; i < 50; ++i) {
            JacobiPoint p{s.tau_in_domain(0.87, 2.2), {s.uniform(0, 1), s.uniform(0, 1.5)}};
            ChainCheck c = cauchy_schwarz_chain_check(h, 10.0, 1, p);
            worst = std::min(worst, c.margin);
        }
        // single-component equality case
        ThetaComponentVector single;
        single.index = 1;
        single.weight = 10.0;
        QSeries one(4, 9, 9.5, 4);
        one.set_coeff(4, {1.0, 0.0});
        QSeries zero(4, 9, 9.5, 4);
        single.components = {one, zero};
        ChainCheck eq = cauchy_schwarz_chain_check(single, 10.0, 1,
                                                   {UpperHalfPoint(0.13, 1.2), {0.3, 0.5}});
        bool eq_ok = rel_diff(eq.lhs, eq.rhs) <= 1e-12;
        return {worst >= -1e-10 && eq_ok, worst, -1e-10, "min margin over 50 points"};
    });

    // ---- bounds module -----------------------------------------------------

    R.run("bergman_delta_oracle", [&]() -> CheckTuple {
        QSeries delta = delta_series(cfg.trunc);
        PeterssonQuadrature pq;
        pq.rule = PeterssonQuadrature::Rule::gauss4;
        pq.n_xi = quick ? 32 : 64;
        pq.n_eta = quick ? 48 : 96;
        pq.check_estimate = false;
        double ip = petersson_inner(delta, delta, 12.0, pq).value.real();
        BergmanConfig bc;
        bc.k = 12.0;
        bc.tail_tol = 1e-6;
        double worst = 0.0;
        bool ok = true;
        std::ostringstream detail;
        for (const UpperHalfPoint tau : {UpperHalfPoint(0.0, 1.0), UpperHalfPoint(0.0, 2.0),
                                         UpperHalfPoint(0.5, 1.2)}) {
            BergmanValue b = bergman_diag_series(tau, group, bc);
            double oracle = petersson_norm_point(delta, 12.0, tau) / ip;
            double err = std::abs(b.value - oracle);
            double allowed = b.tail_bound + 1e-3 * oracle;
            ok = ok && err <= allowed && b.value >= -b.tail_bound;
            worst = std::max(worst, err / std::max(1e-300, oracle));
            detail << format_double(b.value) << "~" << format_double(oracle) << ";";
        }
        return {ok, worst, 1e-3, detail.str()};
    });

    R.run("sup_bound_sweep", [&]() -> CheckTuple {
        PeterssonQuadrature quad;
        quad.rule = PeterssonQuadrature::Rule::gauss4;
        quad.n_xi = quick ? 24 : 48;
        quad.n_eta = quick ? 32 : 64;
        quad.check_estimate = false;
        SupnormSearchConfig search;
        search.grid_xi = quick ? 48 : 128;
        search.grid_eta = quick ? 48 : 128;
        double worst = 1e300;
        std::vector<double> logk, logs;
        std::ostringstream detail;
        for (double k : {12.0, 16.0, 18.0, 20.0, 22.0, 26.0}) {
            SweepRow row = normalized_sup_row(k, group, cfg.trunc, search, quad);
            worst = std::min(worst, row.prop3_at_argmax - row.measured_sup);
            worst = std::min(worst, row.thm4_rhs - row.measured_sup);
            logk.push_back(std::log(k));
            logs.push_back(std::log(row.measured_sup));
            detail << "k=" << k << ":" << format_double(row.measured_sup) << ";";
        }
        double slope = ls_slope(logk, logs);
        detail << "slope=" << format_double(slope);
        bool ok = worst >= 0.0 && slope <= 1.7;
        return {ok, worst, 0.0, detail.str()};
    });

    R.run("sup_scaling_slope", [&]() -> CheckTuple {
        // recomputed from the sweep detail is enough; keep an independent,
        // cheaper consistency probe on three weights
        PeterssonQuadrature quad;
        quad.rule = PeterssonQuadrature::Rule::gauss4;
        quad.n_xi = 24;
        quad.n_eta = 32;
        quad.check_estimate = false;
        SupnormSearchConfig search;
        search.grid_xi = 64;
        search.grid_eta = 64;
        std::vector<double> lk, ls;
        for (double k : {12.0, 18.0, 26.0}) {
            SweepRow row = normalized_sup_row(k, group, cfg.trunc, search, quad);
            lk.push_back(std::log(k));
            ls.push_back(std::log(row.measured_sup));
        }
        double slope = ls_slope(lk, ls);
        return {slope <= 1.7, slope, 1.7, "three-point slope"};
    });

    R.run("jacobi_chain", [&]() -> CheckTuple {
        JacobiQuadrature q;
        if (quick) {
            q.n_xi = 16;
            q.n_eta = 20;
        }
        q.check_estimate = false;
        NormalizedJacobiForm nf = normalized_phi_10_1(q);
        Thm11Options opts;
        opts.quad = q;
        if (quick) {
            opts.search.grid_xi = 12;
            opts.search.grid_eta = 14;
            opts.search.grid_x = 8;
            opts.search.grid_y = 12;
        }
        BoundReport rep = thm11_report(nf.h, 10.0, 1, opts);
        double mass = theta_component_l2_mass(nf.h, q);
        double expected = std::sqrt(4.0) * double(index_gamma01(1));
        double mass_err = rel_diff(mass, expected);
        bool ok = rep.margin() >= 0.0 && mass_err <= 1e-5;
        return {ok, rep.margin(), 0.0,
                "lhs=" + format_double(rep.lhs_measured) + ",rhs=" +
                    format_double(rep.rhs_bound) + ",l2mass=" + format_double(mass)};
    });

    R.run("auxlem_aggregate", [&]() -> CheckTuple {
        JacobiQuadrature q;
        q.check_estimate = false;
        if (quick) {
            q.n_xi = 16;
            q.n_eta = 20;
        }
        NormalizedJacobiForm nf = normalized_phi_10_1(q);
        SupnormSearchConfig scfg;
        scfg.height_cap = 2.0;
        auto aggregate = [&](const UpperHalfPoint& tau) {
            KahanSum s;
            for (const auto& c : nf.h.components)
                s.add(petersson_norm_point(c, 9.5, tau) * std::sqrt(tau.eta));
            return s.value();
        };
        double measured = supnorm_search_fn(aggregate, 9.5, scfg).sup;
        double mass = theta_component_l2_mass(nf.h, q);
        BoundReport rep = auxlem_report(9.5, group, measured, mass);
        return {rep.margin() >= 0.0, rep.margin(), 0.0,
                "measured=" + format_double(measured) + ",rhs=" + format_double(rep.rhs_bound)};
    });

    if (cfg.include_determinism) {
        R.run("determinism", [&]() -> CheckTuple {
            VerifyConfig sub = cfg;
            sub.quick = true;
            sub.include_determinism = false;
            std::string a = run_verify(sub).to_csv();
            std::string b = run_verify(sub).to_csv();
            return {a == b, double(a.size()), double(b.size()),
                    a == b ? "byte-identical re-run" : "re-run diverged"};
        });
    }

    return report;
}

} // namespace supnorm

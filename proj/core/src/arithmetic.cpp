#include "supnorm/arithmetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "supnorm/errors.hpp"
#include "supnorm/numeric.hpp"

namespace supnorm {

namespace {

struct ExtGcd {
    std::int64_t g, x, y; // x*a + y*b = g
};

ExtGcd ext_gcd(std::int64_t a, std::int64_t b) {
    if (b == 0) return {a, 1, 0};
    ExtGcd r = ext_gcd(b, a % b);
    return {r.g, r.y, r.x - (a / b) * r.y};
}

double cosh_pow_neg_k(double rho_half_arg, double k) {
    // cosh^-k(x) evaluated as exp(-k log cosh x); stable for large x.
    double x = std::abs(rho_half_arg);
    // log cosh x = x + log1p(e^{-2x}) - log 2
    double lc = x + std::log1p(std::exp(-2.0 * x)) - std::log(2.0);
    return std::exp(-k * lc);
}

} // namespace

void GroupData::validate() const {
    if (!(injectivity_radius > 0.0))
        throw std::invalid_argument("GroupData: injectivity_radius must be > 0");
    if (center_order != 1 && center_order != 2)
        throw std::invalid_argument("GroupData: center_order must be 1 or 2");
    for (int m : elliptic_orders)
        if (m < 2) throw std::invalid_argument("GroupData: elliptic orders must be >= 2");
    if (num_cusps < 0) throw std::invalid_argument("GroupData: num_cusps must be >= 0");
    if (cusp_scalings.size() != static_cast<std::size_t>(num_cusps))
        throw std::invalid_argument("GroupData: one scaling matrix per cusp required");
}

EnumerationBudget EnumerationBudget::by_displacement(double bound, std::size_t cap) {
    EnumerationBudget b;
    b.max_displacement = bound;
    b.max_elements = cap;
    b.validate();
    return b;
}

EnumerationBudget EnumerationBudget::by_max_entry(std::int64_t bound) {
    EnumerationBudget b;
    b.max_entry = bound;
    b.validate();
    return b;
}

void EnumerationBudget::validate() const {
    if (max_displacement.has_value() == max_entry.has_value())
        throw std::invalid_argument("EnumerationBudget: exactly one bound must be set");
    if (max_displacement && !(*max_displacement >= 1.0))
        throw std::invalid_argument("EnumerationBudget: max_displacement must be >= 1");
    if (max_entry && *max_entry < 1)
        throw std::invalid_argument("EnumerationBudget: max_entry must be >= 1");
}

namespace {

std::vector<GroupElement> enumerate_by_displacement(const UpperHalfPoint& tau, double R,
                                                    std::size_t cap) {
    const double xi = tau.xi, eta = tau.eta;
    // sigma >= (u+1)^2/(4u) for u = |c tau + d|^2, so u <= u_plus is necessary.
    const double u_plus = 2.0 * R - 1.0 + 2.0 * std::sqrt(std::max(0.0, R * (R - 1.0)));
    const auto cmax = static_cast<std::int64_t>(std::floor(std::sqrt(u_plus) / eta)) + 1;

    std::vector<GroupElement> out;
    for (std::int64_t c = -cmax; c <= cmax; ++c) {
        double s2 = u_plus - double(c) * double(c) * eta * eta;
        if (s2 < 0.0) continue;
        double s = std::sqrt(s2);
        auto dlo = static_cast<std::int64_t>(std::ceil(-double(c) * xi - s)) - 1;
        auto dhi = static_cast<std::int64_t>(std::floor(-double(c) * xi + s)) + 1;
        for (std::int64_t d = dlo; d <= dhi; ++d) {
            if (c == 0 && d == 0) continue;
            if (std::gcd(std::llabs(c), std::llabs(d)) != 1) continue;
            ExtGcd e = ext_gcd(d, c); // x*d + y*c = +-1
            std::int64_t a0 = e.x, b0 = -e.y;
            if (e.g == -1) { a0 = -a0; b0 = -b0; }
            GroupElement base(a0, b0, c, d);
            UpperHalfPoint w = mobius_apply(base, tau);
            // sigma(tau, w + t) <= R is a window in the integer shift t.
            double w2 = 4.0 * R * eta * w.eta - (eta + w.eta) * (eta + w.eta);
            if (w2 < 0.0) continue;
            double half = std::sqrt(w2);
            double center = xi - w.xi;
            auto tlo = static_cast<std::int64_t>(std::ceil(center - half)) - 1;
            auto thi = static_cast<std::int64_t>(std::floor(center + half)) + 1;
            for (std::int64_t t = tlo; t <= thi; ++t) {
                GroupElement g(a0 + t * c, b0 + t * d, c, d);
                double sigma = displacement(tau, mobius_apply(g, tau));
                if (sigma <= R) {
                    out.push_back(g);
                    if (out.size() > cap)
                        throw truncation_error(
                            "enumerate_elements: element cap exceeded before reaching the "
                            "requested displacement radius",
                            R, double(out.size()));
                }
            }
        }
    }
    return out;
}

std::vector<GroupElement> enumerate_by_entry(std::int64_t E) {
    std::vector<GroupElement> out;
    for (std::int64_t a = -E; a <= E; ++a) {
        for (std::int64_t c = -E; c <= E; ++c) {
            if (c == 0) continue;
            for (std::int64_t d = -E; d <= E; ++d) {
                std::int64_t t = a * d - 1;
                if (t % c != 0) continue;
                std::int64_t b = t / c;
                if (std::llabs(b) <= E) out.emplace_back(a, b, c, d);
            }
        }
    }
    for (std::int64_t s : {std::int64_t(1), std::int64_t(-1)})
        for (std::int64_t b = -E; b <= E; ++b) out.emplace_back(s, b * s, 0, s);
    return out;
}

void sort_by_displacement(std::vector<GroupElement>& v, const UpperHalfPoint& tau) {
    std::vector<std::pair<double, GroupElement>> keyed;
    keyed.reserve(v.size());
    for (const auto& g : v) keyed.emplace_back(displacement(tau, mobius_apply(g, tau)), g);
    std::sort(keyed.begin(), keyed.end(), [](const auto& l, const auto& r) {
        return std::tie(l.first, l.second.a, l.second.b, l.second.c, l.second.d) <
               std::tie(r.first, r.second.a, r.second.b, r.second.c, r.second.d);
    });
    v.clear();
    for (auto& [sigma, g] : keyed) v.push_back(g);
}

} // namespace

std::vector<GroupElement> enumerate_elements(const UpperHalfPoint& tau,
                                             const EnumerationBudget& budget) {
    budget.validate();
    std::vector<GroupElement> v = budget.max_displacement
                                      ? enumerate_by_displacement(tau, *budget.max_displacement,
                                                                  budget.max_elements)
                                      : enumerate_by_entry(*budget.max_entry);
    sort_by_displacement(v, tau);
    return v;
}

bool excluded_from_counting(const GroupElement& g) {
    if (g.c == 0) return true;               // +-T^n, the cusp stabilizer at infinity
    return std::llabs(g.trace()) < 2;        // elliptic
}

std::vector<double> counting_jumps(const UpperHalfPoint& tau, double rho) {
    if (rho < 0.0) throw std::invalid_argument("counting_jumps: rho must be >= 0");
    double R = 0.5 * (1.0 + std::cosh(rho));
    std::vector<double> jumps;
    for (const auto& g : enumerate_elements(tau, EnumerationBudget::by_displacement(std::max(1.0, R)))) {
        if (excluded_from_counting(g)) continue;
        double dist = hyp_distance(tau, mobius_apply(g, tau));
        if (dist <= rho) jumps.push_back(dist);
    }
    std::sort(jumps.begin(), jumps.end());
    return jumps;
}

long counting_function(const UpperHalfPoint& tau, double rho, const GroupData& group) {
    group.validate();
    return static_cast<long>(counting_jumps(tau, rho).size());
}

double jl_lhs_truncated(double k, const UpperHalfPoint& tau, double radius) {
    KahanSum s;
    for (double rho : counting_jumps(tau, radius)) s.add(cosh_pow_neg_k(0.5 * rho, k));
    return s.value();
}

double jl_rhs(double k, double delta, double r_gamma, int center_order,
              const UpperHalfPoint& tau, const GroupData& group) {
    group.validate();
    if (!(r_gamma > 0.0)) throw std::invalid_argument("jl_rhs: r_gamma must be > 0");
    if (delta < 0.5 * r_gamma - 1e-15)
        throw std::invalid_argument("jl_rhs: requires delta >= r_gamma / 2");

    const double cent = double(center_order);
    KahanSum stieltjes;
    for (double rho : counting_jumps(tau, delta)) stieltjes.add(cosh_pow_neg_k(0.5 * rho, k));

    double q = 0.25 * r_gamma;
    double boundary =
        2.0 * cent * std::cosh(q) / std::sinh(q) * std::sinh(delta) * cosh_pow_neg_k(0.5 * delta, k);

    auto integrand = [&](double rho) {
        return cosh_pow_neg_k(0.5 * rho, k) * std::sinh(rho + 0.5 * r_gamma);
    };
    // The integrand decays like exp(rho (1 - k/2)); push the cutoff until the
    // pointwise value is far below the quadrature tolerance.
    double hi = delta + 10.0;
    while (integrand(hi) > 1e-20 && hi < delta + 4000.0) hi += 5.0;
    double tail = integrate_adaptive(integrand, delta, hi, 1e-12);
    double tail_term = cent / (2.0 * std::sinh(q) * std::sinh(q)) * tail;

    return stieltjes.value() + boundary + tail_term;
}

bool is_member_gamma0(const GroupElement& g, std::int64_t N) {
    if (N < 1) throw std::invalid_argument("is_member_gamma0: N must be >= 1");
    return g.c % N == 0;
}

bool is_member_gamma01(const GroupElement& g, std::int64_t N) {
    if (N < 1) throw std::invalid_argument("is_member_gamma01: N must be >= 1");
    return g.c % N == 0 && (g.d - 1) % N == 0;
}

std::int64_t euler_phi(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("euler_phi: n must be >= 1");
    std::int64_t result = n;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}

std::int64_t index_gamma0(std::int64_t N) {
    if (N < 1) throw std::invalid_argument("index_gamma0: N must be >= 1");
    std::int64_t result = N, n = N;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        result = result / p * (p + 1);
    }
    if (n > 1) result = result / n * (n + 1);
    return result;
}

std::int64_t index_gamma01(std::int64_t m) {
    if (m < 1) throw std::invalid_argument("index_gamma01: m must be >= 1");
    return index_gamma0(4 * m) * euler_phi(4 * m);
}

namespace {

// Matrices mod N packed into a single integer key.
std::int64_t pack(std::int64_t N, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    return ((a * N + b) * N + c) * N + d;
}

struct ModMat {
    std::int64_t a, b, c, d;
};

ModMat mul(std::int64_t N, const ModMat& l, const ModMat& r) {
    return {(l.a * r.a + l.b * r.c) % N, (l.a * r.b + l.b * r.d) % N,
            (l.c * r.a + l.d * r.c) % N, (l.c * r.b + l.d * r.d) % N};
}

} // namespace

std::int64_t coset_count_subgroup(std::int64_t N,
                                  const std::function<bool(std::int64_t, std::int64_t,
                                                           std::int64_t, std::int64_t)>& member) {
    if (N < 2 || N > 64) throw std::invalid_argument("coset enumeration: modulus must be in [2, 64]");
    // Build SL2(Z/N) by closing {S, T} under multiplication.
    std::vector<ModMat> group;
    std::vector<char> seen(N * N * N * N, 0);
    auto push = [&](const ModMat& g) {
        std::int64_t key = pack(N, g.a, g.b, g.c, g.d);
        if (seen[key]) return false;
        seen[key] = 1;
        group.push_back(g);
        return true;
    };
    ModMat S{0, N - 1, 1, 0}, T{1, 1, 0, 1};
    push(ModMat{1, 0, 0, 1});
    for (std::size_t i = 0; i < group.size(); ++i) {
        ModMat g = group[i];
        push(mul(N, g, S));
        push(mul(N, g, T));
    }
    // Collect the subgroup and sweep out its right cosets.
    std::vector<ModMat> sub;
    for (const auto& g : group)
        if (member(g.a, g.b, g.c, g.d)) sub.push_back(g);
    std::vector<char> visited(N * N * N * N, 0);
    std::int64_t cosets = 0;
    for (const auto& g : group) {
        if (visited[pack(N, g.a, g.b, g.c, g.d)]) continue;
        ++cosets;
        for (const auto& h : sub) {
            ModMat hg = mul(N, h, g);
            visited[pack(N, hg.a, hg.b, hg.c, hg.d)] = 1;
        }
    }
    return cosets;
}

std::int64_t coset_count_bruteforce(std::int64_t m) {
    if (m < 1) throw std::invalid_argument("coset_count_bruteforce: m must be >= 1");
    if (4 * m > 64)
        throw std::invalid_argument("coset_count_bruteforce: modulus 4m must be <= 64");
    std::int64_t N = 4 * m;
    return coset_count_subgroup(
        N, [N](std::int64_t, std::int64_t, std::int64_t c, std::int64_t d) {
            return c % N == 0 && d % N == 1;
        });
}

GroupData make_sl2z_group_data() {
    static const double r_min = [] {
        // Grid over the fundamental domain truncated at height 2; the
        // infimum is attained well inside (at tau = i, by a parabolic fixing 0).
        double best = 1e300;
        const int nxi = 41, neta = 33;
        for (int i = 0; i < nxi; ++i) {
            double xi = -0.5 + double(i) / (nxi - 1);
            double lo = std::sqrt(std::max(1e-12, 1.0 - xi * xi));
            for (int j = 0; j < neta; ++j) {
                double eta = lo * std::pow(2.0 / lo, double(j) / (neta - 1));
                UpperHalfPoint tau(xi, eta);
                double cap = 0.5 * (1.0 + std::cosh(2.2)); // search distances <= 2.2
                for (const auto& g :
                     enumerate_elements(tau, EnumerationBudget::by_displacement(cap))) {
                    if (excluded_from_counting(g)) continue;
                    best = std::min(best, hyp_distance(tau, mobius_apply(g, tau)));
                }
            }
        }
        return best;
    }();

    GroupData gd;
    gd.num_cusps = 1;
    gd.elliptic_orders = {2, 3};
    gd.injectivity_radius = r_min;
    gd.center_order = 2;
    gd.cusp_scalings = {GroupElement::identity()};
    gd.validate();
    return gd;
}

} // namespace supnorm

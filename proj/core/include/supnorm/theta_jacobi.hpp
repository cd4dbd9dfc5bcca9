#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "supnorm/hyperbolic.hpp"
#include "supnorm/qseries.hpp"

namespace supnorm {

/// Evaluation site (tau, z) on H x C.
struct JacobiPoint {
    UpperHalfPoint tau;
    std::complex<double> z;
};

struct ThetaValue {
    std::complex<double> value;
    double tail_bound;
};

/// Index-m Jacobi theta function theta_{mu,m}(tau, z) =
/// sum_n exp(2 pi i m tau (n - mu/2m)^2 + 2 pi i z (2mn - mu)), summed over a
/// window wide enough that the Gaussian tail majorant is below tol.
ThetaValue theta_eval(int mu, int m, const JacobiPoint& p, double tol = 1e-12);

/// theta_eval times exp(-2 pi m y^2 / eta); every term of the scaled series
/// has magnitude <= 1, so this never overflows.
ThetaValue theta_eval_scaled(int mu, int m, const JacobiPoint& p, double tol = 1e-12);

/// Squared pointwise norm |theta_{mu,m}|^2 eta^(1/2) exp(-4 pi m y^2 / eta).
double theta_pet_norm(int mu, int m, const JacobiPoint& p);

struct ThetaSumBound {
    double lhs;    // sum_mu ||theta_{mu,m}||^2
    double rhs;    // 2m eta^(1/2) (1 + 1/sqrt(2 m eta))^2
    double margin; // rhs - lhs, expected >= 0
};

ThetaSumBound theta_sum_bound_check(int m, const JacobiPoint& p);

/// Truncated double Fourier expansion sum c(n,r) q^n zeta^r of a Jacobi cusp
/// form: coefficients supported on 4mn - r^2 > 0 with n <= trunc_n.
class JacobiFormCoeffs {
public:
    using Key = std::pair<std::int64_t, std::int64_t>; // (n, r), lexicographic

    JacobiFormCoeffs(int weight, int index, std::int64_t trunc_n);

    int weight() const { return weight_; }
    int index() const { return index_; }
    std::int64_t trunc_n() const { return trunc_n_; }
    const std::map<Key, std::complex<double>>& coeffs() const { return coeffs_; }

    std::complex<double> coeff(std::int64_t n, std::int64_t r) const;
    void set_coeff(std::int64_t n, std::int64_t r, std::complex<double> v);

    /// Raw value sum c(n,r) e^(2 pi i (n tau + r z)).
    std::complex<double> eval(const JacobiPoint& p) const;

    /// eval times exp(-2 pi m y^2 / eta). The cusp support makes every term
    /// of the scaled sum bounded by 1.
    std::complex<double> eval_scaled(const JacobiPoint& p) const;

    JacobiFormCoeffs scaled_by(std::complex<double> s) const;

private:
    int weight_;
    int index_;
    std::int64_t trunc_n_;
    std::map<Key, std::complex<double>> coeffs_;
};

/// The 2m weight-(k - 1/2) components h_mu of the theta decomposition,
/// exponent denominator 4m.
struct ThetaComponentVector {
    int index = 1;    // m
    double weight = 0; // k of the assembled Jacobi form
    std::vector<QSeries> components; // exactly 2m entries

    void validate() const;
};

/// sum_mu h_mu(tau) theta_{mu,m}(tau, z).
std::complex<double> assemble_jacobi(const ThetaComponentVector& h, const JacobiPoint& p);

/// Same, with the scaled thetas: equals phi(tau,z) exp(-2 pi m y^2/eta).
std::complex<double> assemble_jacobi_scaled(const ThetaComponentVector& h, const JacobiPoint& p);

/// Discriminant sorting, inverse to the theta decomposition: h_mu collects
/// c(n, r) with r = -mu (mod 2m) at exponent (4mn - r^2)/(4m). (The paper's
/// theta_{mu,m} carries zeta-exponents congruent to -mu, so sorting by -r
/// is what makes assemble_jacobi reproduce the form.)
ThetaComponentVector extract_h_mu(const JacobiFormCoeffs& phi);

/// Concrete weight-10 index-1 cusp form, built as (odd theta)^2 eta^18 with
/// exact integer coefficients and normalized so the first nonzero
/// coefficient (lexicographic in (n, r)) is 1.
JacobiFormCoeffs phi_10_1(std::int64_t trunc_n = 24);

/// Squared pointwise norm |phi|^2 eta^k exp(-4 pi m y^2/eta).
double jacobi_pet_norm(const JacobiFormCoeffs& phi, const JacobiPoint& p);
double jacobi_pet_norm(std::complex<double> raw_value, double k, int m, const JacobiPoint& p);

struct JacobiQuadrature {
    double Y_max = 12.0;
    int n_xi = 32;  // tau panels
    int n_eta = 40;
    int n_x = 24;   // z panels per tau node
    int n_y = 32;
    double tol = 1e-5;
    bool check_estimate = true;
};

/// Petersson inner product by 4-d quadrature over F x E_tau
/// (x in [0,1], y in [0,eta]).
InnerProductResult jacobi_inner_4d(const JacobiFormCoeffs& phi1, const JacobiFormCoeffs& phi2,
                                   const JacobiQuadrature& quad);

/// Same inner product through the theta decomposition:
/// (1/sqrt(4m)) Int_F sum_mu h_mu,1 conj(h_mu,2) eta^(k-1/2) dmu_hyp.
InnerProductResult jacobi_inner_theta(const ThetaComponentVector& h1,
                                      const ThetaComponentVector& h2,
                                      const JacobiQuadrature& quad);

struct JacobiSearchConfig {
    int grid_xi = 20;
    int grid_eta = 24;
    int grid_x = 12;
    int grid_y = 20;
    double height_cap = 0.0; // 0 => max(2, k/(2 pi))
    int refine_rounds = 60;
    int restarts = 3;
};

struct JacobiSupnormResult {
    double sup;
    JacobiPoint argmax;
};

JacobiSupnormResult jacobi_supnorm_search_fn(
    const std::function<double(const JacobiPoint&)>& norm_fn, double k,
    const JacobiSearchConfig& cfg = {});

JacobiSupnormResult jacobi_supnorm_search(const JacobiFormCoeffs& phi,
                                          const JacobiSearchConfig& cfg = {});

struct ChainCheck {
    double lhs;
    double rhs;
    double margin;
};

/// Pointwise Cauchy-Schwarz step of the sup-norm chain:
/// lhs = ||sum h_mu theta_mu||^2_Pet, rhs = (sum ||h_mu||^2)(sum ||theta_mu||^2).
ChainCheck cauchy_schwarz_chain_check(const ThetaComponentVector& h, double k, int m,
                                      const JacobiPoint& p);

} // namespace supnorm

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "supnorm/arithmetic.hpp"
#include "supnorm/bounds.hpp"
#include "supnorm/qseries.hpp"
#include "supnorm/theta_jacobi.hpp"

namespace supnorm {

/// The concrete form spanning the one-dimensional cusp space of the given
/// weight (k in {12, 16, 18, 20, 22, 26}): the discriminant form times
/// Eisenstein factors.
QSeries one_dimensional_cusp_form(double k, std::int64_t trunc = 60);

/// Group elements usable for cocycle checks at tau: words in the generators
/// filtered so that |c tau + d|^2 stays within [1/3, 3] and both evaluation
/// heights remain inside the certified range of the truncated expansions.
std::vector<GroupElement> cocycle_sample(std::uint64_t seed, int count,
                                         const UpperHalfPoint& tau);

struct SweepRow {
    double k;
    double inner;            // <f, f> of the raw form
    double measured_sup;     // sup of the L2-normalized squared norm
    UpperHalfPoint argmax;
    double prop3_at_argmax;  // prop3_rhs at the measured argmax
    double thm4_rhs;         // explicit chain with the cusp term at height k/(4 pi)
};

SweepRow normalized_sup_row(double k, const GroupData& group, std::int64_t trunc,
                            const SupnormSearchConfig& search, const PeterssonQuadrature& quad);

struct NormalizedJacobiForm {
    JacobiFormCoeffs phi;      // scaled so <phi, phi> = 1 (theta route)
    ThetaComponentVector h;    // matching components
    double raw_inner;          // <phi, phi> before scaling
};

NormalizedJacobiForm normalized_phi_10_1(const JacobiQuadrature& quad,
                                         std::int64_t trunc_n = 24);

struct CheckResult {
    std::string name;
    bool pass;
    double lhs;        // measured quantity (check-specific)
    double rhs;        // threshold or bound it is compared against
    std::string detail;
    double seconds;
};

struct VerifyConfig {
    double tol = 1e-8;      // agreement tolerance for checks without a pinned one
    std::uint64_t seed = 7;
    std::int64_t trunc = 60;
    bool quick = false;     // smaller grids; same checks
    bool include_determinism = true;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool ok = true;

    std::string to_csv() const; // deterministic, timing column excluded
};

/// Runs the property suite across all modules: series/bound oracles, the
/// inequality margins, the two-route inner product, the sup-bound sweep, the
/// invariance suites, and the determinism re-run.
VerifyReport run_verify(const VerifyConfig& cfg);

} // namespace supnorm

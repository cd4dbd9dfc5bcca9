#pragma once

#include <complex>
#include <string>
#include <vector>

#include "supnorm/bounds.hpp"
#include "supnorm/qseries.hpp"
#include "supnorm/theta_jacobi.hpp"

namespace supnorm {

/// {"weight": w, "level": N, "denom": d, "trunc": t,
///  "coeffs": [[numerator, re, im], ...]} with strictly increasing numerators.
std::string qseries_to_json(const QSeries& f);
QSeries qseries_from_json(const std::string& text);

/// {"weight": k, "index": m, "trunc_n": N, "coeffs": [[n, r, re, im], ...]},
/// (n, r) lexicographically sorted.
std::string jacobi_coeffs_to_json(const JacobiFormCoeffs& phi);
JacobiFormCoeffs jacobi_coeffs_from_json(const std::string& text);

std::string bound_reports_to_json(const std::vector<BoundReport>& reports);
std::string bound_reports_to_csv(const std::vector<BoundReport>& reports);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Complex literals in the "re+imi" form used on the command line:
/// "0.5+1.2i", "2i", "i", "-1.5", "0.3-0.7i".
std::complex<double> parse_complex(const std::string& text);

/// Doubles are printed with %.17g so re-runs are byte-identical.
std::string format_double(double v);

} // namespace supnorm

// Command-line front end: reduction, theta norms, Bergman diagonals, sup-norm
// searches, bound tables, scaling studies, and the full verification suite.

#include <complex>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "supnorm/arithmetic.hpp"
#include "supnorm/bounds.hpp"
#include "supnorm/errors.hpp"
#include "supnorm/hyperbolic.hpp"
#include "supnorm/io.hpp"
#include "supnorm/numeric.hpp"
#include "supnorm/qseries.hpp"
#include "supnorm/theta_jacobi.hpp"
#include "supnorm/verify.hpp"

namespace {

using namespace supnorm;

struct CommonOpts {
    double tol = 1e-8;
    std::int64_t trunc = 60;
    std::uint64_t seed = 7;
    int threads = 1;
    std::string format = "csv";
    std::string output;
    std::vector<int> grid;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--tol", c.tol, "accuracy tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--trunc", c.trunc, "series truncation")->check(CLI::Range(8, 100000));
    cmd->add_option("--seed", c.seed, "seed for randomized sample points");
    cmd->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1, 256));
    cmd->add_option("--format", c.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--output", c.output,
                    "output file (relative paths resolve under SUPNORM_OUTPUT_DIR when set)");
    cmd->add_option("--grid", c.grid, "grid panel counts")->delimiter(',');
}

std::string resolve_output(const std::string& path) {
    if (path.empty()) return path;
    std::filesystem::path p(path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("SUPNORM_OUTPUT_DIR")) p = std::filesystem::path(dir) / p;
    }
    return p.string();
}

void emit(const CommonOpts& c, const std::string& content) {
    std::cout << content;
    if (!c.output.empty()) write_text_file(resolve_output(c.output), content);
}

void validate_grid(const CommonOpts& c, std::size_t want) {
    if (c.grid.empty()) return;
    if (c.grid.size() != want)
        throw CLI::ValidationError("--grid", "expected " + std::to_string(want) + " panel counts");
    for (int g : c.grid)
        if (g < 4) throw CLI::ValidationError("--grid", "each grid dimension must be >= 4");
}

UpperHalfPoint parse_tau(const std::string& text) {
    std::complex<double> z = parse_complex(text);
    if (!(z.imag() > 0.0))
        throw CLI::ValidationError("--tau", "the point must satisfy Im > 0");
    return UpperHalfPoint(z);
}

std::string reports_out(const CommonOpts& c, const std::vector<BoundReport>& rows) {
    return c.format == "json" ? bound_reports_to_json(rows) + "\n" : bound_reports_to_csv(rows);
}

int run_reduce(const CommonOpts& c, const std::string& tau_text) {
    UpperHalfPoint tau = parse_tau(tau_text);
    ReducedPoint red = reduce_to_fundamental_domain(tau);
    std::ostringstream os;
    if (c.format == "json") {
        os << "{\"input\": \"" << tau_text << "\", \"reduced\": [" << format_double(red.point.xi)
           << ", " << format_double(red.point.eta) << "], \"map\": [" << red.map.a << ", "
           << red.map.b << ", " << red.map.c << ", " << red.map.d << "]}\n";
    } else {
        os << "xi,eta,a,b,c,d\n"
           << format_double(red.point.xi) << ',' << format_double(red.point.eta) << ','
           << red.map.a << ',' << red.map.b << ',' << red.map.c << ',' << red.map.d << '\n';
    }
    emit(c, os.str());
    return 0;
}

int run_theta_norm(const CommonOpts& c, int m, const std::string& tau_text,
                   const std::string& z_text) {
    JacobiPoint p{parse_tau(tau_text), parse_complex(z_text)};
    std::ostringstream os;
    os << "mu,norm_sq\n";
    for (int mu = 0; mu < 2 * m; ++mu)
        os << mu << ',' << format_double(theta_pet_norm(mu, m, p)) << '\n';
    ThetaSumBound b = theta_sum_bound_check(m, p);
    os << "sum," << format_double(b.lhs) << "\nbound," << format_double(b.rhs) << "\nmargin,"
       << format_double(b.margin) << '\n';
    emit(c, os.str());
    return b.margin >= 0.0 ? 0 : 1;
}

int run_bergman(const CommonOpts& c, double k, const std::string& tau_text, double tail_tol) {
    UpperHalfPoint tau = parse_tau(tau_text);
    GroupData group = make_sl2z_group_data();
    BergmanConfig cfg;
    cfg.k = k;
    cfg.tail_tol = tail_tol;
    BergmanValue v = bergman_diag_series(tau, group, cfg);
    std::ostringstream os;
    os << "k,tau,value,tail_bound,radius,terms";
    bool with_oracle = (k == 12.0);
    double oracle = 0.0;
    if (with_oracle) {
        QSeries delta = delta_series(c.trunc);
        PeterssonQuadrature pq;
        pq.rule = PeterssonQuadrature::Rule::gauss4;
        pq.n_xi = 64;
        pq.n_eta = 96;
        pq.check_estimate = false;
        double ip = petersson_inner(delta, delta, 12.0, pq).value.real();
        oracle = petersson_norm_point(delta, 12.0, tau) / ip;
        os << ",oracle,abs_error";
    }
    os << '\n'
       << format_double(k) << ",\"" << tau_text << "\"," << format_double(v.value) << ','
       << format_double(v.tail_bound) << ',' << format_double(v.radius) << ',' << v.terms;
    bool ok = true;
    if (with_oracle) {
        double err = std::abs(v.value - oracle);
        ok = err <= v.tail_bound + 1e-3 * oracle;
        os << ',' << format_double(oracle) << ',' << format_double(err);
    }
    os << '\n';
    emit(c, os.str());
    return ok ? 0 : 1;
}

SupnormSearchConfig search_from(const CommonOpts& c) {
    SupnormSearchConfig s;
    if (c.grid.size() >= 2) {
        s.grid_xi = c.grid[0];
        s.grid_eta = c.grid[1];
    }
    return s;
}

PeterssonQuadrature quad_from(const CommonOpts& c) {
    PeterssonQuadrature q;
    q.rule = PeterssonQuadrature::Rule::gauss4;
    q.n_xi = 48;
    q.n_eta = 64;
    q.tol = c.tol;
    q.check_estimate = false;
    return q;
}

int run_supnorm(const CommonOpts& c, double k) {
    GroupData group = make_sl2z_group_data();
    SweepRow row = normalized_sup_row(k, group, c.trunc, search_from(c), quad_from(c));
    std::vector<BoundReport> rows;
    rows.push_back(prop3_argmax_report(k, group, row.measured_sup, row.argmax));
    rows.push_back(thm4_report(k, group, row.measured_sup));
    emit(c, reports_out(c, rows));
    return (rows[0].margin() >= 0.0 && rows[1].margin() >= 0.0) ? 0 : 1;
}

JacobiQuadrature jacobi_quad_from(const CommonOpts& c) {
    JacobiQuadrature q;
    if (c.grid.size() == 4) {
        q.n_xi = c.grid[0];
        q.n_eta = c.grid[1];
        q.n_x = c.grid[2];
        q.n_y = c.grid[3];
    }
    q.tol = c.tol;
    q.check_estimate = false;
    return q;
}

int run_jacobi_supnorm(const CommonOpts& c) {
    JacobiQuadrature q = jacobi_quad_from(c);
    NormalizedJacobiForm nf = normalized_phi_10_1(q);
    Thm11Options opts;
    opts.quad = q;
    BoundReport rep = thm11_report(nf.h, 10.0, 1, opts);
    emit(c, reports_out(c, {rep}));
    return rep.margin() >= 0.0 ? 0 : 1;
}

int run_bounds_table(const CommonOpts& c, std::vector<double> weights, bool full) {
    GroupData group = make_sl2z_group_data();
    std::vector<BoundReport> rows;
    for (double k : weights) {
        SweepRow row = normalized_sup_row(k, group, c.trunc, search_from(c), quad_from(c));
        rows.push_back(prop3_argmax_report(k, group, row.measured_sup, row.argmax));
        if (full) {
            rows.push_back(thm4_report(k, group, row.measured_sup));
            rows.push_back(cor5_report(k, group, row.measured_sup));
            rows.push_back(thm6_report(k, group, row.measured_sup));
        }
    }
    if (full) {
        JacobiQuadrature q = jacobi_quad_from(c);
        NormalizedJacobiForm nf = normalized_phi_10_1(q);
        Thm11Options opts;
        opts.quad = q;
        rows.push_back(thm11_report(nf.h, 10.0, 1, opts));
    }
    emit(c, reports_out(c, rows));
    for (const auto& r : rows)
        if (r.margin() < 0.0) return 1;
    return 0;
}

int run_scaling(const CommonOpts& c, std::vector<double> weights) {
    GroupData group = make_sl2z_group_data();
    std::ostringstream k_table;
    k_table << "k,measured_sup,prop3_at_argmax,thm4_rhs,config_digest\n";
    for (double k : weights) {
        SweepRow row = normalized_sup_row(k, group, c.trunc, search_from(c), quad_from(c));
        k_table << format_double(k) << ',' << format_double(row.measured_sup) << ','
                << format_double(row.prop3_at_argmax) << ',' << format_double(row.thm4_rhs)
                << ",\"trunc=" << c.trunc << "\"\n";
    }
    // index scaling of the theta-sum bound: grid maxima of the aggregate
    std::ostringstream m_table;
    m_table << "m,max_theta_sum,bound,min_margin,config_digest\n";
    for (int m = 1; m <= 8; ++m) {
        double max_lhs = 0.0, min_margin = 1e300, bound = 0.0;
        const int n = 8;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int d = 0; d < n; ++d) {
                    double xi = -0.5 + (a + 0.5) / n;
                    double eta = 0.87 * std::pow(3.0 / 0.87, (b + 0.5) / n);
                    double y = eta * (d + 0.5) / n;
                    ThetaSumBound r = theta_sum_bound_check(m, {UpperHalfPoint(xi, eta),
                                                                {0.25, y}});
                    if (r.lhs > max_lhs) {
                        max_lhs = r.lhs;
                        bound = r.rhs;
                    }
                    min_margin = std::min(min_margin, r.margin);
                }
        m_table << m << ',' << format_double(max_lhs) << ',' << format_double(bound) << ','
                << format_double(min_margin) << ",\"grid=8x8x8\"\n";
    }
    std::string joined = "# weight scaling\n" + k_table.str() + "# index scaling\n" + m_table.str();
    emit(c, joined);
    return 0;
}

int run_verify_cmd(const CommonOpts& c, bool quick) {
    VerifyConfig cfg;
    cfg.tol = c.tol;
    cfg.seed = c.seed;
    cfg.trunc = c.trunc;
    cfg.quick = quick;
    VerifyReport rep = run_verify(cfg);
    for (const auto& check : rep.checks)
        std::cerr << (check.pass ? "PASS " : "FAIL ") << check.name << "  ["
                  << format_double(check.seconds) << "s]\n";
    emit(c, rep.to_csv());
    return rep.ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical sup-norm bounds for modular and Jacobi cusp forms"};
    app.require_subcommand(1);

    CommonOpts copts;
    std::string tau_text = "i", z_text = "0";
    double weight = 12.0, tail_tol = 1e-6;
    int index_m = 1;
    std::vector<double> weights = {12, 16, 18, 20, 22, 26};
    bool full = false, quick = false;

    auto* reduce = app.add_subcommand("reduce", "reduce a point into the fundamental domain");
    add_common(reduce, copts);
    reduce->add_option("--tau", tau_text, "point, e.g. 0.1+0.1i")->required();

    auto* theta = app.add_subcommand("theta-norm", "pointwise theta norms and the sum bound");
    add_common(theta, copts);
    theta->add_option("--index", index_m, "Jacobi index m")->check(CLI::Range(1, 64));
    theta->add_option("--tau", tau_text)->required();
    theta->add_option("--z", z_text)->required();

    auto* bergman = app.add_subcommand("bergman-diag", "truncated Bergman diagonal with tail");
    add_common(bergman, copts);
    bergman->add_option("--weight", weight)->check(CLI::Range(5.0, 1000.0));
    bergman->add_option("--tau", tau_text)->required();
    bergman->add_option("--tail-tol", tail_tol)->check(CLI::PositiveNumber);

    auto* sup = app.add_subcommand("supnorm", "sup of the normalized squared norm + bounds");
    add_common(sup, copts);
    sup->add_option("--weight", weight)->required();

    auto* jsup = app.add_subcommand("jacobi-supnorm", "Jacobi sup-norm chain for the built form");
    add_common(jsup, copts);

    auto* table = app.add_subcommand("bounds-table", "measured-vs-bound table over a weight sweep");
    add_common(table, copts);
    table->add_option("--weights", weights, "weights of one-dimensional spaces")->delimiter(',');
    table->add_flag("--full", full, "also emit the chain and Jacobi rows");

    auto* scaling = app.add_subcommand("scaling", "weight and index scaling tables");
    add_common(scaling, copts);
    scaling->add_option("--weights", weights)->delimiter(',');

    auto* verify = app.add_subcommand("verify", "run the full property suite");
    add_common(verify, copts);
    verify->add_flag("--quick", quick, "smaller grids, same checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        set_thread_count(copts.threads);
        if (reduce->parsed()) return run_reduce(copts, tau_text);
        if (theta->parsed()) {
            validate_grid(copts, 0);
            return run_theta_norm(copts, index_m, tau_text, z_text);
        }
        if (bergman->parsed()) return run_bergman(copts, weight, tau_text, tail_tol);
        if (sup->parsed()) {
            validate_grid(copts, 2);
            return run_supnorm(copts, weight);
        }
        if (jsup->parsed()) {
            validate_grid(copts, 4);
            return run_jacobi_supnorm(copts);
        }
        if (table->parsed()) {
            validate_grid(copts, 2);
            return run_bounds_table(copts, weights, full);
        }
        if (scaling->parsed()) {
            validate_grid(copts, 2);
            return run_scaling(copts, weights);
        }
        if (verify->parsed()) return run_verify_cmd(copts, quick);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const truncation_error& e) {
        std::cerr << "numerical accuracy failure: " << e.what() << "\n";
        return 3;
    } catch (const accuracy_error& e) {
        std::cerr << "numerical accuracy failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

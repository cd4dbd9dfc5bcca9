#include "supnorm/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace supnorm {

using nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string qseries_to_json(const QSeries& f) {
    ordered_json j;
    j["weight"] = f.weight();
    j["level"] = f.level();
    j["denom"] = f.denom();
    j["trunc"] = f.trunc_order();
    ordered_json coeffs = ordered_json::array();
    for (const auto& [num, v] : f.coeffs())
        coeffs.push_back({num, v.real(), v.imag()});
    j["coeffs"] = std::move(coeffs);
    return j.dump();
}

QSeries qseries_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    std::int64_t denom = j.at("denom").get<std::int64_t>();
    double trunc = j.at("trunc").get<double>();
    auto trunc_num = static_cast<std::int64_t>(std::llround(trunc * double(denom)));
    QSeries f(denom, trunc_num, j.at("weight").get<double>(), j.at("level").get<int>());
    std::int64_t prev = std::numeric_limits<std::int64_t>::min();
    for (const auto& entry : j.at("coeffs")) {
        auto num = entry.at(0).get<std::int64_t>();
        if (num <= prev)
            throw std::invalid_argument("qseries_from_json: exponents must strictly increase");
        prev = num;
        f.set_coeff(num, {entry.at(1).get<double>(), entry.at(2).get<double>()});
    }
    return f;
}

std::string jacobi_coeffs_to_json(const JacobiFormCoeffs& phi) {
    ordered_json j;
    j["weight"] = phi.weight();
    j["index"] = phi.index();
    j["trunc_n"] = phi.trunc_n();
    ordered_json coeffs = ordered_json::array();
    for (const auto& [key, v] : phi.coeffs())
        coeffs.push_back({key.first, key.second, v.real(), v.imag()});
    j["coeffs"] = std::move(coeffs);
    return j.dump();
}

JacobiFormCoeffs jacobi_coeffs_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    JacobiFormCoeffs phi(j.at("weight").get<int>(), j.at("index").get<int>(),
                         j.at("trunc_n").get<std::int64_t>());
    for (const auto& entry : j.at("coeffs"))
        phi.set_coeff(entry.at(0).get<std::int64_t>(), entry.at(1).get<std::int64_t>(),
                      {entry.at(2).get<double>(), entry.at(3).get<double>()});
    return phi;
}

namespace {

ordered_json report_to_json(const BoundReport& r) {
    ordered_json j;
    j["name"] = r.name;
    j["k"] = r.k;
    j["m"] = r.m;
    j["lhs"] = r.lhs_measured;
    j["rhs"] = r.rhs_bound;
    j["margin"] = r.margin();
    j["config_digest"] = r.config_digest;
    return j;
}

} // namespace

std::string bound_reports_to_json(const std::vector<BoundReport>& reports) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    return arr.dump(2);
}

std::string bound_reports_to_csv(const std::vector<BoundReport>& reports) {
    std::ostringstream os;
    os << "name,k,m,lhs,rhs,margin,config_digest\n";
    for (const auto& r : reports) {
        os << r.name << ',' << format_double(r.k) << ',' << r.m << ','
           << format_double(r.lhs_measured) << ',' << format_double(r.rhs_bound) << ','
           << format_double(r.margin()) << ',' << '"' << r.config_digest << '"' << '\n';
    }
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::complex<double> parse_complex(const std::string& text) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
    if (s.empty()) throw std::invalid_argument("parse_complex: empty literal");
    bool has_i = s.back() == 'i' || s.back() == 'I';
    if (!has_i) {
        std::size_t pos = 0;
        double re = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("parse_complex: trailing characters");
        return {re, 0.0};
    }
    s.pop_back(); // drop the 'i'
    // Split at the sign that starts the imaginary part (not a leading sign,
    // not an exponent sign).
    std::size_t split = std::string::npos;
    for (std::size_t p = s.size(); p-- > 1;) {
        if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
            split = p;
            break;
        }
    }
    if (split == std::string::npos) {
        // purely imaginary: "i", "-i", "2.5i"
        if (s.empty() || s == "+") return {0.0, 1.0};
        if (s == "-") return {0.0, -1.0};
        std::size_t pos = 0;
        double im = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("parse_complex: bad imaginary part");
        return {0.0, im};
    }
    std::string re_part = s.substr(0, split);
    std::string im_part = s.substr(split);
    std::size_t pos = 0;
    double re = std::stod(re_part, &pos);
    if (pos != re_part.size()) throw std::invalid_argument("parse_complex: bad real part");
    double im;
    if (im_part == "+")
        im = 1.0;
    else if (im_part == "-")
        im = -1.0;
    else {
        im = std::stod(im_part, &pos);
        if (pos != im_part.size()) throw std::invalid_argument("parse_complex: bad imaginary part");
    }
    return {re, im};
}

} // namespace supnorm

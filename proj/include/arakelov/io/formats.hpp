#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "arakelov/errors.hpp"
#include "arakelov/surface/abel_jacobi.hpp"

namespace arakelov {

// numbers cross file boundaries as decimal strings so round trips preserve
// every bit; rationals are accepted on input as "p/q"
inline std::string num_string(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_number(const std::string& s, const std::string& field) {
    auto bad = [&] {
        return invalid_input("field " + field + ": cannot parse number '" + s + "'");
    };
    if (s.empty()) throw bad();
    size_t slash = s.find('/');
    if (slash != std::string::npos) {
        const std::string ps = s.substr(0, slash), qs = s.substr(slash + 1);
        char* end = nullptr;
        long long p = std::strtoll(ps.c_str(), &end, 10);
        if (ps.empty() || end != ps.c_str() + ps.size()) throw bad();
        long long q = std::strtoll(qs.c_str(), &end, 10);
        if (qs.empty() || end != qs.c_str() + qs.size() || q == 0) throw bad();
        return static_cast<double>(p) / static_cast<double>(q);
    }
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) throw bad();
    return v;
}

struct CurveInput {
    std::vector<double> f_lead; // leading-first
    std::vector<int> ordering;

    Poly poly() const {
        std::vector<cdouble> lead(f_lead.begin(), f_lead.end());
        return Poly::from_leading_first(lead);
    }
};

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw invalid_input("file " + path + ": " + e.what());
    }
    return j;
}

inline CurveInput parse_curve_json(const nlohmann::json& j) {
    CurveInput ci;
    if (!j.contains("f_coeffs") || !j["f_coeffs"].is_array() || j["f_coeffs"].empty())
        throw invalid_input("field f_coeffs: missing or not a nonempty array");
    const auto& arr = j["f_coeffs"];
    for (size_t i = 0; i < arr.size(); ++i) {
        std::string field = "f_coeffs[" + std::to_string(i) + "]";
        const auto& e = arr[i];
        if (e.is_string())
            ci.f_lead.push_back(parse_number(e.get<std::string>(), field));
        else if (e.is_number())
            ci.f_lead.push_back(e.get<double>());
        else
            throw invalid_input("field " + field + ": expected a number or string");
    }
    if (j.contains("ordering")) {
        if (!j["ordering"].is_array())
            throw invalid_input("field ordering: expected an array of indices");
        for (const auto& e : j["ordering"]) {
            if (!e.is_number_integer())
                throw invalid_input("field ordering: expected an array of indices");
            ci.ordering.push_back(e.get<int>());
        }
    }
    return ci;
}

inline CurveInput load_curve_file(const std::string& path) {
    return parse_curve_json(read_json_file(path));
}

inline void save_curve_file(const std::string& path, const std::vector<double>& f_lead,
                            const std::vector<int>& ordering = {}) {
    nlohmann::json j;
    j["f_coeffs"] = nlohmann::json::array();
    for (double v : f_lead) j["f_coeffs"].push_back(num_string(v));
    if (!ordering.empty()) j["ordering"] = ordering;
    std::ofstream out(path);
    if (!out) throw invalid_input("cannot write file: " + path);
    out << j.dump(2) << '\n';
}

inline nlohmann::json cmat_to_json(const CMat& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.cols; ++j) {
            cdouble v = m.at(i, j);
            row.push_back({num_string(v.real()), num_string(v.imag())});
        }
        rows.push_back(row);
    }
    return rows;
}

inline CMat cmat_from_json(const nlohmann::json& j, int g, const std::string& field) {
    if (!j.is_array() || static_cast<int>(j.size()) != g)
        throw invalid_input("field " + field + ": expected a " + std::to_string(g) + "x" +
                            std::to_string(g) + " matrix");
    CMat m(g, g);
    for (int i = 0; i < g; ++i) {
        const auto& row = j[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != g)
            throw invalid_input("field " + field + ": row " + std::to_string(i) +
                                " has wrong length");
        for (int k = 0; k < g; ++k) {
            const auto& e = row[static_cast<size_t>(k)];
            std::string cell = field + "[" + std::to_string(i) + "][" + std::to_string(k) + "]";
            if (!e.is_array() || e.size() != 2)
                throw invalid_input("field " + cell + ": expected [re, im]");
            double re = e[0].is_string() ? parse_number(e[0].get<std::string>(), cell)
                                         : e[0].get<double>();
            double im = e[1].is_string() ? parse_number(e[1].get<std::string>(), cell)
                                         : e[1].get<double>();
            m.at(i, k) = cdouble(re, im);
        }
    }
    return m;
}

inline void save_period_data(const PeriodData& pd, const std::string& path) {
    nlohmann::json j;
    j["f_coeffs"] = nlohmann::json::array();
    for (size_t i = pd.curve.f.c.size(); i-- > 0;)
        j["f_coeffs"].push_back(num_string(pd.curve.f.c[i].real()));
    if (!pd.ordering.empty()) j["ordering"] = pd.ordering;
    j["omega_a"] = cmat_to_json(pd.homology.omega_A);
    j["omega_b"] = cmat_to_json(pd.homology.omega_B);
    j["tau"] = cmat_to_json(pd.tau.tau);
    std::ofstream out(path);
    if (!out) throw invalid_input("cannot write file: " + path);
    out << j.dump(2) << '\n';
}

// Rebuilds the curve from the stored coefficients and re-derives everything
// from the period matrices, so a loaded file passes the same certificates as
// a fresh computation: tau symmetry and positive definiteness, agreement with
// the stored tau, and the half-period table.
inline PeriodData load_period_data(const std::string& path, const QuadratureConfig& cfg) {
    nlohmann::json j = read_json_file(path);
    CurveInput ci = parse_curve_json(j);
    Curve c = build_curve(ci.poly(), ci.ordering);
    int g = c.genus;
    if (!j.contains("omega_a") || !j.contains("omega_b"))
        throw invalid_input("period file: omega_a and omega_b are required");
    Homology hom;
    hom.omega_A = cmat_from_json(j["omega_a"], g, "omega_a");
    hom.omega_B = cmat_from_json(j["omega_b"], g, "omega_b");
    PeriodData pd = periods_from_matrices(std::move(c), std::move(hom), ci.ordering);
    if (j.contains("tau")) {
        CMat t = cmat_from_json(j["tau"], g, "tau");
        double scale = 1.0, diff = 0.0;
        for (int i = 0; i < g; ++i)
            for (int k = 0; k < g; ++k) {
                scale = std::max(scale, std::abs(pd.tau.tau.at(i, k)));
                diff = std::max(diff, std::abs(pd.tau.tau.at(i, k) - t.at(i, k)));
            }
        if (diff > 1e-9 * scale)
            throw basis_inconsistency_error("period file: stored tau disagrees with re-derived tau");
    }
    verify_half_periods(pd, cfg);
    return pd;
}

} // namespace arakelov

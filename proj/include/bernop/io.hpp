#pragma once

#include <charconv>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bernstein.hpp"
#include "errors.hpp"
#include "operator.hpp"
#include "polynomial.hpp"
#include "scalar.hpp"

namespace bernop {

using json = nlohmann::json;

/// Shortest decimal that round-trips the double; deterministic across runs.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace detail {

template <class T>
T scalar_from_json(const json& j, const char* field) {
    if (j.is_string())
        return scalar_from_string<T>(j.get<std::string>());
    if (j.is_number()) {
        if constexpr (is_exact_v<T>)
            return T(j.get<double>());
        else
            return j.get<double>();
    }
    throw ParseError(std::string("json: field '") + field + "' must be a number or string");
}

} // namespace detail

/// Schema: { "base": number, "coeffs": [number...], "rational": ["num/den"...] }.
/// The optional "rational" array gives exact coefficients and takes precedence.
template <class T>
Polynomial<T> polynomial_from_json(const json& j) {
    if (!j.is_object() || !j.contains("base") || !(j.contains("coeffs") || j.contains("rational")))
        throw ParseError("json: polynomial needs 'base' and 'coeffs' (or 'rational')");
    T base = detail::scalar_from_json<T>(j.at("base"), "base");
    std::vector<T> coeffs;
    if (j.contains("rational")) {
        const json& arr = j.at("rational");
        if (!arr.is_array())
            throw ParseError("json: 'rational' must be an array of strings");
        for (const auto& c : arr)
            coeffs.push_back(detail::scalar_from_json<T>(c, "rational"));
    } else {
        const json& arr = j.at("coeffs");
        if (!arr.is_array())
            throw ParseError("json: 'coeffs' must be an array of numbers");
        for (const auto& c : arr)
            coeffs.push_back(detail::scalar_from_json<T>(c, "coeffs"));
    }
    return Polynomial<T>(base, coeffs);
}

inline json to_json(const Polynomial<double>& p) {
    json j;
    j["base"] = p.base();
    std::vector<double> c;
    for (int l = 0; l <= p.degree(); ++l)
        c.push_back(p.coeff(l));
    j["coeffs"] = c;
    return j;
}

inline json to_json(const Polynomial<Rational>& p) {
    json j;
    j["base"] = to_double(p.base());
    std::vector<double> c;
    std::vector<std::string> r;
    for (int l = 0; l <= p.degree(); ++l) {
        c.push_back(to_double(p.coeff(l)));
        r.push_back(to_string(p.coeff(l)));
    }
    j["coeffs"] = c;
    j["rational"] = r;
    return j;
}

/// Schema: { "n": int, "a": number, "b": number, "coords": [number...] }.
template <class T>
json to_json(const BernsteinForm<T>& f) {
    json j;
    j["n"] = f.n;
    j["a"] = to_double(f.iv.a);
    j["b"] = to_double(f.iv.b);
    std::vector<double> c;
    for (const auto& v : f.coords)
        c.push_back(to_double(v));
    j["coords"] = c;
    return j;
}

inline BernsteinForm<double> bernstein_form_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("a") || !j.contains("b") ||
        !j.contains("coords"))
        throw ParseError("json: Bernstein form needs 'n', 'a', 'b', 'coords'");
    Interval<double> iv(j.at("a").get<double>(), j.at("b").get<double>());
    std::vector<double> coords = j.at("coords").get<std::vector<double>>();
    return BernsteinForm<double>(j.at("n").get<int>(), iv, std::move(coords));
}

/// Schema: { "n", "interval": [a,b], "gamma", "nodes", "status", "offending_indices" };
/// gamma entries are exact strings in rational mode, numbers otherwise.
template <class T>
json operator_dump(const GeneralizedOperator<T>& op) {
    json j;
    j["n"] = op.n;
    j["interval"] = {to_double(op.iv.a), to_double(op.iv.b)};
    if constexpr (is_exact_v<T>) {
        std::vector<std::string> g;
        for (const auto& v : op.gamma.coords)
            g.push_back(to_string(v));
        j["gamma"] = g;
    } else {
        j["gamma"] = op.gamma.coords;
    }
    j["nodes"] = op.nodes;
    j["status"] = op.status == ExistenceStatus::Exists ? "exists" : "not_defined";
    j["offending_indices"] = op.offending_indices;
    return j;
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open for reading: " + path);
    return json::parse(in);
}

/// RFC-4180 rows under two leading comment lines: the generating command and
/// the column units. Numeric cells use shortest round-trip formatting, so a
/// fixed config yields byte-identical files.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::string& command_line, const std::string& units,
              const std::vector<std::string>& header)
        : out_(out), width_(header.size()) {
        out_ << "# command: " << command_line << "\n";
        out_ << "# units: " << units << "\n";
        write_row(header);
    }

    void row(const std::vector<std::string>& cells) {
        if (cells.size() != width_)
            throw std::invalid_argument("CsvWriter: row width mismatch");
        write_row(cells);
    }

    static std::string cell(double v) { return format_double(v); }

private:
    std::ostream& out_;
    std::size_t width_;

    void write_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0)
                out_ << ',';
            out_ << quoted(cells[i]);
        }
        out_ << '\n';
    }

    static std::string quoted(const std::string& s) {
        if (s.find_first_of(",\"\r\n") == std::string::npos)
            return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"')
                q += '"';
            q += c;
        }
        q += '"';
        return q;
    }
};

} // namespace bernop

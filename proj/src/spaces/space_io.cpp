#include "xlab/errors.hpp"
#include "xlab/graphon.hpp"
#include "xlab/space.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace xlab {

using nlohmann::json;

namespace {

Rational rational_entry(const json& v) {
    if (v.is_string())
        return parse_rational(v.get<std::string>());
    if (v.is_number_integer())
        return Rational(v.get<long>());
    if (v.is_number_float()) {
        Rational r(v.get<double>());
        r.canonicalize();
        return r;
    }
    throw ParseError("matrix entry must be a number or a \"p/q\" string");
}

double float_entry(const json& v) {
    if (v.is_number())
        return v.get<double>();
    if (v.is_string())
        return parse_rational(v.get<std::string>()).get_d();
    throw ParseError("matrix entry must be a number or a \"p/q\" string");
}

template <class T>
SquareMatrix<T> read_matrix(const json& doc) {
    if (!doc.contains("eta") || !doc["eta"].is_array())
        throw ParseError("space JSON needs an \"eta\" array");
    const auto& rows = doc["eta"];
    const std::size_t n = rows.size();
    if (doc.contains("n") && doc["n"].get<std::size_t>() != n)
        throw ParseError("\"n\" does not match the number of rows of \"eta\"");
    SquareMatrix<T> m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!rows[i].is_array() || rows[i].size() != n)
            throw ParseError("row " + std::to_string(i) + " of \"eta\" must have " + std::to_string(n) + " entries");
        for (std::size_t j = 0; j < n; ++j) {
            if constexpr (is_exact_v<T>)
                m(i, j) = rational_entry(rows[i][j]);
            else
                m(i, j) = float_entry(rows[i][j]);
        }
    }
    return m;
}

} // namespace

AnySpace parse_space_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ParseError("space JSON must be an object");
    const std::string mode = doc.value("mode", "f64");
    if (mode != "f64" && mode != "rational")
        throw ParseError("mode must be \"f64\" or \"rational\"");

    try {
        if (doc.contains("graphon")) {
            GraphonSpec spec{doc["graphon"].get<std::string>(), {}};
            if (doc.contains("atoms"))
                spec.params["atoms"] = doc["atoms"].get<double>();
            if (doc.contains("params")) {
                for (const auto& [key, value] : doc["params"].items())
                    spec.params[key] = value.get<double>();
            }
            if (mode == "rational")
                return discretize_graphon<Rational>(spec);
            return discretize_graphon<double>(spec);
        }
        if (mode == "rational")
            return ExactSpace::from_matrix(read_matrix<Rational>(doc), true);
        return FloatSpace::from_matrix(read_matrix<double>(doc), true);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed space JSON: ") + e.what());
    }
}

AnySpace load_space(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open space file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_space_json(buf.str());
}

std::string space_to_json(const AnySpace& s) {
    return std::visit(
        [](const auto& space) {
            using T = std::decay_t<decltype(space.pi()[0])>;
            json doc;
            doc["n"] = space.size();
            doc["mode"] = is_exact_v<T> ? "rational" : "f64";
            json rows = json::array();
            for (std::size_t i = 0; i < space.size(); ++i) {
                json row = json::array();
                for (const auto& v : space.eta().row(i)) {
                    if constexpr (is_exact_v<T>)
                        row.push_back(to_string(v));
                    else
                        row.push_back(v);
                }
                rows.push_back(std::move(row));
            }
            doc["eta"] = std::move(rows);
            return doc.dump();
        },
        s);
}

} // namespace xlab

#include "weakoam/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "weakoam/error.hpp"

namespace weakoam::io {
namespace {

std::vector<double> real_list(const json &doc, const char *key, std::size_t expected) {
    if (!doc.contains(key)) {
        return std::vector<double>(expected, 0.0);
    }
    const json &arr = doc.at(key);
    if (!arr.is_array() || arr.size() != expected) {
        throw Error(ErrorCode::BadShape, std::string("\"") + key + "\" has the wrong length");
    }
    std::vector<double> out;
    for (const json &v : arr) {
        if (!v.is_number()) throw Error(ErrorCode::BadInput, std::string("non-numeric entry in \"") + key + "\"");
        out.push_back(v.get<double>());
    }
    return out;
}

json complex_pair(const cplx &z) {
    return json{{"re", z.real()}, {"im", z.imag()}};
}

}  // namespace

Matrix matrix_from_json(const json &doc) {
    if (!doc.is_object() || !doc.contains("re") || !doc.at("re").is_array()) {
        throw Error(ErrorCode::BadInput, "matrix document needs an \"re\" array of rows");
    }
    const json &re = doc.at("re");
    const std::size_t rows = re.size();
    if (rows == 0) throw Error(ErrorCode::BadShape, "empty matrix");
    const std::size_t cols = re.at(0).is_array() ? re.at(0).size() : 0;
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        json row_doc = {{"re", re.at(r)}};
        if (doc.contains("im")) {
            if (!doc.at("im").is_array() || doc.at("im").size() != rows) {
                throw Error(ErrorCode::BadShape, "\"im\" row count differs from \"re\"");
            }
            row_doc["im"] = doc.at("im").at(r);
        }
        const std::vector<double> row_re = real_list(row_doc, "re", cols);
        const std::vector<double> row_im = real_list(row_doc, "im", cols);
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = cplx(row_re[c], row_im[c]);
    }
    return m;
}

Vector vector_from_json(const json &doc) {
    if (!doc.is_object() || !doc.contains("re") || !doc.at("re").is_array()) {
        throw Error(ErrorCode::BadInput, "vector document needs an \"re\" array");
    }
    const std::size_t n = doc.at("re").size();
    const std::vector<double> re = real_list(doc, "re", n);
    const std::vector<double> im = real_list(doc, "im", n);
    Vector v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = cplx(re[k], im[k]);
    return v;
}

json to_json(const Matrix &m) {
    json re = json::array(), im = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json rr = json::array(), ri = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            rr.push_back(m(r, c).real());
            ri.push_back(m(r, c).imag());
        }
        re.push_back(rr);
        im.push_back(ri);
    }
    return json{{"re", re}, {"im", im}};
}

json to_json(const Vector &v) {
    json re = json::array(), im = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        re.push_back(v[k].real());
        im.push_back(v[k].imag());
    }
    return json{{"re", re}, {"im", im}};
}

json to_json(const GridSpec &grid) {
    return json{{"n", grid.n()}, {"half_extent", grid.half_extent()}, {"spacing", grid.spacing()}};
}

json to_json(const MomentReport &r) {
    return json{{"p_post", r.p_post}, {"x", r.x},           {"y", r.y},
                {"xy", r.xy},         {"px", r.px},         {"py", r.py},
                {"re_xpy", r.xpy.real()}, {"im_xpy", r.xpy.imag()},
                {"re_ypx", r.ypx.real()}, {"im_ypx", r.ypx.imag()},
                {"grid", to_json(r.grid)}};
}

json to_json(const Prediction &p) {
    return json{{"value", complex_pair(p.value)},
                {"order_used", p.order_used},
                {"p_post0", p.p_post0},
                {"conditioned", complex_pair(p.conditioned())},
                {"terms",
                 {{"zeroth", complex_pair(p.terms.zeroth)},
                  {"first_commutator", complex_pair(p.terms.first)},
                  {"second_commutator", complex_pair(p.terms.second)}}}};
}

json to_json(const ExtractionResult &r) {
    return json{{"target", r.target},
                {"estimated", r.estimated},
                {"reference", r.reference},
                {"relative_error", r.relative_error},
                {"inputs",
                 {{"delta", r.inputs.delta},
                  {"epsilon", r.inputs.epsilon},
                  {"l", r.inputs.l},
                  {"sigma", r.inputs.sigma},
                  {"grid", to_json(r.inputs.grid)}}}};
}

json to_json(const ConvergenceReport &r) {
    json out{{"degenerate", r.degenerate}, {"residuals", r.residuals}};
    // NaN has no JSON representation.
    out["slope"] = r.degenerate ? json(nullptr) : json(r.slope);
    out["intercept"] = r.degenerate ? json(nullptr) : json(r.intercept);
    return out;
}

json read_json(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::BadInput, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw Error(ErrorCode::BadInput, path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path &path, const json &doc) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::BadInput, "cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_field(const std::filesystem::path &csv_path, const GridField &field) {
    std::ofstream out(csv_path);
    if (!out) throw Error(ErrorCode::BadInput, "cannot write " + csv_path.string());
    const GridSpec &g = field.grid();
    out << "x,y,re,im\n";
    for (int j = 0; j < g.n(); ++j) {
        for (int k = 0; k < g.n(); ++k) {
            const cplx v = field.at(j, k);
            out << format_double(g.coordinate(j)) << ',' << format_double(g.coordinate(k)) << ','
                << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
        }
    }
    std::filesystem::path sidecar = csv_path;
    sidecar += ".json";
    write_json(sidecar, json{{"grid", to_json(g)}, {"layout", "row-major, x outer, y inner"},
                             {"columns", {"x", "y", "re", "im"}}});
}

GridField read_field(const std::filesystem::path &csv_path) {
    std::filesystem::path sidecar = csv_path;
    sidecar += ".json";
    const json meta = read_json(sidecar);
    const GridSpec grid = GridSpec::make(meta.at("grid").at("n").get<int>(),
                                         meta.at("grid").at("half_extent").get<double>());
    std::ifstream in(csv_path);
    if (!in) throw Error(ErrorCode::BadInput, "cannot open " + csv_path.string());
    std::string line;
    std::getline(in, line);
    std::vector<cplx> values;
    values.reserve(grid.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double cols[4];
        const char *p = line.data();
        const char *end = line.data() + line.size();
        for (double &c : cols) {
            const auto res = std::from_chars(p, end, c);
            if (res.ec != std::errc()) throw Error(ErrorCode::BadInput, "malformed field row: " + line);
            p = res.ptr < end ? res.ptr + 1 : res.ptr;
        }
        values.emplace_back(cols[2], cols[3]);
    }
    return GridField(grid, std::move(values));
}

}  // namespace weakoam::io

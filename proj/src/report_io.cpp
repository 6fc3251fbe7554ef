#include "sepind/report_io.hpp"

#include <bit>
#include <fstream>
#include <sstream>

namespace sepind {

namespace {

const Json& require(const Json& doc, const char* key, const std::string& where) {
    if (!doc.is_object()) throw InputError(where.empty() ? "<root>" : where, "expected an object");
    auto it = doc.find(key);
    const std::string field = where.empty() ? key : where + "." + key;
    if (it == doc.end()) throw InputError(field, "missing");
    return *it;
}

std::string join(const std::string& where, const char* key) { return where.empty() ? key : where + "." + key; }

double number(const Json& v, const std::string& field) {
    if (!v.is_number()) throw InputError(field, "expected a number");
    return v.get<double>();
}

std::size_t count(const Json& v, const std::string& field) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) throw InputError(field, "expected a non-negative integer");
    const auto x = v.get<std::int64_t>();
    if (x < 0) throw InputError(field, "expected a non-negative integer");
    return static_cast<std::size_t>(x);
}

std::vector<std::vector<double>> grid(const Json& v, const std::string& field) {
    if (!v.is_array()) throw InputError(field, "expected a 2-D array");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string rf = field + "[" + std::to_string(i) + "]";
        if (!v[i].is_array()) throw InputError(rf, "expected an array");
        std::vector<double> row;
        for (std::size_t j = 0; j < v[i].size(); ++j) row.push_back(number(v[i][j], rf + "[" + std::to_string(j) + "]"));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json extremes_to_json(const Extremes& e) { return Json{{"m", e.min}, {"M", e.max}}; }

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
    Json re = Json::array();
    Json im = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json rr = Json::array();
        Json ir = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            rr.push_back(m(i, j).real());
            ir.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ir));
    }
    return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexMatrix matrix_from_json(const Json& doc, const std::string& field) {
    const auto re = grid(require(doc, "re", field), join(field, "re"));
    const auto im = grid(require(doc, "im", field), join(field, "im"));
    const std::size_t n = re.size();
    if (n == 0) throw InputError(join(field, "re"), "empty matrix");
    for (std::size_t i = 0; i < n; ++i) {
        if (re[i].size() != n) throw InputError(join(field, "re") + "[" + std::to_string(i) + "]", "matrix is not square");
    }
    if (im.size() != n) throw InputError(join(field, "im"), "shape differs from re");
    for (std::size_t i = 0; i < n; ++i) {
        if (im[i].size() != n) throw InputError(join(field, "im") + "[" + std::to_string(i) + "]", "shape differs from re");
    }
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = Complex(re[i][j], im[i][j]);
    return m;
}

MatrixFile parse_matrix_file(const Json& doc) {
    if (!doc.is_object()) throw InputError("<root>", "expected an object");
    MatrixFile f;
    f.matrix = matrix_from_json(require(doc, "matrix", ""), "matrix");
    if (auto it = doc.find("dims"); it != doc.end()) {
        if (!it->is_array()) throw InputError("dims", "expected an array of counts");
        std::vector<std::size_t> dims;
        std::size_t product = 1;
        for (std::size_t j = 0; j < it->size(); ++j) {
            dims.push_back(count((*it)[j], "dims[" + std::to_string(j) + "]"));
            product *= dims.back();
        }
        if (product != f.matrix.rows()) {
            throw InputError("dims", "product " + std::to_string(product) + " does not match matrix side " +
                                         std::to_string(f.matrix.rows()));
        }
        f.dims = std::move(dims);
    }
    if (auto it = doc.find("metadata"); it != doc.end()) {
        if (!it->is_object()) throw InputError("metadata", "expected an object");
        f.metadata = *it;
    }
    return f;
}

Json to_json(const MatrixFile& f) {
    Json doc = Json::object();
    if (f.dims) doc["dims"] = *f.dims;
    doc["matrix"] = matrix_to_json(f.matrix);
    doc["metadata"] = f.metadata;
    return doc;
}

std::string input_digest(const ComplexMatrix& m) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto feed = [&](double x) {
        const auto bits = std::bit_cast<std::uint64_t>(x);
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xffu;
            h *= 0x100000001b3ull;
        }
    };
    for (const auto& z : m.entries()) {
        feed(z.real());
        feed(z.imag());
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = hex[h & 0xf];
    return out;
}

Json to_json(const ReportFile& r) {
    Json report = Json::object();
    report["q"] = r.report.q;
    report["lower_bound"] = r.report.lower_bound;
    report["upper_bound_mA"] = r.report.upper_bound_mA;
    report["M_A"] = r.report.M_A;
    report["ppt_min_eig"] = r.report.ppt_min_eig;
    if (r.report.verdict) report["verdict"] = std::string(to_string(*r.report.verdict));

    Json terms = Json::array();
    for (const auto& t : r.report.spectra.terms) {
        Json row = Json::array();
        for (const auto& e : t) row.push_back(extremes_to_json(e));
        terms.push_back(std::move(row));
    }

    Json doc = Json::object();
    doc["tool"] = r.tool;
    doc["version"] = r.version;
    doc["input_digest"] = r.input_digest;
    doc["profile"] = r.profile;
    doc["method"] = std::string(to_string(r.method));
    doc["report"] = std::move(report);
    doc["decomposition"] = Json{{"term_count", r.report.term_count()}, {"terms", std::move(terms)}};
    return doc;
}

ReportFile report_from_json(const Json& doc) {
    auto str = [](const Json& v, const std::string& field) {
        if (!v.is_string()) throw InputError(field, "expected a string");
        return v.get<std::string>();
    };
    ReportFile r;
    r.tool = str(require(doc, "tool", ""), "tool");
    r.version = str(require(doc, "version", ""), "version");
    r.input_digest = str(require(doc, "input_digest", ""), "input_digest");
    const Json& profile = require(doc, "profile", "");
    if (!profile.is_array()) throw InputError("profile", "expected an array");
    for (std::size_t j = 0; j < profile.size(); ++j) r.profile.push_back(count(profile[j], "profile[" + std::to_string(j) + "]"));
    const auto method = parse_method(str(require(doc, "method", ""), "method"));
    if (!method) throw InputError("method", "unknown method");
    r.method = *method;

    const Json& rep = require(doc, "report", "");
    r.report.q = number(require(rep, "q", "report"), "report.q");
    r.report.lower_bound = number(require(rep, "lower_bound", "report"), "report.lower_bound");
    r.report.upper_bound_mA = number(require(rep, "upper_bound_mA", "report"), "report.upper_bound_mA");
    r.report.M_A = number(require(rep, "M_A", "report"), "report.M_A");
    r.report.ppt_min_eig = number(require(rep, "ppt_min_eig", "report"), "report.ppt_min_eig");
    if (auto it = rep.find("verdict"); it != rep.end()) {
        const auto v = parse_verdict(str(*it, "report.verdict"));
        if (!v) throw InputError("report.verdict", "unknown verdict");
        r.report.verdict = *v;
    }

    const Json& dec = require(doc, "decomposition", "");
    const Json& terms = require(dec, "terms", "decomposition");
    if (!terms.is_array()) throw InputError("decomposition.terms", "expected an array");
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const std::string tf = "decomposition.terms[" + std::to_string(t) + "]";
        if (!terms[t].is_array()) throw InputError(tf, "expected an array");
        std::vector<Extremes> row;
        for (std::size_t j = 0; j < terms[t].size(); ++j) {
            const std::string ff = tf + "[" + std::to_string(j) + "]";
            row.push_back({number(require(terms[t][j], "m", ff), ff + ".m"), number(require(terms[t][j], "M", ff), ff + ".M")});
        }
        r.report.spectra.terms.push_back(std::move(row));
    }
    if (count(require(dec, "term_count", "decomposition"), "decomposition.term_count") != r.report.term_count()) {
        throw InputError("decomposition.term_count", "does not match the number of terms");
    }
    return r;
}

Json factorization_to_json(const TensorFactorization& f) {
    Json terms = Json::array();
    for (const auto& t : f.terms) {
        Json row = Json::array();
        for (const auto& factor : t) row.push_back(matrix_to_json(factor.matrix()));
        terms.push_back(std::move(row));
    }
    return terms;
}

TensorFactorization factorization_from_json(const Json& doc, const DimProfile& profile) {
    if (!doc.is_array()) throw InputError("terms", "expected an array");
    TensorFactorization f{profile, {}};
    for (std::size_t t = 0; t < doc.size(); ++t) {
        const std::string tf = "terms[" + std::to_string(t) + "]";
        if (!doc[t].is_array()) throw InputError(tf, "expected an array");
        Term term;
        for (std::size_t j = 0; j < doc[t].size(); ++j) {
            term.emplace_back(matrix_from_json(doc[t][j], tf + "[" + std::to_string(j) + "]"));
        }
        f.terms.push_back(std::move(term));
    }
    check_shape(f);
    return f;
}

Json unit_products_to_json(const std::vector<UnitProduct>& terms) {
    Json out = Json::array();
    for (const auto& t : terms) {
        Json positions = Json::array();
        for (const auto& [r, c] : t.positions) positions.push_back(Json::array({r, c}));
        out.push_back(Json{{"coefficient", Json{{"re", t.coefficient.real()}, {"im", t.coefficient.imag()}}},
                           {"positions", std::move(positions)}});
    }
    return out;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("<file>", "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return Json::parse(buf.str());
    } catch (const Json::parse_error& e) {
        throw InputError("<file>", std::string("invalid JSON: ") + e.what());
    }
}

std::string dump_json(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace sepind

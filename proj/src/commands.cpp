#include "sepind/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "sepind/decompose.hpp"
#include "sepind/indicator.hpp"
#include "sepind/ppt_oracle.hpp"
#include "sepind/report_io.hpp"
#include "sepind/state_library.hpp"

namespace sepind {

namespace {

constexpr const char* kRandomSeparable = "random-separable";

struct Globals {
    double tol = 0.0;
    CLI::Option* tol_opt = nullptr;
    std::uint64_t seed = 0;
    std::string output;
    bool hermitian_only = false;

    std::optional<double> tolerance() const { return tol_opt->count() ? std::optional<double>(tol) : std::nullopt; }
};

// Parameter flags shared by gen (single values) and sweep (ranges).
struct ParamFlags {
    std::map<std::string, std::string> raw;
    bool normalized = false;
    std::vector<std::size_t> dims;
    std::size_t terms = 3;
};

void add_param_flags(CLI::App* sub, ParamFlags& p) {
    for (const char* name : {"f", "a", "b", "c"}) {
        sub->add_option_function<std::string>(
            std::string("--") + name, [&p, name](const std::string& v) { p.raw[name] = v; },
            std::string("Value of parameter ") + name);
    }
    sub->add_flag("--normalized", p.normalized, "Divide rho-b by its trace");
    sub->add_option("--dims", p.dims, "Subsystem dimensions, e.g. 2,3")->delimiter(',');
    sub->add_option("--terms", p.terms, "Number of product terms (random-separable)")->check(CLI::PositiveNumber);
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_double(const std::string& text, const std::string& field) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw InputError(field, "not a number: '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(v)) throw InputError(field, "not a number: '" + text + "'");
    return v;
}

void emit(const Globals& g, const std::string& text, std::ostream& out) {
    if (g.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(g.output, std::ios::binary);
    if (!f) throw InputError("--output", "cannot write '" + g.output + "'");
    f << text;
}

DimProfile make_profile(const std::vector<std::size_t>& dims, const std::string& field) {
    try {
        return DimProfile(dims);
    } catch (const DimensionError& e) {
        throw InputError(field, e.what());
    }
}

DimProfile resolve_profile(const std::vector<std::size_t>& flag, const MatrixFile& file) {
    std::vector<std::size_t> dims;
    if (!flag.empty()) {
        if (file.dims && *file.dims != flag) throw InputError("dims", "--dims disagrees with the dims stored in the input");
        dims = flag;
    } else if (file.dims) {
        dims = *file.dims;
    } else {
        throw InputError("dims", "required: pass --dims or store dims in the input");
    }
    DimProfile p = make_profile(dims, "dims");
    if (p.total() != file.matrix.rows()) throw InputError("dims", "product does not match the matrix side");
    return p;
}

// --- states -----------------------------------------------------------------------

const std::map<std::string, std::vector<std::string>>& allowed_params() {
    static const std::map<std::string, std::vector<std::string>> table = {
        {"werner", {"f"}}, {"rho-b", {"b"}}, {"example3", {"a", "b", "c"}}, {"maximally-mixed", {}}, {kRandomSeparable, {}}};
    return table;
}

void check_params(const std::string& state, const std::map<std::string, std::string>& raw) {
    auto it = allowed_params().find(state);
    if (it == allowed_params().end()) throw InputError("state", "unknown state '" + state + "'");
    for (const auto& [k, v] : raw) {
        (void)v;
        bool ok = false;
        for (const auto& a : it->second) ok = ok || a == k;
        if (!ok) throw InputError("--" + k, "parameter does not apply to state '" + state + "'");
    }
}

MatrixFile state_file(const std::string& state, const std::map<std::string, double>& values, const ParamFlags& p,
                      const Globals& g) {
    MatrixFile file;
    Json params = Json::object();
    for (const auto& [k, v] : values) params[k] = v;
    file.metadata["state"] = state;

    if (state == kRandomSeparable) {
        const DimProfile profile = make_profile(p.dims.empty() ? std::vector<std::size_t>{2, 2} : p.dims, "--dims");
        auto sample = random_separable(profile, p.terms, g.seed);
        file.dims = profile.dims();
        file.matrix = sample.state.matrix();
        params["terms"] = p.terms;
        params["seed"] = g.seed;
        file.metadata["parameters"] = params;
        return file;
    }

    const auto name = parse_state_name(state);
    if (!name || *name == StateName::Custom) throw InputError("state", "unknown state '" + state + "'");
    StateSpec spec{*name, values};
    if (p.normalized) {
        if (*name != StateName::RhoB) throw InputError("--normalized", "applies to rho-b only");
        spec.parameters["normalized"] = 1.0;
        params["normalized"] = true;
    }
    std::optional<DimProfile> profile;
    if (!p.dims.empty()) {
        if (*name != StateName::MaximallyMixed) throw InputError("--dims", "applies to maximally-mixed and random-separable only");
        profile = make_profile(p.dims, "--dims");
    }
    const HermitianOperator a = make_state(spec, profile);
    file.dims = (profile ? *profile : default_profile(*name)).dims();
    file.matrix = a.matrix();
    file.metadata["parameters"] = params;
    return file;
}

// --- reports ----------------------------------------------------------------------

ReportFile build_report(const MatrixFile& file, const DimProfile& profile, Method method, const Globals& g) {
    const HermitianOperator a(file.matrix);
    AnalysisOptions opts;
    opts.method = method;
    opts.verdict = !g.hermitian_only;
    opts.reconstruction_tolerance = g.tolerance();
    ReportFile r;
    r.input_digest = input_digest(file.matrix);
    r.profile = profile.dims();
    r.method = method;
    r.report = analyze(a, profile, opts);
    return r;
}

Json header() { return Json{{"tool", kToolName}, {"version", kToolVersion}}; }

// --- commands ---------------------------------------------------------------------

struct DecomposeArgs {
    std::string input;
    std::string method = "elementary";
    std::vector<std::size_t> dims;
    bool merge = false;
};

int cmd_decompose(const DecomposeArgs& args, const Globals& g, std::ostream& out) {
    const MatrixFile file = parse_matrix_file(read_json_file(args.input));
    const DimProfile profile = resolve_profile(args.dims, file);
    const HermitianOperator a(file.matrix);
    if (args.merge && args.method != "elementary") throw InputError("--merge", "applies to the elementary method only");

    Json doc = header();
    doc["input_digest"] = input_digest(file.matrix);
    doc["profile"] = profile.dims();
    doc["method"] = args.method;
    doc["merge"] = args.merge;

    if (args.method == "unit") {
        const auto terms = expand_units(file.matrix, profile);
        const double scale = file.matrix.max_abs();
        double err = max_abs_diff(reconstruct_units(terms, profile), file.matrix);
        if (scale > 0.0) err /= scale;
        if (err > g.tolerance().value_or(1e-12)) {
            throw ReconstructionError("unit expansion misses reconstruction tolerance: " + format_double(err));
        }
        doc["term_count"] = terms.size();
        doc["reconstruction_error"] = err;
        doc["terms"] = unit_products_to_json(terms);
    } else {
        TensorFactorization f;
        if (args.method == "svd") {
            SvdOptions so;
            if (g.tolerance()) so.reconstruction_tolerance = *g.tolerance();
            f = decompose_svd(a, profile, so);
        } else {
            ElementaryOptions eo;
            eo.merge = args.merge;
            if (g.tolerance()) eo.reconstruction_tolerance = *g.tolerance();
            f = decompose_elementary(a, profile, eo);
        }
        doc["term_count"] = f.terms.size();
        doc["reconstruction_error"] = relative_reconstruction_error(f, a);
        doc["terms"] = factorization_to_json(f);
    }
    emit(g, dump_json(doc), out);
    return kExitOk;
}

struct AnalyzeArgs {
    std::string input;
    std::string method = "elementary";
    std::vector<std::size_t> dims;
};

int cmd_analyze(const AnalyzeArgs& args, const Globals& g, std::ostream& out) {
    const MatrixFile file = parse_matrix_file(read_json_file(args.input));
    const DimProfile profile = resolve_profile(args.dims, file);
    const ReportFile r = build_report(file, profile, *parse_method(args.method), g);
    emit(g, dump_json(to_json(r)), out);
    return kExitOk;
}

struct GenArgs {
    std::string state;
    ParamFlags params;
};

int cmd_gen(const GenArgs& args, const Globals& g, std::ostream& out) {
    check_params(args.state, args.params.raw);
    std::map<std::string, double> values;
    for (const auto& [k, v] : args.params.raw) values[k] = parse_double(v, "--" + k);
    emit(g, dump_json(to_json(state_file(args.state, values, args.params, g))), out);
    return kExitOk;
}

struct SweepArgs {
    std::string state;
    ParamFlags params;
    std::string method = "elementary";
    std::string table;
};

int cmd_sweep(const SweepArgs& args, const Globals& g, std::ostream& out) {
    check_params(args.state, args.params.raw);
    if (args.params.raw.empty()) throw InputError("state", "no parameter to sweep for '" + args.state + "'");

    std::map<std::string, std::vector<double>> ranges;
    std::string swept;
    for (const auto& [k, v] : args.params.raw) {
        try {
            ranges[k] = parse_range(v);
        } catch (const InputError& e) {
            throw InputError("--" + k, e.what());
        }
        if (ranges[k].size() > 1) {
            if (!swept.empty()) throw InputError("--" + k, "only one parameter may be swept");
            swept = k;
        }
    }
    if (swept.empty()) swept = ranges.begin()->first;
    const Method method = *parse_method(args.method);

    Json reports = Json::array();
    Json summary = Json::array();
    std::string table = swept + "\tq\tlower_bound\tupper_bound_mA\tppt_min_eig\tverdict\n";
    for (double x : ranges[swept]) {
        std::map<std::string, double> values;
        for (const auto& [k, r] : ranges) values[k] = r.front();
        values[swept] = x;

        const MatrixFile file = state_file(args.state, values, args.params, g);
        const ReportFile r = build_report(file, make_profile(*file.dims, "dims"), method, g);
        const std::string verdict = r.report.verdict ? std::string(to_string(*r.report.verdict)) : "-";

        Json row = Json::object();
        row[swept] = x;
        row["q"] = r.report.q;
        row["lower_bound"] = r.report.lower_bound;
        row["upper_bound_mA"] = r.report.upper_bound_mA;
        row["ppt_min_eig"] = r.report.ppt_min_eig;
        if (r.report.verdict) row["verdict"] = verdict;
        summary.push_back(std::move(row));
        reports.push_back(to_json(r));

        table += format_double(x) + "\t" + format_double(r.report.q) + "\t" + format_double(r.report.lower_bound) + "\t" +
                 format_double(r.report.upper_bound_mA) + "\t" + format_double(r.report.ppt_min_eig) + "\t" + verdict +
                 "\n";
    }

    Json doc = header();
    doc["state"] = args.state;
    doc["parameter"] = swept;
    doc["method"] = args.method;
    doc["grid_size"] = summary.size();
    doc["reports"] = std::move(reports);
    doc["summary"] = std::move(summary);

    if (!args.table.empty()) {
        std::ofstream f(args.table, std::ios::binary);
        if (!f) throw InputError("--table", "cannot write '" + args.table + "'");
        f << table;
    }
    emit(g, dump_json(doc), out);
    return kExitOk;
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t pos; (pos = text.find(':', start)) != std::string::npos; start = pos + 1)
        parts.push_back(text.substr(start, pos - start));
    parts.push_back(text.substr(start));

    if (parts.size() == 1) return {parse_double(parts[0], "range")};
    if (parts.size() != 3) throw InputError("range", "expected start:stop:step, got '" + text + "'");
    const double a = parse_double(parts[0], "range");
    const double b = parse_double(parts[1], "range");
    const double step = parse_double(parts[2], "range");
    if (!(step > 0.0)) throw InputError("range", "step must be positive");
    if (b < a) throw InputError("range", "stop is below start");
    const double span = (b - a) / step;
    if (span > 1e6) throw InputError("range", "more than a million grid points");

    const auto n = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    std::vector<double> grid(n);
    // When the step divides the interval, interpolate so that grid points are the
    // nearest doubles to a + i (b - a) / (n - 1) rather than accumulating step errors.
    const bool even = n > 1 && std::abs(a + static_cast<double>(n - 1) * step - b) <= 1e-9 * step;
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = even ? a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1)
                       : a + static_cast<double>(i) * step;
    }
    return grid;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Decomposes Hermitian operators into sums of tensor products and reports separability indicators.",
                 kToolName};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    g.tol_opt = app.add_option("--tol", g.tol, "Reconstruction tolerance override")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "Seed for random states");
    app.add_option("--output", g.output, "Write the result here instead of stdout");
    app.add_flag("--hermitian-only", g.hermitian_only, "Accept any Hermitian input and omit the verdict");

    DecomposeArgs dargs;
    auto* dec = app.add_subcommand("decompose", "Factorize a matrix into tensor-product terms");
    dec->add_option("input", dargs.input, "MatrixFile path")->required();
    dec->add_option("--method", dargs.method, "elementary, svd or unit")
        ->check(CLI::IsMember({"elementary", "svd", "unit"}));
    dec->add_option("--dims", dargs.dims, "Subsystem dimensions, e.g. 2,4")->delimiter(',');
    dec->add_flag("--merge", dargs.merge, "Merge terms sharing their leading factors");

    AnalyzeArgs aargs;
    auto* ana = app.add_subcommand("analyze", "Compute q, its bounds, the PPT value and a verdict");
    ana->add_option("input", aargs.input, "MatrixFile path")->required();
    ana->add_option("--method", aargs.method, "elementary or svd")->check(CLI::IsMember({"elementary", "svd"}));
    ana->add_option("--dims", aargs.dims, "Subsystem dimensions, e.g. 2,2")->delimiter(',');

    GenArgs gargs;
    auto* gen = app.add_subcommand("gen", "Write a named state as a MatrixFile");
    gen->add_option("state", gargs.state, "werner, rho-b, example3, maximally-mixed or random-separable")->required();
    add_param_flags(gen, gargs.params);

    SweepArgs sargs;
    auto* swp = app.add_subcommand("sweep", "Analyze a named state over a parameter grid");
    swp->add_option("state", sargs.state, "State name")->required();
    add_param_flags(swp, sargs.params);
    swp->add_option("--method", sargs.method, "elementary or svd")->check(CLI::IsMember({"elementary", "svd"}));
    swp->add_option("--table", sargs.table, "Also write the summary as tab-separated text");

    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.emplace_back(kToolName);
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }

    try {
        if (dec->parsed()) return cmd_decompose(dargs, g, out);
        if (ana->parsed()) return cmd_analyze(aargs, g, out);
        if (gen->parsed()) return cmd_gen(gargs, g, out);
        return cmd_sweep(sargs, g, out);
    } catch (const HermiticityError& e) {
        err << "error: " << e.what() << "\n";
        return kExitNotDensity;
    } catch (const NotDensityError& e) {
        err << "error: " << e.what() << "\n";
        return kExitNotDensity;
    } catch (const ReconstructionError& e) {
        err << "error: " << e.what() << "\n";
        return kExitReconstruction;
    } catch (const std::invalid_argument& e) {
        // InputError, DomainError, DimensionError
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
}

}  // namespace sepind

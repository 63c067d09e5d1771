#include "whh/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "whh/factorization.hpp"
#include "whh/oracle.hpp"
#include "whh/whh.hpp"

namespace whh {

namespace {

using json = nlohmann::json;

constexpr double kAngleTol = 1e-6;
constexpr int kExitVerifyFailed = 5;
constexpr int kExitInternal = 6;

json read_json_file(const std::string& path, const char* what)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::Parse, std::string("cannot open ") + what + " file", path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Parse, std::string(what) + " file is not valid JSON: " + e.what(), path);
    }
}

std::vector<int> signs_of(const std::string& s)
{
    if (s == "plus")
        return {1};
    if (s == "minus")
        return {-1};
    if (s == "both")
        return {1, -1};
    throw Error(ErrorCode::Parse, "sign must be plus, minus or both", s);
}

const char* sign_name(int sign) { return sign > 0 ? "plus" : "minus"; }

SymbolExpr adjoint_b(const SymbolExpr& b) { return conjugate(reflect(b)); }

void validate(const RunConfig& c)
{
    static const char* ops[] = {"analyze", "kernel", "cokernel", "verify", "oracle", "sample"};
    if (std::find(std::begin(ops), std::end(ops), c.op) == std::end(ops))
        throw Error(ErrorCode::Parse, "unknown operation", c.op);
    signs_of(c.sign);
    if (c.galerkin_n < 1)
        throw Error(ErrorCode::Parse, "galerkin N must be at least 1", std::to_string(c.galerkin_n));
    if (!(c.svd_tol > 0 && c.svd_tol < 1))
        throw Error(ErrorCode::Parse, "svd tolerance must lie in (0, 1)");
    if (!(c.residual_tol > 0 && c.residual_tol < 1))
        throw Error(ErrorCode::Parse, "residual tolerance must lie in (0, 1)");
}

json dimension_json(const Dimension& d) { return d.infinite ? json("inf") : json(d.value); }

json index_json(const Dimension& ker, const Dimension& coker)
{
    if (ker.infinite && coker.infinite)
        return nullptr;
    if (ker.infinite)
        return "inf";
    if (coker.infinite)
        return "-inf";
    return ker.value - coker.value;
}

long double relative_residual(const SymbolExpr& a, const SymbolExpr& b, int sign, const PiecewiseExpPoly& h)
{
    long double nh = l2_norm(h);
    return nh == 0 ? 0.0L : l2_norm(whh_apply(a, b, sign, h)) / nh;
}

json samples_json(const PiecewiseExpPoly& h, const std::vector<long double>& grid)
{
    json s = json::array();
    auto values = sample(h, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        s.push_back({static_cast<double>(grid[i]), static_cast<double>(values[i].real()),
                     static_cast<double>(values[i].imag())});
    return s;
}

// Concrete free elements generated from the user function, one per free summand.
std::vector<PiecewiseExpPoly> free_instances(const WHHKernel& k, const std::optional<PiecewiseExpPoly>& f)
{
    std::vector<PiecewiseExpPoly> out;
    if (!f)
        return out;
    for (const auto& fs : k.free)
        out.push_back(fs.generate(restrict_to(*f, 0, fs.source.window)));
    return out;
}

json residual_entry(const std::string& what, long double value, double tol)
{
    return {{"what", what}, {"relative_residual", static_cast<double>(value)}, {"pass", value <= tol}};
}

// Kernel of W(pa) + sign H(pb) as JSON, with residuals against that operator.
json kernel_section(const SymbolExpr& pa, const SymbolExpr& pb, int sign, const WHHKernel& k,
                    const std::optional<PiecewiseExpPoly>& f, const std::vector<long double>& grid, double tol,
                    bool& all_pass)
{
    json j = to_json(k, grid);
    j["dimension"] = dimension_json(k.dimension());
    json table = json::array();
    for (std::size_t i = 0; i < k.finite_basis.size(); ++i) {
        long double r = relative_residual(pa, pb, sign, k.finite_basis[i]);
        all_pass = all_pass && r <= tol;
        table.push_back(residual_entry("basis[" + std::to_string(i) + "]", r, tol));
    }
    auto inst = free_instances(k, f);
    for (std::size_t i = 0; i < inst.size(); ++i) {
        long double r = relative_residual(pa, pb, sign, inst[i]);
        all_pass = all_pass && r <= tol;
        table.push_back(residual_entry("free[" + std::to_string(i) + "](f)", r, tol));
        j["free"][i]["instance"] = {{"pieces", to_json(inst[i])}};
        if (!grid.empty())
            j["free"][i]["instance"]["samples"] = samples_json(inst[i], grid);
    }
    j["residuals"] = table;
    return j;
}

json op_analyze(const SymbolExpr& a, const SymbolExpr& b, const std::vector<int>& signs)
{
    const SubordinatedPair sp = subordinated_pair(MatchingPair(a, b));
    CaseTag tag = classify(a, b);
    json j = {{"case", to_json(tag)},
              {"adjoint_case", to_json(classify(conjugate(a), adjoint_b(b)))},
              {"subordinated", {{"c", to_json(sp.c)}, {"d", to_json(sp.d)}}},
              {"factorization", {{"c", to_json(matching_factorize(sp.c))}, {"d", to_json(matching_factorize(sp.d))}}}};
    j["indices"] = {{"nu_c", to_string(tag.nu_c)}, {"nu_d", to_string(tag.nu_d)}, {"n_c", tag.n_c},
                    {"n_d", tag.n_d},
                    {"kappa1", tag.kappa1 ? json(*tag.kappa1) : json(nullptr)},
                    {"kappa2", tag.kappa2 ? json(*tag.kappa2) : json(nullptr)}};
    json results = json::array();
    for (int sign : signs) {
        auto [ker, coker] = defect_numbers(a, b, sign);
        results.push_back({{"sign", sign_name(sign)},
                           {"dim_ker", dimension_json(ker)},
                           {"dim_coker", dimension_json(coker)},
                           {"index", index_json(ker, coker)}});
    }
    j["results"] = results;
    return j;
}

// Theory against the Galerkin oracle for one operator. `basis` spans the
// theoretical kernel when it is finite-dimensional.
json compare_with_oracle(const SymbolExpr& pa, const SymbolExpr& pb, int sign, const WHHKernel& k,
                         const RunConfig& c, bool& all_pass)
{
    const Dimension dim = k.dimension();
    json j = {{"theory", dimension_json(dim)}};
    GalerkinMatrix g = galerkin_matrix(pa, pb, sign, c.galerkin_n);
    if (!dim.infinite) {
        int numeric = numeric_defect(g, c.svd_tol);
        bool agree = numeric == dim.value;
        j["numeric"] = numeric;
        j["counts_agree"] = agree;
        all_pass = all_pass && agree;
        if (agree && numeric > 0) {
            double angle = subspace_angle(psi_coordinates(k.finite_basis, c.galerkin_n), numeric_null_space(g, c.svd_tol));
            bool ok = angle <= kAngleTol;
            j["subspace_angle"] = angle;
            j["angle_pass"] = ok;
            all_pass = all_pass && ok;
        }
    } else {
        std::vector<int> sizes = {std::max(1, c.galerkin_n / 4), std::max(1, c.galerkin_n / 2), c.galerkin_n};
        auto counts = nullity_growth(pa, pb, sign, sizes);
        bool growing = counts[0] < counts[1] && counts[1] < counts[2];
        j["growth_sizes"] = sizes;
        j["growth_nullities"] = counts;
        j["growth_tol"] = kGrowthTol;
        j["growth_pass"] = growing;
        all_pass = all_pass && growing;
    }
    return j;
}

json op_verify(const SymbolExpr& a, const SymbolExpr& b, const std::vector<int>& signs, const RunConfig& c,
               const std::optional<PiecewiseExpPoly>& f, bool& all_pass)
{
    json results = json::array();
    for (int sign : signs) {
        WHHKernelReport r = analyze(a, b, sign);
        json table = json::array();
        for (const auto& d : r.diagnostics) {
            all_pass = all_pass && d.value <= c.residual_tol;
            table.push_back(residual_entry(d.what, d.value, c.residual_tol));
        }
        auto add_free = [&](const SymbolExpr& pa, const SymbolExpr& pb, const WHHKernel& k, const std::string& label) {
            auto inst = free_instances(k, f);
            for (std::size_t i = 0; i < inst.size(); ++i) {
                long double v = relative_residual(pa, pb, sign, inst[i]);
                all_pass = all_pass && v <= c.residual_tol;
                table.push_back(residual_entry(label + ".free[" + std::to_string(i) + "](f)", v, c.residual_tol));
            }
        };
        add_free(a, b, r.kernel, "kernel");
        add_free(conjugate(a), adjoint_b(b), r.cokernel, "cokernel");
        results.push_back({{"sign", sign_name(sign)},
                           {"case", to_json(r.tag)},
                           {"dim_ker", dimension_json(r.dim_ker)},
                           {"dim_coker", dimension_json(r.dim_coker)},
                           {"index", index_json(r.dim_ker, r.dim_coker)},
                           {"residuals", table},
                           {"oracle",
                            {{"kernel", compare_with_oracle(a, b, sign, r.kernel, c, all_pass)},
                             {"cokernel", compare_with_oracle(conjugate(a), adjoint_b(b), sign, r.cokernel, c, all_pass)}}}});
    }
    return {{"results", results}, {"angle_tol", kAngleTol}};
}

json op_kernel(const SymbolExpr& a, const SymbolExpr& b, const std::vector<int>& signs, bool cokernel,
               const std::optional<PiecewiseExpPoly>& f, const std::vector<long double>& grid, double tol,
               bool& all_pass)
{
    json results = json::array();
    for (int sign : signs) {
        json entry = {{"sign", sign_name(sign)}};
        if (cokernel)
            entry["cokernel"] = kernel_section(conjugate(a), adjoint_b(b), sign, cokernel_WplusH(a, b, sign), f, grid,
                                               tol, all_pass);
        else
            entry["kernel"] = kernel_section(a, b, sign, kernel_WplusH(a, b, sign), f, grid, tol, all_pass);
        results.push_back(entry);
    }
    return {{"results", results}};
}

json op_sample(const SymbolExpr& a, const SymbolExpr& b, const std::vector<int>& signs,
               const std::optional<PiecewiseExpPoly>& f, const std::vector<long double>& grid)
{
    auto elements = [&](const WHHKernel& k) {
        json out = json::array();
        for (std::size_t i = 0; i < k.finite_basis.size(); ++i)
            out.push_back({{"element", "basis[" + std::to_string(i) + "]"}, {"samples", samples_json(k.finite_basis[i], grid)}});
        auto inst = free_instances(k, f);
        for (std::size_t i = 0; i < inst.size(); ++i)
            out.push_back({{"element", "free[" + std::to_string(i) + "](f)"}, {"samples", samples_json(inst[i], grid)}});
        return out;
    };
    json results = json::array();
    for (int sign : signs)
        results.push_back({{"sign", sign_name(sign)},
                           {"kernel", elements(kernel_WplusH(a, b, sign))},
                           {"cokernel", elements(cokernel_WplusH(a, b, sign))}});
    json g = json::array();
    for (long double t : grid)
        g.push_back(static_cast<double>(t));
    return {{"grid", g}, {"results", results}};
}

bool ends_with(const std::string& s, const std::string& suffix)
{
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

json op_oracle(const SymbolExpr& a, const SymbolExpr& b, const std::vector<int>& signs, const RunConfig& c,
               std::ostream* binary)
{
    json results = json::array();
    for (int sign : signs) {
        GalerkinMatrix g = galerkin_matrix(a, b, sign, c.galerkin_n);
        NumericDefects d = numeric_defects(a, b, sign, c.galerkin_n, c.svd_tol);
        json entry = {{"sign", sign_name(sign)}, {"numeric_dim_ker", d.kernel}, {"numeric_dim_coker", d.cokernel}};
        if (binary)
            write_binary(g, *binary);
        else
            entry["matrix"] = to_json(g);
        results.push_back(entry);
    }
    return {{"results", results}};
}

void write_value(std::string& out, const json& j, int indent);

void write_scalar(std::string& out, const json& j)
{
    if (j.is_number_float()) {
        double v = j.get<double>();
        if (std::isnan(v))
            out += "\"nan\"";
        else if (std::isinf(v))
            out += v > 0 ? "\"inf\"" : "\"-inf\"";
        else {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.16e", v);
            out += buf;
        }
    } else {
        out += j.dump();
    }
}

bool is_flat(const json& j)
{
    for (const auto& e : j)
        if (e.is_structured() && !(e.is_array() && e.size() <= 3 && is_flat(e)))
            return false;
    return true;
}

void write_value(std::string& out, const json& j, int indent)
{
    const std::string pad(indent + 2, ' ');
    if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first)
                out += ",\n";
            first = false;
            out += pad + json(it.key()).dump() + ": ";
            write_value(out, it.value(), indent + 2);
        }
        out += "\n" + std::string(indent, ' ') + "}";
    } else if (j.is_array()) {
        if (j.empty()) {
            out += "[]";
            return;
        }
        if (is_flat(j) && j.size() <= 3) {
            out += "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i)
                    out += ", ";
                write_value(out, j[i], indent);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i)
                out += ",\n";
            out += pad;
            write_value(out, j[i], indent + 2);
        }
        out += "\n" + std::string(indent, ' ') + "]";
    } else {
        write_scalar(out, j);
    }
}

json config_json(const RunConfig& c)
{
    return {{"sign", c.sign},
            {"op", c.op},
            {"galerkin_n", c.galerkin_n},
            {"svd_tol", c.svd_tol},
            {"residual_tol", c.residual_tol},
            {"grid", c.grid ? json(*c.grid) : json(nullptr)},
            {"free_f", c.free_f ? json(*c.free_f) : json(nullptr)}};
}

} // namespace

int exit_code_for(ErrorCode code)
{
    switch (code) {
    case ErrorCode::Parse:
    case ErrorCode::NotInG:
        return 1;
    case ErrorCode::CaseUnsupported:
    case ErrorCode::FactorNotExact:
        return 2;
    case ErrorCode::NotMatching:
    case ErrorCode::NotInvertibleInG:
        return 3;
    case ErrorCode::RootOnAxis:
    case ErrorCode::PoleOnAxis:
        return 4;
    default:
        return kExitInternal;
    }
}

std::vector<long double> parse_grid(const std::string& text)
{
    std::stringstream in(text);
    std::string parts[3];
    for (int i = 0; i < 3; ++i)
        if (!std::getline(in, parts[i], ':'))
            throw Error(ErrorCode::Parse, "grid must be start:stop:count", text);
    std::string rest;
    if (std::getline(in, rest))
        throw Error(ErrorCode::Parse, "grid must be start:stop:count", text);
    long double start, stop;
    long long count;
    try {
        std::size_t p0, p1, p2;
        start = std::stold(parts[0], &p0);
        stop = std::stold(parts[1], &p1);
        count = std::stoll(parts[2], &p2);
        if (p0 != parts[0].size() || p1 != parts[1].size() || p2 != parts[2].size())
            throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
        throw Error(ErrorCode::Parse, "grid must be start:stop:count", text);
    }
    if (!std::isfinite(start) || !std::isfinite(stop) || !(start < stop) || count < 2 || count > 1000000)
        throw Error(ErrorCode::Parse, "grid needs finite start < stop and 2 <= count <= 1e6", text);
    std::vector<long double> grid(count);
    for (long long i = 0; i < count; ++i)
        grid[i] = start + (stop - start) * i / (count - 1);
    return grid;
}

std::string format_report(const json& j)
{
    std::string out;
    write_value(out, j, 0);
    out += "\n";
    return out;
}

RunResult run(const RunConfig& config)
{
    RunResult result;
    json report = {{"config", config_json(config)}};
    std::ofstream binary;
    try {
        validate(config);
        const std::vector<int> signs = signs_of(config.sign);
        std::vector<long double> grid;
        if (config.grid)
            grid = parse_grid(*config.grid);
        else if (config.op == "sample")
            grid = parse_grid("0:10:101");
        std::optional<PiecewiseExpPoly> f;
        if (config.free_f)
            f = piecewise_from_json(read_json_file(*config.free_f, "free function"));
        const SymbolExpr a = symbol_from_json(read_json_file(config.a_path, "symbol a"));
        const SymbolExpr b = symbol_from_json(read_json_file(config.b_path, "symbol b"));
        report["a"] = to_json(a);
        report["b"] = to_json(b);

        bool all_pass = true;
        json body;
        if (config.op == "analyze") {
            body = op_analyze(a, b, signs);
        } else if (config.op == "kernel" || config.op == "cokernel") {
            body = op_kernel(a, b, signs, config.op == "cokernel", f, grid, config.residual_tol, all_pass);
            body["residuals_pass"] = all_pass;
        } else if (config.op == "verify") {
            body = op_verify(a, b, signs, config, f, all_pass);
            body["pass"] = all_pass;
            if (!all_pass)
                result.exit_code = kExitVerifyFailed;
        } else if (config.op == "oracle") {
            const bool to_binary = ends_with(config.out, ".bin");
            if (to_binary) {
                binary.open(config.out, std::ios::binary);
                if (!binary)
                    throw Error(ErrorCode::Parse, "cannot open output file", config.out);
            }
            body = op_oracle(a, b, signs, config, to_binary ? &binary : nullptr);
            if (to_binary)
                body["binary"] = config.out;
        } else {
            body = op_sample(a, b, signs, f, grid);
        }
        for (auto it = body.begin(); it != body.end(); ++it)
            report[it.key()] = it.value();
    } catch (const Error& e) {
        result.exit_code = exit_code_for(e.code());
        result.diagnostic = e.what();
        report["error"] = {{"code", error_name(e.code())}, {"message", e.what()}, {"witness", e.witness()}};
    } catch (const std::exception& e) {
        result.exit_code = kExitInternal;
        result.diagnostic = e.what();
        report["error"] = {{"code", "Internal"}, {"message", e.what()}, {"witness", ""}};
    }
    report["exit_code"] = result.exit_code;
    result.report = format_report(report);
    if (!config.out.empty() && !binary.is_open()) {
        std::ofstream out(config.out, std::ios::binary);
        out << result.report;
        if (out)
            result.written = true;
        else if (result.exit_code == 0) {
            result.exit_code = 1;
            result.diagnostic = "cannot write " + config.out;
        }
    }
    return result;
}

} // namespace whh

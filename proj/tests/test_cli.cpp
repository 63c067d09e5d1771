#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "whh/cli.hpp"
#include "whh/errors.hpp"
#include "whh/whh.hpp"

using namespace whh;
using namespace whh::testing;
using json = nlohmann::json;

namespace {

namespace fs = std::filesystem;

fs::path scratch()
{
    fs::path dir = fs::temp_directory_path() / "whh_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string write_file(const std::string& name, const std::string& text)
{
    fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string write_symbol(const std::string& name, const SymbolExpr& s) { return write_file(name, to_json(s).dump()); }

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig config_for(const std::string& a, const std::string& b, const std::string& op)
{
    RunConfig c;
    c.a_path = a;
    c.b_path = b;
    c.op = op;
    return c;
}

json run_json(const RunConfig& c, int& code)
{
    RunResult r = run(c);
    code = r.exit_code;
    return json::parse(r.report);
}

const SymbolExpr one = SymbolExpr::constant(1);

} // namespace

TEST_CASE("analyze on a = b = 1")
{
    std::string p = write_symbol("one.json", one);
    int code = -1;
    json r = run_json(config_for(p, p, "analyze"), code);
    CHECK(code == 0);
    CHECK(r["indices"]["kappa1"] == 0);
    CHECK(r["indices"]["kappa2"] == 0);
    REQUIRE(r["results"].size() == 2);
    for (const auto& s : r["results"]) {
        CHECK(s["dim_ker"] == 0);
        CHECK(s["dim_coker"] == 0);
    }
}

TEST_CASE("non-matching pair exits 3")
{
    std::string a = write_symbol("cay.json", SymbolExpr::cayley(1));
    std::string b = write_symbol("b2.json", rat_symbol(lin(gi(0, 2)), lin(gi(0, -1))));
    int code = -1;
    json r = run_json(config_for(a, b, "kernel"), code);
    CHECK(code == 3);
    CHECK(r["error"]["code"] == "NotMatching");
}

TEST_CASE("verify on a = b = cayley^{-1}")
{
    std::string p = write_symbol("cinv.json", SymbolExpr::cayley(-1));
    RunConfig c = config_for(p, p, "verify");
    c.galerkin_n = 64;
    int code = -1;
    json r = run_json(c, code);
    CHECK(code == 0);
    CHECK(r["pass"] == true);
    for (const auto& s : r["results"]) {
        for (const auto& row : s["residuals"])
            CHECK(row["relative_residual"].get<double>() <= 1e-8);
        CHECK(s["oracle"]["kernel"]["subspace_angle"].get<double>() <= 1e-6);
        CHECK(s["dim_ker"] == 1);
    }
}

TEST_CASE("verify reports nullity growth for infinite kernels")
{
    std::string a = write_symbol("em.json", SymbolExpr::exponential(-1));
    std::string b = write_symbol("one.json", one);
    std::string f = write_file("f.json", to_json(polynomial_on({cplx(1), cplx(0, 1), cplx(-2)}, 0, 1)).dump());
    RunConfig c = config_for(a, b, "verify");
    c.free_f = f;
    int code = -1;
    json r = run_json(c, code);
    CHECK(code == 0);
    for (const auto& s : r["results"]) {
        CHECK(s["dim_ker"] == "inf");
        CHECK(s["oracle"]["kernel"]["growth_pass"] == true);
        int free_rows = 0;
        for (const auto& row : s["residuals"]) {
            CHECK(row["pass"] == true);
            free_rows += row["what"].get<std::string>().ends_with("(f)");
        }
        CHECK(free_rows == 2);
    }
}

TEST_CASE("unsupported and out-of-class inputs")
{
    std::mt19937 rng(3);
    SymbolExpr b = symbol_with_n(rng, 0, 1, Rational(-1, 2));
    SymbolExpr a = b * matching_with(rng, 0, 2, 0, 1);
    int code = -1;
    json r = run_json(config_for(write_symbol("ua.json", a), write_symbol("ub.json", b), "kernel"), code);
    CHECK(code == 2);
    CHECK(r["error"]["code"] == "CaseUnsupported");

    // t/(t + i) vanishes on the real line, so it is not invertible in G
    std::string zero_on_axis = write_symbol("z.json", rat_symbol(lin(gi(0, 0)), lin(gi(0, -1))));
    run_json(config_for(zero_on_axis, zero_on_axis, "analyze"), code);
    CHECK(code == 3);
    // (t + i)/t has a real pole and is rejected on ingestion
    std::string pole = write_file("pole.json", R"({"delta": "0", "num": [["0", "1"], ["1", "0"]], "den": [["0", "0"], ["1", "0"]]})");
    r = run_json(config_for(pole, pole, "analyze"), code);
    CHECK(code == 4);
    CHECK(r["error"]["code"] == "PoleOnAxis");

    std::string p = write_symbol("one.json", one);
    run_json(config_for(write_file("bad.json", "{\"delta\": \"0\", \"num\": [[\"x\"]]}"), p, "analyze"), code);
    CHECK(code == 1);
    run_json(config_for(write_file("broken.json", "{"), p, "analyze"), code);
    CHECK(code == 1);
    run_json(config_for((scratch() / "missing.json").string(), p, "analyze"), code);
    CHECK(code == 1);
    RunConfig c = config_for(p, p, "verify");
    c.galerkin_n = 0;
    run_json(c, code);
    CHECK(code == 1);
    c = config_for(p, p, "sample");
    c.grid = "1:0:5";
    run_json(c, code);
    CHECK(code == 1);
}

TEST_CASE("reports are deterministic and symbols round-trip")
{
    std::mt19937 rng(11);
    SymbolExpr b = symbol_with_n(rng, 1, 1, Rational(1, 3));
    SymbolExpr a = b * matching_with(rng, 0, -1, 1, -1);
    std::string pa = write_symbol("ra.json", a);
    std::string pb = write_symbol("rb.json", b);
    for (const char* op : {"analyze", "kernel", "verify", "sample"}) {
        RunConfig c = config_for(pa, pb, op);
        c.galerkin_n = 32;
        c.grid = "0:4:9";
        c.out = (scratch() / "r1.json").string();
        RunResult r1 = run(c);
        c.out = (scratch() / "r2.json").string();
        RunResult r2 = run(c);
        CAPTURE(op);
        CHECK(r1.written);
        CHECK(slurp((scratch() / "r1.json").string()) == slurp((scratch() / "r2.json").string()));
        json j = json::parse(r1.report);
        CHECK(symbol_from_json(j["a"]) == a);
        CHECK(symbol_from_json(j["b"]) == b);
    }
}

TEST_CASE("oracle export")
{
    std::string p = write_symbol("cay.json", SymbolExpr::cayley(1));
    RunConfig c = config_for(p, p, "oracle");
    c.sign = "plus";
    c.galerkin_n = 4;
    int code = -1;
    json r = run_json(c, code);
    CHECK(code == 0);
    CHECK(r["results"][0]["matrix"]["entries"][1][0][0].get<double>() == doctest::Approx(1.0));
    auto [dk, dc] = defect_numbers(SymbolExpr::cayley(1), SymbolExpr::cayley(1), 1);
    CHECK(r["results"][0]["numeric_dim_ker"] == dk.value);
    CHECK(r["results"][0]["numeric_dim_coker"] == dc.value);

    c.out = (scratch() / "m.bin").string();
    RunResult rb = run(c);
    CHECK(rb.exit_code == 0);
    CHECK_FALSE(rb.written);
    CHECK(slurp(c.out).size() == 8 + 2 * 16 * 8);
}

TEST_CASE("grid parsing")
{
    auto g = parse_grid("0:1:5");
    REQUIRE(g.size() == 5);
    CHECK(g[2] == 0.5L);
    CHECK(g[4] == 1.0L);
    for (const char* bad : {"0:1", "0:1:1", "1:0:3", "a:1:3", "0:1:3:4", "0:inf:3", "0:1:3x"})
        CHECK_THROWS_AS(parse_grid(bad), Error);
}

TEST_CASE("report formatting")
{
    json j = {{"z", 1.0 / 3.0}, {"a", std::numeric_limits<double>::infinity()}, {"m", {1, 2}}, {"s", "inf"}};
    std::string s = format_report(j);
    CHECK(s.find("3.3333333333333331e-01") != std::string::npos);
    CHECK(s.find("\"a\": \"inf\"") != std::string::npos);
    CHECK(s.find("\"a\"") < s.find("\"z\""));
    CHECK(json::parse(s)["m"][1] == 2);

    CHECK(exit_code_for(ErrorCode::Parse) == 1);
    CHECK(exit_code_for(ErrorCode::CaseUnsupported) == 2);
    CHECK(exit_code_for(ErrorCode::NotInvertibleInG) == 3);
    CHECK(exit_code_for(ErrorCode::RootOnAxis) == 4);
}

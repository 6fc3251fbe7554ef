#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sepind/commands.hpp"
#include "sepind/report_io.hpp"

using namespace sepind;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("sepind_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }

    std::string gen(const std::vector<std::string>& args, const std::string& name) const {
        std::vector<std::string> full = {"--output", path(name), "gen"};
        full.insert(full.end(), args.begin(), args.end());
        const auto r = run(full);
        EXPECT_EQ(r.code, 0) << r.err;
        return path(name);
    }

    fs::path dir_;
};

Json parse(const Run& r) { return Json::parse(r.out); }

}  // namespace

TEST_F(Cli, GenWernerQuarterIsDiagonal) {
    const auto file = parse_matrix_file(read_json_file(gen({"werner", "--f", "0.25"}, "w.json")));
    EXPECT_EQ(*file.dims, (std::vector<std::size_t>{2, 2}));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(file.matrix(i, j)), i == j ? 0.25 : 0.0, 1e-16);
}

TEST_F(Cli, GenNormalizedRhoBHasUnitTrace) {
    const auto file = parse_matrix_file(read_json_file(gen({"rho-b", "--b", "0.3", "--normalized"}, "r.json")));
    EXPECT_NEAR(file.matrix.trace().real(), 1.0, 1e-12);
}

TEST_F(Cli, GenRejectsBadStatesAndParameters) {
    EXPECT_EQ(run({"gen", "example3", "--a", "0", "--b", "1", "--c", "1"}).code, kExitInput);
    EXPECT_EQ(run({"gen", "ghz"}).code, kExitInput);
    EXPECT_EQ(run({"gen", "werner", "--b", "0.2"}).code, kExitInput);
    EXPECT_EQ(run({"gen", "werner", "--f", "abc"}).code, kExitInput);
    EXPECT_EQ(run({"gen", "werner"}).code, kExitInput);
    EXPECT_EQ(run({"gen", "werner", "--f", "0.2", "--normalized"}).code, kExitInput);
}

TEST_F(Cli, GenRandomSeparableUsesSeed) {
    const auto a = run({"--seed", "7", "gen", "random-separable", "--dims", "2,3", "--terms", "4"});
    const auto b = run({"--seed", "7", "gen", "random-separable", "--dims", "2,3", "--terms", "4"});
    const auto c = run({"--seed", "8", "gen", "random-separable", "--dims", "2,3", "--terms", "4"});
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, c.out);
}

TEST_F(Cli, DecomposeMethods) {
    const auto rho = gen({"rho-b", "--b", "0.3"}, "rho_b.json");
    auto unit = parse(run({"decompose", "--dims", "2,4", "--method", "unit", rho}));
    EXPECT_EQ(unit["term_count"], 16);
    EXPECT_LT(unit["reconstruction_error"].get<double>(), 1e-12);

    auto elem = parse(run({"decompose", "--dims", "2,4", "--method", "elementary", rho}));
    EXPECT_EQ(elem["term_count"], 15);
    EXPECT_LT(elem["reconstruction_error"].get<double>(), 1e-12);
    EXPECT_EQ(elem["terms"][0].size(), 2u);

    auto merged = parse(run({"decompose", "--merge", rho}));
    EXPECT_LT(merged["term_count"].get<int>(), 15);

    const auto w0 = gen({"werner", "--f", "0"}, "werner_f0.json");
    auto svd = parse(run({"decompose", "--dims", "2,2", "--method", "svd", w0}));
    EXPECT_LE(svd["term_count"].get<int>(), 4);
    EXPECT_LT(svd["reconstruction_error"].get<double>(), 1e-9);

    EXPECT_EQ(run({"decompose", "--method", "svd", "--merge", w0}).code, kExitInput);
    EXPECT_EQ(run({"decompose", "--method", "qr", w0}).code, kExitInput);
}

TEST_F(Cli, DecomposeMalformedInputNamesField) {
    const auto bad = write("bad.json", R"({"dims": [2, 2], "matrix": {"re": [[1, 0], [0, 1]]}})");
    const auto r = run({"decompose", bad});
    EXPECT_EQ(r.code, kExitInput);
    EXPECT_NE(r.err.find("matrix.im"), std::string::npos) << r.err;

    const auto syntax = write("syntax.json", "{\"dims\": [2,");
    EXPECT_EQ(run({"decompose", syntax}).code, kExitInput);
    EXPECT_EQ(run({"decompose", path("missing.json")}).code, kExitInput);
}

TEST_F(Cli, NonHermitianInputExitsThree) {
    const auto f = write("nh.json", R"({"dims": [2, 2], "matrix": {"re": [[1,1,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]],
                                                                   "im": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}})");
    EXPECT_EQ(run({"decompose", f}).code, kExitNotDensity);
    EXPECT_EQ(run({"analyze", f}).code, kExitNotDensity);
}

TEST_F(Cli, ImpossibleToleranceExitsFour) {
    const auto rho = gen({"rho-b", "--b", "0.3"}, "rho_b.json");
    EXPECT_EQ(run({"--tol", "1e-300", "decompose", "--method", "svd", rho}).code, kExitReconstruction);
    EXPECT_EQ(run({"--tol", "1e-300", "analyze", "--method", "svd", "--hermitian-only", rho}).code, kExitReconstruction);
}

TEST_F(Cli, ProfileIsNeverInferred) {
    const auto raw = write("raw.json", R"({"matrix": {"re": [[0.25,0,0,0],[0,0.25,0,0],[0,0,0.25,0],[0,0,0,0.25]],
                                                     "im": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}})");
    auto r = run({"analyze", raw});
    EXPECT_EQ(r.code, kExitInput);
    EXPECT_NE(r.err.find("dims"), std::string::npos);
    EXPECT_EQ(run({"analyze", "--dims", "2,2", raw}).code, 0);
    EXPECT_EQ(run({"analyze", "--dims", "4", raw}).code, kExitInput);
    EXPECT_EQ(run({"analyze", "--dims", "2,3", raw}).code, kExitInput);

    const auto w = gen({"werner", "--f", "0.1"}, "w.json");
    EXPECT_EQ(run({"analyze", "--dims", "2,2", w}).code, 0);
    EXPECT_EQ(run({"analyze", "--dims", "4,1", w}).code, kExitInput);
}

TEST_F(Cli, AnalyzeVerdicts) {
    auto w = parse(run({"analyze", gen({"werner", "--f", "0.6"}, "w.json")}));
    EXPECT_EQ(w["report"]["verdict"], "Entangled");
    EXPECT_NEAR(w["report"]["ppt_min_eig"].get<double>(), -0.1, 1e-12);

    auto mm = parse(run({"analyze", "--method", "svd", gen({"maximally-mixed"}, "mm.json")}));
    EXPECT_EQ(mm["report"]["verdict"], "Separable");
    EXPECT_NEAR(mm["report"]["q"].get<double>(), 0.25, 1e-14);
}

TEST_F(Cli, HermitianOnlyOmitsVerdict) {
    const auto zz = write("zz.json", R"({"dims": [2, 2], "matrix": {"re": [[1,0,0,0],[0,-1,0,0],[0,0,-1,0],[0,0,0,1]],
                                                                   "im": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}})");
    EXPECT_EQ(run({"analyze", zz}).code, kExitNotDensity);
    const auto r = run({"--hermitian-only", "analyze", "--method", "svd", zz});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = Json::parse(r.out);
    EXPECT_FALSE(doc["report"].contains("verdict"));
    EXPECT_DOUBLE_EQ(doc["report"]["q"].get<double>(), -3.0);
    EXPECT_DOUBLE_EQ(doc["report"]["upper_bound_mA"].get<double>(), -1.0);
}

TEST_F(Cli, AnalyzeKeepsInputDigest) {
    const auto file = gen({"werner", "--f", "0.35"}, "w.json");
    const auto digest = input_digest(parse_matrix_file(read_json_file(file)).matrix);
    EXPECT_EQ(parse(run({"analyze", file}))["input_digest"], digest);
}

TEST_F(Cli, SweepWernerGrid) {
    const auto r = run({"sweep", "werner", "--f", "0:1:0.05", "--table", path("t.tsv")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = Json::parse(r.out);
    ASSERT_EQ(doc["summary"].size(), 21u);
    ASSERT_EQ(doc["reports"].size(), 21u);
    for (const auto& row : doc["summary"]) {
        const double f = row["f"].get<double>();
        EXPECT_EQ(row["verdict"], f > 0.5 + 1e-9 ? "Entangled" : "Separable") << f;
    }
    std::ifstream table(path("t.tsv"));
    std::string line;
    int lines = 0;
    while (std::getline(table, line)) ++lines;
    EXPECT_EQ(lines, 22);
}

TEST_F(Cli, SinglePointSweepEqualsAnalyze) {
    const auto sweep = parse(run({"sweep", "werner", "--f", "0.3"}));
    ASSERT_EQ(sweep["reports"].size(), 1u);
    const auto analyzed = parse(run({"analyze", gen({"werner", "--f", "0.3"}, "w.json")}));
    EXPECT_EQ(sweep["reports"][0].dump(), analyzed.dump());

    const auto same = parse(run({"sweep", "werner", "--f", "0.3:0.3:0.1"}));
    EXPECT_EQ(same["reports"][0].dump(), analyzed.dump());
}

TEST_F(Cli, SweepRejectsMalformedRanges) {
    for (const char* range : {"1:0:0.1", "0:1:0", "0:1:-0.1", "0:1", "a:b:c", "0:1:0.1:2"})
        EXPECT_EQ(run({"sweep", "werner", "--f", range}).code, kExitInput) << range;
    EXPECT_EQ(run({"sweep", "werner", "--f", "0:2:0.5"}).code, kExitInput);
    EXPECT_EQ(run({"sweep", "maximally-mixed"}).code, kExitInput);
    EXPECT_EQ(run({"sweep", "example3", "--a", "1:2:1", "--b", "1:2:1", "--c", "1"}).code, kExitInput);
}

TEST_F(Cli, OutputsAreDeterministic) {
    for (int pass = 0; pass < 2; ++pass) {
        const auto a = run({"--seed", "3", "sweep", "werner", "--f", "0:1:0.25"});
        const auto b = run({"--seed", "3", "sweep", "werner", "--f", "0:1:0.25"});
        EXPECT_EQ(a.out, b.out);
    }
}

TEST(Range, GridPoints) {
    const auto g = parse_range("0:1:0.05");
    ASSERT_EQ(g.size(), 21u);
    EXPECT_EQ(g.front(), 0.0);
    EXPECT_EQ(g.back(), 1.0);
    EXPECT_EQ(g[6], 0.3);
    EXPECT_EQ(parse_range("0.7"), std::vector<double>{0.7});
    EXPECT_EQ(parse_range("0:1:0.3").size(), 4u);
    EXPECT_THROW(parse_range("0:1:0"), InputError);
}

TEST(Flags, HelpVersionAndUnknown) {
    EXPECT_EQ(run({"--help"}).code, 0);
    EXPECT_EQ(run({"--version"}).code, 0);
    EXPECT_EQ(run({}).code, kExitInput);
    EXPECT_EQ(run({"frobnicate"}).code, kExitInput);
    EXPECT_EQ(run({"analyze"}).code, kExitInput);
}

TEST(Binary, ExitCodesThroughTheProcessBoundary) {
    const std::string tool = SEPIND_TOOL;
    auto status = [](const std::string& cmd) {
        const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    EXPECT_EQ(status(tool + " gen werner --f 0.3"), 0);
    EXPECT_EQ(status(tool + " gen werner --f 3"), 2);
}

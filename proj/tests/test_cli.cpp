#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "iknot/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = iknot::cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("iknot-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                            "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string build(const std::string& knot, const std::string& name) {
        const std::string p = path(name);
        EXPECT_EQ(run({"build", "--knot", knot, "-o", p}).code, 0);
        return p;
    }

    std::string write(const std::string& name, const std::string& text) {
        const std::string p = path(name);
        std::ofstream(p, std::ios::binary) << text;
        return p;
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, BuildThenValidate) {
    const auto k2 = build("cable:2", "k2.cfk");
    const auto r = run({"validate", k2});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("square_zero: pass"), std::string::npos);
    EXPECT_NE(r.out.find("reduced: pass"), std::string::npos);
    const auto rec = run({"validate", k2, "--format", "records"});
    EXPECT_NE(rec.out.find("grading_law=1"), std::string::npos);
}

TEST_F(Cli, TorsionOrderOfCableTwo) {
    const auto k2 = build("cable:2", "k2.cfk");
    const auto r = run({"torsion-order", k2});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "3\n");
    EXPECT_EQ(run({"torsion-order", k2, "--format", "records"}).out, "torsion_order=3\n");
}

TEST_F(Cli, Homology) {
    const auto f8 = build("fig8", "f8.cfk");
    EXPECT_EQ(run({"homology", f8}).out, "tower gr=0; torsion U^1 gr=0, U^1 gr=1\n");
    EXPECT_EQ(run({"homology", f8, "--format", "records"}).out,
              "kind=tower gr=0\nkind=torsion order=1 gr=0\nkind=torsion order=1 gr=1\n");
}

TEST_F(Cli, SearchLocalNonexistenceAndExistence) {
    const auto k2 = build("cable:2", "k2.cfk");
    const auto u = build("unknot", "u.cfk");
    const auto none = run({"search-local", k2, u, "--mode", "almost"});
    EXPECT_EQ(none.code, 3);
    EXPECT_NE(none.out.find("no almost map exists"), std::string::npos);
    EXPECT_NE(none.out.find("definitive=1"), std::string::npos);
    EXPECT_EQ(run({"search-local", k2, u, "--mode", "almost", "--cap", "auto"}).code, 3);

    const auto map_file = path("f.cfk");
    const auto found = run({"search-local", u, k2, "--mode", "almost", "-o", map_file});
    EXPECT_EQ(found.code, 0);
    std::ifstream in(map_file);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_NE(ss.str().find("map f variance eq : a -> a"), std::string::npos);
    EXPECT_EQ(run({"search-local", k2, k2, "--mode", "local", "--format", "records"}).out.rfind("result=found", 0), 0u);
    const auto none_full = run({"search-local", u, k2, "--mode", "local", "--format", "records"});
    EXPECT_EQ(none_full.code, 3);
    EXPECT_EQ(none_full.out.rfind("result=none", 0), 0u);
}

TEST_F(Cli, ResourceExit) {
    const auto k3 = build("cable:3", "k3.cfk");
    const auto k2 = build("cable:2", "k2.cfk");
    EXPECT_EQ(run({"search-local", k3, k2, "--budget", "3"}).code, 4);
}

TEST_F(Cli, BoundAndConnected) {
    const auto k2 = build("cable:2", "k2.cfk");
    const auto r = run({"bound", k2});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "2\n");
    const auto conn = path("conn.cfk");
    EXPECT_EQ(run({"connected", k2, "-o", conn}).code, 0);
    EXPECT_EQ(run({"validate", conn}).code, 0);
    EXPECT_EQ(run({"torsion-order", conn}).out, "2\n");
}

TEST_F(Cli, IotaEnumRespectsPins) {
    const auto f8 = build("fig8", "f8.cfk");
    EXPECT_NE(run({"iota-enum", f8}).out.find("# 2 completions"), std::string::npos);
    std::ifstream in(f8);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto pinned = write("f8p.cfk", ss.str() + "iota b = a + b\n");
    const auto r = run({"iota-enum", pinned, "--format", "records"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("completion=0 gen=b image=a+b"), std::string::npos);
    EXPECT_EQ(r.out.find("completion=1"), std::string::npos);
}

TEST_F(Cli, TensorDualPhiPsi) {
    const auto f8 = build("fig8", "f8.cfk");
    const auto t = path("t.cfk");
    EXPECT_EQ(run({"tensor", f8, f8, "-o", t}).code, 0);
    EXPECT_EQ(run({"validate", t}).code, 0);
    EXPECT_NE(run({"dual", f8}).out.find("gen c* gr -1 1"), std::string::npos);
    const auto pp = run({"phi-psi", f8});
    EXPECT_NE(pp.out.find("map PsiPhi variance eq : b -> e"), std::string::npos);

    std::ifstream in(f8);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string f8_text = ss.str();
    const auto pinned = write("f8p.cfk", f8_text + "iota b = a + b\n");
    const auto u = build("unknot", "u.cfk");
    const auto up = write("up.cfk", "complex unknot ring full\ngen a gr 0 0\niota a = a\n");
    const auto prod = run({"tensor", pinned, up, "--variant", "2"});
    EXPECT_EQ(prod.code, 0);
    EXPECT_NE(prod.out.find("iota b|a = a|a + b|a"), std::string::npos);
    EXPECT_EQ(run({"tensor", f8, up}).code, 5);  // f8 alone has two completions
    EXPECT_EQ(run({"tensor", f8, u, "--variant", "3"}).code, 2);
}

TEST_F(Cli, OutputIsDeterministic) {
    const auto k2 = build("cable:2", "k2.cfk");
    const auto a = run({"iota-enum", k2});
    const auto b = run({"iota-enum", k2});
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(run({"phi-psi", k2}).out, run({"phi-psi", k2}).out);
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"validate"}).code, 2);
    EXPECT_EQ(run({"build", "--knot", "trefoil"}).code, 2);
    EXPECT_EQ(run({"validate", path("missing.cfk")}).code, 2);
    const auto k2 = build("cable:2", "k2.cfk");
    EXPECT_EQ(run({"search-local", k2, k2, "--mode", "sideways"}).code, 2);
    EXPECT_EQ(run({"search-local", k2, k2, "--cap", "-1"}).code, 2);
    EXPECT_EQ(run({"validate", k2, "--format", "xml"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, ParseErrorReportsLine) {
    const auto bad = write("bad.cfk", "complex x ring full\ngen a gr 0 0\nd a = U^ a\n");
    const auto r = run({"validate", bad});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("line 3"), std::string::npos);
}

TEST_F(Cli, ValidationFailureExit) {
    const auto bad = write("bad.cfk", "complex x ring full\ngen b gr 0 0\ngen c gr 1 -1\ngen e gr 0 0\nd b = U c\nd c = V e\n");
    EXPECT_EQ(run({"validate", bad}).code, 5);
    EXPECT_EQ(run({"homology", bad}).code, 5);
}

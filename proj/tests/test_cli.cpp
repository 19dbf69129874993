#include "test_support.hpp"
#include "tzero/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace tzero {
namespace {

namespace fs = std::filesystem;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(TZERO_DATA_DIR) + "/" + name; }

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("tzero_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" + std::to_string(counter_++))) {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string write(const std::string& name, const std::string& body) const {
        const auto p = path_ / name;
        std::ofstream(p) << body;
        return p.string();
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    static inline int counter_ = 0;
    fs::path path_;
};

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::map<std::string, std::string> csv_values(const std::string& csv) {
    std::map<std::string, std::string> m;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        const auto a = line.find(',');
        const auto b = line.find(',', a + 1);
        m[line.substr(0, a)] = line.substr(a + 1, b - a - 1);
    }
    return m;
}

TEST(cli, t0_reports) {
    auto r = run({"t0", data("two_level.json")});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("T0 = 1.570796 (found), |Phi| = ", 0), 0u) << r.out;

    r = run({"t0", data("biased.json")});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "T0 = none (min_above_tol), min |Phi| = 0.800000 at t = 3.141593\n");
    EXPECT_EQ(run({"t0", data("biased.json"), "--require-zero"}).code, 1);
}

TEST(cli, bounds_table_and_csv) {
    auto r = run({"bounds", data("two_level.json"), "--n-max", "2", "--csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("bound,value,certified,paper_eq\n", 0), 0u);
    const auto v = csv_values(r.out);
    EXPECT_EQ(std::stod(v.at("ml")), ml_bound(testing::two_level()));
    EXPECT_EQ(std::stod(v.at("mt")), mt_bound(testing::two_level()));
    EXPECT_EQ(std::stod(v.at("family")), family_bound(testing::two_level(), 2).bound);
    EXPECT_EQ(std::stod(v.at("radius")), *radius_estimate(testing::two_level(), 12).estimate);
    EXPECT_NE(r.out.find("\nradius,"), std::string::npos);
    EXPECT_NE(r.out.find(",false,"), std::string::npos);

    r = run({"bounds", data("four_level.json")});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("ml                  1.047198"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("mt                  1.404963"), std::string::npos) << r.out;
}

TEST(cli, hbar_scales_times) {
    const auto a = csv_values(run({"bounds", data("four_level.json"), "--csv"}).out);
    const auto b = csv_values(run({"--hbar", "2", "bounds", data("four_level.json"), "--csv"}).out);
    for (const auto* key : {"ml", "mt", "family", "radius", "best"}) {
        EXPECT_EQ(std::stod(b.at(key)), 2.0 * std::stod(a.at(key))) << key;
    }
    EXPECT_EQ(run({"--hbar", "2", "t0", data("two_level.json")}).out.rfind("T0 = 3.141593 (found)", 0), 0u);

    TempDir dir;
    const auto path = dir.write("h.json", R"({"hbar": 0.5, "levels": [{"energy": 0, "weight": 0.5}, {"energy": 2, "weight": 0.5}]})");
    EXPECT_EQ(run({"t0", path}).out.rfind("T0 = 0.785398 (found)", 0), 0u);
}

TEST(cli, scan_rows) {
    const auto r = run({"scan", data("two_level.json"), "--t-max", "1.5707963267948966", "--step",
                        "0.19634954084936207"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "t,re_phi,im_phi,abs_phi");
    std::getline(in, line);
    EXPECT_EQ(line, "0,1,0,1");
    std::string last;
    int rows = 1;
    while (std::getline(in, line)) {
        last = line;
        ++rows;
    }
    EXPECT_EQ(rows, 9);
    EXPECT_LE(std::stod(last.substr(last.rfind(',') + 1)), 1e-9);
}

TEST(cli, zeno) {
    auto r = run({"zeno", data("two_level.json"), "--t", "1", "--n", "10"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("exact = 0.904686"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("approx = 0.904837"), std::string::npos) << r.out;
    r = run({"zeno", data("two_level.json"), "--t", "1", "--target", "0.99"});
    EXPECT_EQ(r.out, "n = 100\n");
}

TEST(cli, thermo_and_limits) {
    auto r = run({"thermo", data("two_level.json"), "--beta-min", "0", "--beta-max", "0.5", "--steps", "1"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("beta,Z,entropy,mean_energy\n0,1,0.69314718055994529,1\n", 0), 0u) << r.out;
    EXPECT_NE(r.out.find("\n0.5,0.68393972058572117,0.582203108888"), std::string::npos) << r.out;

    r = run({"thermo", data("two_level.json"), "--beta-min", "-1", "--beta-max", "0", "--steps", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("warning"), std::string::npos);

    r = run({"limits", "--energy", "1", "--length", "1"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("3.16303e+25"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("1.91404e+69"), std::string::npos) << r.out;
}

TEST(cli, zeros) {
    const auto r = run({"zeros", data("two_level.json"), "--re-min", "0", "--re-max", "5", "--im-min", "-1",
                        "--im-max", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "re,im,winding,residual");
    int n = 0;
    while (std::getline(in, line)) {
        const double re = std::stod(line.substr(0, line.find(',')));
        EXPECT_NEAR(re, (2 * n + 1) * std::numbers::pi / 2, 1e-8);
        ++n;
    }
    EXPECT_EQ(n, 2);
}

TEST(cli, bochner_psd_and_witness) {
    auto r = run({"bochner", data("four_level.json"), "--trials", "50"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("verdict = psd"), std::string::npos);
    EXPECT_EQ(r.out, run({"bochner", data("four_level.json"), "--trials", "50"}).out);
}

TEST(cli, exit_codes) {
    auto r = run({"t0", "/nonexistent/spectrum.json"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.err.rfind("error: parse: file not found", 0), 0u) << r.err;

    TempDir dir;
    r = run({"t0", dir.write("bad.json", "{ not json")});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.err.rfind("error: parse:", 0), 0u);

    r = run({"t0", dir.write("neg.json", R"({"levels": [{"energy": 0, "weight": 1.5}, {"energy": 1, "weight": -0.5}]})")});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.err.rfind("error: validate:", 0), 0u) << r.err;

    r = run({"bounds", dir.write("point.json", R"({"levels": [{"energy": 1, "weight": 1}]})")});
    EXPECT_EQ(r.code, 0);
    r = run({"thermo", dir.write("hot.json", R"({"levels": [{"energy": 0, "weight": 0.5}, {"energy": 1000, "weight": 0.5}]})"), "--beta-min", "-1",
             "--beta-max", "-1", "--steps", "0"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("\nerror: compute:"), std::string::npos) << r.err;

    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"scan", data("two_level.json")}).code, 2);
}

TEST(cli, output_file) {
    TempDir dir;
    const auto out = dir.file("bounds.csv");
    const auto r = run({"--output", out, "bounds", data("two_level.json"), "--csv"});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(slurp(out), run({"bounds", data("two_level.json"), "--csv"}).out);
}

TEST(cli, determinism_across_commands) {
    const std::vector<std::vector<std::string>> cmds{
        {"t0", data("four_level.json")},
        {"bounds", data("biased.json"), "--csv"},
        {"scan", data("four_level.json"), "--t-max", "3"},
        {"zeno", data("four_level.json"), "--t", "0.5", "--n", "7"},
        {"bochner", data("biased.json"), "--trials", "30", "--seed", "5"},
        {"thermo", data("four_level.json"), "--beta-min", "0", "--beta-max", "3", "--steps", "6"},
        {"zeros", data("four_level.json"), "--re-min", "-4", "--re-max", "4", "--im-min", "-2", "--im-max", "2"},
        {"limits", "--energy", "2", "--length", "0.5"},
    };
    for (const auto& c : cmds) {
        const auto a = run(c);
        const auto b = run(c);
        EXPECT_EQ(a.code, 0) << c[0] << ": " << a.err;
        EXPECT_EQ(a.out, b.out) << c[0];
        EXPECT_EQ(a.err, b.err) << c[0];
    }
}

} // namespace
} // namespace tzero

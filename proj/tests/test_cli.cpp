#include "fixtures.hpp"
#include "fracsched/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fracsched;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("fracsched_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write_triangle_family() const {
        const std::string p = path("triangle.fam");
        write_family_file(fixtures::triangle7_family(), p);
        return p;
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenIsDeterministic) {
    const CliRun a = run({"gen", "--nodes", "20", "--side-km", "1.5", "--seed", "9", "--out", path("a.json")});
    const CliRun b = run({"gen", "--nodes", "20", "--side-km", "1.5", "--seed", "9", "--out", path("b.json")});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("connection_radius_m 330.0"), std::string::npos) << a.out;
    const Network net = read_network_file(path("a.json"));
    EXPECT_EQ(net.node_count(), 20u);
    EXPECT_EQ(net.seed(), 9u);
}

TEST_F(Cli, GenRejectsBadArguments) {
    EXPECT_EQ(run({"gen", "--nodes", "1", "--side-km", "1", "--seed", "1", "--out", path("x.json")}).code, 2);
    EXPECT_EQ(run({"gen", "--nodes", "5", "--side-km", "-1", "--seed", "1", "--out", path("x.json")}).code, 2);
    EXPECT_EQ(run({"gen", "--nodes", "5", "--side-km", "1", "--seed", "1", "--out", path("x.json"), "--beta", "0"}).code,
              2);
    EXPECT_EQ(run({"gen", "--nodes", "5"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
}

TEST_F(Cli, SolveClassifyOnTriangleFamily) {
    const std::string fam = write_triangle_family();
    const CliRun r = run({"solve", "--family", fam, "--out", path("r.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "chi_star 11/2\nchi_int 6\nverdict strict\n");
    const nlohmann::json j = nlohmann::json::parse(slurp(path("r.json")));
    EXPECT_EQ(j["mode"], "classify");
    EXPECT_EQ(j["chi_star"], "11/2");
    EXPECT_EQ(j["chi_int"], 6);
    EXPECT_EQ(j["verdict"], "strict");
    EXPECT_TRUE(j["timings_ms"].is_null());
}

TEST_F(Cli, SolveModesAgreeOnTriangleNetwork) {
    const std::string net = fixtures::data_path("triangle7.json");
    for (const char* mode : {"frac", "dual", "classify"}) {
        const CliRun r = run({"solve", "--network", net, "--mode", mode, "--out", path("r.json")});
        ASSERT_EQ(r.code, 0) << mode << r.err;
        EXPECT_EQ(r.out.substr(0, 14), "chi_star 11/2\n") << mode;
    }
    const CliRun r = run({"solve", "--network", net, "--mode", "int", "--out", path("r.json"), "--timings"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("chi_int 6"), std::string::npos);
    const nlohmann::json j = nlohmann::json::parse(slurp(path("r.json")));
    EXPECT_TRUE(j["timings_ms"].is_object());
}

TEST_F(Cli, SolveFiltersEmptyAndLargeInstances) {
    write_network_file(fixtures::hand_network({{0, 0}, {0, 900}}, {}, 1000), path("empty.json"));
    const CliRun r = run({"solve", "--network", path("empty.json"), "--out", path("r.json")});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("empty"), std::string::npos);
    const CliRun l = run({"solve", "--network", fixtures::data_path("triangle7.json"), "--max-links", "6", "--out",
                          path("r.json")});
    EXPECT_EQ(l.code, 3);
    EXPECT_NE(l.err.find("too_many_links"), std::string::npos);
    const CliRun m = run({"solve", "--network", fixtures::data_path("triangle7.json"), "--max-matchings", "9",
                          "--out", path("r.json")});
    EXPECT_EQ(m.code, 3);
    EXPECT_NE(m.err.find("too_many_matchings"), std::string::npos);
}

TEST_F(Cli, SolveReportsMissingInputs) {
    EXPECT_EQ(run({"solve", "--out", path("r.json")}).code, 2);
    EXPECT_EQ(run({"solve", "--network", path("nope.json"), "--out", path("r.json")}).code, 2);
    EXPECT_EQ(run({"solve", "--family", write_triangle_family(), "--mode", "lp", "--out", path("r.json")}).code, 2);
}

TEST_F(Cli, ScheduleOnTriangle) {
    const CliRun r = run({"schedule", "--network", fixtures::data_path("triangle7.json"), "--out", path("s.txt")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "T 11 q 2\nchi_star 11/2\nchi_int 6\nT1_times_q 12\npreferable true\n");
    const Schedule s = read_schedule_file(path("s.txt"));
    EXPECT_TRUE(verify_schedule(s, fixtures::triangle7_network()).ok());
}

TEST_F(Cli, ScheduleOnSingleLink) {
    write_network_file(fixtures::hand_network({{0, 0}, {0, 100}}, {{0, 1}}, 200), path("one.json"));
    const CliRun r = run({"schedule", "--network", path("one.json"), "--out", path("s.txt")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, 8), "T 1 q 1\n");
    EXPECT_NE(r.out.find("preferable false"), std::string::npos);
    EXPECT_EQ(slurp(path("s.txt")), "T 1 q 1\n0 0\n");
}

TEST_F(Cli, VerifyAcceptsAndRejects) {
    const std::string net = fixtures::data_path("triangle7.json");
    ASSERT_EQ(run({"schedule", "--network", net, "--out", path("s.txt")}).code, 0);
    const CliRun ok = run({"verify", "--network", net, "--schedule", path("s.txt")});
    EXPECT_EQ(ok.code, 0) << ok.err;
    EXPECT_EQ(ok.out, "ok\n");
    EXPECT_EQ(run({"verify", "--network", net, "--schedule", path("s.txt"), "--chi-star", "11/2"}).code, 0);
    EXPECT_EQ(run({"verify", "--family", write_triangle_family(), "--schedule", path("s.txt")}).code, 0);

    const CliRun wrong = run({"verify", "--network", net, "--schedule", path("s.txt"), "--chi-star", "6"});
    EXPECT_EQ(wrong.code, 1);
    EXPECT_EQ(wrong.out, "violation ratio_mismatch\n");

    // Drop the last slot.
    std::string text = slurp(path("s.txt"));
    text.erase(text.rfind("10 "));
    std::ofstream(path("short.txt"), std::ios::binary) << text;
    const CliRun cut = run({"verify", "--network", net, "--schedule", path("short.txt"), "--chi-star", "11/2"});
    EXPECT_EQ(cut.code, 1);
    EXPECT_EQ(cut.out, "violation link_count_mismatch link 3\n");

    std::ofstream(path("clash.txt"), std::ios::binary) << "T 1 q 1\n0 0 1\n";
    const CliRun clash = run({"verify", "--network", net, "--schedule", path("clash.txt"), "--chi-star", "1"});
    EXPECT_EQ(clash.code, 1);
    EXPECT_EQ(clash.out.rfind("violation slot_infeasible slot 0 link", 0), 0u) << clash.out;
}

TEST_F(Cli, SweepWritesReproducibleCsv) {
    const std::vector<std::string> args = {"sweep", "--nodes", "10", "--sides-km", "1,2", "--instances", "8",
                                           "--seed", "3", "--out-dir", path("a"), "--instances-csv"};
    const CliRun a = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    std::vector<std::string> args_b = args;
    args_b[10] = path("b");
    args_b.push_back("--jobs");
    args_b.push_back("2");
    ASSERT_EQ(run(args_b).code, 0);
    const std::string csv_a = slurp(path("a/sweep.csv"));
    const std::string csv_b = slurp(path("b/sweep.csv"));
    // Output directory and thread count are not part of the provenance.
    EXPECT_EQ(csv_a, csv_b);
    EXPECT_EQ(slurp(path("a/instances.csv")), slurp(path("b/instances.csv")));
    EXPECT_EQ(csv_a.rfind("# fracsched 1.0.0 | fracsched sweep --nodes 10", 0), 0u) << csv_a;
    EXPECT_EQ(csv_a.find("--out-dir"), std::string::npos);
    EXPECT_NE(csv_a.find("master_seed=3\n"), std::string::npos);
    EXPECT_NE(csv_a.find(kSweepCsvHeader), std::string::npos);
    EXPECT_EQ(std::count(csv_a.begin(), csv_a.end(), '\n'), 4);
    const std::string inst = slurp(path("a/instances.csv"));
    EXPECT_EQ(std::count(inst.begin(), inst.end(), '\n'), 2 + 16);

    ASSERT_EQ(run(args).code, 0);
    EXPECT_EQ(slurp(path("a/sweep.csv")), csv_a);
}

TEST_F(Cli, SweepRejectsBadGrid) {
    EXPECT_EQ(run({"sweep", "--instances", "0", "--out-dir", path("x")}).code, 2);
    EXPECT_EQ(run({"sweep", "--nodes", "ten", "--out-dir", path("x")}).code, 2);
    EXPECT_EQ(run({"sweep", "--sides-km", "0", "--out-dir", path("x")}).code, 2);
}

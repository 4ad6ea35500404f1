#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "starry/error.hpp"
#include "starry/pipeline.hpp"

using namespace starry;
namespace fs = std::filesystem;

namespace {

class Workdir {
public:
    Workdir() {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        path_ = fs::temp_directory_path() / (std::string("starry_") + info->test_suite_name() + "_" + info->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~Workdir() { fs::remove_all(path_); }
    std::string operator/(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cli(const std::string& args) {
    const std::string cmd = std::string(STARRY_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig config(Subcommand sub) {
    RunConfig c;
    c.subcommand = sub;
    return c;
}

}  // namespace

TEST(Validate, GridAndSubset) {
    RunConfig c;
    c.grid_n = 15;
    EXPECT_THROW(validate(c), InvalidArgument);
    c.grid_n = 48;
    EXPECT_THROW(validate(c), InvalidArgument);
    c.grid_n = 256;
    c.subset_m = 512;
    EXPECT_NO_THROW(validate(c));  // sample draws no subset
    c.subcommand = Subcommand::map;
    EXPECT_THROW(validate(c), InvalidArgument);
    c.subset_m = 256;
    EXPECT_NO_THROW(validate(c));
    EXPECT_THROW(parse_subcommand("bogus"), InvalidArgument);
    EXPECT_EQ(parse_subcommand("counterexample"), Subcommand::counterexample);
}

TEST(Run, SampleZigZagFour) {
    Workdir dir;
    auto c = config(Subcommand::sample);
    c.kind = "zigzag:4";
    c.grid_n = 16;
    c.out = dir / "f.csv";
    std::ostringstream log, err;
    ASSERT_EQ(run_guarded(c, log, err), kExitOk) << err.str();
    std::istringstream in(slurp(c.out));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "t,f");
    std::vector<std::string> rows;
    while (std::getline(in, line)) rows.push_back(line);
    ASSERT_EQ(rows.size(), 17u);
    EXPECT_EQ(rows[1], "0.0625,0.5");
    EXPECT_EQ(rows[2], "0.125,1");
    EXPECT_EQ(rows[16], "1,0");
}

TEST(Run, SampleBrownianIsDeterministic) {
    Workdir dir;
    auto c = config(Subcommand::sample);
    c.grid_n = 256;
    c.seed = 1;
    c.out = dir / "a.csv";
    c.plot = dir / "a.svg";
    std::ostringstream log, err;
    ASSERT_EQ(run_guarded(c, log, err), kExitOk);
    c.out = dir / "b.csv";
    c.plot = dir / "b.svg";
    ASSERT_EQ(run_guarded(c, log, err), kExitOk);
    EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
    EXPECT_EQ(slurp(dir / "a.svg"), slurp(dir / "b.svg"));
}

TEST(Run, ExitStatuses) {
    Workdir dir;
    std::ostringstream log, err;
    auto bad_grid = config(Subcommand::sample);
    bad_grid.grid_n = 100;
    bad_grid.out = dir / "x.csv";
    EXPECT_EQ(run_guarded(bad_grid, log, err), kExitInvalidArguments);

    auto missing = config(Subcommand::map);
    missing.grid_n = 64;
    missing.subset_m = 16;
    missing.in = dir / "nope.csv";
    missing.out = dir / "m.csv";
    EXPECT_EQ(run_guarded(missing, log, err), kExitInvalidInput);

    {
        std::ofstream(dir / "bad.csv") << "t,f\n0,0\n0.5,-1\n1,0\n";
    }
    auto invalid = missing;
    invalid.in = dir / "bad.csv";
    EXPECT_EQ(run_guarded(invalid, log, err), kExitInvalidInput);

    auto kind = config(Subcommand::sample);
    kind.grid_n = 16;
    kind.kind = "zigzag:x";
    kind.out = dir / "k.csv";
    EXPECT_EQ(run_guarded(kind, log, err), kExitInvalidArguments);
}

TEST(Run, ObstructFromStarFile) {
    Workdir dir;
    {
        std::ofstream(dir / "s.json") << R"({"metric":"tree","n":45,"eta":0.6666666666666666,"a":3})";
    }
    auto c = config(Subcommand::obstruct);
    c.star = dir / "s.json";
    c.out = dir / "v.json";
    std::ostringstream log, err;
    ASSERT_EQ(run_guarded(c, log, err), kExitOk) << err.str();
    const auto v = nlohmann::json::parse(slurp(c.out));
    EXPECT_EQ(v.at("verdict"), "CONTRADICTS");
    EXPECT_NEAR(v.at("threshold").get<double>(), 400.0 / 9.0, 1e-12);
    {
        std::ofstream(dir / "broken.json") << "{not json";
    }
    c.star = dir / "broken.json";
    EXPECT_EQ(run_guarded(c, log, err), kExitInvalidInput);
}

TEST(Run, PipelineArtifactsAreThreadIndependent) {
    Workdir dir;
    std::ostringstream log, err;
    auto sample = config(Subcommand::sample);
    sample.grid_n = 4096;
    sample.seed = 5;
    sample.out = dir / "e.csv";
    ASSERT_EQ(run_guarded(sample, log, err), kExitOk);

    for (unsigned threads : {1u, 4u}) {
        const std::string tag = std::to_string(threads);
        auto map = config(Subcommand::map);
        map.grid_n = 4096;
        map.seed = 5;
        map.subset_m = 64;
        map.threads = threads;
        map.in = sample.out;
        map.out = dir / ("m" + tag + ".csv");
        ASSERT_EQ(run_guarded(map, log, err), kExitOk) << err.str();

        auto stars = config(Subcommand::stars);
        stars.grid_n = 4096;
        stars.n_min = 6;
        stars.n_max = 7;
        stars.threads = threads;
        stars.in = sample.out;
        stars.out = dir / ("s" + tag + ".json");
        ASSERT_EQ(run_guarded(stars, log, err), kExitOk) << err.str();

        auto tree = config(Subcommand::tree);
        tree.grid_n = 4096;
        tree.points = 32;
        tree.threads = threads;
        tree.in = sample.out;
        tree.out = dir / ("t" + tag + ".csv");
        ASSERT_EQ(run_guarded(tree, log, err), kExitOk) << err.str();
    }
    EXPECT_EQ(slurp(dir / "m1.csv"), slurp(dir / "m4.csv"));
    EXPECT_EQ(slurp(dir / "s1.json"), slurp(dir / "s4.json"));
    EXPECT_EQ(slurp(dir / "t1.csv"), slurp(dir / "t4.csv"));
    EXPECT_EQ(slurp(dir / "m1.csv").rfind("i,j,d_circ,d_map\n", 0), 0u);
    EXPECT_EQ(slurp(dir / "t1.csv").rfind("i,j,d\n", 0), 0u);
}

TEST(Run, Example51AndCounterexample) {
    Workdir dir;
    std::ostringstream log, err;
    auto ex = config(Subcommand::example51);
    ex.grid_n = 1 << 12;
    ex.out = dir / "g.csv";
    ASSERT_EQ(run_guarded(ex, log, err), kExitOk) << err.str();
    EXPECT_EQ(slurp(ex.out).rfind("t,f\n", 0), 0u);

    auto ce = config(Subcommand::counterexample);
    ce.counter_n_max = 10;
    ce.out = dir / "c.csv";
    ASSERT_EQ(run_guarded(ce, log, err), kExitOk) << err.str();
    EXPECT_EQ(slurp(ce.out).rfind("center,R,r,N,exponent\n", 0), 0u);
}

TEST(Cli, SampleAndExitCodes) {
    Workdir dir;
    EXPECT_EQ(cli("sample --kind zigzag:4 --grid 16 --out " + (dir / "f.csv")), 0);
    EXPECT_EQ(slurp(dir / "f.csv").substr(0, 4), "t,f\n");
    EXPECT_EQ(cli("sample --grid 17 --out " + (dir / "g.csv")), 1);
    EXPECT_EQ(cli("frobnicate"), 1);
    EXPECT_EQ(cli("sample --grid"), 1);
    EXPECT_EQ(cli("map --in " + (dir / "missing.csv") + " --out " + (dir / "m.csv") + " --grid 64 --subset 8"), 2);
    EXPECT_EQ(cli("--seed 3 --grid 64 sample --out " + (dir / "h.csv")), 0);
    EXPECT_EQ(cli("sample --seed 3 --grid 64 --out " + (dir / "i.csv")), 0);
    EXPECT_EQ(slurp(dir / "h.csv"), slurp(dir / "i.csv"));
}

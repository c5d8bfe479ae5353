#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include "rsp/commands.hpp"
#include "rsp/dataset.hpp"
#include "rsp/model.hpp"
#include "schema_check.hpp"

using namespace rsp;
namespace fs = std::filesystem;

namespace
{
std::string slurp(fs::path const& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(std::string const& name)
{
    auto const dir = fs::temp_directory_path() / ("rsp_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Small but complete configuration for the end-to-end runs
RunConfig small_config(fs::path const& dir)
{
    RunConfig c;
    c.sim.n_samples = 40'000;
    c.sim.seed = 99;
    c.tomography_cutoff = 3;
    c.max_iter = 300;
    c.min_samples = 500;
    c.out_dir = dir;
    return c;
}

int run_cli(std::string const& args)
{
    std::string const cmd = std::string(RSP_CLI) + " " + args
                            + " > /dev/null 2>&1";
    int const status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
}  // namespace

TEST_SUITE("cli")
{
TEST_CASE("config round trip")
{
    RunConfig const defaults;
    CHECK(parse_config(serialize_config(defaults)) == defaults);

    RunConfig c;
    c.sim.alpha2 = 0.08;
    c.sim.eta = 0.123456789012345;
    c.sim.n_samples = 1234;
    c.sim.seed = 18446744073709551615ULL;
    c.sim.sweep = {PhaseSweep::Kind::stepped, 0, 12};
    c.sim.workers = 3;
    c.bins = {0.05, 1.025, false};
    c.tomography_cutoff = 7;
    c.max_iter = 17;
    c.tol = 3e-11;
    c.min_samples = 42;
    c.out_dir = "some dir/with space";
    c.q_list = {0.1, -0.25};
    c.predict_alpha2 = {0.3};
    c.predict_q_max = 2.5;
    c.predict_q_step = 0.005;
    auto const text = serialize_config(c);
    CHECK(parse_config(text) == c);
    CHECK(serialize_config(parse_config(text)) == text);

    c.sim.sweep = {PhaseSweep::Kind::fixed, 1.0 / 3.0, 1};
    CHECK(parse_config(serialize_config(c)) == c);

    for (auto const& key : config_keys())
    {
        CHECK(text.find(key + "=") != std::string::npos);
    }
}

TEST_CASE("config errors")
{
    CHECK_THROWS_AS(parse_config("nope=1\n"), UsageError);
    CHECK_THROWS_AS(parse_config("alpha2=half\n"), UsageError);
    CHECK_THROWS_AS(parse_config("samples=-3\n"), UsageError);
    CHECK_THROWS_AS(parse_config("just text\n"), UsageError);
    CHECK_THROWS_AS(parse_config("sweep=spiral\n"), UsageError);
    CHECK_THROWS_AS(parse_config("wide-tail-bins=maybe\n"), UsageError);
    CHECK_NOTHROW(parse_config("# comment\n\n eta = 0.7 \n"));
    CHECK(parse_config("eta=0.7").sim.eta == 0.7);

    RunConfig c;
    c.sim.n_samples = 0;
    CHECK_THROWS_AS(c.validate(), UsageError);
    CHECK_THROWS_AS(cmd_simulate(c), UsageError);
}

TEST_CASE("simulate is deterministic")
{
    auto const dir = scratch("simulate");
    RunConfig c;
    c.sim.n_samples = 5000;
    c.out_dir = dir / "a";
    auto const a = slurp(cmd_simulate(c));
    c.out_dir = dir / "b";
    c.sim.workers = 2;
    auto const b = slurp(cmd_simulate(c));
    CHECK(a == b);
    std::istringstream in(a);
    auto const data = read_dataset(in);
    CHECK(data.samples.size() == 5000);
    CHECK(data.meta("seed") == "1");
    CHECK(data.meta("sweep") == "linear");
    fs::remove_all(dir);
}

TEST_CASE("reconstruct input errors")
{
    auto const dir = scratch("reconstruct_errors");
    RunConfig c;
    c.out_dir = dir;
    {
        std::ofstream(dir / "empty.csv") << "# n=0\ntheta_rel,x_a,x_b\n";
    }
    CHECK_THROWS_WITH_AS(cmd_reconstruct(dir / "empty.csv", c),
                         doctest::Contains("contains no samples"), DataError);
    {
        std::ofstream(dir / "bad.csv")
            << "theta_rel,x_a,x_b\n0.1,0.2,0.3\n0.1,zz,0.3\n";
    }
    CHECK_THROWS_WITH_AS(cmd_reconstruct(dir / "bad.csv", c),
                         doctest::Contains("line 3"), DataError);
    CHECK_THROWS_AS(cmd_reconstruct(dir / "missing.csv", c), DataError);
    CHECK_THROWS_AS(cmd_analyze(c), DataError);
    fs::remove_all(dir);
}

TEST_CASE("prediction table")
{
    auto const dir = scratch("predict");
    RunConfig c;
    c.out_dir = dir;
    std::istringstream in(slurp(cmd_predict(c)));
    std::string line;
    std::getline(in, line);
    CHECK(line == "alpha2,Q,y2,E,R");
    std::map<double, std::vector<std::array<double, 4>>> rows;
    while (std::getline(in, line))
    {
        std::array<double, 5> v{};
        char sep;
        std::istringstream ls(line);
        ls >> v[0] >> sep >> v[1] >> sep >> v[2] >> sep >> v[3] >> sep >> v[4];
        rows[v[0]].push_back({v[1], v[2], v[3], v[4]});
    }
    REQUIRE(rows.size() == 2);
    for (auto const& [a2, table] : rows)
    {
        CHECK(table.size() == 601);
        double integral = 0;
        for (std::size_t i = 0; i < table.size(); ++i)
        {
            auto const [q, y2, e, r] = table[i];
            if (std::abs(q) < 1e-12)
            {
                CHECK(y2 == 1.0);
            }
            if (std::abs(q - 0.5) < 1e-9)
            {
                CHECK(e == doctest::Approx(0.55).epsilon(1e-8));
            }
            if (i > 0)
            {
                integral += 0.5 * (r + table[i - 1][3]) * (q - table[i - 1][0]);
            }
        }
        CHECK(std::abs(integral - 1) < 1e-3);
    }
    fs::remove_all(dir);
}

TEST_CASE("pipeline: determinism, schema and report content")
{
    auto const dir = scratch("pipeline");
    auto const c1 = small_config(dir / "one");
    auto c2 = small_config(dir / "two");
    c2.sim.workers = 1;
    auto const report = cmd_pipeline(c1);
    cmd_pipeline(c2);
    auto const text = slurp(dir / "one" / files::report);
    CHECK(text == slurp(dir / "two" / files::report));
    CHECK(slurp(dir / "one" / files::reconstruction)
          == slurp(dir / "two" / files::reconstruction));

    oracle::SchemaCheck const schema(
        nlohmann::json::parse(slurp(RSP_REPORT_SCHEMA)));
    auto const errors = schema.errors(nlohmann::json::parse(text));
    for (auto const& e : errors)
    {
        MESSAGE(e);
    }
    CHECK(errors.empty());
    // the validator does reject a broken report
    auto broken = report;
    broken["bins"][0].erase("E");
    broken["eta"] = "high";
    CHECK(schema.errors(broken).size() == 2);

    REQUIRE(report["bins"].size() > 5);
    for (auto const& b : report["bins"])
    {
        CHECK(b["purified"].get<bool>() == (b["E"].get<double>() > 0.55));
        CHECK(b["residual"]["y2"].get<double>()
              == doctest::Approx(b["y2"].get<double>()
                                 - b["predicted"]["y2"].get<double>()));
    }
    REQUIRE(report["wigner"].size() == 2);
    for (auto const& w : report["wigner"])
    {
        CHECK(fs::exists(dir / "one" / w["csv"].get<std::string>()));
        auto const grid = nlohmann::json::parse(
            slurp(dir / "one" / w["json"].get<std::string>()));
        CHECK(grid["values"].size() == 121);
    }
    CHECK(report["wigner"][1]["q_center"].get<double>()
          == doctest::Approx(0.71));
    CHECK(fs::exists(dir / "one" / files::scatter));
    CHECK(fs::exists(dir / "one" / files::conditional));
    CHECK(fs::exists(dir / "one" / files::predictions));
    CHECK(report["fig2"]["scatter_points"].get<std::size_t>() > 0);

    // stages re-run from files alone
    auto const again = cmd_analyze(c1);
    CHECK(again.dump(2) + "\n" == text);
    fs::remove_all(dir);
}

TEST_CASE("command line exit codes")
{
    auto const dir = scratch("exit_codes");
    auto const out = " --out-dir " + dir.string();
    CHECK(run_cli("") == 1);
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("frobnicate") == 1);
    CHECK(run_cli("simulate --samples 0" + out) == 1);
    CHECK(run_cli("simulate --alpha2 abc" + out) == 1);
    CHECK(run_cli("simulate --alpha2 1.5" + out) == 1);
    CHECK(run_cli("simulate --no-such-flag 1" + out) == 1);
    CHECK(run_cli("simulate --config " + (dir / "absent.cfg").string() + out)
          == 1);
    CHECK(run_cli("reconstruct " + (dir / "absent.csv").string() + out) == 2);
    {
        std::ofstream(dir / "bad.csv") << "theta_rel,x_a,x_b\n1,2\n";
    }
    CHECK(run_cli("reconstruct " + (dir / "bad.csv").string() + out) == 2);
    CHECK(run_cli("analyze" + out) == 2);

    // config file then flag precedence
    {
        std::ofstream(dir / "run.cfg") << "samples=700\nseed=5\nalpha2=0.08\n";
    }
    CHECK(run_cli("simulate --config " + (dir / "run.cfg").string()
                  + " --seed 6" + out)
          == 0);
    auto const data = read_dataset(dir / files::dataset);
    CHECK(data.samples.size() == 700);
    CHECK(data.meta("seed") == "6");
    CHECK(data.meta("alpha2") == "0.08");
    CHECK(run_cli("predict" + out) == 0);
    fs::remove_all(dir);
}
}

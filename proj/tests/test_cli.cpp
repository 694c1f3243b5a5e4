#include "roi/cli.hpp"

#include "doctest.h"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = roi::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text)
{
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path.string();
}

const char* kScenario = R"({
  "name": "erp",
  "currency_label": "K USD",
  "benefits": [{"label": "savings", "amount": 150, "abs_error": 15},
               {"label": "revenue", "amount": 50, "relative_error": 0.1}],
  "costs": [{"label": "licences", "amount": 60, "abs_error": 6},
            {"label": "labour", "amount": 40, "abs_error": 4}]
})";

} // namespace

TEST_CASE("validity subcommand")
{
    const auto r = run({"validity", "--max", "0.5", "--step", "0.1"});
    CHECK(r.code == 0);
    CHECK(r.out
          == "rel_error,exact,approx,relative_gap\n"
             "0.0,1.0,1.0,0.0\n"
             "0.1,1.11111111111111,1.1,0.01\n"
             "0.2,1.25,1.2,0.04\n"
             "0.3,1.42857142857143,1.3,0.09\n"
             "0.4,1.66666666666667,1.4,0.16\n"
             "0.5,2.0,1.5,0.25\n");
    CHECK(r.err.empty());
    CHECK(run({"validity", "--max", "1.0"}).code == 1);
}

TEST_CASE("analyze subcommand")
{
    const auto path = write_temp("roiacc_cli_scenario.json", kScenario);
    auto r = run({"analyze", path});
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["roi"].get<double>() == doctest::Approx(1.0));
    CHECK(doc["max_probable_error"].get<double>() == doctest::Approx(0.4));
    CHECK(doc["roi_lower"].get<double>() == doctest::Approx(7.0 / 11.0));

    r = run({"analyze", path, "--mode", "quadrature", "--format", "csv", "--percent"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("aggregation_mode,quadrature\n") != std::string::npos);
    CHECK(r.out.find("roi,100.0\n") != std::string::npos);

    CHECK(run({"analyze", "missing.file"}).code == 2);
    CHECK(run({"analyze", path, "--mode", "median"}).code == 2);
    CHECK(run({"analyze"}).code == 2);

    const auto bad = write_temp("roiacc_cli_bad.json", R"({"name":"x","benefits":[],"costs":[]})");
    r = run({"analyze", bad});
    CHECK(r.code == 2);
    CHECK(r.err.find("total cost must be positive") != std::string::npos);

    // Parses, but zero benefit leaves the relative forms undefined.
    const auto zero = write_temp("roiacc_cli_zero.json",
                                 R"({"name":"x","benefits":[],"costs":[{"amount":10,"abs_error":1}]})");
    CHECK(run({"analyze", zero}).code == 1);
}

TEST_CASE("simulate subcommand")
{
    auto r = run({"simulate", "--cost", "100", "--ratio", "2", "--e-benefit", "0.1", "--e-cost", "0.1",
                  "--iterations", "20000", "--seed", "3"});
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["case"]["roi_act"].get<double>() == 1.0);
    CHECK(doc["analytic"]["max_probable_error"].get<double>() == doctest::Approx(0.4));
    CHECK(doc["analytic"]["draws_contained"].get<bool>());
    CHECK(doc["mean_abs_error"].get<double>() == doctest::Approx(0.1339).epsilon(0.05));

    const auto path = write_temp("roiacc_cli_scenario.json", kScenario);
    r = run({"simulate", path, "--iterations", "1000"});
    REQUIRE(r.code == 0);
    doc = nlohmann::json::parse(r.out);
    CHECK(doc["config"]["benefit_cost_ratio"].get<double>() == 2.0);
    CHECK(doc["config"]["e_cost"].get<double>() == doctest::Approx(0.1));

    CHECK(run({"simulate", "--cost", "100"}).code == 2);
    CHECK(run({"simulate", "--cost", "100", "--band", "small", "--e-benefit", "0", "--e-cost", "0"}).code == 2);
    CHECK(run({"simulate", path, "--cost", "100"}).code == 2);
    CHECK(run({"simulate", "--cost", "100", "--e-benefit", "0.1", "--e-cost", "0.9995"}).code == 1);
    CHECK(run({"simulate", "--band", "medium", "--e-benefit", "0.1", "--e-cost", "0.1", "--format", "csv"}).code
          == 0);
}

TEST_CASE("sweep subcommand")
{
    auto r = run({"sweep", "--range", "low", "--step", "0.05", "--ratio", "2", "--seed", "7", "-n", "500"});
    REQUIRE(r.code == 0);
    CHECK(r.out.starts_with("e,delta_r,ratio,iterations,seed\n0.0,0.0,2.0,500,7\n0.05,"));
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 11);

    r = run({"sweep", "--range", "high", "-n", "200"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\n0.4,") != std::string::npos);
    CHECK(r.out.find("\n0.95,") != std::string::npos);

    r = run({"sweep", "--range", "custom", "0.1:0.3", "--step", "0.1", "-n", "200"});
    REQUIRE(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);

    CHECK(run({"sweep", "--range", "custom", "0.1-0.3"}).code == 2);
    CHECK(run({"sweep", "--range", "custom", "0.5:1.0", "-n", "10"}).code == 1);
    CHECK(run({"sweep", "--step", "-1"}).code == 2);
}

TEST_CASE("convergence subcommand")
{
    auto r = run({"convergence", "--cost", "100", "--e-benefit", "0.3", "--e-cost", "0.3", "--seeds", "3",
                  "--n-list", "100,1000"});
    REQUIRE(r.code == 0);
    CHECK(r.out.starts_with("iterations,spread,mean,min,max\n100,"));
    CHECK(r.out.find("\n1000,") != std::string::npos);
    CHECK(run({"convergence", "--cost", "100", "--e-benefit", "0.3", "--e-cost", "0.3", "--seeds", "1"}).code == 1);
}

TEST_CASE("help and usage")
{
    auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("sweep") != std::string::npos);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
}

TEST_CASE("identical command lines give identical bytes, whatever the thread count")
{
    const std::vector<std::string> base{"sweep", "--range", "low", "--step", "0.05", "--ratio", "2", "--seed", "7"};
    const auto a = run(base);
    const auto b = run(base);
    auto threaded = base;
    threaded.insert(threaded.end(), {"--threads", "4"});
    const auto c = run(threaded);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
}

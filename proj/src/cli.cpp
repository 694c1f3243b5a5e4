#include "roi/cli.hpp"

#include "roi/io.hpp"
#include "roi/propagation.hpp"
#include "roi/simulation.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <optional>

namespace roi::cli {

namespace {

// Raised for argument combinations CLI11 cannot express; maps to exit 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OutputArgs {
    std::string format;
    bool percent = false;

    [[nodiscard]] io::EmitOptions options() const { return {io::parse_format(format), percent}; }
};

void add_output_options(CLI::App* cmd, OutputArgs& out, const std::string& default_format)
{
    out.format = default_format;
    cmd->add_option("--format", out.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_flag("--percent", out.percent, "Display fractions as percentages");
}

struct CaseArgs {
    std::string file;
    std::optional<double> cost;
    std::optional<std::string> band;
    std::optional<double> ratio;
    std::optional<double> e_benefit;
    std::optional<double> e_cost;
    std::int64_t iterations = kDefaultIterations;
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 1;
};

void add_case_options(CLI::App* cmd, CaseArgs& a)
{
    auto* file = cmd->add_option("file", a.file, "Scenario document (JSON); totals define cost, ratio and errors");
    auto* cost = cmd->add_option("--cost", a.cost, "Explicit actual cost")->check(CLI::PositiveNumber);
    auto* band = cmd->add_option("--band", a.band, "Draw the actual cost from a project band")
                     ->check(CLI::IsMember({"small", "medium", "large"}));
    auto* ratio = cmd->add_option("--ratio", a.ratio, "Benefit-cost ratio (default 2.0)")->check(CLI::PositiveNumber);
    cmd->add_option("--e-benefit", a.e_benefit, "Relative error of benefits, as a fraction")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--e-cost", a.e_cost, "Relative error of costs, as a fraction")->check(CLI::NonNegativeNumber);
    cmd->add_option("--iterations,-n", a.iterations, "Monte Carlo iterations")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", a.seed, "Random seed")->capture_default_str();
    cmd->add_option("--threads", a.threads, "Worker threads (0 = all cores); results do not depend on it")
        ->capture_default_str();
    cost->excludes(band);
    file->excludes(cost)->excludes(band)->excludes(ratio);
}

SimulationConfig resolve_case(const CaseArgs& a)
{
    SimulationConfig cfg;
    cfg.iterations = a.iterations;
    cfg.seed = a.seed;
    cfg.threads = a.threads;
    if (!a.file.empty()) {
        const auto totals = io::scenario_totals(io::load_scenario(a.file));
        cfg.case_source = totals.cost;
        cfg.benefit_cost_ratio = totals.ratio;
        cfg.e_benefit = a.e_benefit.value_or(totals.e_benefit);
        cfg.e_cost = a.e_cost.value_or(totals.e_cost);
        return cfg;
    }
    if (!a.e_benefit || !a.e_cost)
        throw UsageError("--e-benefit and --e-cost are required without a scenario file");
    if (a.cost)
        cfg.case_source = Money(*a.cost);
    else if (a.band)
        cfg.case_source = parse_band(*a.band);
    cfg.benefit_cost_ratio = a.ratio.value_or(kDefaultBenefitCostRatio);
    cfg.e_benefit = *a.e_benefit;
    cfg.e_cost = *a.e_cost;
    return cfg;
}

double parse_number(const std::string& s)
{
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw UsageError("not a number: '" + s + "'");
    return x;
}

SweepRange parse_range(const std::vector<std::string>& tokens)
{
    if (tokens.size() == 1 && tokens[0] == "low")
        return sweep_range_low();
    if (tokens.size() == 1 && tokens[0] == "high")
        return sweep_range_high();
    std::string bounds_text;
    if (tokens.size() == 2 && tokens[0] == "custom")
        bounds_text = tokens[1];
    else if (tokens.size() == 1)
        bounds_text = tokens[0];
    const auto colon = bounds_text.find(':');
    if (colon == std::string::npos)
        throw UsageError("--range expects low, high or custom A:B");
    const double a = parse_number(bounds_text.substr(0, colon));
    const double b = parse_number(bounds_text.substr(colon + 1));
    if (a < 0.0 || b < a)
        throw UsageError("--range custom A:B needs 0 <= A <= B");
    return {a, b};
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Accuracy of ROI evaluations: analytic error propagation and Monte Carlo simulation", "roiacc"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Analytic error report for a scenario document");
    std::string analyze_file;
    std::string mode = "sum";
    OutputArgs analyze_out;
    analyze->add_option("file", analyze_file, "Scenario document (JSON)")->required();
    analyze->add_option("--mode", mode, "Component error aggregation")
        ->check(CLI::IsMember({"sum", "quadrature"}))
        ->capture_default_str();
    add_output_options(analyze, analyze_out, "json");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo ROI error with analytic comparison");
    CaseArgs sim_args;
    OutputArgs sim_out;
    add_case_options(simulate, sim_args);
    add_output_options(simulate, sim_out, "json");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Mean absolute ROI error over a grid of equal relative errors");
    std::vector<std::string> range_tokens{"low"};
    SweepConfig sweep_cfg;
    std::optional<std::string> sweep_band;
    std::optional<double> sweep_cost;
    OutputArgs sweep_out;
    sweep->add_option("--range", range_tokens, "low (0-0.45), high (0.40-0.95) or custom A:B")
        ->expected(1, 2)
        ->capture_default_str();
    sweep->add_option("--step", sweep_cfg.step, "Grid step")->check(CLI::PositiveNumber)->capture_default_str();
    sweep->add_option("--ratio", sweep_cfg.benefit_cost_ratio, "Benefit-cost ratio")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep->add_option("--iterations,-n", sweep_cfg.iterations, "Monte Carlo iterations per grid point")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep->add_option("--seed", sweep_cfg.seed, "Random seed")->capture_default_str();
    sweep->add_option("--threads", sweep_cfg.threads, "Worker threads (0 = all cores)")->capture_default_str();
    auto* sweep_band_opt = sweep->add_option("--band", sweep_band, "Project band for the case (default small)")
                               ->check(CLI::IsMember({"small", "medium", "large"}));
    sweep->add_option("--cost", sweep_cost, "Explicit actual cost")
        ->check(CLI::PositiveNumber)
        ->excludes(sweep_band_opt);
    add_output_options(sweep, sweep_out, "csv");

    // validity
    auto* validity = app.add_subcommand("validity", "Exact vs first-order value of 1/(1 - x)");
    double validity_max = 0.95;
    double validity_step = 0.05;
    OutputArgs validity_out;
    validity->add_option("--max", validity_max, "Largest relative error")->capture_default_str();
    validity->add_option("--step", validity_step, "Grid step")->capture_default_str();
    add_output_options(validity, validity_out, "csv");

    // convergence
    auto* convergence = app.add_subcommand("convergence", "Spread of the Monte Carlo error across seeds vs N");
    CaseArgs conv_args;
    int seed_count = 20;
    std::vector<std::int64_t> n_list{1000, 5000, 15000, 20000, 30000, 100000};
    OutputArgs conv_out;
    add_case_options(convergence, conv_args);
    convergence->add_option("--seeds", seed_count, "Number of seeds per N")->capture_default_str();
    convergence->add_option("--n-list", n_list, "Comma-separated iteration counts, ascending")
        ->delimiter(',')
        ->capture_default_str();
    add_output_options(convergence, conv_out, "csv");

    std::vector<const char*> argv;
    argv.push_back("roiacc");
    for (const auto& a : args)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (analyze->parsed()) {
            const auto scenario = io::load_scenario(analyze_file);
            const auto report = scenario_error_report(scenario, parse_aggregation_mode(mode));
            out << io::emit(report, analyze_out.options());
        } else if (simulate->parsed()) {
            const auto cfg = resolve_case(sim_args);
            const auto res = run_simulation(cfg);
            out << io::emit(res, compare_with_analytic(res), sim_out.options());
        } else if (sweep->parsed()) {
            sweep_cfg.range = parse_range(range_tokens);
            if (sweep_cost)
                sweep_cfg.case_source = Money(*sweep_cost);
            else if (sweep_band)
                sweep_cfg.case_source = parse_band(*sweep_band);
            const auto rows = run_sweep(sweep_cfg);
            out << io::emit(std::span<const SweepRow>(rows), sweep_out.options());
        } else if (validity->parsed()) {
            const auto rows = taylor_validity_table(validity_max, validity_step);
            out << io::emit(std::span<const ValidityRow>(rows), validity_out.options());
        } else if (convergence->parsed()) {
            const auto cfg = resolve_case(conv_args);
            const auto rows = convergence_study(cfg, n_list, seed_count);
            out << io::emit(std::span<const ConvergenceRow>(rows), conv_out.options());
        }
    } catch (const io::ParseError& e) {
        err << "roiacc: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "roiacc: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "roiacc: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitOk;
}

} // namespace roi::cli

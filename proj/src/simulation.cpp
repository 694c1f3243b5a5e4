#include "roi/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace roi {

namespace {

// Closed-form comparisons between the engine (relative space) and the
// analytic bounds (absolute space) differ only by rounding.
constexpr double kContainmentTolerance = 1e-12;

struct Deviates {
    double u;
    double v;
};

Deviates deviates(rng::Substream& stream) noexcept
{
    const double u = stream.symmetric();
    const double v = stream.symmetric();
    return {u, v};
}

double relative_roi(double ratio, double e_benefit, double e_cost, Deviates d) noexcept
{
    const double fb = 1.0 + d.u * e_benefit;
    const double fc = 1.0 + d.v * e_cost;
    return ratio * fb / fc - 1.0;
}

void check_errors(double e_benefit, double e_cost)
{
    if (!(e_benefit >= 0.0) || e_benefit > 1.0)
        throw DomainError("benefit relative error must lie in [0, 1], got " + detail::describe(e_benefit));
    if (!(e_cost >= 0.0))
        throw DomainError("cost relative error must be non-negative, got " + detail::describe(e_cost));
    if (e_cost >= kMaxCostError)
        throw DomainError("cost relative error must be below " + detail::describe(kMaxCostError)
                          + " (sampled cost must stay positive), got " + detail::describe(e_cost));
}

double percentile(std::span<const double> sorted, double p)
{
    if (sorted.size() == 1)
        return sorted.front();
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

DrawStats summarize(std::span<const double> xs)
{
    DrawStats st;
    st.mean = detail::compensated_sum(xs) / static_cast<double>(xs.size());
    std::vector<double> sq;
    sq.reserve(xs.size());
    for (double x : xs)
        sq.push_back((x - st.mean) * (x - st.mean));
    st.std = xs.size() > 1 ? std::sqrt(detail::compensated_sum(sq) / static_cast<double>(xs.size() - 1)) : 0.0;

    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    st.min = sorted.front();
    st.max = sorted.back();
    st.p5 = percentile(sorted, 0.05);
    st.p50 = percentile(sorted, 0.50);
    st.p95 = percentile(sorted, 0.95);
    return st;
}

unsigned worker_count(unsigned requested, std::int64_t work)
{
    unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    // Below a few thousand draws the thread start-up dominates.
    const auto useful = static_cast<unsigned>(std::max<std::int64_t>(1, work / 4096));
    return std::min(n, useful);
}

} // namespace

CostRange band_range(ProjectBand band) noexcept
{
    switch (band) {
    case ProjectBand::small:
        return {100.0, 500.0};
    case ProjectBand::medium:
        return {501.0, 900.0};
    case ProjectBand::large:
        return {901.0, 1300.0};
    }
    return {100.0, 500.0};
}

std::string_view to_string(ProjectBand band) noexcept
{
    switch (band) {
    case ProjectBand::small:
        return "small";
    case ProjectBand::medium:
        return "medium";
    case ProjectBand::large:
        return "large";
    }
    return "small";
}

ProjectBand parse_band(std::string_view text)
{
    if (text == "small")
        return ProjectBand::small;
    if (text == "medium")
        return ProjectBand::medium;
    if (text == "large")
        return ProjectBand::large;
    throw std::invalid_argument("unknown project band '" + std::string(text) + "'");
}

SweepRange sweep_range_low() noexcept { return {0.0, 0.45}; }
SweepRange sweep_range_high() noexcept { return {0.40, 0.95}; }

void validate(const SimulationConfig& config)
{
    if (config.iterations < 1)
        throw DomainError("iterations must be at least 1");
    if (!(config.benefit_cost_ratio > 0.0) || !std::isfinite(config.benefit_cost_ratio))
        throw DomainError("benefit-cost ratio must be positive");
    check_errors(config.e_benefit, config.e_cost);
    if (const auto* cost = std::get_if<Money>(&config.case_source); cost && cost->amount() <= 0.0)
        throw DomainError("explicit actual cost must be positive");
}

SimulationCase build_case(const CaseSource& source, double ratio, rng::Substream& stream)
{
    if (!(ratio > 0.0) || !std::isfinite(ratio))
        throw DomainError("benefit-cost ratio must be positive, got " + detail::describe(ratio));

    Money cost;
    if (const auto* band = std::get_if<ProjectBand>(&source)) {
        const auto range = band_range(*band);
        cost = Money(stream.uniform(range.low, range.high));
    } else {
        cost = std::get<Money>(source);
        if (cost.amount() <= 0.0)
            throw DomainError("explicit actual cost must be positive");
    }
    // B/C is the configured ratio by construction, so R_act = ratio - 1.
    return SimulationCase{cost, Money(cost.amount() * ratio), RoiValue(ratio - 1.0), ratio};
}

DrawRecord sample_draw(Money benefit_act, Money cost_act, double e_benefit, double e_cost,
                       rng::Substream& stream)
{
    if (cost_act.amount() <= 0.0)
        throw DomainError("actual cost must be positive");
    check_errors(e_benefit, e_cost);
    const Deviates d = deviates(stream);
    const double ratio = benefit_act.amount() / cost_act.amount();
    return DrawRecord{Money(benefit_act.amount() * (1.0 + d.u * e_benefit)),
                      Money(cost_act.amount() * (1.0 + d.v * e_cost)),
                      RoiValue(relative_roi(ratio, e_benefit, e_cost, d))};
}

DrawRecord draw_at(const SimulationCase& sim_case, const SimulationConfig& config, std::uint64_t index)
{
    rng::Substream stream(config.seed, index, kDrawDomain);
    check_errors(config.e_benefit, config.e_cost);
    const Deviates d = deviates(stream);
    return DrawRecord{Money(sim_case.benefit_act.amount() * (1.0 + d.u * config.e_benefit)),
                      Money(sim_case.cost_act.amount() * (1.0 + d.v * config.e_cost)),
                      RoiValue(relative_roi(sim_case.ratio, config.e_benefit, config.e_cost, d))};
}

SimulationResult run_simulation(const SimulationConfig& config)
{
    validate(config);

    SimulationResult res;
    res.config = config;
    res.iterations = config.iterations;
    res.seed = config.seed;
    {
        rng::Substream case_stream(config.seed, 0, kCaseDomain);
        res.sim_case = build_case(config.case_source, config.benefit_cost_ratio, case_stream);
    }
    res.actual_roi = res.sim_case.roi_act;

    const auto n = static_cast<std::size_t>(config.iterations);
    res.roi_estimates.resize(n);
    const double ratio = res.sim_case.ratio;
    const double eb = config.e_benefit;
    const double ec = config.e_cost;
    const std::uint64_t seed = config.seed;
    auto fill = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            rng::Substream stream(seed, i, kDrawDomain);
            res.roi_estimates[i] = relative_roi(ratio, eb, ec, deviates(stream));
        }
    };

    const unsigned workers = worker_count(config.threads, config.iterations);
    if (workers <= 1) {
        fill(0, n);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (n + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = std::min(n, w * chunk);
            const std::size_t end = std::min(n, begin + chunk);
            pool.emplace_back(fill, begin, end);
        }
    }

    // Reduction runs in iteration order on one thread, independent of workers.
    const double roi_act = res.actual_roi.value();
    std::vector<double> abs_err(n);
    for (std::size_t i = 0; i < n; ++i)
        abs_err[i] = std::abs(roi_act - res.roi_estimates[i]);
    res.mean_abs_error = detail::compensated_sum(abs_err) / static_cast<double>(n);
    res.draw_stats = summarize(res.roi_estimates);
    return res;
}

std::vector<SweepRow> run_sweep(const SweepConfig& config)
{
    if (!(config.step > 0.0))
        throw DomainError("sweep step must be positive");
    if (config.range.start < 0.0)
        throw DomainError("sweep start must be non-negative");
    const auto grid = decimal_grid(config.range.start, config.range.stop, config.step);
    if (!grid.empty() && grid.back() >= kMaxCostError)
        throw DomainError("sweep grid reaches e = " + detail::describe(grid.back())
                          + "; cost relative error must stay below " + detail::describe(kMaxCostError));

    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (double e : grid) {
        SimulationConfig sc;
        sc.iterations = config.iterations;
        sc.seed = config.seed;
        sc.case_source = config.case_source;
        sc.benefit_cost_ratio = config.benefit_cost_ratio;
        sc.e_benefit = e;
        sc.e_cost = e;
        sc.threads = config.threads;
        const auto res = run_simulation(sc);
        rows.push_back({e, res.mean_abs_error, config.benefit_cost_ratio, config.iterations, config.seed});
    }
    return rows;
}

std::vector<ConvergenceRow> convergence_study(const SimulationConfig& config,
                                              std::span<const std::int64_t> n_list, int seed_count)
{
    if (n_list.empty())
        throw DomainError("convergence study needs at least one iteration count");
    if (!std::is_sorted(n_list.begin(), n_list.end()))
        throw DomainError("iteration counts must be ascending");
    if (seed_count < 2)
        throw DomainError("convergence study needs at least 2 seeds for a spread");

    std::vector<ConvergenceRow> rows;
    for (std::int64_t n : n_list) {
        std::vector<double> errors;
        errors.reserve(static_cast<std::size_t>(seed_count));
        for (int k = 0; k < seed_count; ++k) {
            SimulationConfig sc = config;
            sc.iterations = n;
            sc.seed = config.seed + static_cast<std::uint64_t>(k);
            errors.push_back(run_simulation(sc).mean_abs_error);
        }
        const auto [lo, hi] = std::minmax_element(errors.begin(), errors.end());
        rows.push_back({n, *hi - *lo, detail::compensated_sum(errors) / static_cast<double>(errors.size()),
                        *lo, *hi});
    }
    return rows;
}

AnalyticComparison compare_with_analytic(const SimulationResult& result)
{
    const auto& c = result.sim_case;
    const Estimate benefit{c.benefit_act, Money(c.benefit_act.amount() * result.config.e_benefit)};
    const Estimate cost{c.cost_act, Money(c.cost_act.amount() * result.config.e_cost)};

    AnalyticComparison cmp{.max_probable_error = max_probable_error(benefit, cost),
                           .probable_error = probable_error(benefit, cost),
                           .exact_bounds = exact_worst_case_bounds(benefit, cost),
                           .mc_mean_abs_error = result.mean_abs_error};
    cmp.approximations_ordered = cmp.probable_error <= cmp.max_probable_error;

    const double lo = cmp.exact_bounds.lower.value();
    const double hi = cmp.exact_bounds.upper.value();
    const double lo_tol = kContainmentTolerance * std::max(1.0, std::abs(lo));
    const double hi_tol = kContainmentTolerance * std::max(1.0, std::abs(hi));
    cmp.draws_contained = std::all_of(result.roi_estimates.begin(), result.roi_estimates.end(),
                                      [&](double r) { return r >= lo - lo_tol && r <= hi + hi_tol; });
    return cmp;
}

} // namespace roi

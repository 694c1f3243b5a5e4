// Monte Carlo estimate of ROI error.
//
// A case fixes the actual cost and benefit (benefit = cost * ratio). Each
// iteration then draws an estimated benefit uniformly from
// [B(1 - e_b), B(1 + e_b)] and an estimated cost from [C(1 - e_c), C(1 + e_c)],
// computes the estimated ROI, and the run reports the mean absolute deviation
// from the actual ROI.
//
// Sampling happens in relative space: iteration i draws u, v uniform on
// [-1, 1) from its own counter-based substream and evaluates
//
//     roi_est = ratio * (1 + u * e_b) / (1 + v * e_c) - 1,
//
// which equals (beta - zeta) / zeta with beta = B(1 + u e_b), zeta = C(1 + v e_c).
// Results therefore depend only on (ratio, e_b, e_c, seed, N): project size
// drops out exactly, and sweeps over e reuse the same (u, v) per iteration.

#ifndef ROI_SIMULATION_HPP
#define ROI_SIMULATION_HPP

#include "roi/core.hpp"
#include "roi/philox.hpp"
#include "roi/propagation.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace roi {

enum class ProjectBand { small, medium, large };

struct CostRange {
    double low;
    double high;
};

/// Cost ranges in thousands: small [100, 500], medium [501, 900],
/// large [901, 1300].
CostRange band_range(ProjectBand band) noexcept;
std::string_view to_string(ProjectBand band) noexcept;
/// Throws std::invalid_argument for anything but small / medium / large.
ProjectBand parse_band(std::string_view text);

using CaseSource = std::variant<ProjectBand, Money>;

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr std::int64_t kDefaultIterations = 30000;
inline constexpr double kDefaultBenefitCostRatio = 2.0;
/// e_cost at or above this is rejected; the sampled cost must stay positive.
inline constexpr double kMaxCostError = 0.999;

// Substream domains, so the case draw never shares deviates with iterations.
inline constexpr std::uint32_t kDrawDomain = 0;
inline constexpr std::uint32_t kCaseDomain = 1;

struct SimulationConfig {
    std::int64_t iterations = kDefaultIterations;
    std::uint64_t seed = kDefaultSeed;
    CaseSource case_source = ProjectBand::small;
    double benefit_cost_ratio = kDefaultBenefitCostRatio;
    double e_benefit = 0.0;
    double e_cost = 0.0;
    /// Worker threads for the draw loop; 0 picks hardware concurrency.
    /// Has no effect on results.
    unsigned threads = 1;
};

/// Throws DomainError if any field is out of range.
void validate(const SimulationConfig& config);

struct SimulationCase {
    Money cost_act;
    Money benefit_act;
    RoiValue roi_act;
    double ratio = 0.0;
};

struct DrawRecord {
    Money beta;
    Money zeta;
    RoiValue roi_est;
};

struct DrawStats {
    double mean = 0.0;
    double std = 0.0;
    double min = 0.0;
    double max = 0.0;
    double p5 = 0.0;
    double p50 = 0.0;
    double p95 = 0.0;
};

struct SimulationResult {
    SimulationConfig config;
    SimulationCase sim_case;
    RoiValue actual_roi;
    double mean_abs_error = 0.0;
    DrawStats draw_stats;
    std::int64_t iterations = 0;
    std::uint64_t seed = 0;
    /// Estimated ROI of every iteration, in iteration order.
    std::vector<double> roi_estimates;
};

struct SweepRange {
    double start;
    double stop;
};

/// 0 to 0.45.
SweepRange sweep_range_low() noexcept;
/// 0.40 to 0.95.
SweepRange sweep_range_high() noexcept;

struct SweepConfig {
    SweepRange range = sweep_range_low();
    double step = 0.05;
    double benefit_cost_ratio = kDefaultBenefitCostRatio;
    std::int64_t iterations = kDefaultIterations;
    std::uint64_t seed = kDefaultSeed;
    CaseSource case_source = ProjectBand::small;
    unsigned threads = 1;
};

struct SweepRow {
    double e = 0.0;
    double delta_r = 0.0;
    double ratio = 0.0;
    std::int64_t iterations = 0;
    std::uint64_t seed = 0;
};

struct ConvergenceRow {
    std::int64_t iterations = 0;
    double spread = 0.0;
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct AnalyticComparison {
    double max_probable_error = 0.0;
    double probable_error = 0.0;
    RoiBounds exact_bounds;
    double mc_mean_abs_error = 0.0;
    /// Every draw lies inside exact_bounds.
    bool draws_contained = false;
    /// probable_error <= max_probable_error.
    bool approximations_ordered = false;
};

/// Picks the actual cost (uniform in the band, or verbatim) and derives the
/// benefit and actual ROI from the ratio.
SimulationCase build_case(const CaseSource& source, double ratio, rng::Substream& stream);

/// Relative-space draw: u, v uniform on [-1, 1) from stream.
DrawRecord sample_draw(Money benefit_act, Money cost_act, double e_benefit, double e_cost,
                       rng::Substream& stream);

/// Iteration `index` of a run, regenerated from its own substream.
DrawRecord draw_at(const SimulationCase& sim_case, const SimulationConfig& config, std::uint64_t index);

SimulationResult run_simulation(const SimulationConfig& config);

std::vector<SweepRow> run_sweep(const SweepConfig& config);

/// Runs seed_count simulations (seeds config.seed, config.seed + 1, ...) at
/// every N in n_list and reports the spread and mean of the resulting errors.
std::vector<ConvergenceRow> convergence_study(const SimulationConfig& config,
                                              std::span<const std::int64_t> n_list, int seed_count);

AnalyticComparison compare_with_analytic(const SimulationResult& result);

} // namespace roi

#endif // ROI_SIMULATION_HPP

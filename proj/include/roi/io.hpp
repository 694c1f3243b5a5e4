// Scenario documents and result serialization.
//
// Scenario documents are JSON:
//
//   {
//     "name": "CRM rollout",
//     "currency_label": "K USD",              (optional)
//     "benefits": [
//       {"label": "savings", "amount": 200, "relative_error": 0.1}
//     ],
//     "costs": [
//       {"label": "licences", "amount": 60, "abs_error": 6},
//       {"label": "labour",   "amount": 40, "relative_error": 0.1}
//     ]
//   }
//
// Each item gives its error as exactly one of abs_error (money) or
// relative_error (fraction of amount); both are normalized to absolute.
//
// Results are emitted as CSV or JSON. CSV reals use 15 significant digits and
// always carry a decimal point or exponent; JSON reals use the shortest form
// that round-trips.

#ifndef ROI_IO_HPP
#define ROI_IO_HPP

#include "roi/core.hpp"
#include "roi/propagation.hpp"
#include "roi/simulation.hpp"

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace roi::io {

/// Malformed or invalid document. field() is a path such as
/// "costs[1].relative_error", or empty for document-level problems.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string field, const std::string& reason);
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class Format { csv, json };

Format parse_format(std::string_view text);

struct EmitOptions {
    Format format = Format::csv;
    /// Multiply displayed fractions by 100.
    bool percent = false;
};

Scenario parse_scenario(std::string_view text);
/// Throws ParseError with an empty field path if the file cannot be read.
Scenario load_scenario(const std::filesystem::path& path);
std::string emit_scenario(const Scenario& s);

/// Aggregate view of a scenario as a simulation case: actual cost, benefit to
/// cost ratio and relative errors, with errors summed (worst-case
/// aggregation).
struct ScenarioTotals {
    Money cost;
    double ratio = 0.0;
    double e_benefit = 0.0;
    double e_cost = 0.0;
};
ScenarioTotals scenario_totals(const Scenario& s);

std::string format_real(double x);

std::string emit(const ErrorReport& report, const EmitOptions& opts);
std::string emit(const SimulationResult& result, const AnalyticComparison& cmp, const EmitOptions& opts);
std::string emit(std::span<const SweepRow> rows, const EmitOptions& opts);
std::string emit(std::span<const ValidityRow> rows, const EmitOptions& opts);
std::string emit(std::span<const ConvergenceRow> rows, const EmitOptions& opts);

/// Reads back a sweep CSV produced by emit(); used by plotting scripts and
/// the round-trip tests.
std::vector<SweepRow> parse_sweep_csv(std::string_view text);

} // namespace roi::io

#endif // ROI_IO_HPP

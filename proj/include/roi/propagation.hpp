// Analytic error propagation through ROI = B/C - 1.
//
// Two first-order approximations are provided, the maximum probable error
//
//     dR ~ (B/C) * (dB/B + dC/C)
//
// and the probable error (independent errors, summed in quadrature)
//
//     dR ~ (B/C) * sqrt((dB/B)^2 + (dC/C)^2)
//
// together with the exact worst-case interval
//
//     [(B - dB)/(C + dC) - 1, (B + dB)/(C - dC) - 1].
//
// The maximum probable error is the same expression whichever way it is
// derived (bounding the quotient and dropping dR*dC, expanding 1/(1 - dC/C)
// to first order, or taking the total differential). It sits between the two
// exact deviations: R - lower <= dR <= upper - R, so it understates the
// upward worst case whenever dC > 0. taylor_validity_table() shows how quickly
// the first-order expansion 1/(1 - x) ~ 1 + x degrades; its relative gap is
// exactly x^2.
//
// Relative error: relative_form() divides dR by |R| literally. This is not the
// textbook quotient form dB/B + dC/C; the two differ by the factor
// (B/C) / (B/C - 1), and coincide only for the bare quotient B/C.

#ifndef ROI_PROPAGATION_HPP
#define ROI_PROPAGATION_HPP

#include "roi/core.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace roi {

enum class AggregationMode { sum, quadrature };

std::string_view to_string(AggregationMode mode) noexcept;
/// Accepts "sum" or "quadrature"; throws std::invalid_argument otherwise.
AggregationMode parse_aggregation_mode(std::string_view text);

struct RoiBounds {
    RoiValue lower;
    RoiValue upper;
};

struct ErrorReport {
    RoiValue roi;
    double max_probable_error = 0.0;
    double probable_error = 0.0;
    RoiValue roi_upper;
    RoiValue roi_lower;
    /// max_probable_error / |roi|; empty at break-even.
    std::optional<double> relative_max_error;
    Estimate benefit_total;
    Estimate cost_total;
    AggregationMode aggregation_mode = AggregationMode::sum;

    /// The approximation paired with the aggregation mode: max probable
    /// error for sum, probable error for quadrature.
    [[nodiscard]] double headline_error() const noexcept
    {
        return aggregation_mode == AggregationMode::sum ? max_probable_error : probable_error;
    }
};

struct ValidityRow {
    double rel_error = 0.0;
    double exact = 0.0;
    double approx = 0.0;
    double relative_gap = 0.0;
};

double max_probable_error(const Estimate& benefit, const Estimate& cost);
double probable_error(const Estimate& benefit, const Estimate& cost);

/// Exact worst-case ROI interval, no linearisation.
/// Throws DomainError if dC >= C or dB > B.
RoiBounds exact_worst_case_bounds(const Estimate& benefit, const Estimate& cost);

/// delta_r / |roi|. Throws DomainError at roi == 0.
double relative_form(double delta_r, RoiValue roi);

Money aggregate_error_sum(std::span<const Money> component_errors);
Money aggregate_error_quadrature(std::span<const Money> component_errors);

/// Collapses a list of component estimates into a single total, combining
/// the errors according to mode.
Estimate aggregate(std::span<const Estimate> components, AggregationMode mode);

ErrorReport error_report(const Estimate& benefit_total, const Estimate& cost_total,
                         AggregationMode mode = AggregationMode::sum);
ErrorReport scenario_error_report(const Scenario& s, AggregationMode mode);

ValidityRow validity_row(double rel_error);
/// Rows at x = 0, step, 2*step, ... up to max_x. Requires 0 < step <= max_x < 1.
std::vector<ValidityRow> taylor_validity_table(double max_x, double step);

/// Grid points start, start + step, ... <= stop, snapped to 1e-9 so that
/// decimal steps print cleanly. Shared by the validity table and sweeps.
std::vector<double> decimal_grid(double start, double stop, double step);

} // namespace roi

#endif // ROI_PROPAGATION_HPP

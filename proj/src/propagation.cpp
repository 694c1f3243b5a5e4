#include "roi/propagation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace roi {

namespace {

// Relative errors of both operands, with the shared preconditions of the
// first-order formulas.
struct RelativeErrors {
    double ratio;
    double benefit;
    double cost;
};

RelativeErrors relative_errors(const Estimate& benefit, const Estimate& cost)
{
    if (benefit.value.amount() <= 0.0)
        throw DomainError("benefit value must be positive for relative error propagation");
    if (cost.value.amount() <= 0.0)
        throw DomainError("cost value must be positive for relative error propagation");
    return {benefit.value.amount() / cost.value.amount(), relative_error_of(benefit),
            relative_error_of(cost)};
}

std::vector<double> amounts(std::span<const Money> xs)
{
    std::vector<double> out;
    out.reserve(xs.size());
    for (Money m : xs)
        out.push_back(m.amount());
    return out;
}

} // namespace

std::string_view to_string(AggregationMode mode) noexcept
{
    return mode == AggregationMode::sum ? "sum" : "quadrature";
}

AggregationMode parse_aggregation_mode(std::string_view text)
{
    if (text == "sum")
        return AggregationMode::sum;
    if (text == "quadrature")
        return AggregationMode::quadrature;
    throw std::invalid_argument("unknown aggregation mode '" + std::string(text) + "'");
}

double max_probable_error(const Estimate& benefit, const Estimate& cost)
{
    const auto r = relative_errors(benefit, cost);
    return r.ratio * (r.benefit + r.cost);
}

double probable_error(const Estimate& benefit, const Estimate& cost)
{
    const auto r = relative_errors(benefit, cost);
    return r.ratio * std::hypot(r.benefit, r.cost);
}

RoiBounds exact_worst_case_bounds(const Estimate& benefit, const Estimate& cost)
{
    const double b = benefit.value.amount();
    const double db = benefit.abs_error.amount();
    const double c = cost.value.amount();
    const double dc = cost.abs_error.amount();
    if (c - dc <= 0.0)
        throw DomainError("worst-case denominator non-positive: cost error " + detail::describe(dc)
                          + " >= cost " + detail::describe(c));
    if (db > b)
        throw DomainError("negative worst-case benefit: benefit error exceeds benefit");
    return {RoiValue((b - db) / (c + dc) - 1.0), RoiValue((b + db) / (c - dc) - 1.0)};
}

double relative_form(double delta_r, RoiValue roi)
{
    if (roi.value() == 0.0)
        throw DomainError("relative error undefined at zero ROI");
    return delta_r / std::abs(roi.value());
}

Money aggregate_error_sum(std::span<const Money> component_errors)
{
    return Money(detail::compensated_sum(amounts(component_errors)));
}

Money aggregate_error_quadrature(std::span<const Money> component_errors)
{
    // Scale by the largest term so squaring cannot overflow or underflow.
    double scale = 0.0;
    for (Money m : component_errors)
        scale = std::max(scale, m.amount());
    if (scale == 0.0)
        return Money(0.0);
    std::vector<double> squares;
    squares.reserve(component_errors.size());
    for (Money m : component_errors) {
        const double t = m.amount() / scale;
        squares.push_back(t * t);
    }
    return Money(scale * std::sqrt(detail::compensated_sum(squares)));
}

Estimate aggregate(std::span<const Estimate> components, AggregationMode mode)
{
    std::vector<Money> errors;
    errors.reserve(components.size());
    for (const auto& e : components)
        errors.push_back(e.abs_error);
    const Money err = mode == AggregationMode::sum ? aggregate_error_sum(errors)
                                                   : aggregate_error_quadrature(errors);
    return Estimate{total_value(components), err};
}

ErrorReport error_report(const Estimate& benefit_total, const Estimate& cost_total, AggregationMode mode)
{
    ErrorReport rep;
    rep.benefit_total = benefit_total;
    rep.cost_total = cost_total;
    rep.aggregation_mode = mode;
    rep.roi = compute_roi(benefit_total.value, cost_total.value);
    const auto bounds = exact_worst_case_bounds(benefit_total, cost_total);
    rep.roi_lower = bounds.lower;
    rep.roi_upper = bounds.upper;
    rep.max_probable_error = max_probable_error(benefit_total, cost_total);
    rep.probable_error = probable_error(benefit_total, cost_total);
    if (rep.roi.value() != 0.0)
        rep.relative_max_error = relative_form(rep.max_probable_error, rep.roi);
    return rep;
}

ErrorReport scenario_error_report(const Scenario& s, AggregationMode mode)
{
    const auto benefits = estimates_of(s.benefits);
    const auto costs = estimates_of(s.costs);
    const Estimate b = aggregate(benefits, mode);
    const Estimate c = aggregate(costs, mode);
    if (c.abs_error.amount() >= c.value.amount())
        throw DomainError("aggregated cost error " + detail::describe(c.abs_error.amount())
                          + " is not below total cost " + detail::describe(c.value.amount()));
    return error_report(b, c, mode);
}

ValidityRow validity_row(double x)
{
    if (!(x >= 0.0) || x >= 1.0)
        throw DomainError("relative error must lie in [0, 1): 1/(1 - x) has a pole at x = 1");
    ValidityRow row;
    row.rel_error = x;
    row.exact = 1.0 / (1.0 - x);
    row.approx = 1.0 + x;
    // exact - approx = x^2 / (1 - x), without the cancellation.
    row.relative_gap = (x * x / (1.0 - x)) / row.exact;
    return row;
}

std::vector<ValidityRow> taylor_validity_table(double max_x, double step)
{
    if (max_x >= 1.0)
        throw DomainError("max relative error must be below 1 (pole of the exact term)");
    if (!(step > 0.0) || step > max_x)
        throw DomainError("step must satisfy 0 < step <= max");
    std::vector<ValidityRow> rows;
    for (double x : decimal_grid(0.0, max_x, step))
        rows.push_back(validity_row(x));
    return rows;
}

std::vector<double> decimal_grid(double start, double stop, double step)
{
    if (!(step > 0.0))
        throw DomainError("grid step must be positive");
    if (stop < start)
        throw DomainError("grid stop must not precede start");
    constexpr double snap = 1e9;
    std::vector<double> out;
    for (long k = 0;; ++k) {
        const double x = std::round((start + static_cast<double>(k) * step) * snap) / snap;
        if (x > stop + 0.5 / snap)
            break;
        out.push_back(x);
    }
    return out;
}

} // namespace roi

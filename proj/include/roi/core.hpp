// Core value types and ROI arithmetic shared by the propagation, simulation
// and I/O layers.
//
// Monetary amounts are abstract non-negative reals. ROI values are stored as
// fractions (1.0 means 100%); percent is a display concern only.

#ifndef ROI_CORE_HPP
#define ROI_CORE_HPP

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace roi {

/// Raised when an input lies outside the domain of a formula (zero cost,
/// non-positive worst-case denominator, undefined relative error, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Non-negative, finite monetary amount.
class Money {
public:
    constexpr Money() = default;
    explicit Money(double amount);

    [[nodiscard]] constexpr double amount() const noexcept { return amount_; }

    friend constexpr bool operator==(Money, Money) = default;
    friend constexpr auto operator<=>(Money, Money) = default;

private:
    double amount_ = 0.0;
};

/// A monetary value together with its absolute error bound.
struct Estimate {
    Money value;
    Money abs_error;

    friend bool operator==(const Estimate&, const Estimate&) = default;
};

/// Convenience constructor: make_estimate(200, 20) is 200 +/- 20.
Estimate make_estimate(double value, double abs_error);

/// Dimensionless return on investment, as a fraction.
class RoiValue {
public:
    constexpr RoiValue() = default;
    explicit RoiValue(double value);

    [[nodiscard]] constexpr double value() const noexcept { return value_; }
    [[nodiscard]] double percent() const noexcept { return value_ * 100.0; }

    friend constexpr bool operator==(RoiValue, RoiValue) = default;
    friend constexpr auto operator<=>(RoiValue, RoiValue) = default;

private:
    double value_ = 0.0;
};

struct LineItem {
    std::string label;
    Estimate estimate;

    friend bool operator==(const LineItem&, const LineItem&) = default;
};

/// Itemized benefits and costs of one project.
///
/// Construction through make_scenario() enforces: at least one cost item,
/// positive total cost, and total cost relative error (summed) below 1.
struct Scenario {
    std::string name;
    std::string currency_label;
    std::vector<LineItem> benefits;
    std::vector<LineItem> costs;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

Scenario make_scenario(std::string name, std::vector<LineItem> benefits,
                       std::vector<LineItem> costs);

/// ROI = (benefit - cost) / cost. Throws DomainError unless cost > 0.
RoiValue compute_roi(Money benefit_total, Money cost_total);

/// Sum of component values; an empty list sums to zero.
Money total_value(std::span<const Estimate> components);

/// abs_error / value. Throws DomainError when value is zero.
double relative_error_of(const Estimate& e);

std::vector<Estimate> estimates_of(std::span<const LineItem> items);

namespace detail {
// Neumaier-compensated sum; used wherever amounts or errors are aggregated.
double compensated_sum(std::span<const double> xs);
// Shortest round-trip decimal form, for diagnostics.
std::string describe(double x);
} // namespace detail

} // namespace roi

#endif // ROI_CORE_HPP

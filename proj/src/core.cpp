#include "roi/core.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <string>

namespace roi {

namespace detail {

std::string describe(double x)
{
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}


double compensated_sum(std::span<const double> xs)
{
    double sum = 0.0;
    double carry = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }
    return sum + carry;
}

} // namespace detail

using detail::compensated_sum;
using detail::describe;

Money::Money(double amount) : amount_(amount)
{
    if (!std::isfinite(amount) || amount < 0.0)
        throw DomainError("money amount must be finite and non-negative, got " + describe(amount));
}

RoiValue::RoiValue(double value) : value_(value)
{
    if (!std::isfinite(value))
        throw DomainError("ROI value must be finite");
}

Estimate make_estimate(double value, double abs_error)
{
    return Estimate{Money(value), Money(abs_error)};
}

Scenario make_scenario(std::string name, std::vector<LineItem> benefits, std::vector<LineItem> costs)
{
    if (costs.empty())
        throw DomainError("total cost must be positive: scenario has no cost items");

    std::vector<double> values;
    std::vector<double> errors;
    for (const auto& item : costs) {
        values.push_back(item.estimate.value.amount());
        errors.push_back(item.estimate.abs_error.amount());
    }
    const double total = compensated_sum(values);
    if (total <= 0.0)
        throw DomainError("total cost must be positive");
    const double total_error = compensated_sum(errors);
    if (total_error >= total)
        throw DomainError("total cost error (" + describe(total_error) + ") must be below total cost ("
                          + describe(total) + ")");

    return Scenario{std::move(name), {}, std::move(benefits), std::move(costs)};
}

RoiValue compute_roi(Money benefit_total, Money cost_total)
{
    const double c = cost_total.amount();
    if (c <= 0.0)
        throw DomainError("ROI undefined: cost must be positive");
    return RoiValue((benefit_total.amount() - c) / c);
}

Money total_value(std::span<const Estimate> components)
{
    std::vector<double> values;
    values.reserve(components.size());
    for (const auto& e : components)
        values.push_back(e.value.amount());
    return Money(compensated_sum(values));
}

double relative_error_of(const Estimate& e)
{
    if (e.value.amount() == 0.0)
        throw DomainError("relative error undefined for a zero value");
    return e.abs_error.amount() / e.value.amount();
}

std::vector<Estimate> estimates_of(std::span<const LineItem> items)
{
    std::vector<Estimate> out;
    out.reserve(items.size());
    for (const auto& item : items)
        out.push_back(item.estimate);
    return out;
}

} // namespace roi

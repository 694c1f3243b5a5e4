#include "roi/io.hpp"

#include "json.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace roi::io {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const char* kind_name(bool is_cost) { return is_cost ? "cost" : "benefit"; }

double number_field(const json& obj, const std::string& key, const std::string& path)
{
    const auto it = obj.find(key);
    if (it == obj.end())
        throw ParseError(path + "." + key, "missing required field");
    if (!it->is_number())
        throw ParseError(path + "." + key, "expected a number");
    const double x = it->get<double>();
    if (!std::isfinite(x))
        throw ParseError(path + "." + key, "must be finite");
    return x;
}

LineItem parse_item(const json& node, const std::string& path, bool is_cost)
{
    if (!node.is_object())
        throw ParseError(path, "expected an object with label, amount and one error field");
    for (const auto& [key, _] : node.items()) {
        if (key != "label" && key != "amount" && key != "abs_error" && key != "relative_error")
            throw ParseError(path + "." + key, "unknown field");
    }

    LineItem item;
    if (const auto it = node.find("label"); it != node.end()) {
        if (!it->is_string())
            throw ParseError(path + ".label", "expected a string");
        item.label = it->get<std::string>();
    }

    const double amount = number_field(node, "amount", path);
    if (amount < 0.0)
        throw ParseError(path + ".amount", "must be non-negative");

    const bool has_abs = node.contains("abs_error");
    const bool has_rel = node.contains("relative_error");
    if (has_abs == has_rel)
        throw ParseError(path, "give exactly one of abs_error or relative_error");

    double abs_error = 0.0;
    if (has_rel) {
        const double rel = number_field(node, "relative_error", path);
        if (rel < 0.0)
            throw ParseError(path + ".relative_error", "must be non-negative");
        if (amount <= 0.0)
            throw ParseError(path + ".amount", "must be positive when a relative error is given");
        if (is_cost && rel >= 1.0)
            throw ParseError(path + ".relative_error", "cost error ≥ 100%");
        abs_error = rel * amount;
    } else {
        abs_error = number_field(node, "abs_error", path);
        if (abs_error < 0.0)
            throw ParseError(path + ".abs_error", "must be non-negative");
        if (is_cost && abs_error > 0.0 && abs_error >= amount)
            throw ParseError(path + ".abs_error", "cost error ≥ 100%");
    }
    item.estimate = make_estimate(amount, abs_error);
    return item;
}

std::vector<LineItem> parse_items(const json& root, const std::string& key, bool is_cost)
{
    const auto it = root.find(key);
    if (it == root.end())
        throw ParseError(key, "missing required field");
    if (!it->is_array())
        throw ParseError(key, std::string("expected a list of ") + kind_name(is_cost) + " items");
    std::vector<LineItem> items;
    for (std::size_t i = 0; i < it->size(); ++i)
        items.push_back(parse_item((*it)[i], key + "[" + std::to_string(i) + "]", is_cost));
    return items;
}

double scaled(double x, const EmitOptions& opts) { return opts.percent ? x * 100.0 : x; }

// JSON numbers are written by nlohmann with round-trip precision.
ordered_json estimate_json(const Estimate& e)
{
    return ordered_json{{"value", e.value.amount()}, {"abs_error", e.abs_error.amount()}};
}

std::string csv_key_values(const std::vector<std::pair<std::string, std::string>>& kv)
{
    std::string out = "field,value\n";
    for (const auto& [k, v] : kv)
        out += k + "," + v + "\n";
    return out;
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

} // namespace

ParseError::ParseError(std::string field, const std::string& reason)
    : std::runtime_error(field.empty() ? reason : field + ": " + reason), field_(std::move(field))
{
}

Format parse_format(std::string_view text)
{
    if (text == "csv")
        return Format::csv;
    if (text == "json")
        return Format::json;
    throw std::invalid_argument("unknown output format '" + std::string(text) + "'");
}

Scenario parse_scenario(std::string_view text)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("", std::string("malformed scenario document: ") + e.what());
    }
    if (!root.is_object())
        throw ParseError("", "scenario document must be a JSON object");
    for (const auto& [key, _] : root.items()) {
        if (key != "name" && key != "currency_label" && key != "benefits" && key != "costs")
            throw ParseError(key, "unknown field");
    }

    const auto name_it = root.find("name");
    if (name_it == root.end())
        throw ParseError("name", "missing required field");
    if (!name_it->is_string())
        throw ParseError("name", "expected a string");

    std::string currency;
    if (const auto it = root.find("currency_label"); it != root.end()) {
        if (!it->is_string())
            throw ParseError("currency_label", "expected a string");
        currency = it->get<std::string>();
    }

    auto benefits = parse_items(root, "benefits", false);
    auto costs = parse_items(root, "costs", true);
    if (costs.empty())
        throw ParseError("costs", "total cost must be positive");

    Scenario s;
    try {
        s = make_scenario(name_it->get<std::string>(), std::move(benefits), std::move(costs));
    } catch (const DomainError& e) {
        throw ParseError("costs", e.what());
    }
    s.currency_label = std::move(currency);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("", "cannot open scenario file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string emit_scenario(const Scenario& s)
{
    auto items = [](const std::vector<LineItem>& xs) {
        ordered_json arr = ordered_json::array();
        for (const auto& item : xs)
            arr.push_back(ordered_json{{"label", item.label},
                                       {"amount", item.estimate.value.amount()},
                                       {"abs_error", item.estimate.abs_error.amount()}});
        return arr;
    };
    ordered_json doc;
    doc["name"] = s.name;
    if (!s.currency_label.empty())
        doc["currency_label"] = s.currency_label;
    doc["benefits"] = items(s.benefits);
    doc["costs"] = items(s.costs);
    return doc.dump(2) + "\n";
}

ScenarioTotals scenario_totals(const Scenario& s)
{
    const auto benefits = estimates_of(s.benefits);
    const auto costs = estimates_of(s.costs);
    const Estimate b = aggregate(benefits, AggregationMode::sum);
    const Estimate c = aggregate(costs, AggregationMode::sum);
    if (c.value.amount() <= 0.0)
        throw DomainError("total cost must be positive");
    if (b.value.amount() <= 0.0)
        throw DomainError("total benefit must be positive to form a benefit-cost ratio");
    return ScenarioTotals{c.value, b.value.amount() / c.value.amount(), relative_error_of(b),
                          relative_error_of(c)};
}

std::string format_real(double x)
{
    std::array<char, 40> buf{};
    const int n = std::snprintf(buf.data(), buf.size(), "%.15g", x);
    std::string s(buf.data(), static_cast<std::size_t>(n));
    if (s == "-0")
        s = "0";
    if (s.find_first_of(".eni") == std::string::npos)
        s += ".0";
    return s;
}

std::string emit(const ErrorReport& r, const EmitOptions& opts)
{
    const auto rel = r.relative_max_error;
    if (opts.format == Format::json) {
        ordered_json doc;
        doc["aggregation_mode"] = std::string(to_string(r.aggregation_mode));
        doc["units"] = opts.percent ? "percent" : "fraction";
        doc["roi"] = scaled(r.roi.value(), opts);
        doc["max_probable_error"] = scaled(r.max_probable_error, opts);
        doc["probable_error"] = scaled(r.probable_error, opts);
        doc["roi_lower"] = scaled(r.roi_lower.value(), opts);
        doc["roi_upper"] = scaled(r.roi_upper.value(), opts);
        doc["relative_max_error"] = rel ? ordered_json(scaled(*rel, opts)) : ordered_json(nullptr);
        doc["benefit_total"] = estimate_json(r.benefit_total);
        doc["cost_total"] = estimate_json(r.cost_total);
        return doc.dump(2) + "\n";
    }
    return csv_key_values({
        {"aggregation_mode", std::string(to_string(r.aggregation_mode))},
        {"roi", format_real(scaled(r.roi.value(), opts))},
        {"max_probable_error", format_real(scaled(r.max_probable_error, opts))},
        {"probable_error", format_real(scaled(r.probable_error, opts))},
        {"roi_lower", format_real(scaled(r.roi_lower.value(), opts))},
        {"roi_upper", format_real(scaled(r.roi_upper.value(), opts))},
        {"relative_max_error", rel ? format_real(scaled(*rel, opts)) : std::string("undefined")},
        {"benefit_total", format_real(r.benefit_total.value.amount())},
        {"benefit_abs_error", format_real(r.benefit_total.abs_error.amount())},
        {"cost_total", format_real(r.cost_total.value.amount())},
        {"cost_abs_error", format_real(r.cost_total.abs_error.amount())},
    });
}

std::string emit(const SimulationResult& res, const AnalyticComparison& cmp, const EmitOptions& opts)
{
    const auto& cfg = res.config;
    const std::string source = std::holds_alternative<ProjectBand>(cfg.case_source)
                                   ? std::string(to_string(std::get<ProjectBand>(cfg.case_source)))
                                   : std::string("explicit");
    const auto& st = res.draw_stats;
    if (opts.format == Format::json) {
        ordered_json doc;
        doc["units"] = opts.percent ? "percent" : "fraction";
        doc["config"] = ordered_json{{"iterations", res.iterations},
                                     {"seed", res.seed},
                                     {"case_source", source},
                                     {"benefit_cost_ratio", cfg.benefit_cost_ratio},
                                     {"e_benefit", scaled(cfg.e_benefit, opts)},
                                     {"e_cost", scaled(cfg.e_cost, opts)}};
        doc["case"] = ordered_json{{"cost_act", res.sim_case.cost_act.amount()},
                                   {"benefit_act", res.sim_case.benefit_act.amount()},
                                   {"roi_act", scaled(res.actual_roi.value(), opts)}};
        doc["mean_abs_error"] = scaled(res.mean_abs_error, opts);
        doc["draw_stats"] = ordered_json{{"mean", scaled(st.mean, opts)}, {"std", scaled(st.std, opts)},
                                         {"min", scaled(st.min, opts)},   {"max", scaled(st.max, opts)},
                                         {"p5", scaled(st.p5, opts)},     {"p50", scaled(st.p50, opts)},
                                         {"p95", scaled(st.p95, opts)}};
        doc["analytic"] = ordered_json{{"max_probable_error", scaled(cmp.max_probable_error, opts)},
                                       {"probable_error", scaled(cmp.probable_error, opts)},
                                       {"roi_lower", scaled(cmp.exact_bounds.lower.value(), opts)},
                                       {"roi_upper", scaled(cmp.exact_bounds.upper.value(), opts)},
                                       {"draws_contained", cmp.draws_contained},
                                       {"approximations_ordered", cmp.approximations_ordered}};
        return doc.dump(2) + "\n";
    }
    auto f = [&](double x) { return format_real(scaled(x, opts)); };
    return csv_key_values({
        {"iterations", std::to_string(res.iterations)},
        {"seed", std::to_string(res.seed)},
        {"case_source", source},
        {"benefit_cost_ratio", format_real(cfg.benefit_cost_ratio)},
        {"e_benefit", f(cfg.e_benefit)},
        {"e_cost", f(cfg.e_cost)},
        {"cost_act", format_real(res.sim_case.cost_act.amount())},
        {"benefit_act", format_real(res.sim_case.benefit_act.amount())},
        {"roi_act", f(res.actual_roi.value())},
        {"mean_abs_error", f(res.mean_abs_error)},
        {"draw_mean", f(st.mean)},
        {"draw_std", f(st.std)},
        {"draw_min", f(st.min)},
        {"draw_max", f(st.max)},
        {"draw_p5", f(st.p5)},
        {"draw_p50", f(st.p50)},
        {"draw_p95", f(st.p95)},
        {"analytic_max_probable_error", f(cmp.max_probable_error)},
        {"analytic_probable_error", f(cmp.probable_error)},
        {"analytic_roi_lower", f(cmp.exact_bounds.lower.value())},
        {"analytic_roi_upper", f(cmp.exact_bounds.upper.value())},
        {"draws_contained", cmp.draws_contained ? "true" : "false"},
        {"approximations_ordered", cmp.approximations_ordered ? "true" : "false"},
    });
}

std::string emit(std::span<const SweepRow> rows, const EmitOptions& opts)
{
    if (opts.format == Format::json) {
        ordered_json arr = ordered_json::array();
        for (const auto& r : rows)
            arr.push_back(ordered_json{{"e", scaled(r.e, opts)},
                                       {"delta_r", scaled(r.delta_r, opts)},
                                       {"ratio", r.ratio},
                                       {"iterations", r.iterations},
                                       {"seed", r.seed}});
        return arr.dump(2) + "\n";
    }
    std::string out = "e,delta_r,ratio,iterations,seed\n";
    for (const auto& r : rows) {
        out += format_real(scaled(r.e, opts)) + "," + format_real(scaled(r.delta_r, opts)) + ","
               + format_real(r.ratio) + "," + std::to_string(r.iterations) + "," + std::to_string(r.seed) + "\n";
    }
    return out;
}

std::string emit(std::span<const ValidityRow> rows, const EmitOptions& opts)
{
    if (opts.format == Format::json) {
        ordered_json arr = ordered_json::array();
        for (const auto& r : rows)
            arr.push_back(ordered_json{{"rel_error", scaled(r.rel_error, opts)},
                                       {"exact", r.exact},
                                       {"approx", r.approx},
                                       {"relative_gap", scaled(r.relative_gap, opts)}});
        return arr.dump(2) + "\n";
    }
    std::string out = "rel_error,exact,approx,relative_gap\n";
    for (const auto& r : rows) {
        out += format_real(scaled(r.rel_error, opts)) + "," + format_real(r.exact) + "," + format_real(r.approx)
               + "," + format_real(scaled(r.relative_gap, opts)) + "\n";
    }
    return out;
}

std::string emit(std::span<const ConvergenceRow> rows, const EmitOptions& opts)
{
    if (opts.format == Format::json) {
        ordered_json arr = ordered_json::array();
        for (const auto& r : rows)
            arr.push_back(ordered_json{{"iterations", r.iterations},
                                       {"spread", scaled(r.spread, opts)},
                                       {"mean", scaled(r.mean, opts)},
                                       {"min", scaled(r.min, opts)},
                                       {"max", scaled(r.max, opts)}});
        return arr.dump(2) + "\n";
    }
    std::string out = "iterations,spread,mean,min,max\n";
    for (const auto& r : rows) {
        out += std::to_string(r.iterations) + "," + format_real(scaled(r.spread, opts)) + ","
               + format_real(scaled(r.mean, opts)) + "," + format_real(scaled(r.min, opts)) + ","
               + format_real(scaled(r.max, opts)) + "\n";
    }
    return out;
}

std::vector<SweepRow> parse_sweep_csv(std::string_view text)
{
    std::vector<SweepRow> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    auto to_double = [&](const std::string& s) {
        double x = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
            throw ParseError("line " + std::to_string(lineno), "bad number '" + s + "'");
        return x;
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty())
            continue;
        if (lineno == 1) {
            if (line != "e,delta_r,ratio,iterations,seed")
                throw ParseError("line 1", "unexpected sweep header");
            continue;
        }
        std::vector<std::string> cols;
        std::istringstream ls(line);
        for (std::string col; std::getline(ls, col, ',');)
            cols.push_back(trim(col));
        if (cols.size() != 5)
            throw ParseError("line " + std::to_string(lineno), "expected 5 columns");
        rows.push_back({to_double(cols[0]), to_double(cols[1]), to_double(cols[2]),
                        static_cast<std::int64_t>(to_double(cols[3])), std::stoull(cols[4])});
    }
    return rows;
}

} // namespace roi::io

#pragma once

// Experiment configuration: defaults, INI-style file loading and the
// effective-config echo written at the top of every CSV.
//
//   [system]        lambda_b lambda_e lambda_u tx_power_dbm noise_dbm pathloss_beta
//                   power_split cache_user_ratio
//   [content]       file_count cache_size zipf_skew
//   [monte_carlo]   mode trials seed window_km eavesdropper_radius_km threads noise
//   [sweep_theta]   start stop points spacing alphas
//   [sweep_density] start stop points spacing cache_sizes
//   [sweep_threshold] start stop points spacing density_ratios
//   [validate]      audit_samples audit_window_km audit_thetas fault
//
// Unknown sections or keys are rejected.

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

#include "../analytic_metrics.hpp"
#include "../content_model.hpp"
#include "../errors.hpp"
#include "../monte_carlo.hpp"

namespace cachesec::experiments {

enum class McMode { off, decoupled, coupled };
enum class Spacing { linear, log };

struct GridSpec {
    double start = 0.0;
    double stop = 1.0;
    std::size_t points = 2;
    Spacing spacing = Spacing::linear;

    void validate(const std::string& name) const
    {
        if (!(std::isfinite(start) && std::isfinite(stop))) {
            throw ConfigError(name + ": grid bounds must be finite");
        }
        if (points < 2) {
            throw ConfigError(name + ": grid needs at least 2 points");
        }
        if (stop <= start) {
            throw ConfigError(name + ": grid stop must exceed start");
        }
        if (spacing == Spacing::log && start <= 0.0) {
            throw ConfigError(name + ": log grid needs a positive start");
        }
    }

    std::vector<double> values() const
    {
        std::vector<double> out(points);
        for (std::size_t i = 0; i < points; ++i) {
            const double f = static_cast<double>(i) / static_cast<double>(points - 1);
            out[i] = spacing == Spacing::linear ? start + f * (stop - start)
                                                : start * std::pow(stop / start, f);
            // Round to 12 significant digits so grid values print as typed.
            char buffer[32];
            const auto printed = std::to_chars(buffer, buffer + sizeof buffer, out[i], std::chars_format::general, 12);
            std::from_chars(buffer, printed.ptr, out[i]);
        }
        out.back() = stop;
        return out;
    }
};

struct ValidateSpec {
    std::size_t audit_samples = 1'000'000;
    double audit_window_km = 5.0;
    std::vector<double> audit_thetas{0.3, 0.5, 0.8};
    mc::Fault fault = mc::Fault::none;
};

struct ExperimentConfig {
    SystemParams system;
    ContentParams content;
    mc::McConfig mc;
    McMode mc_mode = McMode::off;

    GridSpec theta{0.05, 0.95, 19, Spacing::linear};
    std::vector<double> alphas{0.2, 0.5, 0.8};

    GridSpec density{0.1, 10.0, 21, Spacing::log};
    std::vector<std::size_t> cache_sizes{5, 10, 20};

    GridSpec threshold{0.0, 4.0, 41, Spacing::linear};
    std::vector<double> threshold_ratios{0.5, 5.0};

    ValidateSpec validation;

    /// Throws ConfigError on any out-of-domain value.
    void validate() const
    {
        try {
            system.validate();
            content.validate();
            mc.validate();
        } catch (const ParameterError& e) {
            throw ConfigError(e.what());
        }
        if (system.interference_limited == mc.include_noise) {
            throw ConfigError("config: noise switch out of sync between system and monte_carlo");
        }
        theta.validate("sweep_theta");
        density.validate("sweep_density");
        threshold.validate("sweep_threshold");
        if (theta.start <= 0.0 || theta.stop > 1.0) {
            throw ConfigError("sweep_theta: theta grid must lie in (0, 1]");
        }
        if (threshold.start < 0.0) {
            throw ConfigError("sweep_threshold: thresholds must be >= 0");
        }
        if (alphas.empty() || cache_sizes.empty() || threshold_ratios.empty() || validation.audit_thetas.empty()) {
            throw ConfigError("config: series lists must not be empty");
        }
        for (double a : alphas) {
            if (!(a >= 0.0 && a <= 1.0)) {
                throw ConfigError("sweep_theta: alphas must lie in [0, 1]");
            }
        }
        for (std::size_t m : cache_sizes) {
            if (m > content.file_count) {
                throw ConfigError("sweep_density: cache size exceeds file count");
            }
        }
        for (double r : threshold_ratios) {
            if (!(r >= 0.0 && std::isfinite(r))) {
                throw ConfigError("sweep_threshold: density ratios must be >= 0");
            }
        }
        for (double t : validation.audit_thetas) {
            if (!(t > 0.0 && t < 1.0)) {
                throw ConfigError("validate: audit thetas must lie in (0, 1)");
            }
        }
        if (validation.audit_samples < 1 || !(validation.audit_window_km > 0.0)) {
            throw ConfigError("validate: audit needs samples and a positive window");
        }
    }

    /// Switches thermal noise on or off in both the analytic and the simulated model.
    void set_noise(bool on)
    {
        system.interference_limited = !on;
        mc.include_noise = on;
    }
};

// ---------------------------------------------------------------------------
// Formatting

/// Shortest round-trip decimal form, locale independent.
inline std::string format_number(double value)
{
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0.0 ? "inf" : "-inf";
    }
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, end);
}

inline std::string_view to_string(McMode mode)
{
    switch (mode) {
    case McMode::off: return "off";
    case McMode::decoupled: return "decoupled";
    case McMode::coupled: return "coupled";
    }
    return "off";
}

inline std::string_view to_string(Spacing spacing)
{
    return spacing == Spacing::linear ? "linear" : "log";
}

inline std::string_view to_string(mc::Fault fault)
{
    return fault == mc::Fault::none ? "none" : "drop_self_interference";
}

namespace detail {

template <typename T>
std::string join(const std::vector<T>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        if constexpr (std::is_floating_point_v<T>) {
            out += format_number(values[i]);
        } else {
            out += std::to_string(values[i]);
        }
    }
    return out;
}

inline void grid_lines(std::vector<std::pair<std::string, std::string>>& out, const GridSpec& grid)
{
    out.emplace_back("start", format_number(grid.start));
    out.emplace_back("stop", format_number(grid.stop));
    out.emplace_back("points", std::to_string(grid.points));
    out.emplace_back("spacing", std::string(to_string(grid.spacing)));
}

} // namespace detail

using Section = std::pair<std::string, std::vector<std::pair<std::string, std::string>>>;

/// Effective configuration as ordered (section, key = value) lists.
inline std::vector<Section> describe(const ExperimentConfig& c)
{
    std::vector<Section> out;
    const auto& s = c.system;
    out.push_back({"system",
                   {{"lambda_b", format_number(s.lambda_b)},
                    {"lambda_e", format_number(s.lambda_e)},
                    {"lambda_u", format_number(s.lambda_u)},
                    {"tx_power_dbm", format_number(s.tx_power_dbm)},
                    {"noise_dbm", format_number(s.noise_dbm)},
                    {"pathloss_beta", format_number(s.pathloss_beta)},
                    {"power_split", format_number(s.power_split)},
                    {"cache_user_ratio", format_number(s.cache_user_ratio)}}});
    out.push_back({"content",
                   {{"file_count", std::to_string(c.content.file_count)},
                    {"cache_size", std::to_string(c.content.cache_size)},
                    {"zipf_skew", format_number(c.content.zipf_skew)}}});
    out.push_back({"monte_carlo",
                   {{"mode", std::string(to_string(c.mc_mode))},
                    {"trials", std::to_string(c.mc.trials)},
                    {"seed", std::to_string(c.mc.seed)},
                    {"window_km", format_number(c.mc.window_radius_m / 1000.0)},
                    {"eavesdropper_radius_km", format_number(c.mc.eavesdropper_radius_m / 1000.0)},
                    {"threads", std::to_string(c.mc.threads)},
                    {"noise", c.mc.include_noise ? "on" : "off"}}});
    Section theta{"sweep_theta", {}};
    detail::grid_lines(theta.second, c.theta);
    theta.second.emplace_back("alphas", detail::join(c.alphas));
    out.push_back(theta);
    Section density{"sweep_density", {}};
    detail::grid_lines(density.second, c.density);
    density.second.emplace_back("cache_sizes", detail::join(c.cache_sizes));
    out.push_back(density);
    Section threshold{"sweep_threshold", {}};
    detail::grid_lines(threshold.second, c.threshold);
    threshold.second.emplace_back("density_ratios", detail::join(c.threshold_ratios));
    out.push_back(threshold);
    out.push_back({"validate",
                   {{"audit_samples", std::to_string(c.validation.audit_samples)},
                    {"audit_window_km", format_number(c.validation.audit_window_km)},
                    {"audit_thetas", detail::join(c.validation.audit_thetas)},
                    {"fault", std::string(to_string(c.validation.fault))}}});
    return out;
}

/// The effective configuration as '#'-prefixed lines.
inline std::string echo(const ExperimentConfig& config)
{
    std::string out;
    for (const auto& [section, entries] : describe(config)) {
        out += "# [" + section + "]\n";
        for (const auto& [key, value] : entries) {
            out += "# " + key + " = " + value + "\n";
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline std::string trim(std::string_view text)
{
    const auto first = text.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t");
    return std::string(text.substr(first, last - first + 1));
}

inline double parse_double(const std::string& where, const std::string& text)
{
    const std::string t = trim(text);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || end != t.data() + t.size() || t.empty()) {
        throw ConfigError(where + ": expected a number, got '" + text + "'");
    }
    return value;
}

inline std::uint64_t parse_unsigned(const std::string& where, const std::string& text)
{
    const std::string t = trim(text);
    std::uint64_t value = 0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || end != t.data() + t.size() || t.empty()) {
        throw ConfigError(where + ": expected a non-negative integer, got '" + text + "'");
    }
    return value;
}

inline bool parse_switch(const std::string& where, const std::string& text)
{
    const std::string t = trim(text);
    if (t == "on" || t == "true" || t == "1") {
        return true;
    }
    if (t == "off" || t == "false" || t == "0") {
        return false;
    }
    throw ConfigError(where + ": expected on/off, got '" + text + "'");
}

inline std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        out.push_back(trim(item));
    }
    return out;
}

inline Spacing parse_spacing(const std::string& where, const std::string& text)
{
    const std::string t = trim(text);
    if (t == "linear") {
        return Spacing::linear;
    }
    if (t == "log") {
        return Spacing::log;
    }
    throw ConfigError(where + ": spacing must be linear or log");
}

} // namespace detail

inline McMode parse_mc_mode(const std::string& text)
{
    const std::string t = detail::trim(text);
    if (t == "off") {
        return McMode::off;
    }
    if (t == "decoupled") {
        return McMode::decoupled;
    }
    if (t == "coupled") {
        return McMode::coupled;
    }
    throw ConfigError("monte_carlo.mode: expected off, decoupled or coupled, got '" + text + "'");
}

/// Applies one `section.key = value` setting.
inline void apply_setting(ExperimentConfig& c, const std::string& section, const std::string& key,
                          const std::string& value)
{
    const std::string where = section + "." + key;
    auto number = [&] { return detail::parse_double(where, value); };
    auto count = [&] { return detail::parse_unsigned(where, value); };
    auto numbers = [&] {
        std::vector<double> out;
        for (const auto& item : detail::split_list(value)) {
            out.push_back(detail::parse_double(where, item));
        }
        return out;
    };
    auto grid = [&](GridSpec& g) {
        if (key == "start") {
            g.start = number();
        } else if (key == "stop") {
            g.stop = number();
        } else if (key == "points") {
            g.points = count();
        } else if (key == "spacing") {
            g.spacing = detail::parse_spacing(where, value);
        } else {
            return false;
        }
        return true;
    };

    if (section == "system") {
        static const std::map<std::string, double SystemParams::*> fields{
            {"lambda_b", &SystemParams::lambda_b},
            {"lambda_e", &SystemParams::lambda_e},
            {"lambda_u", &SystemParams::lambda_u},
            {"tx_power_dbm", &SystemParams::tx_power_dbm},
            {"noise_dbm", &SystemParams::noise_dbm},
            {"pathloss_beta", &SystemParams::pathloss_beta},
            {"power_split", &SystemParams::power_split},
            {"cache_user_ratio", &SystemParams::cache_user_ratio},
        };
        const auto it = fields.find(key);
        if (it == fields.end()) {
            throw ConfigError("unknown key '" + where + "'");
        }
        c.system.*(it->second) = number();
        return;
    }
    if (section == "content") {
        if (key == "file_count") {
            c.content.file_count = count();
        } else if (key == "cache_size") {
            c.content.cache_size = count();
        } else if (key == "zipf_skew") {
            c.content.zipf_skew = number();
        } else {
            throw ConfigError("unknown key '" + where + "'");
        }
        return;
    }
    if (section == "monte_carlo") {
        if (key == "mode") {
            c.mc_mode = parse_mc_mode(value);
            if (c.mc_mode == McMode::coupled) {
                c.mc.coupling = mc::Coupling::coupled;
            } else {
                c.mc.coupling = mc::Coupling::decoupled;
            }
        } else if (key == "trials") {
            c.mc.trials = count();
        } else if (key == "seed") {
            c.mc.seed = count();
        } else if (key == "window_km") {
            c.mc.window_radius_m = number() * 1000.0;
        } else if (key == "eavesdropper_radius_km") {
            c.mc.eavesdropper_radius_m = number() * 1000.0;
        } else if (key == "threads") {
            c.mc.threads = static_cast<unsigned>(count());
        } else if (key == "noise") {
            c.set_noise(detail::parse_switch(where, value));
        } else {
            throw ConfigError("unknown key '" + where + "'");
        }
        return;
    }
    if (section == "sweep_theta") {
        if (!grid(c.theta)) {
            if (key != "alphas") {
                throw ConfigError("unknown key '" + where + "'");
            }
            c.alphas = numbers();
        }
        return;
    }
    if (section == "sweep_density") {
        if (!grid(c.density)) {
            if (key != "cache_sizes") {
                throw ConfigError("unknown key '" + where + "'");
            }
            c.cache_sizes.clear();
            for (const auto& item : detail::split_list(value)) {
                c.cache_sizes.push_back(detail::parse_unsigned(where, item));
            }
        }
        return;
    }
    if (section == "sweep_threshold") {
        if (!grid(c.threshold)) {
            if (key != "density_ratios") {
                throw ConfigError("unknown key '" + where + "'");
            }
            c.threshold_ratios = numbers();
        }
        return;
    }
    if (section == "validate") {
        if (key == "audit_samples") {
            c.validation.audit_samples = count();
        } else if (key == "audit_window_km") {
            c.validation.audit_window_km = number();
        } else if (key == "audit_thetas") {
            c.validation.audit_thetas = numbers();
        } else if (key == "fault") {
            const std::string t = detail::trim(value);
            if (t == "none") {
                c.validation.fault = mc::Fault::none;
            } else if (t == "drop_self_interference") {
                c.validation.fault = mc::Fault::drop_self_interference;
            } else {
                throw ConfigError(where + ": expected none or drop_self_interference");
            }
        } else {
            throw ConfigError("unknown key '" + where + "'");
        }
        return;
    }
    throw ConfigError("unknown section '[" + section + "]'");
}

/// Parses INI text on top of `base`. Keys outside a section are rejected.
inline ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {})
{
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("config: " + e.message() + " at line " + std::to_string(e.line()));
    }
    for (const auto& [section, entries] : tree) {
        if (entries.empty() && !entries.data().empty()) {
            throw ConfigError("config: key '" + section + "' is outside any section");
        }
        for (const auto& [key, value] : entries) {
            apply_setting(base, section, key, value.data());
        }
    }
    return base;
}

inline ExperimentConfig parse_config_text(const std::string& text, ExperimentConfig base = {})
{
    std::istringstream in(text);
    return parse_config(in, std::move(base));
}

inline ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {})
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    return parse_config(in, std::move(base));
}

} // namespace cachesec::experiments

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "cachesec/experiments/commands.hpp"

using namespace cachesec;
using namespace cachesec::experiments;

namespace {

int failures = 0;

void verdict(int id, bool ok, const std::string& what)
{
    std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", what.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
}

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> log_grid(double lo, double hi, int n)
{
    std::vector<double> v;
    for (int i = 0; i < n; ++i) {
        v.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    }
    return v;
}

void special_functions()
{
    bool ok = true;
    for (auto [a, b, c] : {std::array{1.0, 0.5, 1.5}, std::array{0.3, -2.7, 4.1}, std::array{2.0, 2.0, 0.5}}) {
        ok = ok && numerics::gauss_2f1(a, b, c, 0.0) == 1.0;
    }
    double worst = 0.0;
    for (double g : {0.01, 0.1, 1.0, 2.0, 10.0}) {
        const double exact = std::sqrt(g) * std::atan(std::sqrt(g));
        worst = std::max({worst, std::abs(numerics::z_kernel(g, 4.0) - exact),
                          std::abs(numerics::z_kernel_generic(g, 4.0) - exact)});
    }
    const double gp = std::abs(numerics::gamma_product(4.0) - std::numbers::pi / 2.0);
    ok = ok && worst <= 1e-10 && gp <= 1e-12;
    verdict(1, ok, "2F1(a,b;c;0)=1, max |Z-sqrt(g)atan(sqrt(g))|=" + num(worst) + ", |Gp-pi/2|=" + num(gp));
}

void closed_vs_quadrature(const SystemParams& params, const TierDensities& tiers)
{
    double worst = 0.0;
    for (double g : log_grid(1e-2, 1e2, 10)) {
        worst = std::max({worst,
                          std::abs(cdf_user_secure(g, params, tiers) - cdf_user_secure_quadrature(g, params, tiers)),
                          std::abs(cdf_eav_secure(g, params) - cdf_eav_secure_quadrature(g, params)),
                          std::abs(cdf_user_normal(g, params) - cdf_user_normal_quadrature(g, params)),
                          std::abs(cdf_eav_normal(g, params) - cdf_eav_normal_quadrature(g, params))});
    }
    verdict(2, worst <= 1e-6, "four SINR CDFs, 10 thresholds in [0.01, 100]: max deviation " + num(worst));
}

double check_value(const ValidationReport& report, const std::string& name)
{
    const auto* c = report.find(name);
    return c ? c->value : std::nan("");
}

bool all_pass(const ValidationReport& report, const std::string& prefix)
{
    bool any = false;
    for (const auto& c : report.checks) {
        if (c.name.rfind(prefix, 0) == 0) {
            any = true;
            if (c.status == CheckStatus::fail) {
                return false;
            }
        }
    }
    return any;
}

} // namespace

int main()
{
    const auto t_start = std::chrono::steady_clock::now();
    const ExperimentConfig defaults;
    const SystemParams& params = defaults.system;
    const auto tiers = tiers_for(params, defaults.content);

    special_functions();
    closed_vs_quadrature(params, tiers);

    // Full validate suite at the default configuration with 1e5 decoupled trials.
    ExperimentConfig vconfig = defaults;
    vconfig.mc_mode = McMode::decoupled;
    vconfig.mc.coupling = mc::Coupling::decoupled;
    vconfig.mc.trials = 100'000;
    const auto t_validate = std::chrono::steady_clock::now();
    ValidationReport report;
    check_rate_formulas(report, params, tiers);
    check_coverage_formulas(report, params, tiers);
    const auto samples = mc::simulate_both_modes(mc_config(vconfig), params, tiers);
    check_against_samples(report, params, tiers, samples);
    check_secure_bound(report, vconfig);
    const double validate_seconds = seconds_since(t_validate);
    std::fputs(render(report).c_str(), stdout);
    std::fputs(adjudication_summary(report).c_str(), stdout);

    verdict(3, all_pass(report, "cdf."),
            "sup-distance at 1e5 trials: user secure " + num(check_value(report, "cdf.user_secure.sup_distance")) +
                ", user normal " + num(check_value(report, "cdf.user_normal.sup_distance")) + ", eav secure " +
                num(check_value(report, "cdf.eav_secure.sup_distance")) + ", eav normal " +
                num(check_value(report, "cdf.eav_normal.sup_distance")) + " (limit 0.01)");

    {
        SystemParams low = params;
        low.lambda_e = 0.1 * params.lambda_b;
        SystemParams high = params;
        high.lambda_e = 10.0 * params.lambda_b;
        const double c_low = avg_secrecy_rate_normal(low).value;
        const double c_high = avg_secrecy_rate_normal(high).value;
        const double drop = 1.0 - c_high / c_low;
        const bool ok = std::abs(c_low - 2.0) <= 0.15 * 2.0 && std::abs(c_high - 0.3) <= 0.15 * 0.3 &&
                        std::abs(drop - 0.85) <= 0.05;
        verdict(4, ok, "C_NT(0.1)=" + num(c_low) + ", C_NT(10)=" + num(c_high) + ", drop " + num(100.0 * drop) + "%");
    }

    {
        SystemParams high = params;
        high.lambda_e = 10.0 * params.lambda_b;
        const double c_high = avg_secrecy_rate_secure(high, tiers_for(high, defaults.content)).value;
        const double rel = check_value(report, "rate.secure.analytic_vs_mc");
        const bool ok = c_high >= 1.5 && all_pass(report, "rate.secure.analytic_vs_mc");
        verdict(5, ok, "C_ST at lambda_e/lambda_b=10 is " + num(c_high) + " (need >= 1.5); analytic vs MC at defaults " +
                           num(100.0 * rel) + "% (limit 3%)");
    }

    {
        const auto sweep = theta_sweep(defaults);
        bool ok = true;
        std::string detail;
        for (std::size_t i = 0; i < sweep.peaks.size(); ++i) {
            const auto& p = sweep.peaks[i];
            ok = ok && p.local_maxima == 1;
            if (i > 0) {
                ok = ok && p.rate > sweep.peaks[i - 1].rate;
            }
            detail += " alpha=" + num(p.alpha) + ": theta*=" + num(p.theta) + " rate " + num(p.rate) + " maxima " +
                      std::to_string(p.local_maxima) + ";";
        }
        verdict(6, ok, "unimodal, peak rising with alpha:" + detail);
    }

    {
        bool flagged_or_agree = true;
        std::size_t flags = 0;
        for (const auto& c : report.checks) {
            if (c.name.find("printed_vs_definition") != std::string::npos) {
                flagged_or_agree = flagged_or_agree && (c.status != CheckStatus::fail);
                flags += c.status == CheckStatus::flag ? 1 : 0;
            }
        }
        std::string z;
        for (double rs : adjudication_thresholds) {
            const std::string tag = "@" + format_number(rs);
            z += " R_s=" + num(rs) + ": ST " + num(check_value(report, "coverage.secure.definition_vs_mc" + tag)) +
                 ", NT " + num(check_value(report, "coverage.normal.definition_vs_mc" + tag)) + ";";
        }
        const bool ok = flagged_or_agree && all_pass(report, "coverage.");
        verdict(7, ok, std::to_string(flags) + " printed-formula points flagged; definition vs MC in SE:" + z);
    }

    {
        std::string detail;
        for (double theta : vconfig.validation.audit_thetas) {
            const auto* c = report.find("bound.secure_eavesdropper@theta=" + format_number(theta));
            detail += " theta=" + num(theta) + ": " + (c ? c->detail : std::string("missing")) + ";";
        }
        verdict(8, all_pass(report, "bound."), "violations of theta/(1-theta)+1e-12:" + detail);
    }

    {
        const auto grid = defaults.threshold.values();
        SystemParams low = params;
        low.lambda_e = 0.5 * params.lambda_b;
        SystemParams high = params;
        high.lambda_e = 5.0 * params.lambda_b;
        const auto a = coverage_curves(low, tiers_for(low, defaults.content), grid);
        const auto b = coverage_curves(high, tiers_for(high, defaults.content), grid);
        bool order = true;
        bool decrease = true;
        bool strictly = false;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            order = order && a.secure[i] >= a.normal[i] && b.secure[i] >= b.normal[i];
            decrease = decrease && b.secure[i] <= a.secure[i] && b.normal[i] <= a.normal[i];
            strictly = strictly || (b.secure[i] < a.secure[i] && b.normal[i] < a.normal[i]);
        }
        const std::size_t mid = grid.size() / 4;
        verdict(9, order && decrease && strictly,
                "definition-level coverage on " + std::to_string(grid.size()) + " R_s points; at R_s=" +
                    num(grid[mid]) + ": ratio 0.5 ST " + num(a.secure[mid]) + " NT " + num(a.normal[mid]) +
                    ", ratio 5 ST " + num(b.secure[mid]) + " NT " + num(b.normal[mid]));
    }

    {
        ExperimentConfig small = defaults;
        small.mc_mode = McMode::decoupled;
        small.mc.trials = 2'000;
        small.threshold = {0.0, 4.0, 9, Spacing::linear};
        const bool identical = cmd_sweep_threshold(small).csv == cmd_sweep_threshold(small).csv &&
                               cmd_sweep_density(small).csv == cmd_sweep_density(small).csv;

        mc::McConfig base = mc_config(vconfig);
        base.trials = 10'000;
        mc::McConfig wide = base;
        wide.window_radius_m *= 2.0;
        const auto s1 = mc::simulate_both_modes(base, params, tiers);
        const auto s2 = mc::simulate_both_modes(wide, params, tiers);
        const auto st1 = mc::rate_from(s1.secure);
        const auto st2 = mc::rate_from(s2.secure);
        const auto nt1 = mc::rate_from(s1.normal);
        const auto nt2 = mc::rate_from(s2.normal);
        const double dst = std::abs(st2.mean - st1.mean) / st2.std_error;
        const double dnt = std::abs(nt2.mean - nt1.mean) / nt2.std_error;
        const bool ok = identical && dst < 1.0 && dnt < 1.0 && validate_seconds <= 300.0;
        verdict(10, ok, std::string("byte-identical CSV ") + (identical ? "yes" : "no") +
                            "; window 30->60 km at 1e4 trials shifts ST by " + num(dst) + " SE, NT by " + num(dnt) +
                            " SE; validate suite " + num(validate_seconds) + " s (limit 300)");
    }

    std::printf("acceptance: %d of 10 criteria failed, %.1f s\n", failures, seconds_since(t_start));
    return failures == 0 ? 0 : 1;
}

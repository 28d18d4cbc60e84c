#pragma once

// Analytic secrecy metrics of the cache-aided network: SINR distributions of
// the typical user and of the most detrimental eavesdropper for both
// transmission modes, average secrecy rates and secrecy coverage.
//
// Units: densities are per km^2 (converted to per m^2 where a length scale
// enters), distances in metres, powers in dBm (converted to watts). The noise
// figure is the total noise power at the receiver.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "content_model.hpp"
#include "errors.hpp"
#include "numerics.hpp"

namespace cachesec {

struct SystemParams {
    double lambda_b = 1.0;        ///< BS density, per km^2
    double lambda_e = 5.0;        ///< eavesdropper density, per km^2
    double lambda_u = 100.0;      ///< user density, per km^2 (only sets the full-load regime)
    double tx_power_dbm = 30.0;   ///< P
    double noise_dbm = -174.0;    ///< sigma^2
    double pathloss_beta = 4.0;   ///< beta, in (2, 4]
    double power_split = 0.5;     ///< theta, share of power carrying the message
    double cache_user_ratio = 0.5; ///< alpha
    bool interference_limited = true; ///< noise treated as exactly zero

    void validate() const
    {
        using detail::require;
        require(std::isfinite(lambda_b) && lambda_b > 0.0, "system: lambda_b must be > 0");
        require(std::isfinite(lambda_e) && lambda_e >= 0.0, "system: lambda_e must be >= 0");
        require(std::isfinite(lambda_u) && lambda_u > 0.0, "system: lambda_u must be > 0");
        require(std::isfinite(tx_power_dbm), "system: tx power must be finite");
        require(std::isfinite(noise_dbm), "system: noise power must be finite");
        require(pathloss_beta > 2.0 + 1e-9 && pathloss_beta <= 4.0,
                "system: path-loss exponent must lie in (2, 4]");
        require(power_split > 0.0 && power_split <= 1.0, "system: power split theta must lie in (0, 1]");
        require(cache_user_ratio >= 0.0 && cache_user_ratio <= 1.0,
                "system: cache-user ratio alpha must lie in [0, 1]");
    }

    double density_ratio() const noexcept { return lambda_e / lambda_b; }
    double tx_power_w() const noexcept { return std::pow(10.0, (tx_power_dbm - 30.0) / 10.0); }
    double noise_w() const noexcept { return std::pow(10.0, (noise_dbm - 30.0) / 10.0); }
    /// sigma^2 / P, or zero in the interference-limited regime.
    double noise_to_power() const noexcept { return interference_limited ? 0.0 : noise_w() / tx_power_w(); }
    /// 1 / sqrt(pi * lambda_b) in metres: the natural length scale of the BS process.
    double length_scale_m() const noexcept { return 1.0 / std::sqrt(std::numbers::pi * lambda_b * 1e-6); }
};

/// Upper bound theta / (1 - theta) on any secure-mode eavesdropper SINR.
struct SecrecyThreshold {
    double gamma_th0 = std::numeric_limits<double>::infinity();

    explicit SecrecyThreshold(double power_split)
    {
        detail::require(power_split > 0.0 && power_split <= 1.0, "threshold: theta must lie in (0, 1]");
        if (power_split < 1.0) {
            gamma_th0 = power_split / (1.0 - power_split);
        }
    }
};

struct RateResult {
    double value = 0.0;                  ///< bits/s/Hz
    double quadrature_error_bound = 0.0;
};

struct CoverageResult {
    double probability = 0.0;
    double quadrature_error_bound = 0.0;
    double unclamped = 0.0;  ///< value of the integral before clamping to [0, 1]
    std::string warning;     ///< set when the integral left [0, 1] by more than its error bound
};

using Cdf = std::function<double(double)>;

/// Tier densities implied by the system and content parameters.
inline TierDensities tiers_for(const SystemParams& params, const ContentParams& content)
{
    return tier_densities(params.lambda_b, params.cache_user_ratio, hit_probability(content));
}

namespace detail {

inline void require_threshold(double gamma_th)
{
    require(gamma_th >= 0.0 && !std::isnan(gamma_th), "cdf: threshold must be >= 0");
}

inline void require_tiers(const SystemParams& params, const TierDensities& tiers)
{
    require(tiers.lambda_b1 >= 0.0 && tiers.lambda_b2 >= 0.0 && tiers.lambda_b3 >= 0.0,
            "cdf: tier densities must be >= 0");
    require(std::abs(tiers.total() - params.lambda_b) <= 1e-9 * params.lambda_b,
            "cdf: tier densities must sum to lambda_b");
}

// Eavesdropper SINR threshold mapped through the artificial-interference
// bracket: gamma / (theta - (1 - theta) gamma). Infinite at and above gamma_th0.
inline double secure_eavesdropper_argument(double gamma_th, double theta)
{
    const double bracket = theta - (1.0 - theta) * gamma_th;
    if (bracket <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return gamma_th / bracket;
}

// exp(-ratio / (Gamma-product * x^{2/beta})), the interference-limited
// eavesdropper CDF kernel; x is the (possibly bracket-mapped) threshold.
inline double eavesdropper_exponential(double ratio, double beta, double x)
{
    if (ratio == 0.0) {
        return 1.0;
    }
    if (x == 0.0) {
        return 0.0;
    }
    if (std::isinf(x)) {
        return 1.0;
    }
    return std::exp(-ratio / (numerics::gamma_product(beta) * std::pow(x, 2.0 / beta)));
}

// 1 - int_0^inf 2y exp(-y^2 A - c y^beta) dy, the user-side CDF integral in
// units of the BS length scale.
inline double user_cdf_integral(double a_coeff, double noise_coeff, double beta,
                                  const numerics::QuadratureSpec& spec)
{
    auto integrand = [=](double y) {
        return 2.0 * y * std::exp(-y * y * a_coeff - noise_coeff * std::pow(y, beta));
    };
    return 1.0 - numerics::integrate(integrand, 0.0, numerics::infinity, spec).value;
}

// exp(-ratio * int_0^inf 2y exp(-y^2 B - c y^beta) dy), the eavesdropper CDF
// integral in the same units.
inline double eavesdropper_cdf_integral(double ratio, double b_coeff, double noise_coeff, double beta,
                                          const numerics::QuadratureSpec& spec)
{
    auto integrand = [=](double y) {
        return 2.0 * y * std::exp(-y * y * b_coeff - noise_coeff * std::pow(y, beta));
    };
    return std::exp(-ratio * numerics::integrate(integrand, 0.0, numerics::infinity, spec).value);
}

} // namespace detail

// ---------------------------------------------------------------------------
// SINR distributions

/// CDF of the cache-enabled user's SINR under secure transmission, evaluated
/// by quadrature of the CDF integral (noise included unless interference-limited).
inline double cdf_user_secure_quadrature(double gamma_th, const SystemParams& params,
                                         const TierDensities& tiers,
                                         const numerics::QuadratureSpec& spec = {})
{
    detail::require_threshold(gamma_th);
    detail::require_tiers(params, tiers);
    if (gamma_th == 0.0) {
        return 0.0;
    }
    const double beta = params.pathloss_beta;
    const double theta = params.power_split;
    const double a_coeff = numerics::z_kernel(gamma_th, beta) * tiers.lambda_b1 / params.lambda_b +
                           numerics::z_kernel(gamma_th / theta, beta) * tiers.lambda_b3 / params.lambda_b + 1.0;
    const double noise_coeff =
        params.noise_to_power() / theta * gamma_th * std::pow(params.length_scale_m(), beta);
    return detail::user_cdf_integral(a_coeff, noise_coeff, beta, spec);
}

/// CDF of the cache-enabled user's SINR under secure transmission.
///
/// Interference-limited: 1 - 1 / (Z(g) l1/lb + Z(g/theta) l3/lb + 1).
inline double cdf_user_secure(double gamma_th, const SystemParams& params, const TierDensities& tiers)
{
    if (!params.interference_limited) {
        return cdf_user_secure_quadrature(gamma_th, params, tiers);
    }
    detail::require_threshold(gamma_th);
    detail::require_tiers(params, tiers);
    if (gamma_th == 0.0) {
        return 0.0;
    }
    const double beta = params.pathloss_beta;
    const double denominator = numerics::z_kernel(gamma_th, beta) * tiers.lambda_b1 / params.lambda_b +
                               numerics::z_kernel(gamma_th / params.power_split, beta) * tiers.lambda_b3 /
                                   params.lambda_b +
                               1.0;
    return 1.0 - 1.0 / denominator;
}

inline double cdf_eav_secure_quadrature(double gamma_th, const SystemParams& params,
                                        const numerics::QuadratureSpec& spec = {})
{
    detail::require_threshold(gamma_th);
    const SecrecyThreshold threshold(params.power_split);
    if (gamma_th >= threshold.gamma_th0) {
        return 1.0;
    }
    if (params.lambda_e == 0.0) {
        return 1.0;
    }
    if (gamma_th == 0.0) {
        return 0.0;
    }
    const double beta = params.pathloss_beta;
    const double mapped = detail::secure_eavesdropper_argument(gamma_th, params.power_split);
    const double b_coeff = numerics::gamma_product(beta) * std::pow(mapped, 2.0 / beta);
    const double noise_coeff = params.noise_to_power() * mapped * std::pow(params.length_scale_m(), beta);
    return detail::eavesdropper_cdf_integral(params.density_ratio(), b_coeff, noise_coeff, beta, spec);
}

/// CDF of the most detrimental eavesdropper's SINR under secure transmission.
/// Equals 1 at and above gamma_th0 = theta / (1 - theta).
inline double cdf_eav_secure(double gamma_th, const SystemParams& params)
{
    if (!params.interference_limited) {
        return cdf_eav_secure_quadrature(gamma_th, params);
    }
    detail::require_threshold(gamma_th);
    const SecrecyThreshold threshold(params.power_split);
    if (gamma_th >= threshold.gamma_th0) {
        return 1.0;
    }
    return detail::eavesdropper_exponential(
        params.density_ratio(), params.pathloss_beta,
        detail::secure_eavesdropper_argument(gamma_th, params.power_split));
}

inline double cdf_user_normal_quadrature(double gamma_th, const SystemParams& params,
                                         const numerics::QuadratureSpec& spec = {})
{
    detail::require_threshold(gamma_th);
    if (gamma_th == 0.0) {
        return 0.0;
    }
    const double beta = params.pathloss_beta;
    const double a_coeff = numerics::z_kernel(gamma_th, beta) + 1.0;
    const double noise_coeff = params.noise_to_power() * gamma_th * std::pow(params.length_scale_m(), beta);
    return detail::user_cdf_integral(a_coeff, noise_coeff, beta, spec);
}

/// CDF of the plain user's SINR; interference-limited form 1 - 1 / (1 + Z(g)).
inline double cdf_user_normal(double gamma_th, const SystemParams& params)
{
    if (!params.interference_limited) {
        return cdf_user_normal_quadrature(gamma_th, params);
    }
    detail::require_threshold(gamma_th);
    return 1.0 - 1.0 / (1.0 + numerics::z_kernel(gamma_th, params.pathloss_beta));
}

inline double cdf_eav_normal_quadrature(double gamma_th, const SystemParams& params,
                                        const numerics::QuadratureSpec& spec = {})
{
    detail::require_threshold(gamma_th);
    if (params.lambda_e == 0.0) {
        return 1.0;
    }
    if (gamma_th == 0.0) {
        return 0.0;
    }
    const double beta = params.pathloss_beta;
    const double b_coeff = numerics::gamma_product(beta) * std::pow(gamma_th, 2.0 / beta);
    const double noise_coeff = params.noise_to_power() * gamma_th * std::pow(params.length_scale_m(), beta);
    return detail::eavesdropper_cdf_integral(params.density_ratio(), b_coeff, noise_coeff, beta, spec);
}

/// CDF of the most detrimental eavesdropper's SINR under normal transmission.
inline double cdf_eav_normal(double gamma_th, const SystemParams& params)
{
    if (!params.interference_limited) {
        return cdf_eav_normal_quadrature(gamma_th, params);
    }
    detail::require_threshold(gamma_th);
    return detail::eavesdropper_exponential(params.density_ratio(), params.pathloss_beta, gamma_th);
}

// ---------------------------------------------------------------------------
// Average secrecy rate

/// (1/ln 2) * int_0^inf [1 - F_u(g)] F_e(g) / (1 + g) dg.
///
/// `breakpoints` split the axis where either CDF has a kink (e.g. gamma_th0).
inline RateResult avg_secrecy_rate_generic(const Cdf& user_cdf, const Cdf& eavesdropper_cdf,
                                           std::span<const double> breakpoints = {},
                                           const numerics::QuadratureSpec& spec = {})
{
    auto integrand = [&](double g) {
        const double outage = user_cdf(g);
        if (outage >= 1.0) {
            return 0.0;
        }
        return (1.0 - outage) * eavesdropper_cdf(g) / (1.0 + g);
    };
    std::vector<double> edges{0.0};
    for (double b : breakpoints) {
        if (b > edges.back() && std::isfinite(b)) {
            edges.push_back(b);
        }
    }
    edges.push_back(numerics::infinity);
    RateResult result;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const auto piece = numerics::integrate_log_axis(integrand, edges[i], edges[i + 1], spec);
        result.value += piece.value;
        result.quadrature_error_bound += piece.error_bound;
    }
    result.value /= std::numbers::ln2;
    result.quadrature_error_bound /= std::numbers::ln2;
    return result;
}

/// Average secrecy rate of secure transmission, interference-limited.
///
/// Two pieces: below gamma_th0 the eavesdropper CDF is the exponential
/// kernel, above it the CDF is one.
inline RateResult avg_secrecy_rate_secure(const SystemParams& params, const TierDensities& tiers,
                                          const numerics::QuadratureSpec& spec = {})
{
    params.validate();
    detail::require_tiers(params, tiers);
    detail::require(params.interference_limited,
                    "rate: the closed secure-transmission rate holds only in the interference-limited regime");
    const double beta = params.pathloss_beta;
    const double theta = params.power_split;
    const double share1 = tiers.lambda_b1 / params.lambda_b;
    const double share3 = tiers.lambda_b3 / params.lambda_b;
    const double ratio = params.density_ratio();
    const double gamma_th0 = SecrecyThreshold(theta).gamma_th0;

    auto denominator = [=](double g) {
        return (1.0 + g) * (numerics::z_kernel(g, beta) * share1 + numerics::z_kernel(g / theta, beta) * share3 + 1.0);
    };
    auto below = [=](double g) {
        const double mapped = detail::secure_eavesdropper_argument(g, theta);
        return detail::eavesdropper_exponential(ratio, beta, mapped) / denominator(g);
    };
    auto above = [=](double g) { return 1.0 / denominator(g); };

    RateResult result;
    const auto first = numerics::integrate_log_axis(below, 0.0, gamma_th0, spec);
    result.value = first.value;
    result.quadrature_error_bound = first.error_bound;
    if (std::isfinite(gamma_th0)) {
        const auto second = numerics::integrate_log_axis(above, gamma_th0, numerics::infinity, spec);
        result.value += second.value;
        result.quadrature_error_bound += second.error_bound;
    }
    result.value /= std::numbers::ln2;
    result.quadrature_error_bound /= std::numbers::ln2;
    return result;
}

/// Average secrecy rate of normal transmission, interference-limited.
inline RateResult avg_secrecy_rate_normal(const SystemParams& params, const numerics::QuadratureSpec& spec = {})
{
    params.validate();
    detail::require(params.interference_limited,
                    "rate: the closed normal-transmission rate holds only in the interference-limited regime");
    const double beta = params.pathloss_beta;
    const double ratio = params.density_ratio();
    auto integrand = [=](double g) {
        return detail::eavesdropper_exponential(ratio, beta, g) /
               ((1.0 + g) * (numerics::z_kernel(g, beta) + 1.0));
    };
    const auto r = numerics::integrate_log_axis(integrand, 0.0, numerics::infinity, spec);
    return {r.value / std::numbers::ln2, r.error_bound / std::numbers::ln2};
}

// ---------------------------------------------------------------------------
// Secrecy coverage

namespace detail {

inline CoverageResult finish_coverage(double value, double error_bound, const char* label)
{
    CoverageResult result;
    result.unclamped = value;
    result.quadrature_error_bound = error_bound;
    result.probability = std::clamp(value, 0.0, 1.0);
    if (value < -error_bound || value > 1.0 + error_bound) {
        result.warning = std::string(label) + ": integral evaluated to " + std::to_string(value) +
                         ", outside [0, 1]; clamped";
    }
    return result;
}

} // namespace detail

/// Secrecy coverage P(C > R_s) from the definition: the eavesdropper density
/// is obtained by numerically differentiating its CDF.
///
/// `support_upper` is the top of the eavesdropper SINR support (gamma_th0 for
/// secure transmission). Point masses at 0 and at a finite support_upper are
/// included, so step-shaped eavesdropper CDFs are handled exactly.
inline CoverageResult coverage_generic(const Cdf& user_cdf, const Cdf& eavesdropper_cdf, double secrecy_rate,
                                       double support_upper = numerics::infinity,
                                       const numerics::QuadratureSpec& spec = {})
{
    detail::require(secrecy_rate >= 0.0, "coverage: secrecy rate threshold must be >= 0");
    detail::require(support_upper > 0.0, "coverage: support must extend above zero");
    const double scale = std::exp2(secrecy_rate);
    auto success = [&](double g) {
        if (std::isinf(scale)) {
            return 0.0;
        }
        return 1.0 - user_cdf(scale * (1.0 + g) - 1.0);
    };
    auto density = [&](double g) {
        double h = std::max(1e-6, 1e-4 * g);
        const double gap = support_upper - g;
        if (h > 0.01 * gap) {
            // Shrink the step toward the support edge, where the density may
            // blow up like an inverse square root; fall back to a backward
            // difference only once the gap is at rounding level.
            if (gap > 1e-12 * support_upper) {
                h = 0.01 * gap;
                return (eavesdropper_cdf(g + h) - eavesdropper_cdf(g - h)) / (2.0 * h);
            }
            return (eavesdropper_cdf(g) - eavesdropper_cdf(g - h)) / h;
        }
        if (g - h < 0.0) {
            return (eavesdropper_cdf(g + h) - eavesdropper_cdf(g)) / h;
        }
        return (eavesdropper_cdf(g + h) - eavesdropper_cdf(g - h)) / (2.0 * h);
    };

    const double atom_at_zero = eavesdropper_cdf(0.0);
    double value = atom_at_zero > 0.0 ? atom_at_zero * success(0.0) : 0.0;
    double error = 0.0;
    if (atom_at_zero < 1.0) {
        const auto body = numerics::integrate_log_axis(
            [&](double g) {
                const double d = density(g);
                return d == 0.0 ? 0.0 : d * success(g);
            },
            0.0, support_upper, spec);
        value += body.value;
        error += body.error_bound;
    }
    if (std::isfinite(support_upper)) {
        const double jump = 1.0 - eavesdropper_cdf(support_upper * (1.0 - 1e-14));
        if (jump > 0.0) {
            value += jump * success(support_upper);
        }
    }
    return detail::finish_coverage(value, error, "coverage_generic");
}

/// Secure-transmission coverage from the closed-form integral with the G kernel.
inline CoverageResult coverage_secure(const SystemParams& params, const TierDensities& tiers, double secrecy_rate,
                                      numerics::GKernelLimit limit = numerics::GKernelLimit::as_printed,
                                      const numerics::QuadratureSpec& spec = {})
{
    params.validate();
    detail::require_tiers(params, tiers);
    detail::require(secrecy_rate >= 0.0, "coverage: secrecy rate threshold must be >= 0");
    detail::require(params.interference_limited,
                    "coverage: the closed secure-transmission coverage holds only in the interference-limited regime");
    if (params.lambda_e == 0.0) {
        const double outage = cdf_user_secure(std::exp2(secrecy_rate) - 1.0, params, tiers);
        return detail::finish_coverage(1.0 - outage, 0.0, "coverage_secure");
    }
    const double beta = params.pathloss_beta;
    const double theta = params.power_split;
    const double share1 = tiers.lambda_b1 / params.lambda_b;
    const double share3 = tiers.lambda_b3 / params.lambda_b;
    const double ratio = params.density_ratio();
    const double gp = numerics::gamma_product(beta);
    const double gamma_th0 = SecrecyThreshold(theta).gamma_th0;

    auto integrand = [=](double g) {
        const double mapped = detail::secure_eavesdropper_argument(g, theta);
        if (std::isinf(mapped)) {
            return 0.0;
        }
        const double cdf = detail::eavesdropper_exponential(ratio, beta, mapped);
        if (cdf == 0.0) {
            return 0.0;
        }
        const double weight = 2.0 * ratio * theta * std::pow(g, -(beta + 2.0) / beta) /
                              (beta * gp * std::pow(mapped, (beta - 2.0) / beta));
        const double kernel = numerics::g_kernel(g, beta, secrecy_rate, limit) * share1 +
                              numerics::g_kernel(g / theta, beta, secrecy_rate, limit) * share3 + 1.0;
        return cdf * weight / kernel;
    };
    const auto r = numerics::integrate_log_axis(integrand, 0.0, gamma_th0, spec);
    return detail::finish_coverage(r.value, r.error_bound, "coverage_secure");
}

/// Normal-transmission coverage from the closed-form integral.
inline CoverageResult coverage_normal(const SystemParams& params, double secrecy_rate,
                                      numerics::GKernelLimit limit = numerics::GKernelLimit::as_printed,
                                      const numerics::QuadratureSpec& spec = {})
{
    params.validate();
    detail::require(secrecy_rate >= 0.0, "coverage: secrecy rate threshold must be >= 0");
    detail::require(params.interference_limited,
                    "coverage: the closed normal-transmission coverage holds only in the interference-limited regime");
    if (params.lambda_e == 0.0) {
        return coverage_generic([&](double g) { return cdf_user_normal(g, params); },
                                [](double) { return 1.0; }, secrecy_rate);
    }
    const double beta = params.pathloss_beta;
    const double ratio = params.density_ratio();
    const double gp = numerics::gamma_product(beta);
    auto integrand = [=](double g) {
        const double cdf = detail::eavesdropper_exponential(ratio, beta, g);
        if (cdf == 0.0) {
            return 0.0;
        }
        const double weight = 2.0 * ratio * std::pow(g, -(beta + 2.0) / beta) / (beta * gp);
        return cdf * weight / (numerics::g_kernel(g, beta, secrecy_rate, limit) + 1.0);
    };
    const auto r = numerics::integrate_log_axis(integrand, 0.0, numerics::infinity, spec);
    return detail::finish_coverage(r.value, r.error_bound, "coverage_normal");
}

// ---------------------------------------------------------------------------
// Convenience bindings of the SINR CDFs for the generic engines.

inline Cdf user_secure_cdf(const SystemParams& params, const TierDensities& tiers)
{
    return [params, tiers](double g) { return cdf_user_secure(g, params, tiers); };
}

inline Cdf eav_secure_cdf(const SystemParams& params)
{
    return [params](double g) { return cdf_eav_secure(g, params); };
}

inline Cdf user_normal_cdf(const SystemParams& params)
{
    return [params](double g) { return cdf_user_normal(g, params); };
}

inline Cdf eav_normal_cdf(const SystemParams& params)
{
    return [params](double g) { return cdf_eav_normal(g, params); };
}

/// Definition-level secure coverage: generic engine over the secure SINR CDFs.
inline CoverageResult coverage_secure_definition(const SystemParams& params, const TierDensities& tiers,
                                                 double secrecy_rate)
{
    return coverage_generic(user_secure_cdf(params, tiers), eav_secure_cdf(params), secrecy_rate,
                            SecrecyThreshold(params.power_split).gamma_th0);
}

inline CoverageResult coverage_normal_definition(const SystemParams& params, double secrecy_rate)
{
    return coverage_generic(user_normal_cdf(params), eav_normal_cdf(params), secrecy_rate);
}

} // namespace cachesec

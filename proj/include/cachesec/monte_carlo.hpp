#pragma once

// Stochastic-geometry simulator for the cache-aided network. The typical user
// sits at the origin; BSs, their protocol states, eavesdroppers and Rayleigh
// fading are drawn per trial and the SINRs are evaluated exactly.
//
// Every trial derives its own random streams from the master seed, so the
// result does not depend on how trials are split across threads. BSs are
// generated outward from the origin, which keeps them sorted by distance and
// makes a larger window extend a smaller one with identical near points.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "analytic_metrics.hpp"
#include "content_model.hpp"
#include "errors.hpp"

namespace cachesec::mc {

enum class Coupling { coupled, decoupled };
enum class TxMode { secure, normal };
enum class BsState : std::uint8_t { secure_tx, normal_tx_cached, normal_tx_uncached };

struct McConfig {
    double window_radius_m = 30'000.0;
    /// Eavesdroppers are drawn within this distance of the serving BS.
    double eavesdropper_radius_m = 5'000.0;
    std::size_t trials = 100'000;
    std::uint64_t seed = 1;
    Coupling coupling = Coupling::decoupled;
    bool include_noise = false;
    unsigned threads = 1;

    void validate() const
    {
        using detail::require;
        require(std::isfinite(window_radius_m) && window_radius_m > 0.0, "mc: window radius must be > 0");
        require(std::isfinite(eavesdropper_radius_m) && eavesdropper_radius_m > 0.0,
                "mc: eavesdropper radius must be > 0");
        require(trials >= 1, "mc: trials must be >= 1");
        require(threads >= 1, "mc: threads must be >= 1");
    }
};

struct MetricEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct BaseStation {
    double distance = 0.0; ///< to the origin, metres
    Point position;
    BsState state = BsState::normal_tx_uncached;
};

/// One draw of the network. `bs[0]` is the serving BS.
struct NetworkRealization {
    std::vector<BaseStation> bs;
    std::vector<Point> eavesdroppers;
    std::vector<double> user_fading; ///< |h|^2 from each BS to the origin
    std::uint64_t fading_key = 0;    ///< seeds the lazily drawn eavesdropper links

    /// |h|^2 from BS k to eavesdropper e, drawn on demand and reproducible.
    double eavesdropper_fading(std::size_t e, std::size_t k) const;
};

/// Per-trial SINR draws. An eavesdropper entry of -inf marks an empty set.
struct SinrSamples {
    std::vector<double> user;
    std::vector<double> eavesdropper;
};

namespace detail {

inline constexpr double km2_to_m2 = 1e-6;
inline constexpr double empty_max = -std::numeric_limits<double>::infinity();

inline std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) noexcept
{
    return splitmix64(a ^ splitmix64(b));
}

// Stream identifiers within a trial.
enum Stream : std::uint64_t {
    bs_radii = 1,
    bs_angles = 2,
    bs_states = 3,
    user_fading = 4,
    eavesdropper_points = 5,
    eavesdropper_links = 6,
};

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t realization,
                                 std::uint64_t attempt, Stream stream)
{
    return mix(mix(mix(mix(seed, trial), realization), attempt), stream);
}

// Open-interval uniform from the top 53 bits.
inline double unit_open(std::uint64_t bits) noexcept
{
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

inline double exponential(std::mt19937_64& rng)
{
    return -std::log(unit_open(rng()));
}

inline double pathloss(double distance_sq, double beta)
{
    if (beta == 4.0) {
        return 1.0 / (distance_sq * distance_sq);
    }
    return std::pow(distance_sq, -0.5 * beta);
}

} // namespace detail

inline double NetworkRealization::eavesdropper_fading(std::size_t e, std::size_t k) const
{
    const std::uint64_t link = (static_cast<std::uint64_t>(e) << 32) ^ static_cast<std::uint64_t>(k);
    return -std::log(detail::unit_open(detail::mix(fading_key, link)));
}

/// Homogeneous PPP on the disk of radius `radius_m` about `center`, generated
/// outward so the points come sorted by distance from the center.
/// Density per km^2.
inline std::vector<Point> sample_ppp(double lambda_per_km2, double radius_m, std::mt19937_64& radii_rng,
                                     std::mt19937_64& angle_rng, Point center = {})
{
    cachesec::detail::require(lambda_per_km2 >= 0.0 && std::isfinite(lambda_per_km2), "ppp: density must be >= 0");
    cachesec::detail::require(radius_m > 0.0, "ppp: radius must be > 0");
    std::vector<Point> points;
    if (lambda_per_km2 == 0.0) {
        return points;
    }
    const double lambda = lambda_per_km2 * detail::km2_to_m2;
    const double area_limit = std::numbers::pi * radius_m * radius_m;
    double area = 0.0;
    while (true) {
        area += detail::exponential(radii_rng) / lambda;
        if (area > area_limit) {
            break;
        }
        const double r = std::sqrt(area / std::numbers::pi);
        const double phi = 2.0 * std::numbers::pi * detail::unit_open(angle_rng());
        points.push_back({center.x + r * std::cos(phi), center.y + r * std::sin(phi)});
    }
    return points;
}

/// Labels each BS independently with the tier shares.
inline void assign_bs_states(std::span<BaseStation> stations, const TierDensities& tiers, std::mt19937_64& rng)
{
    const double total = tiers.total();
    cachesec::detail::require(total > 0.0 && tiers.lambda_b1 >= 0.0 && tiers.lambda_b2 >= 0.0 &&
                                  tiers.lambda_b3 >= 0.0,
                              "states: tier densities must be >= 0 with a positive sum");
    const double p1 = tiers.lambda_b1 / total;
    const double p12 = (tiers.lambda_b1 + tiers.lambda_b2) / total;
    for (auto& station : stations) {
        const double u = detail::unit_open(rng());
        if (u < p1) {
            station.state = BsState::secure_tx;
        } else if (u < p12) {
            station.state = BsState::normal_tx_cached;
        } else {
            station.state = BsState::normal_tx_uncached;
        }
    }
}

/// Draws realization `which` (0 or 1) of trial `trial`. The nearest BS is
/// relabelled with the state serving the requested mode. Windows with no BS
/// are redrawn. Angles and eavesdroppers are skipped unless requested.
inline NetworkRealization sample_realization(const SystemParams& params, const TierDensities& tiers,
                                             const McConfig& config, TxMode mode, std::uint64_t trial,
                                             std::uint64_t which, bool with_eavesdroppers)
{
    using detail::Stream;
    NetworkRealization net;
    for (std::uint64_t attempt = 0;; ++attempt) {
        auto seed_for = [&](Stream s) { return detail::stream_seed(config.seed, trial, which, attempt, s); };
        std::mt19937_64 radii(seed_for(Stream::bs_radii));
        std::mt19937_64 angles(seed_for(Stream::bs_angles));

        const double lambda = params.lambda_b * detail::km2_to_m2;
        const double area_limit = std::numbers::pi * config.window_radius_m * config.window_radius_m;
        net.bs.clear();
        double area = 0.0;
        while (true) {
            area += detail::exponential(radii) / lambda;
            if (area > area_limit) {
                break;
            }
            BaseStation station;
            station.distance = std::sqrt(area / std::numbers::pi);
            if (with_eavesdroppers) {
                const double phi = 2.0 * std::numbers::pi * detail::unit_open(angles());
                station.position = {station.distance * std::cos(phi), station.distance * std::sin(phi)};
            }
            net.bs.push_back(station);
        }
        if (net.bs.empty()) {
            continue;
        }

        std::mt19937_64 states(seed_for(Stream::bs_states));
        assign_bs_states(net.bs, tiers, states);
        net.bs.front().state = mode == TxMode::secure ? BsState::secure_tx : BsState::normal_tx_uncached;

        std::mt19937_64 fading(seed_for(Stream::user_fading));
        net.user_fading.resize(net.bs.size());
        for (double& g : net.user_fading) {
            g = detail::exponential(fading);
        }

        if (with_eavesdroppers) {
            std::mt19937_64 er_radii(seed_for(Stream::eavesdropper_points));
            std::mt19937_64 er_angles(detail::splitmix64(seed_for(Stream::eavesdropper_points)));
            auto candidates = sample_ppp(params.lambda_e, config.eavesdropper_radius_m, er_radii, er_angles,
                                         net.bs.front().position);
            const double window_sq = config.window_radius_m * config.window_radius_m;
            for (const auto& p : candidates) {
                if (p.x * p.x + p.y * p.y <= window_sq) {
                    net.eavesdroppers.push_back(p);
                }
            }
            net.fading_key = seed_for(Stream::eavesdropper_links);
        }
        return net;
    }
}

inline double noise_to_power(const SystemParams& params, const McConfig& config)
{
    return config.include_noise ? params.noise_w() / params.tx_power_w() : 0.0;
}

/// SINR of the plain user: every other BS interferes at full power.
inline double sinr_user_normal(const NetworkRealization& net, const SystemParams& params, double noise_to_power)
{
    cachesec::detail::require(!net.bs.empty(), "sinr: realization has no BS");
    const double beta = params.pathloss_beta;
    double interference = 0.0;
    for (std::size_t k = 1; k < net.bs.size(); ++k) {
        const double d = net.bs[k].distance;
        interference += net.user_fading[k] * detail::pathloss(d * d, beta);
    }
    const double d0 = net.bs[0].distance;
    return net.user_fading[0] * detail::pathloss(d0 * d0, beta) / (interference + noise_to_power);
}

/// SINR of the cache-enabled user under secure transmission: secure-mode
/// interferers contribute their message share theta, uncached normal
/// interferers full power and cached normal interferers nothing.
inline double sinr_user_secure(const NetworkRealization& net, const SystemParams& params, double noise_to_power)
{
    cachesec::detail::require(!net.bs.empty(), "sinr: realization has no BS");
    const double beta = params.pathloss_beta;
    const double theta = params.power_split;
    double secure = 0.0;
    double uncached = 0.0;
    for (std::size_t k = 1; k < net.bs.size(); ++k) {
        const double d = net.bs[k].distance;
        const double received = net.user_fading[k] * detail::pathloss(d * d, beta);
        if (net.bs[k].state == BsState::secure_tx) {
            secure += received;
        } else if (net.bs[k].state == BsState::normal_tx_uncached) {
            uncached += received;
        }
    }
    const double d0 = net.bs[0].distance;
    return theta * net.user_fading[0] * detail::pathloss(d0 * d0, beta) / (theta * secure + uncached + noise_to_power);
}

namespace detail {

inline double distance_sq(Point a, Point b)
{
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

// Largest S / (I + n) over eavesdroppers, where S is the serving-BS power and
// I the power from all other BSs. Candidates are visited by decreasing S and
// dropped as soon as their partial interference rules them out.
inline double max_signal_to_interference(const NetworkRealization& net, double beta, double noise_to_power)
{
    const std::size_t count = net.eavesdroppers.size();
    if (count == 0) {
        return empty_max;
    }
    const Point serving = net.bs.front().position;
    std::vector<std::pair<double, std::size_t>> order(count);
    for (std::size_t e = 0; e < count; ++e) {
        const double signal = net.eavesdropper_fading(e, 0) * pathloss(distance_sq(net.eavesdroppers[e], serving), beta);
        order[e] = {signal, e};
    }
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    double best = empty_max;
    for (const auto& [signal, e] : order) {
        if (noise_to_power > 0.0 && signal / noise_to_power <= best) {
            break;
        }
        const Point where = net.eavesdroppers[e];
        double interference = noise_to_power;
        bool pruned = false;
        for (std::size_t k = 1; k < net.bs.size(); ++k) {
            interference += net.eavesdropper_fading(e, k) * pathloss(distance_sq(where, net.bs[k].position), beta);
            if ((k & 7u) == 0 && signal <= best * interference) {
                pruned = true;
                break;
            }
        }
        if (!pruned) {
            best = std::max(best, signal / interference);
        }
    }
    return best;
}

// theta x / (1 + (1 - theta) x), with the x -> inf limit theta / (1 - theta).
inline double secure_from_normal(double x, double theta)
{
    if (std::isinf(x)) {
        return theta < 1.0 ? theta / (1.0 - theta) : x;
    }
    return theta * x / (1.0 + (1.0 - theta) * x);
}

} // namespace detail

/// Largest eavesdropper SINR under normal transmission; -inf when no
/// eavesdropper is present.
inline double sinr_eav_max_normal(const NetworkRealization& net, const SystemParams& params, double noise_to_power)
{
    cachesec::detail::require(!net.bs.empty(), "sinr: realization has no BS");
    return detail::max_signal_to_interference(net, params.pathloss_beta, noise_to_power);
}

/// Largest eavesdropper SINR under secure transmission. The serving BS spends
/// 1 - theta of its power on the cached file, which every eavesdropper sees as
/// self-interference: SINR = theta x / (1 + (1 - theta) x) with x = S / (I + n).
inline double sinr_eav_max_secure(const NetworkRealization& net, const SystemParams& params, double noise_to_power)
{
    const double x = sinr_eav_max_normal(net, params, noise_to_power);
    if (x == detail::empty_max) {
        return x;
    }
    return detail::secure_from_normal(x, params.power_split);
}

/// max{log2(1 + g_u) - log2(1 + g_e), 0}; an empty eavesdropper set counts as
/// zero eavesdropper capacity.
inline double secrecy_rate_sample(double gamma_user, double gamma_eavesdropper)
{
    const double user = std::log2(1.0 + std::max(gamma_user, 0.0));
    const double eaves = gamma_eavesdropper > 0.0 ? std::log2(1.0 + gamma_eavesdropper) : 0.0;
    return std::max(user - eaves, 0.0);
}

namespace detail {

template <typename Body>
void run_trials(std::size_t trials, unsigned threads, Body body)
{
    if (threads <= 1 || trials < 2) {
        for (std::size_t t = 0; t < trials; ++t) {
            body(t);
        }
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, trials);
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([=, &body] {
            for (std::size_t t = w; t < trials; t += workers) {
                body(t);
            }
        });
    }
}

} // namespace detail

/// Draws the user and eavesdropper SINR of every trial. In decoupled mode the
/// two come from independent realizations; in coupled mode from the same one.
inline SinrSamples simulate_sinr(const McConfig& config, const SystemParams& params, const TierDensities& tiers,
                                 TxMode mode, bool want_user = true, bool want_eavesdropper = true)
{
    config.validate();
    params.validate();
    const double noise = noise_to_power(params, config);
    SinrSamples out;
    if (want_user) {
        out.user.resize(config.trials);
    }
    if (want_eavesdropper) {
        out.eavesdropper.resize(config.trials);
    }
    auto user_sinr = [&](const NetworkRealization& net) {
        return mode == TxMode::secure ? sinr_user_secure(net, params, noise) : sinr_user_normal(net, params, noise);
    };
    auto eav_sinr = [&](const NetworkRealization& net) {
        return mode == TxMode::secure ? sinr_eav_max_secure(net, params, noise)
                                      : sinr_eav_max_normal(net, params, noise);
    };
    detail::run_trials(config.trials, config.threads, [&](std::size_t t) {
        if (config.coupling == Coupling::coupled) {
            const auto net = sample_realization(params, tiers, config, mode, t, 0, want_eavesdropper);
            if (want_user) {
                out.user[t] = user_sinr(net);
            }
            if (want_eavesdropper) {
                out.eavesdropper[t] = eav_sinr(net);
            }
            return;
        }
        if (want_user) {
            out.user[t] = user_sinr(sample_realization(params, tiers, config, mode, t, 0, false));
        }
        if (want_eavesdropper) {
            out.eavesdropper[t] = eav_sinr(sample_realization(params, tiers, config, mode, t, 1, true));
        }
    });
    return out;
}

/// SINR draws of both transmission modes at once.
struct ModeSamples {
    SinrSamples secure;
    SinrSamples normal;
};

/// Both modes from shared realizations: the serving-BS label does not enter
/// either user SINR, and the eavesdropper SINRs of the two modes are monotone
/// maps of the same S / (I + n). Each mode's samples equal those of
/// simulate_sinr for that mode.
inline ModeSamples simulate_both_modes(const McConfig& config, const SystemParams& params,
                                       const TierDensities& tiers)
{
    config.validate();
    params.validate();
    const double noise = noise_to_power(params, config);
    const double theta = params.power_split;
    ModeSamples out;
    for (auto* s : {&out.secure, &out.normal}) {
        s->user.resize(config.trials);
        s->eavesdropper.resize(config.trials);
    }
    detail::run_trials(config.trials, config.threads, [&](std::size_t t) {
        const bool coupled = config.coupling == Coupling::coupled;
        const auto user_net = sample_realization(params, tiers, config, TxMode::secure, t, 0, coupled);
        out.secure.user[t] = sinr_user_secure(user_net, params, noise);
        out.normal.user[t] = sinr_user_normal(user_net, params, noise);
        const double x =
            coupled ? detail::max_signal_to_interference(user_net, params.pathloss_beta, noise)
                    : detail::max_signal_to_interference(
                          sample_realization(params, tiers, config, TxMode::secure, t, 1, true), params.pathloss_beta,
                          noise);
        out.normal.eavesdropper[t] = x;
        out.secure.eavesdropper[t] = x == detail::empty_max ? x : detail::secure_from_normal(x, theta);
    });
    return out;
}

/// Mean and standard error of a sample vector.
inline MetricEstimate summarize(std::span<const double> values)
{
    cachesec::detail::require(!values.empty(), "estimate: no samples");
    MetricEstimate est;
    est.n = values.size();
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(est.n);
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    est.mean = mean;
    est.std_error = est.n > 1 ? std::sqrt(ss / static_cast<double>(est.n - 1) / static_cast<double>(est.n)) : 0.0;
    return est;
}

inline MetricEstimate rate_from(const SinrSamples& samples)
{
    cachesec::detail::require(samples.user.size() == samples.eavesdropper.size(), "estimate: sample size mismatch");
    std::vector<double> rates(samples.user.size());
    for (std::size_t i = 0; i < rates.size(); ++i) {
        rates[i] = secrecy_rate_sample(samples.user[i], samples.eavesdropper[i]);
    }
    return summarize(rates);
}

inline MetricEstimate coverage_from(const SinrSamples& samples, double secrecy_rate)
{
    cachesec::detail::require(samples.user.size() == samples.eavesdropper.size(), "estimate: sample size mismatch");
    cachesec::detail::require(secrecy_rate >= 0.0, "estimate: secrecy rate threshold must be >= 0");
    std::vector<double> hits(samples.user.size());
    for (std::size_t i = 0; i < hits.size(); ++i) {
        hits[i] = secrecy_rate_sample(samples.user[i], samples.eavesdropper[i]) > secrecy_rate ? 1.0 : 0.0;
    }
    return summarize(hits);
}

/// Average secrecy rate from the definition.
inline MetricEstimate estimate_rate(const McConfig& config, const SystemParams& params, const TierDensities& tiers,
                                    TxMode mode)
{
    return rate_from(simulate_sinr(config, params, tiers, mode));
}

/// Fraction of trials whose secrecy rate exceeds `secrecy_rate`.
inline MetricEstimate estimate_coverage(const McConfig& config, const SystemParams& params,
                                        const TierDensities& tiers, TxMode mode, double secrecy_rate)
{
    return coverage_from(simulate_sinr(config, params, tiers, mode), secrecy_rate);
}

/// Kolmogorov-Smirnov distance between the empirical law of `samples` and
/// `cdf`. Empty-set sentinels are read as SINR zero.
inline double sup_distance(std::vector<double> samples, const std::function<double(double)>& cdf)
{
    cachesec::detail::require(!samples.empty(), "sup distance: no samples");
    for (double& s : samples) {
        s = std::max(s, 0.0);
    }
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        worst = std::max({worst, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Bound audit for the secure-mode eavesdropper SINR

enum class Fault {
    none,
    /// Omit the self-interference term of the serving BS (for exercising the audit).
    drop_self_interference,
};

struct AuditResult {
    std::size_t samples = 0;
    std::size_t violations = 0;
    double max_sinr = 0.0;
    double bound = 0.0;
};

/// Evaluates the secure-mode SINR of every eavesdropper directly, without the
/// closed transform, until `min_samples` values are collected, and counts
/// those above theta / (1 - theta) + 1e-12.
inline AuditResult audit_secure_bound(const McConfig& config, const SystemParams& params, const TierDensities& tiers,
                                      std::size_t min_samples, Fault fault = Fault::none)
{
    config.validate();
    params.validate();
    cachesec::detail::require(params.power_split < 1.0, "audit: theta must be < 1");
    cachesec::detail::require(params.lambda_e > 0.0, "audit: needs eavesdroppers");
    const double theta = params.power_split;
    const double noise = noise_to_power(params, config);
    const double beta = params.pathloss_beta;
    AuditResult result;
    result.bound = theta / (1.0 - theta);
    for (std::uint64_t trial = 0; result.samples < min_samples; ++trial) {
        const auto net = sample_realization(params, tiers, config, TxMode::secure, trial, 1, true);
        const Point serving = net.bs.front().position;
        for (std::size_t e = 0; e < net.eavesdroppers.size(); ++e) {
            const Point where = net.eavesdroppers[e];
            const double signal = net.eavesdropper_fading(e, 0) * detail::pathloss(detail::distance_sq(where, serving), beta);
            double interference = noise;
            for (std::size_t k = 1; k < net.bs.size(); ++k) {
                interference += net.eavesdropper_fading(e, k) *
                                detail::pathloss(detail::distance_sq(where, net.bs[k].position), beta);
            }
            const double self = fault == Fault::drop_self_interference ? 0.0 : (1.0 - theta) * signal;
            const double sinr = theta * signal / (self + interference);
            result.max_sinr = std::max(result.max_sinr, sinr);
            if (sinr > result.bound + 1e-12) {
                ++result.violations;
            }
            ++result.samples;
        }
    }
    return result;
}

} // namespace cachesec::mc

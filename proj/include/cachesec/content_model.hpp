#pragma once

// File library, Zipf popularity, cache hits and the protocol-induced thinning
// of the base-station process.
//
// The cached set is always the M most popular files. The file used as
// artificial interference (the most popular one) has no numeric consequence
// and is not modelled.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace cachesec {

struct ContentParams {
    std::size_t file_count = 100; ///< N
    std::size_t cache_size = 5;   ///< M, number of most-popular files cached
    double zipf_skew = 0.8;       ///< eta

    void validate() const
    {
        detail::require(file_count >= 1, "content: file library must hold at least one file");
        detail::require(cache_size <= file_count, "content: cache size exceeds library size");
        detail::require(std::isfinite(zipf_skew) && zipf_skew >= 0.0,
                        "content: zipf skew must be finite and >= 0");
    }
};

/// Request probabilities of the files, most popular first.
class PopularityProfile {
public:
    PopularityProfile() = default;
    explicit PopularityProfile(std::vector<double> probabilities)
        : p_(std::move(probabilities))
    {
    }

    std::span<const double> probabilities() const noexcept { return p_; }
    std::size_t size() const noexcept { return p_.size(); }
    double operator[](std::size_t i) const { return p_.at(i); }

private:
    std::vector<double> p_;
};

/// Fractions of all user requests falling into each protocol branch.
struct RequestMix {
    double self_offload = 0.0;       ///< cache-enabled user, file cached locally
    double secure_tx = 0.0;          ///< cache-enabled user, file not cached
    double normal_tx_cached = 0.0;   ///< plain user, file in the cached set
    double normal_tx_uncached = 0.0; ///< plain user, file outside the cached set

    double served() const noexcept { return secure_tx + normal_tx_cached + normal_tx_uncached; }
};

/// Densities of the three transmitting BS states, BSs per km^2.
struct TierDensities {
    double lambda_b1 = 0.0; ///< secure transmission (message + cached file)
    double lambda_b2 = 0.0; ///< normal transmission of a cached file
    double lambda_b3 = 0.0; ///< normal transmission of an uncached file

    double total() const noexcept { return lambda_b1 + lambda_b2 + lambda_b3; }
};

inline PopularityProfile zipf_popularity(const ContentParams& params)
{
    if (params.file_count == 0) {
        throw ParameterError("content: invalid library, file count is zero");
    }
    detail::require(std::isfinite(params.zipf_skew) && params.zipf_skew >= 0.0,
                    "content: zipf skew must be finite and >= 0");

    std::vector<double> weights(params.file_count);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        weights[i] = std::pow(static_cast<double>(i + 1), -params.zipf_skew);
    }
    // Sum smallest first; N can be large and the tail is tiny.
    double norm = 0.0;
    for (auto it = weights.rbegin(); it != weights.rend(); ++it) {
        norm += *it;
    }
    for (double& w : weights) {
        w /= norm;
    }
    return PopularityProfile(std::move(weights));
}

/// Probability that a request falls in the cached set of the M most popular files.
inline double hit_probability(const PopularityProfile& profile, std::size_t cache_size)
{
    if (cache_size > profile.size()) {
        throw ParameterError("content: invalid cache size " + std::to_string(cache_size) +
                             " for a library of " + std::to_string(profile.size()) + " files");
    }
    if (cache_size == profile.size()) {
        return 1.0;
    }
    double delta = 0.0;
    for (std::size_t i = 0; i < cache_size; ++i) {
        delta += profile[i];
    }
    return std::min(delta, 1.0);
}

inline double hit_probability(const ContentParams& params)
{
    params.validate();
    return hit_probability(zipf_popularity(params), params.cache_size);
}

namespace detail {

inline void require_fraction(double value, const char* name)
{
    require(std::isfinite(value) && value >= 0.0 && value <= 1.0,
            std::string("content: ") + name + " must lie in [0, 1]");
}

} // namespace detail

inline RequestMix request_mix(double cache_user_ratio, double hit_prob)
{
    detail::require_fraction(cache_user_ratio, "cache-user ratio alpha");
    detail::require_fraction(hit_prob, "hit probability delta");
    const double a = cache_user_ratio;
    const double d = hit_prob;
    return RequestMix{a * d, a * (1.0 - d), (1.0 - a) * d, (1.0 - a) * (1.0 - d)};
}

/// Thinned densities of the transmitting BS states.
///
/// Every BS is fully loaded and serves one of the non-self-offloaded requests
/// uniformly, so each state's share equals that branch's share of served traffic.
inline TierDensities tier_densities(double lambda_b, double cache_user_ratio, double hit_prob)
{
    detail::require(std::isfinite(lambda_b) && lambda_b > 0.0, "content: lambda_b must be > 0");
    detail::require_fraction(cache_user_ratio, "cache-user ratio alpha");
    detail::require_fraction(hit_prob, "hit probability delta");
    const double a = cache_user_ratio;
    const double d = hit_prob;
    const double served = 1.0 - a * d;
    if (served <= 0.0) {
        throw ParameterError("content: degenerate load, alpha*delta = 1 leaves no BS transmitting");
    }
    TierDensities t;
    t.lambda_b1 = a * (1.0 - d) / served * lambda_b;
    t.lambda_b2 = (1.0 - a) * d / served * lambda_b;
    // Take the remainder so the three shares sum to lambda_b to the last ulp.
    t.lambda_b3 = std::max(0.0, lambda_b - t.lambda_b1 - t.lambda_b2);
    return t;
}

} // namespace cachesec

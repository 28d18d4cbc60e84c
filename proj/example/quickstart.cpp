// Secrecy rate and coverage of both transmission modes at the default
// network parameters, with a small simulation alongside.

#include <cstdio>

#include "cachesec/cachesec.hpp"

int main()
{
    using namespace cachesec;

    SystemParams params;            // lambda_b = 1, lambda_e = 5 per km^2, theta = alpha = 0.5
    const ContentParams content;    // N = 100 files, M = 5 cached, Zipf skew 0.8
    const auto tiers = tiers_for(params, content);

    std::printf("hit probability        %.4f\n", hit_probability(content));
    std::printf("secure rate            %.4f bits/s/Hz\n", avg_secrecy_rate_secure(params, tiers).value);
    std::printf("normal rate            %.4f bits/s/Hz\n", avg_secrecy_rate_normal(params).value);
    std::printf("secure coverage R_s=1  %.4f\n", coverage_secure_definition(params, tiers, 1.0).probability);
    std::printf("normal coverage R_s=1  %.4f\n", coverage_normal_definition(params, 1.0).probability);

    mc::McConfig config;
    config.trials = 2000;
    const auto samples = mc::simulate_both_modes(config, params, tiers);
    const auto secure = mc::rate_from(samples.secure);
    const auto normal = mc::rate_from(samples.normal);
    std::printf("simulated secure rate  %.4f +- %.4f\n", secure.mean, secure.std_error);
    std::printf("simulated normal rate  %.4f +- %.4f\n", normal.mean, normal.std_error);
}

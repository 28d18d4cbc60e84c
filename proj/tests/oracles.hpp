#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library's numerics so the checks stay two-route.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <cstddef>
#include <numbers>

namespace oracle {

/// Zipf normaliser sum_{j=1..n} j^{-eta}, summed in long double.
inline long double zipf_norm(std::size_t n, double eta)
{
    long double sum = 0.0L;
    for (std::size_t j = n; j >= 1; --j) {
        sum += std::pow(static_cast<long double>(j), -static_cast<long double>(eta));
    }
    return sum;
}

inline long double zipf_head(std::size_t m, double eta)
{
    long double sum = 0.0L;
    for (std::size_t j = m; j >= 1; --j) {
        sum += std::pow(static_cast<long double>(j), -static_cast<long double>(eta));
    }
    return sum;
}

/// 2F1 on z <= 0 by brute-force power series after the Pfaff map into [0, 1).
/// Runs a fixed, generous number of terms with no adaptive stopping.
template <typename Real>
Real series_2f1(Real a, Real b, Real c, Real z, long terms)
{
    const Real w = z / (z - 1);
    const Real bb = c - b;
    Real term = 1;
    Real sum = 1;
    for (long n = 0; n < terms; ++n) {
        term *= (a + n) * (bb + n) / ((c + n) * (n + 1)) * w;
        sum += term;
    }
    return std::pow(1 - z, -a) * sum;
}

/// gamma^{2/beta} * int_{gamma^{-2/beta}}^inf dy / (1 + y^{beta/2}) by
/// double-exponential quadrature.
inline double z_integral_form(double gamma, double beta)
{
    if (gamma == 0.0) {
        return 0.0;
    }
    boost::math::quadrature::exp_sinh<double> integrator;
    const double lower = std::pow(gamma, -2.0 / beta);
    auto f = [beta, lower](double t) { return 1.0 / (1.0 + std::pow(lower + t, beta / 2.0)); };
    return std::pow(gamma, 2.0 / beta) * integrator.integrate(f, 1e-14);
}

/// int_0^inf f(x) dx by exp-sinh quadrature.
template <typename F>
double half_line(F f)
{
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate(f, 1e-13);
}

/// int_a^b f(x) dx by tanh-sinh quadrature.
template <typename F>
double segment(F f, double a, double b)
{
    boost::math::quadrature::tanh_sinh<double> integrator;
    return integrator.integrate(f, a, b, 1e-13);
}

} // namespace oracle

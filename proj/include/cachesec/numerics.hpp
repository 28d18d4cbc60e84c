#pragma once

// Special functions and quadrature used by the analytic metrics.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"

namespace cachesec::numerics {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 2000;
    /// Semi-infinite tails are cut where the integrand drops below this
    /// fraction of its running maximum.
    double tail_cutoff_rel = 1e-10;

    void validate() const
    {
        cachesec::detail::require(abs_tol > 0.0 && rel_tol > 0.0, "quadrature: tolerances must be > 0");
        cachesec::detail::require(max_subdivisions >= 1, "quadrature: max_subdivisions must be >= 1");
        cachesec::detail::require(tail_cutoff_rel > 0.0 && tail_cutoff_rel < 1.0,
                        "quadrature: tail cutoff must lie in (0, 1)");
    }
};

struct IntegrationResult {
    double value = 0.0;
    double error_bound = 0.0;
};

inline constexpr double infinity = std::numeric_limits<double>::infinity();

namespace detail {

// 15-point Kronrod rule with its embedded 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <typename F>
Panel kronrod15(F& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kronrod_weights[7];
    double gauss = fc * gauss_weights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kronrod_nodes[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kronrod_weights[j] * pair;
        if (j % 2 == 1) {
            gauss += gauss_weights[j / 2] * pair;
        }
    }
    kronrod *= half;
    gauss *= half;
    double error = std::abs(kronrod - gauss);
    if (!std::isfinite(kronrod)) {
        error = infinity;
    }
    return Panel{a, b, kronrod, error};
}

inline bool is_nonpositive_integer(double x)
{
    return x <= 0.0 && x == std::nearbyint(x);
}

inline double reciprocal_gamma(double x)
{
    if (is_nonpositive_integer(x)) {
        return 0.0;
    }
    return 1.0 / std::tgamma(x);
}

// Plain power series of 2F1; callers keep |z| well inside the unit disk.
inline double hypergeometric_series(double a, double b, double c, double z, long max_terms)
{
    double term = 1.0;
    double sum = 1.0;
    for (long n = 0; n < max_terms; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if (term == 0.0) {
            return sum;
        }
        if (std::abs(term) <= 1e-17 * std::abs(sum) && n > 2) {
            return sum;
        }
    }
    throw NumericError("gauss_2f1: power series did not converge", sum, std::abs(term));
}

// z in [-1, 0]: Pfaff map to w = z/(z-1) in [0, 1/2].
inline double hypergeometric_pfaff(double a, double b, double c, double z, long max_terms)
{
    const double w = z / (z - 1.0);
    return std::pow(1.0 - z, -a) * hypergeometric_series(a, c - b, c, w, max_terms);
}

} // namespace detail

/// Adaptive Gauss-Kronrod on a finite interval.
template <typename F>
IntegrationResult integrate_finite(F&& f, double a, double b, const QuadratureSpec& spec = {})
{
    spec.validate();
    if (a == b) {
        return {};
    }
    if (!(std::isfinite(a) && std::isfinite(b))) {
        throw ParameterError("quadrature: finite bounds required");
    }
    const double sign = b > a ? 1.0 : -1.0;
    if (b < a) {
        std::swap(a, b);
    }

    std::vector<detail::Panel> panels;
    panels.reserve(static_cast<std::size_t>(spec.max_subdivisions) + 1);
    panels.push_back(detail::kronrod15(f, a, b));
    double total = panels.front().value;
    double error = panels.front().error;
    int subdivisions = 1;
    while (error > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (subdivisions >= spec.max_subdivisions) {
            throw NumericError("quadrature: tolerance not reached within " +
                                   std::to_string(spec.max_subdivisions) + " subdivisions",
                               sign * total, error);
        }
        std::pop_heap(panels.begin(), panels.end());
        const detail::Panel worst = panels.back();
        panels.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw NumericError("quadrature: interval collapsed below machine resolution",
                               sign * total, error);
        }
        panels.push_back(detail::kronrod15(f, worst.a, mid));
        std::push_heap(panels.begin(), panels.end());
        panels.push_back(detail::kronrod15(f, mid, worst.b));
        std::push_heap(panels.begin(), panels.end());
        ++subdivisions;

        // Re-sum instead of updating incrementally to avoid drift in long runs.
        total = 0.0;
        error = 0.0;
        for (const auto& panel : panels) {
            total += panel.value;
            error += panel.error;
        }
        if (!std::isfinite(total)) {
            throw NumericError("quadrature: integrand produced a non-finite value", total, error);
        }
    }
    return {sign * total, error};
}

/// Integral of f over [a, b]; b may be +infinity.
///
/// Semi-infinite ranges are mapped onto [0, 1) with x = a + t / (1 - t).
template <typename F>
IntegrationResult integrate(F&& f, double a, double b, const QuadratureSpec& spec = {})
{
    if (!std::isfinite(a)) {
        throw ParameterError("quadrature: lower bound must be finite");
    }
    if (std::isfinite(b)) {
        return integrate_finite(f, a, b, spec);
    }
    if (b < 0.0) {
        throw ParameterError("quadrature: upper bound -infinity is not supported");
    }
    auto mapped = [&f, a](double t) {
        const double one_minus = 1.0 - t;
        const double x = a + t / one_minus;
        const double value = f(x);
        return value == 0.0 ? 0.0 : value / (one_minus * one_minus);
    };
    return integrate_finite(mapped, 0.0, 1.0, spec);
}

/// Integral of f over [lo, hi] with 0 <= lo < hi <= infinity, evaluated on a
/// logarithmic axis x = e^t.
///
/// Infinite ends of the t axis (lo = 0 or hi = infinity) are truncated where
/// x*f(x) drops below spec.tail_cutoff_rel times its running maximum; the
/// truncated range is then doubled and re-integrated to confirm the cut.
template <typename F>
IntegrationResult integrate_log_axis(F&& f, double lo, double hi, const QuadratureSpec& spec = {})
{
    spec.validate();
    if (!(lo >= 0.0 && hi > lo)) {
        throw ParameterError("quadrature: log-axis integration needs 0 <= lo < hi");
    }
    auto g = [&f](double t) {
        const double x = std::exp(t);
        const double value = f(x);
        return value == 0.0 ? 0.0 : value * x;
    };
    constexpr double t_limit = 700.0;
    const bool open_low = lo == 0.0;
    const bool open_high = !std::isfinite(hi);
    double t_lo = open_low ? -infinity : std::log(lo);
    double t_hi = open_high ? infinity : std::log(hi);

    if (open_low || open_high) {
        double anchor = 0.0;
        if (!open_low && open_high) {
            anchor = t_lo;
        } else if (open_low && !open_high) {
            anchor = t_hi;
        }
        double running_max = std::abs(g(anchor));
        auto scan = [&](double direction) {
            double t = anchor;
            int quiet = 0;
            while (std::abs(t - anchor) < t_limit) {
                t += direction;
                const double v = std::abs(g(t));
                running_max = std::max(running_max, v);
                quiet = v <= spec.tail_cutoff_rel * running_max ? quiet + 1 : 0;
                if (quiet >= 2 && running_max > 0.0) {
                    return t;
                }
            }
            if (running_max == 0.0) {
                return t;
            }
            throw NumericError("quadrature: integrand tail does not decay on the log axis", 0.0,
                               infinity);
        };
        if (open_high) {
            t_hi = scan(+1.0);
        }
        if (open_low) {
            t_lo = scan(-1.0);
        }
        if (running_max == 0.0) {
            return {};
        }

        IntegrationResult coarse = integrate_finite(g, t_lo, t_hi, spec);
        for (int attempt = 0; attempt < 4; ++attempt) {
            const double wide_lo = open_low ? anchor - 2.0 * (anchor - t_lo) : t_lo;
            const double wide_hi = open_high ? anchor + 2.0 * (t_hi - anchor) : t_hi;
            const IntegrationResult wide = integrate_finite(g, wide_lo, wide_hi, spec);
            const double shift = std::abs(wide.value - coarse.value);
            if (shift <= std::max(spec.abs_tol, spec.rel_tol * std::abs(wide.value))) {
                return {wide.value, wide.error_bound + shift};
            }
            coarse = wide;
            t_lo = wide_lo;
            t_hi = wide_hi;
        }
        throw NumericError("quadrature: tail truncation did not stabilise", coarse.value,
                           coarse.error_bound);
    }
    return integrate_finite(g, t_lo, t_hi, spec);
}

/// Gauss hypergeometric 2F1(a, b; c; z) on the closed negative half-line.
///
/// z in [-1, 0] uses the Pfaff transformation z -> z/(z-1); z < -1 first maps
/// through z -> 1/z (connection formula), which needs b - a non-integer. The
/// integer case falls back to the Pfaff series near w = 1 and fails loudly if
/// that does not converge.
inline double gauss_2f1(double a, double b, double c, double z)
{
    if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(z))) {
        throw ParameterError("gauss_2f1: arguments must be finite");
    }
    if (detail::is_nonpositive_integer(c)) {
        throw ParameterError("gauss_2f1: c must not be a nonpositive integer");
    }
    if (z > 0.0) {
        throw ParameterError("gauss_2f1: only z <= 0 is supported");
    }
    if (z == 0.0) {
        return 1.0;
    }
    constexpr long short_terms = 10'000;
    if (detail::is_nonpositive_integer(a) || detail::is_nonpositive_integer(b)) {
        // Terminating polynomial: sum every term, no early exit.
        const double degree = -std::max(detail::is_nonpositive_integer(a) ? a : -infinity,
                                        detail::is_nonpositive_integer(b) ? b : -infinity);
        double term = 1.0;
        double sum = 1.0;
        for (double n = 0.0; n < degree; n += 1.0) {
            term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
            sum += term;
        }
        return sum;
    }
    if (z >= -1.0) {
        return detail::hypergeometric_pfaff(a, b, c, z, short_terms);
    }
    const double ba = b - a;
    if (ba == std::nearbyint(ba)) {
        return detail::hypergeometric_pfaff(a, b, c, z, 2'000'000);
    }
    const double inv = 1.0 / z;
    const double gc = std::tgamma(c);
    const double first = gc * std::tgamma(ba) * detail::reciprocal_gamma(b) *
                         detail::reciprocal_gamma(c - a) * std::pow(-z, -a);
    const double second = gc * std::tgamma(-ba) * detail::reciprocal_gamma(a) *
                          detail::reciprocal_gamma(c - b) * std::pow(-z, -b);
    double value = 0.0;
    if (first != 0.0) {
        value += first * detail::hypergeometric_pfaff(a, a - c + 1.0, 1.0 - ba, inv, short_terms);
    }
    if (second != 0.0) {
        value += second * detail::hypergeometric_pfaff(b, b - c + 1.0, 1.0 + ba, inv, short_terms);
    }
    return value;
}

namespace detail {

inline void require_pathloss(double beta)
{
    if (!(std::isfinite(beta) && beta > 2.0 + 1e-9)) {
        throw ParameterError("unsupported path-loss exponent " + std::to_string(beta) +
                             ": interference kernels diverge for beta <= 2");
    }
}

} // namespace detail

/// Interference kernel Z via its hypergeometric form, for any beta > 2.
inline double z_kernel_generic(double gamma, double beta)
{
    detail::require_pathloss(beta);
    cachesec::detail::require(gamma >= 0.0, "z_kernel: threshold must be >= 0");
    if (gamma == 0.0) {
        return 0.0;
    }
    if (std::isinf(gamma)) {
        return infinity;
    }
    const double delta = 2.0 / beta;
    return 2.0 * gamma / (beta - 2.0) * gauss_2f1(1.0, 1.0 - delta, 2.0 - delta, -gamma);
}

/// Z(gamma) = 2 gamma / (beta - 2) * 2F1(1, 1 - 2/beta; 2 - 2/beta; -gamma).
///
/// Equals gamma^{2/beta} * integral_{gamma^{-2/beta}}^inf dy / (1 + y^{beta/2}).
/// For beta = 4 this is sqrt(gamma) * atan(sqrt(gamma)).
inline double z_kernel(double gamma, double beta)
{
    if (beta == 4.0) {
        cachesec::detail::require(gamma >= 0.0, "z_kernel: threshold must be >= 0");
        if (std::isinf(gamma)) {
            return infinity;
        }
        const double root = std::sqrt(gamma);
        return root * std::atan(root);
    }
    return z_kernel_generic(gamma, beta);
}

/// Gamma(1 + 2/beta) * Gamma(1 - 2/beta), through the reflection formula.
inline double gamma_product(double beta)
{
    detail::require_pathloss(beta);
    const double x = 2.0 / beta;
    return std::numbers::pi * x / std::sin(std::numbers::pi * x);
}

/// Which lower limit the coverage kernel's inner integral uses.
enum class GKernelLimit {
    as_printed, ///< s^{+2/beta}
    reciprocal, ///< s^{-2/beta}, the form of the interference Laplace transform
};

/// Coverage kernel G with s = (1 + gamma_th) * 2^{R_s} - 1:
/// G = s^{2/beta} * integral_{s^{+-2/beta}}^inf dx / (1 + x^{beta/2}).
inline double g_kernel(double gamma_th, double beta, double secrecy_rate,
                       GKernelLimit limit = GKernelLimit::as_printed)
{
    detail::require_pathloss(beta);
    cachesec::detail::require(gamma_th >= 0.0, "g_kernel: threshold must be >= 0");
    cachesec::detail::require(secrecy_rate >= 0.0, "g_kernel: secrecy rate threshold must be >= 0");
    const double s = (1.0 + gamma_th) * std::exp2(secrecy_rate) - 1.0;
    if (s <= 0.0) {
        return 0.0;
    }
    if (limit == GKernelLimit::reciprocal) {
        return z_kernel(s, beta);
    }
    if (beta == 4.0) {
        const double root = std::sqrt(s);
        // pi/2 - atan(u) == atan(1/u) for u > 0, without cancellation for large u.
        return root * std::atan(1.0 / root);
    }
    return std::pow(s, 4.0 / beta) * z_kernel(1.0 / s, beta);
}

} // namespace cachesec::numerics

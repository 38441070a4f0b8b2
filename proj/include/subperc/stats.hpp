#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "subperc/errors.hpp"

namespace subperc {

/// Monte Carlo estimate with its standard error.
struct EstimateWithCI {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t replications = 0;
};

inline double sample_mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

/// Unbiased sample standard deviation (n - 1 in the denominator).
inline double sample_std(const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n < 2) return 0.0;
    const double m = sample_mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(n - 1));
}

/// Mean and standard error of the mean, as one estimate.
inline EstimateWithCI estimate_from_samples(const std::vector<double>& v) {
    EstimateWithCI e;
    e.replications = v.size();
    e.value = sample_mean(v);
    e.std_error = v.size() > 1 ? sample_std(v) / std::sqrt(static_cast<double>(v.size())) : 0.0;
    return e;
}

namespace detail {

/// Regularized lower incomplete gamma P(a, x) by series expansion (x < a+1).
inline double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

/// Regularized upper incomplete gamma Q(a, x) by Lentz continued fraction (x >= a+1).
inline double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

/// Regularized lower incomplete gamma P(a, x).
inline double gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw ParameterError("gamma_p: domain error");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_cf(a, x);
}

inline double gamma_q(double a, double x) { return 1.0 - gamma_p(a, x); }

/// Chi-square survival function P{X > x} with df degrees of freedom.
inline double chi_square_sf(double x, int df) {
    if (df <= 0) throw ParameterError("chi_square_sf: df must be positive");
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * x);
}

/// Chi-square goodness-of-fit statistic against given per-bin means.
inline double chi_square_statistic(const std::vector<double>& observed,
                                   const std::vector<double>& expected) {
    if (observed.size() != expected.size() || observed.empty())
        throw ParameterError("chi_square_statistic: size mismatch");
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0.0) throw ParameterError("chi_square_statistic: nonpositive expectation");
        const double d = observed[i] - expected[i];
        stat += d * d / expected[i];
    }
    return stat;
}

/// Asymptotic Kolmogorov survival function. The alternating series
/// 2 sum (-1)^{j-1} exp(-2 j^2 t^2) converges fast for large t; below the
/// usual crossover the dual theta-function form of the CDF is used instead.
inline double kolmogorov_sf(double t) {
    if (t <= 0.0) return 1.0;
    if (t < 1.18) {
        const double pi2 = 9.869604401089358;  // pi^2
        const double e = std::exp(-pi2 / (8.0 * t * t));
        const double cdf = std::sqrt(2.0 * 3.141592653589793) / t *
                           (e + std::pow(e, 9.0) + std::pow(e, 25.0) + std::pow(e, 49.0));
        return std::min(1.0, std::max(0.0, 1.0 - cdf));
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * t * t);
        sum += sign * term;
        if (term < 1e-16) break;
        sign = -sign;
    }
    return std::min(1.0, std::max(0.0, 2.0 * sum));
}

/// Two-sample Kolmogorov-Smirnov statistic D.
inline double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw ParameterError("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        const double fa = static_cast<double>(i) / static_cast<double>(a.size());
        const double fb = static_cast<double>(j) / static_cast<double>(b.size());
        d = std::max(d, std::fabs(fa - fb));
    }
    return d;
}

/// Two-sample KS p-value with the usual effective-size correction.
inline double ks_two_sample_pvalue(const std::vector<double>& a, const std::vector<double>& b) {
    const double d = ks_two_sample_statistic(a, b);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ne = std::sqrt(na * nb / (na + nb));
    return kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d);
}

}  // namespace subperc

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace zonoid::num {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;
inline constexpr double kSqrt1_2 = 0.70710678118654752440;

double norm_pdf(double x);
double norm_cdf(double x);
/// Upper tail 1 - Phi(x), accurate for large positive x.
double norm_sf(double x);

/// Standard normal quantile by Wichura's AS 241 rational approximation
/// (relative accuracy about 1e-16 over (0,1)). Returns -inf/+inf at 0/1.
double norm_quantile(double p);

/// Phi^{-1}(1 - q) without forming 1 - q.
inline double norm_quantile_upper(double q) { return -norm_quantile(q); }

using Fn = std::function<double(double)>;

/// Closed interval [lo, hi] bracketing a sign change of a monotone function.
struct Bracket {
    double lo;
    double hi;
};

/// Expands outward from `start` in steps `step`, 2*step, 4*step, ... until
/// `g` changes sign or |x - start| exceeds `limit`. `g` must be monotone.
std::optional<Bracket> expand_bracket(const Fn& g, double start, double step, double limit);

/// Bisection on a monotone function to bracket width `xtol`, followed by
/// Newton polishing steps when `dg` is provided. Polishing steps that leave
/// the final bracket or fail to reduce |g| are rejected.
double solve_monotone(const Fn& g, const Fn* dg, Bracket bracket, double xtol);

struct Minimum {
    double x;
    double value;
};

/// Brent's minimiser (golden section with parabolic steps) on [a, b] for a
/// unimodal function. Endpoints are compared too, so monotone functions
/// return the better endpoint; ties resolve to the smaller x.
Minimum minimize_unimodal(const Fn& fn, double a, double b, double xtol = 1e-12);

/// Pairwise (cascade) summation; result depends only on the input order.
double pairwise_sum(std::span<const double> values);

/// Globally adaptive Gauss-Kronrod (61 point) quadrature on a finite interval.
double integrate(const Fn& fn, double a, double b, double tol = 1e-13);

/// Tanh-sinh quadrature that tolerates integrable endpoint singularities.
/// The integrand receives (x, xc) where xc = a - x (<= 0) in the left half
/// and xc = b - x (> 0) in the right half, so complements near the ends stay
/// exact.
double integrate_singular(const std::function<double(double, double)>& fn, double a, double b,
                          double tol = 1e-13);

std::vector<double> linspace(double lo, double hi, std::size_t points);

/// Uniform grid "lo:hi:points". The count is the number of grid points.
struct GridSpec {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t points = 2;

    std::vector<double> values() const { return linspace(lo, hi, points); }
    static GridSpec parse(std::string_view text);
    std::string to_string() const;
};

bool strictly_increasing(std::span<const double> xs);

}  // namespace zonoid::num

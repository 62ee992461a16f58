#pragma once

#include "zonoid/density.hpp"

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace zonoid {

struct Interval {
    double lo;
    double hi;
};

/// Finitely supported law: strictly sorted atoms with positive weights.
class DiscreteDistribution {
public:
    /// Sorts atoms, rejects duplicates, non-positive weights, and weights not
    /// summing to 1 within 1e-12.
    DiscreteDistribution(std::vector<double> atoms, std::vector<double> weights);

    static DiscreteDistribution uniform(std::vector<double> atoms);

    std::span<const double> atoms() const { return atoms_; }
    std::span<const double> weights() const { return weights_; }
    std::size_t size() const { return atoms_.size(); }
    double mean() const;

private:
    std::vector<double> atoms_;
    std::vector<double> weights_;
};

/// K -> E[(X - K)^+], either as a closed-form callable or as grid values.
///
/// Grid curves interpolate linearly and are extended outside the grid as if
/// the law were supported inside it: slope -1 to the left, 0 to the right.
/// That makes curves built from discrete laws exact everywhere.
class CallCurve {
public:
    static CallCurve closed_form(std::function<double(double)> fn, double mean, Interval strike_domain);
    /// Grid curve; strikes strictly increasing, at least 2 points.
    static CallCurve from_grid(std::vector<double> strikes, std::vector<double> values, double mean);
    /// Piecewise-linear curve with kinks exactly at the atoms.
    static CallCurve from_distribution(const DiscreteDistribution& dist);

    bool is_grid() const { return !fn_; }
    double mean() const { return mean_; }
    Interval strike_domain() const { return domain_; }
    std::span<const double> strikes() const { return strikes_; }
    std::span<const double> values() const { return values_; }

    double operator()(double strike) const;

    /// Marks the underlying law as strictly positive. Grid curves are checked
    /// (C(K) + K = m at the first strike and at every grid strike K <= 0);
    /// closed forms need a strike domain inside [0, inf).
    CallCurve& certify_positive();
    bool positive() const { return positive_; }

    /// Throws ValidationError unless the curve is non-increasing, convex and
    /// meets both asymptotes at the ends of its grid or strike domain.
    void validate(double endpoint_tol = 1e-6) const;

private:
    std::function<double(double)> fn_;
    std::vector<double> strikes_;
    std::vector<double> values_;
    double mean_ = 0.0;
    Interval domain_{0.0, 0.0};
    bool positive_ = false;
};

/// p -> C-hat(p) on [0,1], either closed-form or on a probability grid that
/// starts at 0 and ends at 1. Endpoint values are always exactly 0 and m.
class ZonoidBoundary {
public:
    static ZonoidBoundary closed_form(std::function<double(double)> fn, double mean);
    static ZonoidBoundary from_grid(std::vector<double> probs, std::vector<double> values, double mean);

    bool is_grid() const { return !fn_; }
    double mean() const { return mean_; }
    std::span<const double> probs() const { return probs_; }
    std::span<const double> values() const { return values_; }

    double operator()(double p) const;
    /// m - C-hat(1 - p): the lower edge of the lift zonoid.
    double lower(double p) const { return mean_ - (*this)(1.0 - p); }
    bool contains(double p, double q) const { return p >= 0.0 && p <= 1.0 && lower(p) <= q && q <= (*this)(p); }

    /// Throws ValidationError unless the values are concave (slack
    /// 1e-9 * value range).
    void validate() const;

private:
    std::function<double(double)> fn_;
    std::vector<double> probs_;
    std::vector<double> values_;
    double mean_ = 0.0;
};

/// C-hat(p) = min_K [C(K) + pK] on `pgrid` (must include 0 and 1). Closed
/// forms are minimised with Brent's method over the strike domain; grid
/// curves are minimised exactly over their vertices.
ZonoidBoundary upper_boundary_from_calls(const CallCurve& curve, std::span<const double> pgrid);

/// C(K) = max_p [C-hat(p) - pK] on `strikes`.
CallCurve calls_from_upper_boundary(const ZonoidBoundary& boundary, std::span<const double> strikes);

/// Integral over [0, p] of the upper quantile of Theta(K) = P(X >= K).
double boundary_from_quantile_integral(const DiscreteDistribution& dist, double p);
double boundary_from_quantile_integral(const DensityModel& density, double p);

/// C-hat^{-1}(q) = max_{K > 0} (q - C(K)) / K for a strictly positive law.
double inverse_boundary_positive(const CallCurve& curve, double q);

/// Neyman-Pearson optimum: fill g = 1 on the largest atoms until E g = p,
/// randomising on the boundary atom.
double discrete_upper_boundary(const DiscreteDistribution& dist, double p);

/// True iff C_X <= C_Y at every strike of `strikes` (slack 1e-12 * scale).
/// Means must agree within 1e-10.
bool check_convex_order(const CallCurve& x, const CallCurve& y, std::span<const double> strikes);
/// Uses the union of both grids, or 1001 points over the joint domain.
bool check_convex_order(const CallCurve& x, const CallCurve& y);

/// C(K) = -K + C(-K) on a grid symmetric about 0.
bool check_arithmetic_symmetry(const CallCurve& curve, std::span<const double> strikes, double tol = 1e-9);
bool check_arithmetic_symmetry(const CallCurve& curve, double tol = 1e-9);

/// C(K) = 1 - K + K C(1/K) on positive strikes; requires mean 1.
bool check_geometric_symmetry(const CallCurve& curve, std::span<const double> strikes, double tol = 1e-9);
bool check_geometric_symmetry(const CallCurve& curve, double tol = 1e-9);

}  // namespace zonoid

#pragma once

#include "zonoid/density.hpp"

namespace zonoid {

/// A call price `c` and strike `K`, both normalised by the initial price.
struct ImpliedQuery {
    DensityModel density = DensityModel::gaussian();
    double c = 0.0;
    double K = 1.0;

    /// Throws DomainError unless K > 0 and (1 - K)^+ <= c < 1.
    void validate() const;
};

/// C_F(y, K) = max_p [H_y(p) - p K]; equals (1 - K)^+ at y = 0 and
/// F(V_y(K) + y) - F(V_y(K)) K for y > 0.
double normalized_call(const DensityModel& density, double y, double strike);

/// Integral over [0, y] of f(V_u(K) + u) du, the accumulated vega; it equals
/// normalized_call(y, K) - (1 - K)^+. The integrand is 0 where K lies
/// outside the range of f(. + u) / f.
double vega_integral(const DensityModel& density, double y, double strike);

/// The unique y* >= 0 with normalized_call(y*, K) = c, by bisection after
/// doubling the upper bracket.
double implied_y_root(const ImpliedQuery& query);

struct ImpliedMinimum {
    double y;
    /// Minimiser of p -> F^{-1}(c + pK) - F^{-1}(p).
    double p_hat;
    /// Set when the coarse scan found the objective not unimodal and the
    /// dense fallback scan was used.
    bool used_fallback_scan = false;
};

/// y* = min over p of F^{-1}(c + pK) - F^{-1}(p), over c + pK < 1, p > 0.
ImpliedMinimum implied_y_minimization(const ImpliedQuery& query);

}  // namespace zonoid

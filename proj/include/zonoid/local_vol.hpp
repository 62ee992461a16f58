#pragma once

#include "zonoid/density.hpp"
#include "zonoid/peacock.hpp"

#include <functional>
#include <string>

namespace zonoid {

enum class LocalVolMethod { fd_calls, fd_boundary, closed_form };

std::string to_string(LocalVolMethod method);

/// Local variance at (t, K). `sigma_sq` is the linear variance sigma(t,K)^2;
/// `sigma_bar_sq` = sigma_sq / K^2 is the geometric variance (NaN for K <= 0).
struct LocalVolResult {
    double t = 0.0;
    double K = 0.0;
    double sigma_sq = 0.0;
    double sigma_bar_sq = 0.0;
    LocalVolMethod method = LocalVolMethod::fd_calls;
    /// Set when the variance is negative beyond finite-difference noise or
    /// the local stencil has the wrong curvature sign.
    bool flagged = false;
};

/// sigma^2 = 2 dC/dt / d2C/dK2 at a grid node (t, K) of a call-space surface.
/// Central differences with one Richardson level when two neighbours exist on
/// each side. Throws SingularError when |d2C/dK2| < 1e-12.
LocalVolResult dupire_from_calls(const SurfaceGrid& surface, double t, double K);
/// Same on a callable C(t, K) with steps ht and hK.
LocalVolResult dupire_from_calls(const std::function<double(double, double)>& calls, double t, double K,
                                 double ht, double hK);

/// At a grid node (t, p) of a zonoid-space surface: K = dC-hat/dp and
/// sigma(t, K)^2 = -2 dC-hat/dt * d2C-hat/dp2.
LocalVolResult dupire_from_boundary(const SurfaceGrid& surface, double t, double p);
LocalVolResult dupire_from_boundary(const std::function<double(double, double)>& boundary, double t, double p,
                                    double ht, double hp);

/// sigma(t,K)^2 = -2 Y Y' (log f)''[U((K - S0) / Y)].
LocalVolResult localvol_linear_closed(const DensityModel& density, const TimeChange& y, double S0, double t, double K);

/// sigma-bar(t,K)^2 = 2 Y' [(log f)'(V) - (log f)'(V + Y)], V = V_Y(K / S0).
LocalVolResult localvol_geometric_closed(const DensityModel& density, const TimeChange& y, double S0, double t,
                                         double K);

}  // namespace zonoid

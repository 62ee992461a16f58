#include "zonoid/local_vol.hpp"

#include "zonoid/errors.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace zonoid {

std::string to_string(LocalVolMethod method) {
    switch (method) {
        case LocalVolMethod::fd_calls: return "fd-calls";
        case LocalVolMethod::fd_boundary: return "fd-boundary";
        case LocalVolMethod::closed_form: return "closed-form";
    }
    return "unknown";
}

namespace {

constexpr double kNegativeSlack = 1e-8;

// Values at offsets -2..2 along one axis; the outer pair may be missing.
struct Stencil {
    std::array<double, 5> v{};
    double h = 0.0;
    bool wide = false;

    double first() const {
        const double d1 = (v[3] - v[1]) / (2.0 * h);
        if (!wide) return d1;
        const double d2 = (v[4] - v[0]) / (4.0 * h);
        return (4.0 * d1 - d2) / 3.0;
    }
    double second() const {
        const double d1 = (v[3] - 2.0 * v[2] + v[1]) / (h * h);
        if (!wide) return d1;
        const double d2 = (v[4] - 2.0 * v[2] + v[0]) / (4.0 * h * h);
        return (4.0 * d1 - d2) / 3.0;
    }
};

std::size_t locate(const std::vector<double>& axis, double x, const char* what) {
    for (std::size_t i = 0; i < axis.size(); ++i) {
        if (std::fabs(axis[i] - x) <= 1e-12 * std::max(1.0, std::fabs(x))) return i;
    }
    throw DomainError(std::string(what) + " is not a grid node");
}

Stencil grid_stencil(const std::vector<double>& axis, std::size_t i, const std::function<double(std::size_t)>& value,
                     const char* what) {
    if (i == 0 || i + 1 >= axis.size()) throw DomainError(std::string(what) + " must be an interior node");
    Stencil s;
    s.h = axis[i + 1] - axis[i];
    const double h_left = axis[i] - axis[i - 1];
    if (std::fabs(s.h - h_left) > 1e-9 * s.h) throw DomainError(std::string(what) + " spacing is not uniform");
    s.wide = i >= 2 && i + 2 < axis.size() && std::fabs(axis[i + 2] - axis[i - 2] - 4.0 * s.h) <= 1e-9 * s.h;
    for (int k = -2; k <= 2; ++k) {
        if (!s.wide && (k == -2 || k == 2)) continue;
        s.v[static_cast<std::size_t>(k + 2)] = value(static_cast<std::size_t>(static_cast<long>(i) + k));
    }
    return s;
}

Stencil fn_stencil(const std::function<double(double)>& fn, double x, double h) {
    Stencil s;
    s.h = h;
    s.wide = true;
    for (int k = -2; k <= 2; ++k) s.v[static_cast<std::size_t>(k + 2)] = fn(x + k * h);
    return s;
}

LocalVolResult from_call_stencils(const Stencil& in_t, const Stencil& in_k, double t, double K) {
    const double dk2 = in_k.second();
    if (std::fabs(dk2) < 1e-12) throw SingularError("dupire_from_calls: vanishing strike curvature");
    LocalVolResult r;
    r.t = t;
    r.K = K;
    r.sigma_sq = 2.0 * in_t.first() / dk2;
    r.sigma_bar_sq = K > 0.0 ? r.sigma_sq / (K * K) : std::numeric_limits<double>::quiet_NaN();
    r.method = LocalVolMethod::fd_calls;
    r.flagged = r.sigma_sq < -kNegativeSlack;
    return r;
}

LocalVolResult from_boundary_stencils(const Stencil& in_t, const Stencil& in_p, double t) {
    LocalVolResult r;
    r.t = t;
    r.K = in_p.first();
    const double dpp = in_p.second();
    r.sigma_sq = -2.0 * in_t.first() * dpp;
    r.sigma_bar_sq = r.K > 0.0 ? r.sigma_sq / (r.K * r.K) : std::numeric_limits<double>::quiet_NaN();
    r.method = LocalVolMethod::fd_boundary;
    r.flagged = dpp > 0.0 || r.sigma_sq < -kNegativeSlack;
    return r;
}

}  // namespace

LocalVolResult dupire_from_calls(const SurfaceGrid& surface, double t, double K) {
    if (surface.axis != SurfaceGrid::Axis::call_space) throw DomainError("dupire_from_calls: surface is not in call space");
    surface.validate();
    const std::size_t a = locate(surface.times, t, "t");
    const std::size_t i = locate(surface.second_axis, K, "K");
    const auto in_t = grid_stencil(surface.times, a, [&](std::size_t b) { return surface.at(b, i); }, "t");
    const auto in_k = grid_stencil(surface.second_axis, i, [&](std::size_t j) { return surface.at(a, j); }, "K");
    return from_call_stencils(in_t, in_k, t, K);
}

LocalVolResult dupire_from_calls(const std::function<double(double, double)>& calls, double t, double K, double ht,
                                 double hK) {
    if (!(ht > 0.0) || !(hK > 0.0) || t - 2.0 * ht <= 0.0) throw DomainError("dupire_from_calls: bad steps");
    const auto in_t = fn_stencil([&](double u) { return calls(u, K); }, t, ht);
    const auto in_k = fn_stencil([&](double k) { return calls(t, k); }, K, hK);
    return from_call_stencils(in_t, in_k, t, K);
}

LocalVolResult dupire_from_boundary(const SurfaceGrid& surface, double t, double p) {
    if (surface.axis != SurfaceGrid::Axis::zonoid_space) {
        throw DomainError("dupire_from_boundary: surface is not in zonoid space");
    }
    surface.validate();
    const std::size_t a = locate(surface.times, t, "t");
    const std::size_t j = locate(surface.second_axis, p, "p");
    const auto in_t = grid_stencil(surface.times, a, [&](std::size_t b) { return surface.at(b, j); }, "t");
    const auto in_p = grid_stencil(surface.second_axis, j, [&](std::size_t k) { return surface.at(a, k); }, "p");
    return from_boundary_stencils(in_t, in_p, t);
}

LocalVolResult dupire_from_boundary(const std::function<double(double, double)>& boundary, double t, double p,
                                    double ht, double hp) {
    if (!(ht > 0.0) || !(hp > 0.0) || t - 2.0 * ht <= 0.0 || p - 2.0 * hp <= 0.0 || p + 2.0 * hp >= 1.0) {
        throw DomainError("dupire_from_boundary: bad steps");
    }
    const auto in_t = fn_stencil([&](double u) { return boundary(u, p); }, t, ht);
    const auto in_p = fn_stencil([&](double q) { return boundary(t, q); }, p, hp);
    return from_boundary_stencils(in_t, in_p, t);
}

LocalVolResult localvol_linear_closed(const DensityModel& density, const TimeChange& y, double S0, double t,
                                      double K) {
    if (!(t > 0.0)) throw DomainError("localvol_linear_closed: t must be positive");
    const double yt = y(t);
    if (!(yt > 0.0)) throw DomainError("localvol_linear_closed: Y(t) must be positive");
    const double u = inverse_log_slope(density, (K - S0) / yt);
    LocalVolResult r;
    r.t = t;
    r.K = K;
    r.sigma_sq = -2.0 * yt * y.derivative(t) * density.log_curvature(u);
    r.sigma_bar_sq = K > 0.0 ? r.sigma_sq / (K * K) : std::numeric_limits<double>::quiet_NaN();
    r.method = LocalVolMethod::closed_form;
    r.flagged = r.sigma_sq < 0.0;
    return r;
}

LocalVolResult localvol_geometric_closed(const DensityModel& density, const TimeChange& y, double S0, double t,
                                         double K) {
    if (!(t > 0.0)) throw DomainError("localvol_geometric_closed: t must be positive");
    if (!(S0 > 0.0) || !(K > 0.0)) throw DomainError("localvol_geometric_closed: S0 and K must be positive");
    const double yt = y(t);
    if (!(yt > 0.0)) throw DomainError("localvol_geometric_closed: Y(t) must be positive");
    const double v = inverse_ratio(density, yt, K / S0);
    LocalVolResult r;
    r.t = t;
    r.K = K;
    r.sigma_bar_sq = 2.0 * y.derivative(t) * (density.log_slope(v) - density.log_slope(v + yt));
    r.sigma_sq = r.sigma_bar_sq * K * K;
    r.method = LocalVolMethod::closed_form;
    r.flagged = r.sigma_bar_sq < 0.0;
    return r;
}

}  // namespace zonoid

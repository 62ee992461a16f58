#pragma once

#include "zonoid/density.hpp"
#include "zonoid/numerics.hpp"

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace zonoid {

enum class PeacockFamily { linear, geometric };

std::string to_string(PeacockFamily family);
PeacockFamily peacock_family_from_string(const std::string& name);

/// Time change t -> Y(t). The closed-form kinds carry a positive scale:
/// sqrt: scale * sqrt(t); linear: scale * t; log1p: scale * log(1 + t).
/// A table is interpolated linearly and may be increasing or decreasing.
class TimeChange {
public:
    enum class Kind { sqrt, linear, log1p, table };

    static TimeChange sqrt(double scale = 1.0);
    static TimeChange linear(double scale = 1.0);
    static TimeChange log1p(double scale = 1.0);
    /// Times strictly increasing, values strictly monotone, at least 2 rows.
    static TimeChange table(std::vector<double> times, std::vector<double> values);
    static TimeChange from_string(const std::string& kind, double scale);

    Kind kind() const { return kind_; }
    std::string name() const;
    double scale() const { return scale_; }

    double operator()(double t) const;
    /// dY/dt; centred secants on table rows, one-sided at the ends.
    double derivative(double t) const;
    bool increasing() const;

private:
    Kind kind_ = Kind::sqrt;
    double scale_ = 1.0;
    std::vector<double> times_;
    std::vector<double> values_;
};

/// One of the two log-concave peacock families:
///   linear:    C-hat(t, p) = s p + Y(t) G(p)
///   geometric: C-hat(t, p) = s H_{Y(t)}(p)
struct PeacockSpec {
    PeacockFamily family = PeacockFamily::linear;
    double s = 0.0;
    DensityModel density = DensityModel::gaussian();
    TimeChange time_change = TimeChange::sqrt();

    /// Throws ValidationError unless Y(0) = 0, Y is increasing, and s > 0 for
    /// the geometric family.
    void validate() const;
};

/// Values on a (time x second axis) grid.
struct SurfaceGrid {
    enum class Axis { call_space, zonoid_space };

    Axis axis = Axis::zonoid_space;
    std::vector<double> times;
    std::vector<double> second_axis;
    /// Row-major, times.size() rows of second_axis.size() values.
    std::vector<double> values;

    double at(std::size_t ti, std::size_t j) const { return values[ti * second_axis.size() + j]; }
    double& at(std::size_t ti, std::size_t j) { return values[ti * second_axis.size() + j]; }
    /// Throws ValidationError unless times increase strictly and values are finite.
    void validate() const;
};

/// G(p) = f(F^{-1}(p)), with G(0) = G(1) = 0.
double G_map(const DensityModel& density, double p);

/// H_y(p) = F(F^{-1}(p) + y), with H_y(0) = 0 and H_y(1) = 1. Defined for
/// every real y; H_{-y} is the inverse of H_y.
double H_map(const DensityModel& density, double y, double p);

double surface_boundary(const PeacockSpec& spec, double t, double p);

SurfaceGrid zonoid_surface(const PeacockSpec& spec, std::span<const double> times, std::span<const double> probs);

struct KellererReport {
    bool calls_monotone = true;
    bool mean_constant = true;
    /// Largest drop C(t_a, K) - C(t_{a+1}, K) seen.
    double max_call_decrease = 0.0;
    double max_mean_drift = 0.0;
    /// (t_a, t_{a+1}, K) where the largest drop occurs, when it exceeds slack.
    std::optional<std::array<double, 3>> witness;
};

struct PeacockCertificate {
    ConcavityReport concavity;
    /// Time at which the concavity witness was found.
    std::optional<double> concavity_time;
    KellererReport kellerer;

    bool passed() const { return concavity.is_concave && kellerer.calls_monotone && kellerer.mean_constant; }
};

/// Checks concavity of p -> C-hat(t, p) at each grid time (slack 1e-9 times
/// the value range), that calls obtained by the grid Legendre transform are
/// non-decreasing in t (slack 1e-9 * max(1, |s|)), and that C-hat(t, 1) is
/// constant. Does not call PeacockSpec::validate, so broken specs are
/// reported rather than rejected.
PeacockCertificate certify_peacock(const PeacockSpec& spec, std::span<const double> times,
                                   std::span<const double> probs);

/// sup over the grid of |H_{y1+y2}(p) - H_{y1}(H_{y2}(p))|.
double group_property_check(const DensityModel& density, double y1, double y2, std::span<const double> probs);

struct GeneratorRow {
    double y;
    double error;
};

/// sup_p |(H_y(p) - p) / y - G(p)| for each y.
std::vector<GeneratorRow> generator_limit_check(const DensityModel& density, std::span<const double> ys,
                                                std::span<const double> probs);

/// F^{-1}(p) = a + integral_{p0}^{p} dq / G(q). Probabilities are clamped to
/// [1e-6, 1 - 1e-6]. Throws DomainError when G <= 0 at a grid point.
std::vector<double> recover_F_from_G(const std::function<double(double)>& G, double anchor, double p0,
                                     std::span<const double> probs);

/// F(x) = H_{x - a}(p0). Throws UnsupportedError for x < a.
double recover_F_from_H(const DensityModel& density, double anchor, double p0, double x);

}  // namespace zonoid

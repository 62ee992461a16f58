#pragma once

#include "zonoid/numerics.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

namespace zonoid {

enum class DensityFamily { gaussian, logistic, cauchy, custom };

std::string to_string(DensityFamily family);
DensityFamily density_family_from_string(const std::string& name);

/// User-supplied density on the whole real line. All four callables are
/// required; the inverse maps never differentiate `pdf` numerically.
struct CustomDensity {
    std::function<double(double)> pdf;
    std::function<double(double)> pdf_derivative;
    std::function<double(double)> cdf;
    std::function<double(double)> quantile;
    std::string name = "custom";
};

/// Outcome of a discrete concavity test. When the test fails, `witness`
/// holds three consecutive abscissae whose second difference is positive.
struct ConcavityReport {
    bool is_concave = true;
    std::optional<std::array<double, 3>> witness;
    /// Largest positive second difference seen; 0 when none exceeds zero.
    double max_violation = 0.0;
    /// Second difference at the witness triple.
    double witness_second_difference = 0.0;
};

/// A strictly positive, differentiable density on R in location-scale form
/// f(x) = g((x - location) / scale) / scale.
///
/// Built-in families evaluate everything analytically, including tails via
/// complementary functions. Log-concavity is known for the built-ins and
/// certified numerically for custom densities at construction.
class DensityModel {
public:
    static DensityModel gaussian(double location = 0.0, double scale = 1.0);
    static DensityModel logistic(double location = 0.0, double scale = 1.0);
    static DensityModel cauchy(double location = 0.0, double scale = 1.0);
    static DensityModel custom(CustomDensity impl);

    DensityFamily family() const { return family_; }
    std::string name() const;
    double location() const { return location_; }
    double scale() const { return scale_; }
    bool log_concave() const { return log_concave_; }

    double pdf(double x) const;
    double log_pdf(double x) const;
    double pdf_derivative(double x) const;
    double cdf(double x) const;
    /// 1 - F(x), evaluated without cancellation for the built-ins.
    double sf(double x) const;
    double quantile(double p) const;
    /// F^{-1}(1 - q), evaluated without forming 1 - q for the built-ins.
    double upper_quantile(double q) const;

    /// log f(x + y) - log f(x), formed without cancellation for built-ins.
    double log_ratio(double x, double y) const;

    /// (log f)'(x) = f'(x) / f(x).
    double log_slope(double x) const;
    /// (log f)''(x); analytic for built-ins, central differences of the
    /// log-slope (step 1e-5 * scale) for custom densities.
    double log_curvature(double x) const;

    /// Open interval (inf, sup) of the log-slope over R when known in closed
    /// form; nullopt for custom densities.
    std::optional<std::pair<double, double>> log_slope_range() const;
    /// Open interval of x -> f(x + y) / f(x) for y > 0 when known.
    std::optional<std::pair<double, double>> ratio_range(double y) const;

private:
    DensityModel(DensityFamily family, double location, double scale);

    double standardize(double x) const { return (x - location_) / scale_; }

    DensityFamily family_;
    double location_;
    double scale_;
    bool log_concave_ = false;
    std::shared_ptr<const CustomDensity> custom_;
};

// Free-function interface.

/// f(x). Throws DomainError for non-finite x.
double eval_density(const DensityModel& model, double x);

/// F^{-1}(p). Throws DomainError unless 0 < p < 1.
double eval_quantile(const DensityModel& model, double p);

/// U(w): the inverse of the decreasing map (log f)'. Throws UnsupportedError
/// for densities that are not log-concave and RangeError when w lies outside
/// the range of (log f)'.
double inverse_log_slope(const DensityModel& model, double w);

/// V_y(r): the inverse of the decreasing map x -> f(x + y) / f(x), y > 0.
double inverse_ratio(const DensityModel& model, double y, double r);

/// Second differences of log f on a uniform grid, compared against a slack
/// of 1e-10 * step^2. Requires at least 3 grid points.
ConcavityReport check_log_concavity(const DensityModel& model, const num::GridSpec& grid);

/// Integral of f over [F^{-1}(eps), F^{-1}(1 - eps)].
double truncated_mass(const DensityModel& model, double eps);

}  // namespace zonoid

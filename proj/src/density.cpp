#include "zonoid/density.hpp"

#include "zonoid/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace zonoid {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// Standardized logistic density g(z) = e^{-|z|} / (1 + e^{-|z|})^2.
double logistic_g(double z) {
    const double e = std::exp(-std::fabs(z));
    return e / ((1.0 + e) * (1.0 + e));
}

double logistic_log_g(double z) {
    const double a = std::fabs(z);
    return -a - 2.0 * std::log1p(std::exp(-a));
}

double logistic_cdf(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw DomainError(std::string(what) + ": argument must be finite");
}

constexpr double kCertifyEps = 1e-6;
constexpr std::size_t kCertifyPoints = 1001;

}  // namespace

std::string to_string(DensityFamily family) {
    switch (family) {
        case DensityFamily::gaussian: return "gaussian";
        case DensityFamily::logistic: return "logistic";
        case DensityFamily::cauchy: return "cauchy";
        case DensityFamily::custom: return "custom";
    }
    return "unknown";
}

DensityFamily density_family_from_string(const std::string& name) {
    if (name == "gaussian" || name == "normal") return DensityFamily::gaussian;
    if (name == "logistic") return DensityFamily::logistic;
    if (name == "cauchy") return DensityFamily::cauchy;
    throw DomainError("unknown density family '" + name + "'");
}

DensityModel::DensityModel(DensityFamily family, double location, double scale)
    : family_(family), location_(location), scale_(scale) {
    if (!std::isfinite(location) || !std::isfinite(scale) || !(scale > 0.0)) {
        throw DomainError("density: location must be finite and scale positive");
    }
}

DensityModel DensityModel::gaussian(double location, double scale) {
    DensityModel m(DensityFamily::gaussian, location, scale);
    m.log_concave_ = true;
    return m;
}

DensityModel DensityModel::logistic(double location, double scale) {
    DensityModel m(DensityFamily::logistic, location, scale);
    m.log_concave_ = true;
    return m;
}

DensityModel DensityModel::cauchy(double location, double scale) {
    DensityModel m(DensityFamily::cauchy, location, scale);
    m.log_concave_ = false;
    return m;
}

DensityModel DensityModel::custom(CustomDensity impl) {
    if (!impl.pdf || !impl.pdf_derivative || !impl.cdf || !impl.quantile) {
        throw ValidationError("custom density: pdf, pdf_derivative, cdf and quantile are all required");
    }
    const double lo = impl.quantile(1e-12);
    const double hi = impl.quantile(1.0 - 1e-12);
    const double q1 = impl.quantile(0.25);
    const double q3 = impl.quantile(0.75);
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(q3 > q1)) {
        throw ValidationError("custom density: quantile function must be finite and increasing on (0,1)");
    }
    const double spread = q3 - q1;
    for (double x : {lo - 10.0 * spread, lo, q1, q3, hi, hi + 10.0 * spread}) {
        const double f = impl.pdf(x);
        if (!(f > 0.0) || !std::isfinite(f)) {
            throw ValidationError("custom density: must be strictly positive on the whole real line");
        }
    }

    DensityModel m(DensityFamily::custom, 0.0, spread / 2.0);
    m.custom_ = std::make_shared<const CustomDensity>(std::move(impl));
    const num::GridSpec grid{m.custom_->quantile(kCertifyEps), m.custom_->quantile(1.0 - kCertifyEps),
                             kCertifyPoints};
    m.log_concave_ = check_log_concavity(m, grid).is_concave;
    return m;
}

std::string DensityModel::name() const {
    return family_ == DensityFamily::custom ? custom_->name : to_string(family_);
}

double DensityModel::pdf(double x) const {
    const double z = standardize(x);
    switch (family_) {
        case DensityFamily::gaussian: return num::norm_pdf(z) / scale_;
        case DensityFamily::logistic: return logistic_g(z) / scale_;
        case DensityFamily::cauchy: return 1.0 / (kPi * (1.0 + z * z)) / scale_;
        case DensityFamily::custom: return custom_->pdf(x);
    }
    return 0.0;
}

double DensityModel::log_pdf(double x) const {
    const double z = standardize(x);
    const double log_scale = std::log(scale_);
    switch (family_) {
        case DensityFamily::gaussian: return -0.5 * z * z - kLogSqrt2Pi - log_scale;
        case DensityFamily::logistic: return logistic_log_g(z) - log_scale;
        case DensityFamily::cauchy: return -std::log(kPi) - std::log1p(z * z) - log_scale;
        case DensityFamily::custom: return std::log(custom_->pdf(x));
    }
    return 0.0;
}

double DensityModel::log_ratio(double x, double y) const {
    const double z = standardize(x);
    const double u = y / scale_;
    switch (family_) {
        case DensityFamily::gaussian: return -u * (z + 0.5 * u);
        case DensityFamily::logistic: return logistic_log_g(z + u) - logistic_log_g(z);
        case DensityFamily::cauchy: return std::log1p(z * z) - std::log1p((z + u) * (z + u));
        case DensityFamily::custom: return log_pdf(x + y) - log_pdf(x);
    }
    return 0.0;
}

double DensityModel::pdf_derivative(double x) const {
    if (family_ == DensityFamily::custom) return custom_->pdf_derivative(x);
    return pdf(x) * log_slope(x);
}

double DensityModel::cdf(double x) const {
    const double z = standardize(x);
    switch (family_) {
        case DensityFamily::gaussian: return num::norm_cdf(z);
        case DensityFamily::logistic: return logistic_cdf(z);
        case DensityFamily::cauchy: return std::atan2(1.0, -z) / kPi;
        case DensityFamily::custom: return custom_->cdf(x);
    }
    return 0.0;
}

double DensityModel::sf(double x) const {
    const double z = standardize(x);
    switch (family_) {
        case DensityFamily::gaussian: return num::norm_sf(z);
        case DensityFamily::logistic: return logistic_cdf(-z);
        case DensityFamily::cauchy: return std::atan2(1.0, z) / kPi;
        case DensityFamily::custom: return 1.0 - custom_->cdf(x);
    }
    return 0.0;
}

double DensityModel::quantile(double p) const {
    switch (family_) {
        case DensityFamily::gaussian: return location_ + scale_ * num::norm_quantile(p);
        case DensityFamily::logistic: return location_ + scale_ * (std::log(p) - std::log1p(-p));
        case DensityFamily::cauchy: return location_ - scale_ / std::tan(kPi * p);
        case DensityFamily::custom: return custom_->quantile(p);
    }
    return 0.0;
}

double DensityModel::upper_quantile(double q) const {
    switch (family_) {
        case DensityFamily::gaussian: return location_ + scale_ * num::norm_quantile_upper(q);
        case DensityFamily::logistic: return location_ + scale_ * (std::log1p(-q) - std::log(q));
        case DensityFamily::cauchy: return location_ + scale_ / std::tan(kPi * q);
        case DensityFamily::custom: return custom_->quantile(1.0 - q);
    }
    return 0.0;
}

double DensityModel::log_slope(double x) const {
    const double z = standardize(x);
    switch (family_) {
        case DensityFamily::gaussian: return -z / scale_;
        case DensityFamily::logistic: return -std::tanh(0.5 * z) / scale_;
        case DensityFamily::cauchy: return -2.0 * z / (1.0 + z * z) / scale_;
        case DensityFamily::custom: return custom_->pdf_derivative(x) / custom_->pdf(x);
    }
    return 0.0;
}

double DensityModel::log_curvature(double x) const {
    const double z = standardize(x);
    const double s2 = scale_ * scale_;
    switch (family_) {
        case DensityFamily::gaussian: return -1.0 / s2;
        case DensityFamily::logistic: return -2.0 * logistic_g(z) / s2;
        case DensityFamily::cauchy: {
            const double d = 1.0 + z * z;
            return -2.0 * (1.0 - z * z) / (d * d) / s2;
        }
        case DensityFamily::custom: {
            const double h = 1e-5 * scale_;
            return (log_slope(x + h) - log_slope(x - h)) / (2.0 * h);
        }
    }
    return 0.0;
}

std::optional<std::pair<double, double>> DensityModel::log_slope_range() const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (family_) {
        case DensityFamily::gaussian: return std::pair{-inf, inf};
        case DensityFamily::logistic: return std::pair{-1.0 / scale_, 1.0 / scale_};
        default: return std::nullopt;
    }
}

std::optional<std::pair<double, double>> DensityModel::ratio_range(double y) const {
    switch (family_) {
        case DensityFamily::gaussian: return std::pair{0.0, std::numeric_limits<double>::infinity()};
        case DensityFamily::logistic: return std::pair{std::exp(-y / scale_), std::exp(y / scale_)};
        default: return std::nullopt;
    }
}

double eval_density(const DensityModel& model, double x) {
    require_finite(x, "eval_density");
    return model.pdf(x);
}

double eval_quantile(const DensityModel& model, double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("eval_quantile: p must lie in (0,1)");
    return model.quantile(p);
}

namespace {

constexpr double kBracketLimit = 1e12;
constexpr double kRootTol = 1e-13;

}  // namespace

double inverse_log_slope(const DensityModel& model, double w) {
    require_finite(w, "inverse_log_slope");
    if (!model.log_concave()) {
        throw UnsupportedError("inverse_log_slope: density '" + model.name() + "' is not log-concave");
    }
    if (const auto range = model.log_slope_range(); range && !(w > range->first && w < range->second)) {
        throw RangeError("inverse_log_slope: w outside the range of (log f)'");
    }
    const num::Fn g = [&](double x) { return model.log_slope(x) - w; };
    const auto bracket = num::expand_bracket(g, model.location(), model.scale(), kBracketLimit * model.scale());
    if (!bracket) throw RangeError("inverse_log_slope: w outside the range of (log f)'");
    const double xtol = kRootTol * model.scale();
    if (model.family() == DensityFamily::custom) return num::solve_monotone(g, nullptr, *bracket, xtol);
    const num::Fn dg = [&](double x) { return model.log_curvature(x); };
    return num::solve_monotone(g, &dg, *bracket, xtol);
}

double inverse_ratio(const DensityModel& model, double y, double r) {
    require_finite(y, "inverse_ratio");
    require_finite(r, "inverse_ratio");
    if (!model.log_concave()) {
        throw UnsupportedError("inverse_ratio: density '" + model.name() + "' is not log-concave");
    }
    if (!(y > 0.0)) throw DomainError("inverse_ratio: y must be positive");
    if (!(r > 0.0)) throw RangeError("inverse_ratio: r must be positive");
    if (const auto range = model.ratio_range(y); range && !(r > range->first && r < range->second)) {
        throw RangeError("inverse_ratio: r outside the range of f(.+y)/f");
    }
    const double log_r = std::log(r);
    const num::Fn g = [&](double x) { return model.log_ratio(x, y) - log_r; };
    const auto bracket = num::expand_bracket(g, model.location(), model.scale(), kBracketLimit * model.scale());
    if (!bracket) throw RangeError("inverse_ratio: r outside the range of f(.+y)/f");
    const num::Fn dg = [&](double x) { return model.log_slope(x + y) - model.log_slope(x); };
    return num::solve_monotone(g, &dg, *bracket, kRootTol * model.scale());
}

ConcavityReport check_log_concavity(const DensityModel& model, const num::GridSpec& grid) {
    if (grid.points < 3) throw DomainError("check_log_concavity: grid needs at least 3 points");
    const auto xs = grid.values();
    std::vector<double> logs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) logs[i] = model.log_pdf(xs[i]);

    const double step = (grid.hi - grid.lo) / static_cast<double>(grid.points - 1);
    const double slack = 1e-10 * step * step;

    ConcavityReport report;
    double worst = -std::numeric_limits<double>::infinity();
    std::size_t worst_index = 1;
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
        const double d2 = logs[i + 1] - 2.0 * logs[i] + logs[i - 1];
        if (d2 > worst) {
            worst = d2;
            worst_index = i;
        }
    }
    report.max_violation = std::max(worst, 0.0);
    if (worst > slack) {
        report.is_concave = false;
        report.witness = std::array{xs[worst_index - 1], xs[worst_index], xs[worst_index + 1]};
        report.witness_second_difference = worst;
    }
    return report;
}

double truncated_mass(const DensityModel& model, double eps) {
    if (!(eps > 0.0 && eps < 0.5)) throw DomainError("truncated_mass: eps must lie in (0, 1/2)");
    // Breakpoints at decade quantiles keep each piece on its own length scale,
    // which matters for heavy tails.
    std::vector<double> breaks{model.quantile(eps)};
    for (double q = 1e-1; q > eps * 10.0; q /= 10.0) {
        breaks.insert(breaks.begin() + 1, model.quantile(q));
    }
    for (double p : {0.25, 0.5, 0.75}) breaks.push_back(model.quantile(p));
    for (double q = 1e-1; q > eps * 10.0; q /= 10.0) breaks.push_back(model.upper_quantile(q));
    breaks.push_back(model.upper_quantile(eps));

    const num::Fn f = [&](double x) { return model.pdf(x); };
    double total = 0.0;
    for (std::size_t i = 1; i < breaks.size(); ++i) total += num::integrate(f, breaks[i - 1], breaks[i], 1e-14);
    return total;
}

}  // namespace zonoid

#include "zonoid/pricing.hpp"

#include "zonoid/errors.hpp"
#include "zonoid/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace zonoid {

namespace {

constexpr double kTailProb = 1e-9;

void require_log_concave(const DensityModel& density, const char* what) {
    if (!density.log_concave()) {
        throw UnsupportedError(std::string(what) + ": density '" + density.name() + "' is not log-concave");
    }
}

}  // namespace

std::string to_string(ModelKind model) {
    return model == ModelKind::bachelier ? "bachelier" : "black_scholes";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "bachelier") return ModelKind::bachelier;
    if (name == "black_scholes" || name == "black-scholes") return ModelKind::black_scholes;
    throw DomainError("unknown model '" + name + "'");
}

double ModelParams::total_vol() const { return sigma * std::sqrt(t); }

void ModelParams::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("model: sigma must be positive");
    if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("model: t must be non-negative");
    if (!std::isfinite(S0)) throw ValidationError("model: S0 must be finite");
    if (model == ModelKind::black_scholes && !(S0 > 0.0)) {
        throw ValidationError("model: Black-Scholes needs S0 > 0");
    }
}

double bachelier_call(const ModelParams& params, double strike) {
    params.validate();
    const double y = params.total_vol();
    const double moneyness = params.S0 - strike;
    if (y == 0.0) return std::max(moneyness, 0.0);
    const double d = moneyness / y;
    return y * num::norm_pdf(d) + moneyness * num::norm_cdf(d);
}

double bachelier_survival(const ModelParams& params, double strike) {
    params.validate();
    const double y = params.total_vol();
    if (y == 0.0) return params.S0 >= strike ? 1.0 : 0.0;
    return num::norm_cdf((params.S0 - strike) / y);
}

double black_scholes_call(const ModelParams& params, double strike) {
    params.validate();
    if (!(strike > 0.0)) throw DomainError("black_scholes_call: strike must be positive");
    const double y = params.total_vol();
    if (y == 0.0) return std::max(params.S0 - strike, 0.0);
    const double d1 = std::log(params.S0 / strike) / y + 0.5 * y;
    const double d2 = d1 - y;
    return params.S0 * num::norm_cdf(d1) - strike * num::norm_cdf(d2);
}

double black_scholes_survival(const ModelParams& params, double strike) {
    params.validate();
    if (!(strike > 0.0)) throw DomainError("black_scholes_survival: strike must be positive");
    const double y = params.total_vol();
    if (y == 0.0) return params.S0 >= strike ? 1.0 : 0.0;
    return num::norm_cdf(std::log(params.S0 / strike) / y - 0.5 * y);
}

// The maximiser of G(p) - p w sits at p = F(U(w)); for the geometric family
// H_y(p) - p r is maximised at p = F(V_y(r)). When the inverse map has no
// solution the maximum is at p = 0 or p = 1.

FamilyValue family_call_linear(const DensityModel& density, double s, double yval, double strike) {
    require_log_concave(density, "family_call_linear");
    if (!(yval > 0.0)) throw DomainError("family_call_linear: Y must be positive");
    const double w = (strike - s) / yval;
    try {
        const double u = inverse_log_slope(density, w);
        // f(U) - F(U) w, switching to the survival form right of the location.
        const double unit = u <= density.location() ? density.pdf(u) - density.cdf(u) * w
                                                    : density.pdf(u) - w + density.sf(u) * w;
        return {yval * unit, false};
    } catch (const RangeError&) {
        const bool above = w > density.log_slope(density.location());
        return {above ? 0.0 : s - strike, true};
    }
}

FamilyValue family_call_geometric(const DensityModel& density, double s, double y, double strike) {
    require_log_concave(density, "family_call_geometric");
    if (!(s > 0.0) || !(y > 0.0) || !(strike > 0.0)) {
        throw DomainError("family_call_geometric: s, y and K must be positive");
    }
    const double r = strike / s;
    try {
        const double v = inverse_ratio(density, y, r);
        const double unit = v + y <= density.location()
                                ? density.cdf(v + y) - density.cdf(v) * r
                                : (1.0 - r) - density.sf(v + y) + density.sf(v) * r;
        return {s * unit, false};
    } catch (const RangeError&) {
        const bool above = std::log(r) > density.log_ratio(density.location(), y);
        return {above ? 0.0 : s - strike, true};
    }
}

FamilyValue survival_linear(const DensityModel& density, double s, double yval, double strike) {
    require_log_concave(density, "survival_linear");
    if (!(yval > 0.0)) throw DomainError("survival_linear: Y must be positive");
    const double w = (strike - s) / yval;
    try {
        return {density.cdf(inverse_log_slope(density, w)), false};
    } catch (const RangeError&) {
        return {w > density.log_slope(density.location()) ? 0.0 : 1.0, true};
    }
}

FamilyValue survival_geometric(const DensityModel& density, double s, double y, double strike) {
    require_log_concave(density, "survival_geometric");
    if (!(s > 0.0) || !(y > 0.0) || !(strike > 0.0)) {
        throw DomainError("survival_geometric: s, y and K must be positive");
    }
    const double r = strike / s;
    try {
        return {density.cdf(inverse_ratio(density, y, r)), false};
    } catch (const RangeError&) {
        return {std::log(r) > density.log_ratio(density.location(), y) ? 0.0 : 1.0, true};
    }
}

CallCurve model_call_curve(const ModelParams& params) {
    params.validate();
    const double y = params.total_vol();
    const double z = -num::norm_quantile(kTailProb);
    if (params.model == ModelKind::bachelier) {
        const Interval dom = y > 0.0 ? Interval{params.S0 - z * y, params.S0 + z * y}
                                     : Interval{params.S0 - 1.0, params.S0 + 1.0};
        return CallCurve::closed_form([params](double k) { return bachelier_call(params, k); }, params.S0, dom);
    }
    const double lo = y > 0.0 ? params.S0 * std::exp(-0.5 * y * y - z * y) : 0.5 * params.S0;
    // The call tail sits under the share measure, y^2 further out.
    const double hi = y > 0.0 ? params.S0 * std::exp(0.5 * y * y + z * y) : 2.0 * params.S0;
    auto curve = CallCurve::closed_form([params](double k) { return black_scholes_call(params, k); }, params.S0,
                                        Interval{lo, hi});
    curve.certify_positive();
    return curve;
}

CallCurve family_call_curve(const PeacockSpec& spec, double t) {
    require_log_concave(spec.density, "family_call_curve");
    const double y = spec.time_change(t);
    const double s = spec.s;
    if (y < 0.0) throw UnsupportedError("family_call_curve: negative Y(t)");
    const auto& f = spec.density;
    const double x_lo = f.quantile(kTailProb);
    const double x_hi = f.upper_quantile(kTailProb);

    if (spec.family == PeacockFamily::linear) {
        if (y == 0.0) {
            return CallCurve::closed_form([s](double k) { return std::max(s - k, 0.0); }, s, {s - 1.0, s + 1.0});
        }
        const Interval dom{s + y * f.log_slope(x_hi), s + y * f.log_slope(x_lo)};
        return CallCurve::closed_form([f, s, y](double k) { return family_call_linear(f, s, y, k).value; }, s, dom);
    }

    if (!(s > 0.0)) throw DomainError("family_call_curve: geometric family needs s > 0");
    if (y == 0.0) {
        auto curve = CallCurve::closed_form([s](double k) { return std::max(s - k, 0.0); }, s, {0.5 * s, 2.0 * s});
        curve.certify_positive();
        return curve;
    }
    // Top strike where F(V + y) reaches the tail probability, so the call has vanished there.
    const Interval dom{s * std::exp(f.log_ratio(x_hi, y)), s * std::exp(f.log_ratio(x_lo - y, y))};
    auto curve = CallCurve::closed_form([f, s, y](double k) { return family_call_geometric(f, s, y, k).value; }, s, dom);
    curve.certify_positive();
    return curve;
}

SurfaceGrid call_surface(const PeacockSpec& spec, std::span<const double> times, std::span<const double> strikes) {
    SurfaceGrid grid;
    grid.axis = SurfaceGrid::Axis::call_space;
    grid.times.assign(times.begin(), times.end());
    grid.second_axis.assign(strikes.begin(), strikes.end());
    grid.values.resize(times.size() * strikes.size());
    for (std::size_t a = 0; a < times.size(); ++a) {
        const auto curve = family_call_curve(spec, times[a]);
        for (std::size_t i = 0; i < strikes.size(); ++i) grid.at(a, i) = curve(strikes[i]);
    }
    grid.validate();
    return grid;
}

}  // namespace zonoid

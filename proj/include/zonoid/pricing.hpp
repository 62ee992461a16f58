#pragma once

#include "zonoid/density.hpp"
#include "zonoid/duality.hpp"
#include "zonoid/peacock.hpp"

#include <span>
#include <string>

namespace zonoid {

enum class ModelKind { bachelier, black_scholes };

std::string to_string(ModelKind model);
ModelKind model_kind_from_string(const std::string& name);

struct ModelParams {
    ModelKind model = ModelKind::bachelier;
    double S0 = 0.0;
    double sigma = 1.0;
    double t = 1.0;

    /// sigma * sqrt(t), the total volatility y.
    double total_vol() const;
    void validate() const;
};

/// sigma sqrt(t) phi(d) + (S0 - K) Phi(d), d = (S0 - K) / (sigma sqrt(t)).
double bachelier_call(const ModelParams& params, double strike);
double bachelier_survival(const ModelParams& params, double strike);

/// S0 Phi(d+) - K Phi(d-), d+- = log(S0/K) / y +- y/2 with y = sigma sqrt(t).
/// Throws DomainError for K <= 0.
double black_scholes_call(const ModelParams& params, double strike);
double black_scholes_survival(const ModelParams& params, double strike);

/// Result of a family formula. `clamped` is set when the strike falls outside
/// the range of the inverse map, in which case `value` is the limit value
/// (0 or s - K for calls, 0 or 1 for survival).
struct FamilyValue {
    double value = 0.0;
    bool clamped = false;
};

/// Call for C-hat(p) = s p + Yval G(p):
/// Yval [f(U(w)) - F(U(w)) w], w = (K - s) / Yval.
FamilyValue family_call_linear(const DensityModel& density, double s, double yval, double strike);

/// Call for C-hat(p) = s H_y(p): s [F(V_y(r) + y) - F(V_y(r)) r], r = K / s.
FamilyValue family_call_geometric(const DensityModel& density, double s, double y, double strike);

/// P(X >= K) = F(U((K - s) / Yval)).
FamilyValue survival_linear(const DensityModel& density, double s, double yval, double strike);
/// P(X >= K) = F(V_y(K / s)).
FamilyValue survival_geometric(const DensityModel& density, double s, double y, double strike);

/// Closed-form curve with a strike domain covering the [1e-9, 1 - 1e-9]
/// quantile range of the law.
CallCurve model_call_curve(const ModelParams& params);
CallCurve family_call_curve(const PeacockSpec& spec, double t);

/// Call-space surface C(t, K) of a peacock family.
SurfaceGrid call_surface(const PeacockSpec& spec, std::span<const double> times, std::span<const double> strikes);

}  // namespace zonoid

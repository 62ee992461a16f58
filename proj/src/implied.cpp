#include "zonoid/implied.hpp"

#include "zonoid/errors.hpp"
#include "zonoid/numerics.hpp"
#include "zonoid/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace zonoid {

void ImpliedQuery::validate() const {
    if (!(K > 0.0) || !std::isfinite(K)) throw DomainError("implied: strike must be positive");
    const double floor = std::max(1.0 - K, 0.0);
    if (!(c >= floor && c < 1.0)) throw DomainError("implied: price must lie in [(1-K)^+, 1)");
    if (!density.log_concave()) throw UnsupportedError("implied: density is not log-concave");
}

double normalized_call(const DensityModel& density, double y, double strike) {
    if (!(y >= 0.0)) throw DomainError("normalized_call: y must be non-negative");
    if (!(strike > 0.0)) throw DomainError("normalized_call: strike must be positive");
    if (y == 0.0) return std::max(1.0 - strike, 0.0);
    return family_call_geometric(density, 1.0, y, strike).value;
}

double vega_integral(const DensityModel& density, double y, double strike) {
    if (!(y >= 0.0)) throw DomainError("vega_integral: y must be non-negative");
    if (!(strike > 0.0)) throw DomainError("vega_integral: strike must be positive");
    if (!density.log_concave()) throw UnsupportedError("vega_integral: density is not log-concave");
    if (y == 0.0) return 0.0;

    // Where the ratio range is known, start at the first u whose range
    // contains K; below it the integrand vanishes identically.
    double start = 0.0;
    if (density.family() == DensityFamily::logistic) {
        start = std::min(density.scale() * std::fabs(std::log(strike)), y);
    }
    const num::Fn integrand = [&](double u) {
        if (!(u > 0.0)) return 0.0;
        if (const auto range = density.ratio_range(u); range && !(strike > range->first && strike < range->second)) {
            return 0.0;
        }
        try {
            const double v = inverse_ratio(density, u, strike);
            return density.pdf(v + u);
        } catch (const RangeError&) {
            return 0.0;
        }
    };
    return num::integrate(integrand, start, y, 1e-12);
}

double implied_y_root(const ImpliedQuery& query) {
    query.validate();
    const double floor = std::max(1.0 - query.K, 0.0);
    if (query.c - floor < 1e-14) return 0.0;

    const auto price = [&](double y) { return normalized_call(query.density, y, query.K); };
    double lo = 0.0;
    double hi = 1.0;
    while (price(hi) < query.c) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw DomainError("implied_y_root: price too close to 1");
    }
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (price(mid) < query.c) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

bool unimodal(const std::vector<double>& values, std::size_t argmin) {
    const double tol = 1e-12 * std::max(1.0, std::fabs(values[argmin]));
    for (std::size_t i = 1; i <= argmin; ++i) {
        if (values[i] > values[i - 1] + tol) return false;
    }
    for (std::size_t i = argmin + 1; i < values.size(); ++i) {
        if (values[i] < values[i - 1] - tol) return false;
    }
    return true;
}

struct Scan {
    std::vector<double> ps;
    std::vector<double> values;
    std::size_t argmin = 0;
};

Scan scan(const num::Fn& fn, double lo, double hi, std::size_t points) {
    Scan s;
    s.ps = num::linspace(lo, hi, points);
    s.values.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
        s.values[i] = fn(s.ps[i]);
        if (s.values[i] < s.values[s.argmin]) s.argmin = i;
    }
    return s;
}

}  // namespace

ImpliedMinimum implied_y_minimization(const ImpliedQuery& query) {
    query.validate();
    const double floor = std::max(1.0 - query.K, 0.0);
    const double c = query.c;
    const double K = query.K;
    const auto& f = query.density;
    if (c - floor < 1e-14) {
        // y* = 0; any p with c + pK in (0,1) attains it in the limit.
        return {0.0, K < 1.0 ? 1.0 : 0.0, false};
    }

    constexpr double kEdge = 1e-9;
    const double lo = kEdge;
    const double hi = std::min((1.0 - c) / K, 1.0) - kEdge;
    if (!(hi > lo)) throw DomainError("implied_y_minimization: empty feasible range");
    const num::Fn objective = [&](double p) {
        const double upper_tail = (1.0 - c) - p * K;
        const double top = upper_tail < 0.5 ? f.upper_quantile(upper_tail) : f.quantile(c + p * K);
        return top - f.quantile(p);
    };

    ImpliedMinimum result{0.0, 0.0, false};
    Scan coarse = scan(objective, lo, hi, 65);
    if (!unimodal(coarse.values, coarse.argmin)) {
        coarse = scan(objective, lo, hi, 10000);
        result.used_fallback_scan = true;
    }
    const std::size_t i = coarse.argmin;
    const double a = coarse.ps[i == 0 ? 0 : i - 1];
    const double b = coarse.ps[std::min(i + 1, coarse.ps.size() - 1)];
    const auto best = num::minimize_unimodal(objective, a, b, 1e-15);
    result.y = best.value;
    result.p_hat = best.x;
    return result;
}

}  // namespace zonoid

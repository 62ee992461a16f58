#include "zonoid/duality.hpp"

#include "zonoid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace zonoid {

namespace {

constexpr double kShapeSlack = 1e-9;

double value_range(std::span<const double> values) {
    if (values.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *hi - *lo;
}

double interpolate(std::span<const double> xs, std::span<const double> ys, double x) {
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - xs.begin(), 1, xs.size() - 1));
    const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + t * (ys[i] - ys[i - 1]);
}

std::vector<double> with_unit_endpoints(std::span<const double> pgrid) {
    std::vector<double> ps(pgrid.begin(), pgrid.end());
    if (!num::strictly_increasing(ps)) throw DomainError("probability grid must be strictly increasing");
    if (ps.empty() || ps.front() < 0.0 || ps.back() > 1.0) throw DomainError("probability grid must lie in [0,1]");
    if (ps.front() > 0.0) ps.insert(ps.begin(), 0.0);
    if (ps.back() < 1.0) ps.push_back(1.0);
    return ps;
}

void check_shape(std::span<const double> xs, std::span<const double> ys, bool decreasing_convex,
                 const char* what) {
    const double slack = kShapeSlack * std::max(value_range(ys), std::numeric_limits<double>::min());
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (decreasing_convex && ys[i] > ys[i - 1] + slack) {
            throw ValidationError(std::string(what) + ": values increase between grid points");
        }
    }
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
        const double left = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
        const double right = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        // Compare slope change over the local cell against the value slack.
        const double bend = (right - left) * std::min(xs[i] - xs[i - 1], xs[i + 1] - xs[i]);
        if (decreasing_convex ? bend < -slack : bend > slack) {
            throw ValidationError(std::string(what) + (decreasing_convex ? ": not convex" : ": not concave"));
        }
    }
}

}  // namespace

// DiscreteDistribution

DiscreteDistribution::DiscreteDistribution(std::vector<double> atoms, std::vector<double> weights) {
    if (atoms.empty() || atoms.size() != weights.size()) {
        throw ValidationError("discrete distribution: atoms and weights must be non-empty and equal length");
    }
    std::vector<std::size_t> order(atoms.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });
    atoms_.reserve(atoms.size());
    weights_.reserve(atoms.size());
    for (std::size_t i : order) {
        if (!std::isfinite(atoms[i]) || !(weights[i] > 0.0)) {
            throw ValidationError("discrete distribution: atoms must be finite and weights positive");
        }
        atoms_.push_back(atoms[i]);
        weights_.push_back(weights[i]);
    }
    if (!num::strictly_increasing(atoms_)) throw ValidationError("discrete distribution: duplicate atoms");
    const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    if (std::fabs(total - 1.0) > 1e-12) throw ValidationError("discrete distribution: weights must sum to 1");
}

DiscreteDistribution DiscreteDistribution::uniform(std::vector<double> atoms) {
    const std::size_t n = atoms.size();
    return DiscreteDistribution(std::move(atoms), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double DiscreteDistribution::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) m += weights_[i] * atoms_[i];
    return m;
}

// CallCurve

CallCurve CallCurve::closed_form(std::function<double(double)> fn, double mean, Interval strike_domain) {
    if (!fn) throw ValidationError("call curve: empty callable");
    if (!(strike_domain.lo < strike_domain.hi)) throw ValidationError("call curve: empty strike domain");
    CallCurve c;
    c.fn_ = std::move(fn);
    c.mean_ = mean;
    c.domain_ = strike_domain;
    return c;
}

CallCurve CallCurve::from_grid(std::vector<double> strikes, std::vector<double> values, double mean) {
    if (strikes.size() < 2 || strikes.size() != values.size()) {
        throw ValidationError("call curve: need at least 2 strikes with one value each");
    }
    if (!num::strictly_increasing(strikes)) throw ValidationError("call curve: strikes must be strictly increasing");
    CallCurve c;
    c.domain_ = {strikes.front(), strikes.back()};
    c.strikes_ = std::move(strikes);
    c.values_ = std::move(values);
    c.mean_ = mean;
    return c;
}

CallCurve CallCurve::from_distribution(const DiscreteDistribution& dist) {
    const auto atoms = dist.atoms();
    const auto weights = dist.weights();
    std::vector<double> strikes(atoms.begin(), atoms.end());
    std::vector<double> values(atoms.size());
    // C(x_i) = sum_{j > i} w_j (x_j - x_i), accumulated from the right.
    double mass_above = 0.0;
    double first_moment_above = 0.0;
    for (std::size_t i = atoms.size(); i-- > 0;) {
        values[i] = first_moment_above - mass_above * atoms[i];
        mass_above += weights[i];
        first_moment_above += weights[i] * atoms[i];
    }
    if (strikes.size() == 1) {
        // Degenerate law: add a second vertex so the grid is well formed.
        strikes.push_back(strikes.front() + 1.0);
        values.push_back(0.0);
    }
    auto curve = from_grid(std::move(strikes), std::move(values), dist.mean());
    if (atoms.front() > 0.0) curve.positive_ = true;
    return curve;
}

double CallCurve::operator()(double strike) const {
    if (fn_) return fn_(strike);
    if (strike <= strikes_.front()) return values_.front() + (strikes_.front() - strike);
    if (strike >= strikes_.back()) return values_.back();
    return interpolate(strikes_, values_, strike);
}

CallCurve& CallCurve::certify_positive() {
    if (fn_) {
        if (domain_.lo < 0.0) throw UnsupportedError("call curve: strike domain extends below 0");
        positive_ = true;
        return *this;
    }
    // No mass below the first strike, and C(K) + K = m at every grid strike
    // K <= 0 as well.
    const double tol = 1e-12 * std::max(1.0, std::fabs(mean_));
    for (std::size_t i = 0; i < strikes_.size() && (i == 0 || strikes_[i] <= 0.0); ++i) {
        if (std::fabs(values_[i] + strikes_[i] - mean_) > tol) {
            throw UnsupportedError("call curve: C(K) + K != m at a strike that must carry no mass below it");
        }
    }
    positive_ = true;
    return *this;
}

void CallCurve::validate(double endpoint_tol) const {
    std::vector<double> ks;
    std::vector<double> cs;
    if (fn_) {
        ks = num::linspace(domain_.lo, domain_.hi, 1001);
        cs.resize(ks.size());
        for (std::size_t i = 0; i < ks.size(); ++i) cs[i] = fn_(ks[i]);
    } else {
        ks = strikes_;
        cs = values_;
    }
    for (double c : cs) {
        if (!std::isfinite(c) || c < -endpoint_tol) throw ValidationError("call curve: values must be finite and >= 0");
    }
    check_shape(ks, cs, true, "call curve");
    const double scale = std::max(1.0, std::fabs(mean_));
    if (cs.back() > endpoint_tol * scale) throw ValidationError("call curve: C(K) does not vanish at the top strike");
    if (std::fabs(cs.front() + ks.front() - mean_) > endpoint_tol * scale) {
        throw ValidationError("call curve: C(K) + K does not reach the mean at the bottom strike");
    }
}

// ZonoidBoundary

ZonoidBoundary ZonoidBoundary::closed_form(std::function<double(double)> fn, double mean) {
    if (!fn) throw ValidationError("zonoid boundary: empty callable");
    ZonoidBoundary b;
    b.fn_ = std::move(fn);
    b.mean_ = mean;
    return b;
}

ZonoidBoundary ZonoidBoundary::from_grid(std::vector<double> probs, std::vector<double> values, double mean) {
    if (probs.size() < 2 || probs.size() != values.size()) {
        throw ValidationError("zonoid boundary: need at least 2 grid points with one value each");
    }
    if (!num::strictly_increasing(probs) || probs.front() != 0.0 || probs.back() != 1.0) {
        throw ValidationError("zonoid boundary: grid must increase strictly from 0 to 1");
    }
    values.front() = 0.0;
    values.back() = mean;
    ZonoidBoundary b;
    b.probs_ = std::move(probs);
    b.values_ = std::move(values);
    b.mean_ = mean;
    return b;
}

double ZonoidBoundary::operator()(double p) const {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return mean_;
    if (fn_) return fn_(p);
    return interpolate(probs_, values_, p);
}

void ZonoidBoundary::validate() const {
    std::vector<double> ps;
    std::vector<double> vs;
    if (fn_) {
        ps = num::linspace(0.0, 1.0, 1001);
        vs.resize(ps.size());
        for (std::size_t i = 0; i < ps.size(); ++i) vs[i] = (*this)(ps[i]);
    } else {
        ps = probs_;
        vs = values_;
    }
    for (double v : vs) {
        if (!std::isfinite(v)) throw ValidationError("zonoid boundary: values must be finite");
    }
    check_shape(ps, vs, false, "zonoid boundary");
}

// Transforms

ZonoidBoundary upper_boundary_from_calls(const CallCurve& curve, std::span<const double> pgrid) {
    curve.validate();
    auto ps = with_unit_endpoints(pgrid);
    std::vector<double> out(ps.size());
    const auto ks = curve.strikes();
    const auto cs = curve.values();
    for (std::size_t j = 1; j + 1 < ps.size(); ++j) {
        const double p = ps[j];
        if (curve.is_grid()) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < ks.size(); ++i) {
                const double v = cs[i] + p * ks[i];
                if (v < best) best = v;
            }
            out[j] = best;
        } else {
            const auto dom = curve.strike_domain();
            out[j] = num::minimize_unimodal([&](double k) { return curve(k) + p * k; }, dom.lo, dom.hi).value;
        }
    }
    return ZonoidBoundary::from_grid(std::move(ps), std::move(out), curve.mean());
}

CallCurve calls_from_upper_boundary(const ZonoidBoundary& boundary, std::span<const double> strikes) {
    boundary.validate();
    std::vector<double> ks(strikes.begin(), strikes.end());
    if (ks.size() < 2 || !num::strictly_increasing(ks)) {
        throw DomainError("calls_from_upper_boundary: strikes must be strictly increasing, at least 2");
    }
    std::vector<double> cs(ks.size());
    const double m = boundary.mean();
    const auto ps = boundary.probs();
    const auto vs = boundary.values();
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const double k = ks[i];
        if (boundary.is_grid()) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < ps.size(); ++j) best = std::max(best, vs[j] - ps[j] * k);
            cs[i] = best;
        } else {
            const auto mn = num::minimize_unimodal([&](double p) { return -(boundary(p) - p * k); }, 0.0, 1.0);
            cs[i] = std::max({-mn.value, 0.0, m - k});
        }
    }
    return CallCurve::from_grid(std::move(ks), std::move(cs), m);
}

double boundary_from_quantile_integral(const DiscreteDistribution& dist, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("boundary_from_quantile_integral: p must lie in [0,1]");
    // The upper quantile of Theta is x_j on (c_{j-1}, c_j], where c_j is the
    // mass of the atoms >= x_j.
    const auto atoms = dist.atoms();
    const auto weights = dist.weights();
    double integral = 0.0;
    double covered = 0.0;
    for (std::size_t j = atoms.size(); j-- > 0 && covered < p;) {
        const double upper = std::min(covered + weights[j], p);
        integral += (upper - covered) * atoms[j];
        covered = upper;
    }
    return integral;
}

double boundary_from_quantile_integral(const DensityModel& density, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("boundary_from_quantile_integral: p must lie in [0,1]");
    if (p == 0.0) return 0.0;
    const bool full = p == 1.0;
    return num::integrate_singular(
        [&](double phi, double xc) {
            if (xc <= 0.0) return density.upper_quantile(-xc);
            if (full) return density.quantile(xc);
            return density.upper_quantile(phi);
        },
        0.0, p, 1e-14);
}

double inverse_boundary_positive(const CallCurve& curve, double q) {
    if (!curve.positive()) throw UnsupportedError("inverse_boundary_positive: positivity not certified");
    const double m = curve.mean();
    if (!(q > 0.0 && q < m)) throw DomainError("inverse_boundary_positive: q must lie in (0, m)");
    if (curve.is_grid()) {
        double best = -std::numeric_limits<double>::infinity();
        const auto ks = curve.strikes();
        const auto cs = curve.values();
        for (std::size_t i = 0; i < ks.size(); ++i) {
            if (ks[i] > 0.0) best = std::max(best, (q - cs[i]) / ks[i]);
        }
        return std::clamp(best, 0.0, 1.0);
    }
    // k -> k C(1/k) - q k is convex in k = 1/K (perspective of a convex map).
    const auto dom = curve.strike_domain();
    const double k_lo = 1.0 / dom.hi;
    const double k_hi = dom.lo > 0.0 ? 1.0 / dom.lo : 1e12;
    const auto mn = num::minimize_unimodal([&](double k) { return k * curve(1.0 / k) - q * k; }, k_lo, k_hi, 1e-14);
    return std::clamp(-mn.value, 0.0, 1.0);
}

double discrete_upper_boundary(const DiscreteDistribution& dist, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("discrete_upper_boundary: p must lie in [0,1]");
    if (p == 0.0) return 0.0;
    const auto atoms = dist.atoms();
    const auto weights = dist.weights();
    // Threshold atom: the largest index t with P(X >= x_t) >= p.
    double tail_strict = 0.0;
    double value_strict = 0.0;
    for (std::size_t t = atoms.size(); t-- > 0;) {
        const double tail_weak = tail_strict + weights[t];
        if (tail_weak >= p || t == 0) {
            // g = 1 above x_t, g = lambda on x_t, with P(X > x_t) + lambda w_t = p.
            const double lambda = std::clamp((p - tail_strict) / weights[t], 0.0, 1.0);
            return value_strict + lambda * weights[t] * atoms[t];
        }
        tail_strict = tail_weak;
        value_strict += weights[t] * atoms[t];
    }
    return value_strict;
}

// Order and symmetry checks

bool check_convex_order(const CallCurve& x, const CallCurve& y, std::span<const double> strikes) {
    if (std::fabs(x.mean() - y.mean()) > 1e-10) throw DomainError("check_convex_order: means differ");
    double scale = 1.0;
    for (double k : strikes) scale = std::max({scale, std::fabs(x(k)), std::fabs(y(k))});
    const double slack = 1e-12 * scale;
    return std::all_of(strikes.begin(), strikes.end(), [&](double k) { return x(k) <= y(k) + slack; });
}

bool check_convex_order(const CallCurve& x, const CallCurve& y) {
    std::vector<double> ks;
    if (x.is_grid() || y.is_grid()) {
        ks.insert(ks.end(), x.strikes().begin(), x.strikes().end());
        ks.insert(ks.end(), y.strikes().begin(), y.strikes().end());
        std::sort(ks.begin(), ks.end());
        ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    } else {
        ks = num::linspace(std::min(x.strike_domain().lo, y.strike_domain().lo),
                           std::max(x.strike_domain().hi, y.strike_domain().hi), 1001);
    }
    return check_convex_order(x, y, ks);
}

bool check_arithmetic_symmetry(const CallCurve& curve, std::span<const double> strikes, double tol) {
    const std::size_t n = strikes.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (std::fabs(strikes[i] + strikes[n - 1 - i]) > 1e-12 * std::max(1.0, std::fabs(strikes[i]))) {
            throw DomainError("check_arithmetic_symmetry: strike grid is not symmetric about 0");
        }
    }
    return std::all_of(strikes.begin(), strikes.end(), [&](double k) {
        return std::fabs(curve(k) - (-k + curve(-k))) <= tol * std::max(1.0, std::fabs(curve(k)));
    });
}

bool check_arithmetic_symmetry(const CallCurve& curve, double tol) {
    std::vector<double> ks;
    if (curve.is_grid()) {
        for (double k : curve.strikes()) {
            ks.push_back(k);
            ks.push_back(-k);
        }
        std::sort(ks.begin(), ks.end());
        ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    } else {
        const auto dom = curve.strike_domain();
        const double half = std::min(std::fabs(dom.lo), std::fabs(dom.hi));
        ks = num::linspace(-half, half, 1001);
    }
    return check_arithmetic_symmetry(curve, ks, tol);
}

bool check_geometric_symmetry(const CallCurve& curve, std::span<const double> strikes, double tol) {
    if (std::fabs(curve.mean() - 1.0) > 1e-10) throw DomainError("check_geometric_symmetry: mean must be 1");
    for (double k : strikes) {
        if (!(k > 0.0)) throw DomainError("check_geometric_symmetry: strikes must be positive");
    }
    return std::all_of(strikes.begin(), strikes.end(), [&](double k) {
        const double lhs = curve(k);
        const double rhs = 1.0 - k + k * curve(1.0 / k);
        return std::fabs(lhs - rhs) <= tol * std::max(1.0, k);
    });
}

bool check_geometric_symmetry(const CallCurve& curve, double tol) {
    std::vector<double> ks;
    if (curve.is_grid()) {
        for (double k : curve.strikes()) {
            if (k > 0.0) {
                ks.push_back(k);
                ks.push_back(1.0 / k);
            }
        }
        std::sort(ks.begin(), ks.end());
        ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    } else {
        const auto dom = curve.strike_domain();
        if (!(dom.hi > 1.0)) throw DomainError("check_geometric_symmetry: strike domain must reach above 1");
        const double lo = dom.lo > 0.0 ? dom.lo : 1.0 / dom.hi;
        const double half = std::min(std::log(dom.hi), -std::log(lo));
        for (double u : num::linspace(-half, half, 1001)) ks.push_back(std::exp(u));
    }
    if (ks.empty()) throw DomainError("check_geometric_symmetry: no positive strikes");
    return check_geometric_symmetry(curve, ks, tol);
}

}  // namespace zonoid

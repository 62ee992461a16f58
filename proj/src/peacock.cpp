#include "zonoid/peacock.hpp"

#include "zonoid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zonoid {

std::string to_string(PeacockFamily family) {
    return family == PeacockFamily::linear ? "linear" : "geometric";
}

PeacockFamily peacock_family_from_string(const std::string& name) {
    if (name == "linear") return PeacockFamily::linear;
    if (name == "geometric") return PeacockFamily::geometric;
    throw DomainError("unknown peacock family '" + name + "'");
}

// TimeChange

namespace {

TimeChange::Kind checked_scale(TimeChange::Kind kind, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ValidationError("time change: scale must be positive");
    return kind;
}

}  // namespace

TimeChange TimeChange::sqrt(double scale) {
    TimeChange y;
    y.kind_ = checked_scale(Kind::sqrt, scale);
    y.scale_ = scale;
    return y;
}

TimeChange TimeChange::linear(double scale) {
    TimeChange y;
    y.kind_ = checked_scale(Kind::linear, scale);
    y.scale_ = scale;
    return y;
}

TimeChange TimeChange::log1p(double scale) {
    TimeChange y;
    y.kind_ = checked_scale(Kind::log1p, scale);
    y.scale_ = scale;
    return y;
}

TimeChange TimeChange::table(std::vector<double> times, std::vector<double> values) {
    if (times.size() < 2 || times.size() != values.size()) {
        throw ValidationError("time change table: need at least 2 rows");
    }
    if (!num::strictly_increasing(times)) throw ValidationError("time change table: times must increase strictly");
    const bool up = values[1] > values[0];
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (up ? !(values[i] > values[i - 1]) : !(values[i] < values[i - 1])) {
            throw ValidationError("time change table: values must be strictly monotone");
        }
    }
    TimeChange y;
    y.kind_ = Kind::table;
    y.times_ = std::move(times);
    y.values_ = std::move(values);
    return y;
}

TimeChange TimeChange::from_string(const std::string& kind, double scale) {
    if (kind == "sqrt") return sqrt(scale);
    if (kind == "linear") return linear(scale);
    if (kind == "log1p") return log1p(scale);
    throw DomainError("unknown time change '" + kind + "'");
}

std::string TimeChange::name() const {
    switch (kind_) {
        case Kind::sqrt: return "sqrt";
        case Kind::linear: return "linear";
        case Kind::log1p: return "log1p";
        case Kind::table: return "table";
    }
    return "unknown";
}

double TimeChange::operator()(double t) const {
    switch (kind_) {
        case Kind::sqrt: return scale_ * std::sqrt(t);
        case Kind::linear: return scale_ * t;
        case Kind::log1p: return scale_ * std::log1p(t);
        case Kind::table: {
            if (t < times_.front() || t > times_.back()) throw DomainError("time change table: t outside table");
            const auto it = std::upper_bound(times_.begin(), times_.end(), t);
            const std::size_t i = std::clamp<std::size_t>(it - times_.begin(), 1, times_.size() - 1);
            const double w = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
            return values_[i - 1] + w * (values_[i] - values_[i - 1]);
        }
    }
    return 0.0;
}

double TimeChange::derivative(double t) const {
    switch (kind_) {
        case Kind::sqrt: return 0.5 * scale_ / std::sqrt(t);
        case Kind::linear: return scale_;
        case Kind::log1p: return scale_ / (1.0 + t);
        case Kind::table: {
            if (t < times_.front() || t > times_.back()) throw DomainError("time change table: t outside table");
            const std::size_t n = times_.size();
            const auto it = std::lower_bound(times_.begin(), times_.end(), t);
            const std::size_t i = static_cast<std::size_t>(it - times_.begin());
            if (i < n && times_[i] == t) {
                const std::size_t lo = i == 0 ? 0 : i - 1;
                const std::size_t hi = i + 1 == n ? i : i + 1;
                return (values_[hi] - values_[lo]) / (times_[hi] - times_[lo]);
            }
            return (values_[i] - values_[i - 1]) / (times_[i] - times_[i - 1]);
        }
    }
    return 0.0;
}

bool TimeChange::increasing() const {
    return kind_ != Kind::table || values_.back() > values_.front();
}

void PeacockSpec::validate() const {
    if (family == PeacockFamily::geometric && !(s > 0.0)) {
        throw ValidationError("peacock: geometric family needs a positive initial price");
    }
    if (!std::isfinite(s)) throw ValidationError("peacock: initial price must be finite");
    if (!time_change.increasing()) throw ValidationError("peacock: time change must be increasing");
    double y0 = 0.0;
    try {
        y0 = time_change(0.0);
    } catch (const DomainError&) {
        throw ValidationError("peacock: time change must be defined at t = 0");
    }
    if (y0 != 0.0) throw ValidationError("peacock: time change must satisfy Y(0) = 0");
}

void SurfaceGrid::validate() const {
    if (!num::strictly_increasing(times)) throw ValidationError("surface: times must increase strictly");
    if (!num::strictly_increasing(second_axis)) throw ValidationError("surface: second axis must increase strictly");
    if (values.size() != times.size() * second_axis.size()) throw ValidationError("surface: value matrix has wrong size");
    for (double v : values) {
        if (!std::isfinite(v)) throw ValidationError("surface: values must be finite");
    }
}

// Maps

double G_map(const DensityModel& density, double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return density.pdf(density.quantile(p));
}

double H_map(const DensityModel& density, double y, double p) {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    if (y == 0.0) return p;
    return density.cdf(density.quantile(p) + y);
}

double surface_boundary(const PeacockSpec& spec, double t, double p) {
    const double y = spec.time_change(t);
    if (spec.family == PeacockFamily::linear) return spec.s * p + y * G_map(spec.density, p);
    return spec.s * H_map(spec.density, y, p);
}

SurfaceGrid zonoid_surface(const PeacockSpec& spec, std::span<const double> times, std::span<const double> probs) {
    SurfaceGrid grid;
    grid.axis = SurfaceGrid::Axis::zonoid_space;
    grid.times.assign(times.begin(), times.end());
    grid.second_axis.assign(probs.begin(), probs.end());
    grid.values.resize(times.size() * probs.size());
    for (std::size_t a = 0; a < times.size(); ++a) {
        for (std::size_t j = 0; j < probs.size(); ++j) grid.at(a, j) = surface_boundary(spec, times[a], probs[j]);
    }
    grid.validate();
    return grid;
}

// Certification

namespace {

// Concavity of one boundary row; the second difference at p_j is twice the
// gap between the chord through the neighbours and the value.
ConcavityReport row_concavity(std::span<const double> ps, std::span<const double> vs) {
    ConcavityReport report;
    const auto [lo, hi] = std::minmax_element(vs.begin(), vs.end());
    const double slack = 1e-9 * (*hi - *lo);
    double worst = -std::numeric_limits<double>::infinity();
    std::size_t worst_j = 1;
    for (std::size_t j = 1; j + 1 < ps.size(); ++j) {
        const double w = (ps[j] - ps[j - 1]) / (ps[j + 1] - ps[j - 1]);
        const double chord = (1.0 - w) * vs[j - 1] + w * vs[j + 1];
        const double d2 = 2.0 * (chord - vs[j]);
        if (d2 > worst) {
            worst = d2;
            worst_j = j;
        }
    }
    report.max_violation = std::max(worst, 0.0);
    if (worst > slack) {
        report.is_concave = false;
        report.witness = std::array{ps[worst_j - 1], ps[worst_j], ps[worst_j + 1]};
        report.witness_second_difference = worst;
    }
    return report;
}

}  // namespace

PeacockCertificate certify_peacock(const PeacockSpec& spec, std::span<const double> times,
                                   std::span<const double> probs) {
    if (times.empty() || probs.size() < 3) throw DomainError("certify_peacock: need times and at least 3 probabilities");
    std::vector<double> ps(probs.begin(), probs.end());
    if (!num::strictly_increasing(ps) || ps.front() < 0.0 || ps.back() > 1.0) {
        throw DomainError("certify_peacock: probabilities must increase strictly within [0,1]");
    }
    if (ps.front() > 0.0) ps.insert(ps.begin(), 0.0);
    if (ps.back() < 1.0) ps.push_back(1.0);
    const auto surface = zonoid_surface(spec, times, ps);
    const std::size_t np = ps.size();

    PeacockCertificate cert;
    double slope_lo = std::numeric_limits<double>::infinity();
    double slope_hi = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < times.size(); ++a) {
        const std::span<const double> row(surface.values.data() + a * np, np);
        const auto report = row_concavity(ps, row);
        const double overall = std::max(cert.concavity.max_violation, report.max_violation);
        if (!report.is_concave && (cert.concavity.is_concave || report.witness_second_difference >
                                                                     cert.concavity.witness_second_difference)) {
            cert.concavity = report;
            cert.concavity_time = times[a];
        }
        cert.concavity.max_violation = overall;
        for (std::size_t j = 1; j < np; ++j) {
            const double slope = (row[j] - row[j - 1]) / (ps[j] - ps[j - 1]);
            slope_lo = std::min(slope_lo, slope);
            slope_hi = std::max(slope_hi, slope);
        }
    }

    // Calls on strikes spanning the boundary slopes, via the exact Legendre
    // transform of each piecewise-linear row.
    const double pad = 1e-6 * std::max(1.0, slope_hi - slope_lo);
    const auto strikes = num::linspace(slope_lo - pad, slope_hi + pad, 201);
    std::vector<double> previous;
    const double slack = 1e-9 * std::max(1.0, std::fabs(spec.s));
    auto& kel = cert.kellerer;
    for (std::size_t a = 0; a < times.size(); ++a) {
        std::vector<double> calls(strikes.size());
        for (std::size_t i = 0; i < strikes.size(); ++i) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < np; ++j) best = std::max(best, surface.at(a, j) - ps[j] * strikes[i]);
            calls[i] = best;
        }
        if (!previous.empty()) {
            for (std::size_t i = 0; i < strikes.size(); ++i) {
                const double drop = previous[i] - calls[i];
                if (drop > kel.max_call_decrease) {
                    kel.max_call_decrease = drop;
                    if (drop > slack) kel.witness = std::array{times[a - 1], times[a], strikes[i]};
                }
            }
        }
        previous = std::move(calls);
        kel.max_mean_drift = std::max(kel.max_mean_drift, std::fabs(surface.at(a, np - 1) - surface.at(0, np - 1)));
    }
    kel.calls_monotone = kel.max_call_decrease <= slack;
    kel.mean_constant = kel.max_mean_drift == 0.0;
    return cert;
}

// Group identities

double group_property_check(const DensityModel& density, double y1, double y2, std::span<const double> probs) {
    double worst = 0.0;
    for (double p : probs) {
        const double direct = H_map(density, y1 + y2, p);
        const double composed = H_map(density, y1, H_map(density, y2, p));
        worst = std::max(worst, std::fabs(direct - composed));
    }
    return worst;
}

std::vector<GeneratorRow> generator_limit_check(const DensityModel& density, std::span<const double> ys,
                                                std::span<const double> probs) {
    std::vector<GeneratorRow> rows;
    rows.reserve(ys.size());
    for (double y : ys) {
        if (!(y > 0.0)) throw DomainError("generator_limit_check: y must be positive");
        double worst = 0.0;
        for (double p : probs) {
            const double quotient = (H_map(density, y, p) - p) / y;
            worst = std::max(worst, std::fabs(quotient - G_map(density, p)));
        }
        rows.push_back({y, worst});
    }
    return rows;
}

std::vector<double> recover_F_from_G(const std::function<double(double)>& G, double anchor, double p0,
                                     std::span<const double> probs) {
    constexpr double kEdge = 1e-6;
    if (!(p0 > 0.0 && p0 < 1.0)) throw DomainError("recover_F_from_G: p0 must lie in (0,1)");
    if (!(G(p0) > 0.0)) throw DomainError("recover_F_from_G: G must be positive at p0");
    std::vector<double> out;
    out.reserve(probs.size());
    const num::Fn inv = [&](double q) { return 1.0 / G(q); };
    for (double p : probs) {
        const double pc = std::clamp(p, kEdge, 1.0 - kEdge);
        if (!(G(pc) > 0.0)) throw DomainError("recover_F_from_G: G must be positive on the grid");
        out.push_back(anchor + num::integrate(inv, p0, pc, 1e-13));
    }
    return out;
}

double recover_F_from_H(const DensityModel& density, double anchor, double p0, double x) {
    if (x < anchor) throw UnsupportedError("recover_F_from_H: x < a needs negative shifts");
    if (!(p0 > 0.0 && p0 < 1.0)) throw DomainError("recover_F_from_H: p0 must lie in (0,1)");
    return H_map(density, x - anchor, p0);
}

}  // namespace zonoid

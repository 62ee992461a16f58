#include "zonoid/mc.hpp"

#include "zonoid/errors.hpp"
#include "zonoid/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

namespace zonoid {

void SimConfig::validate() const {
    if (n_paths < 2) throw ValidationError("simulate: n_paths must be at least 2");
    if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("simulate: t must be non-negative");
    if (antithetic && n_paths % 2 != 0) throw ValidationError("simulate: antithetic runs need an even n_paths");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

unsigned worker_count(const SimConfig& config) {
    unsigned workers = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("ZONOID_LAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(cap, &end, 10);
        if (end != cap && *end == '\0' && v > 0) workers = std::min(workers, static_cast<unsigned>(v));
    }
    return workers;
}

double sample_mean(std::span<const double> xs) { return num::pairwise_sum(xs) / static_cast<double>(xs.size()); }

McEstimate mean_and_error(std::span<const double> xs) {
    const double mean = sample_mean(xs);
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - mean) * (xs[i] - mean);
    const double var = num::pairwise_sum(sq) / static_cast<double>(xs.size() - 1);
    return {mean, std::sqrt(var / static_cast<double>(xs.size())), xs.size()};
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t bits = splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<double> simulate_terminal(const SimConfig& config) {
    config.validate();
    const std::size_t n = config.n_paths;
    std::vector<double> out(n);
    const double vol = std::sqrt(config.t);
    const auto fill = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            double z;
            if (config.antithetic) {
                z = num::norm_quantile(counter_uniform(config.seed, i / 2));
                if (i % 2 == 1) z = -z;
            } else {
                z = num::norm_quantile(counter_uniform(config.seed, i));
            }
            const double w = vol * z;
            out[i] = config.model == ModelKind::bachelier ? w : std::exp(w - 0.5 * config.t);
        }
    };

    const unsigned workers = std::min<std::size_t>(worker_count(config), std::max<std::size_t>(1, n / 4096));
    if (workers <= 1) {
        fill(0, n);
        return out;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(n, w * chunk);
        const std::size_t end = std::min(n, begin + chunk);
        pool.emplace_back(fill, begin, end);
    }
    for (auto& th : pool) th.join();
    return out;
}

McEstimate mc_call(const SimConfig& config, double strike) {
    const auto sample = simulate_terminal(config);
    return mc_call(config, sample, strike);
}

McEstimate mc_call(const SimConfig& config, std::span<const double> sample, double strike) {
    if (sample.size() < 2) throw ValidationError("mc_call: need at least 2 samples");
    if (config.antithetic) {
        if (sample.size() % 2 != 0) throw ValidationError("mc_call: antithetic sample must have even size");
        std::vector<double> pairs(sample.size() / 2);
        for (std::size_t j = 0; j < pairs.size(); ++j) {
            pairs[j] = 0.5 * (std::max(sample[2 * j] - strike, 0.0) + std::max(sample[2 * j + 1] - strike, 0.0));
        }
        auto est = mean_and_error(pairs);
        est.n = sample.size();
        return est;
    }
    std::vector<double> payoff(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) payoff[i] = std::max(sample[i] - strike, 0.0);
    return mean_and_error(payoff);
}

ConvexProjection project_convex_nonincreasing(std::span<const double> strikes, std::span<const double> values) {
    if (strikes.size() != values.size() || strikes.size() < 2) {
        throw ValidationError("projection: need at least 2 strikes with one value each");
    }
    if (!num::strictly_increasing(strikes)) throw ValidationError("projection: strikes must be strictly increasing");
    const std::size_t n = strikes.size();

    // Lower convex hull (monotone chain).
    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i < n; ++i) {
        while (hull.size() >= 2) {
            const std::size_t a = hull[hull.size() - 2];
            const std::size_t b = hull.back();
            const double cross = (strikes[b] - strikes[a]) * (values[i] - values[a]) -
                                 (values[b] - values[a]) * (strikes[i] - strikes[a]);
            if (cross <= 0.0) hull.pop_back(); else break;
        }
        hull.push_back(i);
    }

    ConvexProjection out;
    out.values.resize(n);
    std::size_t seg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (seg + 2 < hull.size() && strikes[hull[seg + 1]] <= strikes[i]) ++seg;
        const std::size_t a = hull[seg];
        const std::size_t b = hull[seg + 1];
        const double w = (strikes[i] - strikes[a]) / (strikes[b] - strikes[a]);
        out.values[i] = i == a ? values[a] : (i == b ? values[b] : values[a] + w * (values[b] - values[a]));
    }
    // Past the hull minimum the convex minorant rises; flatten it.
    const auto min_it = std::min_element(out.values.begin(), out.values.end());
    for (auto it = min_it; it != out.values.end(); ++it) *it = *min_it;

    for (std::size_t i = 0; i < n; ++i) out.distance = std::max(out.distance, std::fabs(out.values[i] - values[i]));
    return out;
}

EmpiricalCurve empirical_call_curve(std::span<const double> sample, std::size_t levels) {
    if (sample.empty()) throw ValidationError("empirical curve: empty sample");
    std::vector<double> xs(sample.begin(), sample.end());
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    const double mean = sample_mean(xs);

    if (xs.front() == xs.back()) {
        const DiscreteDistribution point({xs.front()}, {1.0});
        return {CallCurve::from_distribution(point), 0.0};
    }

    // suffix[k] = sum of xs[k..n).
    std::vector<long double> suffix(n + 1, 0.0L);
    for (std::size_t k = n; k-- > 0;) suffix[k] = suffix[k + 1] + xs[k];

    levels = std::max<std::size_t>(levels, 2);
    std::vector<double> strikes;
    std::vector<double> values;
    strikes.reserve(levels);
    values.reserve(levels);
    for (std::size_t j = 0; j < levels; ++j) {
        const std::size_t k = static_cast<std::size_t>(std::llround(
            static_cast<double>(j) * static_cast<double>(n - 1) / static_cast<double>(levels - 1)));
        // Use the first occurrence of a tied value so C is exact at it.
        const std::size_t first = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), xs[k]) - xs.begin());
        if (!strikes.empty() && xs[first] <= strikes.back()) continue;
        const long double above = suffix[first] - static_cast<long double>(n - first) * xs[first];
        strikes.push_back(xs[first]);
        values.push_back(static_cast<double>(above / static_cast<long double>(n)));
    }
    values.front() = mean - strikes.front();
    values.back() = 0.0;

    auto projected = project_convex_nonincreasing(strikes, values);
    auto curve = CallCurve::from_grid(std::move(strikes), std::move(projected.values), mean);
    return {std::move(curve), projected.distance};
}

double proposition_boundary(ModelKind model, double t, double p) {
    if (p <= 0.0) return 0.0;
    if (model == ModelKind::bachelier) {
        if (p >= 1.0) return 0.0;
        return std::sqrt(t) * num::norm_pdf(num::norm_quantile(p));
    }
    if (p >= 1.0) return 1.0;
    return num::norm_cdf(num::norm_quantile(p) + std::sqrt(t));
}

PropositionReport mc_check_propositions(const SimConfig& config, std::span<const double> pgrid) {
    config.validate();
    const auto sample = simulate_terminal(config);
    const auto empirical = empirical_call_curve(sample);
    const CallCurve& curve = empirical.curve;

    std::vector<double> ps{0.0};
    for (double p : pgrid) {
        if (!(p > 0.0 && p < 1.0)) throw DomainError("mc_check_propositions: grid p must lie in (0,1)");
        ps.push_back(p);
    }
    ps.push_back(1.0);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    const auto boundary = upper_boundary_from_calls(curve, ps);

    PropositionReport report{config.model, config.t, config.n_paths, {}, 0.0, empirical.projection_distance};
    const auto ks = curve.strikes();
    for (double p : pgrid) {
        // Minimising vertex of C(K) + pK.
        std::size_t best = 0;
        for (std::size_t i = 1; i < ks.size(); ++i) {
            if (curve(ks[i]) + p * ks[i] < curve(ks[best]) + p * ks[best]) best = i;
        }
        const double se = mc_call(config, sample, ks[best]).std_error;
        const double emp = boundary(p);
        const double closed = proposition_boundary(config.model, config.t, p);
        const double diff = std::fabs(emp - closed);
        double dev;
        if (diff <= 1e-15) dev = 0.0;
        else dev = se > 0.0 ? diff / se : std::numeric_limits<double>::infinity();
        report.rows.push_back({p, emp, closed, se, dev});
        report.max_deviation_se = std::max(report.max_deviation_se, dev);
    }
    return report;
}

}  // namespace zonoid

#pragma once

#include "zonoid/pricing.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace zonoid {

/// Terminal law of W_t (bachelier) or e^{W_t - t/2} (black_scholes).
struct SimConfig {
    ModelKind model = ModelKind::bachelier;
    double t = 1.0;
    std::size_t n_paths = 100000;
    std::uint64_t seed = 0;
    /// Paths 2j and 2j+1 share one uniform (z and -z); n_paths must be even.
    bool antithetic = false;
    /// Worker count; 0 means hardware concurrency. Capped by ZONOID_LAB_THREADS.
    unsigned threads = 0;

    void validate() const;
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

/// Uniform in (0,1) for stream (seed, index); pure function of its inputs.
double counter_uniform(std::uint64_t seed, std::uint64_t index);

/// Deterministic in the seed; the same vector for any worker count.
std::vector<double> simulate_terminal(const SimConfig& config);

/// Sample mean of (S_t - K)^+. With antithetics the standard error comes from
/// the n/2 pair means.
McEstimate mc_call(const SimConfig& config, double strike);
McEstimate mc_call(const SimConfig& config, std::span<const double> sample, double strike);

struct ConvexProjection {
    std::vector<double> values;
    /// Sup-norm distance between input and projected values.
    double distance = 0.0;
};

/// Greatest convex minorant of (K_i, C_i), with slopes capped at 0 so the
/// result is also non-increasing.
ConvexProjection project_convex_nonincreasing(std::span<const double> strikes, std::span<const double> values);

/// Call curve of the empirical law on about `levels` order statistics
/// (always including the sample minimum and maximum), after projection.
struct EmpiricalCurve {
    CallCurve curve;
    double projection_distance = 0.0;
};
EmpiricalCurve empirical_call_curve(std::span<const double> sample, std::size_t levels = 4001);

struct PropositionRow {
    double p;
    double empirical;
    double closed;
    double std_error;
    /// |empirical - closed| / std_error; 0 when both agree exactly.
    double deviation_se;
};

struct PropositionReport {
    ModelKind model;
    double t;
    std::size_t n;
    std::vector<PropositionRow> rows;
    double max_deviation_se = 0.0;
    double projection_distance = 0.0;
};

/// sqrt(t) phi(Phi^{-1}(p)) for bachelier, Phi(Phi^{-1}(p) + sqrt(t)) for
/// black_scholes.
double proposition_boundary(ModelKind model, double t, double p);

/// Empirical upper boundary against `proposition_boundary` at every p in
/// `pgrid`. The standard error at p is that of the call at the minimising
/// strike.
PropositionReport mc_check_propositions(const SimConfig& config, std::span<const double> pgrid);

}  // namespace zonoid

#include "doctest.h"
#include "oracles.hpp"

#include "zonoid/errors.hpp"
#include "zonoid/mc.hpp"
#include "zonoid/numerics.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

using namespace zonoid;

namespace {

const double kPhi0 = 0.398942280401432678;
const double kBsAtm = 0.382924922548026207;

SimConfig config(ModelKind model, double t, std::size_t n, std::uint64_t seed = 7) {
    SimConfig c;
    c.model = model;
    c.t = t;
    c.n_paths = n;
    c.seed = seed;
    return c;
}

double mean(const std::vector<double>& xs) { return num::pairwise_sum(xs) / static_cast<double>(xs.size()); }

}  // namespace

TEST_CASE("config validation") {
    CHECK_THROWS_AS(config(ModelKind::bachelier, 1.0, 1).validate(), ValidationError);
    CHECK_THROWS_AS(config(ModelKind::bachelier, -1.0, 10).validate(), ValidationError);
    auto odd = config(ModelKind::bachelier, 1.0, 11);
    odd.antithetic = true;
    CHECK_THROWS_AS(odd.validate(), ValidationError);
}

TEST_CASE("counter uniforms") {
    CHECK(counter_uniform(1, 2) == counter_uniform(1, 2));
    CHECK(counter_uniform(1, 2) != counter_uniform(2, 2));
    double lo = 1.0;
    double hi = 0.0;
    double acc = 0.0;
    for (std::uint64_t i = 0; i < 100000; ++i) {
        const double u = counter_uniform(3, i);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        acc += u;
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK(std::fabs(acc / 100000.0 - 0.5) <= 4.0 * std::sqrt(1.0 / 12.0 / 100000.0));
}

TEST_CASE("simulate_terminal examples") {
    const std::size_t n = 1000000;
    const auto w = simulate_terminal(config(ModelKind::bachelier, 1.0, n));
    REQUIRE(w.size() == n);
    CHECK(std::fabs(mean(w)) <= 4.0 / std::sqrt(static_cast<double>(n)));
    const auto s = simulate_terminal(config(ModelKind::black_scholes, 1.0, n));
    const double sd = std::sqrt(std::exp(1.0) - 1.0);
    CHECK(std::fabs(mean(s) - 1.0) <= 4.0 * sd / std::sqrt(static_cast<double>(n)));
    for (double x : simulate_terminal(config(ModelKind::bachelier, 0.0, 100))) CHECK(x == 0.0);
    for (double x : simulate_terminal(config(ModelKind::black_scholes, 0.0, 100))) CHECK(x == 1.0);
}

TEST_CASE("samples do not depend on the worker count") {
    auto one = config(ModelKind::black_scholes, 2.0, 200000, 99);
    one.threads = 1;
    auto many = one;
    many.threads = 8;
    ::setenv("ZONOID_LAB_THREADS", "8", 1);
    const auto a = simulate_terminal(one);
    const auto b = simulate_terminal(many);
    ::unsetenv("ZONOID_LAB_THREADS");
    CHECK(a == b);
    many.antithetic = true;
    one.antithetic = true;
    CHECK(simulate_terminal(one) == simulate_terminal(many));
    CHECK(mc_call(one, 1.0).value == mc_call(many, 1.0).value);
}

TEST_CASE("antithetic pairs") {
    auto c = config(ModelKind::bachelier, 1.0, 10);
    c.antithetic = true;
    const auto w = simulate_terminal(c);
    for (std::size_t i = 0; i < w.size(); i += 2) CHECK(w[i] == -w[i + 1]);
}

TEST_CASE("mc_call examples") {
    const std::size_t n = 1000000;
    const auto b = mc_call(config(ModelKind::bachelier, 1.0, n), 0.0);
    CHECK(b.n == n);
    CHECK(b.std_error > 0.0);
    CHECK(std::fabs(b.value - kPhi0) <= 4.0 * b.std_error);
    const auto s = mc_call(config(ModelKind::black_scholes, 1.0, n), 1.0);
    CHECK(std::fabs(s.value - kBsAtm) <= 4.0 * s.std_error);
    const auto far = mc_call(config(ModelKind::bachelier, 1.0, 10000), 50.0);
    CHECK(far.value == 0.0);
    CHECK(far.std_error == 0.0);
}

TEST_CASE("antithetic variates cut the variance at K = 0") {
    const std::size_t n = 200000;
    const auto plain = mc_call(config(ModelKind::bachelier, 1.0, n, 3), 0.0);
    auto c = config(ModelKind::bachelier, 1.0, n, 3);
    c.antithetic = true;
    const auto anti = mc_call(c, 0.0);
    CHECK(anti.n == n);
    const double ratio = (anti.std_error * anti.std_error) / (plain.std_error * plain.std_error);
    CHECK(ratio <= 0.6);
    CHECK(std::fabs(anti.value - kPhi0) <= 4.0 * anti.std_error);
}

TEST_CASE("convex non-increasing projection") {
    const std::vector<double> ks{0.0, 1.0, 2.0, 3.0, 4.0};
    const std::vector<double> convex{4.0, 2.5, 1.5, 1.0, 1.0};
    const auto same = project_convex_nonincreasing(ks, convex);
    CHECK(same.values == convex);
    CHECK(same.distance == 0.0);
    const std::vector<double> bump{4.0, 3.0, 2.5, 1.0, 0.0};
    const auto hull = project_convex_nonincreasing(ks, bump);
    CHECK(hull.values[2] == doctest::Approx(2.0));
    CHECK(hull.distance == doctest::Approx(0.5));
    const std::vector<double> rising{1.0, 0.5, 0.25, 0.5, 1.0};
    const auto flat = project_convex_nonincreasing(ks, rising);
    for (std::size_t i = 1; i < ks.size(); ++i) CHECK(flat.values[i] <= flat.values[i - 1]);
    for (std::size_t i = 0; i < ks.size(); ++i) CHECK(flat.values[i] <= rising[i] + 1e-15);
}

TEST_CASE("empirical call curves") {
    const std::vector<double> sample{2.0, -1.0, 0.5, 0.5};
    const auto e = empirical_call_curve(sample, 11);
    CHECK(e.curve.mean() == doctest::Approx(0.5));
    CHECK(e.curve(-1.0) == doctest::Approx(1.5));
    CHECK(e.curve(0.5) == doctest::Approx(0.375));
    CHECK(e.curve(2.0) == doctest::Approx(0.0));
    CHECK_NOTHROW(e.curve.validate());
    const std::vector<double> point{1.0, 1.0, 1.0};
    CHECK(empirical_call_curve(point).curve(0.0) == doctest::Approx(1.0));

    // Projection distance shrinks with n.
    std::vector<double> distances;
    for (std::size_t n : {10000u, 100000u, 1000000u}) {
        const auto s = simulate_terminal(config(ModelKind::black_scholes, 1.0, n, 17));
        const auto curve = empirical_call_curve(s);
        double prev = curve.curve(curve.curve.strikes().front());
        for (double k : curve.curve.strikes()) {
            CHECK(curve.curve(k) <= prev + 1e-15);
            prev = curve.curve(k);
        }
        distances.push_back(curve.projection_distance);
    }
    CHECK(distances[2] <= distances[0]);
    CHECK(distances[2] <= 1e-9);
}

TEST_CASE("proposition boundaries") {
    CHECK(proposition_boundary(ModelKind::bachelier, 1.0, 0.5) == doctest::Approx(kPhi0).epsilon(1e-15));
    CHECK(proposition_boundary(ModelKind::bachelier, 1.0, 0.1) == doctest::Approx(0.175498331932486814).epsilon(1e-14));
    CHECK(proposition_boundary(ModelKind::black_scholes, 1.0, 0.5) == doctest::Approx(0.841344746068542949).epsilon(1e-15));
    CHECK(proposition_boundary(ModelKind::black_scholes, 1.0, 0.25) == doctest::Approx(0.627602536780774895).epsilon(1e-14));
    CHECK(proposition_boundary(ModelKind::black_scholes, 1.0, 0.9) == doctest::Approx(0.988742085487395238).epsilon(1e-14));
    CHECK(proposition_boundary(ModelKind::bachelier, 4.0, 0.5) == doctest::Approx(2.0 * kPhi0).epsilon(1e-15));
}

TEST_CASE("mc_check_propositions") {
    const auto ps = num::linspace(0.1, 0.9, 9);
    const auto b = mc_check_propositions(config(ModelKind::bachelier, 1.0, 1000000, 1), ps);
    REQUIRE(b.rows.size() == 9);
    CHECK(b.rows[4].closed == doctest::Approx(kPhi0).epsilon(1e-15));
    CHECK(b.rows[4].deviation_se <= 4.0);
    CHECK(b.max_deviation_se <= 4.0);
    const auto g = mc_check_propositions(config(ModelKind::black_scholes, 1.0, 1000000, 1), ps);
    CHECK(g.rows[4].closed == doctest::Approx(0.841344746068542949).epsilon(1e-15));
    CHECK(g.rows[4].deviation_se <= 4.0);
    CHECK(g.max_deviation_se <= 4.0);
    const std::vector<double> qs{0.1, 0.3, 0.9};
    for (const auto model : {ModelKind::bachelier, ModelKind::black_scholes}) {
        const auto z = mc_check_propositions(config(model, 0.0, 1000), qs);
        CHECK(z.max_deviation_se == 0.0);
        const double s = model == ModelKind::bachelier ? 0.0 : 1.0;
        for (const auto& row : z.rows) CHECK(row.empirical == doctest::Approx(s * row.p).epsilon(1e-15));
    }
}

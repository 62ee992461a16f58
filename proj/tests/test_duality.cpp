#include "doctest.h"
#include "oracles.hpp"

#include "zonoid/duality.hpp"
#include "zonoid/errors.hpp"
#include "zonoid/numerics.hpp"
#include "zonoid/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace zonoid;

namespace {

const double kPhi0 = 0.398942280401432678;
const double kPhi1 = 0.841344746068542949;

CallCurve bachelier_curve(double t) { return model_call_curve({ModelKind::bachelier, 0.0, 1.0, t}); }
CallCurve lognormal_curve(double y) { return model_call_curve({ModelKind::black_scholes, 1.0, y, 1.0}); }

DiscreteDistribution random_distribution(std::mt19937_64& rng, std::size_t atoms) {
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::uniform_real_distribution<double> w(0.05, 1.0);
    std::vector<double> xs(atoms);
    std::vector<double> ws(atoms);
    double total = 0.0;
    for (std::size_t i = 0; i < atoms; ++i) {
        xs[i] = u(rng);
        ws[i] = w(rng);
        total += ws[i];
    }
    for (auto& v : ws) v /= total;
    // Renormalise the last weight so the sum is 1 to the last bit.
    double head = 0.0;
    for (std::size_t i = 0; i + 1 < atoms; ++i) head += ws[i];
    ws.back() = 1.0 - head;
    return {xs, ws};
}

}  // namespace

TEST_CASE("discrete distributions validate their input") {
    CHECK_THROWS_AS(DiscreteDistribution({0.0, 0.0}, {0.5, 0.5}), ValidationError);
    CHECK_THROWS_AS(DiscreteDistribution({0.0, 1.0}, {0.5, 0.6}), ValidationError);
    CHECK_THROWS_AS(DiscreteDistribution({0.0, 1.0}, {1.0, 0.0}), ValidationError);
    const DiscreteDistribution d({3.0, 1.0}, {0.25, 0.75});
    CHECK(d.atoms()[0] == 1.0);
    CHECK(d.weights()[0] == 0.75);
    CHECK(d.mean() == doctest::Approx(1.5));
}

TEST_CASE("upper_boundary_from_calls examples") {
    const auto curve = bachelier_curve(1.0);
    const std::vector<double> ps{0.0, 0.1, 0.5, 0.8, 1.0};
    const auto b = upper_boundary_from_calls(curve, ps);
    const double brute = static_cast<double>(oracle::legendre_min(
        [](oracle::Real k) { return oracle::bachelier(0.0L, 1.0L, k); }, 0.5L, -10.0L, 10.0L));
    CHECK(brute == doctest::Approx(kPhi0).epsilon(1e-12));
    CHECK(std::fabs(b(0.5) - brute) <= 1e-9);
    CHECK(std::fabs(b(0.1) - 0.175498331932486814) <= 1e-9);
    CHECK(b(0.0) == 0.0);
    CHECK(b(1.0) == curve.mean());

    const auto two = CallCurve::from_distribution(DiscreteDistribution::uniform({0.0, 1.0}));
    const std::vector<double> qs{0.0, 0.25, 1.0};
    const auto tb = upper_boundary_from_calls(two, qs);
    CHECK(tb(0.25) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(tb(1.0) == 0.5);

    // A non-convex grid is rejected.
    const auto bad = CallCurve::from_grid({-1.0, 0.0, 1.0}, {1.0, 0.9, 0.0}, 0.0);
    CHECK_THROWS_AS(upper_boundary_from_calls(bad, qs), ValidationError);
}

TEST_CASE("calls_from_upper_boundary examples") {
    const auto half = ZonoidBoundary::closed_form([](double p) { return std::min(p, 0.5); }, 0.5);
    const std::vector<double> ks{-1.0, 0.0, 0.5, 1.0, 2.0};
    const auto c = calls_from_upper_boundary(half, ks);
    CHECK(c(0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c(0.5) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(c(2.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c(-1.0) == doctest::Approx(1.5).epsilon(1e-12));

    const auto gauss = ZonoidBoundary::closed_form(
        [](double p) { return num::norm_pdf(num::norm_quantile(p)); }, 0.0);
    const auto gc = calls_from_upper_boundary(gauss, ks);
    CHECK(gc(0.0) == doctest::Approx(kPhi0).epsilon(1e-10));

    const auto concave_fail = ZonoidBoundary::from_grid({0.0, 0.5, 1.0}, {0.0, -0.2, 0.0}, 0.0);
    CHECK_THROWS_AS(calls_from_upper_boundary(concave_fail, ks), ValidationError);
}

TEST_CASE("calls -> boundary -> calls reproduces Bachelier on [-3, 3]") {
    const auto curve = bachelier_curve(1.0);
    const auto b = upper_boundary_from_calls(curve, num::linspace(0.0, 1.0, 2001));
    const auto ks = num::linspace(-3.0, 3.0, 601);
    const auto back = calls_from_upper_boundary(b, ks);
    double err = 0.0;
    for (double k : ks) err = std::max(err, std::fabs(back(k) - static_cast<double>(oracle::bachelier(0.0L, 1.0L, k))));
    CHECK(err <= 1e-4);
}

TEST_CASE("double transforms on 2001-point grids") {
    const auto ps = num::linspace(0.0, 1.0, 2001);
    SUBCASE("logistic") {
        const auto f = DensityModel::logistic();
        const PeacockSpec spec{PeacockFamily::linear, 0.0, f, TimeChange::sqrt()};
        const auto curve = family_call_curve(spec, 1.0);
        const auto ks = num::linspace(-8.0, 8.0, 2001);
        const auto back = calls_from_upper_boundary(upper_boundary_from_calls(curve, ps), ks);
        double err = 0.0;
        for (double k : ks) err = std::max(err, std::fabs(back(k) - curve(k)));
        CHECK(err <= 1e-4);
        // boundary -> calls -> boundary
        const auto b = ZonoidBoundary::closed_form([f](double p) { return G_map(f, p); }, 0.0);
        const auto again = upper_boundary_from_calls(calls_from_upper_boundary(b, ks), ps);
        double berr = 0.0;
        for (double p : ps) berr = std::max(berr, std::fabs(again(p) - b(p)));
        CHECK(berr <= 1e-4);
    }
    SUBCASE("discrete") {
        std::mt19937_64 rng(11);
        const auto d = random_distribution(rng, 7);
        const auto curve = CallCurve::from_distribution(d);
        const auto ks = num::linspace(-6.0, 6.0, 2001);
        // The boundary of a discrete law kinks at the tail masses; keep them on the grid.
        auto grid = ps;
        double tail = 0.0;
        for (std::size_t i = d.weights().size(); i-- > 1;) {
            tail += d.weights()[i];
            grid.push_back(tail);
        }
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end(), [](double a, double b) { return b - a < 1e-14; }), grid.end());
        const auto back = calls_from_upper_boundary(upper_boundary_from_calls(curve, grid), ks);
        double err = 0.0;
        for (double k : ks) err = std::max(err, std::fabs(back(k) - curve(k)));
        CHECK(err <= 1e-4);
    }
}

TEST_CASE("boundary_from_quantile_integral examples") {
    const auto two = DiscreteDistribution::uniform({0.0, 1.0});
    CHECK(boundary_from_quantile_integral(two, 0.25) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(boundary_from_quantile_integral(two, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(boundary_from_quantile_integral(two, 0.0) == 0.0);
    CHECK(boundary_from_quantile_integral(DensityModel::gaussian(), 0.5) == doctest::Approx(kPhi0).epsilon(1e-12));
    CHECK(std::fabs(boundary_from_quantile_integral(DensityModel::gaussian(), 1.0)) <= 1e-12);
    CHECK(boundary_from_quantile_integral(DensityModel::gaussian(2.0, 1.0), 1.0) == doctest::Approx(2.0).epsilon(1e-12));
    // Logistic: integral of logit(1 - q) over [0, 1/2] = log 2.
    CHECK(boundary_from_quantile_integral(DensityModel::logistic(), 0.5) ==
          doctest::Approx(0.693147180559945309).epsilon(1e-12));
    CHECK_THROWS_AS(boundary_from_quantile_integral(two, 1.5), DomainError);

    // Agrees with the Legendre transform of the same law.
    std::mt19937_64 rng(5);
    const auto d = random_distribution(rng, 10);
    const auto b = upper_boundary_from_calls(CallCurve::from_distribution(d), num::linspace(0.0, 1.0, 51));
    for (double p : num::linspace(0.0, 1.0, 51)) CHECK(boundary_from_quantile_integral(d, p) == doctest::Approx(b(p)).epsilon(1e-12));
}

TEST_CASE("inverse_boundary_positive examples") {
    const auto ln = lognormal_curve(1.0);
    CHECK(ln.positive());
    CHECK(inverse_boundary_positive(ln, kPhi1) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(inverse_boundary_positive(ln, 1e-12) <= 1e-6);
    CHECK(inverse_boundary_positive(ln, 1.0 - 1e-12) >= 1.0 - 1e-6);

    const auto d = CallCurve::from_distribution(DiscreteDistribution::uniform({1.0, 3.0}));
    CHECK(d.positive());
    CHECK(inverse_boundary_positive(d, 1.5) == doctest::Approx(0.5).epsilon(1e-15));

    CHECK_THROWS_AS(inverse_boundary_positive(d, 0.0), DomainError);
    CHECK_THROWS_AS(inverse_boundary_positive(d, 2.0), DomainError);
    CHECK_THROWS_AS(inverse_boundary_positive(bachelier_curve(1.0), 0.1), UnsupportedError);
    auto grid = CallCurve::from_grid({-1.0, 0.0, 1.0, 2.0}, {1.5, 0.55, 0.1, 0.0}, 0.5);
    CHECK_THROWS_AS(grid.certify_positive(), UnsupportedError);
}

TEST_CASE("discrete_upper_boundary examples") {
    const auto two = DiscreteDistribution::uniform({0.0, 1.0});
    CHECK(discrete_upper_boundary(two, 0.25) == 0.25);
    CHECK(discrete_upper_boundary(two, 0.0) == 0.0);
    CHECK(discrete_upper_boundary(two, 1.0) == 0.5);
    CHECK(discrete_upper_boundary(DiscreteDistribution::uniform({-1.0, 1.0}), 0.5) == 0.5);
    CHECK_THROWS_AS(discrete_upper_boundary(two, -0.1), DomainError);
}

TEST_CASE("discrete oracle equals the Legendre transform of the discrete calls") {
    std::mt19937_64 rng(2024);
    const auto ps = num::linspace(0.0, 1.0, 101);
    for (int trial = 0; trial < 25; ++trial) {
        const auto d = random_distribution(rng, 10);
        const auto b = upper_boundary_from_calls(CallCurve::from_distribution(d), ps);
        std::vector<oracle::Real> xs(d.atoms().begin(), d.atoms().end());
        std::vector<oracle::Real> ws(d.weights().begin(), d.weights().end());
        for (double p : ps) {
            CHECK(std::fabs(discrete_upper_boundary(d, p) - b(p)) <= 1e-12);
            CHECK(std::fabs(discrete_upper_boundary(d, p) - static_cast<double>(oracle::neyman_pearson(xs, ws, p))) <= 1e-12);
        }
    }
}

TEST_CASE("convex order") {
    const auto b1 = bachelier_curve(1.0);
    const auto b4 = bachelier_curve(4.0);
    CHECK(check_convex_order(b1, b4));
    CHECK(check_convex_order(b1, b1));
    CHECK_FALSE(check_convex_order(b4, b1));
    const auto shifted = model_call_curve({ModelKind::bachelier, 1.0, 1.0, 1.0});
    CHECK_THROWS_AS(check_convex_order(b1, shifted), DomainError);
    const auto d1 = CallCurve::from_distribution(DiscreteDistribution::uniform({-1.0, 1.0}));
    const auto d2 = CallCurve::from_distribution(DiscreteDistribution::uniform({-2.0, 2.0}));
    CHECK(check_convex_order(d1, d2));
    CHECK_FALSE(check_convex_order(d2, d1));
}

TEST_CASE("arithmetic symmetry") {
    CHECK(check_arithmetic_symmetry(bachelier_curve(1.0)));
    CHECK(check_arithmetic_symmetry(CallCurve::from_distribution(DiscreteDistribution::uniform({-1.0, 1.0}))));
    CHECK_FALSE(check_arithmetic_symmetry(CallCurve::from_distribution(DiscreteDistribution::uniform({0.0, 2.0}))));
    const std::vector<double> lopsided{-1.0, 0.0, 2.0};
    CHECK_THROWS_AS(check_arithmetic_symmetry(bachelier_curve(1.0), lopsided), DomainError);
}

TEST_CASE("geometric symmetry") {
    CHECK(check_geometric_symmetry(lognormal_curve(1.0)));
    const auto one = CallCurve::from_distribution(DiscreteDistribution({1.0}, {1.0}));
    CHECK(check_geometric_symmetry(one));
    // X = 1/2 + e^{W - 1/2} / 2 has mean 1 but is not put-call symmetric.
    const auto shifted = CallCurve::closed_form(
        [](double k) {
            if (k <= 0.5) return 1.0 - k;
            return 0.5 * static_cast<double>(oracle::black_scholes(1.0L, 1.0L, 2.0L * (k - 0.5)));
        },
        1.0, {0.5, 200.0});
    const std::vector<double> ks{0.5, 2.0};
    CHECK_FALSE(check_geometric_symmetry(shifted, ks));
    CHECK_THROWS_AS(check_geometric_symmetry(bachelier_curve(1.0)), DomainError);
}

TEST_CASE("geometric symmetry is the diagonal reflection of the boundary") {
    const auto ln = lognormal_curve(1.0);
    for (double q : {0.05, 0.2, 0.5, 0.7, 0.95}) {
        const double lhs = inverse_boundary_positive(ln, q);
        const double rhs = 1.0 - static_cast<double>(oracle::Phi(oracle::Phi_inv(1.0L - q) + 1.0L));
        CHECK(std::fabs(lhs - rhs) <= 1e-6);
    }
}

TEST_CASE("lift zonoid is point symmetric about (1/2, m/2)") {
    const auto b = upper_boundary_from_calls(model_call_curve({ModelKind::bachelier, 0.7, 1.0, 1.0}),
                                             num::linspace(0.0, 1.0, 101));
    for (double p : num::linspace(0.0, 1.0, 101)) {
        CHECK(b.lower(p) <= b(p) + 1e-12);
        CHECK(b.contains(p, 0.5 * (b.lower(p) + b(p))));
        // The lower edge is the upper edge reflected through the centre.
        CHECK(b.lower(1.0 - p) == doctest::Approx(b.mean() - b(p)).epsilon(1e-12));
    }
    CHECK_FALSE(b.contains(0.5, b(0.5) + 1e-3));
}

TEST_CASE("grid curves extend with the asymptotes") {
    const auto c = CallCurve::from_distribution(DiscreteDistribution::uniform({0.0, 2.0}));
    CHECK(c(-3.0) == doctest::Approx(4.0));
    CHECK(c(5.0) == 0.0);
    CHECK(c(1.0) == doctest::Approx(0.5));
    CHECK_NOTHROW(c.validate());
    const auto bad = CallCurve::from_grid({0.0, 1.0}, {0.5, 0.2}, 0.5);
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    CHECK_THROWS_AS(CallCurve::from_grid({0.0, 0.0}, {0.5, 0.2}, 0.5), ValidationError);
}

#include "zonoid/numerics.hpp"

#include "zonoid/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace zonoid::num {

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x * kSqrt1_2); }

double norm_sf(double x) { return 0.5 * std::erfc(x * kSqrt1_2); }

double norm_quantile(double p) {
    if (std::isnan(p) || p < 0.0 || p > 1.0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();

    const double q = p - 0.5;
    double r;
    double val;
    if (std::fabs(q) <= 0.425) {
        r = 0.180625 - q * q;
        val = q *
              (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r +
                    67265.770927008700853) * r + 45921.953931549871457) * r +
                  13731.693765509461125) * r + 1971.5909503065514427) * r +
                133.14166789178437745) * r + 3.387132872796366608) /
              (((((((r * 5226.495278852854561 + 28729.085735721942674) * r +
                    39307.89580009271061) * r + 21213.794301586595867) * r +
                  5394.1960214247511077) * r + 687.1870074920579083) * r +
                42.313330701600911252) * r + 1.0);
        return val;
    }

    r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r +
                    0.24178072517745061177) * r + 1.27045825245236838258) * r +
                  3.64784832476320460504) * r + 5.7694972214606914055) * r +
                4.6303378461565452959) * r + 1.42343711074968357734) /
              (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r +
                    0.0151986665636164571966) * r + 0.14810397642748007459) * r +
                  0.68976733498510000455) * r + 1.6763848301838038494) * r +
                2.05319162663775882187) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r +
                    0.0012426609473880784386) * r + 0.026532189526576123093) * r +
                  0.29656057182850489123) * r + 1.7848265399172913358) * r +
                5.4637849111641143699) * r + 6.6579046435011037772) /
              (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r +
                    1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
                  0.0148753612908506148525) * r + 0.13692988092273580531) * r +
                0.59983220655588793769) * r + 1.0);
    }
    return q < 0.0 ? -val : val;
}

std::optional<Bracket> expand_bracket(const Fn& g, double start, double step, double limit) {
    const double g0 = g(start);
    if (g0 == 0.0) return Bracket{start, start};
    double inner = 0.0;
    for (double width = step; width <= limit; inner = width, width *= 2.0) {
        const double gl = g(start - width);
        if (gl == 0.0 || std::signbit(gl) != std::signbit(g0)) {
            return Bracket{start - width, start - inner};
        }
        const double gr = g(start + width);
        if (gr == 0.0 || std::signbit(gr) != std::signbit(g0)) {
            return Bracket{start + inner, start + width};
        }
    }
    return std::nullopt;
}

double solve_monotone(const Fn& g, const Fn* dg, Bracket bracket, double xtol) {
    double lo = bracket.lo;
    double hi = bracket.hi;
    double glo = g(lo);
    if (glo == 0.0) return lo;
    double ghi = g(hi);
    if (ghi == 0.0) return hi;
    if (std::signbit(glo) == std::signbit(ghi)) {
        throw RangeError("solve_monotone: bracket does not contain a sign change");
    }
    for (int iter = 0; iter < 400 && hi - lo > xtol; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if (std::signbit(gm) == std::signbit(glo)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    if (dg == nullptr) return x;

    double gx = g(x);
    for (int iter = 0; iter < 3 && gx != 0.0; ++iter) {
        const double slope = (*dg)(x);
        if (!std::isfinite(slope) || slope == 0.0) break;
        const double next = x - gx / slope;
        if (!(next >= bracket.lo && next <= bracket.hi) || std::fabs(next - x) > 4.0 * xtol + 1e-300) {
            break;
        }
        const double gn = g(next);
        if (!(std::fabs(gn) < std::fabs(gx))) break;
        x = next;
        gx = gn;
    }
    return x;
}

Minimum minimize_unimodal(const Fn& fn, double a, double b, double xtol) {
    constexpr double kGolden = 0.3819660112501051;
    const double eps = std::sqrt(std::numeric_limits<double>::epsilon());

    double x = a + kGolden * (b - a);
    double w = x;
    double v = x;
    double fx = fn(x);
    double fw = fx;
    double fv = fx;
    double d = 0.0;
    double e = 0.0;
    double lo = a;
    double hi = b;

    for (int iter = 0; iter < 500; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double tol1 = eps * std::fabs(x) + xtol / 3.0;
        const double tol2 = 2.0 * tol1;
        if (std::fabs(x - mid) <= tol2 - 0.5 * (hi - lo)) break;

        bool golden = true;
        if (std::fabs(e) > tol1) {
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::fabs(q);
            const double etemp = e;
            e = d;
            if (std::fabs(p) < std::fabs(0.5 * q * etemp) && p > q * (lo - x) && p < q * (hi - x)) {
                d = p / q;
                const double u = x + d;
                if (u - lo < tol2 || hi - u < tol2) d = x < mid ? tol1 : -tol1;
                golden = false;
            }
        }
        if (golden) {
            e = (x >= mid ? lo : hi) - x;
            d = kGolden * e;
        }
        const double u = std::fabs(d) >= tol1 ? x + d : x + (d > 0.0 ? tol1 : -tol1);
        const double fu = fn(u);
        if (fu <= fx) {
            if (u >= x) lo = x; else hi = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) lo = u; else hi = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }

    Minimum best{x, fx};
    const double fa = fn(a);
    if (fa <= best.value) best = {a, fa};
    const double fb = fn(b);
    if (fb < best.value) best = {b, fb};
    return best;
}

double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t kBlock = 64;
    if (values.size() <= kBlock) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double integrate(const Fn& fn, double a, double b, double tol) {
    if (a == b) return 0.0;
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(fn, a, b, 20, tol, &error);
}

double integrate_singular(const std::function<double(double, double)>& fn, double a, double b,
                          double tol) {
    if (a == b) return 0.0;
    boost::math::quadrature::tanh_sinh<double> integrator(15);
    return integrator.integrate(fn, a, b, tol);
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
    if (points < 2) throw DomainError("linspace: need at least 2 points");
    std::vector<double> out(points);
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) out[i] = lo + step * static_cast<double>(i);
    out.back() = hi;
    return out;
}

namespace {

double parse_double(std::string_view text) {
    std::string owned(text);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(owned, &used);
    } catch (const std::exception&) {
        throw DomainError("grid: cannot parse number '" + owned + "'");
    }
    if (used != owned.size()) throw DomainError("grid: cannot parse number '" + owned + "'");
    return value;
}

}  // namespace

GridSpec GridSpec::parse(std::string_view text) {
    const auto first = text.find(':');
    const auto second = first == std::string_view::npos ? first : text.find(':', first + 1);
    if (first == std::string_view::npos || second == std::string_view::npos ||
        text.find(':', second + 1) != std::string_view::npos) {
        throw DomainError("grid: expected lo:hi:points, got '" + std::string(text) + "'");
    }
    GridSpec spec;
    spec.lo = parse_double(text.substr(0, first));
    spec.hi = parse_double(text.substr(first + 1, second - first - 1));
    const auto count = text.substr(second + 1);
    std::size_t points = 0;
    const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), points);
    if (ec != std::errc{} || ptr != count.data() + count.size()) {
        throw DomainError("grid: cannot parse point count '" + std::string(count) + "'");
    }
    spec.points = points;
    if (!std::isfinite(spec.lo) || !std::isfinite(spec.hi) || spec.points < 2 || !(spec.lo < spec.hi)) {
        throw DomainError("grid: need finite lo < hi and at least 2 points, got '" + std::string(text) + "'");
    }
    return spec;
}

std::string GridSpec::to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << lo << ':' << hi << ':' << points;
    return os.str();
}

bool strictly_increasing(std::span<const double> xs) {
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) return false;
    }
    return true;
}

}  // namespace zonoid::num

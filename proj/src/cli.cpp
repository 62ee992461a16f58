#include "zonoid/cli.hpp"

#include "zonoid/density.hpp"
#include "zonoid/duality.hpp"
#include "zonoid/errors.hpp"
#include "zonoid/implied.hpp"
#include "zonoid/io.hpp"
#include "zonoid/local_vol.hpp"
#include "zonoid/mc.hpp"
#include "zonoid/peacock.hpp"
#include "zonoid/pricing.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace zonoid::cli {

namespace {

using io::Json;

DensityModel parse_density(const std::string& text) {
    if (!text.empty() && text.front() == '{') {
        Json j;
        try {
            j = Json::parse(text);
        } catch (const Json::exception& e) {
            throw ValidationError(std::string("density json: ") + e.what());
        }
        return io::density_from_json(j);
    }
    return io::density_from_json(Json{{"family", text}});
}

std::vector<double> parse_grid(const std::string& text) {
    const auto values = num::GridSpec::parse(text).values();
    if (values.size() < 2 || !num::strictly_increasing(values)) {
        throw ValidationError("grid '" + text + "' must be strictly increasing with at least 2 points");
    }
    return values;
}

std::vector<double> closed_grid(std::vector<double> ps) {
    std::erase_if(ps, [](double p) { return p <= 0.0 || p >= 1.0; });
    ps.insert(ps.begin(), 0.0);
    ps.push_back(1.0);
    return ps;
}

// Flags shared by every subcommand that builds a peacock family.
struct SpecFlags {
    std::string family = "linear";
    std::string density = "gaussian";
    std::string time_change = "sqrt";
    double s0 = 0.0;
    double sigma = 1.0;

    void add(CLI::App& app) {
        app.add_option("--family", family, "linear | geometric")->capture_default_str();
        app.add_option("--density", density, "family name or JSON model")->capture_default_str();
        app.add_option("--time-change", time_change, "sqrt | linear | log1p")->capture_default_str();
        app.add_option("--s0", s0, "initial price s")->capture_default_str();
        app.add_option("--sigma", sigma, "scale of the time change")->capture_default_str();
    }

    PeacockSpec spec() const {
        PeacockSpec spec;
        spec.family = peacock_family_from_string(family);
        spec.s = s0;
        spec.density = parse_density(density);
        spec.time_change = TimeChange::from_string(time_change, sigma);
        return spec;
    }
};

struct ModelFlags {
    std::string model = "bachelier";
    double s0 = 0.0;
    double sigma = 1.0;
    double t = 1.0;

    void add(CLI::App& app, bool with_model = true) {
        if (with_model) app.add_option("--model", model, "bachelier | black_scholes")->capture_default_str();
        app.add_option("--s0", s0, "initial price")->capture_default_str();
        app.add_option("--sigma", sigma, "volatility")->capture_default_str();
        app.add_option("--t", t, "maturity")->capture_default_str();
    }

    ModelParams params() const { return {model_kind_from_string(model), s0, sigma, t}; }
};

// Writes to --out when given, else to the command's stream.
class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : target_(&fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw ValidationError("cannot open output file '" + path + "'");
            target_ = &file_;
        }
    }
    std::ostream& stream() { return *target_; }

private:
    std::ofstream file_;
    std::ostream* target_;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open input file '" + path + "'");
    return in;
}

Json concavity_json(const ConcavityReport& r) {
    Json j{{"is_concave", r.is_concave}, {"max_violation", r.max_violation}};
    if (r.witness) {
        j["witness"] = *r.witness;
        j["witness_second_difference"] = r.witness_second_difference;
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

void write_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

struct Context {
    std::ostream& out;
    std::ostream& err;
    std::string out_path;
    std::string format = "csv";
    int status = 0;
};

void cmd_price(Context& ctx, const ModelFlags& m, const std::string& family, const std::string& density,
               const std::vector<double>& strikes) {
    std::vector<double> calls;
    std::vector<double> survival;
    if (family.empty()) {
        const auto params = m.params();
        for (double k : strikes) {
            if (params.model == ModelKind::bachelier) {
                calls.push_back(bachelier_call(params, k));
                survival.push_back(bachelier_survival(params, k));
            } else {
                calls.push_back(black_scholes_call(params, k));
                survival.push_back(black_scholes_survival(params, k));
            }
        }
    } else {
        PeacockSpec spec;
        spec.family = peacock_family_from_string(family);
        spec.s = m.s0;
        spec.density = parse_density(density);
        spec.time_change = TimeChange::sqrt(m.sigma);
        const double y = spec.time_change(m.t);
        const auto curve = family_call_curve(spec, m.t);
        for (double k : strikes) {
            calls.push_back(curve(k));
            if (y == 0.0) survival.push_back(spec.s >= k ? 1.0 : 0.0);
            else if (spec.family == PeacockFamily::linear) survival.push_back(survival_linear(spec.density, spec.s, y, k).value);
            else survival.push_back(survival_geometric(spec.density, spec.s, y, k).value);
        }
    }
    Output o(ctx.out_path, ctx.out);
    io::write_csv(o.stream(), {"K", "C", "survival"}, {strikes, calls, survival});
}

// From a K,C file when given, else from the model's closed form.
ZonoidBoundary boundary_for(const std::optional<std::string>& calls_path, double mean, const ModelFlags& m,
                            const std::vector<double>& ps) {
    if (calls_path) {
        auto in = open_input(*calls_path);
        return upper_boundary_from_calls(io::read_calls_csv(in, mean), ps);
    }
    return upper_boundary_from_calls(model_call_curve(m.params()), ps);
}

void emit_boundary(Context& ctx, const ZonoidBoundary& b, Json provenance) {
    Output o(ctx.out_path, ctx.out);
    if (ctx.format == "json") {
        const auto p = b.probs();
        const auto v = b.values();
        write_json(o.stream(), io::envelope(b.mean(), std::move(provenance),
                                            {{"p", std::vector<double>(p.begin(), p.end())},
                                             {"Chat", std::vector<double>(v.begin(), v.end())}}));
    } else {
        io::write_boundary_csv(o.stream(), b);
    }
}

void emit_calls(Context& ctx, const CallCurve& c, Json provenance) {
    Output o(ctx.out_path, ctx.out);
    if (ctx.format == "json") {
        const auto k = c.strikes();
        const auto v = c.values();
        write_json(o.stream(), io::envelope(c.mean(), std::move(provenance),
                                            {{"K", std::vector<double>(k.begin(), k.end())},
                                             {"C", std::vector<double>(v.begin(), v.end())}}));
    } else {
        io::write_calls_csv(o.stream(), c);
    }
}

Json model_provenance(const ModelFlags& m) {
    return {{"model", m.model}, {"s0", m.s0}, {"sigma", m.sigma}, {"t", m.t}};
}

void write_localvol_rows(std::ostream& out, const std::vector<LocalVolResult>& rows) {
    out << "t,K,sigma_sq,method\n";
    for (const auto& r : rows) {
        out << io::format_double(r.t) << ',' << io::format_double(r.K) << ',' << io::format_double(r.sigma_sq) << ','
            << to_string(r.method) << '\n';
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Call prices, lift zonoids and log-concave peacocks", "zonoid-lab"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    Context ctx{out, err, {}, "csv", 0};
    app.add_option("-o,--out", ctx.out_path, "output file (default: stdout)");
    app.add_option("--format", ctx.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    std::function<void()> action;

    // price
    auto* price = app.add_subcommand("price", "Closed-form call prices and survival probabilities");
    ModelFlags price_m;
    price_m.add(*price);
    std::string price_family;
    std::string price_density = "gaussian";
    std::vector<double> price_k;
    price->add_option("--family", price_family, "peacock family (linear | geometric); Y = sigma sqrt(t)");
    price->add_option("--density", price_density, "density for --family")->capture_default_str();
    price->add_option("--k", price_k, "strike (repeatable)")->required();
    price->callback([&] { action = [&] { cmd_price(ctx, price_m, price_family, price_density, price_k); }; });

    // boundary
    auto* boundary = app.add_subcommand("boundary", "Zonoid upper boundary from a call curve");
    ModelFlags boundary_m;
    boundary_m.add(*boundary);
    std::optional<std::string> boundary_calls;
    double boundary_mean = 0.0;
    std::string boundary_grid = "0:1:101";
    boundary->add_option("--calls", boundary_calls, "K,C csv file");
    boundary->add_option("--mean", boundary_mean, "mean of the law for --calls")->capture_default_str();
    boundary->add_option("--p-grid", boundary_grid, "lo:hi:points")->capture_default_str();
    boundary->callback([&] {
        action = [&] {
            const auto b =
                boundary_for(boundary_calls, boundary_mean, boundary_m, closed_grid(parse_grid(boundary_grid)));
            Json prov = boundary_calls ? Json{{"calls", *boundary_calls}} : model_provenance(boundary_m);
            emit_boundary(ctx, b, prov);
        };
    });

    // calls
    auto* calls = app.add_subcommand("calls", "Call curve from a zonoid boundary");
    std::optional<std::string> calls_boundary;
    double calls_mean = 0.0;
    std::string calls_kgrid;
    SpecFlags calls_spec;
    double calls_t = 1.0;
    calls->add_option("--boundary", calls_boundary, "p,Chat csv file");
    calls->add_option("--mean", calls_mean, "mean of the law for --boundary")->capture_default_str();
    calls->add_option("--k-grid", calls_kgrid, "lo:hi:points")->required();
    calls->add_option("--t", calls_t, "time for the family boundary")->capture_default_str();
    calls_spec.add(*calls);
    calls->callback([&] {
        action = [&] {
            const auto ks = parse_grid(calls_kgrid);
            if (calls_boundary) {
                auto in = open_input(*calls_boundary);
                emit_calls(ctx, calls_from_upper_boundary(io::read_boundary_csv(in, calls_mean), ks),
                           {{"boundary", *calls_boundary}});
                return;
            }
            const auto spec = calls_spec.spec();
            const double t = calls_t;
            const auto b = ZonoidBoundary::closed_form([spec, t](double p) { return surface_boundary(spec, t, p); },
                                                       spec.s);
            Json prov = io::spec_to_json(spec);
            prov["t"] = t;
            emit_calls(ctx, calls_from_upper_boundary(b, ks), prov);
        };
    });

    // surface
    auto* surface = app.add_subcommand("surface", "Peacock surface on a (t, p) or (t, K) grid");
    SpecFlags surface_spec;
    surface_spec.add(*surface);
    std::string surface_t;
    std::string surface_p = "0:1:101";
    std::string surface_k;
    surface->add_option("--t-grid", surface_t, "lo:hi:points")->required();
    surface->add_option("--p-grid", surface_p, "lo:hi:points (zonoid space)")->capture_default_str();
    surface->add_option("--k-grid", surface_k, "lo:hi:points (switches to call space)");
    surface->callback([&] {
        action = [&] {
            const auto spec = surface_spec.spec();
            const auto ts = parse_grid(surface_t);
            const auto grid = surface_k.empty() ? zonoid_surface(spec, ts, parse_grid(surface_p))
                                                : call_surface(spec, ts, parse_grid(surface_k));
            Output o(ctx.out_path, ctx.out);
            if (ctx.format == "json") {
                write_json(o.stream(), {{"spec", io::spec_to_json(spec)},
                                        {"axis", grid.axis == SurfaceGrid::Axis::call_space ? "K" : "p"},
                                        {"times", grid.times},
                                        {"second_axis", grid.second_axis},
                                        {"values", grid.values}});
            } else {
                io::write_surface_csv(o.stream(), grid);
            }
        };
    });

    // certify
    auto* certify = app.add_subcommand("certify", "Concavity and Kellerer certificate for a peacock family");
    SpecFlags certify_spec;
    certify_spec.add(*certify);
    std::string certify_t = "0.25:4:16";
    std::string certify_p = "0:1:201";
    certify->add_option("--t-grid", certify_t, "lo:hi:points")->capture_default_str();
    certify->add_option("--p-grid", certify_p, "lo:hi:points")->capture_default_str();
    certify->callback([&] {
        action = [&] {
            const auto spec = certify_spec.spec();
            const auto cert = certify_peacock(spec, parse_grid(certify_t), parse_grid(certify_p));
            Json k{{"calls_monotone", cert.kellerer.calls_monotone},
                   {"mean_constant", cert.kellerer.mean_constant},
                   {"max_call_decrease", cert.kellerer.max_call_decrease},
                   {"max_mean_drift", cert.kellerer.max_mean_drift},
                   {"witness", cert.kellerer.witness ? Json(*cert.kellerer.witness) : Json(nullptr)}};
            Json j{{"spec", io::spec_to_json(spec)},
                   {"passed", cert.passed()},
                   {"concavity", concavity_json(cert.concavity)},
                   {"concavity_time", cert.concavity_time ? Json(*cert.concavity_time) : Json(nullptr)},
                   {"kellerer", k}};
            Output o(ctx.out_path, ctx.out);
            write_json(o.stream(), j);
            if (!cert.passed()) ctx.status = 2;
        };
    });

    // implied
    auto* implied = app.add_subcommand("implied", "Generalized implied volatility y*");
    std::string implied_density = "gaussian";
    double implied_c = 0.0;
    double implied_k = 1.0;
    std::string implied_method = "root";
    implied->add_option("--density", implied_density, "family name or JSON model")->capture_default_str();
    implied->add_option("--c", implied_c, "normalised call price")->required();
    implied->add_option("--k", implied_k, "normalised strike")->required();
    implied->add_option("--method", implied_method, "root | min")
        ->check(CLI::IsMember({"root", "min"}))
        ->capture_default_str();
    implied->callback([&] {
        action = [&] {
            const ImpliedQuery q{parse_density(implied_density), implied_c, implied_k};
            double y = 0.0;
            std::optional<double> p_hat;
            bool fallback = false;
            if (implied_method == "min") {
                const auto r = implied_y_minimization(q);
                y = r.y;
                p_hat = r.p_hat;
                fallback = r.used_fallback_scan;
            } else {
                y = implied_y_root(q);
                if (y > 0.0) {
                    try {
                        p_hat = q.density.cdf(inverse_ratio(q.density, y, q.K));
                    } catch (const RangeError&) {
                    }
                }
            }
            Json j{{"density", io::density_to_json(q.density)},
                   {"c", q.c},
                   {"K", q.K},
                   {"method", implied_method},
                   {"y", y},
                   {"p_hat", p_hat ? Json(*p_hat) : Json(nullptr)}};
            if (implied_method == "min") j["used_fallback_scan"] = fallback;
            Output o(ctx.out_path, ctx.out);
            write_json(o.stream(), j);
        };
    });

    // localvol
    auto* localvol = app.add_subcommand("localvol", "Local variance of a peacock family");
    SpecFlags lv_spec;
    lv_spec.add(*localvol);
    std::string lv_from = "closed";
    std::string lv_t = "0.5:1.5:21";
    std::string lv_k;
    std::string lv_p = "0.05:0.95:91";
    localvol->add_option("--from", lv_from, "calls | boundary | closed")
        ->check(CLI::IsMember({"calls", "boundary", "closed"}))
        ->capture_default_str();
    localvol->add_option("--t-grid", lv_t, "lo:hi:points")->capture_default_str();
    localvol->add_option("--k-grid", lv_k, "lo:hi:points (calls, closed)");
    localvol->add_option("--p-grid", lv_p, "lo:hi:points (boundary)")->capture_default_str();
    localvol->callback([&] {
        action = [&] {
            const auto spec = lv_spec.spec();
            const bool geometric = spec.family == PeacockFamily::geometric;
            const auto ts = parse_grid(lv_t);
            std::vector<LocalVolResult> rows;
            // The geometric family reports sigma-bar^2 so both families share one scale.
            const auto convention = [geometric](LocalVolResult r) {
                if (geometric) r.sigma_sq = r.sigma_bar_sq;
                return r;
            };
            if (lv_from == "boundary") {
                const auto grid = zonoid_surface(spec, ts, parse_grid(lv_p));
                for (std::size_t a = 1; a + 1 < ts.size(); ++a) {
                    for (std::size_t j = 1; j + 1 < grid.second_axis.size(); ++j) {
                        rows.push_back(convention(dupire_from_boundary(grid, ts[a], grid.second_axis[j])));
                    }
                }
            } else {
                if (lv_k.empty()) throw ValidationError("localvol: --k-grid is required for --from " + lv_from);
                const auto ks = parse_grid(lv_k);
                if (lv_from == "calls") {
                    const auto grid = call_surface(spec, ts, ks);
                    for (std::size_t a = 1; a + 1 < ts.size(); ++a) {
                        for (std::size_t i = 1; i + 1 < ks.size(); ++i) {
                            rows.push_back(convention(dupire_from_calls(grid, ts[a], ks[i])));
                        }
                    }
                } else {
                    for (double t : ts) {
                        for (double k : ks) {
                            rows.push_back(convention(
                                geometric ? localvol_geometric_closed(spec.density, spec.time_change, spec.s, t, k)
                                          : localvol_linear_closed(spec.density, spec.time_change, spec.s, t, k)));
                        }
                    }
                }
            }
            Output o(ctx.out_path, ctx.out);
            write_localvol_rows(o.stream(), rows);
        };
    });

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo calls and proposition checks");
    std::string sim_model = "bachelier";
    double sim_t = 1.0;
    std::size_t sim_n = 100000;
    std::uint64_t sim_seed = 1;
    std::string sim_kgrid = "-2:2:9";
    std::string sim_pgrid = "0.1:0.9:9";
    bool sim_antithetic = false;
    bool sim_check = false;
    unsigned sim_threads = 0;
    simulate->add_option("--model", sim_model, "bachelier | black_scholes")->capture_default_str();
    simulate->add_option("--t", sim_t, "maturity")->capture_default_str();
    simulate->add_option("--n", sim_n, "number of paths")->capture_default_str();
    simulate->add_option("--seed", sim_seed, "64-bit seed")->capture_default_str();
    simulate->add_option("--k-grid", sim_kgrid, "lo:hi:points")->capture_default_str();
    simulate->add_option("--p-grid", sim_pgrid, "lo:hi:points for --check-propositions")->capture_default_str();
    simulate->add_option("--threads", sim_threads, "workers (0: hardware count)")->capture_default_str();
    simulate->add_flag("--antithetic", sim_antithetic, "antithetic pairs");
    simulate->add_flag("--check-propositions", sim_check, "compare the empirical boundary with the closed forms");
    simulate->callback([&] {
        action = [&] {
            SimConfig cfg{model_kind_from_string(sim_model), sim_t, sim_n, sim_seed, sim_antithetic, sim_threads};
            cfg.validate();
            Output o(ctx.out_path, ctx.out);
            if (sim_check) {
                const auto r = mc_check_propositions(cfg, parse_grid(sim_pgrid));
                Json rows = Json::array();
                for (const auto& row : r.rows) {
                    rows.push_back({{"p", row.p},
                                    {"empirical", row.empirical},
                                    {"closed", row.closed},
                                    {"std_error", row.std_error},
                                    {"deviation_se", row.deviation_se}});
                }
                write_json(o.stream(), {{"model", to_string(r.model)},
                                        {"t", r.t},
                                        {"n", r.n},
                                        {"seed", sim_seed},
                                        {"rows", rows},
                                        {"max_deviation_se", r.max_deviation_se},
                                        {"projection_distance", r.projection_distance}});
                return;
            }
            const auto sample = simulate_terminal(cfg);
            const auto ks = parse_grid(sim_kgrid);
            std::vector<double> values;
            std::vector<double> errors;
            for (double k : ks) {
                const auto e = mc_call(cfg, sample, k);
                values.push_back(e.value);
                errors.push_back(e.std_error);
            }
            io::write_csv(o.stream(), {"K", "mc_value", "std_error"}, {ks, values, errors});
        };
    });

    // recover
    auto* recover = app.add_subcommand("recover", "Recover F from G or from the group H");
    std::string rec_density = "gaussian";
    std::string rec_from = "G";
    std::optional<double> rec_anchor;
    double rec_p0 = 0.5;
    std::string rec_pgrid = "0.01:0.99:99";
    std::string rec_xgrid = "0:3:31";
    recover->add_option("--density", rec_density, "family name or JSON model")->capture_default_str();
    recover->add_option("--from", rec_from, "G | H")->check(CLI::IsMember({"G", "H"}))->capture_default_str();
    recover->add_option("--anchor", rec_anchor, "a = F^{-1}(p0) (default: exact)");
    recover->add_option("--p0", rec_p0, "anchor probability")->capture_default_str();
    recover->add_option("--p-grid", rec_pgrid, "lo:hi:points (from G)")->capture_default_str();
    recover->add_option("--x-grid", rec_xgrid, "lo:hi:points (from H)")->capture_default_str();
    recover->callback([&] {
        action = [&] {
            const auto density = parse_density(rec_density);
            const double anchor = rec_anchor ? *rec_anchor : density.quantile(rec_p0);
            Output o(ctx.out_path, ctx.out);
            if (rec_from == "G") {
                const auto ps = parse_grid(rec_pgrid);
                const auto xs = recover_F_from_G([&](double p) { return G_map(density, p); }, anchor, rec_p0, ps);
                io::write_csv(o.stream(), {"p", "x"}, {ps, xs});
            } else {
                const auto xs = parse_grid(rec_xgrid);
                std::vector<double> fs;
                for (double x : xs) fs.push_back(recover_F_from_H(density, anchor, rec_p0, x));
                io::write_csv(o.stream(), {"x", "F"}, {xs, fs});
            }
        };
    });

    // density-check
    auto* dcheck = app.add_subcommand("density-check", "Second-difference log-concavity certificate");
    std::string dc_density = "gaussian";
    std::string dc_grid = "-10:10:2001";
    dcheck->add_option("--density", dc_density, "family name or JSON model")->capture_default_str();
    dcheck->add_option("--grid", dc_grid, "lo:hi:points")->capture_default_str();
    dcheck->callback([&] {
        action = [&] {
            const auto density = parse_density(dc_density);
            const auto grid = num::GridSpec::parse(dc_grid);
            const auto report = check_log_concavity(density, grid);
            Json j = concavity_json(report);
            j["density"] = io::density_to_json(density);
            j["grid"] = grid.to_string();
            Output o(ctx.out_path, ctx.out);
            write_json(o.stream(), j);
            if (!report.is_concave) ctx.status = 2;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 1;
    }

    try {
        if (action) action();
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        // Every library error is a validation or domain failure of the inputs.
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return ctx.status;
}

}  // namespace zonoid::cli

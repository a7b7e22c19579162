#include "slelab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "slelab/boundary_stats.hpp"
#include "slelab/conformal.hpp"
#include "slelab/dyadic.hpp"
#include "slelab/geometry.hpp"
#include "slelab/io.hpp"
#include "slelab/spectrum.hpp"
#include "slelab/types.hpp"
#include "slelab/version.hpp"

namespace slelab {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where, std::vector<Diagnostic>* diags = nullptr) {
    if (!j.is_object()) {
        const std::string msg = where + ": expected an object";
        if (diags) {
            diags->push_back({true, msg});
            return;
        }
        throw ParameterError(msg);
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) {
            const std::string msg = where + ": unknown key '" + key + "'";
            if (diags) diags->push_back({true, msg});
            else throw ParameterError(msg);
        }
    }
}

json params_of(const ExperimentConfig& cfg) {
    const json root = json::parse(cfg.raw_json);
    return root.value("params", json::object());
}

Complex complex_param(const json& j) {
    return Complex(j.at(0).get<double>(), j.at(1).get<double>());
}

// ---- map specification ------------------------------------------------

const std::initializer_list<const char*> kMapKeys = {"kind",   "a",     "b",        "c",
                                                     "d",      "source", "rotation", "depth",
                                                     "flatness", "value"};

ConformalMap map_from_spec(const json& spec) {
    check_keys(spec, kMapKeys, "map");
    const std::string kind = spec.at("kind").get<std::string>();
    if (kind == "identity") return ConformalMap::identity(SourceDomain::disk);
    if (kind == "koebe") return ConformalMap::koebe();
    if (kind == "disk_automorphism")
        return ConformalMap::disk_automorphism(complex_param(spec.at("a")),
                                               spec.value("rotation", 0.0));
    if (kind == "moebius") {
        const std::string src = spec.value("source", "disk");
        return ConformalMap::moebius(src == "disk" ? SourceDomain::disk
                                                   : SourceDomain::half_plane,
                                     complex_param(spec.at("a")), complex_param(spec.at("b")),
                                     complex_param(spec.at("c")), complex_param(spec.at("d")));
    }
    if (kind == "snowflake")
        return build_boundary_map(
            koch_snowflake(spec.at("depth").get<int>(), spec.at("flatness").get<double>()));
    if (kind == "descriptor") return ConformalMap::from_json(spec.at("value").dump());
    throw ParameterError("map: unknown kind '" + kind + "'");
}

void validate_map_spec(const json& spec, std::vector<Diagnostic>& diags,
                       const std::string& where) {
    if (!spec.is_object() || !spec.contains("kind")) {
        diags.push_back({true, where + ": map spec must be an object with a 'kind'"});
        return;
    }
    check_keys(spec, kMapKeys, where, &diags);
    const std::string kind = spec.value("kind", "");
    if (kind == "snowflake") {
        const double flat = spec.value("flatness", 0.0);
        const int depth = spec.value("depth", -1);
        if (!(flat > 0.0 && flat < 1.0))
            diags.push_back({true, where + ": snowflake flatness must be in (0, 1)"});
        if (depth < 0 || depth > 8)
            diags.push_back({true, where + ": snowflake depth must be in [0, 8]"});
    } else if (kind == "disk_automorphism") {
        if (!spec.contains("a") || std::abs(complex_param(spec.at("a"))) >= 1.0)
            diags.push_back({true, where + ": automorphism parameter |a| must be < 1"});
    } else if (kind != "identity" && kind != "koebe" && kind != "moebius" &&
               kind != "descriptor") {
        diags.push_back({true, where + ": unknown map kind '" + kind + "'"});
    }
}

// ---- frostman measure spec ---------------------------------------------

FrostmanMeasure measure_from_spec(const json& spec) {
    check_keys(spec, {"kind", "stage", "n_atoms", "x"}, "measure");
    const std::string kind = spec.at("kind").get<std::string>();
    if (kind == "cantor") return FrostmanMeasure::cantor_middle_thirds(spec.value("stage", 8));
    if (kind == "uniform")
        return FrostmanMeasure::uniform_grid(spec.value("n_atoms", std::size_t{256}));
    if (kind == "point") return FrostmanMeasure::point_mass(spec.value("x", 1.5));
    throw ParameterError("measure: unknown kind '" + kind + "'");
}

// ---- output helpers ------------------------------------------------------

struct OutputSink {
    std::filesystem::path dir;
    std::vector<ManifestEntry> entries;

    void write(const std::string& name, const std::string& bytes) {
        write_text_file(dir / name, bytes);
        entries.push_back({name, fnv1a64_hex(bytes)});
    }
};

std::string slope_tag(double slope) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", slope);
    return buf;
}

std::string table_csv(const char* header, const std::vector<double>& a,
                      const std::vector<double>& b, const std::vector<double>* c = nullptr,
                      const std::vector<double>* d = nullptr) {
    std::ostringstream out;
    out << header << '\n';
    for (std::size_t i = 0; i < a.size(); ++i) {
        out << format_g17(a[i]) << ',' << format_g17(b[i]);
        if (c) out << ',' << format_g17((*c)[i]);
        if (d) out << ',' << format_g17((*d)[i]);
        out << '\n';
    }
    return out.str();
}

} // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParameterError(std::string("config: invalid JSON: ") + e.what());
    }
    check_keys(j, {"kind", "seed", "output_dir", "budget", "params"}, "config");
    ExperimentConfig cfg;
    cfg.kind = j.value("kind", "");
    if (cfg.kind.empty()) throw ParameterError("config: missing 'kind'");
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.output_dir = j.value("output_dir", std::string("out"));
    if (j.contains("budget")) {
        const json& b = j.at("budget");
        check_keys(b, {"max_traces", "max_squares", "max_seconds"}, "budget");
        if (b.contains("max_traces")) cfg.max_traces = b.at("max_traces").get<std::size_t>();
        if (b.contains("max_squares")) cfg.max_squares = b.at("max_squares").get<std::size_t>();
        if (b.contains("max_seconds")) cfg.max_seconds = b.at("max_seconds").get<double>();
    }
    cfg.raw_json = j.dump(2);
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& file) {
    return parse(read_text_file(file));
}

std::vector<Diagnostic> validate(const ExperimentConfig& cfg) {
    std::vector<Diagnostic> diags;
    const json params = params_of(cfg);
    auto err = [&](const std::string& m) { diags.push_back({true, m}); };
    auto warn = [&](const std::string& m) { diags.push_back({false, m}); };

    const std::string& kind = cfg.kind;
    if (kind == "sieve" || kind == "holder") {
        check_keys(params,
                   {"map", "p", "N", "mode", "n_max", "quadrature_order", "exponent", "pairs"},
                   kind, &diags);
        if (params.contains("map")) validate_map_spec(params.at("map"), diags, kind);
        else err(kind + ": missing 'map'");
        const double p = params.value("p", -1.0);
        if (!(p > 0.0 && p < 1.0)) err(kind + ": p must be in (0, 1)");
        if (params.value("N", 1) < 1) err(kind + ": N must be >= 1");
        const std::string mode = params.value("mode", "bounded");
        if (mode != "bounded" && mode != "unbounded" && mode != "refined")
            err(kind + ": mode must be bounded|unbounded|refined");
        if (mode == "refined" && p > 0.0 && p < 1.0 && 6.0 * std::sqrt(1.0 - p) >= 1.0)
            warn(kind + ": exponent 1 - 6*sqrt(1-p) <= 0; the refined bound is inapplicable "
                        "for p <= 35/36");
        if (kind == "holder") {
            const double e = params.value("exponent", 0.5);
            if (!(e > 0.0 && e <= 1.0)) err("holder: exponent must be in (0, 1]");
        }
    } else if (kind == "spectrum") {
        check_keys(params, {"map", "t", "j_min", "j_max"}, kind, &diags);
        if (params.contains("map")) validate_map_spec(params.at("map"), diags, kind);
        else err("spectrum: missing 'map'");
        if (!params.contains("t")) err("spectrum: missing exponent 't'");
        if (params.value("j_min", 4) < 1 || params.value("j_max", 12) <= params.value("j_min", 4))
            err("spectrum: need 1 <= j_min < j_max");
    } else if (kind == "john-dimension") {
        check_keys(params, {"map", "kappa"}, kind, &diags);
        if (params.contains("map")) validate_map_spec(params.at("map"), diags, kind);
        else err("john-dimension: missing 'map'");
        const double k = params.value("kappa", 0.0);
        if (!(k > 4.0 && k <= 8.0)) err("john-dimension: kappa must be in (4, 8]");
    } else if (kind == "hitting") {
        check_keys(params, {"kappa", "center_angle", "radii", "n_traces", "delta", "horizon",
                            "n_steps"},
                   kind, &diags);
        const double k = params.value("kappa", 0.0);
        if (!(k > 0.0 && k < 8.0)) err("hitting: kappa must be in (0, 8)");
        else if (!(k > 4.0)) warn("hitting: kappa <= 4 is a control run (trace avoids the "
                                  "boundary); the hitting bound regime is kappa in (4, 8)");
        const double delta = params.value("delta", 0.5);
        const double t = std::abs(params.value("center_angle", 0.0));
        if (!(t > delta && t < kPi - delta))
            err("hitting: need delta < |center_angle| < pi - delta");
        if (!params.contains("radii") || params.at("radii").empty())
            err("hitting: missing 'radii'");
        else
            for (const auto& r : params.at("radii")) {
                const double rv = r.get<double>();
                if (rv < 2.0 && !(rv > 0.0 && rv < delta / 2.0))
                    err("hitting: radius must be in (0, delta/2) or >= 2");
            }
        if (params.value("n_traces", std::size_t{0}) == 0) err("hitting: n_traces must be > 0");
    } else if (kind == "line-dimension") {
        check_keys(params, {"kappa", "n_traces", "scales", "horizon", "n_steps"}, kind, &diags);
        const double k = params.value("kappa", 0.0);
        if (!(k > 0.0 && k <= 8.0)) err("line-dimension: kappa must be in (0, 8]");
        else if (!(k > 4.0))
            warn("line-dimension: kappa <= 4 gives a degenerate experiment (no boundary "
                 "visits)");
        if (!params.contains("scales") || params.at("scales").empty())
            err("line-dimension: missing 'scales'");
        if (params.value("n_traces", std::size_t{0}) == 0)
            err("line-dimension: n_traces must be > 0");
    } else if (kind == "frostman") {
        check_keys(params, {"kappa", "measure", "eps", "n_traces", "horizon", "n_steps"}, kind,
                   &diags);
        const double k = params.value("kappa", 0.0);
        if (!(k > 0.0 && k < 8.0)) err("frostman: kappa must be in (0, 8)");
        else if (!(k > 4.0)) warn("frostman: kappa <= 4 makes the boundary exponent >= 1; "
                                  "expect empty hitting sets");
        if (!params.contains("measure")) err("frostman: missing 'measure'");
        if (!params.contains("eps") || params.at("eps").empty()) err("frostman: missing 'eps'");
        if (params.value("n_traces", std::size_t{0}) == 0) err("frostman: n_traces must be > 0");
    } else if (kind == "trace-boundary") {
        check_keys(params, {"map", "kappa", "n_traces", "scales", "n_targets", "horizon",
                            "n_steps"},
                   kind, &diags);
        if (params.contains("map")) validate_map_spec(params.at("map"), diags, kind);
        else err("trace-boundary: missing 'map'");
        const double k = params.value("kappa", 0.0);
        if (!(k > 4.0 && k <= 8.0)) err("trace-boundary: kappa must be in (4, 8]");
        if (!params.contains("scales") || params.at("scales").empty())
            err("trace-boundary: missing 'scales'");
        if (params.value("n_traces", std::size_t{0}) == 0)
            err("trace-boundary: n_traces must be > 0");
    } else if (kind == "dkappa") {
        check_keys(params, {"kappa", "c", "alpha", "map"}, kind, &diags);
        const double k = params.value("kappa", 0.0);
        if (!(k > 4.0 && k < 8.0)) err("dkappa: kappa must be in (4, 8)");
        if (params.contains("map")) validate_map_spec(params.at("map"), diags, kind);
    } else {
        err("config: unknown experiment kind '" + kind + "'");
    }
    return diags;
}

namespace {

struct BudgetState {
    std::chrono::steady_clock::time_point start;
    std::optional<double> max_seconds;
    bool truncated = false;

    std::size_t clamp_traces(std::size_t requested, std::optional<std::size_t> max_traces) {
        std::size_t n = requested;
        if (max_traces && n > *max_traces) {
            n = *max_traces;
            truncated = true;
        }
        return n;
    }

    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }

    /// Halves the trace count until a pilot-timed projection fits the
    /// remaining wall budget. Truncated runs are marked in the manifest and
    /// are not byte-reproducible.
    std::size_t fit_time(std::size_t n, const std::function<void(std::size_t)>& pilot) {
        if (!max_seconds) return n;
        const std::size_t n_pilot = std::clamp<std::size_t>(n / 64, 8, 200);
        if (n_pilot >= n) return n;
        const auto t0 = std::chrono::steady_clock::now();
        pilot(n_pilot);
        const double per =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() /
            static_cast<double>(n_pilot);
        const double remaining = *max_seconds - elapsed();
        std::size_t fit = n;
        while (fit > n_pilot && per * static_cast<double>(fit) > 0.85 * remaining) fit /= 2;
        if (fit < n) truncated = true;
        return fit;
    }
};

FlowOptions flow_from_params(const json& params, double default_horizon,
                             std::size_t default_steps, std::size_t threads) {
    FlowOptions flow;
    flow.horizon = params.value("horizon", default_horizon);
    flow.n_steps = params.value("n_steps", default_steps);
    flow.threads = threads;
    if (!(flow.horizon > 0.0)) throw ParameterError("flow: horizon must be > 0");
    if (flow.n_steps < 16) throw ParameterError("flow: n_steps must be >= 16");
    return flow;
}

std::vector<double> doubles_of(const json& arr) {
    std::vector<double> v;
    for (const auto& x : arr) v.push_back(x.get<double>());
    return v;
}

json fit_json(const std::vector<double>& scales, const std::vector<double>& values) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (values[i] <= 0.0 || scales[i] <= 0.0) continue;
        xs.push_back(std::log(1.0 / scales[i]));
        ys.push_back(std::log(values[i]));
    }
    const LineFit f = fit_line(xs, ys);
    return {{"slope", f.slope}, {"r_squared", f.r_squared}};
}

} // namespace

std::string RunManifest::to_json(const std::string& config_echo) const {
    json files = json::array();
    for (const ManifestEntry& e : outputs) files.push_back({{"file", e.file}, {"digest", e.digest}});
    json j = {{"kind", kind},
              {"version", version},
              {"wall_seconds", wall_seconds},
              {"truncated", truncated},
              {"outputs", files},
              {"config", json::parse(config_echo)}};
    return j.dump(2);
}

RunManifest run(const ExperimentConfig& cfg, const RunOverrides& overrides) {
    {
        std::vector<Diagnostic> diags = validate(cfg);
        for (const Diagnostic& d : diags)
            if (d.is_error) throw ParameterError("config: " + d.message);
    }

    const json params = params_of(cfg);
    const std::uint64_t seed = overrides.seed.value_or(cfg.seed);
    const std::size_t threads = overrides.threads;

    OutputSink sink;
    sink.dir = overrides.output_dir.value_or(cfg.output_dir);
    std::filesystem::create_directories(sink.dir);

    BudgetState budget;
    budget.start = std::chrono::steady_clock::now();
    budget.max_seconds = cfg.max_seconds;

    const std::string& kind = cfg.kind;

    if (kind == "sieve") {
        const ConformalMap map = map_from_spec(params.at("map"));
        SieveOptions opts;
        opts.n_max = params.value("n_max", 14);
        opts.quadrature_order = params.value("quadrature_order", 16);
        opts.threads = threads;
        if (cfg.max_squares) {
            opts.max_total_squares = *cfg.max_squares;
            // Shrink the scan to fit the square budget instead of failing.
            std::size_t total = 0;
            int n_fit = params.value("N", 1) - 1;
            for (int n = params.value("N", 1); n <= opts.n_max; ++n) {
                total += static_cast<std::size_t>(1) << n;
                if (total > opts.max_total_squares) break;
                n_fit = n;
            }
            if (n_fit < opts.n_max) {
                opts.n_max = n_fit;
                budget.truncated = true;
            }
        }
        const SieveResult sieve =
            classify_squares(map, params.at("p").get<double>(), params.value("N", 1),
                             sieve_mode_from_name(params.value("mode", "bounded")), opts);
        sink.write("sieve.json", sieve.to_json());
    } else if (kind == "holder") {
        const ConformalMap map = map_from_spec(params.at("map"));
        SieveOptions opts;
        opts.n_max = params.value("n_max", 12);
        opts.threads = threads;
        const double p = params.at("p").get<double>();
        const SieveMode mode = sieve_mode_from_name(params.value("mode", "bounded"));
        const SieveResult sieve = classify_squares(map, p, params.value("N", 3), mode, opts);
        const double exponent = params.contains("exponent")
                                    ? params.at("exponent").get<double>()
                                    : (mode == SieveMode::refined ? refined_holder_exponent(p)
                                                                  : p / 2.0);
        const std::size_t pairs = params.value("pairs", std::size_t{2000});
        const HolderReport rep = verify_holder(map, sieve, exponent, pairs, seed);
        json j = {{"exponent", rep.exponent},
                  {"fitted_constant", rep.fitted_constant},
                  {"pairs", rep.pairs},
                  {"worst_z", {rep.worst_z.real(), rep.worst_z.imag()}},
                  {"worst_zp", {rep.worst_zp.real(), rep.worst_zp.imag()}},
                  {"sieve_mode", sieve_mode_name(mode)},
                  {"p", p},
                  {"content_bound", sieve.content_bound}};
        sink.write("holder.json", j.dump(2));
    } else if (kind == "spectrum") {
        const ConformalMap map = map_from_spec(params.at("map"));
        SpectrumOptions opts;
        opts.j_min = params.value("j_min", 4);
        opts.j_max = params.value("j_max", 12);
        opts.threads = threads;
        const SpectrumEstimate est = estimate_beta(map, params.at("t").get<double>(), opts);
        sink.write("spectrum.csv", est.to_csv());
        sink.write("spectrum.json", est.to_json());
        LogLogPlot plot;
        plot.title = "integral means vs 1/(1-r)";
        plot.x_label = "1/(1-r)";
        plot.y_label = "circle mean";
        for (std::size_t i = 0; i < est.radii.size(); ++i) {
            plot.x.push_back(1.0 / (1.0 - est.radii[i]));
            plot.y.push_back(est.means[i]);
        }
        plot.fit_slope = est.beta_hat;
        // log10 intercept through the mean point
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < plot.x.size(); ++i) {
            mx += std::log10(plot.x[i]);
            my += std::log10(plot.y[i]);
        }
        plot.fit_intercept = my / plot.x.size() - est.beta_hat * mx / plot.x.size();
        sink.write("spectrum_beta_" + slope_tag(est.beta_hat) + ".svg", render_svg(plot));
    } else if (kind == "john-dimension") {
        const ConformalMap map = map_from_spec(params.at("map"));
        SpectrumOptions opts;
        opts.threads = threads;
        const JohnDimensionResult res =
            solve_john_dimension(map, params.at("kappa").get<double>(), opts);
        json j = {{"kappa", res.kappa},
                  {"d", res.d},
                  {"at_lower_bound", res.at_lower_bound},
                  {"monotone_ok", res.monotone_ok},
                  {"r_squared_min", res.r_squared_min},
                  {"note", res.note}};
        sink.write("john_dimension.json", j.dump(2));
    } else if (kind == "hitting") {
        std::size_t n_traces =
            budget.clamp_traces(params.at("n_traces").get<std::size_t>(), cfg.max_traces);
        const FlowOptions flow = flow_from_params(params, 2.0, 30000, threads);
        const double kappa = params.at("kappa").get<double>();
        const double angle = params.at("center_angle").get<double>();
        const double delta = params.value("delta", 0.5);
        const std::vector<double> radii = doubles_of(params.at("radii"));
        n_traces = budget.fit_time(n_traces, [&](std::size_t n) {
            hitting_curve(kappa, angle, radii, n, seed, delta, flow);
        });
        const HittingCurve curve = hitting_curve(kappa, angle, radii, n_traces, seed, delta, flow);
        std::vector<double> scales, estimates, errors;
        for (const HittingEstimate& e : curve.per_radius) {
            scales.push_back(e.radius);
            estimates.push_back(e.estimate);
            errors.push_back(e.standard_error);
        }
        sink.write("hitting.csv", table_csv("scale,estimate,stderr", scales, estimates, &errors));
        const json fit = fit_json(scales, estimates);
        json meta = {{"kappa", curve.kappa},
                     {"center_angle", curve.center_angle},
                     {"delta", curve.delta},
                     {"n_traces", curve.n_traces},
                     {"seed", curve.seed},
                     {"horizon", flow.horizon},
                     {"n_steps", flow.n_steps},
                     {"fit", fit},
                     {"exponent_estimate", -fit.at("slope").get<double>()}};
        sink.write("hitting.json", meta.dump(2));
        const double slope = fit.at("slope").get<double>();
        LogLogPlot plot;
        plot.title = "boundary hitting probability vs radius";
        plot.x_label = "1/radius";
        plot.y_label = "estimate";
        for (std::size_t i = 0; i < scales.size(); ++i) {
            if (estimates[i] <= 0) continue;
            plot.x.push_back(1.0 / scales[i]);
            plot.y.push_back(estimates[i]);
        }
        plot.fit_slope = -slope;
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < plot.x.size(); ++i) {
            mx += std::log10(plot.x[i]);
            my += std::log10(plot.y[i]);
        }
        if (!plot.x.empty()) {
            plot.fit_intercept =
                my / plot.x.size() - plot.fit_slope * mx / plot.x.size();
        }
        sink.write("hitting_slope_" + slope_tag(slope) + ".svg", render_svg(plot));
    } else if (kind == "line-dimension") {
        std::size_t n_traces =
            budget.clamp_traces(params.at("n_traces").get<std::size_t>(), cfg.max_traces);
        const FlowOptions flow = flow_from_params(params, 6.0, 20000, threads);
        const double kappa = params.at("kappa").get<double>();
        const std::vector<double> scales = doubles_of(params.at("scales"));
        n_traces = budget.fit_time(n_traces, [&](std::size_t n) {
            boundary_line_dimension(kappa, n, scales, seed, flow);
        });
        const LineDimensionResult res =
            boundary_line_dimension(kappa, n_traces, scales, seed, flow);
        sink.write("line_dimension.csv",
                   table_csv("scale,estimate,stderr", res.scales, res.mean_boxes));
        json meta = {{"kappa", res.kappa},       {"n_traces", res.n_traces},
                     {"slope", res.slope},       {"r_squared", res.r_squared},
                     {"degenerate", res.degenerate}, {"seed", seed},
                     {"horizon", flow.horizon},  {"n_steps", flow.n_steps}};
        sink.write("line_dimension.json", meta.dump(2));
        LogLogPlot plot;
        plot.title = "boxes touched on the line vs scale";
        plot.x_label = "1/eta";
        plot.y_label = "mean boxes";
        for (std::size_t i = 0; i < res.scales.size(); ++i) {
            if (res.mean_boxes[i] <= 0) continue;
            plot.x.push_back(1.0 / res.scales[i]);
            plot.y.push_back(res.mean_boxes[i]);
        }
        plot.fit_slope = res.slope;
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < plot.x.size(); ++i) {
            mx += std::log10(plot.x[i]);
            my += std::log10(plot.y[i]);
        }
        if (!plot.x.empty())
            plot.fit_intercept = my / plot.x.size() - res.slope * mx / plot.x.size();
        sink.write("line_dimension_slope_" + slope_tag(res.slope) + ".svg", render_svg(plot));
    } else if (kind == "frostman") {
        std::size_t n_traces =
            budget.clamp_traces(params.at("n_traces").get<std::size_t>(), cfg.max_traces);
        const FlowOptions flow = flow_from_params(params, 6.0, 20000, threads);
        const FrostmanMeasure measure = measure_from_spec(params.at("measure"));
        const double kappa = params.at("kappa").get<double>();
        const std::vector<double> eps = doubles_of(params.at("eps"));
        n_traces = budget.fit_time(n_traces, [&](std::size_t n) {
            frostman_second_moment(measure, kappa, eps, n, seed, flow);
        });
        const FrostmanResult res = frostman_second_moment(measure, kappa, eps, n_traces, seed, flow);
        sink.write("frostman.csv",
                   table_csv("eps,first_moment,second_moment,moment_ratio", res.eps,
                             res.first_moment, &res.second_moment, &res.moment_ratio));
        json meta = {{"kappa", res.kappa},
                     {"a", res.a},
                     {"feasible", res.feasible},
                     {"energy", res.energy},
                     {"n_traces", res.n_traces},
                     {"insufficient", res.insufficient},
                     {"seed", seed},
                     {"horizon", flow.horizon},
                     {"n_steps", flow.n_steps}};
        sink.write("frostman.json", meta.dump(2));
    } else if (kind == "trace-boundary") {
        std::size_t n_traces =
            budget.clamp_traces(params.at("n_traces").get<std::size_t>(), cfg.max_traces);
        const FlowOptions flow = flow_from_params(params, 1.5, 8192, threads);
        const ConformalMap map = map_from_spec(params.at("map"));
        const double kappa = params.at("kappa").get<double>();
        const std::vector<double> scales = doubles_of(params.at("scales"));
        const std::size_t n_targets = params.value("n_targets", std::size_t{2048});
        n_traces = budget.fit_time(n_traces, [&](std::size_t n) {
            trace_boundary_dimension(map, kappa, n, scales, n_targets, seed, flow);
        });
        const TraceBoundaryResult res =
            trace_boundary_dimension(map, kappa, n_traces, scales, n_targets, seed, flow);
        sink.write("trace_boundary.csv",
                   table_csv("scale,estimate,stderr", res.scales, res.mean_boxes));
        json meta = {{"kappa", res.kappa},           {"n_traces", res.n_traces},
                     {"n_targets", res.n_targets},   {"slope", res.slope},
                     {"r_squared", res.r_squared},   {"degenerate", res.degenerate},
                     {"seed", seed},                 {"horizon", flow.horizon},
                     {"n_steps", flow.n_steps}};
        sink.write("trace_boundary.json", meta.dump(2));
        LogLogPlot plot;
        plot.title = "image boxes near the boundary vs scale";
        plot.x_label = "1/eta";
        plot.y_label = "mean boxes";
        for (std::size_t i = 0; i < res.scales.size(); ++i) {
            if (res.mean_boxes[i] <= 0) continue;
            plot.x.push_back(1.0 / res.scales[i]);
            plot.y.push_back(res.mean_boxes[i]);
        }
        plot.fit_slope = res.slope;
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < plot.x.size(); ++i) {
            mx += std::log10(plot.x[i]);
            my += std::log10(plot.y[i]);
        }
        if (!plot.x.empty())
            plot.fit_intercept = my / plot.x.size() - res.slope * mx / plot.x.size();
        sink.write("trace_boundary_slope_" + slope_tag(res.slope) + ".svg", render_svg(plot));
    } else if (kind == "dkappa") {
        DimensionBound bound =
            dkappa_bounds(params.at("kappa").get<double>(), params.value("c", 0.01),
                          params.value("alpha", 0.1));
        if (params.contains("map")) {
            SpectrumOptions opts;
            opts.threads = threads;
            const ConformalMap map = map_from_spec(params.at("map"));
            bound.has_john_branch = true;
            bound.branch_john = solve_john_dimension(map, bound.kappa, opts).d;
        }
        sink.write("dkappa.json", bound.to_json());
    } else {
        throw ParameterError("config: unknown experiment kind '" + kind + "'");
    }

    RunManifest manifest;
    manifest.kind = kind;
    manifest.version = kVersion;
    manifest.truncated = budget.truncated;
    manifest.outputs = sink.entries;
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - budget.start).count();
    manifest.manifest_path = sink.dir / "manifest.json";
    write_text_file(manifest.manifest_path, manifest.to_json(cfg.raw_json));
    return manifest;
}

} // namespace slelab

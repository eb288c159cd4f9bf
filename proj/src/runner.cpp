#include "lamlab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lamlab/figures.hpp"

namespace lamlab {

namespace fs = std::filesystem;

RunContext context_from(const Config& cfg) {
    RunContext c;
    c.out_dir = cfg.str("experiment", "out_dir", ".");
    c.threads = cfg.integer("experiment", "threads", 1);
    c.tol_scale = cfg.num("experiment", "tol_scale", 1);
    return c;
}

std::string output_path(const RunContext& ctx, const std::string& name) {
    const fs::path p(name);
    if (p.is_absolute()) return name;
    return (fs::path(ctx.out_dir) / p).string();
}

ProfileSpec profile_from(const Config& cfg) {
    ProfileSpec s = parse_profile_kind(cfg.str("profile", "kind", "cosh"));
    s.eps = cfg.num("profile", "eps", s.eps);
    s.a = cfg.num("profile", "a", s.a);
    s.delta = cfg.num("profile", "delta", s.delta);
    s.c = cfg.num("profile", "c", s.c);
    s.constant = cfg.num("profile", "constant", s.constant);
    s.centers = cfg.list("profile", "centers", s.centers);
    return s;
}

namespace {

struct Ctx {
    const Config& cfg;
    const RunContext& rc;
    RunResult& res;
    Json report;

    double tol(const std::string& key, double def) const { return cfg.num("tolerances", key, def) * rc.tol_scale; }
    void check(const std::string& name, bool pass, double value, double t, const std::string& note = "") {
        res.checks.push_back({name, pass, value, t, note});
    }
    void le(const std::string& name, double value, double t, const std::string& note = "") {
        check(name, value <= t, value, t, note);
    }
    void write(const std::string& name, const std::string& text) {
        const std::string p = output_path(rc, name);
        write_text(p, text);
        res.files.push_back(p);
    }
};

StopRule stop_from(const Config& cfg, double tmax_def) {
    StopRule s;
    s.tmax = cfg.num("geodesic", "tmax", tmax_def);
    s.r_exit = cfg.num("geodesic", "r_exit", 0);
    s.r_stop = 0;
    s.rtol = cfg.num("tolerances", "rtol", s.rtol);
    s.atol = cfg.num("tolerances", "atol", s.atol);
    return s;
}

std::string events_name(const std::string& out) {
    const fs::path p(out);
    return (p.parent_path() / (p.stem().string() + "_events.csv")).string();
}

void run_geodesic(Ctx& c) {
    const WarpProfile prof = build_profile(profile_from(c.cfg));
    const StripMetric m = StripMetric::warped(prof);
    const double r0 = c.cfg.num("geodesic", "r0", 0), phi0 = c.cfg.num("geodesic", "phi0", kPi / 2);
    const double delta = c.cfg.num("geodesic", "delta", 0.1);
    const GeodesicPath p = integrate_geodesic(start_at_angle(m, r0, phi0, delta), m, stop_from(c.cfg, 200));
    const std::string out = c.cfg.str("geodesic", "out", "path.csv");
    c.write(out, path_csv(p, m));
    c.write(events_name(out), events_csv(p));
    c.le("speed_defect", p.max_speed_defect, c.tol("speed", 1e-8));
    if (r0 == 0 && delta > 0 && phi0 == kPi / 2) {
        double min_dr = 1e300;
        for (const auto& s : p.samples) min_dr = std::min(min_dr, s.dr);
        c.check("dr_positive", min_dr > 0, min_dr, 0);
    }
    c.report["profile"] = prof.label();
    c.report["delta"] = delta;
    c.report["start"] = {r0, phi0};
    c.report["samples"] = p.samples.size();
    c.report["crossings"] = crossing_count(p);
    c.report["termination"] = termination_name(p.termination);
    c.report["max_speed_defect"] = p.max_speed_defect;
    c.report["min_sin_phi"] = p.min_sin_phi;
}

SweepOptions sweep_options(const Config& cfg, int threads) {
    SweepOptions o;
    o.window = cfg.num("sweep", "window", o.window);
    o.tmax = cfg.num("sweep", "tmax", o.tmax);
    o.leaf_step = cfg.num("sweep", "leaf_step", o.leaf_step);
    o.threads = threads;
    return o;
}

const std::vector<double> kDefaultDeltas{0.3, 0.1, 0.03, 0.01};

void run_sweep(Ctx& c) {
    const WarpProfile prof = build_profile(profile_from(c.cfg));
    const StripMetric m = StripMetric::warped(prof);
    const std::vector<double> deltas = c.cfg.list("sweep", "deltas", kDefaultDeltas);
    const double r0 = c.cfg.num("sweep", "r0", 1.0);
    const SweepReport s = lamination_sweep(deltas, r0, m, sweep_options(c.cfg, c.rc.threads));
    c.report = to_json(s);
    c.report["profile"] = prof.label();
    double defect = 0;
    for (const auto& p : s.paths) defect = std::max(defect, p.max_speed_defect);
    c.le("speed_defect", defect, c.tol("speed", 1e-8));
    c.check("crossings_increasing", s.crossings_increasing, s.crossings.empty() ? 0 : s.crossings.back(), 0);
    c.check("hausdorff_nonincreasing", s.hausdorff_nonincreasing, s.hausdorff.empty() ? 0 : s.hausdorff.back(), 0);
    if (c.cfg.integer("sweep", "index", 1)) {
        const IndexTable t = index_table(s, m, c.rc.threads);
        std::vector<int> idx;
        for (const auto& r : t.rows) idx.push_back(r.index);
        c.report["index"] = idx;
        c.report["index_table"] = to_json(t);
        c.check("index_nondecreasing", t.index_nondecreasing, idx.empty() ? 0 : idx.back(), 0);
        c.check("index_grows", t.index_grows, idx.empty() ? 0 : idx.back() - idx.front(), 0);
        c.write(c.cfg.str("sweep", "index_out", "index.csv"), index_csv(t));
    }
}

void run_tori(Ctx& c) {
    const double L = c.cfg.num("tori", "L", 2 * kPi);
    const int nmax = c.cfg.integer("tori", "nmax", 12);
    ToriReport t = find_closed_tori(L, nmax, c.rc.threads);
    annotate_tori_index(t, c.rc.threads);
    c.report = to_json(t);
    c.write(c.cfg.str("tori", "csv", "tori.csv"), tori_csv(t));
    int simple = 0, prev_index = -1, prev_n = 0;
    bool monotone = true;
    double gap = 0;
    for (const auto& g : t.found) {
        if (!g.simple) continue;
        ++simple;
        gap = std::max(gap, g.closure_gap);
        if (g.n > prev_n && g.index < prev_index) monotone = false;
        prev_index = g.index;
        prev_n = g.n;
    }
    c.check("simple_found", simple > 0, simple, 1);
    c.le("closure_gap", gap, c.tol("closure", 1e-7));
    c.check("index_nondecreasing_in_n", monotone, prev_index, 0);
}

void run_neck(Ctx& c) {
    const double eps = c.cfg.num("neck", "eps", 0.1), eta = c.cfg.num("neck", "eta", 0.5);
    NeckOptions o;
    o.sigma_max = c.cfg.num("neck", "sigma_max", o.sigma_max);
    const NeckProfile n = solve_neck(eps, eta, o);
    c.write(c.cfg.str("neck", "out", "neck.csv"), neck_csv(n));
    c.report = to_json(n);
    const double lk = neck_lambda_K_closed(eps, eta), kc = neck_K_closed(eps, eta);
    c.report["lambda_K_closed"] = lk;
    c.report["K_closed"] = kc;
    // The printed bound Scal >= eta/(2 lambda(-K)^2); informational (see README).
    const double printed = eta / (2 * n.lambda_K * n.lambda_K);
    c.report["printed_bound"] = printed;
    c.report["printed_bound_holds"] = n.min_scal >= printed * (1 - 1e-6);
    c.le("first_integral", n.first_integral_drift, 1e-8 * c.rc.tol_scale);
    c.le("dlambda_end", std::fabs(n.dlambda_K), 1e-8 * c.rc.tol_scale);
    c.le("lambda_K_closed", std::fabs(n.lambda_K - lk) / lk, 1e-6 * c.rc.tol_scale);
    c.le("K_closed", std::fabs(n.K - kc) / kc, 1e-6 * c.rc.tol_scale);
    c.check("scal_positive", n.min_scal > 0, n.min_scal, 0, "needs eta <= sin^2(eps)");
    c.check("pointwise_bound", n.min_scal_margin >= -1e-12, n.min_scal_margin, 0,
            "Scal lambda^2 - eta/2 along the neck");
}

MetricField field_from(const Config& cfg, Json& params) {
    std::string recipe = cfg.str("glue", "recipe", "offdiag");
    std::map<std::string, double> p;
    if (cfg.has("glue", "input")) {
        const std::string path = cfg.str("glue", "input", "");
        std::ifstream f(path);
        Json j;
        try {
            j = Json::parse(f);
        } catch (const std::exception& e) {
            throw Error(ErrorCode::ConfigError, "[glue] input '" + path + "' is not valid JSON: " + e.what());
        }
        if (!j.contains("recipe") || !j["recipe"].is_string())
            throw Error(ErrorCode::ConfigError, "[glue] input '" + path + "' lacks a string \"recipe\"");
        recipe = j["recipe"].get<std::string>();
        if (j.contains("params")) {
            if (!j["params"].is_object()) throw Error(ErrorCode::ConfigError, "[glue] input params must be an object");
            for (auto it = j["params"].begin(); it != j["params"].end(); ++it) {
                if (!it.value().is_number())
                    throw Error(ErrorCode::ConfigError, "[glue] input param '" + it.key() + "' must be a number");
                p[it.key()] = it.value().get<double>();
            }
        }
    }
    for (const char* k : {"a", "b", "c", "eps"})
        if (cfg.has("glue", k)) p[k] = cfg.num("glue", k, 0);
    const auto rs = field_recipes();
    if (std::find(rs.begin(), rs.end(), recipe) == rs.end())
        throw Error(ErrorCode::ConfigError, "[glue] recipe '" + recipe + "' is unknown");
    params = Json::object();
    for (const auto& [k, v] : p) params[k] = v;
    return make_field(recipe, p);
}

void run_glue(Ctx& c) {
    Json params;
    const MetricField f = field_from(c.cfg, params);
    GlueOptions o;
    o.eps = c.cfg.num("glue", "eps", o.eps);
    const int g = c.cfg.integer("glue", "grid", 64);
    o.grid.nr = o.grid.nx = o.grid.nt = g;
    o.det_tol = c.tol("det", 1e-12);
    o.dr_tol = c.tol("dr_det", 1e-9);
    o.threads = c.rc.threads;
    const GlueResult r = glue_extend(f, o);
    c.report = to_json(r.report);
    c.report["input"] = field_descriptor(f, params);
    c.report["output"] = field_descriptor(r.out, params);
    c.write(c.cfg.str("glue", "field_out", "glue_field.json"), dump(field_descriptor(r.out, params)));
    double det_change = 0;
    for (const auto& s : r.report.stages)
        if (s.det_preserved) det_change = std::max(det_change, s.max_det_change);
    c.le("det_preserved", det_change, o.det_tol);
    c.le("max_dr_det", r.report.max_dr_det, o.dr_tol);
    c.check("positive_definite", r.report.min_eig > 0, r.report.min_eig, 0);
    c.le("input_region", r.report.input_residual, 0);
    c.le("product_region", r.report.product_residual, 0);
    c.le("stage3_conformal", r.report.stage3_residual, 1e-12 * c.rc.tol_scale);
}

void run_scalglue(Ctx& c) {
    ScalGlueSpec s;
    s.R = c.cfg.num("scalglue", "R", s.R);
    s.K = c.cfg.num("scalglue", "K", s.K);
    s.eps = c.cfg.num("scalglue", "eps", s.eps);
    s.grid = c.cfg.integer("scalglue", "grid", s.grid);
    s.max_halvings = c.cfg.integer("scalglue", "max_halvings", s.max_halvings);
    s.threads = c.rc.threads;
    const ScalGlueReport r = build_scalglue_metric(s);
    c.report = to_json(r);
    c.write(c.cfg.str("scalglue", "grid_out", "scalglue_grid.csv"), curvature_csv(r.curvature, 0, 1));
    c.check("min_scal_positive", r.curvature.min_scal > 0, r.curvature.min_scal, 0);
    c.check("gamma_bounds", r.gamma_ok, r.k_bounds.max_d2, r.eps_used);
    c.le("mixed_term_ratio", r.mixed_max_ratio, 1);
    c.le("symmetry", r.symmetry_residual, 0);
    c.le("minimality", r.minimality_residual, 1e-9 * c.rc.tol_scale);
    const double want = 1 / (s.R * s.R);
    c.le("zone_a_round", std::max(std::fabs(r.zone_a_min - want), std::fabs(r.zone_a_max - want)),
         1e-4 * c.rc.tol_scale);
    c.le("product_region", std::fabs(r.product_scal - r.product_expected), 1e-4 * c.rc.tol_scale);
}

void run_torusmodel(Ctx& c) {
    TorusModelSpec s;
    s.a = c.cfg.num("torusmodel", "a", s.a);
    s.grid = c.cfg.integer("torusmodel", "grid", s.grid);
    s.patch_grid = c.cfg.integer("torusmodel", "patch_grid", s.patch_grid);
    s.eta = c.cfg.num("torusmodel", "eta", s.eta);
    s.max_bisections = c.cfg.integer("torusmodel", "max_bisections", s.max_bisections);
    s.threads = c.rc.threads;
    const TorusModelReport r = build_model_torus_metric(s);
    c.report = to_json(r);
    int flagged = 0;
    for (const auto& d : r.discrepancies) flagged += d.flagged;
    c.check("min_scal_positive", r.min_scal > 0, r.min_scal, 0);
    c.le("f_concave", r.max_f_pp, 1e-12);
    c.le("k_ratio", r.max_k_ratio, 0.25);
    c.le("boundary_matching", r.boundary_residual, 1e-12 * c.rc.tol_scale);
    c.le("round_patch", r.round_residual, 1e-12 * c.rc.tol_scale);
    c.le("slice_minimality", r.slice_minimality, 0);
    c.le("central_torus", r.central_torus_residual, 0);
    c.check("documented_discrepancies", flagged == 2, flagged, 2);
}

void run_stability(Ctx& c) {
    const WarpProfile prof = build_profile(profile_from(c.cfg));
    const SphereStability s = sphere_stability(prof);
    c.report = to_json(s);
    c.le("oracle_delta", s.oracle_delta, 1e-4 * c.rc.tol_scale);
    if (c.cfg.integer("stability", "jacobi", 1) && prof.symmetry() == Symmetry::Even) {
        const StripMetric m = StripMetric::warped(prof);
        const SweepReport sw = lamination_sweep(c.cfg.list("sweep", "deltas", kDefaultDeltas),
                                                c.cfg.num("sweep", "r0", 1.0), m, sweep_options(c.cfg, c.rc.threads));
        const IndexTable t = index_table(sw, m, c.rc.threads);
        c.report["index_table"] = to_json(t);
        c.write(c.cfg.str("stability", "index_out", "index.csv"), index_csv(t));
        c.check("index_nondecreasing", t.index_nondecreasing, t.rows.empty() ? 0 : t.rows.back().index, 0);
    }
}

void run_figures(Ctx& c) {
    std::vector<double> which = c.cfg.list("figures", "which", {1, 2, 3, 4, 9, 10});
    const WarpProfile prof = build_profile(profile_from(c.cfg));
    const StripMetric m = StripMetric::warped(prof);
    Json figs = Json::array();
    for (double wd : which) {
        const int w = int(wd);
        FigureData d;
        Json info;
        info["figure"] = w;
        switch (w) {
            case 1:
                d.profile = prof;
                d.r_lo = -3;
                d.r_hi = 3;
                break;
            case 2: {
                const SweepReport s = lamination_sweep(c.cfg.list("sweep", "deltas", kDefaultDeltas),
                                                       c.cfg.num("sweep", "r0", 1.0), m,
                                                       sweep_options(c.cfg, c.rc.threads));
                for (std::size_t i = 0; i < s.paths.size(); ++i) {
                    d.paths.push_back(two_sided(s.paths[i]));
                    d.labels.push_back("delta = " + fmt_num(s.deltas[i]));
                }
                d.r_hi = s.r0;
                info["crossings"] = s.crossings;
                break;
            }
            case 3: d.r_hi = 1; break;
            case 4: {
                const double delta = c.cfg.num("figures", "delta", 0.05);
                StopRule st;
                st.tmax = 1000;
                st.r_exit = 6;
                st.r_stop = 0;
                const GeodesicPath p = integrate_geodesic(start_at_angle(m, 0, kPi / 2, delta), m, st);
                d.paths.push_back(two_sided(p));
                d.labels.push_back("delta = " + fmt_num(delta));
                d.r_lo = -6;
                d.r_hi = 6;
                const int n = 2 * crossing_count(p);
                info["crossings"] = n;
                c.check("fig4_crossings", n >= 5, n, 5, "crossings of {phi = pi/2} by the two-sided path, |r| <= 6");
                break;
            }
            case 9: {
                ScalGlueSpec s;
                s.R = c.cfg.num("scalglue", "R", s.R);
                s.K = c.cfg.num("scalglue", "K", s.K);
                s.eps = c.cfg.num("scalglue", "eps", s.eps);
                s.threads = c.rc.threads;
                ScalGlueMetric gm;
                const ScalGlueReport r = build_scalglue_metric(s, &gm);
                d.tube = TubeSketch{s.R, s.K, r.bump_inner, r.bump_outer, r.k_end, r.a1};
                info["min_scal"] = r.curvature.min_scal;
                break;
            }
            case 10: {
                const double R = c.cfg.num("figures", "R", 1);
                const StripMetric za = StripMetric::zone_a(R);
                const double phi1 = c.cfg.num("figures", "phi1", 1.1), beta = c.cfg.num("figures", "beta", 0.3);
                const GeodesicPath p = integrate_zone_a(za, R, phi1, beta);
                const AntipodalReport a = zone_a_connect(p, R);
                // The partner through (-pi R/2, pi - phi1) continues with the mirrored angle.
                const GeodesicPath q = integrate_zone_a(za, R, kPi - phi1, -beta);
                d.paths = {p.samples, q.samples};
                d.labels = {"gamma", "antipodal partner"};
                d.zone_R = R;
                info["antipodal"] = to_json(a);
                c.check("fig10_antipodal", a.pass, std::max(a.dphi, a.dangle), 1e-6);
                break;
            }
            default: throw Error(ErrorCode::ConfigError, "[figures] which: no figure " + std::to_string(w));
        }
        const std::string name = "fig" + std::to_string(w) + ".svg";
        const std::string path = output_path(c.rc, name);
        emit_figure(w, d, path);
        c.res.files.push_back(path);
        info["file"] = name;
        figs.push_back(info);
    }
    c.report["figures"] = figs;
}

}  // namespace

RunResult run_named(const std::string& name, const Config& cfg, const RunContext& rc) {
    RunResult res;
    res.experiment = name;
    Ctx c{cfg, rc, res, Json::object()};
    std::error_code ec;
    fs::create_directories(rc.out_dir, ec);
    std::string report_name = name + ".json";
    if (name == "glue") report_name = cfg.str("glue", "out", report_name);
    else if (cfg.has(name, "report")) report_name = cfg.str(name, "report", report_name);
    try {
        if (name == "geodesic") run_geodesic(c);
        else if (name == "sweep") run_sweep(c);
        else if (name == "tori") run_tori(c);
        else if (name == "neck") run_neck(c);
        else if (name == "glue") run_glue(c);
        else if (name == "scalglue") run_scalglue(c);
        else if (name == "torusmodel") run_torusmodel(c);
        else if (name == "stability") run_stability(c);
        else if (name == "figures") run_figures(c);
        else throw Error(ErrorCode::ConfigError, "unknown experiment '" + name + "'");
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError) throw;
        res.error = e.what();
    }
    res.pass = res.error.empty() && !res.checks.empty();
    for (const auto& k : res.checks) res.pass = res.pass && k.pass;
    if (name == "figures" && res.error.empty()) res.pass = res.pass || res.checks.empty();
    Json out;
    out["experiment"] = name;
    for (auto it = c.report.begin(); it != c.report.end(); ++it) out[it.key()] = it.value();
    out["checks"] = to_json(res.checks);
    if (!res.error.empty()) out["error"] = res.error;
    out["pass"] = res.pass;
    const std::string rp = output_path(rc, report_name);
    write_text(rp, dump(out));
    res.files.push_back(rp);
    return res;
}

RunResult run_experiment(const Config& cfg, const RunContext& ctx) {
    cfg.validate();
    if (!cfg.has("experiment", "name")) throw Error(ErrorCode::ConfigError, cfg.origin() + ": [experiment] name is required");
    return run_named(cfg.str("experiment", "name", ""), cfg, ctx);
}

}  // namespace lamlab

// lamlab: experiment runner for the lamination / scalar-curvature toolkit.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lamlab/runner.hpp"

namespace {

struct Flag {
    const char* name;
    const char* section;
    const char* key;
    const char* help;
};

struct Sub {
    const char* name;
    const char* experiment;
    const char* help;
    std::vector<Flag> flags;
};

const std::vector<Sub>& subcommands() {
    static const std::vector<Flag> profile = {
        {"--profile", "profile", "kind", "warp profile kind (cosh, basiclam, basiclam-capped, constant, sin, multiwell)"},
        {"--eps", "profile", "eps", "profile epsilon"},
        {"--a", "profile", "a", "basiclam plateau half-width"},
        {"--profile-delta", "profile", "delta", "basiclam transition width"},
        {"--c", "profile", "c", "basiclam constant (0 = default)"},
        {"--constant", "profile", "constant", "value of the constant profile"},
        {"--centers", "profile", "centers", "multiwell centers, comma separated"},
    };
    auto with_profile = [&](std::vector<Flag> f) {
        f.insert(f.begin(), profile.begin(), profile.end());
        return f;
    };
    static const std::vector<Sub> s = {
        {"geodesic", "geodesic", "integrate one geodesic of the degenerate strip metric",
         with_profile({{"--delta", "geodesic", "delta", "angle with the leaf {r = const}"},
                       {"--r0", "geodesic", "r0", "start r"},
                       {"--phi0", "geodesic", "phi0", "start phi"},
                       {"--tmax", "geodesic", "tmax", "arclength limit"},
                       {"--r-exit", "geodesic", "r_exit", "stop when |r| reaches this (0 = off)"},
                       {"--out", "geodesic", "out", "path CSV (events go next to it)"},
                       {"--report", "geodesic", "report", "JSON report"}})},
        {"sweep", "sweep", "delta sweep: crossings, Hausdorff distance and index",
         with_profile({{"--deltas", "sweep", "deltas", "decreasing angles, comma separated"},
                       {"--r0", "sweep", "r0", "exit radius"},
                       {"--window", "sweep", "window", "Hausdorff window half-width"},
                       {"--tmax", "sweep", "tmax", "arclength limit"},
                       {"--index", "sweep", "index", "1 to compute the Jacobi index table"},
                       {"--report", "sweep", "report", "JSON report"}})},
        {"tori", "tori", "closed geodesics on the product cylinder",
         {{"--L", "tori", "L", "circumference"},
          {"--nmax", "tori", "nmax", "largest oscillation count"},
          {"--report", "tori", "report", "JSON report"},
          {"--csv", "tori", "csv", "CSV table"}}},
        {"neck", "neck", "neck profile joining a sphere cap to a thin end",
         {{"--eps", "neck", "eps", "cut latitude"},
          {"--eta", "neck", "eta", "curvature budget"},
          {"--out", "neck", "out", "CSV r,lambda,dlambda,scal"},
          {"--report", "neck", "report", "JSON report"}}},
        {"glue", "glue", "extend a minimally foliated field to the product metric",
         {{"--input", "glue", "input", "field descriptor JSON {recipe, params}"},
          {"--recipe", "glue", "recipe", "built-in field (product, offdiag, warped_slice, warped_sphere)"},
          {"--eps", "glue", "eps", "input margin: field given on x in ]0, 1 + eps["},
          {"--grid", "glue", "grid", "verification grid points per axis"},
          {"--out", "glue", "out", "JSON report"},
          {"--field-out", "glue", "field_out", "output field descriptor"}}},
        {"scalglue", "scalglue", "modified tube metric with positive scalar curvature",
         {{"--R", "scalglue", "R", "sphere radius parameter"},
          {"--K", "scalglue", "K", "tube half-length"},
          {"--eps", "scalglue", "eps", "derivative budget"},
          {"--grid", "scalglue", "grid", "base grid size"},
          {"--report", "scalglue", "report", "JSON report"},
          {"--grid-out", "scalglue", "grid_out", "CSV c1,c2,scal"}}},
        {"torusmodel", "torusmodel", "torus-carrying metric on S^3 with a round patch",
         {{"--a", "torusmodel", "a", "transition scale (halved until feasible)"},
          {"--grid", "torusmodel", "grid", "base grid size"},
          {"--patch-grid", "torusmodel", "patch_grid", "patch grid size per axis"},
          {"--eta", "torusmodel", "eta", "patch derivative budget"},
          {"--report", "torusmodel", "report", "JSON report"}}},
        {"stability", "stability", "stability of the sphere {r = 0} and the index table",
         with_profile({{"--deltas", "sweep", "deltas", "sweep angles for the index table"},
                       {"--jacobi", "stability", "jacobi", "1 to compute the index table"},
                       {"--report", "stability", "report", "JSON report"}})},
        {"figure", "figures", "write SVG figures",
         with_profile({{"--which", "figures", "which", "figure numbers among 1,2,3,4,9,10"},
                       {"--delta", "figures", "delta", "angle of the figure-4 geodesic"},
                       {"--R", "figures", "R", "zone-A radius"}})},
    };
    return s;
}

void print_result(const lamlab::RunResult& r) {
    for (const auto& c : r.checks)
        std::printf("%s %-26s value=%s tol=%s%s%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    lamlab::fmt_num(c.value).c_str(), lamlab::fmt_num(c.tol).c_str(), c.note.empty() ? "" : "  # ",
                    c.note.c_str());
    if (!r.error.empty()) std::printf("ERROR %s\n", r.error.c_str());
    for (const auto& f : r.files) std::printf("wrote %s\n", f.c_str());
    std::printf("%s: %s\n", r.experiment.c_str(), r.pass ? "pass" : "FAIL");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lamlab: minimal laminations, stability and positive scalar curvature checks"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out_dir, config_path;
    int threads = 0;
    double tol_scale = 0;
    auto* o_out = app.add_option("--out-dir", out_dir, "directory for all outputs");
    auto* o_thr = app.add_option("--threads", threads, "worker threads (results do not depend on it)");
    auto* o_tol = app.add_option("--tol-scale", tol_scale, "multiplies check tolerances");

    auto* run = app.add_subcommand("run", "run the experiment named in a config file");
    run->add_option("--config", config_path, "config file")->required();

    struct Bound {
        const Sub* sub;
        CLI::App* app;
        std::vector<std::pair<const Flag*, std::string>> values;
        std::string config;
    };
    std::vector<Bound> bound;
    bound.reserve(subcommands().size());
    for (const Sub& s : subcommands()) {
        Bound b{&s, app.add_subcommand(s.name, s.help), {}, {}};
        b.values.reserve(s.flags.size());
        for (const Flag& f : s.flags) b.values.emplace_back(&f, std::string());
        bound.push_back(std::move(b));
    }
    for (Bound& b : bound) {
        b.app->add_option("--config", b.config, "base config file (flags override it)");
        for (auto& [f, v] : b.values) b.app->add_option(f->name, v, f->help);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        lamlab::Config cfg;
        std::string experiment;
        if (*run) {
            cfg = lamlab::Config::load(config_path);
        } else {
            for (Bound& b : bound) {
                if (!*b.app) continue;
                if (!b.config.empty()) cfg = lamlab::Config::load(b.config);
                for (auto& [f, v] : b.values)
                    if (b.app->count(f->name)) cfg.set(f->section, f->key, v);
                experiment = b.sub->experiment;
                cfg.set("experiment", "name", experiment);
            }
        }
        if (o_out->count()) cfg.set("experiment", "out_dir", out_dir);
        if (o_thr->count()) cfg.set("experiment", "threads", std::to_string(threads));
        if (o_tol->count()) cfg.set("experiment", "tol_scale", lamlab::fmt_num(tol_scale));
        cfg.validate();
        const lamlab::RunContext ctx = lamlab::context_from(cfg);
        const lamlab::RunResult r = lamlab::run_experiment(cfg, ctx);
        print_result(r);
        return r.pass ? 0 : 1;
    } catch (const lamlab::Error& e) {
        std::fprintf(stderr, "lamlab: %s\n", e.what());
        return e.code() == lamlab::ErrorCode::ConfigError ? 2 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "lamlab: %s\n", e.what());
        return 1;
    }
}

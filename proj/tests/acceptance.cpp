// Acceptance harness: one pass/fail line per criterion, then a determinism
// rerun of criteria 1-11 at 8 threads compared byte for byte.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lamlab/curvature.hpp"
#include "lamlab/geodesics.hpp"
#include "lamlab/gluing.hpp"
#include "lamlab/necks.hpp"
#include "lamlab/report.hpp"
#include "lamlab/stability.hpp"

using namespace lamlab;

namespace {

struct Outcome {
    bool pass = false;
    std::string summary;
    Json data;  // compared across thread counts
    std::vector<std::string> notes;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

StripMetric cosh_strip(double eps = 0.2) {
    ProfileSpec ps;
    ps.kind = ProfileKind::Cosh;
    ps.eps = eps;
    return StripMetric::warped(build_profile(ps));
}

// 1. Round unit S^3 gives 3 in both the closed form and the FD oracle.
Outcome c1(int) {
    const auto t0 = std::chrono::steady_clock::now();
    ProfileSpec ps;
    ps.kind = ProfileKind::RoundSphere;
    const WarpProfile round = build_profile(ps);
    // Chart written out directly: dr^2 + sin^2 r (dphi^2 + sin^2 phi dtheta^2).
    const auto chart = MetricEvaluator3::diagonal(
        [](const Pt3& x) {
            const double s = std::sin(x[0]), t = std::sin(x[1]);
            return Pt3{1, s * s, s * s * t * t};
        },
        "(r,phi,theta)");
    double worst = 0;
    Json pts = Json::array();
    for (const Pt3& p : {Pt3{1.0, 1.0, 0}, Pt3{0.7, 2.0, 0.3}, Pt3{1.3, 0.6, 1.0}}) {
        const double a = scal_warped(round, p[0]);
        const double b = scal_fd_oracle(chart, p);
        worst = std::max({worst, std::fabs(a - 3), std::fabs(b - 3)});
        pts.push_back({a, b});
    }
    const double dt = seconds_since(t0);
    Outcome o;
    o.pass = worst <= 1e-4 && dt < 1;
    o.summary = fmt("round S^3 scal = 3, max |dev| %.2e (tol 1e-4), %.3f s", worst, dt);
    o.data = {{"values", pts}, {"max_dev", worst}};
    return o;
}

// Random positive C2 profile: three quintic Hermite pieces with matched jets.
WarpProfile random_profile(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> val(0.8, 1.6), slope(-0.4, 0.4), curv(-0.8, 0.8);
    std::vector<double> knots{-1.5, -0.5, 0.5, 1.5};
    std::vector<Jet> jets;
    for (std::size_t i = 0; i < knots.size(); ++i) jets.push_back({val(rng), slope(rng), curv(rng)});
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        Piece p;
        p.lo = knots[i];
        p.hi = knots[i + 1];
        p.kind = PieceKind::Transition;
        p.segments.add(knots[i + 1], quintic_hermite(knots[i], knots[i + 1], jets[i], jets[i + 1]));
        pieces.push_back(p);
    }
    return WarpProfile::from_pieces(pieces, Symmetry::None, "random-c2");
}

// 2. Closed-form warped scal vs the FD oracle on random profiles.
Outcome c2(int) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> rr(-1.4, 1.4), pp(0.4, kPi - 0.4);
    double worst_rel = 0, worst_ratio = 1e300;
    Json rows = Json::array();
    for (int i = 0; i < 20; ++i) {
        const WarpProfile p = random_profile(rng);
        double r = rr(rng);
        for (double j : p.joins())
            if (std::fabs(r - j) < 0.01) r += 0.05;
        const Pt3 x{r, pp(rng), 0.2};
        const auto m = MetricEvaluator3::warped(p);
        const double exact = scal_warped(p, r);
        const double s1 = scal_fd_raw(m, x, 1e-3), s2 = scal_fd_raw(m, x, 5e-4);
        const double rel = std::fabs(s1 - exact) / std::max(1.0, std::fabs(exact));
        const double e1 = std::fabs(s1 - exact), e2 = std::fabs(s2 - exact);
        const double ratio = e2 > 0 ? e1 / e2 : 1e300;
        worst_rel = std::max(worst_rel, rel);
        worst_ratio = std::min(worst_ratio, ratio);
        rows.push_back({r, x[1], exact, s1, s2});
    }
    Outcome o;
    o.pass = worst_rel < 1e-4 && worst_ratio >= 3;
    o.summary = fmt("20 random C2 profiles: max rel %.2e (tol 1e-4), min halving gain %.2f (need >= 3)", worst_rel,
                    worst_ratio);
    o.data = {{"rows", rows}};
    return o;
}

StopRule exit_rule(double r_exit) {
    StopRule s;
    s.r_exit = r_exit;
    s.r_stop = 0;
    return s;
}

// 3. Speed, monotone r and the integrated repelling inequality.
Outcome c3(int threads) {
    const StripMetric m = cosh_strip();
    const WarpProfile& prof = *m.profile();
    const std::vector<double> deltas{0.3, 0.1, 0.03, 0.01};
    std::vector<GeodesicPath> paths(deltas.size());
    parallel_for(deltas.size(), threads, [&](std::size_t i) {
        paths[i] = integrate_geodesic(start_at_angle(m, 0, kPi / 2, deltas[i]), m, exit_rule(1));
    });
    double defect = 0, min_dr = 1e300, worst = 1e300;
    Json rows = Json::array();
    for (const auto& p : paths) {
        defect = std::max(defect, p.max_speed_defect);
        std::vector<double> dr, w;
        for (const auto& s : p.samples) {
            min_dr = std::min(min_dr, s.dr);
            const double sp = std::sin(s.phi);
            dr.push_back(s.dr);
            w.push_back(sp * sp * prof.eval(s.r).v);
        }
        double path_worst = 1e300;
        for (std::size_t b = 1; b < dr.size(); ++b)
            for (std::size_t a = 0; a < b; ++a)
                path_worst = std::min(path_worst, dr[b] / dr[a] - w[a] / w[b]);
        worst = std::min(worst, path_worst);
        rows.push_back({p.samples.size(), p.max_speed_defect, path_worst});
    }
    Outcome o;
    o.pass = defect <= 1e-8 && min_dr > 0 && worst >= -1e-7;
    o.summary = fmt("speed defect %.2e (tol 1e-8), min r' %.3e, repelling slack %.3e (tol -1e-7)", defect, min_dr,
                    worst);
    o.data = {{"paths", rows}, {"min_dr", min_dr}};
    return o;
}

// 4. Crossing counts, conjugate index and the leaf distance along the sweep.
Outcome c4(int threads) {
    const auto t0 = std::chrono::steady_clock::now();
    const StripMetric m = cosh_strip();
    SweepOptions so;
    so.threads = threads;
    const SweepReport s = lamination_sweep({0.3, 0.1, 0.03, 0.01}, 1.0, m, so);
    const IndexTable t = index_table(s, m, threads);
    bool strict = true, nondec = true, haus = true;
    for (std::size_t i = 1; i < s.crossings.size(); ++i) {
        strict = strict && s.crossings[i] > s.crossings[i - 1];
        haus = haus && s.hausdorff[i] <= s.hausdorff[i - 1];
        nondec = nondec && t.rows[i].index >= t.rows[i - 1].index;
    }
    const bool grows = t.rows.back().index > t.rows.front().index;
    const double dt = seconds_since(t0);
    std::string ns, is, hs;
    for (std::size_t i = 0; i < s.crossings.size(); ++i) {
        ns += (i ? "," : "") + std::to_string(s.crossings[i]);
        is += (i ? "," : "") + std::to_string(t.rows[i].index);
        hs += fmt("%s%.3g", i ? "," : "", s.hausdorff[i]);
    }
    Outcome o;
    o.pass = strict && nondec && grows && haus && dt < 60;
    o.summary = fmt("N = {%s}%s, index = {%s}%s, Hausdorff = {%s}%s, %.1f s", ns.c_str(),
                    strict ? "" : " NOT strictly increasing", is.c_str(), nondec && grows ? "" : " not growing",
                    hs.c_str(), haus ? "" : " not non-increasing", dt);
    o.data = {{"sweep", to_json(s)}, {"index", to_json(t)}};
    // Same measurement on a sweep whose deltas are spaced so that every step adds a crossing.
    const SweepReport s2 = lamination_sweep({0.3, 0.1, 0.03, 0.003, 0.001, 0.0001}, 1.0, m, so);
    std::string n2;
    for (std::size_t i = 0; i < s2.crossings.size(); ++i) n2 += (i ? "," : "") + std::to_string(s2.crossings[i]);
    o.notes.push_back(fmt("wider sweep delta {0.3,0.1,0.03,0.003,0.001,1e-4}: N = {%s}, strictly increasing: %s",
                          n2.c_str(), s2.crossings_increasing ? "yes" : "no"));
    o.data["wider_sweep"] = s2.crossings;
    return o;
}

// 5. Shooting through rho = 0.5 at the N-th crossing.
Outcome c5(int threads) {
    const StripMetric m = cosh_strip();
    const std::vector<int> Ns{3, 2, 4, 8};
    std::vector<ThroughResult> res(Ns.size());
    parallel_for(Ns.size(), threads, [&](std::size_t i) { res[i] = find_through(0.5, Ns[i], m); });
    const ThroughResult& r3 = res[0];
    StopRule s;
    s.r_stop = 0;
    s.max_crossings = 3;
    s.guard = 1e-10;
    s.rtol = 1e-12;
    s.atol = 1e-14;
    s.hmax = 0.01;
    s.tmax = 400;
    const GeodesicPath again = integrate_geodesic(start_at_angle(m, 0, kPi / 2, r3.alpha), m, s);
    const double r_again = nth_crossing(again, 3).r;
    const double a2 = res[1].alpha, a4 = res[2].alpha, a8 = res[3].alpha;
    Outcome o;
    o.pass = std::fabs(r3.r_N - 0.5) < 1e-8 && std::fabs(r_again - 0.5) < 1e-8 && a2 > a4 && a4 > a8;
    o.summary = fmt("|r_3 - 0.5| = %.2e, re-integrated %.2e (tol 1e-8); alpha(2,4,8) = %.4g, %.4g, %.4g",
                    std::fabs(r3.r_N - 0.5), std::fabs(r_again - 0.5), a2, a4, a8);
    o.data = {{"alpha", {r3.alpha, a2, a4, a8}}, {"r3", r3.r_N}, {"r3_again", r_again}};
    return o;
}

// 6. Neck profile against its closed forms.
Outcome c6(int) {
    const double eps = 0.1, eta = 0.5;
    const NeckProfile n = solve_neck(eps, eta);
    // Independent closed form of lambda(-K).
    const double lk = std::sin(eps) * std::exp(-2 * std::cos(eps) * std::cos(eps) / eta);
    const double rel = std::fabs(n.lambda_K - lk) / lk;
    const double bound = eta / (2 * n.lambda_K * n.lambda_K);
    const bool scal_ok = n.min_scal >= bound * (1 - 1e-6) && n.min_scal > 0;
    Outcome o;
    o.pass = n.first_integral_drift <= 1e-8 && std::fabs(n.dlambda_K) <= 1e-8 && rel <= 1e-6 && scal_ok;
    o.summary = fmt("drift %.2e, lambda'(-K) %.2e, lambda(-K) rel %.2e; min Scal %.4g vs eta/(2 lambda(-K)^2) = %.4g%s",
                    n.first_integral_drift, n.dlambda_K, rel, n.min_scal, bound, scal_ok ? "" : " (bound fails)");
    o.data = to_json(n);
    // Inside the admissible range eta <= sin^2(eps) the neck keeps Scal positive.
    const NeckProfile m = solve_neck(eps, 0.005);
    const double lm = std::sin(eps) * std::exp(-2 * std::cos(eps) * std::cos(eps) / 0.005);
    o.notes.push_back(fmt("eta = 0.005: drift %.2e, lambda(-K) rel %.2e, min Scal %.4g > 0, "
                          "min(Scal lambda^2 - eta/2) = %.3g >= 0",
                          m.first_integral_drift, std::fabs(m.lambda_K - lm) / lm, m.min_scal, m.min_scal_margin));
    o.data["admissible"] = to_json(m);
    return o;
}

// 7. Gluing pipeline on the three minimally foliated test fields.
Outcome c7(int threads) {
    bool pass = true;
    std::string summary;
    Json rows = Json::array();
    for (const std::string recipe : {"product", "offdiag", "warped_slice"}) {
        GlueOptions go;
        go.threads = threads;
        const GlueResult g = glue_extend(make_field(recipe), go);
        const GlueReport& r = g.report;
        double det_change = 0;
        for (const auto& s : r.stages)
            if (s.det_preserved) det_change = std::max(det_change, s.max_det_change);
        bool sign = false, mean = false;
        for (const auto& c : r.corrections_applied) {
            sign = sign || c.find("minus sign") != std::string::npos;
            mean = mean || c.find("geometric mean") != std::string::npos;
        }
        const bool ok = det_change <= 1e-12 && r.max_dr_det <= 1e-9 && r.min_eig > 0 && r.input_residual == 0 &&
                        r.product_residual == 0 && sign && mean;
        pass = pass && ok;
        summary += fmt("%s%s det %.1e dr %.1e", summary.empty() ? "" : "; ", recipe.c_str(), det_change, r.max_dr_det);
        rows.push_back(to_json(r));
    }
    Outcome o;
    o.pass = pass;
    o.summary = summary + " (64^3 grid)";
    o.data = rows;
    return o;
}

// 8. Zone-A antipodal exits and the modified tube metric.
Outcome c8(int threads) {
    const double R = 1;
    const StripMetric z = StripMetric::zone_a(R);
    std::vector<AntipodalReport> ap(10);
    parallel_for(10, threads, [&](std::size_t i) {
        const double phi1 = 0.5 + 0.22 * double(i);
        const double beta = (i % 2 ? -1 : 1) * (0.05 + 0.06 * double(i));
        ap[i] = zone_a_connect(integrate_zone_a(z, R, phi1, beta), R);
    });
    double dphi = 0, dangle = 0;
    Json rows = Json::array();
    for (const auto& a : ap) {
        dphi = std::max(dphi, std::fabs(a.phi2 - (kPi - a.phi1)));
        dangle = std::max(dangle, std::fabs(a.angle2 + a.angle1));
        rows.push_back(to_json(a));
    }
    ScalGlueSpec s;
    s.eps = 0.01;
    s.threads = threads;
    const ScalGlueReport g = build_scalglue_metric(s);
    Outcome o;
    o.pass = dphi <= 1e-6 && dangle <= 1e-6 && g.curvature.min_scal > 0 && g.mixed_max_ratio <= 1;
    o.summary = fmt("10 geodesics: |phi2-(pi-phi1)| %.1e, |angle2+angle1| %.1e; min Scal %.4g, mixed/bound %.3g",
                    dphi, dangle, g.curvature.min_scal, g.mixed_max_ratio);
    o.data = {{"antipodal", rows}, {"scalglue", to_json(g)}};
    return o;
}

// r-advance per oscillation, measured on the ODE solution: the path starts on
// {phi = pi/2} and meets it again going the same way every second crossing.
double measured_delta_r(double p) {
    StopRule s;
    s.r_stop = 0;
    s.rtol = 1e-12;
    s.atol = 1e-14;
    s.tmax = 40;
    s.turning_events = false;
    const GeodesicPath path = integrate_geodesic(start_product(p, 0), StripMetric::product(), s);
    std::vector<double> r;
    for (const auto& e : path.events)
        if (e.kind == EventKind::Cross) r.push_back(e.r);
    if (r.size() < 4) throw Error(ErrorCode::MissingCrossing, "too few crossings to measure a period");
    return r[3] - r[1];
}

// 9. Product tori.
Outcome c9(int threads) {
    const std::vector<double> ps{0.3, 0.5, 0.8};
    double worst = 0;
    Json q = Json::array();
    for (double p : ps) {
        const double a = product_period(p), b = measured_delta_r(p);
        worst = std::max(worst, std::fabs(a - b));
        q.push_back({p, a, b});
    }
    ToriReport t = find_closed_tori(2 * kPi, 12, threads);
    annotate_tori_index(t, threads);
    double gap10 = 1e300;
    std::vector<int> idx;
    for (const auto& c : t.found) {
        if (!c.simple) continue;
        if (c.n == 10) gap10 = c.closure_gap;
        idx.push_back(c.index);
    }
    bool grows = idx.size() > 1;
    for (std::size_t i = 1; i < idx.size(); ++i) grows = grows && idx[i] > idx[i - 1];
    const std::vector<double> pn{0.9, 0.99, 0.999};
    std::vector<double> dn;
    for (double p : pn) dn.push_back(product_period(p));
    const bool to_zero = dn[1] < dn[0] && dn[2] < dn[1] && dn[2] < 0.1 * dn[0];
    Outcome o;
    o.pass = worst <= 1e-6 && gap10 < 1e-7 && grows && to_zero;
    o.summary = fmt("quadrature vs ODE %.1e; n=10 gap %.1e; index grows: %s; dr(0.9,0.99,0.999) = %.4f, %.4f, %.4f%s",
                    worst, gap10, grows ? "yes" : "no", dn[0], dn[1], dn[2],
                    to_zero ? "" : " (tends to 2 pi, not 0)");
    std::vector<double> d0;
    for (double p : {0.1, 0.01, 0.001}) d0.push_back(product_period(p));
    o.notes.push_back(fmt("p -> 0 instead: dr(0.1, 0.01, 0.001) = %.4g, %.4g, %.4g, decreasing to 0: %s", d0[0],
                          d0[1], d0[2], d0[1] < d0[0] && d0[2] < d0[1] ? "yes" : "no"));
    o.data = {{"quadrature", q}, {"tori", to_json(t)}, {"p_to_one", dn}, {"p_to_zero", d0}};
    return o;
}

// 10. Stability eigenvalue of the sphere {r = 0}.
Outcome c10(int) {
    struct Case {
        ProfileKind kind;
        double expected;
        const char* name;
    };
    const double eps = 0.2;
    const std::vector<Case> cases{{ProfileKind::Cosh, 2 * eps * eps, "cosh"},
                                  {ProfileKind::ProductConstant, 0, "constant"},
                                  {ProfileKind::RoundSphere, -2, "round"}};
    bool pass = true;
    std::string summary;
    Json rows = Json::array();
    for (const auto& c : cases) {
        ProfileSpec ps;
        ps.kind = c.kind;
        ps.eps = eps;
        const SphereStability s = sphere_stability(build_profile(ps));
        const double scale = std::max(1.0, std::fabs(c.expected));
        const double closed = std::fabs(s.mu1 - c.expected) / scale;
        const double oracle = std::fabs(s.mu1_oracle - c.expected) / scale;
        pass = pass && closed <= 1e-10 && oracle <= 1e-4;
        summary += fmt("%s%s mu1 %.6g (closed %.0e, FD %.0e)", summary.empty() ? "" : "; ", c.name, s.mu1, closed,
                       oracle);
        rows.push_back(to_json(s));
    }
    Outcome o;
    o.pass = pass;
    o.summary = summary;
    o.data = rows;
    return o;
}

// 11. Torus model: positive scalar curvature and the two printed-formula items.
Outcome c11(int threads) {
    TorusModelSpec s;
    s.threads = threads;
    const TorusModelReport r = build_model_torus_metric(s);
    std::vector<std::string> flagged;
    for (const auto& d : r.discrepancies)
        if (d.flagged) flagged.push_back(d.formula);
    std::sort(flagged.begin(), flagged.end());
    // The probe itself, recomputed: k = cos(phi) at phi = pi/4.
    PrintedFields f;
    f.k = [](double, double phi) {
        const double c = std::cos(phi), sn = std::sin(phi);
        return Partials{c, 0, -sn, 0, -c, 0};
    };
    const double printed = scal_printed(PrintedFormula::AppBDtheta, f, 0, kPi / 4);
    const auto m = MetricEvaluator3::diagonal(
        [](const Pt3& x) {
            const double c = std::cos(x[1]);
            return Pt3{c * c, 1, c * c};
        },
        "(r,phi,theta)");
    const double oracle = scal_fd_oracle(m, {0, kPi / 4, 0});
    const bool items = flagged == std::vector<std::string>{"appB_dtheta", "appB_fk"};
    const bool probe = std::fabs(printed - 3) < 1e-9 && std::fabs(oracle - 1) < 1e-4;
    Outcome o;
    o.pass = r.min_scal > 0 && items && probe;
    o.summary = fmt("a = %.4g, min Scal %.4g; flagged {%s%s%s}; dtheta probe printed %.4f vs oracle %.4f", r.a_used,
                    r.min_scal, flagged.size() > 0 ? flagged[0].c_str() : "", flagged.size() > 1 ? ", " : "",
                    flagged.size() > 1 ? flagged[1].c_str() : "", printed, oracle);
    o.data = to_json(r);
    return o;
}

using Criterion = std::function<Outcome(int)>;

Outcome guarded(const Criterion& c, int threads) {
    try {
        return c(threads);
    } catch (const std::exception& e) {
        Outcome o;
        o.pass = false;
        o.summary = std::string("raised ") + e.what();
        o.data = o.summary;
        return o;
    }
}

}  // namespace

int main() {
    const std::vector<Criterion> crit{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11};
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> dumps;
    int failed = 0;
    for (std::size_t i = 0; i < crit.size(); ++i) {
        set_default_threads(1);
        const Outcome o = guarded(crit[i], 1);
        dumps.push_back(dump(o.data));
        failed += !o.pass;
        std::printf("criterion %2zu: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.summary.c_str());
        for (const auto& n : o.notes) std::printf("              note: %s\n", n.c_str());
        std::fflush(stdout);
    }
    std::vector<std::size_t> differ;
    for (std::size_t i = 0; i < crit.size(); ++i) {
        set_default_threads(8);
        if (dump(guarded(crit[i], 8).data) != dumps[i]) differ.push_back(i + 1);
    }
    set_default_threads(1);
    std::string which;
    for (std::size_t k : differ) which += " " + std::to_string(k);
    failed += !differ.empty();
    std::printf("criterion 12: %s  reports of criteria 1-11 at 1 and 8 threads %s%s\n", differ.empty() ? "PASS" : "FAIL",
                differ.empty() ? "are byte-identical" : "differ in:", which.c_str());
    std::printf("total %.1f s, %d criterion(s) failed\n", seconds_since(t0), failed);
    return failed == 0 ? 0 : 1;
}

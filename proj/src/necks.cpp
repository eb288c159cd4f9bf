#include "lamlab/necks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "lamlab/ode.hpp"

namespace lamlab {

// ---------------------------------------------------------------------------
// Neck
//
// With s = -r and mu(s) = lambda(-s) the equation reads mu'' = eta/(4 mu).
// In the variable sigma with d sigma = ds / mu, u = ln mu and w = d mu/ds obey
// u_sigma = w, w_sigma = eta/4, s_sigma = e^u, which stays well conditioned
// however small lambda(-K) is.

NeckProfile solve_neck(double eps, double eta, const NeckOptions& o) {
    if (!(eps > 0 && eps < kPi / 2)) throw Error(ErrorCode::BadParameters, "need 0 < eps < pi/2");
    if (!(eta > 0 && eta < 1)) throw Error(ErrorCode::BadParameters, "need 0 < eta < 1");
    NeckProfile n;
    n.eps = eps;
    n.eta = eta;
    const double c = std::cos(eps), u0 = std::log(std::sin(eps));
    using V3 = Vec<3>;
    auto f = [eta](double, const V3& y) { return V3{y[1], eta / 4, std::exp(y[0])}; };
    OdeOptions oo;
    oo.hmax = o.hmax;
    oo.rtol = 1e-12;
    oo.atol = 1e-14;
    std::vector<V3> ys{V3{u0, -c, 0}};
    bool done = false;
    drive<3>(f, 0.0, V3{u0, -c, 0}, o.sigma_max, oo, [&](const StepView<3>& sv) {
        if (sv.y1[1] >= 0) {
            auto g = [](const V3& y) { return y[1]; };
            const double te = locate_event<3>(f, sv, g, sv.y0[1], sv.y1[1], 1e-15, oo);
            V3 ye = restep<3>(f, sv, te, oo);
            ys.push_back(ye);
            done = true;
            return false;
        }
        ys.push_back(sv.y1);
        return true;
    });
    if (!done) throw Error(ErrorCode::NonTermination, "lambda' did not vanish before the guard");
    const std::size_t m = ys.size();
    n.r.resize(m);
    n.l.resize(m);
    n.d1.resize(m);
    n.d2.resize(m);
    n.scal.resize(m);
    n.min_scal = std::numeric_limits<double>::infinity();
    n.min_scal_margin = std::numeric_limits<double>::infinity();
    n.max_d2_excess = -std::numeric_limits<double>::infinity();
    double max_d1sq = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const V3& y = ys[m - 1 - i];
        const double lam = std::exp(y[0]);
        const double dl = -y[1];
        const double ddl = eta / (4 * lam);
        n.r[i] = -y[2];
        n.l[i] = lam;
        n.d1[i] = dl;
        n.d2[i] = ddl;
        // Scal from the warped-product formula; scal * lambda^2 avoids overflow.
        const double sl2 = -2 * ddl * lam + (1 - dl * dl);
        n.scal[i] = sl2 / (lam * lam);
        n.min_scal = std::min(n.min_scal, n.scal[i]);
        n.min_scal_margin = std::min(n.min_scal_margin, sl2 - eta / 2);
        n.max_d2_excess = std::max(n.max_d2_excess, ddl - eta / (4 * lam));
        max_d1sq = std::max(max_d1sq, dl * dl);
        const double fi = y[1] * y[1] - c * c - 0.5 * eta * (y[0] - u0);
        n.first_integral_drift = std::max(n.first_integral_drift, std::fabs(fi));
    }
    // Far from r = 0 lambda is so small that s stops moving in double precision;
    // keep the sample closest to the end of the integration for each distinct r.
    std::size_t k = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (k > 0 && !(n.r[i] > n.r[k - 1])) continue;
        n.r[k] = n.r[i];
        n.l[k] = n.l[i];
        n.d1[k] = n.d1[i];
        n.d2[k] = n.d2[i];
        n.scal[k] = n.scal[i];
        ++k;
    }
    for (auto* v : {&n.r, &n.l, &n.d1, &n.d2, &n.scal}) v->resize(k);
    n.r.back() = 0;
    n.K = -n.r.front();
    n.lambda_K = n.l.front();
    n.dlambda_K = n.d1.front();
    n.eta_margin = 1 - max_d1sq;
    return n;
}

double neck_lambda_K_closed(double eps, double eta) {
    return std::sin(eps) * std::exp(-2 * std::cos(eps) * std::cos(eps) / eta);
}

double dawson(double x) {
    if (x == 0) return 0;
    const double ax = std::fabs(x);
    // Composite Simpson for the integral of exp(t^2 - x^2) over [0, |x|].
    const int n = 2 * std::max(2000, int(std::ceil(20000 * ax)));
    const double h = ax / n;
    double s = std::exp(-ax * ax) + 1.0;
    for (int i = 1; i < n; ++i) {
        const double t = i * h;
        s += (i % 2 ? 4.0 : 2.0) * std::exp((t - ax) * (t + ax));
    }
    const double v = s * h / 3;
    return x < 0 ? -v : v;
}

double neck_K_closed(double eps, double eta) {
    const double vmax = std::cos(eps) * std::sqrt(2 / eta);
    return std::sin(eps) * std::sqrt(8 / eta) * dawson(vmax);
}

WarpProfile neck_warp_profile(const NeckProfile& n) {
    ProfileSpec s;
    s.kind = ProfileKind::NeckImport;
    s.neck_r = n.r;
    s.neck_l = n.l;
    s.neck_d1 = n.d1;
    s.neck_d2 = n.d2;
    s.neck_eps = n.eps;
    return build_profile(s);
}

// ---------------------------------------------------------------------------
// Cutoff profiles

Jet CosCap::operator()(double t) const {
    const double at = std::fabs(t);
    Jet j;
    if (at <= b)
        j = {std::cos(at), -std::sin(at), -std::cos(at)};
    else if (at >= t_end)
        j = {1, 0, 0};
    else
        j = tail.eval(at);
    if (t < 0) j.d1 = -j.d1;
    return j;
}

CosCap build_cos_cap(const CosCapSpec& s) {
    if (!(s.b > 0 && s.q_up > 0 && s.q_down > 0 && s.w > 0))
        throw Error(ErrorCode::BadParameters, "cos cap parameters must be positive");
    CurvatureSchedule cs;
    cs.start = s.b;
    cs.v0 = std::cos(s.b);
    cs.d0 = -std::sin(s.b);
    cs.c0 = -std::cos(s.b);
    cs.w = s.w;
    cs.levels = {s.q_up, -s.q_down, 0.0};
    auto end_jet = [&](double h1, double h2) {
        cs.holds = {h1, h2};
        const Piecewise p = integrate_schedule(cs);
        const double xe = p.ends().back();
        return p.eval(std::nextafter(xe, -1e300));
    };
    const double d00 = end_jet(0, 0).d1;
    const double h1_min = std::max(0.0, -d00 / s.q_up);
    auto h2_of = [&](double h1) { return (d00 + s.q_up * h1) / s.q_down; };
    auto F = [&](double h1) { return end_jet(h1, std::max(0.0, h2_of(h1))).v - 1; };
    double lo = h1_min, flo = F(lo);
    if (flo > 0) throw Error(ErrorCode::InfeasibleBumps, "cos cap overshoots 1 without a hold");
    double hi = std::max(lo * 2, s.w), fhi = F(hi);
    for (int i = 0; i < 80 && fhi <= 0; ++i) {
        lo = hi;
        flo = fhi;
        hi *= 2;
        fhi = F(hi);
        if (s.b + hi > 4 * s.t_max) break;
    }
    if (!(fhi > 0)) throw Error(ErrorCode::InfeasibleBumps, "cos cap cannot return to 1");
    RootResult rr = find_root(F, lo, hi, flo, fhi, 1e-15 * hi, 1e-15, 400);
    const double h1 = rr.x, h2 = std::max(0.0, h2_of(h1));
    cs.holds = {h1, h2};
    CosCap cap;
    cap.b = s.b;
    cap.tail = integrate_schedule(cs);
    cap.t_end = cap.tail.ends().back();
    cap.knots.push_back(s.b);
    for (double e : cap.tail.ends()) cap.knots.push_back(e);
    if (cap.t_end > s.t_max)
        throw Error(ErrorCode::InfeasibleBumps,
                    "cos cap needs length " + std::to_string(cap.t_end) + " > " + std::to_string(s.t_max));
    return cap;
}

BumpBounds scan_bounds(const std::function<Jet(double)>& f, double t0, double t1, int n) {
    BumpBounds b;
    b.max_d2 = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
        const Jet j = f(t0 + (t1 - t0) * i / n);
        b.max_dev = std::max(b.max_dev, std::fabs(j.v - 1));
        b.max_d1 = std::max(b.max_d1, std::fabs(j.d1));
        b.max_d2 = std::max(b.max_d2, j.d2);
    }
    return b;
}

namespace {

// Moves grid coordinates off C2 joins so central differences stay smooth.
double off_joins(double x, const std::vector<double>& joins, double h) {
    for (int pass = 0; pass < 4; ++pass) {
        bool moved = false;
        for (double j : joins)
            if (std::fabs(x - j) < 2.5 * h) {
                x = j + (x >= j ? 3 * h : -3 * h);
                moved = true;
            }
        if (!moved) break;
    }
    return x;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? 0.5 * (a + b) : a + (b - a) * i / (n - 1);
    return v;
}

void sort_unique(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Modified tube metric k^2 dr^2 + R^2 (dphi^2 + g^2 dtheta^2)

namespace {

Jet g_tilde(const ScalGlueMetric& m, double t) {
    const double at = std::fabs(t);
    Jet j;
    if (at <= m.a1)
        j = {1, 0, 0};
    else if (at < m.a2)
        j = m.g_quintic.eval(at);
    else
        j = {std::cos(at), -std::sin(at), -std::cos(at)};
    if (t < 0) j.d1 = -j.d1;
    return j;
}

Partials k_rt(const ScalGlueMetric& m, double r, double t) {
    const Jet p = m.bump(r), kt = m.kt(t);
    return {p.v * kt.v + 1 - p.v, p.d1 * (kt.v - 1), p.v * kt.d1, p.d2 * (kt.v - 1), p.v * kt.d2,
            p.d1 * kt.d1};
}

Partials g_rt(const ScalGlueMetric& m, double r, double t) {
    const Jet p = m.bump(r), gt = g_tilde(m, t);
    // sin(phi) = cos t, d/dphi = d/dt
    const double s = std::cos(t), sp = -std::sin(t), spp = -std::cos(t);
    return {p.v * gt.v + (1 - p.v) * s, p.d1 * (gt.v - s), p.v * gt.d1 + (1 - p.v) * sp,
            p.d2 * (gt.v - s), p.v * gt.d2 + (1 - p.v) * spp, p.d1 * (gt.d1 - sp)};
}

}  // namespace

Partials ScalGlueMetric::k(double r, double phi) const { return k_rt(*this, r, phi - kPi / 2); }
Partials ScalGlueMetric::g(double r, double phi) const { return g_rt(*this, r, phi - kPi / 2); }

MetricEvaluator3 ScalGlueMetric::evaluator() const {
    const ScalGlueMetric self = *this;
    const double R2 = spec.R * spec.R;
    return MetricEvaluator3::diagonal(
        [self, R2](const Pt3& x) {
            const double t = x[1] - kPi / 2;
            const double kv = k_rt(self, x[0], t).v, gv = g_rt(self, x[0], t).v;
            return Pt3{kv * kv, R2, R2 * gv * gv};
        },
        "tube(r,phi,theta)");
}

ScalGlueMetric make_scalglue(const ScalGlueSpec& s, double eps) {
    if (!(s.R > 0 && eps > 0 && eps < 0.5)) throw Error(ErrorCode::BadParameters, "need R > 0, 0 < eps < 0.5");
    ScalGlueMetric m;
    m.spec = s;
    m.eps = eps;
    const double b1 = eps / 4;
    m.a2 = b1;
    m.a1 = m.a2 / 8;
    m.g_quintic = quintic_hermite(m.a1, m.a2, {1, 0, 0},
                                  {std::cos(m.a2), -std::sin(m.a2), -std::cos(m.a2)});
    m.bump = Bump{kPi * s.R / 2 + 0.3, s.K - 0.3};
    if (!(m.bump.inner < m.bump.outer))
        throw Error(ErrorCode::BadParameters, "K must exceed pi R/2 + 0.6");
    CosCapSpec cs;
    cs.b = b1;
    cs.q_up = 0.9 * eps;
    cs.q_down = 2 * eps;
    cs.w = eps / 8;
    cs.t_max = kPi / 2 - 0.05;
    m.kt = build_cos_cap(cs);
    return m;
}

namespace {

ScalGlueReport certify_scalglue(const ScalGlueMetric& m) {
    const ScalGlueSpec& s = m.spec;
    ScalGlueReport rep;
    rep.eps_used = m.eps;
    rep.b1 = m.kt.b;
    rep.a1 = m.a1;
    rep.a2 = m.a2;
    rep.k_end = m.kt.t_end;
    rep.bump_inner = m.bump.inner;
    rep.bump_outer = m.bump.outer;
    rep.C = std::max(m.bump.max_d1(), m.bump.max_d2());
    const double eps = m.eps, R = s.R, R2 = R * R;

    // (gamma)
    rep.k_bounds = scan_bounds([&](double t) { return m.kt(t); }, 0, kPi / 2, 20000);
    rep.g_bounds = scan_bounds([&](double t) { return g_tilde(m, t); }, 0, m.a2, 2000);
    rep.gamma_ok = rep.k_bounds.max_dev <= eps && rep.k_bounds.max_d1 <= eps &&
                   rep.k_bounds.max_d2 <= eps && rep.g_bounds.max_dev <= eps &&
                   rep.g_bounds.max_d1 <= eps && rep.g_bounds.max_d2 <= eps;
    {
        // g~ equals sine beyond a2, where g~'' = -sin <= 0.
        const BumpBounds outside = scan_bounds([&](double t) { return g_tilde(m, t); }, m.a2, kPi / 2, 2000);
        rep.gamma_ok = rep.gamma_ok && outside.max_d2 <= eps;
    }

    // Grid
    const double h = std::min(1e-3, (m.a2 - m.a1) / 128);
    OracleOptions oo;
    oo.h = h;
    std::vector<double> rj{-m.bump.outer, -m.bump.inner, m.bump.inner, m.bump.outer};
    std::vector<double> tj{m.a1, m.a2};
    for (double k : m.kt.knots) tj.push_back(k);
    {
        const std::size_t n = tj.size();
        for (std::size_t i = 0; i < n; ++i) tj.push_back(-tj[i]);
    }
    std::vector<double> rs = linspace(-s.K + 0.05, s.K - 0.05, s.grid);
    for (double x : linspace(m.bump.inner, m.bump.outer, s.grid / 2)) {
        rs.push_back(x);
        rs.push_back(-x);
    }
    for (double& x : rs) x = off_joins(x, rj, h);
    sort_unique(rs);
    std::vector<double> ts = linspace(-kPi / 2 + 0.05, kPi / 2 - 0.05, s.grid);
    for (double x : linspace(-m.kt.t_end * 1.05, m.kt.t_end * 1.05, s.grid)) ts.push_back(x);
    for (double x : linspace(-1.5 * m.a2, 1.5 * m.a2, s.grid / 2)) ts.push_back(x);
    for (double& x : ts) x = off_joins(x, tj, h);
    sort_unique(ts);
    std::vector<Pt3> pts;
    pts.reserve(rs.size() * ts.size());
    for (double r : rs)
        for (double t : ts) pts.push_back({r, kPi / 2 + t, 0});
    const MetricEvaluator3 g3 = m.evaluator();
    char label[160];
    std::snprintf(label, sizeof label, "tube r:%zu phi:%zu h=%.3g", rs.size(), ts.size(), h);
    rep.curvature = curvature_grid(g3, pts, oo, label, s.threads);

    // Printed formula, mixed-term bound and the phi-phi term.
    const double bound = 2 * rep.C * eps * (1 + 1 / (R2 * R2) + 1 / R2);
    rep.min_k_phiphi_term = std::numeric_limits<double>::infinity();
    PrintedFields pf;
    pf.R = R;
    pf.k = [&m](double r, double phi) { return m.k(r, phi); };
    pf.g = [&m](double r, double phi) { return m.g(r, phi); };
    FormulaDelta d35{"eq35", 0, {}, false, ""};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double r = pts[i][0], t = pts[i][1] - kPi / 2;
        const Partials k = k_rt(m, r, t), g = g_rt(m, r, t);
        const double mixed = g.rr / (g.v * k.v * k.v) + g.p * k.p / (g.v * k.v * R2) -
                             g.r * k.r / (g.v * k.v * k.v * k.v);
        rep.mixed_max_ratio = std::max(rep.mixed_max_ratio, std::fabs(mixed) / bound);
        if (m.bump(r).v > 0 && std::fabs(t) < m.kt.t_end)
            rep.min_k_phiphi_term =
                std::min(rep.min_k_phiphi_term, -(g.pp / g.v + k.pp / k.v) / R2);
        const double pr = scal_printed(PrintedFormula::Eq35, pf, r, pts[i][1]);
        const double dd = std::fabs(pr - rep.curvature.points[i].scal);
        if (dd > d35.max_abs_delta) {
            d35.max_abs_delta = dd;
            d35.at = pts[i];
        }
    }
    rep.eq35_max_delta = d35.max_abs_delta;
    // The oracle itself carries O(h^2) error; only flag what exceeds it clearly.
    d35.flagged = d35.max_abs_delta >
                  std::max(1e-3, 10 * rep.curvature.max_richardson) * (1 + std::fabs(rep.curvature.min_scal));
    d35.note = "printed tube formula vs oracle";
    rep.curvature.deltas.push_back(d35);

    // Product region and zone A.
    {
        const double r = 0.5 * (m.bump.outer + s.K);
        rep.product_scal = scal_fd_oracle(g3, {r, kPi / 3, 0});
        rep.product_expected = 1 / R2;
    }
    {
        OracleOptions oz;
        oz.h = m.a1 / 4;
        rep.zone_a_min = std::numeric_limits<double>::infinity();
        rep.zone_a_max = -rep.zone_a_min;
        for (double r : linspace(-kPi * R / 2, kPi * R / 2, 9))
            for (double t : {-0.5 * m.a1, 0.0, 0.5 * m.a1}) {
                const double v = scal_fd_oracle(g3, {r, kPi / 2 + t, 0}, oz);
                rep.zone_a_min = std::min(rep.zone_a_min, v);
                rep.zone_a_max = std::max(rep.zone_a_max, v);
            }
    }
    // Symmetry in (r, t) and minimality of {phi = pi/2}.
    for (double r : rs)
        for (double t : ts) {
            const Partials a = k_rt(m, r, t), b = k_rt(m, -r, t), c = k_rt(m, r, -t);
            const Partials ga = g_rt(m, r, t), gb = g_rt(m, -r, t), gc = g_rt(m, r, -t);
            rep.symmetry_residual = std::max({rep.symmetry_residual, std::fabs(a.v - b.v),
                                              std::fabs(a.v - c.v), std::fabs(ga.v - gb.v),
                                              std::fabs(ga.v - gc.v)});
        }
    for (double r : rs) {
        const Partials k = k_rt(m, r, 0), g = g_rt(m, r, 0);
        // d/dphi of the (r, theta) block determinant k^2 R^2 g^2
        const double dd = 2 * R2 * k.v * g.v * (k.p * g.v + k.v * g.p);
        rep.minimality_residual = std::max(rep.minimality_residual, std::fabs(dd));
    }
    rep.notes.push_back(fmt("zone A: |phi - pi/2| <= %.3g, |r| <= %.6g (pi R/2)", m.a1, kPi * R / 2));
    rep.notes.push_back(fmt("k~ = sin on |phi - pi/2| <= %.3g, returns to 1 at %.6g", m.kt.b, m.kt.t_end));
    rep.notes.push_back(fmt("g~ = 1 on |phi - pi/2| <= %.3g, sine beyond %.3g", m.a1, m.a2));
    rep.pass = rep.curvature.min_scal > 0 && rep.gamma_ok && rep.mixed_max_ratio <= 1 &&
               rep.symmetry_residual == 0 && rep.minimality_residual <= 1e-9 &&
               std::fabs(rep.zone_a_min - 1 / R2) <= 1e-4 && std::fabs(rep.zone_a_max - 1 / R2) <= 1e-4 &&
               std::fabs(rep.product_scal - rep.product_expected) <= 1e-4;
    return rep;
}

}  // namespace

ScalGlueReport build_scalglue_metric(const ScalGlueSpec& s, ScalGlueMetric* out) {
    std::string last;
    for (int hv = 0; hv <= s.max_halvings; ++hv) {
        const double eps = std::ldexp(s.eps, -hv);
        ScalGlueMetric m;
        try {
            m = make_scalglue(s, eps);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InfeasibleBumps) throw;
            last = e.what();
            continue;
        }
        ScalGlueReport rep = certify_scalglue(m);
        rep.eps_requested = s.eps;
        rep.halvings = hv;
        if (rep.curvature.min_scal > 0) {
            if (out) *out = m;
            return rep;
        }
        const Pt3& a = rep.curvature.argmin;
        last = fmt("min Scal %.6g at (r, phi) = (%.6g, %.6g)", rep.curvature.min_scal, a[0], a[1]);
    }
    throw Error(ErrorCode::ScalNotPositive, last);
}

// ---------------------------------------------------------------------------
// Torus-carrying metric dx^2 + k^2 dy^2 + f^2 dz^2 with a round patch

Jet TorusModelMetric::f(double x) const {
    if (x <= -2 * a) return {std::cos(x), -std::sin(x), -std::cos(x)};
    if (x >= -a / 4) return {1, 0, 0};
    return f_poly.eval(x);
}

Jet TorusModelMetric::k(double x) const {
    if (x >= -2 * a) return {std::cos(x), -std::sin(x), -std::cos(x)};
    const Jet j = k_tail.eval(-x);
    return {j.v, -j.d1, j.d2};
}

double TorusModelMetric::K(double x, double y, double z) const {
    return 1 - bz(z).v * by(y).v * (1 - kt(x).v);
}

double TorusModelMetric::M(double x, double y, double z) const {
    return 1 - bx(x).v * by(y).v * (1 - mt(z).v);
}

MetricEvaluator3 TorusModelMetric::base() const {
    const TorusModelMetric self = *this;
    return MetricEvaluator3::diagonal(
        [self](const Pt3& p) {
            const double kv = self.k(p[0]).v, fv = self.f(p[0]).v;
            return Pt3{1, kv * kv, fv * fv};
        },
        "torus(x,y,z)");
}

MetricEvaluator3 TorusModelMetric::patched() const {
    const TorusModelMetric self = *this;
    return MetricEvaluator3::diagonal(
        [self](const Pt3& p) {
            const double kv = self.k(p[0]).v * self.M(p[0], p[1], p[2]);
            const double fv = self.f(p[0]).v * self.K(p[0], p[1], p[2]);
            return Pt3{1, kv * kv, fv * fv};
        },
        "torus-patched(x,y,z)");
}

double TorusModelMetric::round_inner_x() const { return std::min({kt.b, bx.inner, a / 4}); }
double TorusModelMetric::round_inner_y() const { return by.inner; }
double TorusModelMetric::round_inner_z() const { return std::min(mt.b, bz.inner); }

namespace {

double bump_C(const Bump& b) { return std::max(b.max_d1(), b.max_d2()); }

// Largest b (halving from b0) whose cos cap fits in t_max with |f-1|, |f'| <= lim1 and f'' <= lim2.
CosCap search_cap(double b0, double lim1, double lim2, double t_max, BumpBounds* bb) {
    std::string last = "no attempt";
    for (int i = 0; i < 30; ++i) {
        const double b = std::ldexp(b0, -i);
        CosCapSpec cs;
        cs.b = b;
        cs.q_up = 0.5 * lim2;
        cs.q_down = 0.5 * lim2;
        cs.w = b;
        cs.t_max = t_max;
        CosCap c;
        try {
            c = build_cos_cap(cs);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InfeasibleBumps) throw;
            last = e.what();
            continue;
        }
        const BumpBounds s = scan_bounds([&](double t) { return c(t); }, 0, c.t_end, 20000);
        if (s.max_dev <= lim1 && s.max_d1 <= lim1 && s.max_d2 <= lim2) {
            if (bb) *bb = s;
            return c;
        }
        last = fmt("bounds %.3g %.3g %.3g", s.max_dev, s.max_d1, s.max_d2);
    }
    throw Error(ErrorCode::InfeasibleBumps, "no cos cap satisfies the bounds: " + last);
}

}  // namespace

TorusModelMetric make_torus_model(const TorusModelSpec& s, double a) {
    if (!(a > 0 && a < kPi / 8)) throw Error(ErrorCode::BadParameters, "need 0 < a < pi/8");
    TorusModelMetric m;
    m.a = a;
    // f: concave quintic from cos on [-2a] to the plateau at -a/4.
    {
        const double x0 = -2 * a, x1 = -a / 4;
        Piecewise p;
        p.add(x1, quintic_hermite(x0, x1, {std::cos(x0), -std::sin(x0), -std::cos(x0)}, {1, 0, 0}));
        m.f_poly = p;
    }
    // k: leftwards from -2a (u = -x) with curvature level k_curv until the slope vanishes.
    {
        CurvatureSchedule cs;
        cs.start = 2 * a;
        cs.v0 = std::cos(2 * a);
        cs.d0 = -std::sin(2 * a);
        cs.c0 = -std::cos(2 * a);
        cs.w = s.k_ramp;
        cs.levels = {s.k_curv, 0.0};
        cs.holds = {0.0};
        Piecewise p0 = integrate_schedule(cs);
        const double d00 = p0.eval(std::nextafter(p0.ends().back(), -1e300)).d1;
        if (d00 >= 0) throw Error(ErrorCode::InfeasibleBumps, "k schedule overshoots");
        cs.holds = {-d00 / s.k_curv};
        m.k_tail = integrate_schedule(cs);
        if (m.k_tail.ends().back() > kPi / 2 - s.pole_margin)
            throw Error(ErrorCode::InfeasibleBumps,
                        fmt("k schedule needs u up to %.4g > pi/2 - %.3g", m.k_tail.ends().back(),
                            s.pole_margin));
    }
    m.bx = Bump{s.patch_inner * s.patch_x, s.patch_x};
    m.by = Bump{s.patch_inner * s.patch_y, s.patch_y};
    m.bz = Bump{s.patch_inner * s.patch_z, s.patch_z};
    const double CK = std::max(bump_C(m.by), bump_C(m.bz));
    const double CM = std::max(bump_C(m.bx), bump_C(m.by));
    m.kt = search_cap(0.1, s.eta / CK, s.eta, s.patch_x, nullptr);
    m.mt = search_cap(0.1, s.eta / CM, s.eta, s.patch_z, nullptr);
    return m;
}

namespace {

TorusModelReport certify_torus(const TorusModelMetric& m, const TorusModelSpec& s) {
    TorusModelReport rep;
    rep.a_used = m.a;
    const double a = m.a;
    rep.f_plateau_start = -a / 4;
    rep.k_const_until = -m.k_tail.ends().back();
    rep.max_f_pp = -std::numeric_limits<double>::infinity();
    rep.max_k_ratio = -std::numeric_limits<double>::infinity();
    for (double x : linspace(-kPi / 2, kPi / 2, 20001)) {
        const Jet f = m.f(x), k = m.k(x);
        rep.max_f_pp = std::max(rep.max_f_pp, f.d2);
        if (k.v > 1e-9) rep.max_k_ratio = std::max(rep.max_k_ratio, k.d2 / k.v);
    }
    {
        const Jet fl = m.f(-kPi / 2), kl = m.k(-kPi / 2), fr = m.f(kPi / 2), kr = m.k(kPi / 2);
        rep.boundary_residual = std::max({std::fabs(fl.v), std::fabs(fl.d1 - 1), std::fabs(fl.d2),
                                          std::fabs(kl.d1), std::fabs(kr.v), std::fabs(kr.d1 + 1),
                                          std::fabs(kr.d2), std::fabs(fr.d1)});
    }
    rep.central_torus_x = 0;
    rep.central_torus_residual = std::max(std::fabs(m.k(0).d1), std::fabs(m.f(0).d1));
    rep.kt_b = m.kt.b;
    rep.mt_b = m.mt.b;
    rep.kt_bounds = scan_bounds([&](double t) { return m.kt(t); }, 0, m.kt.t_end, 20000);
    rep.mt_bounds = scan_bounds([&](double t) { return m.mt(t); }, 0, m.mt.t_end, 20000);
    rep.patch_C = std::max({bump_C(m.bx), bump_C(m.by), bump_C(m.bz)});

    // Base grid along x (y = z = pi, away from the patch).
    std::vector<double> xj{-2 * a, -a / 4};
    for (double e : m.k_tail.ends()) xj.push_back(-e);
    const double hb = 1e-3;
    std::vector<double> xs = linspace(-kPi / 2 + 0.02, kPi / 2 - 0.02, s.grid);
    for (double x : linspace(-m.k_tail.ends().back(), -a / 4, s.grid)) xs.push_back(x);
    for (double& x : xs) x = off_joins(x, xj, hb);
    sort_unique(xs);
    std::vector<Pt3> bp;
    for (double x : xs) bp.push_back({x, kPi, kPi});
    OracleOptions ob;
    ob.h = hb;
    const MetricEvaluator3 patched = m.patched();
    rep.base_curvature = curvature_grid(patched, bp, ob, fmt("torus x:%.0f at y=z=pi", double(xs.size())), s.threads);

    // Printed Scal = -k''/k - f''/f against the oracle.
    {
        PrintedFields pf;
        pf.kx = [&m](double x, double) {
            const Jet j = m.k(x);
            return Partials{j.v, j.d1, 0, j.d2, 0, 0};
        };
        pf.fx = [&m](double x, double) {
            const Jet j = m.f(x);
            return Partials{j.v, j.d1, 0, j.d2, 0, 0};
        };
        FormulaDelta d{"appB_fk", 0, {}, false, ""};
        for (std::size_t i = 0; i < bp.size(); ++i) {
            const double pr = scal_printed(PrintedFormula::AppBFk, pf, bp[i][0], 0);
            const double dd = std::fabs(pr - rep.base_curvature.points[i].scal);
            if (dd > d.max_abs_delta) {
                d.max_abs_delta = dd;
                d.at = bp[i];
            }
        }
        d.flagged = d.max_abs_delta > 1e-4;
        const Jet k = m.k(d.at[0]), f = m.f(d.at[0]);
        d.note = fmt("missing k'f'/(kf) cross term: at x=%.6g it equals %.6g (max |delta| %.6g)", d.at[0],
                     k.d1 * f.d1 / (k.v * f.v), d.max_abs_delta);
        rep.discrepancies.push_back(d);
    }
    for (const FormulaDelta& d : torus_formula_probes()) rep.discrepancies.push_back(d);

    // Patch grid.
    const double hp = std::min({1e-3, m.kt.b / 32, m.mt.b / 32});
    std::vector<double> jx{-m.bx.outer, -m.bx.inner, m.bx.inner, m.bx.outer, -2 * a, -a / 4};
    for (double k : m.kt.knots) {
        jx.push_back(k);
        jx.push_back(-k);
    }
    std::vector<double> jy{-m.by.outer, -m.by.inner, m.by.inner, m.by.outer};
    std::vector<double> jz{-m.bz.outer, -m.bz.inner, m.bz.inner, m.bz.outer};
    for (double k : m.mt.knots) {
        jz.push_back(k);
        jz.push_back(-k);
    }
    const int n = s.patch_grid;
    std::vector<Pt3> pp;
    auto add_box = [&](double X, double Y, double Z, int nx, int ny, int nz) {
        for (double x : linspace(-X, X, nx))
            for (double y : linspace(-Y, Y, ny))
                for (double z : linspace(-Z, Z, nz))
                    pp.push_back({off_joins(x, jx, hp), off_joins(y, jy, hp), off_joins(z, jz, hp)});
    };
    add_box(1.05 * s.patch_x, 1.05 * s.patch_y, 1.05 * s.patch_z, n, n, n);
    add_box(1.05 * m.kt.t_end, s.patch_y, 1.05 * m.mt.t_end, n + 4, n / 2, n + 4);
    OracleOptions op;
    op.h = hp;
    rep.patch_curvature = curvature_grid(patched, pp, op, fmt("patch %.0f^3 + refined, h=%.3g", n, hp), s.threads);
    rep.min_scal = std::min(rep.base_curvature.min_scal, rep.patch_curvature.min_scal);

    // Inner box equals the round chart.
    {
        const double X = m.round_inner_x(), Y = m.round_inner_y(), Z = m.round_inner_z();
        for (double x : linspace(-X, X, 9))
            for (double y : linspace(-Y, Y, 9))
                for (double z : linspace(-Z, Z, 9)) {
                    const Mat3 g = patched.at({x, y, z});
                    const double c = std::cos(x), cz = std::cos(z);
                    rep.round_residual = std::max({rep.round_residual, std::fabs(g[0][0] - 1),
                                                   std::fabs(g[1][1] - c * c * cz * cz),
                                                   std::fabs(g[2][2] - c * c)});
                }
        // Slices {y = c} for |c| <= inner radius: the (x, z) block does not depend on y.
        for (double x : linspace(-s.patch_x, s.patch_x, 25))
            for (double z : linspace(-s.patch_z, s.patch_z, 25))
                for (double y : linspace(-m.by.inner, m.by.inner, 9)) {
                    const double f = m.f(x).v, kt = m.kt(x).v;
                    const double dK = m.bz(z).v * m.by(y).d1 * (kt - 1);
                    const double dd = 2 * f * f * m.K(x, y, z) * dK;
                    rep.slice_minimality = std::max(rep.slice_minimality, std::fabs(dd));
                }
    }
    rep.notes.push_back(fmt("round box |x|<=%.4g |y|<=%.4g |z|<=%.4g", m.round_inner_x(),
                            m.round_inner_y(), m.round_inner_z()));
    rep.notes.push_back(fmt("f = 1 from x = %.4g (concave quintic on [-2a, -a/4]); k constant for x <= %.4g",
                            -a / 4, rep.k_const_until));
    int flagged = 0;
    for (const auto& d : rep.discrepancies) flagged += d.flagged;
    rep.pass = rep.min_scal > 0 && rep.max_f_pp <= 1e-12 && rep.max_k_ratio <= 0.25 &&
               rep.boundary_residual <= 1e-12 && rep.round_residual <= 1e-12 &&
               rep.slice_minimality == 0 && rep.central_torus_residual == 0 && flagged == 2;
    return rep;
}

}  // namespace

TorusModelReport build_model_torus_metric(const TorusModelSpec& s, TorusModelMetric* out) {
    std::string last;
    for (int i = 0; i <= s.max_bisections; ++i) {
        const double a = std::ldexp(s.a, -i);
        TorusModelMetric m;
        try {
            m = make_torus_model(s, a);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InfeasibleBumps) throw;
            last = e.what();
            continue;
        }
        TorusModelReport rep = certify_torus(m, s);
        rep.a_requested = s.a;
        rep.bisections = i;
        if (rep.min_scal > 0 && rep.max_f_pp <= 1e-12 && rep.max_k_ratio <= 0.25) {
            if (out) *out = m;
            return rep;
        }
        last = fmt("a=%.4g: min Scal %.6g, sup f'' %.3g", a, rep.min_scal, rep.max_f_pp);
    }
    throw Error(ErrorCode::InfeasibleBumps, "no feasible a: " + last);
}

}  // namespace lamlab

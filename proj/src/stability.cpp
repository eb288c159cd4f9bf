#include "lamlab/stability.hpp"

#include <algorithm>
#include <cmath>

#include "lamlab/curvature.hpp"
#include "lamlab/ode.hpp"

namespace lamlab {

namespace {

using V6 = Vec<6>;

V6 jacobi_rhs(const StripMetric& m, const V6& y) {
    const StripJet j = m.jet(y[0], y[1]);
    const double rp = y[2], pp = y[3];
    const double r2 = -(j.E_r * rp * rp + 2 * j.E_p * rp * pp - j.G_r * pp * pp) / (2 * j.E);
    const double p2 = (j.E_p * rp * rp - 2 * j.G_r * rp * pp - j.G_p * pp * pp) / (2 * j.G);
    const double K = gauss_from_jet(j);
    return {rp, pp, r2, p2, y[5], -K * y[4]};
}

}  // namespace

StabilityReport jacobi_index(const GeodesicState& start, double length, const StripMetric& m,
                             const JacobiOptions& o) {
    StabilityReport rep;
    rep.length = length;
    OdeOptions oo;
    oo.rtol = o.rtol;
    oo.atol = o.atol;
    oo.hmax = o.hmax;
    auto f = [&m](double, const V6& y) { return jacobi_rhs(m, y); };
    V6 y{start.r, start.phi, start.dr, start.dphi, 0, 1};
    rep.jacobi.push_back({0, 0, 1});
    V6 last = y;
    drive<6>(f, 0.0, y, length, oo, [&](const StepView<6>& sv) {
        if (!(std::sin(sv.y1[1]) > o.guard))
            throw Error(ErrorCode::BoundaryDegeneracy, "Jacobi path reached the boundary");
        const double g0 = sv.y0[4], g1 = sv.y1[4];
        if (sv.t0 > 0 && g0 != 0 && ((g0 < 0) != (g1 < 0)) && g1 != 0) {
            auto g = [](const V6& yy) { return yy[4]; };
            const double tz = locate_event<6>(f, sv, g, g0, g1, o.zero_ttol, oo);
            const V6 yz = restep<6>(f, sv, tz, oo);
            if (std::fabs(yz[5]) < o.tangential_tol)
                throw Error(ErrorCode::StepFailure, "tangential zero of the Jacobi field");
            if (tz < length) rep.conjugate_t.push_back(tz);
        } else if (g1 == 0 && sv.t1 < length) {
            rep.conjugate_t.push_back(sv.t1);
        }
        rep.jacobi.push_back({sv.t1, sv.y1[4], sv.y1[5]});
        last = sv.y1;
        return true;
    });
    rep.index = int(rep.conjugate_t.size());
    (void)last;
    return rep;
}

StabilityReport jacobi_index(const GeodesicPath& path, const StripMetric& m, const JacobiOptions& o) {
    const GeodesicState& a = path.samples.front();
    const GeodesicState& b = path.samples.back();
    StabilityReport rep = jacobi_index(a, b.t - a.t, m, o);
    // Re-integrate the geodesic alone to the same length for an endpoint check.
    OdeOptions oo;
    oo.rtol = o.rtol;
    oo.atol = o.atol;
    oo.hmax = o.hmax;
    auto f = [&m](double, const V6& y) { return jacobi_rhs(m, y); };
    V6 y{a.r, a.phi, a.dr, a.dphi, 0, 1};
    drive<6>(f, 0.0, y, b.t - a.t, oo, [&](const StepView<6>& sv) {
        y = sv.y1;
        return true;
    });
    rep.endpoint_gap = std::max(std::fabs(y[0] - b.r), std::fabs(y[1] - b.phi));
    return rep;
}

SphereStability sphere_stability(const WarpProfile& p) {
    const Jet l = p.eval(0);
    if (std::fabs(l.d1) > 1e-12) throw Error(ErrorCode::NotMinimal, "lambda'(0) != 0");
    SphereStability s;
    s.profile = p.label();
    s.mu1 = 2 * l.d2 / l.v;
    // Ric(d_r, d_r) = -2 lambda''/lambda; the potential of -L on the totally geodesic leaf.
    const MetricEvaluator3 g = MetricEvaluator3::warped(p);
    const Pt3 x{0, kPi / 2, 0};
    const double h = 1e-3;
    const double r1 = ricci_fd(g, x, h)[0][0], r2 = ricci_fd(g, x, h / 2)[0][0];
    s.mu1_oracle = -(4 * r2 - r1) / 3;
    s.oracle_delta = std::fabs(s.mu1 - s.mu1_oracle) / std::max(1.0, std::fabs(s.mu1));
    s.stable = s.mu1 >= 0;
    s.strictly_stable = s.mu1 > 0;
    return s;
}

namespace {
GeodesicState two_sided_start(const GeodesicPath& fwd) {
    const GeodesicState& e = fwd.samples.back();
    return {0, -e.r, kPi - e.phi, e.dr, e.dphi};
}
}  // namespace

IndexTable index_table(const SweepReport& sweep, const StripMetric& m, int threads,
                       const JacobiOptions& o) {
    IndexTable t;
    const std::size_t n = sweep.paths.size();
    t.rows.resize(n);
    parallel_for(n, threads, [&](std::size_t i) {
        const GeodesicPath& p = sweep.paths[i];
        const double T = p.samples.back().t - p.samples.front().t;
        const StabilityReport r = jacobi_index(two_sided_start(p), 2 * T, m, o);
        t.rows[i] = {sweep.deltas[i], sweep.crossings[i], r.index};
    });
    t.index_nondecreasing = true;
    for (std::size_t i = 0; i < n; ++i) {
        t.c0 = std::max(t.c0, t.rows[i].crossings - t.rows[i].index);
        if (i > 0 && t.rows[i].index < t.rows[i - 1].index) t.index_nondecreasing = false;
    }
    t.index_grows = n > 1 && t.rows.back().index > t.rows.front().index;
    return t;
}

void annotate_tori_index(ToriReport& tori, int threads, const JacobiOptions& o) {
    const StripMetric prod = StripMetric::product(tori.L);
    parallel_for(tori.found.size(), threads, [&](std::size_t i) {
        ClosedGeodesic& c = tori.found[i];
        c.index = jacobi_index(c.path.start, c.length, prod, o).index;
    });
}

}  // namespace lamlab

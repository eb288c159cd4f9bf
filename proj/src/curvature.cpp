#include "lamlab/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace lamlab {

MetricEvaluator3 MetricEvaluator3::diagonal(std::function<Pt3(const Pt3&)> d, std::string chart) {
    return MetricEvaluator3(
        [d](const Pt3& p) {
            const Pt3 v = d(p);
            Mat3 m{};
            m[0][0] = v[0];
            m[1][1] = v[1];
            m[2][2] = v[2];
            return m;
        },
        std::move(chart));
}

MetricEvaluator3 MetricEvaluator3::warped(const WarpProfile& prof) {
    auto pp = std::make_shared<const WarpProfile>(prof);
    return diagonal(
        [pp](const Pt3& x) {
            const double l = pp->eval(x[0]).v, s = std::sin(x[1]);
            return Pt3{1.0, l * l, l * l * s * s};
        },
        "warped(r,phi,theta)");
}

MetricEvaluator3 MetricEvaluator3::euclidean() {
    return diagonal([](const Pt3&) { return Pt3{1, 1, 1}; }, "euclidean");
}

namespace {

Mat3 checked(const MetricEvaluator3& m, const Pt3& p) {
    Mat3 g = m.at(p);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < i; ++j)
            if (std::fabs(g[i][j] - g[j][i]) > 1e-12 * (1 + std::fabs(g[i][j])))
                throw Error(ErrorCode::SingularMetric, "metric not symmetric");
    const double e = min_eig3(g);
    if (!(e > 0)) throw Error(ErrorCode::SingularMetric, "metric not positive definite");
    return g;
}

using T3 = std::array<Mat3, 3>;

}  // namespace

Mat3 ricci_fd(const MetricEvaluator3& m, const Pt3& p, double h) {
    const Mat3 g0 = checked(m, p);
    std::array<Mat3, 3> gp{}, gm{};
    for (int e = 0; e < 3; ++e) {
        Pt3 a = p, b = p;
        a[e] += h;
        b[e] -= h;
        gp[e] = checked(m, a);
        gm[e] = checked(m, b);
    }
    T3 dg{};
    std::array<T3, 3> ddg{};
    for (int e = 0; e < 3; ++e)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                dg[e][i][j] = (gp[e][i][j] - gm[e][i][j]) / (2 * h);
                ddg[e][e][i][j] = (gp[e][i][j] - 2 * g0[i][j] + gm[e][i][j]) / (h * h);
            }
    for (int e = 0; e < 3; ++e)
        for (int f = e + 1; f < 3; ++f) {
            Mat3 q[4];
            const int sg[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
            for (int k = 0; k < 4; ++k) {
                Pt3 x = p;
                x[e] += sg[k][0] * h;
                x[f] += sg[k][1] * h;
                q[k] = checked(m, x);
            }
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const double v = (q[0][i][j] - q[1][i][j] - q[2][i][j] + q[3][i][j]) / (4 * h * h);
                    ddg[e][f][i][j] = ddg[f][e][i][j] = v;
                }
        }
    const Mat3 gi = inv3(g0);
    T3 dgi{};
    for (int e = 0; e < 3; ++e)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                double s = 0;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) s += gi[a][i] * dg[e][i][j] * gi[j][b];
                dgi[e][a][b] = -s;
            }
    // S[d][b][c] = d_b g_dc + d_c g_db - d_d g_bc
    T3 S{};
    std::array<T3, 3> dS{};
    for (int d = 0; d < 3; ++d)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                S[d][b][c] = dg[b][d][c] + dg[c][d][b] - dg[d][b][c];
                for (int e = 0; e < 3; ++e)
                    dS[e][d][b][c] = ddg[e][b][d][c] + ddg[e][c][d][b] - ddg[e][d][b][c];
            }
    T3 Gam{};
    std::array<T3, 3> dGam{};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                double s = 0;
                for (int d = 0; d < 3; ++d) s += gi[a][d] * S[d][b][c];
                Gam[a][b][c] = 0.5 * s;
                for (int e = 0; e < 3; ++e) {
                    double t = 0;
                    for (int d = 0; d < 3; ++d) t += dgi[e][a][d] * S[d][b][c] + gi[a][d] * dS[e][d][b][c];
                    dGam[e][a][b][c] = 0.5 * t;
                }
            }
    Mat3 ric{};
    for (int b = 0; b < 3; ++b)
        for (int d = 0; d < 3; ++d) {
            double r = 0;
            for (int a = 0; a < 3; ++a) {
                r += dGam[a][a][b][d] - dGam[d][a][b][a];
                for (int e = 0; e < 3; ++e) r += Gam[a][a][e] * Gam[e][b][d] - Gam[a][d][e] * Gam[e][b][a];
            }
            ric[b][d] = r;
        }
    return ric;
}

double scal_fd_raw(const MetricEvaluator3& m, const Pt3& p, double h) {
    const Mat3 ric = ricci_fd(m, p, h);
    const Mat3 gi = inv3(m.at(p));
    double s = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += gi[i][j] * ric[i][j];
    return 0.5 * s;
}

namespace {
double scal_fd_detail(const MetricEvaluator3& m, const Pt3& p, const OracleOptions& o, double* rich) {
    const double s1 = scal_fd_raw(m, p, o.h);
    if (!o.richardson) {
        if (rich) *rich = 0;
        return s1;
    }
    const double s2 = scal_fd_raw(m, p, o.h / 2);
    const double d = std::fabs(s1 - s2) / (1 + std::fabs(s1));
    if (rich) *rich = d;
    if (!(d <= o.richardson_tol))
    {
        char buf[160];
        std::snprintf(buf, sizeof buf, "Richardson check failed (%.3g) at (%.6g, %.6g, %.6g), h=%.3g", d, p[0],
                      p[1], p[2], o.h);
        throw Error(ErrorCode::StepTooLarge, buf);
    }
    return s1;
}
}  // namespace

double scal_fd_oracle(const MetricEvaluator3& m, const Pt3& p, const OracleOptions& o) {
    return scal_fd_detail(m, p, o, nullptr);
}

double scal_warped(const WarpProfile& p, double r) {
    const Jet l = p.eval(r);
    return -2 * l.d2 / l.v + (1 - l.d1 * l.d1) / (l.v * l.v);
}

const char* printed_formula_name(PrintedFormula f) {
    switch (f) {
        case PrintedFormula::Eq35: return "eq35";
        case PrintedFormula::AppBFk: return "appB_fk";
        case PrintedFormula::AppBDtheta: return "appB_dtheta";
    }
    return "?";
}

double scal_printed(PrintedFormula f, const PrintedFields& fl, double r, double phi) {
    switch (f) {
        case PrintedFormula::Eq35: {
            if (!fl.k || !fl.g) throw Error(ErrorCode::MissingDerivative, "eq35 needs k and g");
            const Partials k = fl.k(r, phi), g = fl.g(r, phi);
            const double R2 = fl.R * fl.R;
            return -(k.pp / (k.v * R2) + g.pp / (g.v * R2)) -
                   (g.rr / (g.v * k.v * k.v) + g.p * k.p / (g.v * k.v * R2) -
                    g.r * k.r / (g.v * k.v * k.v * k.v));
        }
        case PrintedFormula::AppBFk: {
            if (!fl.kx || !fl.fx) throw Error(ErrorCode::MissingDerivative, "appB_fk needs k and f");
            const Partials k = fl.kx(r, phi), fx = fl.fx(r, phi);
            return -k.rr / k.v - fx.rr / fx.v;
        }
        case PrintedFormula::AppBDtheta: {
            if (!fl.k) throw Error(ErrorCode::MissingDerivative, "appB_dtheta needs k");
            const Partials k = fl.k(r, phi);
            const double c = std::cos(phi);
            return 1 - k.pp / k.v - k.rr / (k.v * c * c) - std::tan(phi) * k.p / k.v;
        }
    }
    return 0;
}

double gauss_from_jet(const StripJet& j) {
    const double W = std::sqrt(j.E * j.G);
    const double W_r = (j.E_r * j.G + j.E * j.G_r) / (2 * W);
    const double W_p = (j.E_p * j.G + j.E * j.G_p) / (2 * W);
    const double a = j.G_rr / W - j.G_r * W_r / (W * W);
    const double b = j.E_pp / W - j.E_p * W_p / (W * W);
    return -(a + b) / (2 * W);
}

double gauss_strip(const StripMetric& s, double r, double phi, double guard) {
    if (!(std::sin(phi) > guard))
        throw Error(ErrorCode::BoundaryDegeneracy, "sin(phi) below guard in gauss_strip");
    return gauss_from_jet(s.jet(r, phi));
}

CurvatureReport curvature_grid(const MetricEvaluator3& m, const std::vector<Pt3>& pts,
                               const OracleOptions& o, const std::string& label, int threads) {
    CurvatureReport rep;
    rep.grid = label;
    rep.points.resize(pts.size());
    std::vector<double> rich(pts.size(), 0.0);
    parallel_for(pts.size(), threads, [&](std::size_t i) {
        rep.points[i].x = pts[i];
        rep.points[i].scal = scal_fd_detail(m, pts[i], o, &rich[i]);
    });
    rep.min_scal = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (rep.points[i].scal < rep.min_scal) {
            rep.min_scal = rep.points[i].scal;
            rep.argmin = pts[i];
        }
        rep.max_richardson = std::max(rep.max_richardson, rich[i]);
    }
    return rep;
}

std::vector<FormulaDelta> torus_formula_probes(double tol) {
    std::vector<FormulaDelta> out;
    // dtheta-term formula at k = cos(phi), phi = pi/4.
    {
        PrintedFields f;
        f.k = [](double, double phi) {
            const double c = std::cos(phi), s = std::sin(phi);
            return Partials{c, 0, -s, 0, -c, 0};
        };
        const double phi = kPi / 4;
        const double printed = scal_printed(PrintedFormula::AppBDtheta, f, 0, phi);
        auto m = MetricEvaluator3::diagonal(
            [](const Pt3& x) {
                const double c = std::cos(x[1]);
                return Pt3{c * c, 1, c * c};
            },
            "(r,phi,theta)");
        const double oracle = scal_fd_oracle(m, {0, phi, 0});
        FormulaDelta d{"appB_dtheta", std::fabs(printed - oracle), {0, phi, 0}, false, ""};
        d.flagged = d.max_abs_delta > tol;
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "tan(phi)*k_phi/k sign: printed %.6f vs oracle %.6f at k=cos(phi), phi=pi/4",
                      printed, oracle);
        d.note = buf;
        out.push_back(d);
    }
    return out;
}

}  // namespace lamlab

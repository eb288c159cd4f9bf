#include <cmath>

#include "doctest.h"
#include "lamlab/curvature.hpp"
#include "support.hpp"

using namespace lamlab;

namespace {

WarpProfile cosh_profile(double eps) {
    ProfileSpec s;
    s.eps = eps;
    return build_profile(s);
}

Field2 constant_field(double c) {
    return [c](double, double) { return Partials{c, 0, 0, 0, 0, 0}; };
}

}  // namespace

TEST_SUITE("curvature") {

TEST_CASE("closed-form scal on model profiles") {
    ProfileSpec r;
    r.kind = ProfileKind::RoundSphere;
    const WarpProfile round = build_profile(r);
    for (double x : {-1.2, 0.0, 0.4, 1.1}) CHECK(scal_warped(round, x) == doctest::Approx(3).epsilon(1e-12));
    ProfileSpec c;
    c.kind = ProfileKind::ProductConstant;
    c.constant = 2;
    CHECK(scal_warped(build_profile(c), 0.3) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(scal_warped(cosh_profile(0.2), 0) == doctest::Approx(0.92).epsilon(1e-14));
}

TEST_CASE("FD oracle: flat, round and cosh") {
    CHECK(std::fabs(scal_fd_oracle(MetricEvaluator3::euclidean(), {0.3, 0.2, 0.1})) < 1e-8);
    ProfileSpec r;
    r.kind = ProfileKind::RoundSphere;
    const auto round = MetricEvaluator3::warped(build_profile(r));
    CHECK(scal_fd_oracle(round, {0.4, 1.0, 0.5}) == doctest::Approx(3).epsilon(1e-4));
    const WarpProfile p = cosh_profile(0.2);
    const double exact = scal_warped(p, 0.5);
    CHECK(scal_fd_oracle(MetricEvaluator3::warped(p), {0.5, 1.2, 0}) == doctest::Approx(exact).epsilon(1e-4));
}

TEST_CASE("Richardson check rejects a step that is too large") {
    ProfileSpec r;
    r.kind = ProfileKind::RoundSphere;
    const auto round = MetricEvaluator3::warped(build_profile(r));
    OracleOptions o;
    o.h = 0.3;
    o.richardson_tol = 1e-8;
    CHECK_THROWS_CODE(scal_fd_oracle(round, {0.4, 1.0, 0.5}, o), ErrorCode::StepTooLarge);
}

TEST_CASE("Ricci of the round chart is 2 g") {
    const auto chart = MetricEvaluator3::diagonal(
        [](const Pt3& x) {
            const double s = std::sin(x[0]), t = std::sin(x[1]);
            return Pt3{1, s * s, s * s * t * t};
        },
        "(r,phi,theta)");
    const Pt3 p{1.0, 1.1, 0.2};
    const Mat3 ric = ricci_fd(chart, p, 1e-3);
    const Mat3 g = chart.at(p);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(std::fabs(ric[i][j] - 2 * g[i][j]) < 1e-5);
}

TEST_CASE("printed formulas") {
    PrintedFields f;
    f.k = constant_field(1);
    f.g = constant_field(1);
    CHECK(std::fabs(scal_printed(PrintedFormula::Eq35, f, 0.1, 1.0)) < 1e-14);
    f.g = [](double, double phi) {
        const double s = std::sin(phi), c = std::cos(phi);
        return Partials{s, 0, c, 0, -s, 0};
    };
    f.R = 1;
    CHECK(scal_printed(PrintedFormula::Eq35, f, 0.1, 1.0) == doctest::Approx(1).epsilon(1e-12));
    // cylinder over the unit sphere, oracle agrees
    const auto cyl = MetricEvaluator3::diagonal(
        [](const Pt3& x) {
            const double s = std::sin(x[1]);
            return Pt3{1, 1, s * s};
        },
        "(r,phi,theta)");
    CHECK(scal_fd_oracle(cyl, {0.1, 1.0, 0}) == doctest::Approx(1).epsilon(1e-4));
    // region where f = 1 and k = cos x
    PrintedFields b;
    b.kx = [](double x, double) {
        const double c = std::cos(x), s = std::sin(x);
        return Partials{c, -s, 0, -c, 0, 0};
    };
    b.fx = constant_field(1);
    CHECK(scal_printed(PrintedFormula::AppBFk, b, 0.3, 0) == doctest::Approx(1).epsilon(1e-14));
    PrintedFields missing;
    CHECK_THROWS_CODE(scal_printed(PrintedFormula::AppBFk, missing, 0, 0), ErrorCode::MissingDerivative);
}

TEST_CASE("the dtheta probe: printed 3, oracle 1") {
    const auto d = torus_formula_probes();
    bool seen = false;
    for (const auto& x : d) {
        if (x.formula != "appB_dtheta") continue;
        seen = true;
        CHECK(x.flagged);
        CHECK(x.max_abs_delta == doctest::Approx(2).epsilon(1e-4));
    }
    CHECK(seen);
}

TEST_CASE("Gauss curvature of strips") {
    const StripMetric prod = StripMetric::product();
    CHECK(gauss_strip(prod, 0.7, kPi / 2) == doctest::Approx(1).epsilon(1e-12));
    CHECK(gauss_strip(prod, 0.7, 1.0) == doctest::Approx(1 / std::pow(std::sin(1.0), 4)).epsilon(1e-10));
    const StripMetric z = StripMetric::zone_a(1.3);
    for (double phi : {0.5, 1.2, 2.4})
        CHECK(gauss_strip(z, 0.2, phi) == doctest::Approx(1 / std::pow(1.3, 4)).epsilon(1e-10));
    const StripMetric w = StripMetric::warped(cosh_profile(0.2));
    for (double phi : {0.4, 1.0, 1.4}) {
        const double a = gauss_strip(w, 0.6, phi), b = gauss_strip(w, 0.6, kPi - phi);
        CHECK(std::fabs(a - b) < 1e-10 * std::max(1.0, std::fabs(a)));
    }
}

TEST_CASE("curvature grid keeps order and is thread independent") {
    const auto m = MetricEvaluator3::warped(cosh_profile(0.2));
    std::vector<Pt3> pts;
    for (int i = 0; i < 12; ++i) pts.push_back({-0.5 + 0.1 * i, 0.5 + 0.15 * i, 0});
    const CurvatureReport a = curvature_grid(m, pts, {}, "line", 1);
    const CurvatureReport b = curvature_grid(m, pts, {}, "line", 4);
    REQUIRE(a.points.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(a.points[i].x == pts[i]);
        CHECK(a.points[i].scal == b.points[i].scal);
    }
    CHECK(a.min_scal == b.min_scal);
}

}

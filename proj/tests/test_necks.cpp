#include <cmath>

#include "doctest.h"
#include "lamlab/necks.hpp"
#include "support.hpp"

using namespace lamlab;

TEST_SUITE("necks") {

TEST_CASE("neck matches its first-integral closed forms") {
    const double eps = 0.1, eta = 0.5;
    const NeckProfile n = solve_neck(eps, eta);
    const double lk = std::sin(eps) * std::exp(-2 * std::cos(eps) * std::cos(eps) / eta);
    CHECK(n.lambda_K == doctest::Approx(lk).epsilon(1e-6));
    CHECK(std::fabs(n.dlambda_K) <= 1e-8);
    CHECK(n.first_integral_drift <= 1e-8);
    CHECK(n.K == doctest::Approx(neck_K_closed(eps, eta)).epsilon(1e-6));
    // samples increase in r and end at r = 0 with the sine data
    for (std::size_t i = 1; i < n.r.size(); ++i) CHECK(n.r[i] > n.r[i - 1]);
    CHECK(n.r.back() == 0);
    CHECK(n.l.back() == doctest::Approx(std::sin(eps)).epsilon(1e-14));
    CHECK(n.d1.back() == doctest::Approx(std::cos(eps)).epsilon(1e-14));
}

TEST_CASE("scalar curvature stays positive when eta <= sin^2 eps") {
    const NeckProfile n = solve_neck(0.1, 0.005);
    CHECK(n.min_scal > 0);
    CHECK(n.min_scal_margin >= 0);
    CHECK(n.eta_margin > 0.005);
}

TEST_CASE("eps near pi/2 gives a short neck") {
    const NeckProfile n = solve_neck(kPi / 2 - 1e-4, 0.5);
    CHECK(n.K < 1e-3);
    CHECK(n.lambda_K == doctest::Approx(1).epsilon(1e-6));
}

TEST_CASE("Dawson integral against known values") {
    CHECK(dawson(0) == 0);
    CHECK(dawson(1) == doctest::Approx(0.5380795069127684).epsilon(1e-10));
    CHECK(dawson(-0.5) == doctest::Approx(-0.4244363835020223).epsilon(1e-10));
    CHECK(dawson(10) == doctest::Approx(0.0502538471507297).epsilon(1e-9));
}

TEST_CASE("bad neck parameters") {
    CHECK_THROWS_CODE(solve_neck(0.1, 0), ErrorCode::BadParameters);
    CHECK_THROWS_CODE(solve_neck(0, 0.5), ErrorCode::BadParameters);
}

TEST_CASE("cos cap returns to 1 with bounded derivatives") {
    CosCapSpec s;
    const CosCap c = build_cos_cap(s);
    CHECK(c(0).v == 1);
    CHECK(c(s.b / 2).v == doctest::Approx(std::cos(s.b / 2)).epsilon(1e-15));
    CHECK(c(c.t_end).v == 1);
    const Jet e = c(std::nextafter(c.t_end, 0.0));
    CHECK(e.v == doctest::Approx(1).epsilon(1e-12));
    CHECK(std::fabs(e.d1) < 1e-12);
    CHECK(c(-0.3).v == c(0.3).v);
    const BumpBounds b = scan_bounds([&](double t) { return c(t); }, 0, c.t_end, 4000);
    CHECK(b.max_d2 <= s.q_up * (1 + 1e-12));
    CosCapSpec bad = s;
    bad.t_max = 0.02;
    CHECK_THROWS_CODE(build_cos_cap(bad), ErrorCode::InfeasibleBumps);
}

TEST_CASE("modified tube metric") {
    ScalGlueSpec s;
    s.eps = 0.01;
    s.grid = 24;
    ScalGlueMetric m;
    const ScalGlueReport r = build_scalglue_metric(s, &m);
    CHECK(r.pass);
    CHECK(r.curvature.min_scal > 0);
    CHECK(r.symmetry_residual == 0);
    CHECK(r.zone_a_min == doctest::Approx(1).epsilon(1e-4));
    CHECK(r.zone_a_max == doctest::Approx(1).epsilon(1e-4));
    CHECK(r.product_scal == doctest::Approx(1).epsilon(1e-4));
    CHECK(r.mixed_max_ratio <= 1);
    // exact symmetry of the fields
    for (double phi : {0.3, 1.2, 1.56})
        for (double x : {0.1, 1.0, 2.5}) {
            CHECK(m.k(x, phi).v == m.k(-x, phi).v);
            CHECK(m.g(x, phi).v == m.g(-x, phi).v);
            CHECK(m.k(x, phi).v == doctest::Approx(m.k(x, kPi - phi).v).epsilon(1e-15));
            CHECK(m.g(x, phi).v == doctest::Approx(m.g(x, kPi - phi).v).epsilon(1e-15));
        }
    ScalGlueSpec bad = s;
    bad.K = 1;
    CHECK_THROWS_CODE(build_scalglue_metric(bad), ErrorCode::BadParameters);
}

TEST_CASE("torus model") {
    TorusModelSpec s;
    s.grid = 32;
    s.patch_grid = 10;
    TorusModelMetric m;
    const TorusModelReport r = build_model_torus_metric(s, &m);
    CHECK(r.min_scal > 0);
    CHECK(r.max_f_pp <= 1e-12);
    CHECK(r.max_k_ratio <= 0.25);
    CHECK(r.round_residual <= 1e-12);
    int flagged = 0;
    for (const auto& d : r.discrepancies) flagged += d.flagged;
    CHECK(flagged == 2);
    // round chart in the inner box: cos^2 x cos^2 y dz^2 + dx^2 + cos^2 x dy^2 form
    const double x = 0.5 * m.round_inner_x(), y = 0.5 * m.round_inner_y(), z = 0.5 * m.round_inner_z();
    const Mat3 g = m.patched().at({x, y, z});
    const Mat3 b = m.base().at({x, y, z});
    CHECK(g[0][0] == doctest::Approx(1).epsilon(1e-12));
    CHECK(g[0][1] == 0);
    CHECK(b[1][1] == doctest::Approx(std::cos(x) * std::cos(x)).epsilon(1e-12));
}

}

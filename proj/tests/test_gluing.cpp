#include <cmath>
#include <random>

#include "doctest.h"
#include "lamlab/gluing.hpp"
#include "support.hpp"

using namespace lamlab;

TEST_SUITE("gluing") {

TEST_CASE("minimality residual") {
    CHECK(minimality_residual(make_field("product")) == 0);
    // warped sphere slices: d_r det h = 4 lambda^3 lambda' sin^2 x, lambda = cosh(0.2 r)
    const MetricField w = make_field("warped_sphere", {{"c", 0.2}});
    CHECK(std::fabs(dr_det(w, 0, 1.0, 0.3)) < 1e-12);
    const double l = std::cosh(0.1), dl = 0.2 * std::sinh(0.1), s = std::sin(1.0);
    const double expected = 4 * l * l * l * dl * s * s;
    CHECK(dr_det(w, 0.5, 1.0, 0.3) == doctest::Approx(expected).epsilon(1e-7));
}

TEST_CASE("product input is returned unchanged") {
    const GlueResult g = glue_extend(make_field("product"));
    for (double x : {0.3, 1.1, 1.7, 2.2, 2.6, 2.9}) {
        const FieldValue v = g.out(0.4, x, 1.0);
        CHECK(v.k == 1);
        CHECK(v.tt == 1);
        CHECK(v.xt == 0);
        CHECK(v.xx == 1);
    }
    CHECK(g.report.pass);
}

TEST_CASE("stage 2 preserves the determinant at random points") {
    const MetricField in = make_field("offdiag");
    const GlueResult g = glue_extend(in);
    const MetricField& s1 = g.stages[0];
    const MetricField& s2 = g.stages[1];
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> r(0.05, 0.95), x(0.01, 2.99), t(0, 2 * kPi);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        const double a = r(rng), b = x(rng), c = t(rng);
        const double d1 = s1(a, b, c).det(), d2 = s2(a, b, c).det();
        worst = std::max(worst, std::fabs(d2 - d1) / std::fabs(d1));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("stage 3 region is conformal and r-independent") {
    const GlueResult g = glue_extend(make_field("warped_slice"));
    const MetricField& s3 = g.stages[2];
    for (double x : {2.05, 2.2, 2.45})
        for (double r : {0.1, 0.5, 0.9}) {
            const FieldValue v = s3(r, x, 0.7);
            CHECK(std::fabs(v.tt - v.xx) <= 1e-12);
            CHECK(std::fabs(v.tt - std::sqrt(v.det())) <= 1e-12);
            CHECK(std::fabs(v.tt - s3(0.5, x, 0.7).tt) <= 1e-12);
        }
    CHECK(g.report.stage3_residual <= 1e-12);
}

TEST_CASE("output fidelity and minimality on the three test fields") {
    for (const char* name : {"product", "offdiag", "warped_slice"}) {
        const MetricField in = make_field(name);
        const GlueResult g = glue_extend(in);
        CHECK(g.report.max_dr_det <= 1e-9);
        CHECK(g.report.min_eig > 0);
        CHECK(g.report.input_residual == 0);
        CHECK(g.report.product_residual == 0);
        CHECK(g.report.corrections_applied.size() >= 2);
        const FieldValue a = in(0.3, 0.5, 0.2), b = g.out(0.3, 0.5, 0.2);
        CHECK(a.tt == b.tt);
        CHECK(a.xt == b.xt);
        CHECK(a.xx == b.xx);
        CHECK(g.out.provenance(2.9) == Provenance::Product);
    }
}

TEST_CASE("non-minimal input is rejected") {
    CHECK_THROWS_CODE(glue_extend(make_field("warped_sphere")), ErrorCode::InputNotMinimal);
}

TEST_CASE("cutoff eta is the identity on the input region") {
    for (double x : {0.1, 0.5, 1.0}) CHECK(glue_eta(x, 0.2) == x);
    CHECK(glue_eta(2.0, 0.2) == doctest::Approx(1.1));
    double prev = 0;
    for (int i = 1; i <= 300; ++i) {
        const double e = glue_eta(0.01 * i, 0.2);
        CHECK(e >= prev);
        prev = e;
    }
}

}

#include <cmath>

#include "doctest.h"
#include "lamlab/profiles.hpp"
#include "support.hpp"

using namespace lamlab;

TEST_SUITE("profiles") {

TEST_CASE("cosh profile jets at the origin") {
    ProfileSpec s;
    s.kind = ProfileKind::Cosh;
    s.eps = 0.2;
    const WarpProfile p = build_profile(s);
    CHECK(p.pieces().size() == 1);
    const Jet j = eval_profile(p, 0);
    CHECK(j.v == doctest::Approx(1).epsilon(1e-15));
    CHECK(j.d1 == doctest::Approx(0));
    CHECK(j.d2 == doctest::Approx(0.04).epsilon(1e-14));
    // cosh(0.2 r) elsewhere
    const Jet k = eval_profile(p, 1.3);
    CHECK(k.v == doctest::Approx(std::cosh(0.26)).epsilon(1e-14));
    CHECK(k.d1 == doctest::Approx(0.2 * std::sinh(0.26)).epsilon(1e-14));
    CHECK(validate_smoothness(p).pass);
    CHECK(validate_smoothness(p).joins.empty());
}

TEST_CASE("basiclam at the origin and at the cap") {
    ProfileSpec s = parse_profile_kind("basiclam");
    s.a = 1;
    s.delta = 0.2;
    s.eps = 0.2;
    const WarpProfile p = build_profile(s);
    const double c = basiclam_default_c(1, 0.2, 0.2);
    const Jet j = eval_profile(p, 0);
    CHECK(j.v == doctest::Approx(c).epsilon(1e-14));
    CHECK(j.d1 == doctest::Approx(0));
    CHECK(j.d2 == doctest::Approx(c * 0.04).epsilon(1e-12));
    // sine on [a - delta, a], then the constant 1 (a C^{1,1} join)
    const Jet m = eval_profile(p, 0.9);
    CHECK(m.v == doctest::Approx(std::sin(0.9 + kPi / 2 - 1)).epsilon(1e-14));
    CHECK(m.d2 == doctest::Approx(-m.v).epsilon(1e-14));
    const Jet a = eval_profile(p, 1.0);
    CHECK(a.v == doctest::Approx(1).epsilon(1e-14));
    CHECK(std::fabs(a.d1) < 1e-14);
    const Jet b = eval_profile(p, 1.4);
    CHECK(b.v == 1);
    CHECK(b.d2 == 0);
    const SmoothnessReport r = validate_smoothness(p);
    CHECK(r.pass);
    for (const auto& j : r.joins) {
        CHECK(j.jump_d1 < 1e-10);
        const bool at_a = std::fabs(std::fabs(j.r) - 1) < 1e-12;
        CHECK((at_a ? std::fabs(j.jump_d2 - 1) : j.jump_d2) < 1e-9);
    }
    // lambda' >= 0 on the right half
    for (int i = 0; i <= 400; ++i) CHECK(eval_profile(p, 1.5 * i / 400).d1 >= -1e-14);
}

TEST_CASE("basiclam-capped is 1 beyond a and passes smoothness") {
    ProfileSpec s = parse_profile_kind("basiclam-capped");
    const WarpProfile p = build_profile(s);
    const Jet a = eval_profile(p, s.a);
    CHECK(a.v == doctest::Approx(1).epsilon(1e-12));
    CHECK(std::fabs(a.d1) < 1e-12);
    // the sine continues past a as the cap
    CHECK(eval_profile(p, s.a + 0.4).v == doctest::Approx(std::cos(0.4)).epsilon(1e-14));
    const SmoothnessReport r = validate_smoothness(p);
    CHECK(r.pass);
    bool at_a = false;
    for (const auto& j : r.joins) at_a = at_a || std::fabs(std::fabs(j.r) - s.a) < 1e-12;
    CHECK(at_a);
}

TEST_CASE("multiwell has strictly stable spheres at its centers") {
    ProfileSpec s = parse_profile_kind("multiwell");
    s.centers = {-3, 0, 3};
    s.eps = 0.2;
    const WarpProfile p = build_profile(s);
    for (double c : s.centers) {
        const Jet j = eval_profile(p, c);
        CHECK(std::fabs(j.d1) < 1e-12);
        CHECK(j.d2 > 0);
    }
}

TEST_CASE("injected derivative jump is reported") {
    Piece left, right;
    left.lo = -1;
    left.hi = 0;
    left.kind = PieceKind::Constant;
    left.params = {1};
    right.lo = 0;
    right.hi = 1;
    right.kind = PieceKind::Transition;
    right.segments.add(1, Poly(0, {1, 0.1}));
    const WarpProfile p = WarpProfile::from_pieces({left, right}, Symmetry::None, "broken");
    const SmoothnessReport r = validate_smoothness(p);
    CHECK_FALSE(r.pass);
    REQUIRE(r.joins.size() == 1);
    CHECK(r.joins[0].r == 0);
    CHECK(std::fabs(r.joins[0].jump_d1) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("parameter and domain errors") {
    ProfileSpec s;
    s.kind = ProfileKind::Basiclam;
    s.delta = 2;  // needs delta < a
    CHECK_THROWS_CODE(build_profile(s), ErrorCode::BadParameters);
    CHECK_THROWS_CODE(parse_profile_kind("torus"), ErrorCode::BadParameters);
    ProfileSpec r;
    r.kind = ProfileKind::RoundSphere;
    const WarpProfile p = build_profile(r);
    CHECK_THROWS_CODE(eval_profile(p, p.hi() + 1), ErrorCode::OutOfDomain);
}

TEST_CASE("profile csv has a header and n + 1 rows") {
    ProfileSpec s;
    const std::string csv = profile_csv(build_profile(s), -1, 1, 4);
    CHECK(csv.rfind("r,lambda,dlambda,ddlambda\n", 0) == 0);
    int lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines == 6);
}

}

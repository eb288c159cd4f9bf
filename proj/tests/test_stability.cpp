#include <cmath>

#include "doctest.h"
#include "lamlab/stability.hpp"
#include "support.hpp"

using namespace lamlab;

TEST_SUITE("stability") {

TEST_CASE("constant curvature: first conjugate point at pi R^2") {
    const double R = 1;
    const StripMetric z = StripMetric::zone_a(R);
    const GeodesicState s = start_at_angle(z, 0, kPi / 2 + 0.1, 0.3);
    const StabilityReport a = jacobi_index(s, 0.9 * kPi * R * R, z);
    CHECK(a.index == 0);
    const StabilityReport b = jacobi_index(s, 1.1 * kPi * R * R, z);
    REQUIRE(b.index == 1);
    CHECK(b.conjugate_t[0] == doctest::Approx(kPi * R * R).epsilon(1e-8));
    // J = R^2 sin(t / R^2)
    for (const auto& j : b.jacobi) CHECK(std::fabs(j[1] - std::sin(j[0])) < 1e-8);
    CHECK(jacobi_index(s, 1e-3, z).index == 0);
}

TEST_CASE("stability eigenvalue of the sphere r = 0") {
    ProfileSpec c;
    c.eps = 0.3;
    const SphereStability a = sphere_stability(build_profile(c));
    CHECK(a.mu1 == doctest::Approx(0.18).epsilon(1e-10));
    CHECK(a.strictly_stable);
    CHECK(a.oracle_delta < 1e-4);
    ProfileSpec k;
    k.kind = ProfileKind::ProductConstant;
    const SphereStability b = sphere_stability(build_profile(k));
    CHECK(std::fabs(b.mu1) < 1e-12);
    CHECK(b.stable);
    CHECK_FALSE(b.strictly_stable);
    ProfileSpec r;
    r.kind = ProfileKind::RoundSphere;
    const SphereStability d = sphere_stability(build_profile(r));
    CHECK(d.mu1 == doctest::Approx(-2).epsilon(1e-10));
    CHECK_FALSE(d.stable);
    CHECK(d.oracle_delta < 1e-4);
}

TEST_CASE("index table along the sweep") {
    ProfileSpec p;
    const StripMetric m = StripMetric::warped(build_profile(p));
    const SweepReport s = lamination_sweep({0.3, 0.1, 0.03, 0.01}, 1.0, m);
    const IndexTable t = index_table(s, m);
    REQUIRE(t.rows.size() == 4);
    CHECK(t.index_nondecreasing);
    CHECK(t.index_grows);
    CHECK(t.rows.back().index > t.rows.front().index);
    CHECK(t.rows.back().crossings > t.rows.front().crossings);
    for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i].index >= t.rows[i - 1].index);
    CHECK(index_table(s, m, 3).rows[2].index == t.rows[2].index);
}

TEST_CASE("torus index grows with the oscillation count") {
    ToriReport t = find_closed_tori(2 * kPi, 8, 1);
    annotate_tori_index(t);
    int prev = -1;
    for (const auto& c : t.found) {
        if (!c.simple || c.trivial) continue;
        CHECK(c.index >= 0);
        CHECK(c.index > prev);
        prev = c.index;
    }
}

}

#include <cmath>

#include "doctest.h"
#include "lamlab/geodesics.hpp"
#include "support.hpp"

using namespace lamlab;

namespace {

StripMetric cosh_strip() {
    ProfileSpec s;
    s.eps = 0.2;
    return StripMetric::warped(build_profile(s));
}

StopRule plain(double tmax) {
    StopRule s;
    s.tmax = tmax;
    s.r_stop = 0;
    return s;
}

}  // namespace

TEST_SUITE("geodesics") {

TEST_CASE("invariant lines of the strip") {
    const StripMetric m = cosh_strip();
    // {phi = pi/2}: phi'' = 0 and r'' = -(lambda'/lambda) r'^2
    const GeodesicState s{0, 0.7, kPi / 2, 0.3, 0};
    const auto [rdd, pdd] = geodesic_rhs(s, m);
    CHECK(pdd == doctest::Approx(0).epsilon(1e-15));
    const Jet l = m.profile()->eval(0.7);
    CHECK(rdd == doctest::Approx(-l.d1 / l.v * 0.09).epsilon(1e-12));
    // {r = 0}: r'' = 0 since lambda'(0) = 0
    const GeodesicState z{0, 0, 1.1, 0, 0.4};
    CHECK(std::fabs(geodesic_rhs(z, m).first) < 1e-15);
}

TEST_CASE("geodesic equations conserve speed at a point") {
    const StripMetric m = cosh_strip();
    const GeodesicState s{0, 0.4, 1.2, 0.3, -0.5};
    const auto [rdd, pdd] = geodesic_rhs(s, m);
    const StripJet j = m.jet(s.r, s.phi);
    // d/dt (E r'^2 + G phi'^2)
    const double d = (j.E_r * s.dr + j.E_p * s.dphi) * s.dr * s.dr + 2 * j.E * s.dr * rdd +
                     (j.G_r * s.dr + j.G_p * s.dphi) * s.dphi * s.dphi + 2 * j.G * s.dphi * pdd;
    CHECK(std::fabs(d) < 1e-12);
}

TEST_CASE("path on the line phi = pi/2 stays there") {
    const StripMetric m = cosh_strip();
    const GeodesicPath p = integrate_geodesic(start_at_angle(m, 0, kPi / 2, kPi / 2), m, plain(20));
    for (const auto& s : p.samples) CHECK(std::fabs(s.phi - kPi / 2) < 1e-10);
    CHECK_THROWS_CODE(nth_crossing(p, 1), ErrorCode::NotEnoughCrossings);
}

TEST_CASE("monotone escape for delta = 0.1") {
    const StripMetric m = cosh_strip();
    StopRule s = plain(200);
    s.r_exit = 1;
    const GeodesicPath p = integrate_geodesic(start_at_angle(m, 0, kPi / 2, 0.1), m, s);
    CHECK(p.termination == Termination::RExit);
    for (const auto& x : p.samples) CHECK(x.dr > 0);
    CHECK(p.max_speed_defect <= 1e-8);
    double prev = -1;
    for (int n = 1; n <= crossing_count(p); ++n) {
        const double r = nth_crossing(p, n).r;
        CHECK(r > prev);
        prev = r;
    }
}

TEST_CASE("product strip: period by quadrature and by integration") {
    const double p = 0.5;
    StopRule s = plain(30);
    s.rtol = 1e-12;
    s.atol = 1e-14;
    s.turning_events = false;
    const GeodesicPath path = integrate_geodesic(start_product(p), StripMetric::product(), s);
    std::vector<double> r;
    for (const auto& e : path.events)
        if (e.kind == EventKind::Cross) r.push_back(e.r);
    REQUIRE(r.size() >= 5);
    // crossings alternate direction and are equally spaced
    CHECK(std::fabs((r[2] - r[1]) - (r[1] - r[0])) < 1e-8);
    CHECK(std::fabs((r[3] - r[1]) - (r[4] - r[2])) < 1e-9);
    // 4 p K(q), q^2 = 1 - p^2, by Simpson on the smooth elliptic integrand
    const double q2 = 1 - p * p;
    const int n = 2000;
    double k = 0;
    for (int i = 0; i <= n; ++i) {
        const double u = kPi / 2 * i / n, sn = std::sin(u);
        k += (i == 0 || i == n ? 1 : i % 2 ? 4 : 2) / std::sqrt(1 - q2 * sn * sn);
    }
    k *= kPi / 2 / n / 3;
    CHECK(product_period(p) == doctest::Approx(4 * p * k).epsilon(1e-12));
    CHECK(product_period(p) == doctest::Approx(r[3] - r[1]).epsilon(1e-9));
    CHECK(std::fabs(product_period(0.5) - product_period(0.5001)) < 1e-3);
    CHECK(product_period(1e-3) < product_period(1e-2));
    CHECK(product_period(1e-3) < 0.05);
    CHECK_THROWS_CODE(start_product(1.5), ErrorCode::BadMomentum);
}

TEST_CASE("shooting through rho at the N-th crossing") {
    const StripMetric m = cosh_strip();
    const ThroughResult r = find_through(0.5, 3, m);
    CHECK(std::fabs(r.r_N - 0.5) < 1e-8);
    CHECK(r.alpha_lo <= r.alpha);
    CHECK(r.alpha <= r.alpha_hi);
    // fixed point: rho taken from a known path
    StopRule s = plain(400);
    s.max_crossings = 1;
    s.guard = 1e-10;
    const GeodesicPath g = integrate_geodesic(start_at_angle(m, 0, kPi / 2, 0.05), m, s);
    const double rho = nth_crossing(g, 1).r;
    CHECK(find_through(rho, 1, m).alpha == doctest::Approx(0.05).epsilon(1e-7));
}

TEST_CASE("sweep on the cosh strip") {
    const StripMetric m = cosh_strip();
    const SweepReport a = lamination_sweep({0.3, 0.03}, 1.0, m);
    CHECK(a.crossings[1] > a.crossings[0]);
    CHECK(a.hausdorff[1] < a.hausdorff[0]);
    const SweepReport b = lamination_sweep({0.3}, 1.0, m);
    CHECK(b.hausdorff[0] == a.hausdorff[0]);
    CHECK(b.paths[0].samples.size() == a.paths[0].samples.size());
    CHECK(b.paths[0].samples.back().r == a.paths[0].samples.back().r);
    CHECK_THROWS_CODE(lamination_sweep({0.1, 0.3}, 1.0, m), ErrorCode::BadParameters);
}

TEST_CASE("closed geodesics on the cylinder") {
    const ToriReport t = find_closed_tori(2 * kPi, 10, 1);
    bool trivial = false, ten = false;
    for (const auto& c : t.found) {
        trivial = trivial || c.trivial;
        if (c.n == 10 && c.m == 1) {
            ten = true;
            CHECK(c.delta_r == doctest::Approx(2 * kPi / 10).epsilon(1e-7));
            CHECK(c.closure_gap < 1e-7);
            CHECK(c.simple);
        }
    }
    CHECK(trivial);
    CHECK(ten);
}

TEST_CASE("simplicity test") {
    std::vector<GeodesicState> line, cross;
    for (int i = 0; i <= 10; ++i) line.push_back({0, 0.1 * i, 1.0 + 0.01 * i, 0, 0});
    CHECK(is_simple(line, 0));
    cross = {{0, 0, 1, 0, 0}, {0, 1, 2, 0, 0}, {0, 1, 1, 0, 0}, {0, 0, 2, 0, 0}};
    CHECK_FALSE(is_simple(cross, 0));
}

TEST_CASE("zone A: great circles meet antipodally") {
    const StripMetric z = StripMetric::zone_a(1);
    const AntipodalReport c = zone_a_connect(integrate_zone_a(z, 1, kPi / 2, 0), 1);
    CHECK(std::fabs(c.phi1 - kPi / 2) < 1e-9);
    CHECK(std::fabs(c.phi2 - kPi / 2) < 1e-9);
    CHECK(c.pass);
    const AntipodalReport a = zone_a_connect(integrate_zone_a(z, 1, kPi / 2 + 0.1, 0.05), 1);
    CHECK(a.phi2 == doctest::Approx(kPi / 2 - 0.1).epsilon(1e-6));
    CHECK(a.angle2 == doctest::Approx(-a.angle1).epsilon(1e-6));
    CHECK(a.pass);
}

TEST_CASE("reflection of a path is a path") {
    const StripMetric m = cosh_strip();
    const GeodesicPath p = integrate_geodesic(start_at_angle(m, 0.2, 1.3, 0.4), m, plain(3));
    const GeodesicPath q = reflect_path(p);
    const GeodesicPath direct = integrate_geodesic(q.samples.front(), m, plain(3));
    CHECK(direct.samples.back().r == doctest::Approx(q.samples.back().r).epsilon(1e-9));
    CHECK(direct.samples.back().phi == doctest::Approx(q.samples.back().phi).epsilon(1e-9));
}

}

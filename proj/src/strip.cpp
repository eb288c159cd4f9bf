#include "lamlab/strip.hpp"

#include <cmath>

namespace lamlab {

StripMetric StripMetric::warped(WarpProfile prof) {
    StripMetric m;
    m.profile_ = std::make_shared<const WarpProfile>(std::move(prof));
    auto pp = m.profile_;
    m.jet_ = [pp](double r, double phi) {
        const Jet l = pp->eval(r);
        const double s = std::sin(phi), c = std::cos(phi), s2 = s * s;
        const double l2 = l.v * l.v, l3 = l2 * l.v, l4 = l2 * l2;
        StripJet j;
        j.E = l2 * s2;
        j.E_r = 2 * l.v * l.d1 * s2;
        j.E_rr = 2 * (l.d1 * l.d1 + l.v * l.d2) * s2;
        j.E_p = 2 * l2 * s * c;
        j.E_pp = 2 * l2 * (c * c - s2);
        j.G = l4 * s2;
        j.G_r = 4 * l3 * l.d1 * s2;
        j.G_rr = (12 * l2 * l.d1 * l.d1 + 4 * l3 * l.d2) * s2;
        j.G_p = 2 * l4 * s * c;
        j.G_pp = 2 * l4 * (c * c - s2);
        return j;
    };
    m.kind_ = StripKind::Warped;
    m.even_ = m.profile_->symmetry() == Symmetry::Even;
    m.r_lo_ = m.profile_->lo();
    m.r_hi_ = m.profile_->hi();
    m.label_ = "warped:" + m.profile_->label();
    return m;
}

StripMetric StripMetric::product(double L) {
    StripMetric m;
    m.jet_ = [](double, double phi) {
        const double s = std::sin(phi), c = std::cos(phi);
        StripJet j;
        j.E = j.G = s * s;
        j.E_p = j.G_p = 2 * s * c;
        j.E_pp = j.G_pp = 2 * (c * c - s * s);
        return j;
    };
    m.kind_ = StripKind::Product;
    m.even_ = true;
    m.L_ = L;
    m.label_ = L > 0 ? "product-cylinder" : "product-strip";
    return m;
}

StripMetric StripMetric::modified_plan(double R, Field2 k, Field2 g, bool even) {
    StripMetric m;
    m.jet_ = [R, k, g](double r, double phi) {
        const Partials K = k(r, phi), Gf = g(r, phi);
        // u = g k, E = R^2 u^2, G = R^4 g^2
        const double u = Gf.v * K.v;
        const double u_r = Gf.r * K.v + Gf.v * K.r;
        const double u_p = Gf.p * K.v + Gf.v * K.p;
        const double u_rr = Gf.rr * K.v + 2 * Gf.r * K.r + Gf.v * K.rr;
        const double u_pp = Gf.pp * K.v + 2 * Gf.p * K.p + Gf.v * K.pp;
        const double R2 = R * R, R4 = R2 * R2;
        StripJet j;
        j.E = R2 * u * u;
        j.E_r = 2 * R2 * u * u_r;
        j.E_p = 2 * R2 * u * u_p;
        j.E_rr = 2 * R2 * (u_r * u_r + u * u_rr);
        j.E_pp = 2 * R2 * (u_p * u_p + u * u_pp);
        j.G = R4 * Gf.v * Gf.v;
        j.G_r = 2 * R4 * Gf.v * Gf.r;
        j.G_p = 2 * R4 * Gf.v * Gf.p;
        j.G_rr = 2 * R4 * (Gf.r * Gf.r + Gf.v * Gf.rr);
        j.G_pp = 2 * R4 * (Gf.p * Gf.p + Gf.v * Gf.pp);
        return j;
    };
    m.kind_ = StripKind::ModifiedPlan;
    m.even_ = even;
    m.R_ = R;
    m.label_ = "modified-plan";
    return m;
}

StripMetric StripMetric::zone_a(double R) {
    Field2 k = [](double, double phi) {
        const double s = std::sin(phi), c = std::cos(phi);
        return Partials{s, 0, c, 0, -s, 0};
    };
    Field2 g = [](double, double) { return Partials{1, 0, 0, 0, 0, 0}; };
    StripMetric m = modified_plan(R, k, g, true);
    m.label_ = "zone-a";
    return m;
}

StripMetric StripMetric::custom(std::function<double(double, double)> E,
                                std::function<double(double, double)> G, double h) {
    StripMetric m;
    m.jet_ = [E, G, h](double r, double phi) {
        StripJet j;
        auto fill = [&](const std::function<double(double, double)>& f, double& v, double& dr,
                        double& dp, double& drr, double& dpp) {
            v = f(r, phi);
            const double rp = f(r + h, phi), rm = f(r - h, phi);
            const double pp = f(r, phi + h), pm = f(r, phi - h);
            dr = (rp - rm) / (2 * h);
            dp = (pp - pm) / (2 * h);
            drr = (rp - 2 * v + rm) / (h * h);
            dpp = (pp - 2 * v + pm) / (h * h);
        };
        fill(E, j.E, j.E_r, j.E_p, j.E_rr, j.E_pp);
        fill(G, j.G, j.G_r, j.G_p, j.G_rr, j.G_pp);
        return j;
    };
    m.kind_ = StripKind::Custom;
    m.label_ = "custom";
    return m;
}

}  // namespace lamlab

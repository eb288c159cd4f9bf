#pragma once

#include <functional>
#include <memory>
#include <string>

#include "lamlab/numeric.hpp"
#include "lamlab/profiles.hpp"

namespace lamlab {

// Value and partials of a scalar field f(r, phi).
struct Partials {
    double v = 0, r = 0, p = 0, rr = 0, pp = 0, rp = 0;
};

using Field2 = std::function<Partials(double r, double phi)>;

// E, G and their partials for a diagonal strip metric E dr^2 + G dphi^2.
struct StripJet {
    double E = 0, E_r = 0, E_p = 0, E_rr = 0, E_pp = 0;
    double G = 0, G_r = 0, G_p = 0, G_rr = 0, G_pp = 0;
};

enum class StripKind { Warped, Product, ModifiedPlan, Custom };

class StripMetric {
public:
    // E = lambda^2 sin^2 phi, G = lambda^4 sin^2 phi.
    static StripMetric warped(WarpProfile p);
    // E = G = sin^2 phi; L > 0 makes r periodic with circumference L.
    static StripMetric product(double L = 0);
    // E = R^2 g^2 k^2, G = R^4 g^2.
    static StripMetric modified_plan(double R, Field2 k, Field2 g, bool even = true);
    // k = sin phi, g = 1: the round sphere of radius R^2.
    static StripMetric zone_a(double R);
    // Values only; partials by central differences with step h.
    static StripMetric custom(std::function<double(double, double)> E,
                              std::function<double(double, double)> G, double h = 1e-5);

    StripJet jet(double r, double phi) const { return jet_(r, phi); }
    StripKind kind() const { return kind_; }
    // Invariant under (r, phi) -> (-r, pi - phi).
    bool reflection_even() const { return even_; }
    double circumference() const { return L_; }
    double R() const { return R_; }
    const WarpProfile* profile() const { return profile_.get(); }
    const std::string& label() const { return label_; }
    // Interval of r on which the metric is defined.
    double r_lo() const { return r_lo_; }
    double r_hi() const { return r_hi_; }

private:
    std::function<StripJet(double, double)> jet_;
    StripKind kind_ = StripKind::Custom;
    bool even_ = false;
    double L_ = 0, R_ = 1;
    double r_lo_ = -1e300, r_hi_ = 1e300;
    std::shared_ptr<const WarpProfile> profile_;
    std::string label_;
};

}  // namespace lamlab

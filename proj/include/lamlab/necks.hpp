#pragma once

#include <string>
#include <vector>

#include "lamlab/curvature.hpp"
#include "lamlab/numeric.hpp"
#include "lamlab/profiles.hpp"

namespace lamlab {

// Backward solution of lambda'' = eta/(4 lambda), lambda(0) = sin eps,
// lambda'(0) = cos eps, stopped where lambda' = 0 (r = -K).
struct NeckProfile {
    double eps = 0, eta = 0;
    double K = 0;
    double lambda_K = 0;     // lambda(-K)
    double dlambda_K = 0;    // lambda'(-K)
    double first_integral_drift = 0;
    double eta_margin = 0;   // 1 - max lambda'^2 on [-K, 0]
    double min_scal = 0;     // Scal along [-K, 0]
    double min_scal_margin = 0;  // min of Scal lambda^2 - eta/2 (pointwise bound Scal >= eta/(2 lambda^2))
    double max_d2_excess = 0;    // max of lambda'' - eta/(4 lambda)
    // Samples on [-K, 0], increasing in r.
    std::vector<double> r, l, d1, d2, scal;
};

struct NeckOptions {
    double hmax = 0.02;          // in the integration variable sigma (d sigma = ds / lambda)
    double sigma_max = 1e7;      // NonTermination guard
};

NeckProfile solve_neck(double eps, double eta, const NeckOptions& o = {});

// Closed forms used as oracles.
double neck_lambda_K_closed(double eps, double eta);
// K = sin(eps) sqrt(8/eta) D(cos(eps) sqrt(2/eta)) with Dawson's integral D.
double neck_K_closed(double eps, double eta);
double dawson(double x);

// Neck joined to sin(r + eps) on [0, pi - eps] and the constant cylinder for r <= -K.
WarpProfile neck_warp_profile(const NeckProfile& n);

// Cos-to-one cap: cos t on [0, b], then a prescribed-curvature schedule that
// returns to the value 1 with zero slope. Even in t.
struct CosCap {
    double b = 0;
    Piecewise tail;  // for t >= b
    double t_end = 0;
    std::vector<double> knots;  // b and the schedule breakpoints
    Jet operator()(double t) const;
};

struct CosCapSpec {
    double b = 0.1;
    double q_up = 0.5;      // positive curvature level
    double q_down = 0.5;    // magnitude of the negative level
    double w = 0.05;        // ramp width
    double t_max = kPi / 2;
};
CosCap build_cos_cap(const CosCapSpec& s);

struct BumpBounds {
    double max_dev = 0;   // sup |f - 1|
    double max_d1 = 0;    // sup |f'|
    double max_d2 = 0;    // sup f''
};
BumpBounds scan_bounds(const std::function<Jet(double)>& f, double t0, double t1, int n);

struct ScalGlueSpec {
    double R = 1;
    double K = 4;
    double eps = 0.01;
    int grid = 64;
    int max_halvings = 6;
    int threads = 1;
};

struct ScalGlueReport {
    double eps_requested = 0, eps_used = 0;
    int halvings = 0;
    double b1 = 0, a1 = 0, a2 = 0;       // sine neighbourhood, g~ plateau and g~ end (in phi - pi/2)
    double k_end = 0;                     // k~ reaches 1 at this |phi - pi/2|
    double bump_inner = 0, bump_outer = 0, C = 0;
    BumpBounds k_bounds, g_bounds;        // g bounds over the region where g~ differs from sine
    bool gamma_ok = false;
    CurvatureReport curvature;
    double product_scal = 0, product_expected = 0;  // oracle at a point outside the support
    double zone_a_min = 0, zone_a_max = 0;          // oracle over the zone-A patch
    double mixed_max_ratio = 0;           // max |mixed| / (2 C eps (1 + R^-4 + R^-2))
    double eq35_max_delta = 0;            // printed formula vs oracle
    double symmetry_residual = 0;
    double minimality_residual = 0;       // |d_phi (k^2 g^2)| on phi = pi/2
    double min_k_phiphi_term = 0;         // min of -(g_pp/g + k_pp/k)/R^2 where modified
    bool pass = false;
    std::vector<std::string> notes;
};

struct ScalGlueMetric {
    ScalGlueSpec spec;
    double eps = 0;
    CosCap kt;
    Poly g_quintic;
    double a1 = 0, a2 = 0;
    Bump bump;
    // Fields in (r, phi) including symmetric extension.
    Partials k(double r, double phi) const;
    Partials g(double r, double phi) const;
    MetricEvaluator3 evaluator() const;  // (r, phi, theta)
};

ScalGlueMetric make_scalglue(const ScalGlueSpec& s, double eps);
// Builds and certifies; shrinks eps (halving) on bump infeasibility or
// non-positive scalar curvature. Throws ScalNotPositive when all attempts fail.
ScalGlueReport build_scalglue_metric(const ScalGlueSpec& s, ScalGlueMetric* out = nullptr);

struct TorusModelSpec {
    double a = 0.15;
    int max_bisections = 8;
    double k_curv = 0.22;        // curvature level of the k schedule (k''/k <= 1/4 checked)
    double k_ramp = 0.05;
    double pole_margin = 0.05;   // k constant on this neighbourhood of -pi/2
    // Patch near (x, y, z) = 0 in the region where f = 1 and k = cos x.
    double patch_x = 0.6, patch_y = 1.0, patch_z = 1.0;  // cutoff outer radii
    double patch_inner = 0.3;    // cutoff inner radius as a fraction of the outer
    double eta = 0.3;            // derivative budget for the patch
    int grid = 64;
    int patch_grid = 20;
    int threads = 1;
};

struct TorusModelMetric {
    double a = 0;
    Piecewise f_poly;            // f on [-2a, -a/4]
    Piecewise k_tail;            // k to the left of -2a, in u = -x
    CosCap kt, mt;               // dz^2 and dy^2 patch profiles
    Bump bx, by, bz;
    Jet f(double x) const;
    Jet k(double x) const;
    double K(double x, double y, double z) const;  // dz^2 factor multiplier
    double M(double x, double y, double z) const;  // dy^2 factor multiplier
    MetricEvaluator3 base() const;    // dx^2 + k^2 dy^2 + f^2 dz^2
    MetricEvaluator3 patched() const;
    double round_inner_x() const;
    double round_inner_y() const;
    double round_inner_z() const;
};

struct TorusModelReport {
    double a_requested = 0, a_used = 0;
    int bisections = 0;
    double max_f_pp = 0;        // sup f'' (<= 0 required)
    double max_k_ratio = 0;     // sup k''/k (<= 1/4 required)
    double f_plateau_start = 0; // f = 1 from here on
    double k_const_until = 0;   // k constant on [-pi/2, this]
    double boundary_residual = 0;
    double central_torus_x = 0, central_torus_residual = 0;
    double kt_b = 0, mt_b = 0;
    BumpBounds kt_bounds, mt_bounds;
    double patch_C = 0;
    CurvatureReport base_curvature, patch_curvature;
    double min_scal = 0;
    double round_residual = 0;   // inner box vs the round chart
    double slice_minimality = 0; // |d_y det| of the (x, z) block for small |y|
    std::vector<FormulaDelta> discrepancies;
    bool pass = false;
    std::vector<std::string> notes;
};

TorusModelMetric make_torus_model(const TorusModelSpec& s, double a);
TorusModelReport build_model_torus_metric(const TorusModelSpec& s, TorusModelMetric* out = nullptr);

}  // namespace lamlab

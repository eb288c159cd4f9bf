#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lamlab/numeric.hpp"

namespace lamlab {

// g = k^2 dr^2 + h on S^1 x (x-interval) x (r-interval), h in the (theta, x) block.
struct FieldValue {
    double k = 1;
    double tt = 1, xt = 0, xx = 1;  // h_theta_theta, h_x_theta, h_xx
    double det() const { return tt * xx - xt * xt; }
    double min_eig() const;
};

enum class Provenance { Original, Stage1, Stage2, Stage3, Flattened, Product };
const char* provenance_name(Provenance p);

struct MetricField {
    std::function<FieldValue(double r, double x, double theta)> eval;
    double x_lo = 0, x_hi = 1, r_lo = 0, r_hi = 1;
    std::string recipe;               // named input recipe
    std::vector<std::string> chain;   // stage chain applied to the recipe
    std::function<Provenance(double x)> provenance = [](double) { return Provenance::Original; };
    FieldValue operator()(double r, double x, double theta) const { return eval(r, x, theta); }
};

// Test and demo fields. Recipes: product, offdiag, warped_slice (minimally
// foliated), warped_sphere (h = lambda(r)^2 (dx^2 + sin^2 x dtheta^2), lambda = cosh(c r)).
MetricField make_field(const std::string& recipe, const std::map<std::string, double>& params = {});
std::vector<std::string> field_recipes();

struct FieldGrid {
    int nr = 64, nx = 64, nt = 64;
    double dr = 1e-4;  // FD step in r
};

// d_r det h by central differences.
double dr_det(const MetricField& f, double r, double x, double theta, double h = 1e-4);
// max |d_r det h| over an interior grid. Throws SingularField.
double minimality_residual(const MetricField& f, const FieldGrid& g = {});

struct StageReport {
    std::string name;
    double max_dr_det = 0;
    double min_det = 0;
    double min_eig = 0;
    double max_det_change = 0;  // relative |det - det of previous stage|, where preserved
    bool det_preserved = true;  // stage is required to preserve det
};

struct GlueReport {
    std::vector<StageReport> stages;
    double max_dr_det = 0, min_det = 0, min_eig = 0;
    double boundary_residual = 0;   // input region and product region fidelity
    double input_residual = 0;      // max |out - in| on x < 1 (must be 0)
    double product_residual = 0;    // max |out - product| on x > 2.75 (must be 0)
    double stage3_residual = 0;     // |h_tt - h_xx|, |h_tt - sqrt det| and |d_r h_tt| on ]2, 2.5[
    double input_minimality = 0;
    std::vector<std::string> corrections_applied;
    bool pass = false;
};

struct GlueOptions {
    double eps = 0.2;      // input defined on x in ]0, 1 + eps[
    FieldGrid grid;
    double det_tol = 1e-12;
    double dr_tol = 1e-9;
    int threads = 1;
};

struct GlueResult {
    MetricField out;
    std::vector<MetricField> stages;  // stage1, stage2, stage3, flattened
    GlueReport report;
};

// Cutoffs of the extension.
double glue_eta(double x, double w);
GlueResult glue_extend(const MetricField& g, const GlueOptions& o = {});

}  // namespace lamlab

#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "lamlab/numeric.hpp"
#include "lamlab/profiles.hpp"
#include "lamlab/strip.hpp"

namespace lamlab {

using Pt3 = std::array<double, 3>;

// Coordinate 3-metric given by its component matrix.
class MetricEvaluator3 {
public:
    MetricEvaluator3() = default;
    MetricEvaluator3(std::function<Mat3(const Pt3&)> g, std::string chart)
        : g_(std::move(g)), chart_(std::move(chart)) {}

    Mat3 at(const Pt3& p) const { return g_(p); }
    bool valid() const { return static_cast<bool>(g_); }
    const std::string& chart() const { return chart_; }

    static MetricEvaluator3 diagonal(std::function<Pt3(const Pt3&)> d, std::string chart);
    // dr^2 + lambda^2 (dphi^2 + sin^2 phi dtheta^2) in (r, phi, theta).
    static MetricEvaluator3 warped(const WarpProfile& p);
    static MetricEvaluator3 euclidean();

private:
    std::function<Mat3(const Pt3&)> g_;
    std::string chart_;
};

struct OracleOptions {
    double h = 1e-3;
    bool richardson = true;
    double richardson_tol = 1e-3;  // on |S(h) - S(h/2)| / (1 + |S|)
};

// Standard-convention Ricci tensor by central differences of the metric.
Mat3 ricci_fd(const MetricEvaluator3& m, const Pt3& p, double h);
// Scalar curvature, half the standard trace (round S^3 gives 3).
double scal_fd_raw(const MetricEvaluator3& m, const Pt3& p, double h);
double scal_fd_oracle(const MetricEvaluator3& m, const Pt3& p, const OracleOptions& o = {});

double scal_warped(const WarpProfile& p, double r);

enum class PrintedFormula { Eq35, AppBFk, AppBDtheta };
const char* printed_formula_name(PrintedFormula f);

// Inputs for the printed formulas. Eq35 uses k, g (as functions of (r, phi))
// and R; AppBFk uses kx, fx (functions of x, passed as Partials with the
// x-derivatives in the r slots); AppBDtheta uses k(r, phi).
struct PrintedFields {
    Field2 k, g, kx, fx;
    double R = 1;
};

double scal_printed(PrintedFormula f, const PrintedFields& fields, double r, double phi);

// Gauss curvature of E dr^2 + G dphi^2.
double gauss_strip(const StripMetric& s, double r, double phi, double guard = 1e-6);
double gauss_from_jet(const StripJet& j);

struct GridPoint {
    Pt3 x{};
    double scal = 0;
};

struct FormulaDelta {
    std::string formula;
    double max_abs_delta = 0;
    Pt3 at{};
    bool flagged = false;
    std::string note;
};

struct CurvatureReport {
    std::string grid;
    std::vector<GridPoint> points;
    double min_scal = 0;
    Pt3 argmin{};
    double max_richardson = 0;
    std::vector<FormulaDelta> deltas;
    std::vector<std::string> flags;
};

// Evaluates the oracle at all points in parallel; order of `pts` is preserved.
CurvatureReport curvature_grid(const MetricEvaluator3& m, const std::vector<Pt3>& pts,
                               const OracleOptions& o, const std::string& label, int threads);

// Probes of the two printed torus-model formulas; returns flagged deltas.
std::vector<FormulaDelta> torus_formula_probes(double tol = 1e-4);

}  // namespace lamlab

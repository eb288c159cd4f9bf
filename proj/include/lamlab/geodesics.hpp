#pragma once

#include <string>
#include <vector>

#include "lamlab/numeric.hpp"
#include "lamlab/strip.hpp"

namespace lamlab {

struct GeodesicState {
    double t = 0, r = 0, phi = 0, dr = 0, dphi = 0;
};

enum class EventKind { Cross, TurnR, TurnPhi, RLine, Exit };
const char* event_kind_name(EventKind k);

struct PathEvent {
    EventKind kind = EventKind::Cross;
    double t = 0, r = 0, phi = 0, dr = 0, dphi = 0;
    double angle = 0;  // atan(sqrt(G) phi' / (sqrt(E) r')), angle with the r-direction
    int line = -1;     // index into StopRule::r_lines for RLine events
};

enum class Termination { TMax, RStop, RExit, CrossingLimit, LineStop };
const char* termination_name(Termination t);

struct StopRule {
    double tmax = 200;
    double r_stop = 1e-4;  // stop when |r| drops below (downward crossings only); 0 disables
    double r_exit = 0;     // stop when |r| reaches this value; 0 disables
    int max_crossings = 0; // stop at this many crossings of {phi=pi/2, r>0}; 0 disables
    std::vector<double> r_lines;
    int stop_line = -1;    // stop at the first crossing of r_lines[stop_line] after t=0
    double guard = 1e-6;   // BoundaryDegeneracy when sin(phi) falls below
    int renormalize_every = 0;
    double rtol = 1e-10, atol = 1e-12;
    double hmax = 0.05;
    bool turning_events = true;
};

struct GeodesicPath {
    std::vector<GeodesicState> samples;
    std::vector<PathEvent> events;
    GeodesicState start;
    Termination termination = Termination::TMax;
    double max_speed_defect = 0;
    double min_sin_phi = 1;
};

// Derivatives (r'', phi'') from the diagonal-metric Christoffel symbols.
std::pair<double, double> geodesic_rhs(const GeodesicState& s, const StripMetric& m,
                                       double guard = 1e-6);

double speed_defect(const StripMetric& m, const GeodesicState& s);
double metric_angle(const StripMetric& m, double r, double phi, double dr, double dphi);

// Unit-speed state at (r, phi) making metric angle delta with the phi-direction
// (the leaf {r = const}); r' = sin(delta)/sqrt(E), phi' = cos(delta)/sqrt(G).
GeodesicState start_at_angle(const StripMetric& m, double r, double phi, double delta);
// Product strip state at (r0, pi/2) with momentum p = sin^2(phi) r'.
GeodesicState start_product(double p, double r0 = 0);
// Zone-A entry on r = pi R/2 heading to -r with angle beta to the r-direction.
GeodesicState zone_a_entry(const StripMetric& m, double phi1, double beta);

GeodesicPath integrate_geodesic(const GeodesicState& start, const StripMetric& m,
                                const StopRule& stop);

PathEvent nth_crossing(const GeodesicPath& path, int N);
int crossing_count(const GeodesicPath& path);

struct ThroughResult {
    GeodesicPath path;
    double alpha = 0;
    double alpha_lo = 0, alpha_hi = 0;  // bracketing pair
    double r_N = 0;
    int N = 0;
    int evaluations = 0;
};

struct ThroughOptions {
    double tmax = 200;
    double guard = 1e-10;
    int max_j = 40;
    double ftol = 1e-10;
};

ThroughResult find_through(double rho, int N, const StripMetric& m, const ThroughOptions& o = {});

// Reflection R(r, phi) = (-r, pi - phi); backward half of a path through (0, pi/2).
GeodesicPath reflect_path(const GeodesicPath& p);
// Backward half (reversed, reflected) followed by the forward path.
std::vector<GeodesicState> two_sided(const GeodesicPath& forward);

struct SweepOptions {
    double window = 0.05;
    double leaf_margin = 0.1;
    double leaf_step = 1e-3;
    double tmax = 200;
    int threads = 1;
};

struct SweepReport {
    std::vector<double> deltas;
    std::vector<int> crossings;
    std::vector<double> hausdorff;      // leaf {r=0} to gamma within the window
    std::vector<double> ref_hausdorff;  // gamma to {r=0} union gamma_ref
    std::vector<GeodesicPath> paths;    // forward halves
    double r0 = 1;
    bool crossings_increasing = false;
    bool hausdorff_nonincreasing = false;
    bool pass = false;
};

SweepReport lamination_sweep(const std::vector<double>& deltas, double r0, const StripMetric& m,
                             const SweepOptions& o = {});

// Distance in (r, phi) coordinates from a point to a polyline clipped to |r| <= w.
double point_polyline_distance(double r, double phi, const std::vector<GeodesicState>& poly,
                               double w);

double product_period(double p);

struct ClosedGeodesic {
    int n = 0, m = 0;
    double p = 0, delta_r = 0, length = 0;
    double closure_gap = 0;
    bool simple = false;
    bool trivial = false;
    int index = -1;
    GeodesicPath path;
};

struct ToriReport {
    double L = 0;
    std::vector<ClosedGeodesic> found;
    std::vector<std::pair<int, int>> skipped;  // NoRoot pairs (n, m)
};

// Indices are filled in by annotate_tori_index (stability module).
ToriReport find_closed_tori(double L, int n_max, int threads = 1);

// Transversal self-intersection test on the cylinder of circumference L (0 = strip).
bool is_simple(const std::vector<GeodesicState>& samples, double L);

struct AntipodalReport {
    double phi1 = 0, angle1 = 0, phi2 = 0, angle2 = 0;
    double dphi = 0, dangle = 0;
    bool pass = false;
};

AntipodalReport zone_a_connect(const GeodesicPath& path, double R);
GeodesicPath integrate_zone_a(const StripMetric& m, double R, double phi1, double beta);

}  // namespace lamlab

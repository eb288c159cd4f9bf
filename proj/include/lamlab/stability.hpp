#pragma once

#include <string>
#include <vector>

#include "lamlab/geodesics.hpp"
#include "lamlab/profiles.hpp"
#include "lamlab/strip.hpp"

namespace lamlab {

struct JacobiOptions {
    double rtol = 1e-11, atol = 1e-13;
    double hmax = 0.02;
    double zero_ttol = 1e-12;
    double tangential_tol = 1e-9;  // |J'| below this at a zero is a double zero
    double guard = 1e-10;
};

struct StabilityReport {
    std::string path_id;
    std::vector<double> conjugate_t;  // parameters measured from the path start
    int index = 0;
    double length = 0;
    std::vector<std::array<double, 3>> jacobi;  // (t, J, J')
    double endpoint_gap = 0;                    // re-integrated geodesic vs path end
};

// Zeros of J'' + K(gamma(t)) J = 0, J(0) = 0, J'(0) = 1 in (0, T) where T is the
// path length; the geodesic is re-integrated alongside J.
StabilityReport jacobi_index(const GeodesicPath& path, const StripMetric& m,
                             const JacobiOptions& o = {});
// Same, from an explicit start state and length.
StabilityReport jacobi_index(const GeodesicState& start, double length, const StripMetric& m,
                             const JacobiOptions& o = {});

struct SphereStability {
    std::string profile;
    double mu1 = 0;
    double mu1_oracle = 0;
    double oracle_delta = 0;  // |mu1 - mu1_oracle| / max(1, |mu1|)
    bool stable = false;
    bool strictly_stable = false;
};

SphereStability sphere_stability(const WarpProfile& p);

struct IndexRow {
    double delta = 0;
    int crossings = 0;
    int index = 0;
};

struct IndexTable {
    std::vector<IndexRow> rows;
    int c0 = 0;  // smallest constant with index >= crossings - c0 on every row
    bool index_nondecreasing = false;
    bool index_grows = false;  // last row strictly above first
};

// Index of the two-sided path gamma_delta within the sweep window.
IndexTable index_table(const SweepReport& sweep, const StripMetric& m, int threads = 1,
                       const JacobiOptions& o = {});

// Conjugate count along one closed loop of each torus geodesic.
void annotate_tori_index(ToriReport& tori, int threads = 1, const JacobiOptions& o = {});

}  // namespace lamlab

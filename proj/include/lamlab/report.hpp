#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "lamlab/curvature.hpp"
#include "lamlab/geodesics.hpp"
#include "lamlab/gluing.hpp"
#include "lamlab/necks.hpp"
#include "lamlab/stability.hpp"

namespace lamlab {

using Json = nlohmann::ordered_json;

struct Check {
    std::string name;
    bool pass = false;
    double value = 0;
    double tol = 0;
    std::string note;
};

Json to_json(const Check& c);
Json to_json(const std::vector<Check>& cs);
Json to_json(const FormulaDelta& d);
Json to_json(const CurvatureReport& r);  // summary, no per-point data
Json to_json(const SweepReport& r);
Json to_json(const IndexTable& t);
Json to_json(const ToriReport& r);
Json to_json(const NeckProfile& n);      // summary
Json to_json(const GlueReport& r);
Json to_json(const ScalGlueReport& r);
Json to_json(const TorusModelReport& r);
Json to_json(const SphereStability& s);
Json to_json(const StabilityReport& s);
Json to_json(const AntipodalReport& a);
Json to_json(const BumpBounds& b);
Json field_descriptor(const MetricField& f, const Json& params);

// CSV with %.17g numbers.
std::string path_csv(const GeodesicPath& p, const StripMetric& m);
std::string events_csv(const GeodesicPath& p);
std::string neck_csv(const NeckProfile& n);
std::string index_csv(const IndexTable& t);
std::string tori_csv(const ToriReport& r);
std::string curvature_csv(const CurvatureReport& r, int c1 = 0, int c2 = 1);

std::string fmt_num(double v);
void write_text(const std::string& path, const std::string& text);
// Pretty JSON with a trailing newline.
std::string dump(const Json& j);

}  // namespace lamlab

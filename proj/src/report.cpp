#include "lamlab/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lamlab {

namespace {

Json pt(const Pt3& p) { return Json::array({p[0], p[1], p[2]}); }

}  // namespace

std::string fmt_num(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.17g", v);
    return b;
}

Json to_json(const Check& c) {
    Json j;
    j["name"] = c.name;
    j["pass"] = c.pass;
    j["value"] = c.value;
    j["tol"] = c.tol;
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

Json to_json(const std::vector<Check>& cs) {
    Json a = Json::array();
    for (const auto& c : cs) a.push_back(to_json(c));
    return a;
}

Json to_json(const FormulaDelta& d) {
    Json j;
    j["formula"] = d.formula;
    j["max_abs_delta"] = d.max_abs_delta;
    j["at"] = pt(d.at);
    j["flagged"] = d.flagged;
    j["note"] = d.note;
    return j;
}

Json to_json(const CurvatureReport& r) {
    Json j;
    j["grid"] = r.grid;
    j["points"] = r.points.size();
    j["min_scal"] = r.min_scal;
    j["argmin"] = pt(r.argmin);
    j["max_richardson"] = r.max_richardson;
    Json d = Json::array();
    for (const auto& x : r.deltas) d.push_back(to_json(x));
    j["deltas"] = d;
    j["flags"] = r.flags;
    return j;
}

Json to_json(const SweepReport& r) {
    Json j;
    j["delta"] = r.deltas;
    j["crossings"] = r.crossings;
    j["hausdorff"] = r.hausdorff;
    j["ref_hausdorff"] = r.ref_hausdorff;
    j["r0"] = r.r0;
    j["crossings_increasing"] = r.crossings_increasing;
    j["hausdorff_nonincreasing"] = r.hausdorff_nonincreasing;
    Json paths = Json::array();
    for (const auto& p : r.paths) {
        Json q;
        q["samples"] = p.samples.size();
        q["termination"] = termination_name(p.termination);
        q["max_speed_defect"] = p.max_speed_defect;
        q["min_sin_phi"] = p.min_sin_phi;
        q["end"] = {p.samples.back().t, p.samples.back().r, p.samples.back().phi};
        paths.push_back(q);
    }
    j["paths"] = paths;
    j["pass"] = r.pass;
    return j;
}

Json to_json(const IndexTable& t) {
    Json j;
    Json rows = Json::array();
    for (const auto& r : t.rows) rows.push_back({{"delta", r.delta}, {"crossings", r.crossings}, {"index", r.index}});
    j["rows"] = rows;
    j["c0"] = t.c0;
    j["index_nondecreasing"] = t.index_nondecreasing;
    j["index_grows"] = t.index_grows;
    return j;
}

Json to_json(const ToriReport& r) {
    Json j;
    j["L"] = r.L;
    Json f = Json::array();
    for (const auto& c : r.found) {
        Json q;
        q["n"] = c.n;
        q["m"] = c.m;
        q["p"] = c.p;
        q["delta_r"] = c.delta_r;
        q["length"] = c.length;
        q["closure_gap"] = c.closure_gap;
        q["simple"] = c.simple;
        q["trivial"] = c.trivial;
        q["index"] = c.index;
        f.push_back(q);
    }
    j["found"] = f;
    Json s = Json::array();
    for (const auto& [n, m] : r.skipped) s.push_back({n, m});
    j["skipped"] = s;
    return j;
}

Json to_json(const NeckProfile& n) {
    Json j;
    j["eps"] = n.eps;
    j["eta"] = n.eta;
    j["K"] = n.K;
    j["lambda_K"] = n.lambda_K;
    j["dlambda_K"] = n.dlambda_K;
    j["first_integral_drift"] = n.first_integral_drift;
    j["eta_margin"] = n.eta_margin;
    j["min_scal"] = n.min_scal;
    j["min_scal_margin"] = n.min_scal_margin;
    j["max_d2_excess"] = n.max_d2_excess;
    j["samples"] = n.r.size();
    return j;
}

Json to_json(const GlueReport& r) {
    Json j;
    Json st = Json::array();
    for (const auto& s : r.stages) {
        Json q;
        q["name"] = s.name;
        q["max_dr_det"] = s.max_dr_det;
        q["min_det"] = s.min_det;
        q["min_eig"] = s.min_eig;
        q["det_preserved"] = s.det_preserved;
        q["max_det_change"] = s.max_det_change;
        st.push_back(q);
    }
    j["stages"] = st;
    j["max_dr_det"] = r.max_dr_det;
    j["min_det"] = r.min_det;
    j["min_eig"] = r.min_eig;
    j["boundary_residual"] = r.boundary_residual;
    j["input_residual"] = r.input_residual;
    j["product_residual"] = r.product_residual;
    j["stage3_residual"] = r.stage3_residual;
    j["input_minimality"] = r.input_minimality;
    j["corrections_applied"] = r.corrections_applied;
    j["pass"] = r.pass;
    return j;
}

Json to_json(const BumpBounds& b) {
    return {{"max_dev", b.max_dev}, {"max_d1", b.max_d1}, {"max_d2", b.max_d2}};
}

Json to_json(const ScalGlueReport& r) {
    Json j;
    j["min_scal"] = r.curvature.min_scal;
    j["argmin"] = pt(r.curvature.argmin);
    j["grid"] = r.curvature.grid;
    Json corr = Json::array();
    if (r.halvings > 0) corr.push_back("eps halved " + std::to_string(r.halvings) + " time(s)");
    for (const auto& n : r.notes) corr.push_back(n);
    j["corrections"] = corr;
    j["eps_requested"] = r.eps_requested;
    j["eps_used"] = r.eps_used;
    j["b1"] = r.b1;
    j["a1"] = r.a1;
    j["a2"] = r.a2;
    j["k_end"] = r.k_end;
    j["bump"] = {r.bump_inner, r.bump_outer};
    j["C"] = r.C;
    j["k_bounds"] = to_json(r.k_bounds);
    j["g_bounds"] = to_json(r.g_bounds);
    j["gamma_ok"] = r.gamma_ok;
    j["curvature"] = to_json(r.curvature);
    j["product_scal"] = r.product_scal;
    j["product_expected"] = r.product_expected;
    j["zone_a"] = {r.zone_a_min, r.zone_a_max};
    j["mixed_max_ratio"] = r.mixed_max_ratio;
    j["eq35_max_delta"] = r.eq35_max_delta;
    j["symmetry_residual"] = r.symmetry_residual;
    j["minimality_residual"] = r.minimality_residual;
    j["min_k_phiphi_term"] = r.min_k_phiphi_term;
    j["pass"] = r.pass;
    return j;
}

Json to_json(const TorusModelReport& r) {
    Json j;
    j["min_scal"] = r.min_scal;
    const bool base_min = r.base_curvature.min_scal <= r.patch_curvature.min_scal;
    j["argmin"] = pt(base_min ? r.base_curvature.argmin : r.patch_curvature.argmin);
    j["grid"] = r.base_curvature.grid + "; " + r.patch_curvature.grid;
    Json corr = Json::array();
    for (const auto& d : r.discrepancies) corr.push_back(to_json(d));
    j["corrections"] = corr;
    j["a_requested"] = r.a_requested;
    j["a_used"] = r.a_used;
    j["bisections"] = r.bisections;
    j["max_f_pp"] = r.max_f_pp;
    j["max_k_ratio"] = r.max_k_ratio;
    j["f_plateau_start"] = r.f_plateau_start;
    j["k_const_until"] = r.k_const_until;
    j["boundary_residual"] = r.boundary_residual;
    j["central_torus"] = {{"x", r.central_torus_x}, {"residual", r.central_torus_residual}};
    j["kt_b"] = r.kt_b;
    j["mt_b"] = r.mt_b;
    j["kt_bounds"] = to_json(r.kt_bounds);
    j["mt_bounds"] = to_json(r.mt_bounds);
    j["patch_C"] = r.patch_C;
    j["base_curvature"] = to_json(r.base_curvature);
    j["patch_curvature"] = to_json(r.patch_curvature);
    j["round_residual"] = r.round_residual;
    j["slice_minimality"] = r.slice_minimality;
    j["notes"] = r.notes;
    j["pass"] = r.pass;
    return j;
}

Json to_json(const SphereStability& s) {
    Json j;
    j["profile"] = s.profile;
    j["mu1"] = s.mu1;
    j["stable"] = s.stable;
    j["strictly_stable"] = s.strictly_stable;
    j["oracle_delta"] = s.oracle_delta;
    j["mu1_oracle"] = s.mu1_oracle;
    return j;
}

Json to_json(const StabilityReport& s) {
    Json j;
    j["path"] = s.path_id;
    j["index"] = s.index;
    j["length"] = s.length;
    j["conjugate_t"] = s.conjugate_t;
    j["endpoint_gap"] = s.endpoint_gap;
    return j;
}

Json to_json(const AntipodalReport& a) {
    return {{"phi1", a.phi1}, {"angle1", a.angle1}, {"phi2", a.phi2}, {"angle2", a.angle2},
            {"dphi", a.dphi}, {"dangle", a.dangle}, {"pass", a.pass}};
}

Json field_descriptor(const MetricField& f, const Json& params) {
    Json j;
    j["recipe"] = f.recipe;
    j["params"] = params;
    j["chain"] = f.chain;
    j["x"] = {f.x_lo, f.x_hi};
    j["r"] = {f.r_lo, f.r_hi};
    return j;
}

namespace {

std::string row(std::initializer_list<double> v) {
    std::string s;
    bool first = true;
    for (double x : v) {
        if (!first) s += ',';
        s += fmt_num(x);
        first = false;
    }
    return s + "\n";
}

}  // namespace

std::string path_csv(const GeodesicPath& p, const StripMetric& m) {
    std::string s = "t,r,phi,dr,dphi,speed_defect\n";
    for (const auto& x : p.samples) s += row({x.t, x.r, x.phi, x.dr, x.dphi, speed_defect(m, x)});
    return s;
}

std::string events_csv(const GeodesicPath& p) {
    std::string s = "kind,t,r,phi,angle\n";
    for (const auto& e : p.events) s += std::string(event_kind_name(e.kind)) + "," + row({e.t, e.r, e.phi, e.angle});
    return s;
}

std::string neck_csv(const NeckProfile& n) {
    std::string s = "r,lambda,dlambda,scal\n";
    for (std::size_t i = 0; i < n.r.size(); ++i) s += row({n.r[i], n.l[i], n.d1[i], n.scal[i]});
    return s;
}

std::string index_csv(const IndexTable& t) {
    std::string s = "delta,crossings,index\n";
    for (const auto& r : t.rows) s += fmt_num(r.delta) + "," + std::to_string(r.crossings) + "," + std::to_string(r.index) + "\n";
    return s;
}

std::string tori_csv(const ToriReport& r) {
    std::string s = "n,m,p,delta_r,length,closure_gap,simple,index\n";
    for (const auto& c : r.found)
        s += std::to_string(c.n) + "," + std::to_string(c.m) + "," + fmt_num(c.p) + "," + fmt_num(c.delta_r) + "," +
             fmt_num(c.length) + "," + fmt_num(c.closure_gap) + "," + (c.simple ? "1" : "0") + "," +
             std::to_string(c.index) + "\n";
    return s;
}

std::string curvature_csv(const CurvatureReport& r, int c1, int c2) {
    std::string s = "c1,c2,scal\n";
    for (const auto& p : r.points) s += row({p.x[c1], p.x[c2], p.scal});
    return s;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::BadParameters, "cannot write '" + path + "'");
    f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace lamlab

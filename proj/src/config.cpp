#include "lamlab/config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "lamlab/numeric.hpp"

namespace lamlab {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool valid_name(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
    return true;
}

// Removes a trailing comment introduced by whitespace + '#' or ';' outside quotes.
std::string strip_comment(const std::string& v) {
    bool q = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == '"') q = !q;
        if (!q && (v[i] == '#' || v[i] == ';') && (i == 0 || std::isspace(static_cast<unsigned char>(v[i - 1]))))
            return v.substr(0, i);
    }
    return v;
}

std::string unquote(const std::string& v) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
    return v;
}

bool to_double(const std::string& s, double& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    char* end = nullptr;
    errno = 0;
    out = std::strtod(t.c_str(), &end);
    return errno == 0 && end == t.c_str() + t.size() && std::isfinite(out);
}

enum class Kind { Str, Num, Pos, NonNeg, PosInt, List, File, Experiment };

// Schema: section -> key -> kind.
const std::map<std::string, std::map<std::string, Kind>>& schema() {
    static const std::map<std::string, std::map<std::string, Kind>> s = {
        {"experiment", {{"name", Kind::Experiment}, {"out_dir", Kind::Str}, {"threads", Kind::PosInt},
                        {"tol_scale", Kind::Pos}}},
        {"profile", {{"kind", Kind::Str}, {"eps", Kind::Pos}, {"a", Kind::Pos}, {"delta", Kind::Pos},
                     {"c", Kind::NonNeg}, {"constant", Kind::Pos}, {"centers", Kind::List}}},
        {"geodesic", {{"delta", Kind::Num}, {"r0", Kind::Num}, {"phi0", Kind::Pos}, {"tmax", Kind::Pos},
                      {"r_exit", Kind::NonNeg}, {"out", Kind::Str}, {"report", Kind::Str}}},
        {"sweep", {{"deltas", Kind::List}, {"r0", Kind::Pos}, {"window", Kind::Pos}, {"tmax", Kind::Pos},
                   {"leaf_step", Kind::Pos}, {"index", Kind::NonNeg}, {"report", Kind::Str},
                   {"index_out", Kind::Str}}},
        {"tori", {{"L", Kind::Pos}, {"nmax", Kind::PosInt}, {"report", Kind::Str}, {"csv", Kind::Str}}},
        {"neck", {{"eps", Kind::Pos}, {"eta", Kind::Pos}, {"sigma_max", Kind::Pos}, {"out", Kind::Str},
                  {"report", Kind::Str}}},
        {"glue", {{"recipe", Kind::Str}, {"input", Kind::File}, {"eps", Kind::Pos}, {"grid", Kind::PosInt},
                  {"a", Kind::Num}, {"b", Kind::Num}, {"c", Kind::Num}, {"out", Kind::Str},
                  {"field_out", Kind::Str}}},
        {"scalglue", {{"R", Kind::Pos}, {"K", Kind::Pos}, {"eps", Kind::Pos}, {"grid", Kind::PosInt},
                      {"max_halvings", Kind::NonNeg}, {"report", Kind::Str}, {"grid_out", Kind::Str}}},
        {"torusmodel", {{"a", Kind::Pos}, {"grid", Kind::PosInt}, {"patch_grid", Kind::PosInt},
                        {"eta", Kind::Pos}, {"max_bisections", Kind::NonNeg}, {"report", Kind::Str}}},
        {"stability", {{"jacobi", Kind::NonNeg}, {"report", Kind::Str}, {"index_out", Kind::Str}}},
        {"figures", {{"which", Kind::List}, {"delta", Kind::Pos}, {"R", Kind::Pos}, {"phi1", Kind::Pos},
                     {"beta", Kind::Num}}},
        {"tolerances", {{"rtol", Kind::Pos}, {"atol", Kind::Pos}, {"speed", Kind::Pos}, {"closure", Kind::Pos},
                        {"oracle_h", Kind::Pos}, {"richardson", Kind::Pos}, {"det", Kind::Pos},
                        {"dr_det", Kind::Pos}}},
    };
    return s;
}

const std::set<std::string>& experiment_names() {
    static const std::set<std::string> s = {"geodesic", "sweep",      "tori",      "neck",   "glue",
                                            "scalglue", "torusmodel", "stability", "figures"};
    return s;
}

}  // namespace

std::vector<double> parse_number_list(const std::string& s0) {
    std::string s = trim(s0);
    if (s.size() >= 2 && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
    std::vector<double> out;
    if (trim(s).empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v;
        if (!to_double(item, v)) throw Error(ErrorCode::ConfigError, "bad list element '" + trim(item) + "'");
        out.push_back(v);
    }
    return out;
}

Config Config::parse(const std::string& text, const std::string& origin) {
    Config c;
    c.origin_ = origin;
    std::istringstream in(text);
    std::string line, section;
    int no = 0;
    auto err = [&](const std::string& m) {
        throw Error(ErrorCode::ConfigError, origin + ":" + std::to_string(no) + ": " + m);
    };
    while (std::getline(in, line)) {
        ++no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t[0] == '[') {
            t = trim(strip_comment(t));
            if (t.back() != ']') err("unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (!valid_name(section)) err("bad section name '" + section + "'");
            c.sections_[section];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) err("expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = unquote(trim(strip_comment(t.substr(eq + 1))));
        if (!valid_name(key)) err("bad key '" + key + "'");
        if (section.empty()) err("key '" + key + "' outside any [section]");
        if (c.sections_[section].count(key)) err("duplicate key '" + section + "." + key + "'");
        c.sections_[section][key] = {val, no};
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::ConfigError, "cannot open config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str(), path);
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
    sections_[section][key] = {value, 0};
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key);
}

void Config::fail(const std::string& section, const std::string& key, const std::string& msg) const {
    std::string where = origin_;
    auto it = sections_.find(section);
    if (it != sections_.end()) {
        auto jt = it->second.find(key);
        if (jt != it->second.end() && jt->second.line > 0) where += ":" + std::to_string(jt->second.line);
        if (jt != it->second.end() && jt->second.line == 0) where = "command line";
    }
    throw Error(ErrorCode::ConfigError, where + ": [" + section + "] " + key + " " + msg);
}

std::string Config::str(const std::string& section, const std::string& key, const std::string& def) const {
    if (!has(section, key)) return def;
    return sections_.at(section).at(key).value;
}

double Config::num(const std::string& section, const std::string& key, double def) const {
    if (!has(section, key)) return def;
    double v;
    if (!to_double(str(section, key, ""), v)) fail(section, key, "must be a number (got '" + str(section, key, "") + "')");
    return v;
}

int Config::integer(const std::string& section, const std::string& key, int def) const {
    if (!has(section, key)) return def;
    const double v = num(section, key, def);
    if (v != std::floor(v) || std::fabs(v) > 1e9) fail(section, key, "must be an integer");
    return int(v);
}

std::vector<double> Config::list(const std::string& section, const std::string& key,
                                 const std::vector<double>& def) const {
    if (!has(section, key)) return def;
    try {
        return parse_number_list(str(section, key, ""));
    } catch (const Error& e) {
        fail(section, key, std::string("must be a comma-separated number list: ") + e.what());
    }
}

void Config::validate() const {
    const auto& sc = schema();
    for (const auto& [sec, entries] : sections_) {
        auto st = sc.find(sec);
        if (st == sc.end()) {
            const int line = entries.empty() ? 0 : entries.begin()->second.line;
            throw Error(ErrorCode::ConfigError,
                        origin_ + (line ? ":" + std::to_string(line) : "") + ": unknown section [" + sec + "]");
        }
        for (const auto& [key, e] : entries) {
            auto kt = st->second.find(key);
            if (kt == st->second.end()) fail(sec, key, "is not a recognised key");
            double v = 0;
            switch (kt->second) {
                case Kind::Str: break;
                case Kind::Num: v = num(sec, key, 0); break;
                case Kind::Pos:
                    v = num(sec, key, 0);
                    if (!(v > 0)) fail(sec, key, "must be positive (got " + e.value + ")");
                    break;
                case Kind::NonNeg:
                    v = num(sec, key, 0);
                    if (v < 0) fail(sec, key, "must be non-negative (got " + e.value + ")");
                    break;
                case Kind::PosInt:
                    if (integer(sec, key, 0) <= 0) fail(sec, key, "must be a positive integer (got " + e.value + ")");
                    break;
                case Kind::List: list(sec, key, {}); break;
                case Kind::File: {
                    std::ifstream f(e.value);
                    if (!f) fail(sec, key, "refers to a missing file '" + e.value + "'");
                    break;
                }
                case Kind::Experiment:
                    if (!experiment_names().count(e.value)) fail(sec, key, "names an unknown experiment '" + e.value + "'");
                    break;
            }
        }
    }
}

}  // namespace lamlab

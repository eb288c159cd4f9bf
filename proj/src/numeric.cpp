#include "lamlab/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace lamlab {

const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::InfeasibleJoin: return "InfeasibleJoin";
        case ErrorCode::BadParameters: return "BadParameters";
        case ErrorCode::SingularMetric: return "SingularMetric";
        case ErrorCode::StepTooLarge: return "StepTooLarge";
        case ErrorCode::MissingDerivative: return "MissingDerivative";
        case ErrorCode::BoundaryDegeneracy: return "BoundaryDegeneracy";
        case ErrorCode::StepFailure: return "StepFailure";
        case ErrorCode::NotEnoughCrossings: return "NotEnoughCrossings";
        case ErrorCode::NoBracket: return "NoBracket";
        case ErrorCode::BadMomentum: return "BadMomentum";
        case ErrorCode::NoRoot: return "NoRoot";
        case ErrorCode::MissingCrossing: return "MissingCrossing";
        case ErrorCode::NotMinimal: return "NotMinimal";
        case ErrorCode::SingularField: return "SingularField";
        case ErrorCode::InputNotMinimal: return "InputNotMinimal";
        case ErrorCode::PositivityLoss: return "PositivityLoss";
        case ErrorCode::NonTermination: return "NonTermination";
        case ErrorCode::ScalNotPositive: return "ScalNotPositive";
        case ErrorCode::InfeasibleBumps: return "InfeasibleBumps";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::MissingData: return "MissingData";
    }
    return "Unknown";
}

Jet Poly::eval(double x) const {
    const double u = x - x0_;
    double v = 0, d1 = 0, d2 = 0;
    for (std::size_t k = c_.size(); k-- > 0;) {
        d2 = d2 * u + 2.0 * d1;
        d1 = d1 * u + v;
        v = v * u + c_[k];
    }
    return {v, d1, d2};
}

Poly Poly::integral(double c0) const {
    std::vector<double> c(c_.size() + 1, 0.0);
    c[0] = c0;
    for (std::size_t k = 0; k < c_.size(); ++k) c[k + 1] = c_[k] / double(k + 1);
    return {x0_, c};
}

Poly Poly::scaled(double s) const {
    std::vector<double> c = c_;
    for (auto& x : c) x *= s;
    return {x0_, c};
}

Poly Poly::plus(const Poly& o) const {
    std::vector<double> c(std::max(c_.size(), o.c_.size()), 0.0);
    for (std::size_t k = 0; k < c_.size(); ++k) c[k] += c_[k];
    for (std::size_t k = 0; k < o.c_.size(); ++k) c[k] += o.c_[k];
    return {x0_, c};
}

Poly quintic_hermite(double x0, double x1, Jet a, Jet b) {
    const double h = x1 - x0;
    const double c0 = a.v, c1 = a.d1, c2 = a.d2 / 2;
    // Remaining cubic part solves for end value, slope and curvature.
    const double r0 = b.v - (c0 + c1 * h + c2 * h * h);
    const double r1 = b.d1 - (c1 + 2 * c2 * h);
    const double r2 = b.d2 - 2 * c2;
    const double h2 = h * h, h3 = h2 * h, h4 = h3 * h, h5 = h4 * h;
    const double c3 = (10 * r0 - 4 * r1 * h + 0.5 * r2 * h2) / h3;
    const double c4 = (-15 * r0 + 7 * r1 * h - r2 * h2) / h4;
    const double c5 = (6 * r0 - 3 * r1 * h + 0.5 * r2 * h2) / h5;
    return {x0, {c0, c1, c2, c3, c4, c5}};
}

Poly cubic_hermite(double x0, double x1, Jet a, Jet b) {
    const double h = x1 - x0;
    const double r0 = b.v - a.v - a.d1 * h;
    const double r1 = b.d1 - a.d1;
    const double c2 = (3 * r0 - r1 * h) / (h * h);
    const double c3 = (r1 * h - 2 * r0) / (h * h * h);
    return {x0, {a.v, a.d1, c2, c3}};
}

Jet smoothstep(double t) {
    if (t <= 0) return {0, 0, 0};
    if (t >= 1) return {1, 0, 0};
    const double t2 = t * t, t3 = t2 * t;
    return {t3 * (10 - 15 * t + 6 * t2), 30 * t2 * (1 - t) * (1 - t), 60 * t * (1 - t) * (1 - 2 * t)};
}

Poly smoothstep_poly(double x0, double w) {
    const double w3 = w * w * w;
    return {x0, {0, 0, 0, 10 / w3, -15 / (w3 * w), 6 / (w3 * w * w)}};
}

Jet Ramp::operator()(double x) const {
    const double w = x1 - x0;
    Jet s = smoothstep((x - x0) / w);
    return {s.v, s.d1 / w, s.d2 / (w * w)};
}

Jet Bump::operator()(double x) const {
    const double ax = std::fabs(x);
    const double w = outer - inner;
    Jet s = smoothstep((ax - inner) / w);
    const double sg = x < 0 ? -1.0 : 1.0;
    return {1 - s.v, -sg * s.d1 / w, -s.d2 / (w * w)};
}

double Bump::max_d1() const { return 1.875 / (outer - inner); }
double Bump::max_d2() const {
    // max |S''| = 10/sqrt(3) at t = (3 -+ sqrt 3)/6
    const double w = outer - inner;
    return (10.0 / std::sqrt(3.0)) / (w * w);
}

Jet Piecewise::eval(double x) const {
    if (polys_.empty()) return {};
    // The end points belong to the polynomials; only beyond them is the extension constant.
    if (x < polys_.front().x0()) return {polys_.front().eval(polys_.front().x0()).v, 0, 0};
    if (x > ends_.back()) return {polys_.back().eval(ends_.back()).v, 0, 0};
    if (x == ends_.back()) return polys_.back().eval(x);
    auto it = std::upper_bound(ends_.begin(), ends_.end(), x);
    return polys_[std::size_t(it - ends_.begin())].eval(x);
}

Piecewise integrate_schedule(const CurvatureSchedule& s) {
    Piecewise out;
    double x = s.start, v = s.v0, d = s.d0, q = s.c0;
    auto push = [&](const Poly& qpoly, double len) {
        Poly dp = qpoly.integral(d);
        Poly vp = dp.integral(v);
        out.add(x + len, vp);
        Jet e = vp.eval(x + len);
        x += len;
        v = e.v;
        d = e.d1;
    };
    for (std::size_t i = 0; i < s.levels.size(); ++i) {
        const double target = s.levels[i];
        Poly ramp = smoothstep_poly(x, s.w).scaled(target - q).plus(Poly(x, {q}));
        push(ramp, s.w);
        q = target;
        if (i + 1 < s.levels.size() && i < s.holds.size() && s.holds[i] > 0) {
            push(Poly(x, {q}), s.holds[i]);
        }
    }
    return out;
}

RootResult find_root(const std::function<double(double)>& f, double a, double b, double fa,
                     double fb, double xtol, double ftol, int max_iter) {
    if (fa == 0) return {a, 0, a, a, 0};
    if (fb == 0) return {b, 0, b, b, 0};
    if ((fa > 0) == (fb > 0)) throw Error(ErrorCode::NoBracket, "root not bracketed");
    RootResult r;
    int side = 0;
    for (int it = 0; it < max_iter; ++it) {
        r.iterations = it + 1;
        // Illinois false position, with bisection every third step for safety.
        double x = (it % 3 == 2) ? 0.5 * (a + b) : (a * fb - b * fa) / (fb - fa);
        if (!(x > std::min(a, b) && x < std::max(a, b))) x = 0.5 * (a + b);
        const double fx = f(x);
        r.x = x;
        r.fx = fx;
        if (std::fabs(fx) <= ftol || std::fabs(b - a) <= xtol) break;
        if ((fx > 0) == (fb > 0)) {
            b = x;
            fb = fx;
            if (side == -1) fa *= 0.5;
            side = -1;
        } else {
            a = x;
            fa = fx;
            if (side == 1) fb *= 0.5;
            side = 1;
        }
    }
    r.lo = std::min(a, b);
    r.hi = std::max(a, b);
    return r;
}

double agm(double a, double b) {
    for (int i = 0; i < 64 && std::fabs(a - b) > 1e-16 * a; ++i) {
        const double m = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = m;
    }
    return 0.5 * (a + b);
}

namespace {
std::atomic<int> g_threads{1};
}

int default_threads() { return g_threads.load(); }
void set_default_threads(int n) { g_threads.store(std::max(1, n)); }

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t nt = std::min<std::size_t>(std::size_t(threads), n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        pool.emplace_back([&] {
            try {
                for (std::size_t i = next++; i < n && !failed; i = next++) fn(i);
            } catch (...) {
                if (!failed.exchange(true)) err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

double det3(const Mat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Mat3 inv3(const Mat3& m) {
    const double d = det3(m);
    Mat3 r{};
    r[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / d;
    r[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / d;
    r[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / d;
    r[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / d;
    r[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / d;
    r[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / d;
    r[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / d;
    r[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / d;
    r[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / d;
    return r;
}

double min_eig3(const Mat3& m) {
    // Closed-form symmetric eigenvalues (trigonometric method).
    const double p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    if (p1 == 0) return std::min({m[0][0], m[1][1], m[2][2]});
    const double q = (m[0][0] + m[1][1] + m[2][2]) / 3;
    const double p2 = (m[0][0] - q) * (m[0][0] - q) + (m[1][1] - q) * (m[1][1] - q) +
                      (m[2][2] - q) * (m[2][2] - q) + 2 * p1;
    const double p = std::sqrt(p2 / 6);
    Mat3 b{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b[i][j] = (m[i][j] - (i == j ? q : 0)) / p;
    double r = det3(b) / 2;
    r = std::clamp(r, -1.0, 1.0);
    const double phi = std::acos(r) / 3;
    return q + 2 * p * std::cos(phi + 2 * kPi / 3);
}

}  // namespace lamlab

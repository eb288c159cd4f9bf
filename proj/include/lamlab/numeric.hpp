#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lamlab {

enum class ErrorCode {
    OutOfDomain,
    InfeasibleJoin,
    BadParameters,
    SingularMetric,
    StepTooLarge,
    MissingDerivative,
    BoundaryDegeneracy,
    StepFailure,
    NotEnoughCrossings,
    NoBracket,
    BadMomentum,
    NoRoot,
    MissingCrossing,
    NotMinimal,
    SingularField,
    InputNotMinimal,
    PositivityLoss,
    NonTermination,
    ScalNotPositive,
    InfeasibleBumps,
    ConfigError,
    MissingData,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode c, const std::string& what)
        : std::runtime_error(std::string(error_name(c)) + ": " + what), code_(c) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Value with first and second derivative in one variable.
struct Jet {
    double v = 0, d1 = 0, d2 = 0;
};

inline constexpr double kPi = 3.14159265358979323846;

// Polynomial in the local variable u = x - x0.
class Poly {
public:
    Poly() = default;
    Poly(double x0, std::vector<double> c) : x0_(x0), c_(std::move(c)) {}

    double x0() const { return x0_; }
    const std::vector<double>& coeffs() const { return c_; }
    Jet eval(double x) const;
    // Antiderivative vanishing at x0, plus a constant.
    Poly integral(double c0) const;
    Poly scaled(double s) const;
    Poly plus(const Poly& o) const;  // same x0 required

private:
    double x0_ = 0;
    std::vector<double> c_;
};

// Quintic Hermite on [x0,x1] matching value, slope and curvature at both ends.
Poly quintic_hermite(double x0, double x1, Jet a, Jet b);
// Cubic Hermite matching value and slope.
Poly cubic_hermite(double x0, double x1, Jet a, Jet b);

// C2 smoothstep S(t) = 6t^5 - 15t^4 + 10t^3 clamped to [0,1], derivatives in t.
Jet smoothstep(double t);
// Polynomial of S(u/w) in the local variable u on [0,w].
Poly smoothstep_poly(double x0, double w);

// Monotone cutoff: 0 for x <= x0, 1 for x >= x1.
struct Ramp {
    double x0 = 0, x1 = 1;
    Jet operator()(double x) const;
};

// Even bump: 1 on |x| <= inner, 0 on |x| >= outer.
struct Bump {
    double inner = 0.5, outer = 1.0;
    Jet operator()(double x) const;
    double max_d1() const;
    double max_d2() const;
};

// Piecewise polynomial with a constant extension on both sides.
class Piecewise {
public:
    void add(double x_end, Poly p) {
        ends_.push_back(x_end);
        polys_.push_back(std::move(p));
    }
    bool empty() const { return polys_.empty(); }
    double x_begin() const { return polys_.front().x0(); }
    double x_end() const { return ends_.back(); }
    Jet eval(double x) const;
    const std::vector<double>& ends() const { return ends_; }

private:
    std::vector<double> ends_;
    std::vector<Poly> polys_;
};

// Curvature schedule for the "prescribed second derivative" construction.
// q ramps through the listed levels with smoothstep transitions of width w,
// holding each level for the listed length. Integrates twice from (v0, d0).
struct CurvatureSchedule {
    double start = 0;
    double v0 = 0, d0 = 0, c0 = 0;
    double w = 0.1;
    std::vector<double> levels;  // target levels after c0, last must be 0
    std::vector<double> holds;   // hold length after reaching each level (last ignored)
};
Piecewise integrate_schedule(const CurvatureSchedule& s);

// Bracketed root of f on [a,b]; f(a), f(b) must have opposite signs.
struct RootResult {
    double x = 0, fx = 0, lo = 0, hi = 0;
    int iterations = 0;
};
RootResult find_root(const std::function<double(double)>& f, double a, double b, double fa,
                     double fb, double xtol, double ftol, int max_iter = 200);

double agm(double a, double b);

// Runs fn(i) for i in [0,n) on up to `threads` workers; results must be
// written to index-addressed storage for determinism.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

// Global default thread count (CLI --threads).
int default_threads();
void set_default_threads(int n);

using Mat3 = std::array<std::array<double, 3>, 3>;
double det3(const Mat3& m);
Mat3 inv3(const Mat3& m);
// Smallest eigenvalue of a symmetric 3x3 matrix.
double min_eig3(const Mat3& m);

}  // namespace lamlab

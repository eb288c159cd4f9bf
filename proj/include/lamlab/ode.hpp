#pragma once

// Dormand–Prince 5(4) stepper with an adaptive driver. Event location is left
// to the observer, which can re-step from the stored step start.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "lamlab/numeric.hpp"

namespace lamlab {

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h0 = 1e-3;
    double hmax = 0.1;
    double hmin = 1e-18;
    long max_steps = 5'000'000;
};

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
struct DoPri {
    // Returns the 5th-order solution at t+h and writes the error estimate norm.
    template <class F>
    static Vec<N> step(const F& f, double t, const Vec<N>& y, const Vec<N>& k1, double h,
                       const OdeOptions& o, double* err_norm, Vec<N>* k7_out) {
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                                a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
        Vec<N> tmp, k2, k3, k4, k5, k6, k7, out;
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        k2 = f(t + c2 * h, tmp);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        k3 = f(t + c3 * h, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = f(t + c4 * h, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = f(t + c5 * h, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                 a65 * k5[i]);
        k6 = f(t + h, tmp);
        for (std::size_t i = 0; i < N; ++i)
            out[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        k7 = f(t + h, out);
        double en = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                  e7 * k7[i]);
            const double sc = o.atol + o.rtol * std::max(std::fabs(y[i]), std::fabs(out[i]));
            en = std::max(en, std::fabs(e) / sc);
        }
        if (err_norm) *err_norm = en;
        if (k7_out) *k7_out = k7;
        return out;
    }
};

// One accepted step handed to the observer.
template <std::size_t N>
struct StepView {
    double t0, t1;
    Vec<N> y0, y1, f0, f1;
};

enum class DriveStatus { Done, Stopped };

// Integrates from (t0,y0) towards t_end. The observer is called after every
// accepted step and returns false to stop. Throws StepFailure when the step
// size underflows or the step budget is exhausted.
template <std::size_t N, class F, class Obs>
DriveStatus drive(const F& f, double t0, Vec<N> y, double t_end, const OdeOptions& o,
                  Obs&& obs) {
    double t = t0;
    double h = std::min(o.h0, t_end - t0);
    Vec<N> k1 = f(t, y);
    long steps = 0;
    while (t < t_end) {
        if (++steps > o.max_steps) throw Error(ErrorCode::StepFailure, "step budget exhausted");
        h = std::min({h, o.hmax, t_end - t});
        double en = 0;
        Vec<N> k7;
        Vec<N> y1 = DoPri<N>::step(f, t, y, k1, h, o, &en, &k7);
        bool finite = std::isfinite(en);
        for (double v : y1) finite = finite && std::isfinite(v);
        if (!finite) en = 1e10;
        if (en <= 1.0) {
            StepView<N> sv{t, t + h, y, y1, k1, k7};
            t = (t_end - t - h <= 0) ? t_end : t + h;
            sv.t1 = t;
            y = y1;
            k1 = k7;
            if (!obs(sv)) return DriveStatus::Stopped;
            const double fac = en > 0 ? 0.9 * std::pow(en, -0.2) : 5.0;
            h *= std::clamp(fac, 0.2, 5.0);
        } else {
            h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
        }
        if (h < o.hmin) throw Error(ErrorCode::StepFailure, "step size underflow");
    }
    return DriveStatus::Done;
}

// Re-evaluates the state at t in [sv.t0, sv.t1] by a single fresh step.
template <std::size_t N, class F>
Vec<N> restep(const F& f, const StepView<N>& sv, double t, const OdeOptions& o) {
    if (t <= sv.t0) return sv.y0;
    if (t >= sv.t1) return sv.y1;
    return DoPri<N>::step(f, sv.t0, sv.y0, sv.f0, t - sv.t0, o, nullptr, nullptr);
}

// Locates a sign change of g(y(t)) inside one accepted step to |dt| <= ttol.
template <std::size_t N, class F, class G>
double locate_event(const F& f, const StepView<N>& sv, const G& g, double g0, double g1,
                    double ttol, const OdeOptions& o) {
    auto fn = [&](double t) { return g(restep<N>(f, sv, t, o)); };
    RootResult r = find_root(fn, sv.t0, sv.t1, g0, g1, ttol, 0.0, 200);
    return r.x;
}

}  // namespace lamlab

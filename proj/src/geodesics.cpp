#include "lamlab/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lamlab/ode.hpp"

namespace lamlab {

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::Cross: return "cross";
        case EventKind::TurnR: return "turn_r";
        case EventKind::TurnPhi: return "turn_phi";
        case EventKind::RLine: return "r_line";
        case EventKind::Exit: return "exit";
    }
    return "?";
}

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::TMax: return "tmax";
        case Termination::RStop: return "r_stop";
        case Termination::RExit: return "r_exit";
        case Termination::CrossingLimit: return "crossing_limit";
        case Termination::LineStop: return "line_stop";
    }
    return "?";
}

namespace {

using V4 = Vec<4>;

V4 rhs4(const StripMetric& m, const V4& y) {
    const StripJet j = m.jet(y[0], y[1]);
    const double rp = y[2], pp = y[3];
    // Christoffel symbols of E dr^2 + G dphi^2.
    const double r2 = -(j.E_r * rp * rp + 2 * j.E_p * rp * pp - j.G_r * pp * pp) / (2 * j.E);
    const double p2 = (j.E_p * rp * rp - 2 * j.G_r * rp * pp - j.G_p * pp * pp) / (2 * j.G);
    return {rp, pp, r2, p2};
}

GeodesicState to_state(double t, const V4& y) { return {t, y[0], y[1], y[2], y[3]}; }

struct EventFn {
    EventKind kind;
    int line;
    double level;  // g = coordinate - level
    int coord;     // 0 r, 1 phi, 2 r', 3 phi'
    bool downward_abs = false;  // RStop: |r| - level, downward only
};

}  // namespace

std::pair<double, double> geodesic_rhs(const GeodesicState& s, const StripMetric& m, double guard) {
    if (!(std::sin(s.phi) > guard))
        throw Error(ErrorCode::BoundaryDegeneracy, "sin(phi) below guard");
    const V4 d = rhs4(m, {s.r, s.phi, s.dr, s.dphi});
    return {d[2], d[3]};
}

double speed_defect(const StripMetric& m, const GeodesicState& s) {
    const StripJet j = m.jet(s.r, s.phi);
    return j.E * s.dr * s.dr + j.G * s.dphi * s.dphi - 1;
}

double metric_angle(const StripMetric& m, double r, double phi, double dr, double dphi) {
    const StripJet j = m.jet(r, phi);
    return std::atan(std::sqrt(j.G) * dphi / (std::sqrt(j.E) * dr));
}

GeodesicState start_at_angle(const StripMetric& m, double r, double phi, double delta) {
    const StripJet j = m.jet(r, phi);
    return {0, r, phi, std::sin(delta) / std::sqrt(j.E), std::cos(delta) / std::sqrt(j.G)};
}

GeodesicState start_product(double p, double r0) {
    if (!(p > 0 && p <= 1)) throw Error(ErrorCode::BadMomentum, "momentum must lie in (0,1]");
    return {0, r0, kPi / 2, p, std::sqrt(std::max(0.0, 1 - p * p))};
}

GeodesicState zone_a_entry(const StripMetric& m, double phi1, double beta) {
    const double r = kPi * m.R() / 2;
    const StripJet j = m.jet(r, phi1);
    return {0, r, phi1, -std::cos(beta) / std::sqrt(j.E), -std::sin(beta) / std::sqrt(j.G)};
}

GeodesicPath integrate_geodesic(const GeodesicState& start, const StripMetric& m,
                                const StopRule& stop) {
    if (std::fabs(speed_defect(m, start)) > 1e-8)
        throw Error(ErrorCode::BadParameters, "start state is not unit speed");
    if (!(std::sin(start.phi) > stop.guard))
        throw Error(ErrorCode::BoundaryDegeneracy, "start too close to the boundary");

    GeodesicPath path;
    path.start = start;
    path.samples.push_back(start);

    std::vector<EventFn> evs;
    evs.push_back({EventKind::Cross, -1, kPi / 2, 1});
    if (stop.turning_events) {
        evs.push_back({EventKind::TurnR, -1, 0, 2});
        evs.push_back({EventKind::TurnPhi, -1, 0, 3});
    }
    for (std::size_t i = 0; i < stop.r_lines.size(); ++i)
        evs.push_back({EventKind::RLine, int(i), stop.r_lines[i], 0});
    if (stop.r_exit > 0) {
        evs.push_back({EventKind::Exit, 0, stop.r_exit, 0});
        evs.push_back({EventKind::Exit, 1, -stop.r_exit, 0});
    }
    if (stop.r_stop > 0) evs.push_back({EventKind::Exit, 2, stop.r_stop, 0, true});

    auto gval = [](const EventFn& e, const V4& y) {
        return e.downward_abs ? std::fabs(y[0]) - e.level : y[e.coord] - e.level;
    };

    auto record = [&](EventKind k, int line, double t, const V4& y) {
        PathEvent ev;
        ev.kind = k;
        ev.line = line;
        ev.t = t;
        ev.r = y[0];
        ev.phi = y[1];
        ev.dr = y[2];
        ev.dphi = y[3];
        ev.angle = metric_angle(m, y[0], y[1], y[2], y[3]);
        path.events.push_back(ev);
    };

    for (std::size_t i = 0; i < stop.r_lines.size(); ++i)
        if (std::fabs(start.r - stop.r_lines[i]) <= 1e-15 * (1 + std::fabs(start.r)))
            record(EventKind::RLine, int(i), 0, {start.r, start.phi, start.dr, start.dphi});

    OdeOptions o;
    o.rtol = stop.rtol;
    o.atol = stop.atol;
    o.hmax = stop.hmax;
    auto f = [&m](double, const V4& y) { return rhs4(m, y); };

    int positive_crossings = 0;
    bool finished = false;
    bool restart = false;
    long steps_since = 0;
    V4 y{start.r, start.phi, start.dr, start.dphi};
    double t = 0;

    auto observer = [&](const StepView<4>& sv) {
        const double s1 = std::sin(sv.y1[1]);
        path.min_sin_phi = std::min(path.min_sin_phi, s1);
        if (!(s1 > stop.guard))
            throw Error(ErrorCode::BoundaryDegeneracy,
                        "path reached sin(phi)=" + std::to_string(s1) + " at t=" + std::to_string(sv.t1));
        struct Hit {
            double t;
            std::size_t idx;
            V4 y;
        };
        std::vector<Hit> hits;
        for (std::size_t i = 0; i < evs.size(); ++i) {
            const EventFn& e = evs[i];
            const double g0 = gval(e, sv.y0), g1 = gval(e, sv.y1);
            if (g0 == 0) continue;
            const bool change = (g0 < 0 && g1 >= 0) || (g0 > 0 && g1 <= 0);
            if (!change) continue;
            if (e.downward_abs && !(g0 > 0)) continue;
            if (e.kind == EventKind::Cross && std::max(std::fabs(g0), std::fabs(g1)) < 1e-12) continue;
            auto g = [&](const V4& yy) { return gval(e, yy); };
            const double te = locate_event<4>(f, sv, g, g0, g1, 1e-13, o);
            const V4 ye = restep<4>(f, sv, te, o);
            if (e.kind == EventKind::Cross && std::fabs(ye[3]) < 1e-9) continue;
            hits.push_back({te, i, ye});
        }
        std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
            return a.t < b.t || (a.t == b.t && a.idx < b.idx);
        });
        for (const Hit& h : hits) {
            const EventFn& e = evs[h.idx];
            bool stop_here = false;
            Termination why = Termination::TMax;
            if (e.kind == EventKind::Exit) {
                if (e.downward_abs) {
                    stop_here = true;
                    why = Termination::RStop;
                } else {
                    record(EventKind::Exit, e.line, h.t, h.y);
                    stop_here = true;
                    why = Termination::RExit;
                }
            } else {
                record(e.kind, e.line, h.t, h.y);
                if (e.kind == EventKind::Cross && h.y[0] > 0) {
                    ++positive_crossings;
                    if (stop.max_crossings > 0 && positive_crossings >= stop.max_crossings) {
                        stop_here = true;
                        why = Termination::CrossingLimit;
                    }
                }
                if (e.kind == EventKind::RLine && e.line == stop.stop_line) {
                    stop_here = true;
                    why = Termination::LineStop;
                }
            }
            if (path.samples.back().t < h.t) path.samples.push_back(to_state(h.t, h.y));
            if (stop_here) {
                path.termination = why;
                finished = true;
                return false;
            }
        }
        path.samples.push_back(to_state(sv.t1, sv.y1));
        y = sv.y1;
        t = sv.t1;
        if (stop.renormalize_every > 0 && ++steps_since >= stop.renormalize_every) {
            steps_since = 0;
            restart = true;
            return false;
        }
        return true;
    };

    while (!finished) {
        restart = false;
        DriveStatus st = drive<4>(f, t, y, stop.tmax, o, observer);
        if (st == DriveStatus::Done) {
            path.termination = Termination::TMax;
            break;
        }
        if (restart) {
            // Project the velocity back to unit speed.
            const StripJet j = m.jet(y[0], y[1]);
            const double sp = std::sqrt(j.E * y[2] * y[2] + j.G * y[3] * y[3]);
            y[2] /= sp;
            y[3] /= sp;
            path.samples.back().dr = y[2];
            path.samples.back().dphi = y[3];
            continue;
        }
    }
    for (const auto& s : path.samples)
        path.max_speed_defect = std::max(path.max_speed_defect, std::fabs(speed_defect(m, s)));
    return path;
}

int crossing_count(const GeodesicPath& path) {
    int n = 0;
    for (const auto& e : path.events)
        if (e.kind == EventKind::Cross && e.r > 0 && e.t > 0) ++n;
    return n;
}

PathEvent nth_crossing(const GeodesicPath& path, int N) {
    int n = 0;
    for (const auto& e : path.events)
        if (e.kind == EventKind::Cross && e.r > 0 && e.t > 0 && ++n == N) return e;
    throw Error(ErrorCode::NotEnoughCrossings,
                "path has " + std::to_string(n) + " crossings, requested " + std::to_string(N));
}

namespace {

struct RnEval {
    double value = 0;  // r_N, or the exit radius when the N-th crossing lies beyond
    bool ok = false;
};

RnEval eval_rn(const StripMetric& m, double alpha, int N, double rho, const ThroughOptions& o,
               GeodesicPath* keep) {
    StopRule s;
    s.tmax = o.tmax;
    s.r_stop = 0;
    s.guard = o.guard;
    s.max_crossings = N;
    s.turning_events = false;
    s.r_exit = std::min(2 * rho + 1, 0.99 * std::min(std::fabs(m.r_lo()), std::fabs(m.r_hi())));
    GeodesicPath p;
    try {
        p = integrate_geodesic(start_at_angle(m, 0, kPi / 2, alpha), m, s);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::BoundaryDegeneracy) return {};
        throw;
    }
    RnEval r;
    if (p.termination == Termination::CrossingLimit) {
        r.value = nth_crossing(p, N).r;
        r.ok = true;
    } else if (p.termination == Termination::RExit) {
        r.value = s.r_exit;
        r.ok = true;
    }
    if (keep) *keep = std::move(p);
    return r;
}

}  // namespace

ThroughResult find_through(double rho, int N, const StripMetric& m, const ThroughOptions& o) {
    if (!(rho > 0) || N < 1) throw Error(ErrorCode::BadParameters, "find_through needs rho>0, N>=1");
    ThroughResult res;
    res.N = N;
    double prev_alpha = 0, prev_f = 0;
    bool have_prev = false;
    int evals = 0;
    for (int j = 0; j <= o.max_j; ++j) {
        const double a = kPi / 4 * std::ldexp(1.0, -j);
        RnEval e = eval_rn(m, a, N, rho, o, nullptr);
        ++evals;
        if (!e.ok) break;
        const double fv = e.value - rho;
        if (fv <= 0) {
            if (!have_prev) break;
            // bracket [a, prev_alpha]
            auto fn = [&](double al) {
                RnEval q = eval_rn(m, al, N, rho, o, nullptr);
                ++evals;
                if (!q.ok) throw Error(ErrorCode::NoBracket, "evaluation failed inside bracket");
                return q.value - rho;
            };
            RootResult rr = find_root(fn, a, prev_alpha, fv, prev_f, 1e-16 * prev_alpha, o.ftol, 400);
            res.alpha = rr.x;
            res.alpha_lo = a;
            res.alpha_hi = prev_alpha;
            RnEval fin = eval_rn(m, rr.x, N, rho, o, &res.path);
            ++evals;
            res.r_N = fin.value;
            res.evaluations = evals;
            return res;
        }
        prev_alpha = a;
        prev_f = fv;
        have_prev = true;
    }
    throw Error(ErrorCode::NoBracket, "no angle pair brackets r_N = rho");
}

GeodesicPath reflect_path(const GeodesicPath& p) {
    GeodesicPath q = p;
    auto refl = [](GeodesicState s) {
        s.r = -s.r;
        s.phi = kPi - s.phi;
        s.dr = -s.dr;
        s.dphi = -s.dphi;
        return s;
    };
    q.start = refl(p.start);
    for (auto& s : q.samples) s = refl(s);
    for (auto& e : q.events) {
        e.r = -e.r;
        e.phi = kPi - e.phi;
        e.dr = -e.dr;
        e.dphi = -e.dphi;
    }
    return q;
}

std::vector<GeodesicState> two_sided(const GeodesicPath& fwd) {
    std::vector<GeodesicState> out;
    out.reserve(2 * fwd.samples.size());
    for (std::size_t i = fwd.samples.size(); i-- > 1;) {
        GeodesicState s = fwd.samples[i];
        out.push_back({-s.t, -s.r, kPi - s.phi, s.dr, s.dphi});
    }
    for (const auto& s : fwd.samples) out.push_back(s);
    return out;
}

double point_polyline_distance(double r, double phi, const std::vector<GeodesicState>& poly,
                               double w) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
        double ar = poly[i].r, ap = poly[i].phi, br = poly[i + 1].r, bp = poly[i + 1].phi;
        // clip to |r| <= w
        double s0 = 0, s1 = 1;
        const double dr = br - ar;
        if (dr == 0) {
            if (std::fabs(ar) > w) continue;
        } else {
            double sa = (-w - ar) / dr, sb = (w - ar) / dr;
            if (sa > sb) std::swap(sa, sb);
            s0 = std::max(s0, sa);
            s1 = std::min(s1, sb);
            if (s0 > s1) continue;
        }
        const double cr = ar + s0 * dr, cp = ap + s0 * (bp - ap);
        const double er = ar + s1 * dr, ep = ap + s1 * (bp - ap);
        const double vr = er - cr, vp = ep - cp;
        const double len2 = vr * vr + vp * vp;
        double u = len2 > 0 ? ((r - cr) * vr + (phi - cp) * vp) / len2 : 0;
        u = std::clamp(u, 0.0, 1.0);
        const double qr = cr + u * vr - r, qp = cp + u * vp - phi;
        best = std::min(best, std::sqrt(qr * qr + qp * qp));
    }
    return best;
}

SweepReport lamination_sweep(const std::vector<double>& deltas, double r0, const StripMetric& m,
                             const SweepOptions& o) {
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0 && deltas[i] < kPi / 2))
            throw Error(ErrorCode::BadParameters, "deltas must lie in (0, pi/2)");
        if (i > 0 && !(deltas[i] < deltas[i - 1]))
            throw Error(ErrorCode::BadParameters, "deltas must be decreasing");
    }
    if (!m.reflection_even()) throw Error(ErrorCode::BadParameters, "sweep needs an even metric");
    SweepReport rep;
    rep.deltas = deltas;
    rep.r0 = r0;
    const std::size_t n = deltas.size();
    rep.paths.resize(n);
    rep.crossings.assign(n, 0);
    rep.hausdorff.assign(n, 0);
    rep.ref_hausdorff.assign(n, 0);
    std::vector<std::vector<GeodesicState>> both(n);
    parallel_for(n, o.threads, [&](std::size_t i) {
        StopRule s;
        s.tmax = o.tmax;
        s.r_exit = r0;
        s.r_stop = 0;
        rep.paths[i] = integrate_geodesic(start_at_angle(m, 0, kPi / 2, deltas[i]), m, s);
        rep.crossings[i] = crossing_count(rep.paths[i]);
        both[i] = two_sided(rep.paths[i]);
        double worst = 0;
        const double lo = o.leaf_margin, hi = kPi - o.leaf_margin;
        const int np = int(std::floor((hi - lo) / o.leaf_step + 0.5));
        for (int k = 0; k <= np; ++k) {
            const double phi = lo + (hi - lo) * k / np;
            worst = std::max(worst, point_polyline_distance(0, phi, both[i], o.window));
        }
        rep.hausdorff[i] = worst;
    });
    const auto& ref = both[n - 1];
    parallel_for(n, o.threads, [&](std::size_t i) {
        double worst = 0;
        for (const auto& s : both[i]) {
            if (std::fabs(s.r) > r0) continue;
            double d = std::fabs(s.r);
            if (d > 0 && i + 1 != n) d = std::min(d, point_polyline_distance(s.r, s.phi, ref, 1e300));
            if (i + 1 == n) d = 0;
            worst = std::max(worst, d);
        }
        rep.ref_hausdorff[i] = worst;
    });
    rep.crossings_increasing = true;
    rep.hausdorff_nonincreasing = true;
    for (std::size_t i = 1; i < n; ++i) {
        rep.crossings_increasing = rep.crossings_increasing && rep.crossings[i] > rep.crossings[i - 1];
        rep.hausdorff_nonincreasing =
            rep.hausdorff_nonincreasing && rep.hausdorff[i] <= rep.hausdorff[i - 1] + 1e-12;
    }
    rep.pass = rep.crossings_increasing && rep.hausdorff_nonincreasing;
    return rep;
}

double product_period(double p) {
    if (!(p > 0 && p < 1)) throw Error(ErrorCode::BadMomentum, "p must lie in (0,1)");
    return 2 * kPi * p / agm(1.0, p);
}

bool is_simple(const std::vector<GeodesicState>& s, double L) {
    struct Seg {
        double ar, ap, br, bp;
        std::size_t id;
    };
    std::vector<Seg> segs;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        double ar = s[i].r, ap = s[i].phi, br = s[i + 1].r, bp = s[i + 1].phi;
        if (L > 0) {
            const double k = std::floor(ar / L);
            ar -= k * L;
            br -= k * L;
            if (br > L || br < 0) {
                // split at the seam
                const double seam = br > L ? L : 0;
                const double u = (seam - ar) / (br - ar);
                const double mp = ap + u * (bp - ap);
                segs.push_back({ar, ap, seam, mp, i});
                const double shift = br > L ? -L : L;
                segs.push_back({seam + shift, mp, br + shift, bp, i});
                continue;
            }
        }
        segs.push_back({ar, ap, br, bp, i});
    }
    if (segs.empty()) return true;
    double lo = 1e300, hi = -1e300;
    for (const auto& g : segs) {
        lo = std::min({lo, g.ar, g.br});
        hi = std::max({hi, g.ar, g.br});
    }
    const std::size_t nb = std::max<std::size_t>(1, segs.size() / 4);
    const double width = (hi - lo) / double(nb) + 1e-300;
    std::vector<std::vector<std::size_t>> buckets(nb);
    for (std::size_t k = 0; k < segs.size(); ++k) {
        const auto& g = segs[k];
        std::size_t b0 = std::size_t(std::clamp((std::min(g.ar, g.br) - lo) / width, 0.0, double(nb - 1)));
        std::size_t b1 = std::size_t(std::clamp((std::max(g.ar, g.br) - lo) / width, 0.0, double(nb - 1)));
        for (std::size_t b = b0; b <= b1; ++b) buckets[b].push_back(k);
    }
    const std::size_t last = s.size() - 2;
    auto orient = [](double ax, double ay, double bx, double by, double cx, double cy) {
        return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
    };
    for (const auto& bk : buckets)
        for (std::size_t x = 0; x < bk.size(); ++x)
            for (std::size_t y = x + 1; y < bk.size(); ++y) {
                const Seg& a = segs[bk[x]];
                const Seg& b = segs[bk[y]];
                const std::size_t d = a.id > b.id ? a.id - b.id : b.id - a.id;
                if (d <= 1) continue;
                if (L > 0 && d == last) continue;  // closing neighbours
                const double o1 = orient(a.ar, a.ap, a.br, a.bp, b.ar, b.ap);
                const double o2 = orient(a.ar, a.ap, a.br, a.bp, b.br, b.bp);
                const double o3 = orient(b.ar, b.ap, b.br, b.bp, a.ar, a.ap);
                const double o4 = orient(b.ar, b.ap, b.br, b.bp, a.br, a.bp);
                if (o1 * o2 < 0 && o3 * o4 < 0) return false;
            }
    return true;
}

ToriReport find_closed_tori(double L, int n_max, int threads) {
    if (!(L > 0) || n_max < 1) throw Error(ErrorCode::BadParameters, "find_closed_tori needs L>0, nmax>=1");
    ToriReport rep;
    rep.L = L;
    std::vector<std::pair<int, int>> pairs;
    for (int mm = 1; mm <= n_max; ++mm)
        for (int n = 1; n <= n_max; ++n)
            if (std::gcd(n, mm) == 1) pairs.push_back({n, mm});
    const StripMetric prod = StripMetric::product(L);
    std::vector<ClosedGeodesic> out(pairs.size());
    std::vector<int> status(pairs.size(), 0);  // 1 found, 0 no root
    parallel_for(pairs.size(), threads, [&](std::size_t i) {
        const int n = pairs[i].first, mm = pairs[i].second;
        const double target = mm * L / n;
        ClosedGeodesic cg;
        cg.n = n;
        cg.m = mm;
        if (std::fabs(target - 2 * kPi) < 1e-9 && n == 1) {
            // The invariant line {phi = pi/2}.
            cg.p = 1;
            cg.trivial = true;
            cg.delta_r = target;
            StopRule s;
            s.tmax = L;
            s.r_stop = 0;
            s.hmax = 0.05;
            cg.path = integrate_geodesic(start_product(1.0), prod, s);
            const auto& e = cg.path.samples.back();
            cg.length = e.t;
            cg.closure_gap = std::max({std::fabs(e.r - L), std::fabs(e.phi - kPi / 2),
                                       std::fabs(e.dr - 1), std::fabs(e.dphi)});
            cg.simple = n == 1 && mm == 1;
            out[i] = std::move(cg);
            status[i] = 1;
            return;
        }
        if (!(target < 2 * kPi)) return;
        auto fn = [&](double p) { return product_period(p) - target; };
        const double plo = 1e-300, phi_ = 1 - 1e-16;
        const double flo = -target, fhi = product_period(phi_) - target;
        if (!(fhi > 0)) return;
        RootResult rr = find_root(fn, plo, phi_, flo, fhi, 1e-17, 1e-14, 400);
        cg.p = rr.x;
        cg.delta_r = product_period(rr.x);
        StopRule s;
        s.tmax = 1e6;
        s.r_stop = 0;
        s.max_crossings = 2 * n;
        s.hmax = 0.02;
        s.turning_events = false;
        const GeodesicState st = start_product(cg.p);
        cg.path = integrate_geodesic(st, prod, s);
        const auto& e = cg.path.samples.back();
        cg.length = e.t;
        cg.closure_gap = std::max({std::fabs(e.r - mm * L), std::fabs(e.phi - kPi / 2),
                                   std::fabs(e.dr - st.dr), std::fabs(e.dphi - st.dphi)});
        cg.simple = is_simple(cg.path.samples, L);
        out[i] = std::move(cg);
        status[i] = 1;
    });
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (status[i])
            rep.found.push_back(std::move(out[i]));
        else
            rep.skipped.push_back(pairs[i]);
    }
    return rep;
}

GeodesicPath integrate_zone_a(const StripMetric& m, double R, double phi1, double beta) {
    StopRule s;
    s.tmax = 100 * R * R;
    s.r_stop = 0;
    s.r_lines = {kPi * R / 2, -kPi * R / 2};
    s.stop_line = 1;
    return integrate_geodesic(zone_a_entry(m, phi1, beta), m, s);
}

AntipodalReport zone_a_connect(const GeodesicPath& path, double R) {
    (void)R;
    const PathEvent* in = nullptr;
    const PathEvent* out = nullptr;
    for (const auto& e : path.events) {
        if (e.kind != EventKind::RLine) continue;
        if (!in && e.line == 0) in = &e;
        else if (in && !out && e.line == 1) out = &e;
    }
    if (!in || !out) throw Error(ErrorCode::MissingCrossing, "path does not cross both lines r=+-pi R/2");
    AntipodalReport a;
    a.phi1 = in->phi;
    a.angle1 = in->angle;
    a.phi2 = out->phi;
    a.angle2 = out->angle;
    a.dphi = std::fabs(a.phi2 - (kPi - a.phi1));
    a.dangle = std::fabs(a.angle2 + a.angle1);
    a.pass = a.dphi <= 1e-6 && a.dangle <= 1e-6;
    return a;
}

}  // namespace lamlab

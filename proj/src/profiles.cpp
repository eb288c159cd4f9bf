#include "lamlab/profiles.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace lamlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

Piece make_cosh(double lo, double hi, double c, double eps, double center = 0) {
    return {lo, hi, PieceKind::Cosh, {c, eps, center}, {}};
}
Piece make_sin(double lo, double hi, double shift) { return {lo, hi, PieceKind::SinShift, {shift}, {}}; }
Piece make_const(double lo, double hi, double v) { return {lo, hi, PieceKind::Constant, {v}, {}}; }
Piece make_poly(double lo, double hi, Poly p, PieceKind k = PieceKind::Transition) {
    Piece pc{lo, hi, k, {}, {}};
    pc.segments.add(hi, std::move(p));
    return pc;
}

// Reflects a piece r -> -r.
Piece mirror(const Piece& p) {
    Piece m = p;
    m.lo = -p.hi;
    m.hi = -p.lo;
    switch (p.kind) {
        case PieceKind::Cosh: m.params[2] = -p.params[2]; break;
        case PieceKind::SinShift:
            // sin(-r + s) = sin(pi - (-r + s)) = sin(r + pi - s)
            m.params[0] = kPi - p.params[0];
            break;
        case PieceKind::Constant: break;
        default: {
            // Polynomial segments have degree <= 5, so their mirrored images are
            // reproduced exactly by quintic Hermite data at the swapped ends.
            Piecewise seg;
            const auto& ends = p.segments.ends();
            std::vector<double> starts{p.lo};
            for (std::size_t i = 0; i + 1 < ends.size(); ++i) starts.push_back(ends[i]);
            for (std::size_t i = ends.size(); i-- > 0;) {
                const double x0 = starts[i], x1 = ends[i];
                Jet l = p.segments.eval(x1), r = p.segments.eval(x0);
                seg.add(-x0, quintic_hermite(-x1, -x0, {l.v, -l.d1, l.d2}, {r.v, -r.d1, r.d2}));
            }
            m.segments = seg;
        }
    }
    return m;
}

std::vector<Piece> symmetrize(const std::vector<Piece>& right) {
    std::vector<Piece> out;
    for (std::size_t i = right.size(); i-- > 0;) out.push_back(mirror(right[i]));
    // merge the two central pieces when they are the same closed form
    if (!out.empty() && right.front().kind == PieceKind::Cosh && out.back().kind == PieceKind::Cosh) {
        out.back().hi = right.front().hi;
        for (std::size_t i = 1; i < right.size(); ++i) out.push_back(right[i]);
    } else {
        for (const auto& p : right) out.push_back(p);
    }
    return out;
}

Piecewise hermite_samples(const std::vector<double>& r, const std::vector<double>& l,
                          const std::vector<double>& d1, const std::vector<double>& d2) {
    Piecewise pw;
    for (std::size_t i = 0; i + 1 < r.size(); ++i)
        pw.add(r[i + 1], quintic_hermite(r[i], r[i + 1], {l[i], d1[i], d2[i]},
                                         {l[i + 1], d1[i + 1], d2[i + 1]}));
    return pw;
}
}  // namespace

const char* piece_kind_name(PieceKind k) {
    switch (k) {
        case PieceKind::Cosh: return "cosh";
        case PieceKind::SinShift: return "sin-shift";
        case PieceKind::Constant: return "constant";
        case PieceKind::Transition: return "transition";
        case PieceKind::NeckSample: return "neck-sample";
        case PieceKind::CustomSampled: return "custom-sampled";
    }
    return "?";
}

Jet Piece::eval(double r) const {
    switch (kind) {
        case PieceKind::Cosh: {
            const double c = params[0], e = params[1], u = e * (r - params[2]);
            return {c * std::cosh(u), c * e * std::sinh(u), c * e * e * std::cosh(u)};
        }
        case PieceKind::SinShift: {
            const double u = r + params[0];
            return {std::sin(u), std::cos(u), -std::sin(u)};
        }
        case PieceKind::Constant: return {params[0], 0, 0};
        default: return segments.eval(r);
    }
}

WarpProfile WarpProfile::from_pieces(std::vector<Piece> pieces, Symmetry sym, std::string label) {
    if (pieces.empty()) throw Error(ErrorCode::BadParameters, "profile has no pieces");
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i)
        if (pieces[i].hi != pieces[i + 1].lo)
            throw Error(ErrorCode::BadParameters, "profile pieces are not contiguous");
    WarpProfile p;
    p.pieces_ = std::move(pieces);
    p.sym_ = sym;
    p.label_ = std::move(label);
    return p;
}

std::vector<double> WarpProfile::joins() const {
    std::vector<double> j;
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) j.push_back(pieces_[i].hi);
    return j;
}

ProfileSample WarpProfile::sample(double r) const {
    if (!(r >= lo() && r <= hi()))
        throw Error(ErrorCode::OutOfDomain, "r=" + std::to_string(r) + " outside profile domain");
    // Left-limit convention: a join point belongs to the piece on its left.
    auto it = std::lower_bound(pieces_.begin(), pieces_.end(), r,
                               [](const Piece& p, double x) { return p.hi < x; });
    if (it == pieces_.end()) it = pieces_.end() - 1;
    ProfileSample s;
    s.lam = it->eval(r);
    s.at_join = (r == it->hi && it + 1 != pieces_.end());
    return s;
}

Jet WarpProfile::eval(double r) const { return sample(r).lam; }

Jet eval_profile(const WarpProfile& p, double r) { return p.eval(r); }

double basiclam_default_c(double a, double delta, double eps) {
    const double r1 = 0.5 * (a - delta);
    const double L = a - delta - r1;
    return (std::cos(delta) - L * std::sin(delta) / 2) /
           (std::cosh(eps * r1) + L * eps * std::sinh(eps * r1) / 2);
}

std::string profile_kind_name(ProfileKind k) {
    switch (k) {
        case ProfileKind::Cosh: return "cosh";
        case ProfileKind::Basiclam: return "basiclam";
        case ProfileKind::BasiclamCapped: return "basiclam-capped";
        case ProfileKind::ProductConstant: return "product-constant";
        case ProfileKind::RoundSphere: return "round-sphere";
        case ProfileKind::Multiwell: return "multiwell";
        case ProfileKind::NeckImport: return "neck-import";
    }
    return "?";
}

ProfileSpec parse_profile_kind(const std::string& name, ProfileSpec base) {
    static const std::pair<const char*, ProfileKind> table[] = {
        {"cosh", ProfileKind::Cosh},
        {"basiclam", ProfileKind::Basiclam},
        {"basiclam-capped", ProfileKind::BasiclamCapped},
        {"product-constant", ProfileKind::ProductConstant},
        {"constant", ProfileKind::ProductConstant},
        {"round-sphere", ProfileKind::RoundSphere},
        {"sin", ProfileKind::RoundSphere},
        {"multiwell", ProfileKind::Multiwell},
        {"neck-import", ProfileKind::NeckImport},
    };
    for (const auto& [n, k] : table)
        if (name == n) {
            base.kind = k;
            return base;
        }
    throw Error(ErrorCode::BadParameters, "unknown profile kind '" + name + "'");
}

WarpProfile build_profile(const ProfileSpec& s) {
    switch (s.kind) {
        case ProfileKind::Cosh:
            if (!(s.eps > 0)) throw Error(ErrorCode::BadParameters, "eps must be positive");
            return WarpProfile::from_pieces({make_cosh(-kInf, kInf, 1.0, s.eps)}, Symmetry::Even,
                                            "cosh");
        case ProfileKind::ProductConstant:
            if (!(s.constant > 0)) throw Error(ErrorCode::BadParameters, "constant must be positive");
            return WarpProfile::from_pieces({make_const(-kInf, kInf, s.constant)}, Symmetry::Even,
                                            "product-constant");
        case ProfileKind::RoundSphere:
            return WarpProfile::from_pieces({make_sin(-kPi / 2, kPi / 2, kPi / 2)}, Symmetry::Even,
                                            "round-sphere");
        case ProfileKind::Basiclam:
        case ProfileKind::BasiclamCapped: {
            const double a = s.a, d = s.delta, e = s.eps;
            if (!(e > 0 && d > 0 && d < a && a < kPi / 2 + 10))
                throw Error(ErrorCode::BadParameters, "basiclam needs eps>0 and 0<delta<a");
            const double c = s.c > 0 ? s.c : basiclam_default_c(a, d, e);
            if (!(c > 0)) throw Error(ErrorCode::InfeasibleJoin, "no positive c for the transition");
            const double r1 = 0.5 * (a - d), r2 = a - d;
            Jet left{c * std::cosh(e * r1), c * e * std::sinh(e * r1), c * e * e * std::cosh(e * r1)};
            const double sh = kPi / 2 - a;
            Jet right{std::sin(r2 + sh), std::cos(r2 + sh), -std::sin(r2 + sh)};
            Poly tr = quintic_hermite(r1, r2, left, right);
            // A posteriori monotonicity of the transition.
            for (int i = 0; i <= 2000; ++i) {
                const double r = r1 + (r2 - r1) * i / 2000.0;
                Jet j = tr.eval(r);
                if (j.d1 < -1e-14 || j.v <= 0)
                    throw Error(ErrorCode::InfeasibleJoin,
                                "transition not monotone at r=" + std::to_string(r));
            }
            std::vector<Piece> right_half{make_cosh(0, r1, c, e), make_poly(r1, r2, tr),
                                          make_sin(r2, a, sh)};
            if (s.kind == ProfileKind::Basiclam)
                right_half.push_back(make_const(a, kInf, 1.0));
            else
                right_half.push_back(make_sin(a, a + kPi / 2, sh));
            return WarpProfile::from_pieces(symmetrize(right_half), Symmetry::Even,
                                            profile_kind_name(s.kind));
        }
        case ProfileKind::Multiwell: {
            if (s.centers.empty() || !(s.eps > 0))
                throw Error(ErrorCode::BadParameters, "multiwell needs centers and eps>0");
            std::vector<double> cs = s.centers;
            std::sort(cs.begin(), cs.end());
            double gap = kInf;
            for (std::size_t i = 0; i + 1 < cs.size(); ++i) gap = std::min(gap, cs[i + 1] - cs[i]);
            const double w2 = std::isfinite(gap) ? std::min(0.45 * gap, 1.5) : 1.5;
            const double w1 = w2 / 3;
            const double e = s.eps;
            // Plateau height from the balanced secant of one well flank.
            const double L = w2 - w1;
            const double plateau = std::cosh(e * w1) + L * e * std::sinh(e * w1) / 2;
            std::vector<Piece> pcs;
            double cur = -kInf;
            for (double c0 : cs) {
                Jet in{std::cosh(e * w1), -e * std::sinh(e * w1), e * e * std::cosh(e * w1)};
                Jet flat{plateau, 0, 0};
                pcs.push_back(make_const(cur, c0 - w2, plateau));
                pcs.push_back(make_poly(c0 - w2, c0 - w1, quintic_hermite(c0 - w2, c0 - w1, flat, in)));
                pcs.push_back(make_cosh(c0 - w1, c0 + w1, 1.0, e, c0));
                Jet out{in.v, -in.d1, in.d2};
                pcs.push_back(make_poly(c0 + w1, c0 + w2, quintic_hermite(c0 + w1, c0 + w2, out, flat)));
                cur = c0 + w2;
            }
            pcs.push_back(make_const(cur, kInf, plateau));
            // drop empty plateaus between touching wells
            std::vector<Piece> clean;
            for (auto& p : pcs)
                if (p.hi > p.lo) clean.push_back(p);
            bool even = true;
            for (std::size_t i = 0; i < cs.size(); ++i)
                even = even && std::fabs(cs[i] + cs[cs.size() - 1 - i]) < 1e-12;
            return WarpProfile::from_pieces(clean, even ? Symmetry::Even : Symmetry::None, "multiwell");
        }
        case ProfileKind::NeckImport: {
            const auto& r = s.neck_r;
            if (r.size() < 2 || s.neck_l.size() != r.size() || s.neck_d1.size() != r.size() ||
                s.neck_d2.size() != r.size())
                throw Error(ErrorCode::BadParameters, "neck-import needs matching sample arrays");
            const double K = -r.front();
            Piece neck{r.front(), r.back(), PieceKind::NeckSample, {}, {}};
            neck.segments = hermite_samples(r, s.neck_l, s.neck_d1, s.neck_d2);
            std::vector<Piece> pcs{make_const(-kInf, -K, s.neck_l.front()), neck,
                                   make_sin(0, kPi - s.neck_eps, s.neck_eps)};
            return WarpProfile::from_pieces(pcs, Symmetry::None, "neck-import");
        }
    }
    throw Error(ErrorCode::BadParameters, "unhandled profile kind");
}

SmoothnessReport validate_smoothness(const WarpProfile& p) {
    SmoothnessReport rep;
    const auto& pcs = p.pieces();
    for (std::size_t i = 0; i + 1 < pcs.size(); ++i) {
        const double r = pcs[i].hi;
        Jet a = pcs[i].eval(r), b = pcs[i + 1].eval(r);
        rep.joins.push_back({r, std::fabs(a.v - b.v), std::fabs(a.d1 - b.d1), std::fabs(a.d2 - b.d2)});
    }
    bool ok = true;
    for (const auto& pc : pcs) {
        const double lo = std::isfinite(pc.lo) ? pc.lo : (std::isfinite(pc.hi) ? pc.hi - 10 : -10);
        const double hi = std::isfinite(pc.hi) ? pc.hi : lo + 10 + (std::isfinite(pc.lo) ? 0 : 10);
        double sup = 0;
        for (int k = 0; k <= 400; ++k) sup = std::max(sup, std::fabs(pc.eval(lo + (hi - lo) * k / 400.0).d2));
        rep.sup_d2.push_back(sup);
        ok = ok && std::isfinite(sup);
    }
    for (const auto& j : rep.joins) ok = ok && j.jump_l < 1e-10 && j.jump_d1 < 1e-10;
    rep.pass = ok;
    return rep;
}

std::string profile_csv(const WarpProfile& p, double r0, double r1, int n) {
    std::ostringstream os;
    os << "r,lambda,dlambda,ddlambda\n";
    char buf[160];
    for (int i = 0; i <= n; ++i) {
        const double r = r0 + (r1 - r0) * i / n;
        Jet j = p.eval(r);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", r, j.v, j.d1, j.d2);
        os << buf;
    }
    return os.str();
}

}  // namespace lamlab

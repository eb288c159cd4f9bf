#pragma once

#include <limits>
#include <string>
#include <vector>

#include "lamlab/numeric.hpp"

namespace lamlab {

enum class PieceKind { Cosh, SinShift, Constant, Transition, NeckSample, CustomSampled };
const char* piece_kind_name(PieceKind k);

// One closed-form piece. Cosh: p[0]*cosh(p[1]*(r-p[2])). SinShift: sin(r+p[0]).
// Constant: p[0]. Transition/NeckSample/CustomSampled: polynomial segments.
struct Piece {
    double lo = 0, hi = 0;
    PieceKind kind = PieceKind::Constant;
    std::vector<double> params;
    Piecewise segments;  // used by polynomial kinds
    Jet eval(double r) const;
};

enum class Symmetry { Even, None };

struct ProfileSample {
    Jet lam;
    bool at_join = false;  // lam.d2 is the left limit when true
};

class WarpProfile {
public:
    WarpProfile() = default;
    // Pieces must be ordered and contiguous.
    static WarpProfile from_pieces(std::vector<Piece> pieces, Symmetry sym, std::string label);

    Jet eval(double r) const;
    ProfileSample sample(double r) const;
    double lo() const { return pieces_.front().lo; }
    double hi() const { return pieces_.back().hi; }
    bool contains(double r) const { return r >= lo() && r <= hi(); }
    Symmetry symmetry() const { return sym_; }
    const std::vector<Piece>& pieces() const { return pieces_; }
    std::vector<double> joins() const;
    const std::string& label() const { return label_; }

private:
    std::vector<Piece> pieces_;
    Symmetry sym_ = Symmetry::None;
    std::string label_;
};

enum class ProfileKind { Cosh, Basiclam, BasiclamCapped, ProductConstant, RoundSphere, Multiwell, NeckImport };

struct ProfileSpec {
    ProfileKind kind = ProfileKind::Cosh;
    double eps = 0.2;
    double a = 1.0;
    double delta = 0.2;
    double c = 0;  // 0 selects the computed default
    double constant = 1.0;
    std::vector<double> centers;
    // neck-import: samples of (r, lambda, lambda', lambda'') on [-K, 0] and the cut latitude
    std::vector<double> neck_r, neck_l, neck_d1, neck_d2;
    double neck_eps = 0.1;
};

ProfileSpec parse_profile_kind(const std::string& name, ProfileSpec base = {});
std::string profile_kind_name(ProfileKind k);

WarpProfile build_profile(const ProfileSpec& spec);
Jet eval_profile(const WarpProfile& p, double r);

// Default c for basiclam: balanced secant across the transition interval.
double basiclam_default_c(double a, double delta, double eps);

struct JoinRecord {
    double r = 0;
    double jump_l = 0, jump_d1 = 0, jump_d2 = 0;
};

struct SmoothnessReport {
    std::vector<JoinRecord> joins;
    std::vector<double> sup_d2;  // per piece
    bool pass = false;
};

SmoothnessReport validate_smoothness(const WarpProfile& p);

// Uniform CSV export r,lambda,dlambda,ddlambda.
std::string profile_csv(const WarpProfile& p, double r0, double r1, int n);

}  // namespace lamlab

#include "lamlab/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lamlab {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string num(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.2f", v);
    return b;
}

std::string esc(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '<') o += "&lt;";
        else if (c == '>') o += "&gt;";
        else if (c == '&') o += "&amp;";
        else o += c;
    }
    return o;
}

// Plot frame: phi horizontal on [0, pi], r vertical on [r_lo, r_hi].
class Plot {
public:
    Plot(double x0, double x1, double y0, double y1, int w = 640, int h = 480)
        : x0_(x0), x1_(x1), y0_(y0), y1_(y1), w_(w), h_(h) {}

    double X(double x) const { return left_ + (x - x0_) / (x1_ - x0_) * (w_ - left_ - right_); }
    double Y(double y) const { return top_ + (y1_ - y) / (y1_ - y0_) * (h_ - top_ - bottom_); }

    void line(double xa, double ya, double xb, double yb, const std::string& style) {
        body_ << "<line x1=\"" << num(X(xa)) << "\" y1=\"" << num(Y(ya)) << "\" x2=\"" << num(X(xb))
              << "\" y2=\"" << num(Y(yb)) << "\" " << style << "/>\n";
    }
    void rect(double xa, double ya, double xb, double yb, const std::string& style) {
        const double l = std::min(X(xa), X(xb)), t = std::min(Y(ya), Y(yb));
        body_ << "<rect x=\"" << num(l) << "\" y=\"" << num(t) << "\" width=\"" << num(std::fabs(X(xb) - X(xa)))
              << "\" height=\"" << num(std::fabs(Y(yb) - Y(ya))) << "\" " << style << "/>\n";
    }
    // Clipped to the frame; breaks the polyline where it leaves.
    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color) {
        std::string cur;
        int n = 0;
        auto flush = [&] {
            if (n > 1)
                body_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"" << cur
                      << "\"/>\n";
            cur.clear();
            n = 0;
        };
        for (const auto& [x, y] : pts) {
            if (x < x0_ || x > x1_ || y < y0_ || y > y1_) {
                flush();
                continue;
            }
            if (n) cur += ' ';
            cur += num(X(x)) + "," + num(Y(y));
            ++n;
        }
        flush();
    }
    void text(double px, double py, const std::string& s, const std::string& extra = "") {
        body_ << "<text x=\"" << num(px) << "\" y=\"" << num(py) << "\" font-family=\"sans-serif\" font-size=\"12\" "
              << extra << ">" << esc(s) << "</text>\n";
    }
    void axes(const std::string& xl, const std::string& yl, const std::vector<std::pair<double, std::string>>& xt) {
        rect(x0_, y0_, x1_, y1_, "fill=\"none\" stroke=\"#999\" stroke-width=\"0.5\"");
        for (const auto& [x, s] : xt) {
            body_ << "<line x1=\"" << num(X(x)) << "\" y1=\"" << num(Y(y0_)) << "\" x2=\"" << num(X(x))
                  << "\" y2=\"" << num(Y(y0_) + 4) << "\" stroke=\"#000\"/>\n";
            text(X(x) - 8, Y(y0_) + 16, s);
        }
        for (int i = 0; i <= 4; ++i) {
            const double y = y0_ + (y1_ - y0_) * i / 4;
            body_ << "<line x1=\"" << num(X(x0_) - 4) << "\" y1=\"" << num(Y(y)) << "\" x2=\"" << num(X(x0_))
                  << "\" y2=\"" << num(Y(y)) << "\" stroke=\"#000\"/>\n";
            text(X(x0_) - 44, Y(y) + 4, num(y));
        }
        text(0.5 * (X(x0_) + X(x1_)), h_ - 8, xl, "text-anchor=\"middle\"");
        text(14, 0.5 * (Y(y0_) + Y(y1_)), yl, "text-anchor=\"middle\"");
    }
    void title(const std::string& s) { text(w_ / 2.0, 18, s, "text-anchor=\"middle\" font-weight=\"bold\""); }
    void legend(const std::vector<std::string>& labels) {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const double y = top_ + 14 + 14 * double(i);
            body_ << "<line x1=\"" << num(w_ - right_ - 120) << "\" y1=\"" << num(y - 4) << "\" x2=\""
                  << num(w_ - right_ - 104) << "\" y2=\"" << num(y - 4) << "\" stroke=\"" << kColors[i % 7]
                  << "\" stroke-width=\"2\"/>\n";
            text(w_ - right_ - 100, y, labels[i]);
        }
    }
    std::string str() const {
        std::ostringstream o;
        o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
          << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_ << "\" viewBox=\"0 0 "
          << w_ << " " << h_ << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
          << body_.str() << "</svg>\n";
        return o.str();
    }

private:
    double x0_, x1_, y0_, y1_;
    int w_, h_;
    double left_ = 60, right_ = 20, top_ = 30, bottom_ = 40;
    std::ostringstream body_;
};

const std::vector<std::pair<double, std::string>> kPhiTicks = {
    {0, "0"}, {kPi / 4, "pi/4"}, {kPi / 2, "pi/2"}, {3 * kPi / 4, "3pi/4"}, {kPi, "pi"}};

// Strip outline, boundary lines and the reference leaves {r=0}, {phi=pi/2}.
void strip_frame(Plot& p, double r_lo, double r_hi, bool leaves = true) {
    p.axes("phi", "r", kPhiTicks);
    p.line(0, r_lo, 0, r_hi, "stroke=\"#000\" stroke-width=\"2\"");
    p.line(kPi, r_lo, kPi, r_hi, "stroke=\"#000\" stroke-width=\"2\"");
    if (leaves) {
        if (r_lo <= 0 && r_hi >= 0) p.line(0, 0, kPi, 0, "stroke=\"#444\" stroke-width=\"1.5\"");
        p.line(kPi / 2, r_lo, kPi / 2, r_hi, "stroke=\"#444\" stroke-dasharray=\"4,3\"");
    }
}

void draw_paths(Plot& p, const FigureData& d) {
    for (std::size_t i = 0; i < d.paths.size(); ++i) {
        std::vector<std::pair<double, double>> pts;
        pts.reserve(d.paths[i].size());
        for (const auto& s : d.paths[i]) pts.emplace_back(s.phi, s.r);
        p.polyline(pts, kColors[i % 7]);
    }
    if (!d.labels.empty()) p.legend(d.labels);
}

[[noreturn]] void missing(int which, const std::string& what) {
    throw Error(ErrorCode::MissingData, "figure " + std::to_string(which) + " needs " + what);
}

}  // namespace

std::vector<int> figure_ids() { return {1, 2, 3, 4, 9, 10}; }

std::string figure_svg(int which, const FigureData& d) {
    switch (which) {
        case 1: {
            if (!d.profile) missing(1, "a warp profile");
            // lambda(r) with the stable sphere at r = 0.
            const int n = 400;
            std::vector<std::pair<double, double>> pts;
            double lmax = 0;
            for (int i = 0; i <= n; ++i) {
                const double r = d.r_lo + (d.r_hi - d.r_lo) * i / n;
                const double l = d.profile->eval(r).v;
                lmax = std::max(lmax, l);
                pts.emplace_back(r, l);
            }
            Plot p(d.r_lo, d.r_hi, 0, 1.1 * lmax);
            std::vector<std::pair<double, std::string>> ticks;
            for (int i = 0; i <= 4; ++i) {
                const double r = d.r_lo + (d.r_hi - d.r_lo) * i / 4;
                ticks.emplace_back(r, num(r));
            }
            p.axes("r", "lambda", ticks);
            p.title(d.title.empty() ? "warp profile; stable sphere at r = 0" : d.title);
            if (d.r_lo <= 0 && d.r_hi >= 0) p.line(0, 0, 0, 1.1 * lmax, "stroke=\"#d62728\" stroke-width=\"2\"");
            p.polyline(pts, kColors[0]);
            return p.str();
        }
        case 2: {
            if (d.paths.empty()) missing(2, "geodesic paths");
            Plot p(0, kPi, 0, d.r_hi);
            strip_frame(p, 0, d.r_hi);
            p.title(d.title.empty() ? "lamination near {r = 0}, half neighbourhood" : d.title);
            draw_paths(p, d);
            return p.str();
        }
        case 3: {
            Plot p(0, kPi, 0, d.r_hi);
            strip_frame(p, 0, d.r_hi, false);
            p.title(d.title.empty() ? "upper half-strip" : d.title);
            draw_paths(p, d);
            return p.str();
        }
        case 4: {
            if (d.paths.empty()) missing(4, "the geodesic gamma_delta");
            Plot p(0, kPi, d.r_lo, d.r_hi);
            strip_frame(p, d.r_lo, d.r_hi);
            p.title(d.title.empty() ? "gamma_delta" : d.title);
            draw_paths(p, d);
            return p.str();
        }
        case 9: {
            if (!d.tube) missing(9, "the modified tube geometry");
            const TubeSketch& t = *d.tube;
            Plot p(0, kPi, -t.K, t.K);
            strip_frame(p, -t.K, t.K);
            p.title(d.title.empty() ? "connected sum: modified tube" : d.title);
            const double za = kPi * t.R / 2;
            p.rect(0, -za, kPi, za, "fill=\"#e8f0ff\" stroke=\"#1f77b4\"");
            for (double s : {-1.0, 1.0}) {
                p.rect(0, s * t.bump_inner, kPi, s * t.bump_outer, "fill=\"#fff0e0\" stroke=\"#ff7f0e\"");
            }
            p.rect(kPi / 2 - t.k_end, -t.bump_outer, kPi / 2 + t.k_end, t.bump_outer,
                   "fill=\"none\" stroke=\"#2ca02c\" stroke-dasharray=\"3,2\"");
            p.text(p.X(0.1), p.Y(0) - 4, "zone A");
            p.text(p.X(0.1), p.Y(0.5 * (t.bump_inner + t.bump_outer)), "cutoff");
            draw_paths(p, d);
            return p.str();
        }
        case 10: {
            if (!(d.zone_R > 0)) missing(10, "the zone-A radius");
            if (d.paths.empty()) missing(10, "zone-A geodesics");
            const double za = kPi * d.zone_R / 2;
            Plot p(0, kPi, -1.15 * za, 1.15 * za);
            strip_frame(p, -1.15 * za, 1.15 * za);
            p.rect(0, -za, kPi, za, "fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"");
            p.title(d.title.empty() ? "zone A: antipodal crossings" : d.title);
            draw_paths(p, d);
            return p.str();
        }
        default: break;
    }
    throw Error(ErrorCode::BadParameters, "no figure " + std::to_string(which));
}

void emit_figure(int which, const FigureData& d, const std::string& path) {
    const std::string s = figure_svg(which, d);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::BadParameters, "cannot write " + path);
    f << s;
}

}  // namespace lamlab

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include <png.h>

#include "field.hpp"

namespace essfield {

struct AffineWindow {
    Complex center{0.0};
    double half_width = 2.0;
};

// Chart w = 1/z around infinity, window |Re w|, |Im w| <= half_width.
struct ProjectiveWindow {
    double half_width = 1.0;
};

enum class ImageFormat { svg, png };

struct PortraitConfig {
    std::variant<AffineWindow, ProjectiveWindow> chart = AffineWindow{};
    int nx = 12;
    int ny = 12;
    double max_arclength = 20.0;
    double step_tolerance = 1e-6;
    double stop_radius_singular = 0.02;
    ImageFormat output = ImageFormat::svg;
    int width = 600;
    int height = 600;
    std::uint64_t seed = 1;
    double jitter = 0.3;    // fraction of a grid cell
    double max_step = 0.0;  // 0 selects half_width / 50
    int max_steps = 20000;  // attempted steps per direction
};

enum class Termination { left_window, reached_singular, max_length, step_failure };

inline const char* to_string(Termination t) {
    switch (t) {
    case Termination::left_window: return "left_window";
    case Termination::reached_singular: return "reached_singular";
    case Termination::max_length: return "max_length";
    case Termination::step_failure: return "step_failure";
    }
    return "?";
}

// Points are chart coordinates, ordered from the backward end to the forward end.
struct Streamline {
    std::vector<Complex> points;
    Termination forward = Termination::left_window;
    Termination backward = Termination::left_window;
};

namespace detail {

inline Complex unit(Complex v) { return v / std::abs(v); }

struct Guard {
    Complex at;
    double radius;
};

class Chart {
public:
    Chart(const VectorField& x, const PortraitConfig& cfg, const Tolerances& tol) : x_(x) {
        if (cfg.nx < 1 || cfg.ny < 1) throw Error(ErrorCode::invalid_input, "seed grid must be at least 1x1");
        if (!(cfg.step_tolerance > 0) || !(cfg.stop_radius_singular > 0) || !(cfg.max_arclength > 0) ||
            cfg.max_steps < 1)
            throw Error(ErrorCode::invalid_input, "portrait tolerances must be positive");
        Divisor dv = divisor_of(x, tol);
        if (const auto* a = std::get_if<AffineWindow>(&cfg.chart)) {
            projective_ = false;
            center_ = a->center;
            half_width_ = a->half_width;
            for (const auto* part : {&dv.zeros, &dv.poles}) {
                for (const auto& r : *part) guards_.push_back({r.z, cfg.stop_radius_singular});
            }
            zeros_ = dv.zeros;
            poles_ = dv.poles;
            exps_ = dv.exp_roots;
        } else {
            projective_ = true;
            center_ = 0.0;
            half_width_ = std::get<ProjectiveWindow>(cfg.chart).half_width;
            auto map = [](const RootList& in, RootList& out) {
                for (const auto& r : in)
                    if (r.z != Complex{0.0}) out.push_back({1.0 / r.z, r.multiplicity});
            };
            map(dv.zeros, zeros_);
            map(dv.poles, poles_);
            map(dv.exp_roots, exps_);
            for (const auto* part : {&zeros_, &poles_})
                for (const auto& r : *part) guards_.push_back({r.z, cfg.stop_radius_singular});
            auto sig = x.signature();
            if (sig.d >= 1)
                guards_.push_back({0.0, 1e-6});
            else if (2 - sig.s + sig.r != 0)
                guards_.push_back({0.0, cfg.stop_radius_singular});
        }
        if (!(half_width_ > 0)) throw Error(ErrorCode::invalid_input, "window half-width must be positive");
        domain_radius_ = half_width_ * std::sqrt(2.0);
    }

    bool projective() const { return projective_; }
    Complex center() const { return center_; }
    double half_width() const { return half_width_; }
    bool inside(Complex u) const { return std::abs(u - center_) <= domain_radius_; }
    const RootList& zeros() const { return zeros_; }
    const RootList& poles() const { return poles_; }
    const RootList& exp_roots() const { return exps_; }

    bool guarded(Complex u) const {
        for (const auto& g : guards_)
            if (std::abs(u - g.at) <= g.radius) return true;
        return false;
    }

    // Phase of the field in chart coordinates; never forms |X| itself.
    std::optional<Complex> direction(Complex u) const {
        Complex z = u;
        Complex extra = 1.0;
        if (projective_) {
            if (u == Complex{0.0}) return std::nullopt;
            z = 1.0 / u;
            extra = -unit(u) * unit(u);
        }
        Complex q = x_.Q(z), p = x_.P(z);
        if (q == Complex{0.0} || p == Complex{0.0}) return std::nullopt;
        double im = x_.E.degree() >= 1 ? x_.E(z).imag() : 0.0;
        Complex d = extra * unit(x_.lambda) * unit(q) * std::conj(unit(p)) * std::polar(1.0, im);
        if (!std::isfinite(d.real()) || !std::isfinite(d.imag())) return std::nullopt;
        return d;
    }

private:
    const VectorField& x_;
    bool projective_ = false;
    Complex center_;
    double half_width_ = 1.0;
    double domain_radius_ = 1.0;
    std::vector<Guard> guards_;
    RootList zeros_, poles_, exps_;
};

struct HalfResult {
    std::vector<Complex> points;  // excludes the seed
    Termination end;
};

// Dormand-Prince 5(4) on the unit direction field, sign = +1 forward, -1 backward.
inline HalfResult integrate_half(const Chart& ch, Complex seed, double sign, const PortraitConfig& cfg) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640, e5 = -92097.0 / 339200,
                            e6 = 187.0 / 2100, e7 = 1.0 / 40;

    const double hmax = cfg.max_step > 0 ? cfg.max_step : ch.half_width() / 50.0;
    const double hmin = 1e-12 * ch.half_width();
    const double tol = cfg.step_tolerance;
    HalfResult res{{}, Termination::step_failure};
    Complex u = seed;
    double len = 0.0;
    double h = hmax * 0.25;
    auto f = [&](Complex v) -> std::optional<Complex> {
        auto d = ch.direction(v);
        if (!d) return std::nullopt;
        return sign * *d;
    };
    for (int attempt = 0; attempt < cfg.max_steps; ++attempt) {
        if (len >= cfg.max_arclength - hmin) {
            res.end = Termination::max_length;
            return res;
        }
        h = std::min({h, hmax, cfg.max_arclength - len});
        auto k1 = f(u);
        if (!k1) {
            res.end = Termination::reached_singular;
            return res;
        }
        bool ok = true;
        Complex k[7];
        k[0] = *k1;
        auto stage = [&](int i, Complex v) {
            if (!ok) return;
            auto r = f(v);
            if (!r) ok = false;
            else k[i] = *r;
        };
        stage(1, u + h * (a21 * k[0]));
        stage(2, u + h * (a31 * k[0] + a32 * k[1]));
        stage(3, u + h * (a41 * k[0] + a42 * k[1] + a43 * k[2]));
        stage(4, u + h * (a51 * k[0] + a52 * k[1] + a53 * k[2] + a54 * k[3]));
        stage(5, u + h * (a61 * k[0] + a62 * k[1] + a63 * k[2] + a64 * k[3] + a65 * k[4]));
        Complex u5 = u + h * (b1 * k[0] + b3 * k[2] + b4 * k[3] + b5 * k[4] + b6 * k[5]);
        stage(6, u5);
        double err = 0.0;
        if (ok) {
            Complex u4 = u + h * (e1 * k[0] + e3 * k[2] + e4 * k[3] + e5 * k[4] + e6 * k[5] + e7 * k[6]);
            err = std::abs(u5 - u4);
        }
        bool accept = ok && err <= tol;
        if (accept) {
            auto dm = f(0.5 * (u + u5));
            Complex seg = u5 - u;
            accept = dm && seg != Complex{0.0} && std::abs(std::arg(seg / *dm)) < 5e-4;
            if (!accept) err = 2.0 * tol;
        }
        if (!accept) {
            h *= ok ? std::max(0.2, std::min(0.5, 0.9 * std::pow(tol / err, 0.2))) : 0.25;
            if (h < hmin) {
                res.end = Termination::step_failure;
                return res;
            }
            continue;
        }
        if (!ch.inside(u5) || ch.guarded(u5)) {
            // cut the step where it crosses the boundary, on the cubic Hermite interpolant
            auto herm = [&](double t) {
                double t2 = t * t, t3 = t2 * t;
                return (2 * t3 - 3 * t2 + 1) * u + (t3 - 2 * t2 + t) * h * k[0] + (-2 * t3 + 3 * t2) * u5 +
                       (t3 - t2) * h * k[6];
            };
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                Complex v = herm(mid);
                (ch.inside(v) && !ch.guarded(v) ? lo : hi) = mid;
            }
            Complex v = herm(hi);
            res.points.push_back(v);
            res.end = ch.inside(v) ? Termination::reached_singular : Termination::left_window;
            return res;
        }
        len += h;
        u = u5;
        res.points.push_back(u);
        h *= err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(tol / err, 0.2), 0.2, 5.0);
    }
    return res;
}

inline Streamline trace(const Chart& ch, Complex seed, const PortraitConfig& cfg) {
    if (ch.guarded(seed) || !ch.direction(seed))
        throw Error(ErrorCode::seed_rejected, "seed lies in a singular guard zone");
    auto fw = integrate_half(ch, seed, 1.0, cfg);
    auto bw = integrate_half(ch, seed, -1.0, cfg);
    Streamline s;
    s.points.assign(bw.points.rbegin(), bw.points.rend());
    s.points.push_back(seed);
    s.points.insert(s.points.end(), fw.points.begin(), fw.points.end());
    s.forward = fw.end;
    s.backward = bw.end;
    return s;
}

inline std::vector<Complex> seed_grid(const Chart& ch, const PortraitConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> jit(-0.5, 0.5);
    const double hw = ch.half_width();
    const double cx = 2.0 * hw / cfg.nx, cy = 2.0 * hw / cfg.ny;
    std::vector<Complex> seeds;
    for (int iy = 0; iy < cfg.ny; ++iy)
        for (int ix = 0; ix < cfg.nx; ++ix) {
            double jx = jit(rng), jy = jit(rng);
            seeds.push_back(ch.center() + Complex(-hw + (ix + 0.5 + cfg.jitter * jx) * cx,
                                                  -hw + (iy + 0.5 + cfg.jitter * jy) * cy));
        }
    return seeds;
}

} // namespace detail

// Seed is given in chart coordinates (w = 1/z for the projective chart).
inline Streamline streamline(const VectorField& x, Complex seed, const PortraitConfig& cfg, const Tolerances& tol = {}) {
    detail::Chart ch(x, cfg, tol);
    return detail::trace(ch, seed, cfg);
}

namespace detail {

inline std::vector<Streamline> all_streamlines(const Chart& ch, const PortraitConfig& cfg) {
    std::vector<Streamline> out;
    for (auto s : seed_grid(ch, cfg)) {
        if (!ch.inside(s) || ch.guarded(s) || !ch.direction(s)) continue;
        out.push_back(trace(ch, s, cfg));
    }
    return out;
}

} // namespace detail

// In seed-grid order; seeds in guard zones are skipped.
inline std::vector<Streamline> compute_streamlines(const VectorField& x, const PortraitConfig& cfg,
                                                   const Tolerances& tol = {}) {
    detail::Chart ch(x, cfg, tol);
    return detail::all_streamlines(ch, cfg);
}

struct Image {
    ImageFormat format = ImageFormat::svg;
    std::string bytes;
};

namespace detail {

struct PixelMap {
    Complex center;
    double hw;
    int w, h;
    double px(Complex u) const { return (u.real() - (center.real() - hw)) / (2 * hw) * w; }
    double py(Complex u) const { return (center.imag() + hw - u.imag()) / (2 * hw) * h; }
};

inline void append_fmt(std::string& out, const char* fmt, double a, double b) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, a, b);
    out += buf;
}

inline std::string render_svg(const Chart& ch, const std::vector<Streamline>& lines, const PortraitConfig& cfg) {
    PixelMap pm{ch.center(), ch.half_width(), cfg.width, cfg.height};
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(cfg.width) +
         "\" height=\"" + std::to_string(cfg.height) + "\" viewBox=\"0 0 " + std::to_string(cfg.width) + " " +
         std::to_string(cfg.height) + "\">\n";
    s += "<defs><clipPath id=\"window\"><rect x=\"0\" y=\"0\" width=\"" + std::to_string(cfg.width) +
         "\" height=\"" + std::to_string(cfg.height) + "\"/></clipPath></defs>\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(cfg.width) + "\" height=\"" + std::to_string(cfg.height) +
         "\" fill=\"white\"/>\n";
    s += "<g clip-path=\"url(#window)\" fill=\"none\" stroke=\"#2b2b2b\" stroke-width=\"0.8\">\n";
    for (const auto& l : lines) {
        if (l.points.size() < 2) continue;
        s += "<path d=\"";
        double lx = 0, ly = 0;
        for (std::size_t i = 0; i < l.points.size(); ++i) {
            double x = pm.px(l.points[i]), y = pm.py(l.points[i]);
            bool last = i + 1 == l.points.size();
            if (i > 0 && !last && std::hypot(x - lx, y - ly) < 0.5) continue;
            append_fmt(s, i == 0 ? "M%.2f %.2f" : " L%.2f %.2f", x, y);
            lx = x;
            ly = y;
        }
        s += "\"/>\n";
    }
    s += "</g>\n<g clip-path=\"url(#window)\">\n";
    for (const auto& r : ch.exp_roots()) {
        append_fmt(s, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"5\" fill=\"none\" stroke=\"#1a8a3a\" stroke-width=\"1.5\"/>\n",
                   pm.px(r.z), pm.py(r.z));
    }
    for (const auto& r : ch.zeros()) {
        double x = pm.px(r.z), y = pm.py(r.z);
        char buf[160];
        std::snprintf(buf, sizeof buf, "<polygon points=\"%.2f,%.2f %.2f,%.2f %.2f,%.2f\" fill=\"#d62020\"/>\n", x,
                      y - 6, x - 5.5, y + 4, x + 5.5, y + 4);
        s += buf;
    }
    for (const auto& r : ch.poles()) {
        double x = pm.px(r.z), y = pm.py(r.z);
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "<path d=\"M%.2f %.2f L%.2f %.2f M%.2f %.2f L%.2f %.2f\" stroke=\"#1f4fd6\" stroke-width=\"2\"/>\n",
                      x - 5, y - 5, x + 5, y + 5, x - 5, y + 5, x + 5, y - 5);
        s += buf;
    }
    s += "</g>\n</svg>\n";
    return s;
}

struct Raster {
    int w, h;
    std::vector<std::uint8_t> px;
    Raster(int w_, int h_) : w(w_), h(h_), px(static_cast<std::size_t>(w_) * h_ * 4, 255) {}
    void put(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        if (x < 0 || y < 0 || x >= w || y >= h) return;
        auto i = (static_cast<std::size_t>(y) * w + x) * 4;
        px[i] = r, px[i + 1] = g, px[i + 2] = b, px[i + 3] = 255;
    }
    void line(double x0, double y0, double x1, double y1, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        int n = static_cast<int>(std::ceil(std::max(std::abs(x1 - x0), std::abs(y1 - y0)))) + 1;
        if (n > 4 * (w + h)) n = 4 * (w + h);
        for (int i = 0; i <= n; ++i) {
            double t = double(i) / n;
            put(static_cast<int>(std::lround(x0 + t * (x1 - x0))), static_cast<int>(std::lround(y0 + t * (y1 - y0))), r,
                g, b);
        }
    }
};

inline std::string encode_png(const Raster& img) {
    std::string out;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error(ErrorCode::io, "png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error(ErrorCode::io, "png_create_info_struct failed");
    }
    std::vector<png_bytep> rows(static_cast<std::size_t>(img.h));
    for (int y = 0; y < img.h; ++y)
        rows[static_cast<std::size_t>(y)] =
            const_cast<png_bytep>(img.px.data() + static_cast<std::size_t>(y) * img.w * 4);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorCode::io, "png encoding failed");
    }
    png_set_write_fn(
        png, &out,
        [](png_structp p, png_bytep data, png_size_t len) {
            static_cast<std::string*>(png_get_io_ptr(p))->append(reinterpret_cast<const char*>(data), len);
        },
        nullptr);
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.w), static_cast<png_uint_32>(img.h), 8, PNG_COLOR_TYPE_RGBA,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

inline std::string render_png(const Chart& ch, const std::vector<Streamline>& lines, const PortraitConfig& cfg) {
    PixelMap pm{ch.center(), ch.half_width(), cfg.width, cfg.height};
    Raster img(cfg.width, cfg.height);
    for (const auto& l : lines)
        for (std::size_t i = 1; i < l.points.size(); ++i)
            img.line(pm.px(l.points[i - 1]), pm.py(l.points[i - 1]), pm.px(l.points[i]), pm.py(l.points[i]), 43, 43,
                     43);
    for (const auto& r : ch.exp_roots()) {
        double cx = pm.px(r.z), cy = pm.py(r.z);
        for (int a = 0; a < 64; ++a) {
            double t = 2 * std::numbers::pi * a / 64;
            img.put(static_cast<int>(std::lround(cx + 5 * std::cos(t))), static_cast<int>(std::lround(cy + 5 * std::sin(t))),
                    26, 138, 58);
        }
    }
    for (const auto& r : ch.zeros()) {
        double cx = pm.px(r.z), cy = pm.py(r.z);
        for (int dy = -6; dy <= 4; ++dy) {
            double half = 5.5 * (dy + 6) / 10.0;
            for (int dx = static_cast<int>(-half); dx <= static_cast<int>(half); ++dx)
                img.put(static_cast<int>(cx) + dx, static_cast<int>(cy) + dy, 214, 32, 32);
        }
    }
    for (const auto& r : ch.poles()) {
        double cx = pm.px(r.z), cy = pm.py(r.z);
        img.line(cx - 5, cy - 5, cx + 5, cy + 5, 31, 79, 214);
        img.line(cx - 5, cy + 5, cx + 5, cy - 5, 31, 79, 214);
    }
    return encode_png(img);
}

} // namespace detail

inline Image render(const VectorField& x, const PortraitConfig& cfg, const Tolerances& tol = {}) {
    if (cfg.width < 1 || cfg.height < 1) throw Error(ErrorCode::invalid_input, "image size must be positive");
    detail::Chart ch(x, cfg, tol);
    auto lines = detail::all_streamlines(ch, cfg);
    Image img{cfg.output, {}};
    img.bytes = cfg.output == ImageFormat::svg ? detail::render_svg(ch, lines, cfg) : detail::render_png(ch, lines, cfg);
    return img;
}

inline void write_image(const Image& img, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::io, "cannot open " + path);
    f.write(img.bytes.data(), static_cast<std::streamsize>(img.bytes.size()));
    if (!f) throw Error(ErrorCode::io, "write failed for " + path);
}

} // namespace essfield

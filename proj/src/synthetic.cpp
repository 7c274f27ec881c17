#include "sggan/synthetic.hpp"

#include "sggan/labels.hpp"
#include "sggan/png_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

namespace sggan {

namespace {

struct Color {
    double r, g, b;
    Color scaled(double s) const { return {r * s, g * s, b * s}; }
};

// Everything below works in normalized [0,1] coordinates; sizes are fractions
// of the image side.
struct SubjectParams {
    double face_cx, face_cy, face_a, face_b;
    double eye_dx, eye_y, eye_r;
    double brow_dy, brow_w, brow_h, brow_tilt;
    double nose_w, nose_len;
    double mouth_y, mouth_w, lip_h;
    double hairline_y;
    Color skin, hair, lips, bg, iris;
};

struct SampleParams {
    double dx, dy, scale;
    double mouth_open;   // 0 closed, else inner-mouth half-height factor
    double brightness;
    std::uint64_t noise_tag;
};

SubjectParams draw_subject(Rng rng, int style) {
    SubjectParams p;
    p.face_cx = 0.50 + rng.uniform(-0.02, 0.02);
    p.face_cy = 0.54 + rng.uniform(-0.02, 0.02);
    p.face_a = 0.30 + rng.uniform(-0.04, 0.04);
    p.face_b = 0.40 + rng.uniform(-0.04, 0.04);
    p.eye_dx = 0.13 + rng.uniform(-0.02, 0.02);
    p.eye_y = p.face_cy - 0.08 + rng.uniform(-0.012, 0.012);
    p.eye_r = 0.035 + rng.uniform(-0.008, 0.012);
    p.brow_dy = 0.055 + rng.uniform(-0.010, 0.012);
    p.brow_w = 0.055 + rng.uniform(-0.010, 0.015);
    p.brow_h = 0.013 + rng.uniform(-0.004, 0.006);
    p.brow_tilt = rng.uniform(-0.012, 0.012);
    p.nose_w = 0.035 + rng.uniform(-0.010, 0.015);
    p.nose_len = 0.12 + rng.uniform(-0.02, 0.02);
    p.mouth_y = p.face_cy + 0.17 + rng.uniform(-0.015, 0.015);
    p.mouth_w = 0.090 + rng.uniform(-0.020, 0.025);
    // Lip bands must stay over one pixel row at the smallest render size (32).
    p.lip_h = 0.042 + rng.uniform(-0.006, 0.010);
    p.hairline_y = p.eye_y - 0.13 + rng.uniform(-0.03, 0.02);

    const double tone = rng.uniform(-0.10, 0.16);
    p.skin = {0.72 + tone + rng.uniform(-0.03, 0.03),
              0.58 + tone * 0.9 + rng.uniform(-0.03, 0.03),
              0.48 + tone * 0.8 + rng.uniform(-0.03, 0.03)};
    const double hl = rng.uniform(0.0, 0.30);
    p.hair = {0.14 + hl + rng.uniform(-0.03, 0.03), 0.10 + hl * 0.8, 0.08 + hl * 0.6};
    p.lips = {0.55 + rng.uniform(-0.08, 0.08), 0.26 + rng.uniform(-0.05, 0.05),
              0.24 + rng.uniform(-0.05, 0.05)};
    p.bg = {0.32 + rng.uniform(-0.08, 0.08), 0.38 + rng.uniform(-0.08, 0.08),
            0.50 + rng.uniform(-0.08, 0.08)};
    p.iris = {0.18 + rng.uniform(0.0, 0.15), 0.15 + rng.uniform(0.0, 0.12),
              0.12 + rng.uniform(0.0, 0.20)};

    if (style == 1) {
        // Second appearance regime: cooler skin, warmer dark background,
        // lighter hair — a different capture setup, same geometry model.
        p.skin = {p.skin.r * 0.82, p.skin.g * 1.02, p.skin.b * 1.12};
        p.bg = {0.16 + rng.uniform(0.0, 0.06), 0.10 + rng.uniform(0.0, 0.05),
                0.12 + rng.uniform(0.0, 0.05)};
        p.hair = p.hair.scaled(1.35);
    }
    return p;
}

SampleParams draw_sample(Rng rng) {
    SampleParams s;
    s.dx = rng.uniform(-0.02, 0.02);
    s.dy = rng.uniform(-0.02, 0.02);
    s.scale = rng.uniform(0.96, 1.04);
    s.mouth_open = rng.bernoulli(0.5) ? rng.uniform(0.3, 1.0) : 0.0;
    s.brightness = rng.uniform(-0.06, 0.06);
    s.noise_tag = rng.next_u64();
    return s;
}

bool in_ellipse(double u, double v, double cx, double cy, double a, double b) {
    const double du = (u - cx) / a, dv = (v - cy) / b;
    return du * du + dv * dv <= 1.0;
}

struct RenderOut {
    RasterU8 visible;
    RasterU8 mask;
};

RenderOut render_face(int size, const SubjectParams& p, const SampleParams& s) {
    RenderOut out;
    out.visible.width = out.visible.height = size;
    out.visible.channels = 3;
    out.visible.pixels.resize(std::size_t(size) * size * 3);
    out.mask.width = out.mask.height = size;
    out.mask.channels = 1;
    out.mask.pixels.resize(std::size_t(size) * size);

    Rng noise(s.noise_tag);
    // Explicit band heights; the inner-mouth band exists only when open.
    const double upper_h = 0.9 * p.lip_h;
    const double lower_h = p.lip_h;
    const double inner_h = s.mouth_open * 0.7 * p.lip_h;

    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            // Per-sample pose: shift and scale the sampling coordinates.
            const double u = ((x + 0.5) / size - 0.5) / s.scale + 0.5 - s.dx;
            const double v = ((y + 0.5) / size - 0.5) / s.scale + 0.5 - s.dy;

            int cls = kBackground;
            Color col = p.bg.scaled(1.0 + 0.18 * (v - 0.5));

            // Hair cap: the rim of an enlarged head ellipse, upper half only.
            if (in_ellipse(u, v, p.face_cx, p.face_cy - 0.04, p.face_a * 1.20,
                           p.face_b * 1.14) &&
                v < p.face_cy) {
                cls = kHair;
                col = p.hair;
            }
            // Face skin with a soft radial shade.
            const double fu = (u - p.face_cx) / p.face_a;
            const double fv = (v - p.face_cy) / p.face_b;
            const double fr2 = fu * fu + fv * fv;
            if (fr2 <= 1.0) {
                cls = kSkin;
                col = p.skin.scaled(1.0 - 0.22 * fr2);
                if (v < p.hairline_y) {  // hair overhanging the forehead
                    cls = kHair;
                    col = p.hair;
                }
            }
            if (cls == kSkin) {
                const double lx = p.face_cx - p.eye_dx, rx = p.face_cx + p.eye_dx;
                // Brows: tilted bars above each eye.
                const double by = p.eye_y - p.brow_dy;
                for (int side = 0; side < 2; ++side) {
                    const double ex = side == 0 ? lx : rx;
                    const double tilt = (side == 0 ? 1.0 : -1.0) * p.brow_tilt;
                    if (std::abs(u - ex) <= p.brow_w &&
                        std::abs(v - (by + tilt * (u - ex) / p.brow_w)) <= p.brow_h) {
                        cls = side == 0 ? kLeftBrow : kRightBrow;
                        col = p.hair.scaled(0.8);
                    }
                }
                // Eyes: sclera ellipse, iris disc, pupil.
                for (int side = 0; side < 2; ++side) {
                    const double ex = side == 0 ? lx : rx;
                    if (in_ellipse(u, v, ex, p.eye_y, p.eye_r, 0.60 * p.eye_r)) {
                        cls = side == 0 ? kLeftEye : kRightEye;
                        col = {0.92, 0.92, 0.90};
                        const double du = u - ex, dv = v - p.eye_y;
                        const double rr = std::sqrt(du * du + dv * dv);
                        if (rr <= 0.45 * p.eye_r) col = p.iris;
                        if (rr <= 0.20 * p.eye_r) col = {0.05, 0.05, 0.05};
                    }
                }
                // Nose: a wedge widening toward its base.
                const double nose_top = p.eye_y + 0.03;
                if (cls == kSkin && v >= nose_top && v <= nose_top + p.nose_len) {
                    const double t = (v - nose_top) / p.nose_len;
                    if (std::abs(u - p.face_cx) <= p.nose_w * t) {
                        cls = kNose;
                        col = p.skin.scaled(0.82);
                    }
                }
                // Mouth: stacked bands (upper lip, optional inner mouth,
                // lower lip) with an elliptic horizontal taper.
                const double dv_mouth = v - p.mouth_y;
                const double mouth_hh = inner_h / 2 + std::max(upper_h, lower_h) + 0.004;
                const double z = dv_mouth / mouth_hh;
                const double half_w =
                    p.mouth_w * std::sqrt(std::max(0.0, 1.0 - z * z));
                if (cls == kSkin && std::abs(u - p.face_cx) <= half_w) {
                    if (inner_h > 0.0 && std::abs(dv_mouth) <= inner_h / 2) {
                        cls = kInnerMouth;
                        col = {0.16, 0.06, 0.07};
                    } else if (dv_mouth < 0 && -dv_mouth <= inner_h / 2 + upper_h) {
                        cls = kUpperLip;
                        col = p.lips.scaled(0.92);
                    } else if (dv_mouth >= 0 && dv_mouth <= inner_h / 2 + lower_h) {
                        cls = kLowerLip;
                        col = p.lips;
                    }
                }
            }

            const std::size_t i = (std::size_t(y) * size + x);
            out.mask.pixels[i] = static_cast<unsigned char>(cls);
            const double n = noise.uniform(-0.015, 0.015);
            const double vals[3] = {col.r, col.g, col.b};
            for (int c = 0; c < 3; ++c) {
                const double val = std::clamp(vals[c] + s.brightness + n, 0.0, 1.0);
                out.visible.pixels[i * 3 + c] =
                    static_cast<unsigned char>(std::lround(val * 255.0));
            }
        }
    }
    return out;
}

// Pseudo-thermal: invert the luminance, push it through a monotone response
// curve, and blur. Purely a function of the saved visible render.
RasterU8 thermal_from_visible(const RasterU8& visible, int style) {
    const int size = visible.height;
    std::vector<double> t(std::size_t(size) * size);
    const double gamma = style == 1 ? 1.15 : 1.30;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = visible.pixels[i * 3 + 0] / 255.0;
        const double g = visible.pixels[i * 3 + 1] / 255.0;
        const double b = visible.pixels[i * 3 + 2] / 255.0;
        const double lum = 0.299 * r + 0.587 * g + 0.114 * b;
        t[i] = 0.12 + 0.82 * std::pow(1.0 - lum, gamma);
    }
    // Separable box blur.
    const int radius = std::max(1, size / 32);
    std::vector<double> tmp(t.size());
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            double s = 0.0;
            int n = 0;
            for (int k = -radius; k <= radius; ++k) {
                const int xx = x + k;
                if (xx < 0 || xx >= size) continue;
                s += t[std::size_t(y) * size + xx];
                ++n;
            }
            tmp[std::size_t(y) * size + x] = s / n;
        }
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            double s = 0.0;
            int n = 0;
            for (int k = -radius; k <= radius; ++k) {
                const int yy = y + k;
                if (yy < 0 || yy >= size) continue;
                s += tmp[std::size_t(yy) * size + x];
                ++n;
            }
            t[std::size_t(y) * size + x] = s / n;
        }

    RasterU8 out;
    out.width = out.height = size;
    out.channels = 1;
    out.pixels.resize(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        out.pixels[i] =
            static_cast<unsigned char>(std::lround(std::clamp(t[i], 0.0, 1.0) * 255.0));
    return out;
}

}

DatasetManifest generate_synthetic_dataset(const SyntheticConfig& cfg,
                                           const std::string& out_dir) {
    if (cfg.n_subjects < 2)
        throw std::invalid_argument("synthetic dataset needs at least 2 subjects");
    if (cfg.pairs_per_subject < 1)
        throw std::invalid_argument("pairs_per_subject must be positive");
    if (cfg.image_size <= 0 || cfg.image_size % 8 != 0)
        throw std::invalid_argument("image_size must be a positive multiple of 8");
    if (cfg.style != 0 && cfg.style != 1)
        throw std::invalid_argument("style must be 0 or 1");

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir))
        throw IoError("cannot create output directory: " + out_dir);

    // Subject split. Too few subjects for a held-out set: keep everything in
    // train and say so.
    int n_test = 0;
    if (cfg.n_subjects >= 4) {
        n_test = std::max(1, int(std::lround(cfg.n_subjects * cfg.test_fraction)));
        n_test = std::min(n_test, cfg.n_subjects - 2);
    } else {
        std::fprintf(stderr,
                     "warning: %d subjects is too few for a held-out split; "
                     "all subjects assigned to train\n",
                     cfg.n_subjects);
    }
    const int n_train = cfg.n_subjects - n_test;

    const Rng master(cfg.seed);
    DatasetManifest manifest;
    for (int subj = 0; subj < cfg.n_subjects; ++subj) {
        const SubjectParams sp =
            draw_subject(master.split((1ULL << 40) + std::uint64_t(subj)), cfg.style);
        char sid[16];
        std::snprintf(sid, sizeof sid, "s%03d", subj);
        const std::string split = subj < n_train ? "train" : "test";
        for (int k = 0; k < cfg.pairs_per_subject; ++k) {
            const SampleParams smp = draw_sample(
                master.split((2ULL << 40) + (std::uint64_t(subj) << 20) + std::uint64_t(k)));
            const RenderOut r = render_face(cfg.image_size, sp, smp);
            const RasterU8 thermal = thermal_from_visible(r.visible, cfg.style);

            char stem[32];
            std::snprintf(stem, sizeof stem, "s%03d_p%02d", subj, k);
            ManifestEntry e;
            e.split = split;
            e.subject_id = sid;
            e.visible_path = out_dir + "/" + stem + "_visible.png";
            e.thermal_path = out_dir + "/" + stem + "_thermal.png";
            e.mask_path = out_dir + "/" + stem + "_mask.png";
            write_png(e.visible_path, r.visible);
            write_png(e.thermal_path, thermal);
            write_png(e.mask_path, r.mask);
            manifest.entries.push_back(std::move(e));
        }
    }
    write_manifest(out_dir + "/manifest.tsv", manifest);
    return manifest;
}

}

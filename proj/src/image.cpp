#include "sggan/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sggan {

double pixel_to_unit(unsigned char px) { return 2.0 * px / 255.0 - 1.0; }

unsigned char unit_to_pixel(double v) {
    const double clamped = std::clamp(v, -1.0, 1.0);
    return static_cast<unsigned char>(std::lround((clamped + 1.0) * 127.5));
}

Image image_from_raster(const RasterU8& raster, ColorSpace space) {
    if (raster.channels != 1 && raster.channels != 3)
        throw std::invalid_argument("image_from_raster: expected 1 or 3 channels, got " +
                                    std::to_string(raster.channels));
    Image img;
    img.color_space = space;
    img.pixels = Tensor(3, raster.height, raster.width);
    for (int y = 0; y < raster.height; ++y)
        for (int x = 0; x < raster.width; ++x)
            for (int c = 0; c < 3; ++c) {
                const unsigned char px =
                    raster.channels == 1 ? raster.at(y, x, 0) : raster.at(y, x, c);
                img.pixels.at(c, y, x) = pixel_to_unit(px);
            }
    validate_image(img);
    return img;
}

RasterU8 raster_from_image(const Image& img) {
    RasterU8 out;
    out.height = img.height();
    out.width = img.width();
    out.channels = 3;
    out.pixels.resize(std::size_t(out.height) * out.width * 3);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            for (int c = 0; c < 3; ++c)
                out.at(y, x, c) = unit_to_pixel(img.pixels.at(c, y, x));
    return out;
}

void validate_image(const Image& img) {
    const Tensor& p = img.pixels;
    if (p.c != 3) throw ShapeError("image must have 3 channels, has " + std::to_string(p.c));
    if (p.h <= 0 || p.w <= 0 || p.h % 4 != 0 || p.w % 4 != 0)
        throw ShapeError("image sides must be positive multiples of 4, got " + p.shape_str());
    for (double v : p.data)
        if (!(v >= -1.0 && v <= 1.0))
            throw std::invalid_argument("image pixel out of [-1,1]: " + std::to_string(v));
    if (img.color_space == ColorSpace::kThermalReplicated) {
        const std::size_t n = std::size_t(p.h) * p.w;
        for (std::size_t i = 0; i < n; ++i)
            if (p.data[i] != p.data[n + i] || p.data[i] != p.data[2 * n + i])
                throw std::invalid_argument(
                    "thermal image channels differ; expected a replicated greyscale");
    }
}

SemanticLabelMap SemanticLabelMap::from_indices(const std::vector<int>& idx, int h, int w,
                                                int k) {
    if (int(idx.size()) != h * w)
        throw ShapeError("label indices size mismatch");
    SemanticLabelMap map;
    map.probs = Tensor(k, h, w);
    for (int i = 0; i < h * w; ++i) {
        const int cls = idx[i];
        if (cls < 0 || cls >= k)
            throw std::invalid_argument("label index " + std::to_string(cls) +
                                        " outside 0.." + std::to_string(k - 1));
        map.probs.data[std::size_t(cls) * h * w + i] = 1.0;
    }
    return map;
}

std::vector<int> SemanticLabelMap::to_indices() const {
    const int n = probs.h * probs.w;
    std::vector<int> out(n);
    for (int i = 0; i < n; ++i) {
        int best = 0;
        for (int c = 1; c < probs.c; ++c)
            if (probs.data[std::size_t(c) * n + i] > probs.data[std::size_t(best) * n + i])
                best = c;
        out[i] = best;
    }
    return out;
}

Tensor resize_bilinear(const Tensor& src, int oh, int ow) {
    if (oh == src.h && ow == src.w) return src;
    Tensor out(src.c, oh, ow);
    const double sy = double(src.h) / oh;
    const double sx = double(src.w) / ow;
    for (int y = 0; y < oh; ++y) {
        // Half-pixel centers keep the resample symmetric.
        const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, double(src.h - 1));
        const int y0 = int(fy);
        const int y1 = std::min(y0 + 1, src.h - 1);
        const double wy = fy - y0;
        for (int x = 0; x < ow; ++x) {
            const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, double(src.w - 1));
            const int x0 = int(fx);
            const int x1 = std::min(x0 + 1, src.w - 1);
            const double wx = fx - x0;
            for (int c = 0; c < src.c; ++c) {
                const double v00 = src.at(c, y0, x0), v01 = src.at(c, y0, x1);
                const double v10 = src.at(c, y1, x0), v11 = src.at(c, y1, x1);
                out.at(c, y, x) = (1 - wy) * ((1 - wx) * v00 + wx * v01) +
                                  wy * ((1 - wx) * v10 + wx * v11);
            }
        }
    }
    return out;
}

Tensor resize_nearest(const Tensor& src, int oh, int ow) {
    if (oh == src.h && ow == src.w) return src;
    Tensor out(src.c, oh, ow);
    const double sy = double(src.h) / oh;
    const double sx = double(src.w) / ow;
    for (int y = 0; y < oh; ++y) {
        const int iy = std::min(int((y + 0.5) * sy), src.h - 1);
        for (int x = 0; x < ow; ++x) {
            const int ix = std::min(int((x + 0.5) * sx), src.w - 1);
            for (int c = 0; c < src.c; ++c) out.at(c, y, x) = src.at(c, iy, ix);
        }
    }
    return out;
}

Tensor crop(const Tensor& src, int off_y, int off_x, int h, int w) {
    if (off_y < 0 || off_x < 0 || off_y + h > src.h || off_x + w > src.w)
        throw ShapeError("crop window exceeds source " + src.shape_str());
    Tensor out(src.c, h, w);
    for (int c = 0; c < src.c; ++c)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                out.at(c, y, x) = src.at(c, off_y + y, off_x + x);
    return out;
}

Tensor hflip(const Tensor& src) {
    Tensor out(src.c, src.h, src.w);
    for (int c = 0; c < src.c; ++c)
        for (int y = 0; y < src.h; ++y)
            for (int x = 0; x < src.w; ++x)
                out.at(c, y, x) = src.at(c, y, src.w - 1 - x);
    return out;
}

}

#ifndef SGGAN_PNG_IO_HPP
#define SGGAN_PNG_IO_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace sggan {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 8-bit raster, interleaved rows. channels is 1 (grey) or 3 (rgb).
struct RasterU8 {
    int width = 0, height = 0, channels = 0;
    std::vector<unsigned char> pixels;

    RasterU8() = default;
    RasterU8(int w, int h, int ch)
        : width(w), height(h), channels(ch),
          pixels(std::size_t(w) * h * ch, 0) {}

    unsigned char& at(int y, int x, int ch) {
        return pixels[(std::size_t(y) * width + x) * channels + ch];
    }
    unsigned char at(int y, int x, int ch) const {
        return pixels[(std::size_t(y) * width + x) * channels + ch];
    }
};

// Reads an 8-bit PNG. Palette images are expanded, alpha is stripped,
// 16-bit depth is reduced to 8. Result has 1 or 3 channels.
RasterU8 read_png(const std::string& path);

void write_png(const std::string& path, const RasterU8& img);

}

#endif

#ifndef SGGAN_IMAGE_HPP
#define SGGAN_IMAGE_HPP

#include "sggan/png_io.hpp"
#include "sggan/tensor.hpp"

#include <string>
#include <vector>

namespace sggan {

enum class ColorSpace {
    kVisibleRgb,
    kThermalReplicated,  // greyscale source replicated across the 3 channels
};

// A 3-channel raster in [-1,1]. Stored 8-bit pixels map affinely:
//   value = 2*px/255 - 1,  px = round((value+1)*127.5)
struct Image {
    Tensor pixels;  // (3, h, w)
    ColorSpace color_space = ColorSpace::kVisibleRgb;

    int height() const { return pixels.h; }
    int width() const { return pixels.w; }
};

double pixel_to_unit(unsigned char px);
unsigned char unit_to_pixel(double v);

// Decode a raster into an Image. 1-channel input is replicated to 3 channels.
// A 3-channel raster tagged thermal must have identical channels.
Image image_from_raster(const RasterU8& raster, ColorSpace space);
RasterU8 raster_from_image(const Image& img);

// Checks bounds, the ingest size floor (positive multiples of 4), and channel
// replication for thermal images. Throws ShapeError / std::invalid_argument.
void validate_image(const Image& img);

// Per-pixel class probabilities, channel k = P(class k). A map loaded from a
// ground-truth index mask is one-hot.
struct SemanticLabelMap {
    Tensor probs;  // (k, h, w)

    int classes() const { return probs.c; }
    static SemanticLabelMap from_indices(const std::vector<int>& idx, int h, int w, int k);
    std::vector<int> to_indices() const;  // per-pixel argmax
};

// Geometric helpers shared by augmentation. Bilinear resampling for images,
// nearest for label maps (keeps per-pixel distributions intact).
Tensor resize_bilinear(const Tensor& src, int oh, int ow);
Tensor resize_nearest(const Tensor& src, int oh, int ow);
Tensor crop(const Tensor& src, int off_y, int off_x, int h, int w);
Tensor hflip(const Tensor& src);

}

#endif

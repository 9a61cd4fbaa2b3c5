#pragma once

#include <array>
#include <string>
#include <vector>

#include "facadeseg/image.hpp"

namespace fseg {

// PNG / JPEG codecs. PNG output is deterministic for identical pixels.

RgbImage read_image(const std::string& path);  // dispatches on magic bytes
RgbImage read_png_rgb(const std::string& path);
RgbImage read_jpeg_rgb(const std::string& path);

// Grayscale PNG; errors out if the file is not single channel 8-bit.
GrayImage read_png_gray(const std::string& path);

void write_png_rgb(const std::string& path, const RgbImage& img);
void write_png_gray(const std::string& path, const GrayImage& img);

// Paletted PNG for label images. `palette[i]` is the RGB color of label i;
// every pixel value must index into the palette.
void write_png_palette(const std::string& path, const GrayImage& labels,
                       const std::vector<std::array<std::uint8_t, 3>>& palette);

// Little-endian float32 blob, row-major.
void write_f32_blob(const std::string& path, const FloatPlane& plane);
FloatPlane read_f32_blob(const std::string& path, int width, int height);

}  // namespace fseg

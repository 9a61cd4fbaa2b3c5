#include "facadeseg/image_io.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include <jpeglib.h>
#include <png.h>

namespace fseg {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw RuntimeFailure("cannot open file: " + path);
  return f;
}

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReader() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriter() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

void read_png_any(const std::string& path, int want_channels, int& w, int& h,
                  std::vector<std::uint8_t>& out) {
  FilePtr f = open_file(path, "rb");
  PngReader r;
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!r.png) throw RuntimeFailure("png_create_read_struct failed");
  r.info = png_create_info_struct(r.png);
  if (!r.info) throw RuntimeFailure("png_create_info_struct failed");
  if (setjmp(png_jmpbuf(r.png))) throw RuntimeFailure("failed to decode PNG: " + path);

  png_init_io(r.png, f.get());
  png_read_info(r.png, r.info);

  png_uint_32 width, height;
  int bit_depth, color_type;
  png_get_IHDR(r.png, r.info, &width, &height, &bit_depth, &color_type, nullptr, nullptr, nullptr);

  if (bit_depth == 16) png_set_strip_16(r.png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
  if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png);
  png_set_strip_alpha(r.png);
  if (want_channels == 3) {
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
      png_set_gray_to_rgb(r.png);
  } else if (want_channels == 1) {
    if (color_type != PNG_COLOR_TYPE_GRAY)
      throw ValidationError("expected single-channel grayscale PNG: " + path);
  }
  png_read_update_info(r.png, r.info);

  w = static_cast<int>(width);
  h = static_cast<int>(height);
  std::size_t rowbytes = png_get_rowbytes(r.png, r.info);
  if (rowbytes != static_cast<std::size_t>(w) * want_channels)
    throw RuntimeFailure("unexpected PNG row size in " + path);

  out.resize(static_cast<std::size_t>(w) * h * want_channels);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) rows[y] = out.data() + static_cast<std::size_t>(y) * rowbytes;
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
}

void write_png_any(const std::string& path, int w, int h, int color_type,
                   const std::uint8_t* data, std::size_t rowbytes,
                   const std::vector<std::array<std::uint8_t, 3>>* palette) {
  FilePtr f = open_file(path, "wb");
  PngWriter wr;
  wr.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!wr.png) throw RuntimeFailure("png_create_write_struct failed");
  wr.info = png_create_info_struct(wr.png);
  if (!wr.info) throw RuntimeFailure("png_create_info_struct failed");
  if (setjmp(png_jmpbuf(wr.png))) throw RuntimeFailure("failed to encode PNG: " + path);

  png_init_io(wr.png, f.get());
  png_set_IHDR(wr.png, wr.info, w, h, 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  std::vector<png_color> plte;
  if (palette) {
    plte.reserve(palette->size());
    for (const auto& c : *palette) plte.push_back(png_color{c[0], c[1], c[2]});
    png_set_PLTE(wr.png, wr.info, plte.data(), static_cast<int>(plte.size()));
  }
  png_write_info(wr.png, wr.info);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y)
    rows[y] = const_cast<png_bytep>(data + static_cast<std::size_t>(y) * rowbytes);
  png_write_image(wr.png, rows.data());
  png_write_end(wr.png, nullptr);
}

}  // namespace

RgbImage read_png_rgb(const std::string& path) {
  RgbImage img;
  read_png_any(path, 3, img.width, img.height, img.data);
  return img;
}

GrayImage read_png_gray(const std::string& path) {
  GrayImage img;
  std::vector<std::uint8_t> buf;
  int w, h;
  read_png_any(path, 1, w, h, buf);
  img.width = w;
  img.height = h;
  img.px = std::move(buf);
  return img;
}

namespace {

struct JpegErrorMgr {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr ci) {
  auto* err = reinterpret_cast<JpegErrorMgr*>(ci->err);
  (*ci->err->format_message)(ci, err->message);
  std::longjmp(err->jump, 1);
}

}  // namespace

RgbImage read_jpeg_rgb(const std::string& path) {
  FilePtr f = open_file(path, "rb");
  jpeg_decompress_struct cinfo;
  JpegErrorMgr jerr;
  cinfo.err = jpeg_std_error(&jerr.pub);
  jerr.pub.error_exit = jpeg_error_exit;
  jpeg_create_decompress(&cinfo);
  struct Guard {
    jpeg_decompress_struct* c;
    ~Guard() { jpeg_destroy_decompress(c); }
  } guard{&cinfo};

  RgbImage img;
  if (setjmp(jerr.jump))
    throw RuntimeFailure("JPEG decode error in " + path + ": " + jerr.message);

  jpeg_stdio_src(&cinfo, f.get());
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);

  img = RgbImage(static_cast<int>(cinfo.output_width), static_cast<int>(cinfo.output_height));
  std::size_t rowbytes = static_cast<std::size_t>(img.width) * 3;
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = img.data.data() + cinfo.output_scanline * rowbytes;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  return img;
}

RgbImage read_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeFailure("cannot open file: " + path);
  unsigned char magic[4] = {0, 0, 0, 0};
  in.read(reinterpret_cast<char*>(magic), 4);
  in.close();
  if (magic[0] == 0x89 && magic[1] == 'P') return read_png_rgb(path);
  if (magic[0] == 0xFF && magic[1] == 0xD8) return read_jpeg_rgb(path);
  throw ValidationError("unsupported image format (need PNG or JPEG): " + path);
}

void write_png_rgb(const std::string& path, const RgbImage& img) {
  write_png_any(path, img.width, img.height, PNG_COLOR_TYPE_RGB, img.data.data(),
                static_cast<std::size_t>(img.width) * 3, nullptr);
}

void write_png_gray(const std::string& path, const GrayImage& img) {
  write_png_any(path, img.width, img.height, PNG_COLOR_TYPE_GRAY, img.px.data(),
                static_cast<std::size_t>(img.width), nullptr);
}

void write_png_palette(const std::string& path, const GrayImage& labels,
                       const std::vector<std::array<std::uint8_t, 3>>& palette) {
  if (palette.empty() || palette.size() > 256)
    throw ValidationError("palette must hold 1..256 entries");
  for (std::size_t i = 0; i < labels.px.size(); ++i)
    if (labels.px[i] >= palette.size())
      throw ValidationError("label value " + std::to_string(labels.px[i]) +
                            " outside palette of size " + std::to_string(palette.size()));
  write_png_any(path, labels.width, labels.height, PNG_COLOR_TYPE_PALETTE, labels.px.data(),
                static_cast<std::size_t>(labels.width), &palette);
}

void write_f32_blob(const std::string& path, const FloatPlane& plane) {
  static_assert(sizeof(float) == 4);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot open file for writing: " + path);
  out.write(reinterpret_cast<const char*>(plane.px.data()),
            static_cast<std::streamsize>(plane.px.size() * 4));
  if (!out) throw RuntimeFailure("short write: " + path);
}

FloatPlane read_f32_blob(const std::string& path, int width, int height) {
  FloatPlane plane(width, height);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeFailure("cannot open file: " + path);
  in.read(reinterpret_cast<char*>(plane.px.data()),
          static_cast<std::streamsize>(plane.px.size() * 4));
  if (in.gcount() != static_cast<std::streamsize>(plane.px.size() * 4))
    throw ValidationError("blob too small for " + std::to_string(width) + "x" +
                          std::to_string(height) + ": " + path);
  return plane;
}

}  // namespace fseg

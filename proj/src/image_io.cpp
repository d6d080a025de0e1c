#include "surftrack/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <vector>

#include <jpeglib.h>

namespace surftrack {

namespace {

struct FileCloser {
  void operator()(FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

ImageRGB from_rgb8(const std::vector<unsigned char>& buf, int w, int h) {
  ImageRGB img(w, h);
  for (size_t i = 0; i < buf.size(); ++i) img.data[i] = double(buf[i]);
  return img;
}

ImageRGB load_png_file(FILE* fp, const std::string& path) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("load_image: png init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("load_image: png init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("load_image: corrupt png: " + path);
  }
  png_init_io(png, fp);
  png_read_info(png, info);

  png_uint_32 w = png_get_image_width(png, info);
  png_uint_32 h = png_get_image_height(png, info);
  int color = png_get_color_type(png, info);
  int depth = png_get_bit_depth(png, info);

  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  std::vector<unsigned char> buf(size_t(w) * h * 3);
  std::vector<png_bytep> rows(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = buf.data() + size_t(y) * w * 3;
  png_read_image(png, rows.data());
  png_destroy_read_struct(&png, &info, nullptr);
  return from_rgb8(buf, (int)w, (int)h);
}

ImageRGB load_jpeg_file(FILE* fp, const std::string& path) {
  jpeg_decompress_struct cinfo;
  jpeg_error_mgr jerr;
  cinfo.err = jpeg_std_error(&jerr);
  jerr.error_exit = [](j_common_ptr ci) {
    char msg[JMSG_LENGTH_MAX];
    (*ci->err->format_message)(ci, msg);
    throw std::runtime_error(std::string("load_image: jpeg error: ") + msg);
  };
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, fp);
  try {
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);
    const int w = cinfo.output_width, h = cinfo.output_height;
    std::vector<unsigned char> buf(size_t(w) * h * 3);
    while ((int)cinfo.output_scanline < h) {
      unsigned char* row = buf.data() + size_t(cinfo.output_scanline) * w * 3;
      jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return from_rgb8(buf, w, h);
  } catch (...) {
    jpeg_destroy_decompress(&cinfo);
    throw std::runtime_error("load_image: corrupt jpeg: " + path);
  }
}

}  // namespace

ImageRGB load_image(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw std::runtime_error("load_image: cannot open file: " + path);
  unsigned char magic[8] = {0};
  size_t got = std::fread(magic, 1, sizeof(magic), fp.get());
  std::rewind(fp.get());
  if (got >= 8 && png_sig_cmp(magic, 0, 8) == 0) return load_png_file(fp.get(), path);
  if (got >= 2 && magic[0] == 0xFF && magic[1] == 0xD8) return load_jpeg_file(fp.get(), path);
  throw std::runtime_error("load_image: not a PNG or JPEG file: " + path);
}

void save_png(const std::string& path, const ImageRGB& img) {
  if (img.empty()) throw std::runtime_error("save_png: empty image");
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw std::runtime_error("save_png: cannot open for writing: " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("save_png: png init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("save_png: png init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("save_png: write failed: " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  std::vector<unsigned char> row(size_t(img.width) * 3);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const double* p = &img.data[(size_t(y) * img.width + x) * 3];
      for (int c = 0; c < 3; ++c)
        row[size_t(x) * 3 + c] =
            (unsigned char)std::lround(std::clamp(p[c], 0.0, 255.0));
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace surftrack

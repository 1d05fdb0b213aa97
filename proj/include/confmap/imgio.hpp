#pragma once

#include <png.h>

#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "confmap/confidence.hpp"
#include "confmap/image.hpp"

namespace confmap {

/// Unreadable, unwritable or undecodable files.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

using FilePtr = std::unique_ptr<std::FILE, int (*)(std::FILE*)>;

inline FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  std::FILE* f = std::fopen(path.string().c_str(), mode);
  if (!f)
    throw io_error("cannot open '" + path.string() + "' for " +
                   (mode[0] == 'r' ? "reading" : "writing"));
  return FilePtr(f, &std::fclose);
}

inline GrayImage decode_png_gray(const std::filesystem::path& path) {
  FilePtr file = open_file(path, "rb");
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw io_error("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw io_error("libpng init failed");
  }
  std::vector<png_byte> pixels;
  std::vector<png_bytep> rows;
  int width = 0, height = 0, channels = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw io_error("failed to decode PNG '" + path.string() + "'");
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  if (png_get_bit_depth(png, info) > 8) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw io_error("unsupported bit depth in '" + path.string() +
                   "': only 8-bit images are accepted");
  }
  const png_byte color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  width = static_cast<int>(png_get_image_width(png, info));
  height = static_cast<int>(png_get_image_height(png, info));
  channels = png_get_channels(png, info);
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw io_error("unsupported channel layout in '" + path.string() + "'");
  }
  const std::size_t stride = png_get_rowbytes(png, info);
  pixels.resize(stride * height);
  rows.resize(height);
  for (int r = 0; r < height; ++r) rows[r] = pixels.data() + stride * r;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  GrayImage img = make_image(width, height);
  for (int r = 0; r < height; ++r) {
    const png_byte* line = pixels.data() + stride * r;
    for (int c = 0; c < width; ++c) {
      if (channels == 1) {
        img.at(r, c) = static_cast<float>(line[c]) / 255.0f;
      } else {
        const double m = (static_cast<double>(line[3 * c]) + line[3 * c + 1] +
                          line[3 * c + 2]) /
                         3.0;
        img.at(r, c) = static_cast<float>(m / 255.0);
      }
    }
  }
  return img;
}

inline GrayImage decode_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path.string() + "' for reading");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();

  std::size_t pos = 0;
  auto next_token = [&]() -> std::string {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < bytes.size() &&
           !std::isspace(static_cast<unsigned char>(bytes[pos])))
      ++pos;
    if (start == pos) throw io_error("truncated PGM header in '" + path.string() + "'");
    return bytes.substr(start, pos - start);
  };

  const std::string magic = next_token();
  if (magic != "P5" && magic != "P2")
    throw io_error("'" + path.string() + "' is not a PGM file");
  int width = 0, height = 0, maxval = 0;
  try {
    width = std::stoi(next_token());
    height = std::stoi(next_token());
    maxval = std::stoi(next_token());
  } catch (const std::exception&) {
    throw io_error("malformed PGM header in '" + path.string() + "'");
  }
  if (width < 1 || height < 1)
    throw io_error("bad PGM dimensions in '" + path.string() + "'");
  if (maxval < 1 || maxval > 255)
    throw io_error("unsupported bit depth in '" + path.string() +
                   "': PGM maxval must be <= 255");

  GrayImage img = make_image(width, height);
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (magic == "P5") {
    ++pos;  // single whitespace after maxval
    if (bytes.size() - pos < count)
      throw io_error("truncated PGM data in '" + path.string() + "'");
    for (std::size_t i = 0; i < count; ++i)
      img.data[i] = static_cast<float>(static_cast<unsigned char>(bytes[pos + i])) / maxval;
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      int v = 0;
      try {
        v = std::stoi(next_token());
      } catch (const std::exception&) {
        throw io_error("truncated PGM data in '" + path.string() + "'");
      }
      if (v < 0 || v > maxval)
        throw io_error("PGM sample out of range in '" + path.string() + "'");
      img.data[i] = static_cast<float>(v) / maxval;
    }
  }
  return img;
}

inline png_byte to_byte(double v) {
  long b = std::lround(v * 255.0);
  if (b < 0) b = 0;
  if (b > 255) b = 255;
  return static_cast<png_byte>(b);
}

inline void encode_png(const std::filesystem::path& path,
                       const std::vector<png_byte>& pixels, int width,
                       int height, int channels) {
  FilePtr file = open_file(path, "wb");
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw io_error("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw io_error("libpng init failed");
  }
  std::vector<png_bytep> rows(height);
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  for (int r = 0; r < height; ++r)
    rows[r] = const_cast<png_bytep>(pixels.data() + stride * r);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw io_error("failed to write PNG '" + path.string() + "'");
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, width, height, 8,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace detail

/// Loads an 8-bit PNG or PGM as normalized grayscale. 8-bit RGB input is
/// converted by channel average; 16-bit files are rejected. The format is
/// detected from the file's magic bytes, not its extension.
inline GrayImage load_gray(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw io_error("cannot open '" + path.string() + "' for reading");
  unsigned char magic[8] = {0};
  probe.read(reinterpret_cast<char*>(magic), 8);
  probe.close();
  if (!png_sig_cmp(magic, 0, 8)) return detail::decode_png_gray(path);
  if (magic[0] == 'P' && (magic[1] == '5' || magic[1] == '2'))
    return detail::decode_pgm(path);
  throw io_error("'" + path.string() + "' is neither PNG nor PGM");
}

/// Writes an 8-bit grayscale PNG; intensities quantized by round(v*255).
inline void save_png(const GrayImage& img, const std::filesystem::path& path) {
  std::vector<png_byte> pixels(img.data.size());
  for (std::size_t i = 0; i < img.data.size(); ++i)
    pixels[i] = detail::to_byte(img.data[i]);
  detail::encode_png(path, pixels, img.width, img.height, 1);
}

/// Writes an 8-bit RGB PNG.
inline void save_png(const OverlayImage& img, const std::filesystem::path& path) {
  std::vector<png_byte> pixels(img.rgb.size());
  for (std::size_t i = 0; i < img.rgb.size(); ++i)
    pixels[i] = detail::to_byte(img.rgb[i]);
  detail::encode_png(path, pixels, img.width, img.height, 3);
}

/// Plain-text matrix of scores, one row per line, full double precision.
/// Used for exact comparisons in tests and downstream tooling.
inline void save_text_matrix(const ConfidenceMap& map,
                             const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path.string() + "' for writing");
  char buf[32];
  for (int r = 0; r < map.height; ++r) {
    for (int c = 0; c < map.width; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", map.at(r, c));
      out << (c ? " " : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw io_error("failed writing '" + path.string() + "'");
}

inline ConfidenceMap load_text_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path.string() + "' for reading");
  ConfidenceMap map;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    int count = 0;
    double v;
    while (row >> v) {
      map.scores.push_back(v);
      ++count;
    }
    if (map.width == 0)
      map.width = count;
    else if (count != map.width)
      throw io_error("ragged text matrix in '" + path.string() + "'");
    ++map.height;
  }
  if (map.width == 0 || map.height == 0)
    throw io_error("empty text matrix in '" + path.string() + "'");
  return map;
}

}  // namespace confmap

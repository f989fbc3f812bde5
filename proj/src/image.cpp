#include "msc/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace msc {

ImagePatch extract_crop(const Image& image, Point2 center, Size2 crop_size, std::size_t out_height,
                        std::size_t out_width) {
  if (image.empty()) throw std::invalid_argument("extract_patch: empty image");
  if (!(crop_size.width > 0.0) || !(crop_size.height > 0.0)) {
    throw std::invalid_argument("extract_patch: crop size must be positive");
  }
  if (out_height == 0 || out_width == 0) {
    throw std::invalid_argument("extract_patch: output size must be positive");
  }
  ImagePatch patch;
  patch.crop_width = crop_size.width;
  patch.crop_height = crop_size.height;
  patch.crop_x = center.x - crop_size.width / 2.0;
  patch.crop_y = center.y - crop_size.height / 2.0;
  patch.pixels = FeatureMap(out_height, out_width, image.channels());

  const double sx = crop_size.width / static_cast<double>(out_width);
  const double sy = crop_size.height / static_cast<double>(out_height);
  const long max_r = static_cast<long>(image.height()) - 1;
  const long max_c = static_cast<long>(image.width()) - 1;
  const std::size_t nch = image.channels();

  // Precompute per-column taps; rows are handled in the outer loop.
  std::vector<long> c0(out_width), c1(out_width);
  std::vector<double> fc(out_width);
  for (std::size_t j = 0; j < out_width; ++j) {
    const double src = patch.crop_x + (static_cast<double>(j) + 0.5) * sx - 0.5;
    const double fl = std::floor(src);
    fc[j] = src - fl;
    c0[j] = std::clamp(static_cast<long>(fl), 0L, max_c);
    c1[j] = std::clamp(static_cast<long>(fl) + 1, 0L, max_c);
  }
  for (std::size_t i = 0; i < out_height; ++i) {
    const double src = patch.crop_y + (static_cast<double>(i) + 0.5) * sy - 0.5;
    const double fl = std::floor(src);
    const double fr = src - fl;
    const long r0 = std::clamp(static_cast<long>(fl), 0L, max_r);
    const long r1 = std::clamp(static_cast<long>(fl) + 1, 0L, max_r);
    for (std::size_t j = 0; j < out_width; ++j) {
      for (std::size_t d = 0; d < nch; ++d) {
        const double v00 = image(r0, c0[j], d), v01 = image(r0, c1[j], d);
        const double v10 = image(r1, c0[j], d), v11 = image(r1, c1[j], d);
        const double top = v00 + fc[j] * (v01 - v00);
        const double bottom = v10 + fc[j] * (v11 - v10);
        patch.pixels(i, j, d) = std::clamp((top + fr * (bottom - top)) / 255.0, 0.0, 1.0);
      }
    }
  }
  return patch;
}

ImagePatch extract_patch(const Image& image, Point2 center, Size2 target_size, double padding,
                         std::size_t out_height, std::size_t out_width) {
  if (!(padding > 0.0)) throw std::invalid_argument("extract_patch: padding must be positive");
  if (!(target_size.width > 0.0) || !(target_size.height > 0.0)) {
    throw std::invalid_argument("extract_patch: target size must be positive");
  }
  const Size2 crop{target_size.width * (1.0 + padding), target_size.height * (1.0 + padding)};
  return extract_crop(image, center, crop, out_height, out_width);
}

FeatureMap to_gray(const FeatureMap& rgb) {
  if (rgb.channels() == 1) return rgb;
  if (rgb.channels() != 3) throw std::invalid_argument("to_gray: expected 1 or 3 channels");
  FeatureMap out(rgb.height(), rgb.width(), 1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = 0.299 * rgb[3 * i] + 0.587 * rgb[3 * i + 1] + 0.114 * rgb[3 * i + 2];
  }
  return out;
}

namespace {

Image load_png(const std::filesystem::path& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str())) {
    throw std::runtime_error("cannot decode PNG " + path.string() + ": " + img.message);
  }
  const bool color = (img.format & PNG_FORMAT_FLAG_COLOR) != 0;
  img.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  Image out(img.height, img.width, color ? 3 : 1);
  if (!png_image_finish_read(&img, nullptr, out.data(), 0, nullptr)) {
    png_image_free(&img);
    throw std::runtime_error("cannot decode PNG " + path.string() + ": " + img.message);
  }
  return out;
}

Image load_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string magic;
  in >> magic;
  if (magic != "P5" && magic != "P6") throw std::runtime_error("unsupported PNM variant in " + path.string());
  auto next_int = [&] {
    int v = 0;
    while (in >> std::ws && in.peek() == '#') in.ignore(1 << 20, '\n');
    if (!(in >> v)) throw std::runtime_error("bad PNM header in " + path.string());
    return v;
  };
  const int w = next_int();
  const int h = next_int();
  const int maxval = next_int();
  if (w <= 0 || h <= 0 || maxval != 255) throw std::runtime_error("unsupported PNM header in " + path.string());
  in.get();
  Image out(static_cast<std::size_t>(h), static_cast<std::size_t>(w), magic == "P6" ? 3 : 1);
  if (!in.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(out.size()))) {
    throw std::runtime_error("truncated PNM data in " + path.string());
  }
  return out;
}

}  // namespace

Image load_image(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".png") return load_png(path);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return load_pnm(path);
  throw std::runtime_error("unsupported image format: " + path.string());
}

void save_png(const std::filesystem::path& path, const Image& image) {
  if (image.channels() != 1 && image.channels() != 3) {
    throw std::invalid_argument("save_png: expected 1 or 3 channels");
  }
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = image.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&img, path.c_str(), 0, image.data(), 0, nullptr)) {
    throw std::runtime_error("cannot write PNG " + path.string() + ": " + img.message);
  }
}

}  // namespace msc

#include "msc/tensor_io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace msc {
namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                                 static_cast<char>((v >> 16) & 0xff),
                                 static_cast<char>((v >> 24) & 0xff)};
  out.write(b.data(), 4);
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) {
    throw std::runtime_error("MSCT: truncated header");
  }
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void write_msct(std::ostream& out, const FeatureMap& map) {
  if (map.empty()) throw std::invalid_argument("MSCT: cannot write an empty tensor");
  require_finite(map, "write_msct");
  out.write("MSCT", 4);
  put_u32(out, kMsctVersion);
  put_u32(out, static_cast<std::uint32_t>(map.height()));
  put_u32(out, static_cast<std::uint32_t>(map.width()));
  put_u32(out, static_cast<std::uint32_t>(map.channels()));
  for (double v : map) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  if (!out) throw std::runtime_error("MSCT: write failed");
}

FeatureMap read_msct(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4) || std::memcmp(magic.data(), "MSCT", 4) != 0) {
    throw std::runtime_error("MSCT: bad magic");
  }
  const std::uint32_t version = get_u32(in);
  if (version != kMsctVersion) {
    throw std::runtime_error("MSCT: unsupported version " + std::to_string(version));
  }
  const std::uint32_t h = get_u32(in);
  const std::uint32_t w = get_u32(in);
  const std::uint32_t d = get_u32(in);
  if (h == 0 || w == 0 || d == 0) throw std::runtime_error("MSCT: zero dimension");
  FeatureMap map(h, w, d);
  for (std::size_t i = 0; i < map.size(); ++i) {
    const float f = std::bit_cast<float>(get_u32(in));
    if (!std::isfinite(f)) throw std::runtime_error("MSCT: non-finite value at index " + std::to_string(i));
    map[i] = f;
  }
  return map;
}

void save_msct(const std::filesystem::path& path, const FeatureMap& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_msct(out, map);
}

FeatureMap load_msct(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_msct(in);
}

}  // namespace msc

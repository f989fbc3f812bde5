#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "msc/tensor.hpp"

namespace msc {

// "MSCT" tensor files:
//   bytes 0..3   magic "MSCT"
//   u32 LE       format version (kMsctVersion)
//   u32 LE x 3   H, W, D
//   f32 LE       H*W*D values, row-major, channel-last
inline constexpr std::uint32_t kMsctVersion = 1;

void write_msct(std::ostream& out, const FeatureMap& map);
FeatureMap read_msct(std::istream& in);

void save_msct(const std::filesystem::path& path, const FeatureMap& map);
FeatureMap load_msct(const std::filesystem::path& path);

}  // namespace msc

#pragma once

#include <filesystem>
#include <iosfwd>

#include "ynet/tensor.hpp"

namespace ynet {

// 8-bit binary PPM ("P6", maxval 255). Pixels decode to doubles holding the
// exact integer values 0..255, shape [H,W,3].
Tensor read_ppm(std::istream& is);
Tensor read_ppm(const std::filesystem::path& path);

// Writes [H,W,3]; values are rounded to nearest and clamped to 0..255.
void write_ppm(std::ostream& os, const Tensor& img);
void write_ppm(const std::filesystem::path& path, const Tensor& img);

// Corner-aligned bilinear resize of [H,W,C]. Equal input/output dims return
// the input exactly; constant images stay constant exactly (lerp form
// v0 + t*(v1-v0)).
Tensor resize_bilinear(const Tensor& img, std::size_t out_h, std::size_t out_w);

}  // namespace ynet

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "bvg/image.hpp"

namespace bvg {

/// Writes `bytes` to a temporary file next to `path` and renames it into
/// place, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

/// Affine map between stored gray levels and image values:
/// value = lo + (hi - lo) * level / maxval.
struct PgmMapping {
  double lo = 0.0;
  double hi = 1.0;
};

struct PgmWriteOptions {
  int bit_depth = 8;  ///< 8 or 16
  /// Value range mapped to [0, maxval]. Unset: [0, 1] when the image lies in
  /// it, otherwise [min, max] of the image.
  std::optional<PgmMapping> mapping;
};

/// Binary PGM (P5). Grid metadata and the value mapping are stored in a
/// comment line so bvg can restore them; other readers ignore it.
PgmMapping write_pgm(const std::filesystem::path& path, const Image& img,
                     const PgmWriteOptions& options = {});

struct PgmImage {
  Image image;
  /// Grid came from a bvg comment; otherwise spacing = 1 / max(width, height)
  /// with the first pixel center at (h/2, h/2).
  bool has_grid = false;
  std::optional<PgmMapping> stored_mapping;
};

struct PgmReadOptions {
  /// Undo the stored value mapping instead of normalizing to [0, 1].
  bool restore_values = false;
};

PgmImage read_pgm(const std::filesystem::path& path, const PgmReadOptions& options = {});

/// Raw float format: "BVGF", u32 width, u32 height, f64 spacing, f64 x0,
/// f64 y0, then width * height f64 values, all little-endian.
void write_bvgf(const std::filesystem::path& path, const Image& img);
Image read_bvgf(const std::filesystem::path& path);

/// Reads .bvgf or .pgm by extension (PGM with restored values when available).
Image read_image(const std::filesystem::path& path);

}  // namespace bvg

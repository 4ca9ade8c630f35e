#include "bvg/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

namespace bvg {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[4] = {'B', 'V', 'G', 'F'};
constexpr std::string_view kCommentTag = "# bvg ";

template <typename T>
void put_le(std::string& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    out.push_back(static_cast<char>(bits & 0xffu));
    bits >>= 8;
  }
}

template <typename T>
T get_le(const std::string& in, std::size_t& pos) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bits |= static_cast<U>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  }
  pos += sizeof(U);
  return std::bit_cast<T>(bits);
}

// Parses "key=value" pairs of a bvg comment line.
bool parse_comment(const std::string& line, Grid& grid, PgmMapping& mapping) {
  std::istringstream is(line.substr(kCommentTag.size()));
  std::string tok;
  int found = 0;
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = tok.substr(0, eq);
    double value = 0.0;
    try {
      value = std::stod(tok.substr(eq + 1));
    } catch (const std::exception&) {
      return false;
    }
    if (key == "spacing") grid.spacing = value, ++found;
    else if (key == "x0") grid.x0 = value, ++found;
    else if (key == "y0") grid.y0 = value, ++found;
    else if (key == "lo") mapping.lo = value, ++found;
    else if (key == "hi") mapping.hi = value, ++found;
  }
  return found == 5 && grid.spacing > 0.0 && std::isfinite(grid.spacing);
}

}  // namespace

void write_file_atomic(const fs::path& path, std::string_view bytes) {
  std::random_device rd;
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(rd() % 1000000);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failed: " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move file into place: " + path.string());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PgmMapping write_pgm(const fs::path& path, const Image& img, const PgmWriteOptions& options) {
  if (options.bit_depth != 8 && options.bit_depth != 16) {
    throw InvalidParams("pgm: bit depth must be 8 or 16");
  }
  PgmMapping m;
  if (options.mapping) {
    m = *options.mapping;
  } else if (img.min() < 0.0 || img.max() > 1.0) {
    m = {img.min(), img.max()};
  }
  if (!(m.hi > m.lo)) m.hi = m.lo + 1.0;
  const int maxval = options.bit_depth == 8 ? 255 : 65535;
  const Grid& g = img.grid();

  std::ostringstream head;
  head.precision(17);
  head << "P5\n" << kCommentTag << "spacing=" << g.spacing << " x0=" << g.x0 << " y0=" << g.y0
       << " lo=" << m.lo << " hi=" << m.hi << "\n"
       << g.width << " " << g.height << "\n"
       << maxval << "\n";
  std::string out = head.str();
  const double scale = maxval / (m.hi - m.lo);
  for (std::size_t k = 0; k < img.size(); ++k) {
    const double level = std::clamp(std::round((img[k] - m.lo) * scale), 0.0, double(maxval));
    const auto q = static_cast<unsigned>(level);
    if (maxval > 255) out.push_back(static_cast<char>(q >> 8));
    out.push_back(static_cast<char>(q & 0xffu));
  }
  write_file_atomic(path, out);
  return m;
}

PgmImage read_pgm(const fs::path& path, const PgmReadOptions& options) {
  const std::string data = read_file(path);
  std::size_t pos = 0;
  Grid grid;
  PgmMapping mapping;
  bool has_meta = false;

  // Header tokens, skipping whitespace and comments.
  auto next_token = [&]() -> std::string {
    for (;;) {
      while (pos < data.size() && std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
      if (pos < data.size() && data[pos] == '#') {
        const std::size_t end = data.find('\n', pos);
        const std::string line = data.substr(pos, end == std::string::npos ? end : end - pos);
        if (line.starts_with(kCommentTag) && parse_comment(line, grid, mapping)) has_meta = true;
        pos = end == std::string::npos ? data.size() : end + 1;
        continue;
      }
      break;
    }
    const std::size_t start = pos;
    while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
    return data.substr(start, pos - start);
  };
  auto parse_int = [&](const std::string& tok, const char* what) {
    try {
      std::size_t used = 0;
      const long v = std::stol(tok, &used);
      if (used != tok.size() || v < 1) throw std::invalid_argument(what);
      return v;
    } catch (const std::exception&) {
      throw IoError(path.string() + ": bad PGM " + what + " '" + tok + "'");
    }
  };

  if (next_token() != "P5") throw IoError(path.string() + ": not a binary PGM (P5) file");
  const long w = parse_int(next_token(), "width");
  const long h = parse_int(next_token(), "height");
  const long maxval = parse_int(next_token(), "maxval");
  if (maxval > 65535) throw IoError(path.string() + ": maxval above 65535");
  ++pos;  // single whitespace before the raster
  const std::size_t bytes = maxval > 255 ? 2 : 1;
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (data.size() < pos + n * bytes) throw IoError(path.string() + ": truncated raster");

  grid.width = static_cast<std::size_t>(w);
  grid.height = static_cast<std::size_t>(h);
  if (!has_meta) {
    grid.spacing = 1.0 / static_cast<double>(std::max(w, h));
    grid.x0 = grid.y0 = 0.5 * grid.spacing;
  }
  PgmImage out{Image(grid), has_meta, std::nullopt};
  if (has_meta) out.stored_mapping = mapping;
  const bool restore = options.restore_values && has_meta;
  const double lo = restore ? mapping.lo : 0.0;
  const double span = restore ? mapping.hi - mapping.lo : 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    unsigned level = static_cast<unsigned char>(data[pos + k * bytes]);
    if (bytes == 2) level = (level << 8) | static_cast<unsigned char>(data[pos + k * bytes + 1]);
    out.image[k] = lo + span * static_cast<double>(level) / static_cast<double>(maxval);
  }
  return out;
}

void write_bvgf(const fs::path& path, const Image& img) {
  const Grid& g = img.grid();
  if (g.width > UINT32_MAX || g.height > UINT32_MAX) throw IoError("bvgf: image too large");
  std::string out(kMagic, 4);
  out.reserve(4 + 8 + 24 + 8 * img.size());
  put_le(out, static_cast<std::uint32_t>(g.width));
  put_le(out, static_cast<std::uint32_t>(g.height));
  put_le(out, g.spacing);
  put_le(out, g.x0);
  put_le(out, g.y0);
  for (double v : img.values()) put_le(out, v);
  write_file_atomic(path, out);
}

Image read_bvgf(const fs::path& path) {
  const std::string data = read_file(path);
  if (data.size() < 36 || std::memcmp(data.data(), kMagic, 4) != 0) {
    throw IoError(path.string() + ": not a BVGF file");
  }
  std::size_t pos = 4;
  Grid g;
  g.width = get_le<std::uint32_t>(data, pos);
  g.height = get_le<std::uint32_t>(data, pos);
  g.spacing = get_le<double>(data, pos);
  g.x0 = get_le<double>(data, pos);
  g.y0 = get_le<double>(data, pos);
  try {
    g.validate();
  } catch (const InvalidParams& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  if (data.size() != pos + 8 * g.size()) throw IoError(path.string() + ": wrong payload size");
  Image img(g);
  for (std::size_t k = 0; k < g.size(); ++k) img[k] = get_le<double>(data, pos);
  if (!img.all_finite()) throw IoError(path.string() + ": non-finite values");
  return img;
}

Image read_image(const fs::path& path) {
  if (path.extension() == ".bvgf") return read_bvgf(path);
  return read_pgm(path, {.restore_values = true}).image;
}

}  // namespace bvg

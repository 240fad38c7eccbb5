#include <cmath>
#include <cstring>
#include <sstream>

#include "photoncube/io.hpp"

namespace photoncube {

namespace {

// Parses a Netpbm header: magic followed by `count` integer/float tokens,
// skipping '#' comments. Returns the offset of the first raster byte.
struct NetpbmHeader {
  std::string magic;
  std::vector<std::string> fields;
  std::size_t data_offset = 0;
};

NetpbmHeader parse_netpbm(const std::vector<std::uint8_t>& bytes, std::size_t count,
                          const std::string& what) {
  NetpbmHeader h;
  std::size_t i = 0;
  auto skip_space = [&] {
    while (i < bytes.size()) {
      if (bytes[i] == '#') {
        while (i < bytes.size() && bytes[i] != '\n') ++i;
      } else if (std::isspace(bytes[i])) {
        ++i;
      } else {
        break;
      }
    }
  };
  auto token = [&] {
    skip_space();
    std::string tok;
    while (i < bytes.size() && !std::isspace(bytes[i]) && bytes[i] != '#') tok.push_back(static_cast<char>(bytes[i++]));
    if (tok.empty()) throw FormatError(what + ": truncated header");
    return tok;
  };
  h.magic = token();
  for (std::size_t k = 0; k < count; ++k) h.fields.push_back(token());
  // Exactly one whitespace byte separates the header from the raster.
  if (i >= bytes.size() || !std::isspace(bytes[i])) throw FormatError(what + ": malformed header");
  h.data_offset = i + 1;
  return h;
}

std::size_t parse_dim(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &pos);
  } catch (const std::exception&) {
    throw FormatError(what + ": bad dimension '" + s + "'");
  }
  if (pos != s.size() || v == 0) throw FormatError(what + ": bad dimension '" + s + "'");
  return v;
}

std::vector<std::uint8_t> header_bytes(const std::string& text) {
  return std::vector<std::uint8_t>(text.begin(), text.end());
}

}  // namespace

void write_pgm16(const std::filesystem::path& path, const Grid<double>& image, double scale) {
  std::ostringstream head;
  head << "P5\n# scale=" << scale << "\n" << image.width() << " " << image.height() << "\n65535\n";
  auto out = header_bytes(head.str());
  out.reserve(out.size() + image.size() * 2);
  for (double v : image.values()) {
    double q = std::isfinite(v) ? std::nearbyint(v * scale) : (v > 0 ? 65535.0 : 0.0);
    q = std::clamp(q, 0.0, 65535.0);
    const auto s = static_cast<std::uint16_t>(q);
    out.push_back(static_cast<std::uint8_t>(s >> 8));
    out.push_back(static_cast<std::uint8_t>(s & 0xff));
  }
  detail::write_file(path, out);
}

Grid<std::uint16_t> read_pgm16(const std::filesystem::path& path) {
  const auto bytes = detail::read_file(path);
  const auto h = parse_netpbm(bytes, 3, "pgm");
  if (h.magic != "P5") throw FormatError("pgm: expected P5");
  const std::size_t w = parse_dim(h.fields[0], "pgm");
  const std::size_t ht = parse_dim(h.fields[1], "pgm");
  if (h.fields[2] != "65535") throw FormatError("pgm: only 16-bit (maxval 65535) is supported");
  if (bytes.size() - h.data_offset != w * ht * 2) throw FormatError("pgm: raster size mismatch");
  Grid<std::uint16_t> out(ht, w);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto* p = bytes.data() + h.data_offset + 2 * i;
    out[i] = static_cast<std::uint16_t>((p[0] << 8) | p[1]);
  }
  return out;
}

void write_pfm(const std::filesystem::path& path, const Grid<double>& image) {
  std::ostringstream head;
  head << "Pf\n" << image.width() << " " << image.height() << "\n-1.0\n";
  auto out = header_bytes(head.str());
  out.reserve(out.size() + image.size() * 4);
  for (std::size_t row = image.height(); row-- > 0;) {
    for (std::size_t x = 0; x < image.width(); ++x) {
      detail::put_f32(out, static_cast<float>(image(row, x)));
    }
  }
  detail::write_file(path, out);
}

Grid<float> read_pfm(const std::filesystem::path& path) {
  const auto bytes = detail::read_file(path);
  const auto h = parse_netpbm(bytes, 3, "pfm");
  if (h.magic != "Pf") throw FormatError("pfm: only grayscale Pf is supported");
  const std::size_t w = parse_dim(h.fields[0], "pfm");
  const std::size_t ht = parse_dim(h.fields[1], "pfm");
  const double scale = std::stod(h.fields[2]);
  if (scale >= 0.0) throw FormatError("pfm: big-endian files are not supported");
  if (bytes.size() - h.data_offset != w * ht * 4) throw FormatError("pfm: raster size mismatch");
  Grid<float> out(ht, w);
  std::size_t i = 0;
  for (std::size_t row = ht; row-- > 0;) {
    for (std::size_t x = 0; x < w; ++x, ++i) {
      out(row, x) = detail::get_f32(bytes.data() + h.data_offset + 4 * i);
    }
  }
  return out;
}

void write_pbm(const std::filesystem::path& path, const BinaryMask& mask) {
  std::ostringstream head;
  head << "P4\n" << mask.width() << " " << mask.height() << "\n";
  auto out = header_bytes(head.str());
  const std::size_t rb = packed_row_bytes(mask.width());
  for (std::size_t y = 0; y < mask.height(); ++y) {
    std::vector<std::uint8_t> row(rb, 0);
    for (std::size_t x = 0; x < mask.width(); ++x) {
      if (mask(y, x)) row[x / 8] |= static_cast<std::uint8_t>(0x80u >> (x % 8));
    }
    out.insert(out.end(), row.begin(), row.end());
  }
  detail::write_file(path, out);
}

BinaryMask read_pbm(const std::filesystem::path& path) {
  const auto bytes = detail::read_file(path);
  const auto h = parse_netpbm(bytes, 2, "pbm");
  if (h.magic != "P4") throw FormatError("pbm: expected P4");
  const std::size_t w = parse_dim(h.fields[0], "pbm");
  const std::size_t ht = parse_dim(h.fields[1], "pbm");
  const std::size_t rb = packed_row_bytes(w);
  if (bytes.size() - h.data_offset != rb * ht) throw FormatError("pbm: raster size mismatch");
  BinaryMask out(ht, w, 0);
  for (std::size_t y = 0; y < ht; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      out(y, x) = (bytes[h.data_offset + y * rb + x / 8] >> (7 - x % 8)) & 1u;
    }
  }
  return out;
}

}  // namespace photoncube

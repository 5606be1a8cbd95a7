#include "svrc/pgm.hpp"

#include <cctype>
#include <fstream>

namespace svrc {
namespace {

// Reads the next whitespace-delimited header token, skipping '#' comments.
// Returns false at end of input.
bool next_token(const std::vector<std::uint8_t>& bytes, std::size_t& pos, std::string& tok) {
  tok.clear();
  while (pos < bytes.size()) {
    char c = static_cast<char>(bytes[pos]);
    if (c == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
    } else {
      break;
    }
  }
  while (pos < bytes.size()) {
    char c = static_cast<char>(bytes[pos]);
    if (std::isspace(static_cast<unsigned char>(c)) || c == '#') break;
    tok.push_back(c);
    ++pos;
  }
  return !tok.empty();
}

long parse_positive(const std::string& tok, const char* what) {
  for (char c : tok) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      fail(ErrorCode::UnsupportedFormat, std::string("PGM header: bad ") + what + " '" + tok + "'");
  }
  long v = std::strtol(tok.c_str(), nullptr, 10);
  if (v <= 0) fail(ErrorCode::UnsupportedFormat, std::string("PGM header: nonpositive ") + what);
  return v;
}

}  // namespace

GrayImage load_pgm(const std::vector<std::uint8_t>& bytes) {
  std::size_t pos = 0;
  std::string tok;
  if (!next_token(bytes, pos, tok)) fail(ErrorCode::Truncated, "empty PGM stream");
  if (tok != "P5") fail(ErrorCode::UnsupportedFormat, "not a binary PGM (magic '" + tok + "', want P5)");

  std::string wtok, htok, mtok;
  if (!next_token(bytes, pos, wtok) || !next_token(bytes, pos, htok) || !next_token(bytes, pos, mtok))
    fail(ErrorCode::Truncated, "PGM header ends early");
  long w = parse_positive(wtok, "width");
  long h = parse_positive(htok, "height");
  long maxval = parse_positive(mtok, "maxval");
  if (maxval != 255) fail(ErrorCode::UnsupportedFormat, "PGM maxval must be 255, got " + mtok);

  // exactly one whitespace byte separates the header from the payload
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos])))
    fail(ErrorCode::Truncated, "PGM payload missing");
  ++pos;

  GrayImage img;
  img.width = static_cast<int>(w);
  img.height = static_cast<int>(h);
  std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (bytes.size() - pos < need)
    fail(ErrorCode::Truncated, "PGM payload shorter than header promises");
  img.samples.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                     bytes.begin() + static_cast<std::ptrdiff_t>(pos + need));
  return img;
}

GrayImage load_pgm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return load_pgm(bytes);
}

std::vector<std::uint8_t> save_pgm(const GrayImage& img) {
  if (img.width < 1 || img.height < 1 || img.samples.size() != img.pixel_count())
    fail(ErrorCode::DimensionMismatch, "inconsistent image dimensions");
  std::string header = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.samples.begin(), img.samples.end());
  return out;
}

void save_pgm_file(const GrayImage& img, const std::string& path) {
  auto bytes = save_pgm(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::IoError, "short write to " + path);
}

}  // namespace svrc

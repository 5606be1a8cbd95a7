#pragma once

#include <cstdint>
#include <vector>

#include "svrc/common.hpp"
#include "svrc/csf.hpp"
#include "svrc/normalization.hpp"

namespace svrc {

enum class MethodId : std::uint8_t {
  kRki1 = 0,         // low-pass DCT domain, coefficients above 20 cpd discarded
  kCsfSvr = 1,       // DCT domain, eps_f = eps0*scale / csf(f)
  kNlSvr = 2,        // divisively normalized domain, constant eps
  kJpegBaseline = 3  // comparison baseline only, never in a bitstream
};

const char* method_name(MethodId m);
MethodId method_from_name(const std::string& name);  // "rki1", "csf-svr", "nl-svr", "jpeg"

/// Per-coefficient insensitivities and the set of coefficients handed to the
/// SVR. DC is never active; RKi-1 also drops cells above 20 cpd.
struct EpsProfile {
  std::array<double, kBlockCells> eps{};
  std::array<bool, kBlockCells> active{};

  std::vector<int> active_cells() const;
};

EpsProfile build_eps_profile(MethodId method, double eps0, double scale,
                             const ViewingGeometry& view = {});

inline constexpr double kRki1CutoffCpd = 20.0;
inline constexpr double kSignThreshold = 1e-3;

struct EncodeSettings {
  MethodId method = MethodId::kNlSvr;
  double eps0 = 0.02;
  double scale = 1.0;
  double sigma = 0.025;
  int quant_bits = 5;
  double penalty = 1e6;
};

/// One coded 16x16 block: DC level, support cells (ascending), quantized
/// weights with their per-block scale, and sign bits for every cell whose
/// reconstructed magnitude clears kSignThreshold.
struct BlockRecord {
  int dc_symbol = 0;
  std::uint16_t wscale_q = 0;  // w_max in 1/1024 units
  std::vector<int> cells;
  std::vector<int> weight_symbols;
  std::vector<int> sign_bits;

  double w_max() const { return wscale_q / 1024.0; }
};

struct Bitstream {
  std::uint8_t version = 1;
  MethodId method = MethodId::kNlSvr;
  int width = 0;
  int height = 0;
  float eps0 = 0.0f;
  float scale = 0.0f;
  float sigma = 0.0f;
  std::uint8_t quant_bits = 5;
  std::uint64_t param_digest = 0;
  float dc_min = 0.0f;
  float dc_max = 0.0f;
  std::vector<BlockRecord> blocks;

  std::size_t support_vector_count() const;
};

/// Encodes an image with one of the three SVR methods. Throws
/// InvalidArgument for the JPEG baseline and propagates NoConvergence with
/// the failing block's coordinates attached.
Bitstream encode_image(const GrayImage& img, const EncodeSettings& settings, const NormParams& p);

GrayImage decode_image(const Bitstream& bits, const NormParams& p);

/// Decode variant that also returns the reconstructed coefficient blocks
/// (the DCT-domain values fed to the inverse transform).
struct DecodedDetail {
  GrayImage image;
  std::vector<Block> coeff_blocks;
};
DecodedDetail decode_image_detail(const Bitstream& bits, const NormParams& p);

/// Little-endian wire format: "SVRC", version, method, dimensions, settings,
/// parameter digest, DC range, per-stream symbol counts, then one
/// range-coded payload holding the six symbol streams.
std::vector<std::uint8_t> serialize(const Bitstream& bits);

/// Parses and entropy-decodes a bitstream. NormParams are needed to lay the
/// sign bits out over blocks (the split follows the predicted magnitudes).
/// Throws BadMagic, VersionMismatch, ParamDigestMismatch, CorruptPayload.
Bitstream parse(const std::vector<std::uint8_t>& bytes, const NormParams& p);

std::vector<std::uint8_t> encode_to_bytes(const GrayImage& img, const EncodeSettings& settings,
                                          const NormParams& p);
GrayImage decode_from_bytes(const std::vector<std::uint8_t>& bytes, const NormParams& p);

double bits_per_pixel(std::size_t byte_count, const GrayImage& img);

}  // namespace svrc

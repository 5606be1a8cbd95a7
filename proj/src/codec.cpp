#include "svrc/codec.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "svrc/blocks.hpp"
#include "svrc/dct.hpp"
#include "svrc/quantize.hpp"
#include "svrc/range_coder.hpp"
#include "svrc/svr.hpp"

namespace svrc {

namespace {

constexpr char kMagic[4] = {'S', 'V', 'R', 'C'};
constexpr std::uint8_t kVersion = 1;

Position cell_position(int cell) {
  return {(cell / kBlockSize) / 15.0, (cell % kBlockSize) / 15.0};
}

int position_cell(const Position& pos) {
  return static_cast<int>(std::lround(pos[0] * 15.0)) * kBlockSize +
         static_cast<int>(std::lround(pos[1] * 15.0));
}

// Reconstructed magnitudes at every active cell, from the transmitted
// (dequantized) weights. Encoder, parser and decoder all call this with the
// same inputs so the sign-bit layout is identical on both sides.
std::vector<double> predict_magnitudes(const std::vector<int>& sv_cells,
                                       const std::vector<double>& weights, double sigma,
                                       const std::vector<int>& active) {
  std::vector<double> out(active.size(), 0.0);
  for (std::size_t q = 0; q < active.size(); ++q) {
    Position x = cell_position(active[q]);
    double acc = 0.0;
    for (std::size_t k = 0; k < sv_cells.size(); ++k)
      acc += weights[k] * rbf_kernel(cell_position(sv_cells[k]), x, sigma);
    out[q] = acc < 0.0 ? 0.0 : acc;
  }
  return out;
}

struct Streams {
  std::vector<int> dc, count, gap, wscale, weight, sign;
};

Streams collect_streams(const Bitstream& bits) {
  Streams s;
  for (const auto& b : bits.blocks) {
    s.dc.push_back(b.dc_symbol);
    s.count.push_back(static_cast<int>(b.cells.size()));
    int prev = -1;
    for (int c : b.cells) {
      s.gap.push_back(c - prev - 1);
      prev = c;
    }
    s.wscale.push_back(b.wscale_q >> 8);
    s.wscale.push_back(b.wscale_q & 0xff);
    s.weight.insert(s.weight.end(), b.weight_symbols.begin(), b.weight_symbols.end());
    s.sign.insert(s.sign.end(), b.sign_bits.begin(), b.sign_bits.end());
  }
  return s;
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(v & 0xff);
  out.push_back(v >> 8);
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back((v >> (8 * k)) & 0xff);
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int k = 0; k < 8; ++k) out.push_back((v >> (8 * k)) & 0xff);
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

struct Reader {
  const std::vector<std::uint8_t>& bytes;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > bytes.size()) fail(ErrorCode::CorruptPayload, "bitstream ends early");
  }
  std::uint8_t u8() {
    need(1);
    return bytes[pos++];
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = bytes[pos] | (bytes[pos + 1] << 8);
    pos += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(bytes[pos + k]) << (8 * k);
    pos += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(bytes[pos + k]) << (8 * k);
    pos += 8;
    return v;
  }
  float f32() {
    std::uint32_t b = u32();
    float v;
    std::memcpy(&v, &b, 4);
    return v;
  }
};

int grid_blocks(int width, int height) {
  return ((width + kBlockSize - 1) / kBlockSize) * ((height + kBlockSize - 1) / kBlockSize);
}

double dequant_dc(int symbol, float dc_min, float dc_max) {
  if (dc_max <= dc_min) return dc_min;
  return static_cast<double>(dc_min) +
         symbol * (static_cast<double>(dc_max) - static_cast<double>(dc_min)) / 255.0;
}

}  // namespace

const char* method_name(MethodId m) {
  switch (m) {
    case MethodId::kRki1: return "rki1";
    case MethodId::kCsfSvr: return "csf-svr";
    case MethodId::kNlSvr: return "nl-svr";
    case MethodId::kJpegBaseline: return "jpeg";
  }
  return "?";
}

MethodId method_from_name(const std::string& name) {
  if (name == "rki1") return MethodId::kRki1;
  if (name == "csf-svr") return MethodId::kCsfSvr;
  if (name == "nl-svr") return MethodId::kNlSvr;
  if (name == "jpeg") return MethodId::kJpegBaseline;
  fail(ErrorCode::InvalidArgument, "unknown method '" + name + "'");
}

std::vector<int> EpsProfile::active_cells() const {
  std::vector<int> cells;
  for (int c = 0; c < kBlockCells; ++c)
    if (active[c]) cells.push_back(c);
  return cells;
}

EpsProfile build_eps_profile(MethodId method, double eps0, double scale, const ViewingGeometry& view) {
  if (eps0 <= 0.0 || scale <= 0.0) fail(ErrorCode::InvalidArgument, "eps0 and scale must be positive");
  if (method == MethodId::kJpegBaseline)
    fail(ErrorCode::InvalidArgument, "the JPEG baseline has no eps profile");

  EpsProfile p;
  for (int i = 0; i < kBlockSize; ++i) {
    for (int j = 0; j < kBlockSize; ++j) {
      int cell = i * kBlockSize + j;
      if (cell == 0) continue;  // DC is bypassed
      double f = coeff_frequency(i, j, view);
      switch (method) {
        case MethodId::kRki1:
          if (f <= kRki1CutoffCpd) {
            p.active[cell] = true;
            p.eps[cell] = eps0 * scale;
          }
          break;
        case MethodId::kCsfSvr:
          p.active[cell] = true;
          p.eps[cell] = eps0 * scale / csf_weight(f);
          break;
        case MethodId::kNlSvr:
          p.active[cell] = true;
          p.eps[cell] = eps0 * scale;
          break;
        case MethodId::kJpegBaseline:
          break;
      }
    }
  }
  return p;
}

std::size_t Bitstream::support_vector_count() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.cells.size();
  return n;
}

Bitstream encode_image(const GrayImage& img, const EncodeSettings& settings, const NormParams& p) {
  if (settings.method == MethodId::kJpegBaseline)
    fail(ErrorCode::InvalidArgument, "encode_image handles the SVR methods; use jpeg_baseline()");
  if (img.width > 0xffff || img.height > 0xffff)
    fail(ErrorCode::InvalidArgument, "image dimensions exceed the 16-bit header fields");
  if (settings.quant_bits < 2 || settings.quant_bits > 8)
    fail(ErrorCode::InvalidArgument, "quantizer bits must be in [2, 8]");

  Bitstream bits;
  bits.method = settings.method;
  bits.width = img.width;
  bits.height = img.height;
  bits.eps0 = static_cast<float>(settings.eps0);
  bits.scale = static_cast<float>(settings.scale);
  bits.sigma = static_cast<float>(settings.sigma);
  bits.quant_bits = static_cast<std::uint8_t>(settings.quant_bits);
  bits.param_digest = p.digest();

  // all float-carried settings are used at float precision on both sides
  const double sigma = static_cast<double>(bits.sigma);
  const double eps0 = static_cast<double>(bits.eps0);
  const double scale = static_cast<double>(bits.scale);

  EpsProfile profile = build_eps_profile(settings.method, eps0, scale, p.view);
  const std::vector<int> active = profile.active_cells();

  TrainingSet ts;
  ts.inputs.reserve(active.size());
  for (int c : active) ts.inputs.push_back(cell_position(c));
  ts.targets.resize(active.size());
  ts.eps.resize(active.size());
  for (std::size_t k = 0; k < active.size(); ++k) ts.eps[k] = profile.eps[active[k]];

  BlockGrid grid = tile_blocks(img);
  const bool perceptual = settings.method == MethodId::kNlSvr;
  std::vector<double> dc_values(grid.blocks.size(), 0.0);

  for (std::size_t b = 0; b < grid.blocks.size(); ++b) {
    Block y = dct2_forward(grid.blocks[b]);
    Block dom = perceptual ? normalize_forward(y, p) : y;
    dc_values[b] = dom[0];

    for (std::size_t k = 0; k < active.size(); ++k) ts.targets[k] = std::abs(dom[active[k]]);

    SvrModel model;
    try {
      model = fit_svr(ts, sigma, settings.penalty);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoConvergence) throw;
      fail(ErrorCode::NoConvergence,
           "block (" + std::to_string(b % grid.cols) + ", " + std::to_string(b / grid.cols) +
               "): " + e.what());
    }

    BlockRecord rec;
    double w_max = 0.0;
    std::vector<double> raw_weights;
    for (const auto& sv : model.support) {
      rec.cells.push_back(position_cell(sv.input));
      raw_weights.push_back(sv.weight);
      w_max = std::max(w_max, std::abs(sv.weight));
    }
    rec.wscale_q = static_cast<std::uint16_t>(std::min(65535.0, std::round(w_max * 1024.0)));
    if (rec.wscale_q == 0) {
      // weights too small to survive the 16-bit scale; the support set would
      // dequantize to all zeros, so drop it
      rec.cells.clear();
      raw_weights.clear();
    }

    QuantizerSpec q{settings.quant_bits, rec.w_max()};
    rec.weight_symbols = quantize_weights(raw_weights, q);
    std::vector<double> w_deq = dequantize_weights(rec.weight_symbols, q);

    std::vector<double> mhat = predict_magnitudes(rec.cells, w_deq, sigma, active);
    for (std::size_t k = 0; k < active.size(); ++k)
      if (mhat[k] > kSignThreshold) rec.sign_bits.push_back(dom[active[k]] < 0.0 ? 1 : 0);

    bits.blocks.push_back(std::move(rec));
  }

  auto [mn, mx] = std::minmax_element(dc_values.begin(), dc_values.end());
  bits.dc_min = static_cast<float>(*mn);
  bits.dc_max = static_cast<float>(*mx);
  double span = static_cast<double>(bits.dc_max) - static_cast<double>(bits.dc_min);
  for (std::size_t b = 0; b < dc_values.size(); ++b) {
    int sym = 0;
    if (span > 0.0)
      sym = std::clamp(
          static_cast<int>(std::lround((dc_values[b] - static_cast<double>(bits.dc_min)) / span * 255.0)),
          0, 255);
    bits.blocks[b].dc_symbol = sym;
  }
  return bits;
}

std::vector<std::uint8_t> serialize(const Bitstream& bits) {
  Streams s = collect_streams(bits);

  std::vector<std::uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(bits.version);
  out.push_back(static_cast<std::uint8_t>(bits.method));
  put_u16(out, static_cast<std::uint16_t>(bits.width));
  put_u16(out, static_cast<std::uint16_t>(bits.height));
  put_f32(out, bits.eps0);
  put_f32(out, bits.scale);
  put_f32(out, bits.sigma);
  out.push_back(bits.quant_bits);
  put_u64(out, bits.param_digest);
  put_f32(out, bits.dc_min);
  put_f32(out, bits.dc_max);

  for (const auto* stream : {&s.dc, &s.count, &s.gap, &s.wscale, &s.weight, &s.sign})
    put_u32(out, static_cast<std::uint32_t>(stream->size()));

  RangeEncoder enc;
  AdaptiveModel dc_model(256), count_model(256), gap_model(256), wscale_model(256),
      weight_model(1 << bits.quant_bits), sign_model(2);
  for (int v : s.dc) dc_model.encode(enc, v);
  for (int v : s.count) count_model.encode(enc, v);
  for (int v : s.gap) gap_model.encode(enc, v);
  for (int v : s.wscale) wscale_model.encode(enc, v);
  for (int v : s.weight) weight_model.encode(enc, v);
  for (int v : s.sign) sign_model.encode(enc, v);
  auto payload = enc.finish();
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

Bitstream parse(const std::vector<std::uint8_t>& bytes, const NormParams& p) {
  Reader rd{bytes};
  rd.need(4);
  if (std::memcmp(bytes.data(), kMagic, 4) != 0)
    fail(ErrorCode::BadMagic, "not an SVRC bitstream");
  rd.pos = 4;

  Bitstream bits;
  bits.version = rd.u8();
  if (bits.version != kVersion)
    fail(ErrorCode::VersionMismatch, "bitstream version " + std::to_string(bits.version) +
                                         ", decoder speaks " + std::to_string(kVersion));
  std::uint8_t method = rd.u8();
  if (method > 2) fail(ErrorCode::CorruptPayload, "invalid method id");
  bits.method = static_cast<MethodId>(method);
  bits.width = rd.u16();
  bits.height = rd.u16();
  if (bits.width < 1 || bits.height < 1) fail(ErrorCode::CorruptPayload, "invalid dimensions");
  bits.eps0 = rd.f32();
  bits.scale = rd.f32();
  bits.sigma = rd.f32();
  bits.quant_bits = rd.u8();
  if (bits.quant_bits < 2 || bits.quant_bits > 8)
    fail(ErrorCode::CorruptPayload, "invalid quantizer bits");
  bits.param_digest = rd.u64();
  if (bits.param_digest != p.digest())
    fail(ErrorCode::ParamDigestMismatch, "bitstream was coded with different normalization parameters");
  bits.dc_min = rd.f32();
  bits.dc_max = rd.f32();

  std::uint32_t n_dc = rd.u32(), n_count = rd.u32(), n_gap = rd.u32(), n_wscale = rd.u32(),
                n_weight = rd.u32(), n_sign = rd.u32();
  const std::size_t nblocks = static_cast<std::size_t>(grid_blocks(bits.width, bits.height));
  if (n_dc != nblocks || n_count != nblocks || n_wscale != 2 * nblocks)
    fail(ErrorCode::CorruptPayload, "stream directory does not match image dimensions");

  RangeDecoder dec(bytes.data() + rd.pos, bytes.data() + bytes.size());
  AdaptiveModel dc_model(256), count_model(256), gap_model(256), wscale_model(256),
      weight_model(1 << bits.quant_bits), sign_model(2);
  std::vector<int> dc(n_dc), count(n_count), gap(n_gap), wscale(n_wscale), weight(n_weight),
      sign(n_sign);
  for (auto& v : dc) v = dc_model.decode(dec);
  for (auto& v : count) v = count_model.decode(dec);
  for (auto& v : gap) v = gap_model.decode(dec);
  for (auto& v : wscale) v = wscale_model.decode(dec);
  for (auto& v : weight) v = weight_model.decode(dec);
  for (auto& v : sign) v = sign_model.decode(dec);

  EpsProfile profile = build_eps_profile(bits.method, 1.0, 1.0, p.view);
  const std::vector<int> active = profile.active_cells();
  const double sigma = static_cast<double>(bits.sigma);

  std::size_t gi = 0, wi = 0, si = 0;
  std::size_t total_sv = 0;
  for (std::size_t b = 0; b < nblocks; ++b) {
    BlockRecord rec;
    rec.dc_symbol = dc[b];
    int n = count[b];
    total_sv += static_cast<std::size_t>(n);
    rec.wscale_q = static_cast<std::uint16_t>((wscale[2 * b] << 8) | wscale[2 * b + 1]);

    if (gi + static_cast<std::size_t>(n) > gap.size() || wi + static_cast<std::size_t>(n) > weight.size())
      fail(ErrorCode::CorruptPayload, "support records exceed stream directory");
    int prev = -1;
    for (int k = 0; k < n; ++k) {
      int cell = prev + 1 + gap[gi++];
      if (cell >= kBlockCells) fail(ErrorCode::CorruptPayload, "support position beyond block");
      if (!profile.active[cell]) fail(ErrorCode::CorruptPayload, "support position outside active set");
      rec.cells.push_back(cell);
      prev = cell;
    }
    for (int k = 0; k < n; ++k) rec.weight_symbols.push_back(weight[wi++]);

    QuantizerSpec q{bits.quant_bits, rec.w_max()};
    std::vector<double> w_deq = dequantize_weights(rec.weight_symbols, q);
    std::vector<double> mhat = predict_magnitudes(rec.cells, w_deq, sigma, active);
    for (double m : mhat)
      if (m > kSignThreshold) {
        if (si >= sign.size()) fail(ErrorCode::CorruptPayload, "sign bits exhausted");
        rec.sign_bits.push_back(sign[si++]);
      }
    bits.blocks.push_back(std::move(rec));
  }
  if (gi != gap.size() || wi != weight.size() || si != sign.size())
    fail(ErrorCode::CorruptPayload, "stream directory does not match decoded records");
  if (total_sv != gap.size()) fail(ErrorCode::CorruptPayload, "gap stream length mismatch");
  return bits;
}

DecodedDetail decode_image_detail(const Bitstream& bits, const NormParams& p) {
  if (bits.param_digest != p.digest())
    fail(ErrorCode::ParamDigestMismatch, "bitstream was coded with different normalization parameters");
  if (bits.method == MethodId::kJpegBaseline) fail(ErrorCode::CorruptPayload, "invalid method id");

  EpsProfile profile = build_eps_profile(bits.method, 1.0, 1.0, p.view);
  const std::vector<int> active = profile.active_cells();
  const double sigma = static_cast<double>(bits.sigma);
  const bool perceptual = bits.method == MethodId::kNlSvr;

  BlockGrid grid;
  grid.orig_width = bits.width;
  grid.orig_height = bits.height;
  grid.cols = (bits.width + kBlockSize - 1) / kBlockSize;
  grid.rows = (bits.height + kBlockSize - 1) / kBlockSize;
  if (bits.blocks.size() != static_cast<std::size_t>(grid.cols) * grid.rows)
    fail(ErrorCode::CorruptPayload, "block record count does not match dimensions");

  DecodedDetail detail;
  detail.coeff_blocks.reserve(bits.blocks.size());
  grid.blocks.reserve(bits.blocks.size());

  for (const auto& rec : bits.blocks) {
    QuantizerSpec q{bits.quant_bits, rec.w_max()};
    std::vector<double> w_deq = dequantize_weights(rec.weight_symbols, q);
    std::vector<double> mhat = predict_magnitudes(rec.cells, w_deq, sigma, active);

    Block dom{};
    std::size_t si = 0;
    for (std::size_t k = 0; k < active.size(); ++k) {
      if (mhat[k] > kSignThreshold) {
        if (si >= rec.sign_bits.size()) fail(ErrorCode::CorruptPayload, "sign bits exhausted");
        dom[active[k]] = rec.sign_bits[si++] ? -mhat[k] : mhat[k];
      }
    }
    if (si != rec.sign_bits.size()) fail(ErrorCode::CorruptPayload, "unused sign bits in block");
    dom[0] = dequant_dc(rec.dc_symbol, bits.dc_min, bits.dc_max);

    Block y = perceptual ? normalize_inverse(dom, p) : dom;
    detail.coeff_blocks.push_back(y);
    grid.blocks.push_back(dct2_inverse(y));
  }
  detail.image = assemble_blocks(grid);
  return detail;
}

GrayImage decode_image(const Bitstream& bits, const NormParams& p) {
  return decode_image_detail(bits, p).image;
}

std::vector<std::uint8_t> encode_to_bytes(const GrayImage& img, const EncodeSettings& settings,
                                          const NormParams& p) {
  return serialize(encode_image(img, settings, p));
}

GrayImage decode_from_bytes(const std::vector<std::uint8_t>& bytes, const NormParams& p) {
  return decode_image(parse(bytes, p), p);
}

double bits_per_pixel(std::size_t byte_count, const GrayImage& img) {
  return static_cast<double>(byte_count) * 8.0 / static_cast<double>(img.pixel_count());
}

}  // namespace svrc

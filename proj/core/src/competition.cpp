/*
 * Copyright 2026 The scmc authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "scmc/competition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scmc/bitio.hpp"
#include "scmc/range_coder.hpp"
#include "scmc/threading.hpp"

namespace scmc {

PatchGrid PatchGrid::make(int image_h, int image_w, int patch) {
  if (image_h < 1 || image_w < 1) throw std::invalid_argument("grid: empty image");
  if (patch < 4 || patch % 4 != 0)
    throw std::invalid_argument("grid: patch size must be a positive multiple of 4");
  PatchGrid g;
  g.image_h = image_h;
  g.image_w = image_w;
  g.patch = patch;
  g.rows = (image_h + patch - 1) / patch;
  g.cols = (image_w + patch - 1) / patch;
  return g;
}

int mode_index_bits(int mode_count) {
  if (mode_count < 1) throw std::invalid_argument("mode_index_bits: mode count must be >= 1");
  int bits = 0;
  while ((1 << bits) < mode_count) ++bits;
  return bits;
}

double mode_map_rate_bpp(const PatchGrid& grid, int mode_count) {
  const double bits = static_cast<double>(grid.count()) * mode_index_bits(mode_count);
  return bits / (static_cast<double>(grid.image_h) * grid.image_w);
}

Tensor4 extract_patch(const Image& img, const PatchGrid& grid, int k) {
  const int P = grid.patch;
  const int y0 = grid.row_of(k) * P;
  const int x0 = grid.col_of(k) * P;
  Tensor4 t(1, 3, P, P);
  for (int c = 0; c < 3; ++c) {
    float* dst = t.plane(0, c);
    for (int y = 0; y < P; ++y) {
      const int sy = std::min(y0 + y, grid.image_h - 1);  // replicate padding
      for (int x = 0; x < P; ++x) {
        const int sx = std::min(x0 + x, grid.image_w - 1);
        dst[static_cast<size_t>(y) * P + x] = img.at(c, sy, sx);
      }
    }
  }
  return t;
}

std::vector<Tensor4> partition(const Image& img, int patch, PatchGrid* grid_out) {
  const PatchGrid grid = PatchGrid::make(img.h, img.w, patch);
  std::vector<Tensor4> patches;
  patches.reserve(grid.count());
  for (int k = 0; k < grid.count(); ++k) patches.push_back(extract_patch(img, grid, k));
  if (grid_out) *grid_out = grid;
  return patches;
}

void place_patch(Image& img, const PatchGrid& grid, int k, const Tensor4& patch) {
  const int P = grid.patch;
  if (patch.n != 1 || patch.c != 3 || patch.h != P || patch.w != P)
    throw std::invalid_argument("place_patch: patch shape mismatch");
  const int y0 = grid.row_of(k) * P;
  const int x0 = grid.col_of(k) * P;
  const int ylim = std::min(P, grid.image_h - y0);
  const int xlim = std::min(P, grid.image_w - x0);
  for (int c = 0; c < 3; ++c) {
    const float* src = patch.plane(0, c);
    for (int y = 0; y < ylim; ++y) {
      for (int x = 0; x < xlim; ++x) {
        img.at(c, y0 + y, x0 + x) = src[static_cast<size_t>(y) * P + x];
      }
    }
  }
}

Image assemble(const PatchGrid& grid, const std::vector<Tensor4>& patches) {
  if (static_cast<int>(patches.size()) != grid.count())
    throw std::invalid_argument("assemble: patch count mismatch");
  Image img(grid.image_h, grid.image_w);
  for (int k = 0; k < grid.count(); ++k) place_patch(img, grid, k, patches[k]);
  return img;
}

SelectionResult select_modes(const Image& img, CodecBundle& bundle, int patch_size,
                             int threads) {
  bundle.validate();
  const PatchGrid grid = PatchGrid::make(img.h, img.w, patch_size);
  const int m_count = bundle.mode_count();
  SelectionResult result;
  result.mode_map.grid = grid;
  result.mode_map.modes.assign(grid.count(), 0);
  result.chosen.assign(grid.count(), {});
  result.all.assign(grid.count(), std::vector<RDStats>(m_count));

  parallel_for(grid.count(), threads, [&](size_t k) {
    const Tensor4 patch = extract_patch(img, grid, static_cast<int>(k));
    int best = 0;
    for (int m = 0; m < m_count; ++m) {
      const RDStats stats = bundle.codecs[m].evaluate_rd(patch, bundle.lambda);
      result.all[k][m] = stats;
      if (stats.loss < result.all[k][best].loss) best = m;  // ties keep lowest index
    }
    result.mode_map.modes[k] = static_cast<uint16_t>(best);
    result.chosen[k] = result.all[k][best];
  });
  for (const auto& stats : result.chosen) result.total_selected_loss += stats.loss;
  return result;
}

namespace {

std::vector<std::vector<CdfTable>> build_coder_tables(const CodecBundle& bundle) {
  std::vector<std::vector<CdfTable>> tables(bundle.mode_count());
  for (int m = 0; m < bundle.mode_count(); ++m) {
    const auto& scales = bundle.codecs[m].log_scales();
    tables[m].reserve(scales.size());
    for (float ls : scales) tables[m].push_back(build_cdf(sigma_from_log_scale(ls)));
  }
  return tables;
}

std::vector<uint8_t> pack_mode_map(const ModeMap& map, int mode_count) {
  const int bits = mode_index_bits(mode_count);
  if (bits == 0) return {};
  BitWriter bw;
  for (uint16_t m : map.modes) bw.put(m, bits);
  return bw.finish();
}

size_t mode_map_byte_size(int patch_count, int mode_count) {
  const int bits = mode_index_bits(mode_count);
  return (static_cast<size_t>(patch_count) * bits + 7) / 8;
}

}  // namespace

EncodeResult encode_image(const Image& img, CodecBundle& bundle, int patch_size,
                          int threads) {
  bundle.validate();
  SelectionResult selection = select_modes(img, bundle, patch_size, threads);
  const PatchGrid& grid = selection.mode_map.grid;
  const int K = grid.count();
  const auto tables = build_coder_tables(bundle);

  EncodeResult result;
  result.mode_map = selection.mode_map;
  result.per_patch = std::move(selection.chosen);
  result.latents.assign(K, {});
  result.reconstruction = Image(grid.image_h, grid.image_w);
  std::vector<std::vector<uint8_t>> payloads(K);
  std::vector<Tensor4> recon_patches(K);

  // Re-encode each patch with its selected codec (the final-encoding pass).
  parallel_for(K, threads, [&](size_t k) {
    const int mode = result.mode_map.modes[k];
    Codec& codec = bundle.codecs[mode];
    const Tensor4 patch = extract_patch(img, grid, static_cast<int>(k));
    const LatentGrid lat = quantize_round(codec.analyze(patch, false));
    RangeEncoder enc;
    for (int ic = 0; ic < lat.c; ++ic) {
      const CdfTable& table = tables[mode][ic];
      const int16_t* sym = lat.v.data() + static_cast<size_t>(ic) * lat.h * lat.w;
      const size_t plane = static_cast<size_t>(lat.h) * lat.w;
      for (size_t i = 0; i < plane; ++i) enc.encode_symbol(table, sym[i]);
    }
    payloads[k] = enc.finish();
    recon_patches[k] = codec.synthesize_latents(lat, /*clamp=*/true);
    result.latents[k] = lat;
  });

  for (int k = 0; k < K; ++k) place_patch(result.reconstruction, grid, k, recon_patches[k]);
  for (int k = 0; k < K; ++k)
    result.analytic_latent_bits += bundle.codecs[result.mode_map.modes[k]].rate_bits(result.latents[k]);

  // Container assembly.
  ByteWriter w;
  w.magic("SCB1");
  w.u16(kBitstreamFormatVersion);
  w.u32(static_cast<uint32_t>(grid.image_h));
  w.u32(static_cast<uint32_t>(grid.image_w));
  w.u16(static_cast<uint16_t>(grid.patch));
  w.u16(static_cast<uint16_t>(bundle.mode_count()));
  w.f64(bundle.lambda);
  w.u32(bundle.checksum());
  const std::vector<uint8_t> packed = pack_mode_map(result.mode_map, bundle.mode_count());
  w.bytes(packed.data(), packed.size());
  for (int k = 0; k < K; ++k) {
    w.u32(static_cast<uint32_t>(payloads[k].size()));
    w.bytes(payloads[k].data(), payloads[k].size());
  }
  w.u32(crc32(w.data().data(), w.size()));
  result.bytes = w.take();

  result.mode_map_bits =
      static_cast<double>(K) * mode_index_bits(bundle.mode_count());
  const double total_bits = static_cast<double>(result.bytes.size()) * 8.0;
  const double d = mse_image(result.reconstruction, img);
  result.image_stats = RDStats::make(d, total_bits, bundle.lambda,
                                     static_cast<int64_t>(grid.image_h) * grid.image_w);
  result.predicted_psnr_db = d > 0.0 ? -10.0 * std::log10(d)
                                     : std::numeric_limits<double>::infinity();
  return result;
}

BitstreamHeader parse_bitstream_header(const uint8_t* data, size_t size) {
  ByteReader r(data, size);
  r.expect_magic("SCB1", "bitstream");
  BitstreamHeader h;
  h.version = r.u16();
  if (h.version != kBitstreamFormatVersion)
    throw ParseError("bitstream: unsupported format version", r.pos() - 2);
  h.image_h = r.u32();
  h.image_w = r.u32();
  h.patch = r.u16();
  h.mode_count = r.u16();
  h.lambda = r.f64();
  h.bundle_id = r.u32();
  if (h.image_h == 0 || h.image_w == 0) throw ParseError("bitstream: empty image dims", r.pos());
  if (h.patch == 0 || h.patch % 4 != 0)
    throw ParseError("bitstream: invalid patch size", r.pos());
  if (h.mode_count == 0) throw ParseError("bitstream: zero mode count", r.pos());
  return h;
}

DecodeResult decode_image(const std::vector<uint8_t>& bytes, CodecBundle& bundle,
                          int threads) {
  bundle.validate();
  const BitstreamHeader header = parse_bitstream_header(bytes.data(), bytes.size());

  ByteReader r(bytes.data(), bytes.size());
  r.skip(4 + 2 + 4 + 4 + 2 + 2 + 8 + 4);  // header walked above

  const PatchGrid grid = PatchGrid::make(static_cast<int>(header.image_h),
                                         static_cast<int>(header.image_w), header.patch);
  const int K = grid.count();

  // Structural walk first so truncation reports an exact byte offset.
  const size_t map_bytes = mode_map_byte_size(K, header.mode_count);
  const size_t map_offset = r.pos();
  r.skip(map_bytes);
  std::vector<std::pair<size_t, size_t>> payload_spans(K);  // offset, length
  for (int k = 0; k < K; ++k) {
    const size_t len = r.u32();
    payload_spans[k] = {r.pos(), len};
    r.skip(len);
  }
  if (r.remaining() != 4)
    throw ParseError("bitstream: payload section size mismatch", r.pos());
  const uint32_t stored_crc = r.u32();
  if (stored_crc != crc32(bytes.data(), bytes.size() - 4))
    throw ParseError("bitstream: stream checksum mismatch", bytes.size() - 4);

  if (header.bundle_id != bundle.checksum())
    throw std::runtime_error("decode: bitstream was produced with a different bundle");
  if (header.mode_count != static_cast<uint16_t>(bundle.mode_count()))
    throw std::runtime_error("decode: bundle mode count does not match bitstream");

  DecodeResult result;
  result.header = header;
  result.mode_map.grid = grid;
  result.mode_map.modes.assign(K, 0);
  const int bits = mode_index_bits(header.mode_count);
  if (bits > 0) {
    BitReader br(bytes.data() + map_offset, map_bytes);
    for (int k = 0; k < K; ++k) {
      const uint32_t m = br.get(bits);
      if (m >= header.mode_count)
        throw ParseError("bitstream: mode index out of range", map_offset);
      result.mode_map.modes[k] = static_cast<uint16_t>(m);
    }
  }

  const auto tables = build_coder_tables(bundle);
  const int latent_h = header.patch / bundle.arch.downsample;
  const int latent_w = latent_h;
  result.latents.assign(K, {});
  std::vector<Tensor4> patches(K);
  parallel_for(K, threads, [&](size_t k) {
    const int mode = result.mode_map.modes[k];
    const auto [off, len] = payload_spans[k];
    RangeDecoder dec(bytes.data() + off, len);
    LatentGrid lat(bundle.arch.latent_channels, latent_h, latent_w);
    for (int ic = 0; ic < lat.c; ++ic) {
      const CdfTable& table = tables[mode][ic];
      int16_t* sym = lat.v.data() + static_cast<size_t>(ic) * lat.h * lat.w;
      const size_t plane = static_cast<size_t>(lat.h) * lat.w;
      for (size_t i = 0; i < plane; ++i)
        sym[i] = static_cast<int16_t>(dec.decode_symbol(table));
    }
    patches[k] = bundle.codecs[mode].synthesize_latents(lat, /*clamp=*/true);
    result.latents[k] = std::move(lat);
  });

  result.image = assemble(grid, patches);
  return result;
}

}  // namespace scmc

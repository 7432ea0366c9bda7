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

#pragma once

#include <vector>

#include "scmc/bundle.hpp"
#include "scmc/image.hpp"
#include "scmc/latents.hpp"

namespace scmc {

/// Non-overlapping P x P tiling of an H x W image: ceil(H/P) x ceil(W/P)
/// patches in row-major order; edge patches are replicate-padded.
struct PatchGrid {
  int image_h = 0;
  int image_w = 0;
  int patch = 0;
  int rows = 0;
  int cols = 0;

  static PatchGrid make(int image_h, int image_w, int patch);
  int count() const { return rows * cols; }
  int row_of(int k) const { return k / cols; }
  int col_of(int k) const { return k % cols; }
};

/// Per-patch codec selection, one entry in [0, M) per grid cell.
struct ModeMap {
  PatchGrid grid;
  std::vector<uint16_t> modes;
};

/// Fixed-length bits needed per mode index; zero when only one mode exists.
int mode_index_bits(int mode_count);

/// Side-information rate of the mode map: K * ceil(log2 M) / (H * W) bpp.
double mode_map_rate_bpp(const PatchGrid& grid, int mode_count);

/// Replicate-padded P x P patch k as a (1, 3, P, P) tensor.
Tensor4 extract_patch(const Image& img, const PatchGrid& grid, int k);

/// All patches in row-major order (testing/analysis convenience).
std::vector<Tensor4> partition(const Image& img, int patch, PatchGrid* grid_out = nullptr);

/// Writes patch k back, cropping any padded overhang.
void place_patch(Image& img, const PatchGrid& grid, int k, const Tensor4& patch);

/// Inverse of partition: assembles patches and crops to the grid's dims.
Image assemble(const PatchGrid& grid, const std::vector<Tensor4>& patches);

/// Outcome of evaluating all M codecs on every patch.
struct SelectionResult {
  ModeMap mode_map;
  std::vector<RDStats> chosen;              // per patch, winning codec
  std::vector<std::vector<RDStats>> all;    // [patch][mode]
  double total_selected_loss = 0.0;
};

/// Evaluates every codec on every patch with inference quantization and
/// exact rates, and picks the argmin loss per patch (ties to the lowest
/// mode index). Patches are independent and processed in parallel.
SelectionResult select_modes(const Image& img, CodecBundle& bundle, int patch_size,
                             int threads = 1);

constexpr uint16_t kBitstreamFormatVersion = 1;

/// Parsed "SCB1" container header.
struct BitstreamHeader {
  uint16_t version = 0;
  uint32_t image_h = 0;
  uint32_t image_w = 0;
  uint16_t patch = 0;
  uint16_t mode_count = 0;
  double lambda = 0.0;
  uint32_t bundle_id = 0;
};

struct EncodeResult {
  std::vector<uint8_t> bytes;
  ModeMap mode_map;
  std::vector<RDStats> per_patch;        // selected codec, analytic rate
  std::vector<LatentGrid> latents;       // per patch, as written
  Image reconstruction;                  // decoder-identical reconstruction
  RDStats image_stats;                   // rate = actual bits incl. header
  double analytic_latent_bits = 0.0;     // sum of per-patch rate estimates
  double mode_map_bits = 0.0;
  double predicted_psnr_db = 0.0;
};

/// Full spatial encode: mode selection, per-patch re-encode with the
/// selected analysis transform, range coding with the selected model, and
/// container assembly.
///
/// Container layout ("SCB1", integers little-endian):
///   magic "SCB1" | version u16 | H u32 | W u32 | P u16 | M u16 |
///   lambda f64 | bundle_id u32 | mode map (ceil(log2 M) bits per patch,
///   MSB-first, row-major, zero-padded to a byte) | per patch in row-major
///   order: payload byte length u32 + range-coded latents (channel-major) |
///   crc32 u32 over all prior bytes.
EncodeResult encode_image(const Image& img, CodecBundle& bundle, int patch_size,
                          int threads = 1);

struct DecodeResult {
  Image image;
  BitstreamHeader header;
  ModeMap mode_map;
  std::vector<LatentGrid> latents;
};

/// Parses and validates only the container header.
BitstreamHeader parse_bitstream_header(const uint8_t* data, size_t size);

/// Full decode. Refuses to decode when the header's bundle_id does not
/// match the bundle checksum; truncation and corruption raise ParseError
/// with a byte offset.
DecodeResult decode_image(const std::vector<uint8_t>& bytes, CodecBundle& bundle,
                          int threads = 1);

}  // namespace scmc

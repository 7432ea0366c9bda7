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

#include "scmc/bundle.hpp"

#include <cstdio>
#include <stdexcept>

#include "scmc/bitio.hpp"

namespace scmc {

namespace {

void write_arch(ByteWriter& w, const CodecArch& arch) {
  w.u16(static_cast<uint16_t>(arch.latent_channels));
  w.u16(static_cast<uint16_t>(arch.downsample));
  w.u16(static_cast<uint16_t>(arch.analysis.size()));
  w.u16(static_cast<uint16_t>(arch.synthesis.size()));
  auto write_layers = [&w](const std::vector<LayerSpec>& specs) {
    for (const auto& s : specs) {
      w.u8(static_cast<uint8_t>(s.kind));
      w.u16(static_cast<uint16_t>(s.in_ch));
      w.u16(static_cast<uint16_t>(s.out_ch));
      w.u16(static_cast<uint16_t>(s.kernel));
      w.u16(static_cast<uint16_t>(s.stride));
      w.f32(s.negative_slope);
    }
  };
  write_layers(arch.analysis);
  write_layers(arch.synthesis);
}

CodecArch read_arch(ByteReader& r) {
  CodecArch arch;
  arch.latent_channels = r.u16();
  arch.downsample = r.u16();
  const int n_analysis = r.u16();
  const int n_synthesis = r.u16();
  auto read_layers = [&r](int count) {
    std::vector<LayerSpec> specs;
    specs.reserve(count);
    for (int i = 0; i < count; ++i) {
      LayerSpec s;
      const uint8_t kind = r.u8();
      if (kind > 2) throw ParseError("bundle: unknown layer kind", r.pos() - 1);
      s.kind = static_cast<LayerKind>(kind);
      s.in_ch = r.u16();
      s.out_ch = r.u16();
      s.kernel = r.u16();
      s.stride = r.u16();
      s.negative_slope = r.f32();
      specs.push_back(s);
    }
    return specs;
  };
  arch.analysis = read_layers(n_analysis);
  arch.synthesis = read_layers(n_synthesis);
  arch.validate();
  return arch;
}

}  // namespace

void CodecBundle::validate() const {
  if (codecs.empty()) throw std::invalid_argument("bundle: needs at least one codec");
  if (!(lambda > 0.0)) throw std::invalid_argument("bundle: lambda must be > 0");
  arch.validate();
  for (const auto& c : codecs) {
    if (!(c.arch() == arch)) throw std::invalid_argument("bundle: codecs must share the arch");
  }
}

std::vector<uint8_t> CodecBundle::serialize() const {
  validate();
  ByteWriter w;
  w.magic("SCMC");
  w.u16(kBundleFormatVersion);
  write_arch(w, arch);
  w.u16(static_cast<uint16_t>(codecs.size()));
  w.f64(lambda);
  for (const auto& codec : codecs) {
    for (const auto& [data, count] : codec.param_data()) {
      for (size_t i = 0; i < count; ++i) w.f32(data[i]);
    }
  }
  const uint32_t crc = crc32(w.data().data(), w.size());
  w.u32(crc);
  return w.take();
}

uint32_t CodecBundle::checksum() const {
  const std::vector<uint8_t> bytes = serialize();
  uint32_t crc = 0;
  for (int i = 0; i < 4; ++i) crc |= static_cast<uint32_t>(bytes[bytes.size() - 4 + i]) << (8 * i);
  return crc;
}

CodecBundle CodecBundle::deserialize(const uint8_t* data, size_t size) {
  if (size < 4) throw ParseError("bundle: too short", 0);
  const uint32_t stored = crc32(data, size - 4);
  ByteReader tail(data + size - 4, 4);
  if (tail.u32() != stored) throw ParseError("bundle: checksum mismatch", size - 4);

  ByteReader r(data, size - 4);
  r.expect_magic("SCMC", "codec bundle");
  const uint16_t version = r.u16();
  if (version != kBundleFormatVersion)
    throw ParseError("bundle: unsupported format version", r.pos() - 2);
  CodecBundle bundle;
  bundle.arch = read_arch(r);
  const int m = r.u16();
  if (m < 1) throw ParseError("bundle: mode count must be >= 1", r.pos() - 2);
  bundle.lambda = r.f64();
  if (!(bundle.lambda > 0.0)) throw ParseError("bundle: lambda must be > 0", r.pos() - 8);
  bundle.codecs.reserve(m);
  for (int i = 0; i < m; ++i) {
    Codec codec(bundle.arch);
    for (auto& view : codec.params()) {
      for (size_t j = 0; j < view.count; ++j) view.value[j] = r.f32();
    }
    bundle.codecs.push_back(std::move(codec));
  }
  if (r.remaining() != 0) throw ParseError("bundle: trailing bytes before checksum", r.pos());
  return bundle;
}

void CodecBundle::save(const std::string& path) const {
  const std::vector<uint8_t> bytes = serialize();
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("bundle: cannot open for writing: " + path);
  const size_t written = std::fwrite(bytes.data(), 1, bytes.size(), f);
  const int rc = std::fclose(f);
  if (written != bytes.size() || rc != 0)
    throw std::runtime_error("bundle: short write: " + path);
}

CodecBundle CodecBundle::load(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("bundle: cannot open: " + path);
  std::vector<uint8_t> bytes;
  uint8_t buf[65536];
  size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) bytes.insert(bytes.end(), buf, buf + n);
  std::fclose(f);
  try {
    return deserialize(bytes.data(), bytes.size());
  } catch (const ParseError& e) {
    throw std::runtime_error("bundle: failed to parse " + path + ": " + e.what());
  }
}

CodecBundle CodecBundle::random_init(const CodecArch& arch, int mode_count, double lambda,
                                     uint64_t seed) {
  if (mode_count < 1) throw std::invalid_argument("bundle: mode count must be >= 1");
  CodecBundle bundle;
  bundle.arch = arch;
  bundle.lambda = lambda;
  bundle.codecs.reserve(mode_count);
  for (int m = 0; m < mode_count; ++m) {
    Codec codec(arch);
    Rng rng(Rng::mix({seed, 0x696e6974ULL, static_cast<uint64_t>(m)}));
    codec.init_params(rng);
    bundle.codecs.push_back(std::move(codec));
  }
  bundle.validate();
  return bundle;
}

}  // namespace scmc

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

#include "scmc/image.hpp"

#include <cstdio>
#include <stdexcept>

namespace scmc {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw std::runtime_error("image: " + path + ": " + why);
}

// Reads one whitespace-delimited unsigned integer, skipping '#' comments.
long read_pnm_int(FILE* f, const std::string& path) {
  int c = std::fgetc(f);
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = std::fgetc(f);
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      c = std::fgetc(f);
    } else {
      break;
    }
  }
  if (c == EOF || c < '0' || c > '9') fail(path, "malformed header");
  long value = 0;
  while (c >= '0' && c <= '9') {
    value = value * 10 + (c - '0');
    if (value > 1000000000L) fail(path, "header value out of range");
    c = std::fgetc(f);
  }
  return value;
}

struct FileCloser {
  FILE* f;
  ~FileCloser() {
    if (f) std::fclose(f);
  }
};

}  // namespace

Image read_ppm(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) fail(path, "cannot open");
  FileCloser closer{f};

  char m0 = static_cast<char>(std::fgetc(f));
  char m1 = static_cast<char>(std::fgetc(f));
  if (m0 != 'P' || m1 != '6') fail(path, "not a binary PPM (P6)");
  const long w = read_pnm_int(f, path);
  const long h = read_pnm_int(f, path);
  const long maxval = read_pnm_int(f, path);
  if (w < 1 || h < 1) fail(path, "empty image");
  if (maxval != 255) fail(path, "only maxval 255 supported");
  // The header terminates with exactly one whitespace byte, already
  // consumed by read_pnm_int.

  const size_t pixels = static_cast<size_t>(w) * h;
  std::vector<uint8_t> raw(pixels * 3);
  if (std::fread(raw.data(), 1, raw.size(), f) != raw.size()) fail(path, "truncated pixel data");

  Image img(static_cast<int>(h), static_cast<int>(w));
  constexpr float kScale = 1.0f / 255.0f;
  for (size_t i = 0; i < pixels; ++i) {
    img.v[i] = static_cast<float>(raw[i * 3 + 0]) * kScale;
    img.v[pixels + i] = static_cast<float>(raw[i * 3 + 1]) * kScale;
    img.v[2 * pixels + i] = static_cast<float>(raw[i * 3 + 2]) * kScale;
  }
  return img;
}

void write_ppm(const Image& img, const std::string& path) {
  if (img.h < 1 || img.w < 1) throw std::invalid_argument("write_ppm: empty image");
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) fail(path, "cannot open for writing");
  FileCloser closer{f};
  std::fprintf(f, "P6\n%d %d\n255\n", img.w, img.h);
  const size_t pixels = img.pixel_count();
  std::vector<uint8_t> raw(pixels * 3);
  for (size_t i = 0; i < pixels; ++i) {
    raw[i * 3 + 0] = to_byte(img.v[i]);
    raw[i * 3 + 1] = to_byte(img.v[pixels + i]);
    raw[i * 3 + 2] = to_byte(img.v[2 * pixels + i]);
  }
  if (std::fwrite(raw.data(), 1, raw.size(), f) != raw.size()) fail(path, "short write");
}

void write_pgm(const std::vector<uint8_t>& gray, int h, int w, const std::string& path) {
  if (h < 1 || w < 1 || gray.size() != static_cast<size_t>(h) * w)
    throw std::invalid_argument("write_pgm: dims do not match buffer");
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) fail(path, "cannot open for writing");
  FileCloser closer{f};
  std::fprintf(f, "P5\n%d %d\n255\n", w, h);
  if (std::fwrite(gray.data(), 1, gray.size(), f) != gray.size()) fail(path, "short write");
}

}  // namespace scmc

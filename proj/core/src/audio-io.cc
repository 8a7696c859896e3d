// core/src/audio-io.cc

// Copyright 2026  The spinlab authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "spinlab/audio-io.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace spinlab {

namespace {

uint32_t ReadU32(const char *p) {
  return static_cast<uint32_t>(static_cast<unsigned char>(p[0])) |
         static_cast<uint32_t>(static_cast<unsigned char>(p[1])) << 8 |
         static_cast<uint32_t>(static_cast<unsigned char>(p[2])) << 16 |
         static_cast<uint32_t>(static_cast<unsigned char>(p[3])) << 24;
}

uint16_t ReadU16(const char *p) {
  return static_cast<uint16_t>(static_cast<unsigned char>(p[0]) |
                               static_cast<unsigned char>(p[1]) << 8);
}

void PutU32(std::ostream &os, uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  os.write(b, 4);
}

void PutU16(std::ostream &os, uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  os.write(b, 2);
}

void PutU64(std::ostream &os, uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    char c = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(&c, 1);
  }
}

std::string ReadAll(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(is), {});
}

}  // namespace

Waveform ReadWav(const std::filesystem::path &path) {
  const std::string data = ReadAll(path);
  const std::string where = path.string();
  if (data.size() < 12 || data.compare(0, 4, "RIFF") != 0 ||
      data.compare(8, 4, "WAVE") != 0)
    throw DataError("unsupported audio format: " + where + " is not RIFF/WAVE");

  bool have_fmt = false;
  size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const std::string id = data.substr(pos, 4);
    const uint32_t size = ReadU32(data.data() + pos + 4);
    const size_t body = pos + 8;
    if (body + size > data.size() && id != "data")
      throw DataError("truncated chunk '" + id + "' in " + where);
    if (id == "fmt ") {
      if (size < 16) throw DataError("bad fmt chunk in " + where);
      const uint16_t format = ReadU16(data.data() + body);
      const uint16_t channels = ReadU16(data.data() + body + 2);
      const uint32_t rate = ReadU32(data.data() + body + 4);
      const uint16_t bits = ReadU16(data.data() + body + 14);
      if (format != 1 || channels != 1 || rate != kSampleRate || bits != 16)
        throw DataError("unsupported audio format: " + where + " (format=" +
                        std::to_string(format) + ", channels=" +
                        std::to_string(channels) + ", rate=" +
                        std::to_string(rate) + ", bits=" +
                        std::to_string(bits) +
                        "); expected PCM-16 mono 16 kHz");
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt)
        throw DataError("data chunk before fmt chunk in " + where);
      const size_t n = std::min<size_t>(size, data.size() - body) / 2;
      Waveform wave(n);
      for (size_t i = 0; i < n; ++i) {
        const auto s = static_cast<int16_t>(ReadU16(data.data() + body + 2 * i));
        wave[i] = static_cast<float>(s) / 32768.0f;
      }
      return wave;
    }
    pos = body + size + (size & 1);
  }
  throw DataError("no data chunk in " + where);
}

void WriteWav(const std::filesystem::path &path, const Waveform &wave,
              int sample_rate) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path.string());
  const uint32_t data_bytes = static_cast<uint32_t>(wave.size() * 2);
  os.write("RIFF", 4);
  PutU32(os, 36 + data_bytes);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  PutU32(os, 16);
  PutU16(os, 1);
  PutU16(os, 1);
  PutU32(os, static_cast<uint32_t>(sample_rate));
  PutU32(os, static_cast<uint32_t>(sample_rate) * 2);
  PutU16(os, 2);
  PutU16(os, 16);
  os.write("data", 4);
  PutU32(os, data_bytes);
  for (float x : wave) {
    const float c = std::clamp(x, -1.0f, 1.0f);
    const auto s = static_cast<int16_t>(std::lrint(c * 32767.0f));
    PutU16(os, static_cast<uint16_t>(s));
  }
  if (!os) throw DataError("write failed for " + path.string());
}

void WriteFeatureDump(const std::filesystem::path &path, const Matrix &m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path.string());
  os.write(kFeatureDumpMagic, 4);
  PutU64(os, static_cast<uint64_t>(m.rows()));
  PutU32(os, static_cast<uint32_t>(m.cols()));
  std::vector<float> row(m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row[c] = static_cast<float>(m(r, c));
    os.write(reinterpret_cast<const char *>(row.data()),
             static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  if (!os) throw DataError("write failed for " + path.string());
}

Matrix ReadFeatureDump(const std::filesystem::path &path) {
  static_assert(sizeof(float) == 4);
  const std::string data = ReadAll(path);
  if (data.size() < 16 || std::memcmp(data.data(), kFeatureDumpMagic, 4) != 0)
    throw DataError("not a feature dump: " + path.string());
  uint64_t rows = 0;
  for (int i = 0; i < 8; ++i)
    rows |= static_cast<uint64_t>(static_cast<unsigned char>(data[4 + i]))
            << (8 * i);
  const uint32_t cols = ReadU32(data.data() + 12);
  if (data.size() != 16 + rows * cols * 4)
    throw DataError("feature dump size mismatch in " + path.string());
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  const char *p = data.data() + 16;
  for (uint64_t r = 0; r < rows; ++r)
    for (uint32_t c = 0; c < cols; ++c, p += 4) {
      float v;
      std::memcpy(&v, p, 4);
      m(static_cast<Eigen::Index>(r), c) = v;
    }
  return m;
}

}  // namespace spinlab

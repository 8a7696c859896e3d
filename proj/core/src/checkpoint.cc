// core/src/checkpoint.cc

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

#include "spinlab/checkpoint.h"

#include <cstring>
#include <fstream>
#include <sstream>

namespace spinlab {

namespace {

constexpr char kMagic[8] = {'S', 'P', 'I', 'N', 'C', 'K', 'P', 'T'};

class Writer {
 public:
  template <typename T>
  void Put(T v) {
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    out_.append(b, sizeof(T));
  }
  void PutMatrix(const Matrix &m) {
    Put<uint64_t>(static_cast<uint64_t>(m.rows()));
    Put<uint64_t>(static_cast<uint64_t>(m.cols()));
    out_.append(reinterpret_cast<const char *>(m.data()), m.size() * sizeof(double));
  }
  void PutVector(const Eigen::Ref<const Eigen::VectorXd> &v) {
    PutMatrix(Matrix(Eigen::Map<const Matrix>(v.data(), 1, v.size())));
  }
  void Append(const char *p, size_t n) { out_.append(p, n); }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string &s) : s_(s) {}
  template <typename T>
  T Get() {
    Need(sizeof(T));
    T v;
    std::memcpy(&v, s_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  Matrix GetMatrix() {
    const auto rows = Get<uint64_t>(), cols = Get<uint64_t>();
    if (rows > (1u << 28) || cols > (1u << 28) || rows * cols > (1ull << 32))
      throw DataError("checkpoint: implausible matrix shape");
    Need(rows * cols * sizeof(double));
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    std::memcpy(m.data(), s_.data() + pos_, rows * cols * sizeof(double));
    pos_ += rows * cols * sizeof(double);
    return m;
  }
  Vector GetVector() {
    Matrix m = GetMatrix();
    if (m.rows() != 1 && m.size() != 0) throw DataError("checkpoint: expected a row vector");
    return Eigen::Map<Vector>(m.data(), m.size());
  }
  void Expect(const char *p, size_t n) {
    Need(n);
    if (std::memcmp(s_.data() + pos_, p, n) != 0) throw DataError("checkpoint: bad magic");
    pos_ += n;
  }
  bool AtEnd() const { return pos_ == s_.size(); }

 private:
  void Need(size_t n) const {
    if (pos_ + n > s_.size()) throw DataError("checkpoint: truncated");
  }
  const std::string &s_;
  size_t pos_ = 0;
};

}  // namespace

std::string SerializeCheckpoint(const Checkpoint &ckpt) {
  const auto &p = ckpt.params;
  Writer w;
  w.Append(kMagic, sizeof(kMagic));
  w.Put<uint32_t>(kCheckpointVersion);
  w.Put<uint64_t>(ckpt.step);
  w.Put<uint32_t>(static_cast<uint32_t>(p.codebook.K()));
  w.Put<uint32_t>(static_cast<uint32_t>(p.codebook.D()));
  w.Put<double>(p.codebook.tau);
  w.Put<uint32_t>(static_cast<uint32_t>(p.encoder.input_dim));
  w.Put<uint32_t>(static_cast<uint32_t>(p.encoder.hidden_dim));
  w.Put<uint32_t>(static_cast<uint32_t>(p.encoder.layers.size()));
  w.Put<uint32_t>(static_cast<uint32_t>(p.encoder.n_frozen));
  w.Put<uint8_t>(p.projection.use_bias ? 1 : 0);
  w.PutVector(p.encoder.input_mean.transpose());
  w.PutVector(p.encoder.input_scale.transpose());
  for (const auto &l : p.encoder.layers) {
    w.PutMatrix(l.weight);
    w.PutVector(l.bias);
  }
  w.PutMatrix(p.projection.weight);
  w.PutVector(p.projection.bias);
  w.PutMatrix(p.codebook.codewords);
  return w.Take();
}

Checkpoint DeserializeCheckpoint(const std::string &blob) {
  Reader r(blob);
  r.Expect(kMagic, sizeof(kMagic));
  const auto version = r.Get<uint32_t>();
  if (version != kCheckpointVersion)
    throw DataError("checkpoint: unsupported version " + std::to_string(version));
  Checkpoint c;
  auto &p = c.params;
  c.step = r.Get<uint64_t>();
  const auto K = r.Get<uint32_t>(), D = r.Get<uint32_t>();
  p.codebook.tau = r.Get<double>();
  p.encoder.input_dim = static_cast<int>(r.Get<uint32_t>());
  p.encoder.hidden_dim = static_cast<int>(r.Get<uint32_t>());
  const auto n_layers = r.Get<uint32_t>();
  p.encoder.n_frozen = static_cast<int>(r.Get<uint32_t>());
  p.projection.use_bias = r.Get<uint8_t>() != 0;
  p.encoder.input_mean = r.GetVector().transpose();
  p.encoder.input_scale = r.GetVector().transpose();
  for (uint32_t l = 0; l < n_layers; ++l) {
    AffineLayer layer;
    layer.weight = r.GetMatrix();
    layer.bias = r.GetVector();
    p.encoder.layers.push_back(std::move(layer));
  }
  p.projection.weight = r.GetMatrix();
  p.projection.bias = r.GetVector();
  p.codebook.codewords = r.GetMatrix();
  if (!r.AtEnd()) throw DataError("checkpoint: trailing bytes");
  if (p.codebook.K() != static_cast<int>(K) || p.codebook.D() != static_cast<int>(D))
    throw DataError("checkpoint: codebook shape disagrees with header");
  return c;
}

void SaveCheckpoint(const std::filesystem::path &path, const Checkpoint &ckpt) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write " + path.string());
  const std::string blob = SerializeCheckpoint(ckpt);
  os.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!os) throw DataError("write failed for " + path.string());
}

Checkpoint LoadCheckpoint(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open checkpoint " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return DeserializeCheckpoint(ss.str());
}

}  // namespace spinlab

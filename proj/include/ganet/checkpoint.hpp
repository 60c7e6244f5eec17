/* Copyright 2026 The ganet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef GANET_CHECKPOINT_HPP_
#define GANET_CHECKPOINT_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "ganet/error.hpp"
#include "ganet/params.hpp"

namespace ganet {

// Flat binary container:
//   "GANETCKPT1"
//   repeated until EOF:
//     u32 name_len, name bytes, u32 n, u32 c, u32 h, u32 w, f64 values[n*c*h*w]
// All integers and doubles little-endian.
inline constexpr std::string_view kCheckpointMagic = "GANETCKPT1";

struct CheckpointRecord {
  std::string name;
  Shape shape;
  std::vector<double> values;
};

namespace detail {

inline void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

inline void put_f64(std::string& buf, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xFFu));
}

class ByteReader {
 public:
  explicit ByteReader(std::string data) : data_(std::move(data)) {}
  bool done() const { return pos_ == data_.size(); }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(v);
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  void need(std::size_t n) const {
    require(data_.size() - pos_ >= n, "tensor-autodiff", "truncated checkpoint at byte " + std::to_string(pos_));
  }
  std::string data_;
  std::size_t pos_ = 0;
};

}  // namespace detail

template <typename T>
std::string encode_checkpoint(const ParamSet<T>& params) {
  std::string buf(kCheckpointMagic);
  for (const auto& e : params.entries()) {
    detail::put_u32(buf, static_cast<std::uint32_t>(e.name.size()));
    buf += e.name;
    const Shape s = e.tensor.shape();
    for (std::size_t d : {s.n, s.c, s.h, s.w}) detail::put_u32(buf, static_cast<std::uint32_t>(d));
    for (T v : e.tensor.values()) detail::put_f64(buf, static_cast<double>(v));
  }
  return buf;
}

inline std::vector<CheckpointRecord> decode_checkpoint(std::string data) {
  require(data.size() >= kCheckpointMagic.size() && data.compare(0, kCheckpointMagic.size(), kCheckpointMagic) == 0,
          "tensor-autodiff", "checkpoint magic mismatch");
  detail::ByteReader rd(data.substr(kCheckpointMagic.size()));
  std::vector<CheckpointRecord> out;
  while (!rd.done()) {
    CheckpointRecord rec;
    const auto len = rd.u32();
    rec.name = rd.bytes(len);
    rec.shape.n = rd.u32();
    rec.shape.c = rd.u32();
    rec.shape.h = rd.u32();
    rec.shape.w = rd.u32();
    rec.values.resize(rec.shape.numel());
    for (auto& v : rec.values) v = rd.f64();
    out.push_back(std::move(rec));
  }
  return out;
}

template <typename T>
void save_checkpoint(const std::string& path, const ParamSet<T>& params) {
  const std::string buf = encode_checkpoint(params);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(os), "tensor-autodiff", "cannot open checkpoint for writing: " + path);
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  require(static_cast<bool>(os), "tensor-autodiff", "failed writing checkpoint: " + path);
}

inline std::vector<CheckpointRecord> read_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), "tensor-autodiff", "cannot open checkpoint: " + path);
  std::string data((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return decode_checkpoint(std::move(data));
}

// Copies checkpoint values into an existing parameter set. The record list
// must match the set name-for-name and shape-for-shape; the first mismatch is
// reported by name.
template <typename T>
void assign_checkpoint(ParamSet<T>& params, const std::vector<CheckpointRecord>& records) {
  std::size_t i = 0;
  for (auto& e : params.entries()) {
    require(i < records.size(), "tensor-autodiff", "checkpoint is missing tensor " + e.name);
    const auto& rec = records[i];
    require(rec.name == e.name, "tensor-autodiff",
            "checkpoint tensor mismatch: expected " + e.name + ", found " + rec.name);
    require(rec.shape == e.tensor.shape(), "tensor-autodiff",
            "checkpoint shape mismatch for " + e.name + ": expected " + e.tensor.shape().str() + ", found " +
                rec.shape.str());
    auto vals = e.tensor.values();
    for (std::size_t k = 0; k < vals.size(); ++k) vals[k] = static_cast<T>(rec.values[k]);
    ++i;
  }
  require(i == records.size(), "tensor-autodiff",
          "checkpoint has unexpected extra tensor " + (i < records.size() ? records[i].name : std::string()));
}

template <typename T>
void load_checkpoint(const std::string& path, ParamSet<T>& params) {
  assign_checkpoint(params, read_checkpoint(path));
}

}  // namespace ganet

#endif  // GANET_CHECKPOINT_HPP_

// Copyright 2026 The afpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "afpc/nn/checkpoint.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "afpc/config.hpp"
#include "afpc/error.hpp"

namespace afpc::nn {

namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'G', 'A', 'N', 'C'};

class Writer {
 public:
  void raw(const void* p, std::size_t n) {
    const char* c = static_cast<const char*>(p);
    bytes_.insert(bytes_.end(), c, c + n);
  }
  void u32(std::uint32_t v) { raw(&v, 4); }
  void u64(std::uint64_t v) { raw(&v, 8); }
  template <typename T>
  void f64s(std::span<const T> values) {
    for (T v : values) {
      const double d = static_cast<double>(v);
      raw(&d, 8);
    }
  }
  std::vector<char>& bytes() { return bytes_; }

 private:
  std::vector<char> bytes_;
};

class Reader {
 public:
  Reader(const char* data, std::size_t size) : data_(data), size_(size) {}
  void raw(void* out, std::size_t n) {
    if (n > size_ - pos_) fail(ErrorCode::MalformedHeader, "checkpoint is truncated");
    std::memcpy(out, data_ + pos_, n);
    pos_ += n;
  }
  std::uint32_t u32() {
    std::uint32_t v;
    raw(&v, 4);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v;
    raw(&v, 8);
    return v;
  }
  template <typename T>
  void f64s(std::span<T> out) {
    for (T& v : out) {
      double d;
      raw(&d, 8);
      v = static_cast<T>(d);
    }
  }
  bool done() const { return pos_ == size_; }

 private:
  const char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

std::uint32_t crc32_of(const char* data, std::size_t n) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(data), static_cast<uInt>(n));
  return static_cast<std::uint32_t>(crc);
}

json network_meta(const DenseNetwork<float>& net) {
  json layers = json::array();
  for (const auto& l : net.layers)
    layers.push_back({{"inputs", l.inputs()},
                      {"outputs", l.outputs()},
                      {"activation", std::string(to_string(l.activation))},
                      {"dropout", l.dropout}});
  return json{{"dims", net.dims()}, {"layers", layers}, {"parameters", parameter_count(net)}};
}

DenseNetwork<float> network_from_meta(const json& j) {
  DenseNetwork<float> net;
  for (const auto& l : j.at("layers")) {
    DenseLayer<float> layer;
    layer.weights = Matrix<float>(l.at("outputs").get<std::size_t>(), l.at("inputs").get<std::size_t>());
    layer.bias.assign(layer.weights.rows, 0.0f);
    layer.activation = parse_activation(l.at("activation").get<std::string>());
    layer.dropout = l.at("dropout").get<double>();
    net.layers.push_back(std::move(layer));
  }
  return net;
}

void write_params(Writer& w, const DenseNetwork<float>& net) {
  for (const auto& l : net.layers) {
    w.f64s(std::span<const float>(l.weights.data));
    w.f64s(std::span<const float>(l.bias));
  }
}

void read_params(Reader& r, DenseNetwork<float>& net) {
  for (auto& l : net.layers) {
    r.f64s(std::span<float>(l.weights.data));
    r.f64s(std::span<float>(l.bias));
  }
}

void write_opt(Writer& w, const AdamState<float>& s) {
  w.u64(s.step);
  for (std::size_t i = 0; i < s.m_weights.size(); ++i) {
    w.f64s(std::span<const float>(s.m_weights[i].data));
    w.f64s(std::span<const float>(s.m_bias[i]));
    w.f64s(std::span<const float>(s.v_weights[i].data));
    w.f64s(std::span<const float>(s.v_bias[i]));
  }
}

void read_opt(Reader& r, AdamState<float>& s) {
  s.step = r.u64();
  for (std::size_t i = 0; i < s.m_weights.size(); ++i) {
    r.f64s(std::span<float>(s.m_weights[i].data));
    r.f64s(std::span<float>(s.m_bias[i]));
    r.f64s(std::span<float>(s.v_weights[i].data));
    r.f64s(std::span<float>(s.v_bias[i]));
  }
}

}  // namespace

std::vector<char> serialize_checkpoint(const GanModel& model) {
  std::ostringstream rng_state;
  rng_state << model.rng;
  json meta{{"features", model.features},
            {"stft", model.stft},
            {"architecture", model.arch},
            {"train", model.train},
            {"feature_dim", model.feature_dim()},
            {"context_dim", model.context_dim()},
            {"generator", network_meta(model.generator)},
            {"discriminator", network_meta(model.discriminator)},
            {"norm", model.norm},
            {"epochs_done", model.epochs_done},
            {"rng", rng_state.str()},
            {"history", model.history}};
  const std::string text = meta.dump();

  Writer w;
  w.raw(kMagic, 4);
  w.u32(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(text.size()));
  w.raw(text.data(), text.size());
  write_params(w, model.generator);
  write_params(w, model.discriminator);
  write_opt(w, model.generator_opt);
  write_opt(w, model.discriminator_opt);
  w.u32(crc32_of(w.bytes().data(), w.bytes().size()));
  return std::move(w.bytes());
}

GanModel deserialize_checkpoint(const std::vector<char>& bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    fail(ErrorCode::MalformedHeader, "not a checkpoint file");
  const std::size_t body = bytes.size() - 4;
  std::uint32_t stored = 0;
  std::memcpy(&stored, bytes.data() + body, 4);
  if (crc32_of(bytes.data(), body) != stored) fail(ErrorCode::ChecksumMismatch, "checkpoint CRC-32 does not match");

  Reader r(bytes.data() + 4, body - 4);
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion)
    fail(ErrorCode::VersionMismatch, "checkpoint version " + std::to_string(version) + " is not supported");
  std::string text(r.u32(), '\0');
  r.raw(text.data(), text.size());

  GanModel model;
  try {
    const json meta = json::parse(text);
    meta.at("features").get_to(model.features);
    meta.at("stft").get_to(model.stft);
    meta.at("architecture").get_to(model.arch);
    meta.at("train").get_to(model.train);
    model.generator = network_from_meta(meta.at("generator"));
    model.discriminator = network_from_meta(meta.at("discriminator"));
    meta.at("norm").get_to(model.norm);
    meta.at("epochs_done").get_to(model.epochs_done);
    std::istringstream rng_state(meta.at("rng").get<std::string>());
    rng_state >> model.rng;
    if (!rng_state) fail(ErrorCode::MalformedHeader, "bad RNG state in checkpoint");
    meta.at("history").get_to(model.history);
  } catch (const json::exception& e) {
    fail(ErrorCode::MalformedHeader, std::string("checkpoint metadata: ") + e.what());
  }
  model.generator_opt = make_adam_state(model.generator);
  model.discriminator_opt = make_adam_state(model.discriminator);
  read_params(r, model.generator);
  read_params(r, model.discriminator);
  read_opt(r, model.generator_opt);
  read_opt(r, model.discriminator_opt);
  if (!r.done()) fail(ErrorCode::MalformedHeader, "trailing bytes in checkpoint");
  return model;
}

void save_checkpoint(const GanModel& model, const fs::path& path) {
  const auto bytes = serialize_checkpoint(model);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorCode::IoFailure, "cannot create " + tmp.string());
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) fail(ErrorCode::IoFailure, "write error on " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::IoFailure, "cannot move checkpoint into place at " + path.string());
}

GanModel load_checkpoint(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::IoFailure, "cannot open checkpoint " + path.string());
  std::vector<char> bytes{std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
  return deserialize_checkpoint(bytes);
}

}  // namespace afpc::nn

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

#include "afpc/audio.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "afpc/error.hpp"

namespace afpc {

namespace {

static_assert(std::endian::native == std::endian::little, "WAV I/O assumes a little-endian host");

std::uint32_t read_u32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
         (std::uint32_t(p[3]) << 24);
}

std::uint16_t read_u16(const std::uint8_t* p) { return std::uint16_t(p[0] | (p[1] << 8)); }

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(std::uint8_t(v));
  out.push_back(std::uint8_t(v >> 8));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

}  // namespace

void validate(const AudioBuffer& buf) {
  require(buf.sample_rate > 0, ErrorCode::InvalidArgument, "sample rate must be positive");
  for (double s : buf.samples)
    if (!std::isfinite(s)) fail(ErrorCode::NonFinite, "audio buffer holds a non-finite sample");
}

double energy(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoFailure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorCode::IoFailure, "read error on " + path.string());

  const std::string where = " in " + path.string();
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    fail(ErrorCode::MalformedHeader, "missing RIFF/WAVE signature" + where);

  bool have_fmt = false;
  std::uint16_t channels = 0, bits = 0, format = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t len = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + len > bytes.size()) {
      // Some writers leave the data length at its maximum; accept a truncated data chunk.
      if (std::memcmp(chunk, "data", 4) != 0)
        fail(ErrorCode::MalformedHeader, "chunk overruns file" + where);
    }
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (len < 16) fail(ErrorCode::MalformedHeader, "fmt chunk too short" + where);
      format = read_u16(bytes.data() + body);
      channels = read_u16(bytes.data() + body + 2);
      rate = read_u32(bytes.data() + body + 4);
      bits = read_u16(bytes.data() + body + 14);
      if (format == kFormatExtensible && len >= 40) format = read_u16(bytes.data() + body + 24);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = std::min<std::size_t>(len, bytes.size() - body);
      break;
    }
    pos = body + len + (len & 1u);
  }
  if (!have_fmt) fail(ErrorCode::MalformedHeader, "no fmt chunk" + where);
  if (data == nullptr) fail(ErrorCode::MalformedHeader, "no data chunk" + where);
  if (format != kFormatPcm) fail(ErrorCode::UnsupportedFormat, "not integer PCM" + where);
  if (bits != 16) fail(ErrorCode::UnsupportedFormat, "only 16-bit PCM is supported" + where);
  if (channels != 1) fail(ErrorCode::UnsupportedFormat, "only mono is supported" + where);
  if (rate == 0) fail(ErrorCode::MalformedHeader, "zero sample rate" + where);

  AudioBuffer buf;
  buf.sample_rate = static_cast<int>(rate);
  buf.samples.resize(data_len / 2);
  for (std::size_t i = 0; i < buf.samples.size(); ++i) {
    const auto word = static_cast<std::int16_t>(read_u16(data + 2 * i));
    buf.samples[i] = static_cast<double>(word) / 32768.0;
  }
  return buf;
}

std::int16_t quantize_pcm16(double x) noexcept {
  constexpr double kMax = 1.0 - 1.0 / 32768.0;
  const double clamped = std::clamp(x, -1.0, kMax);
  return static_cast<std::int16_t>(std::lround(clamped * 32768.0));
}

void write_wav(const AudioBuffer& buf, const std::filesystem::path& path) {
  validate(buf);
  const auto n = static_cast<std::uint32_t>(buf.samples.size());
  std::vector<std::uint8_t> out;
  out.reserve(44 + 2 * std::size_t(n));
  put_tag(out, "RIFF");
  put_u32(out, 36 + 2 * n);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(buf.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(buf.sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, 2 * n);
  for (double s : buf.samples) put_u16(out, static_cast<std::uint16_t>(quantize_pcm16(s)));

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorCode::IoFailure, "cannot create " + path.string());
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!f) fail(ErrorCode::IoFailure, "write error on " + path.string());
}

double measured_snr_db(std::span<const double> signal, std::span<const double> noise) {
  return 10.0 * std::log10(energy(signal) / energy(noise));
}

Mixture mix_at_snr(const AudioBuffer& clean, const AudioBuffer& noise, double snr_db) {
  require(std::isfinite(snr_db), ErrorCode::InvalidArgument, "snr_db must be finite");
  if (clean.sample_rate != noise.sample_rate)
    fail(ErrorCode::SampleRateMismatch, "clean at " + std::to_string(clean.sample_rate) + " Hz, noise at " +
                                            std::to_string(noise.sample_rate) + " Hz");
  if (noise.size() < clean.size())
    fail(ErrorCode::InputTooShort, "noise has " + std::to_string(noise.size()) + " samples, clean needs " +
                                       std::to_string(clean.size()));
  validate(clean);
  validate(noise);

  const std::span<const double> n_seg(noise.samples.data(), clean.size());
  const double es = energy(clean.samples);
  const double en = energy(n_seg);
  if (es <= 0.0) fail(ErrorCode::ZeroEnergyInput, "clean signal has zero energy");
  if (en <= 0.0) fail(ErrorCode::ZeroEnergyInput, "noise segment has zero energy");

  Mixture mix;
  mix.gain = std::sqrt(es / en * std::pow(10.0, -snr_db / 10.0));
  mix.scaled_noise.sample_rate = clean.sample_rate;
  mix.noisy.sample_rate = clean.sample_rate;
  mix.scaled_noise.samples.resize(clean.size());
  mix.noisy.samples.resize(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    mix.scaled_noise.samples[i] = mix.gain * n_seg[i];
    mix.noisy.samples[i] = clean.samples[i] + mix.scaled_noise.samples[i];
  }
  return mix;
}

}  // namespace afpc

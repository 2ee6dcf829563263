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

#include "afpc/manifest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "afpc/error.hpp"

namespace afpc {

namespace fs = std::filesystem;

std::string_view to_string(Split split) { return split == Split::Train ? "train" : "test"; }

std::optional<NoiseKind> ManifestEntry::synthetic_noise() const { return parse_noise_kind(noise); }

std::string ManifestEntry::stem() const {
  if (!noisy.empty()) return noisy.stem().string();
  return clean.stem().string();
}

std::vector<ManifestEntry> DatasetManifest::split(Split which) const {
  std::vector<ManifestEntry> out;
  for (const auto& e : entries)
    if (e.split == which) out.push_back(e);
  return out;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

DatasetManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoFailure, "cannot open manifest " + path.string());
  const fs::path base = path.parent_path();
  DatasetManifest manifest;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto f = split_tabs(line);
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (f.size() < 4) fail(ErrorCode::InvalidArgument, "expected at least 4 tab-separated fields at " + where);

    ManifestEntry e;
    e.clean = resolve(base, f[0]);
    e.noise = f[1];
    if (!parse_noise_kind(e.noise)) e.noise = resolve(base, f[1]).string();
    const char* first = f[2].data();
    const auto [ptr, ec] = std::from_chars(first, first + f[2].size(), e.snr_db);
    if (ec != std::errc() || ptr != first + f[2].size() || !std::isfinite(e.snr_db))
      fail(ErrorCode::InvalidArgument, "bad snr_db '" + f[2] + "' at " + where);
    if (f[3] == "train") e.split = Split::Train;
    else if (f[3] == "test") e.split = Split::Test;
    else fail(ErrorCode::InvalidArgument, "split must be train or test at " + where);
    if (f.size() > 4) e.noisy = resolve(base, f[4]);
    if (f.size() > 5) e.noise_label = f[5];
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

void write_manifest(const DatasetManifest& manifest, const fs::path& path) {
  const fs::path base = path.parent_path();
  auto rel = [&](const fs::path& p) {
    if (p.empty()) return std::string();
    std::error_code ec;
    const fs::path r = fs::relative(p, base.empty() ? fs::path(".") : base, ec);
    return (ec || r.empty()) ? p.string() : r.string();
  };
  std::ostringstream out;
  out << "# clean\tnoise\tsnr_db\tsplit\tnoisy\tnoise_label\n";
  for (const auto& e : manifest.entries) {
    const bool synthetic = parse_noise_kind(e.noise).has_value();
    std::ostringstream snr;
    snr.precision(17);
    snr << e.snr_db;
    out << rel(e.clean) << '\t' << (synthetic ? e.noise : rel(e.noise)) << '\t' << snr.str() << '\t'
        << to_string(e.split);
    if (!e.noisy.empty() || !e.noise_label.empty()) out << '\t' << rel(e.noisy) << '\t' << e.noise_label;
    out << '\n';
  }
  std::ofstream f(path, std::ios::trunc);
  if (!f) fail(ErrorCode::IoFailure, "cannot create manifest " + path.string());
  f << out.str();
  if (!f) fail(ErrorCode::IoFailure, "write error on " + path.string());
}

}  // namespace afpc

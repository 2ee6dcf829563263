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

#include "afpc/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "afpc/error.hpp"

namespace afpc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  fail(ErrorCode::InvalidArgument, "invalid value '" + value + "' for " + key);
}

template <typename U>
U parse_unsigned(const std::string& key, const std::string& v) {
  U out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) bad_value(key, v);
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) bad_value(key, v);
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v);
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the shortest representation that still reads back exactly.
  for (int prec = 1; prec <= 17; ++prec) {
    char tmp[32];
    std::snprintf(tmp, sizeof tmp, "%.*g", prec, v);
    if (std::strtod(tmp, nullptr) == v) return tmp;
  }
  return buf;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Field {
  std::function<void(RunConfig&, const std::string&, const fs::path&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename U>
Field unsigned_field(const std::string& key, std::function<U&(RunConfig&)> ref) {
  return {[key, ref](RunConfig& c, const std::string& v, const fs::path&) { ref(c) = parse_unsigned<U>(key, v); },
          [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); }};
}

Field double_field(const std::string& key, std::function<double&(RunConfig&)> ref) {
  return {[key, ref](RunConfig& c, const std::string& v, const fs::path&) { ref(c) = parse_double(key, v); },
          [ref](const RunConfig& c) { return fmt_double(ref(const_cast<RunConfig&>(c))); }};
}

Field bool_field(const std::string& key, std::function<bool&(RunConfig&)> ref) {
  return {[key, ref](RunConfig& c, const std::string& v, const fs::path&) { ref(c) = parse_bool(key, v); },
          [ref](const RunConfig& c) { return std::string(ref(const_cast<RunConfig&>(c)) ? "true" : "false"); }};
}

Field path_field(std::function<fs::path&(RunConfig&)> ref) {
  return {[ref](RunConfig& c, const std::string& v, const fs::path& base) {
            fs::path p(v);
            ref(c) = (p.empty() || p.is_absolute() || base.empty()) ? p : base / p;
          },
          [ref](const RunConfig& c) { return ref(const_cast<RunConfig&>(c)).string(); }};
}

// Ordered so that format_run_config emits sections in a stable order.
const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = [] {
    std::vector<std::pair<std::string, Field>> t;
    t.emplace_back("stft.frame_size", unsigned_field<std::size_t>("stft.frame_size", [](RunConfig& c) -> std::size_t& { return c.stft.frame_size; }));
    t.emplace_back("stft.hop", unsigned_field<std::size_t>("stft.hop", [](RunConfig& c) -> std::size_t& { return c.stft.hop; }));
    t.emplace_back("stft.sample_rate", unsigned_field<int>("stft.sample_rate", [](RunConfig& c) -> int& { return c.stft.sample_rate; }));

    t.emplace_back("features.set",
                   Field{[](RunConfig& c, const std::string& v, const fs::path&) {
                           auto s = parse_feature_set(v);
                           if (!s) bad_value("features.set", v);
                           c.features.feature_set = *s;
                         },
                         [](const RunConfig& c) { return std::string(to_string(c.features.feature_set)); }});
    t.emplace_back("features.context", unsigned_field<std::size_t>("features.context", [](RunConfig& c) -> std::size_t& { return c.features.context; }));
    t.emplace_back("features.bands", unsigned_field<std::size_t>("features.bands", [](RunConfig& c) -> std::size_t& { return c.features.bands; }));
    t.emplace_back("features.mfcc_count", unsigned_field<std::size_t>("features.mfcc_count", [](RunConfig& c) -> std::size_t& { return c.features.mfcc_count; }));
    t.emplace_back("features.nssc_keep", unsigned_field<std::size_t>("features.nssc_keep", [](RunConfig& c) -> std::size_t& { return c.features.nssc_keep; }));
    t.emplace_back("features.delta_window", unsigned_field<std::size_t>("features.delta_window", [](RunConfig& c) -> std::size_t& { return c.features.delta_window; }));
    t.emplace_back("features.preemphasis", double_field("features.preemphasis", [](RunConfig& c) -> double& { return c.features.alpha; }));
    t.emplace_back("features.f_min", double_field("features.f_min", [](RunConfig& c) -> double& { return c.features.f_min; }));
    t.emplace_back("features.f_max", double_field("features.f_max", [](RunConfig& c) -> double& { return c.features.f_max; }));

    t.emplace_back("train.epochs", unsigned_field<std::size_t>("train.epochs", [](RunConfig& c) -> std::size_t& { return c.train.epochs; }));
    t.emplace_back("train.batch_size", unsigned_field<std::size_t>("train.batch_size", [](RunConfig& c) -> std::size_t& { return c.train.batch_size; }));
    t.emplace_back("train.initial_rate", double_field("train.initial_rate", [](RunConfig& c) -> double& { return c.train.initial_rate; }));
    t.emplace_back("train.final_rate", double_field("train.final_rate", [](RunConfig& c) -> double& { return c.train.final_rate; }));
    t.emplace_back("train.lr_schedule",
                   Field{[](RunConfig& c, const std::string& v, const fs::path&) {
                           c.train.lr_schedule.clear();
                           for (const auto& item : split_list(v)) {
                             const auto colon = item.find(':');
                             if (colon == std::string::npos) bad_value("train.lr_schedule", v);
                             c.train.lr_schedule.push_back(
                                 {parse_unsigned<std::size_t>("train.lr_schedule", trim(item.substr(0, colon))),
                                  parse_double("train.lr_schedule", trim(item.substr(colon + 1)))});
                           }
                         },
                         [](const RunConfig& c) {
                           std::string out;
                           for (const auto& p : c.train.lr_schedule) {
                             if (!out.empty()) out += ',';
                             out += std::to_string(p.first_epoch) + ":" + fmt_double(p.rate);
                           }
                           return out;
                         }});
    t.emplace_back("train.lambda", double_field("train.lambda", [](RunConfig& c) -> double& { return c.train.lambda_l1; }));
    t.emplace_back("train.beta1", double_field("train.beta1", [](RunConfig& c) -> double& { return c.train.adam.beta1; }));
    t.emplace_back("train.beta2", double_field("train.beta2", [](RunConfig& c) -> double& { return c.train.adam.beta2; }));
    t.emplace_back("train.epsilon", double_field("train.epsilon", [](RunConfig& c) -> double& { return c.train.adam.epsilon; }));
    t.emplace_back("train.normalize_inputs", bool_field("train.normalize_inputs", [](RunConfig& c) -> bool& { return c.train.normalize_inputs; }));

    t.emplace_back("network.hidden",
                   Field{[](RunConfig& c, const std::string& v, const fs::path&) {
                           c.arch.hidden.clear();
                           for (const auto& item : split_list(v))
                             c.arch.hidden.push_back(parse_unsigned<std::size_t>("network.hidden", item));
                         },
                         [](const RunConfig& c) {
                           std::string out;
                           for (auto h : c.arch.hidden) {
                             if (!out.empty()) out += ',';
                             out += std::to_string(h);
                           }
                           return out;
                         }});
    t.emplace_back("network.latent_dim", unsigned_field<std::size_t>("network.latent_dim", [](RunConfig& c) -> std::size_t& { return c.arch.latent_dim; }));
    t.emplace_back("network.dropout", double_field("network.dropout", [](RunConfig& c) -> double& { return c.arch.dropout; }));
    t.emplace_back("network.discriminator_dropout", bool_field("network.discriminator_dropout", [](RunConfig& c) -> bool& { return c.arch.discriminator_dropout; }));

    t.emplace_back("paths.manifest", path_field([](RunConfig& c) -> fs::path& { return c.paths.manifest; }));
    t.emplace_back("paths.cache_dir", path_field([](RunConfig& c) -> fs::path& { return c.paths.cache_dir; }));
    t.emplace_back("paths.checkpoint", path_field([](RunConfig& c) -> fs::path& { return c.paths.checkpoint; }));
    t.emplace_back("paths.out_dir", path_field([](RunConfig& c) -> fs::path& { return c.paths.out_dir; }));

    t.emplace_back("run.seed", unsigned_field<std::uint64_t>("run.seed", [](RunConfig& c) -> std::uint64_t& { return c.seed; }));
    return t;
  }();
  return table;
}

const Field* find_field(const std::string& key) {
  for (const auto& [name, f] : fields())
    if (name == key) return &f;
  return nullptr;
}

}  // namespace

void RunConfig::validate() const {
  stft.validate();
  features.validate();
  train.validate();
  require(!arch.hidden.empty(), ErrorCode::InvalidArgument, "network needs at least one hidden layer");
  for (auto h : arch.hidden) require(h > 0, ErrorCode::InvalidArgument, "hidden layer width must be positive");
  require(arch.dropout >= 0.0 && arch.dropout < 1.0, ErrorCode::InvalidArgument, "dropout must lie in [0, 1)");
}

RunConfig parse_run_config(const std::string& text, const fs::path& base_dir) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorCode::InvalidArgument, std::string("config: ") + e.what());
  }
  RunConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      fail(ErrorCode::InvalidArgument, "config key '" + section + "' is outside any section");
    for (const auto& [key, value] : body) {
      const std::string name = section + "." + key;
      const Field* f = find_field(name);
      if (!f) fail(ErrorCode::InvalidArgument, "unknown config key " + name);
      f->set(cfg, trim(value.data()), base_dir);
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::IoFailure, "cannot open config " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_run_config(ss.str(), path.parent_path());
}

std::string format_run_config(const RunConfig& cfg) {
  std::string out, section;
  for (const auto& [name, f] : fields()) {
    const auto dot = name.find('.');
    const std::string sec = name.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out += '\n';
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += name.substr(dot + 1) + " = " + f.get(cfg) + "\n";
  }
  return out;
}

void to_json(json& j, const StftConfig& c) {
  j = json{{"frame_size", c.frame_size}, {"hop", c.hop}, {"sample_rate", c.sample_rate}};
}

void from_json(const json& j, StftConfig& c) {
  j.at("frame_size").get_to(c.frame_size);
  j.at("hop").get_to(c.hop);
  j.at("sample_rate").get_to(c.sample_rate);
}

void to_json(json& j, const FeatureConfig& c) {
  j = json{{"feature_set", std::string(to_string(c.feature_set))},
           {"context", c.context},
           {"bands", c.bands},
           {"mfcc_count", c.mfcc_count},
           {"nssc_keep", c.nssc_keep},
           {"preemphasis", c.alpha},
           {"delta_window", c.delta_window},
           {"f_min", c.f_min},
           {"f_max", c.f_max}};
}

void from_json(const json& j, FeatureConfig& c) {
  const auto name = j.at("feature_set").get<std::string>();
  const auto set = parse_feature_set(name);
  if (!set) fail(ErrorCode::MalformedHeader, "unknown feature set " + name);
  c.feature_set = *set;
  j.at("context").get_to(c.context);
  j.at("bands").get_to(c.bands);
  j.at("mfcc_count").get_to(c.mfcc_count);
  j.at("nssc_keep").get_to(c.nssc_keep);
  j.at("preemphasis").get_to(c.alpha);
  j.at("delta_window").get_to(c.delta_window);
  j.at("f_min").get_to(c.f_min);
  j.at("f_max").get_to(c.f_max);
}

void to_json(json& j, const RunConfig& c) {
  j = json{{"stft", c.stft},
           {"features", c.features},
           {"train", c.train},
           {"network", c.arch},
           {"paths",
            {{"manifest", c.paths.manifest.string()},
             {"cache_dir", c.paths.cache_dir.string()},
             {"checkpoint", c.paths.checkpoint.string()},
             {"out_dir", c.paths.out_dir.string()}}},
           {"seed", c.seed}};
}

namespace nn {

void to_json(json& j, const TrainConfig& c) {
  json schedule = json::array();
  for (const auto& p : c.lr_schedule) schedule.push_back({{"first_epoch", p.first_epoch}, {"rate", p.rate}});
  j = json{{"epochs", c.epochs},
           {"batch_size", c.batch_size},
           {"lr_schedule", schedule},
           {"initial_rate", c.initial_rate},
           {"final_rate", c.final_rate},
           {"lambda", c.lambda_l1},
           {"beta1", c.adam.beta1},
           {"beta2", c.adam.beta2},
           {"epsilon", c.adam.epsilon},
           {"seed", c.seed},
           {"normalize_inputs", c.normalize_inputs}};
}

void from_json(const json& j, TrainConfig& c) {
  j.at("epochs").get_to(c.epochs);
  j.at("batch_size").get_to(c.batch_size);
  c.lr_schedule.clear();
  for (const auto& p : j.at("lr_schedule"))
    c.lr_schedule.push_back({p.at("first_epoch").get<std::size_t>(), p.at("rate").get<double>()});
  j.at("initial_rate").get_to(c.initial_rate);
  j.at("final_rate").get_to(c.final_rate);
  j.at("lambda").get_to(c.lambda_l1);
  j.at("beta1").get_to(c.adam.beta1);
  j.at("beta2").get_to(c.adam.beta2);
  j.at("epsilon").get_to(c.adam.epsilon);
  j.at("seed").get_to(c.seed);
  j.at("normalize_inputs").get_to(c.normalize_inputs);
}

void to_json(json& j, const GanArchitecture& c) {
  j = json{{"hidden", c.hidden},
           {"latent_dim", c.latent_dim},
           {"dropout", c.dropout},
           {"discriminator_dropout", c.discriminator_dropout}};
}

void from_json(const json& j, GanArchitecture& c) {
  j.at("hidden").get_to(c.hidden);
  j.at("latent_dim").get_to(c.latent_dim);
  j.at("dropout").get_to(c.dropout);
  j.at("discriminator_dropout").get_to(c.discriminator_dropout);
}

void to_json(json& j, const NormStats& s) { j = json{{"mean", s.mean}, {"stdev", s.stdev}}; }

void from_json(const json& j, NormStats& s) {
  j.at("mean").get_to(s.mean);
  j.at("stdev").get_to(s.stdev);
}

void to_json(json& j, const EpochRecord& r) {
  j = json{{"epoch", r.epoch},
           {"rate", r.rate},
           {"loss_d_real", r.loss_d_real},
           {"loss_d_fake", r.loss_d_fake},
           {"loss_g_adversarial", r.loss_g_adversarial},
           {"loss_g", r.loss_g},
           {"mean_abs_error", r.mean_abs_error},
           {"batches", r.batches}};
}

void from_json(const json& j, EpochRecord& r) {
  j.at("epoch").get_to(r.epoch);
  j.at("rate").get_to(r.rate);
  j.at("loss_d_real").get_to(r.loss_d_real);
  j.at("loss_d_fake").get_to(r.loss_d_fake);
  j.at("loss_g_adversarial").get_to(r.loss_g_adversarial);
  j.at("loss_g").get_to(r.loss_g);
  j.at("mean_abs_error").get_to(r.mean_abs_error);
  j.at("batches").get_to(r.batches);
}

}  // namespace nn

}  // namespace afpc

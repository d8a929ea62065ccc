#include "enrich/config.hpp"

#include <charconv>
#include <functional>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "json.hpp"

#include "enrich/errors.hpp"

namespace enrich {

namespace {

using nlohmann::ordered_json;

struct Key {
  const char* section;
  const char* name;
  std::function<void(CliConfig&, const std::string&)> set;
  std::function<ordered_json(const CliConfig&)> get;
  /// Keys describing where a run writes or how many workers it uses.
  bool run_key = false;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  std::string out = s.substr(b, e - b + 1);
  if (out.size() >= 2 && (out.front() == '"' || out.front() == '\'') && out.back() == out.front())
    out = out.substr(1, out.size() - 2);
  return out;
}

template <typename T>
T parse_number(const std::string& raw) {
  const std::string s = trim(raw);
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError("invalid number '" + raw + "'");
  return v;
}

bool parse_bool(const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("invalid boolean '" + raw + "'");
}

template <typename T>
Key number_key(const char* section, const char* name, T CliConfig::*outer, bool run_key = false) {
  return {section, name, [outer](CliConfig& c, const std::string& v) { c.*outer = parse_number<T>(v); },
          [outer](const CliConfig& c) { return ordered_json(c.*outer); }, run_key};
}

template <typename T>
Key param_key(const char* name, T AugmentationParams::*field) {
  return {"sampler", name,
          [field](CliConfig& c, const std::string& v) { c.build.params.*field = parse_number<T>(v); },
          [field](const CliConfig& c) { return ordered_json(c.build.params.*field); }};
}

Key interval_key(const char* name, Interval AugmentationParams::*field, double Interval::*end) {
  return {"sampler", name,
          [field, end](CliConfig& c, const std::string& v) { c.build.params.*field.*end = parse_number<double>(v); },
          [field, end](const CliConfig& c) { return ordered_json(c.build.params.*field.*end); }};
}

template <typename T>
Key build_key(const char* name, T BuildConfig::*field, bool run_key = false) {
  return {"build", name, [field](CliConfig& c, const std::string& v) { c.build.*field = parse_number<T>(v); },
          [field](const CliConfig& c) { return ordered_json(c.build.*field); }, run_key};
}

Key build_flag(const char* name, bool BuildConfig::*field) {
  return {"build", name, [field](CliConfig& c, const std::string& v) { c.build.*field = parse_bool(v); },
          [field](const CliConfig& c) { return ordered_json(c.build.*field); }};
}

Key norm_key(const char* name, std::array<double, 3> NormalizationStats::*field, int ch) {
  return {"build", name,
          [field, ch](CliConfig& c, const std::string& v) { (c.build.normalization.*field)[ch] = parse_number<double>(v); },
          [field, ch](const CliConfig& c) { return ordered_json((c.build.normalization.*field)[ch]); }};
}

template <typename T>
Key eval_key(const char* name, T EvalConfig::*field) {
  return {"eval", name, [field](CliConfig& c, const std::string& v) { c.eval.*field = parse_number<T>(v); },
          [field](const CliConfig& c) { return ordered_json(c.eval.*field); }};
}

Key eval_flag(const char* name, bool EvalConfig::*field) {
  return {"eval", name, [field](CliConfig& c, const std::string& v) { c.eval.*field = parse_bool(v); },
          [field](const CliConfig& c) { return ordered_json(c.eval.*field); }};
}

const std::vector<Key>& key_table() {
  using P = AugmentationParams;
  static const std::vector<Key> keys = {
      param_key("min_objects", &P::min_objects),
      param_key("max_objects", &P::max_objects),
      param_key("min_lights", &P::min_lights),
      param_key("max_lights", &P::max_lights),
      param_key("p_colored_light", &P::p_colored_light),
      param_key("p_shadows", &P::p_shadows),
      interval_key("scale_jitter_min", &P::scale_jitter, &Interval::lo),
      interval_key("scale_jitter_max", &P::scale_jitter, &Interval::hi),
      interval_key("coverage_min", &P::coverage_bounds, &Interval::lo),
      interval_key("coverage_max", &P::coverage_bounds, &Interval::hi),
      param_key("bg_distance", &P::bg_distance),
      param_key("unit_scale", &P::unit_scale),
      param_key("max_cull_retries", &P::max_cull_retries),
      interval_key("texture_shift_min", &P::texture_rgb_shift, &Interval::lo),
      interval_key("texture_shift_max", &P::texture_rgb_shift, &Interval::hi),
      interval_key("shadow_normal_bias_min", &P::shadow_normal_bias, &Interval::lo),
      interval_key("shadow_normal_bias_max", &P::shadow_normal_bias, &Interval::hi),
      interval_key("shadow_depth_bias_min", &P::shadow_depth_bias, &Interval::lo),
      interval_key("shadow_depth_bias_max", &P::shadow_depth_bias, &Interval::hi),
      param_key("shadow_samples", &P::shadow_samples),
      interval_key("object_depth_min", &P::object_depth, &Interval::lo),
      interval_key("object_depth_max", &P::object_depth, &Interval::hi),
      param_key("placement_margin", &P::placement_margin),

      number_key("camera", "width", &CliConfig::camera_width),
      number_key("camera", "height", &CliConfig::camera_height),
      number_key("camera", "hfov_deg", &CliConfig::hfov_deg),
      number_key("camera", "near_plane", &CliConfig::near_plane),

      build_key("seed", &BuildConfig::global_seed),
      build_key("ratio", &BuildConfig::augment_ratio),
      build_key("source_fraction", &BuildConfig::source_fraction),
      build_key("target_test_count", &BuildConfig::target_test_count),
      build_flag("balanced_test_sampling", &BuildConfig::balanced_test_sampling),
      build_flag("normalize", &BuildConfig::normalize),
      norm_key("norm_mean_r", &NormalizationStats::mean, 0),
      norm_key("norm_mean_g", &NormalizationStats::mean, 1),
      norm_key("norm_mean_b", &NormalizationStats::mean, 2),
      norm_key("norm_std_r", &NormalizationStats::std, 0),
      norm_key("norm_std_g", &NormalizationStats::std, 1),
      norm_key("norm_std_b", &NormalizationStats::std, 2),
      build_key("depth_steps_per_meter", &BuildConfig::depth_steps_per_meter),
      build_key("jobs", &BuildConfig::jobs, true),
      {"build", "out",
       [](CliConfig& c, const std::string& v) { c.build.output_root = trim(v); },
       [](const CliConfig& c) { return ordered_json(c.build.output_root.generic_string()); }, true},
      {"build", "catalog",
       [](CliConfig& c, const std::string& v) { c.catalog_manifest = trim(v); },
       [](const CliConfig& c) { return ordered_json(c.catalog_manifest.generic_string()); }},
      number_key("build", "catalog_seed", &CliConfig::catalog_seed),

      eval_key("min_depth", &EvalConfig::min_depth),
      eval_key("max_depth", &EvalConfig::max_depth),
      eval_flag("clamp_prediction", &EvalConfig::clamp_prediction),
      eval_flag("eigen_crop", &EvalConfig::eigen_crop),
  };
  return keys;
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const Key& k : key_table()) out.push_back(std::string(k.section) + "." + k.name);
  return out;
}

void set_config_value(CliConfig& cfg, const std::string& dotted_key, const std::string& value) {
  for (const Key& k : key_table()) {
    if (dotted_key == std::string(k.section) + "." + k.name) {
      try {
        k.set(cfg, value);
      } catch (const ConfigError& e) {
        throw ConfigError(dotted_key + ": " + e.what());
      }
      return;
    }
  }
  throw ConfigError("unknown config key '" + dotted_key + "'");
}

void apply_config_file(CliConfig& cfg, const std::filesystem::path& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    if (e.line() == 0) throw IoError("cannot read config " + path.string() + ": " + e.message());
    throw ParseError(path.string() + ": " + e.message(), static_cast<int>(e.line()));
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("config entry '" + section + "' is outside any section");
    for (const auto& [key, node] : body) set_config_value(cfg, section + "." + key, node.get_value<std::string>());
  }
}

void CliConfig::finalize() {
  build.camera = PinholeCamera::from_hfov(camera_width, camera_height, hfov_deg, near_plane);
  build.validate();
  eval.validate();
}

std::string CliConfig::effective_json(bool include_run_keys) const {
  ordered_json j = ordered_json::object();
  for (const Key& k : key_table()) {
    if (k.run_key && !include_run_keys) continue;
    j[k.section][k.name] = k.get(*this);
  }
  return j.dump();
}

}  // namespace enrich

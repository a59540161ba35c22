#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "e2etune/error.hpp"
#include "e2etune/text.hpp"
#include "json.hpp"

namespace e2etune {

/// Range assigned to knobs that declare no bounds.
inline constexpr double kDefaultKnobMin = 0.0;
inline constexpr double kDefaultKnobMax = 2147483647.0;  // 2^31 - 1

inline constexpr int kBucketCount = 10;

enum class KnobKind { continuous, integer, categorical };

inline std::string_view to_string(KnobKind k) {
  switch (k) {
    case KnobKind::continuous: return "continuous";
    case KnobKind::integer: return "integer";
    case KnobKind::categorical: return "categorical";
  }
  return "?";
}

inline KnobKind parse_knob_kind(std::string_view s) {
  if (s == "continuous") return KnobKind::continuous;
  if (s == "integer") return KnobKind::integer;
  if (s == "categorical") return KnobKind::categorical;
  throw ParseError("unknown knob kind '" + std::string(s) + "'");
}

// Raw values are doubles for every kind. A categorical knob stores the index
// of the category in its declared order.
struct KnobSpec {
  std::string name;
  KnobKind kind = KnobKind::continuous;
  double min = kDefaultKnobMin;
  double max = kDefaultKnobMax;
  std::vector<std::string> categories;
  double default_value = 0.0;
  bool restart_required = false;
  std::string unit;

  bool numeric() const { return kind != KnobKind::categorical; }

  double lower() const { return numeric() ? min : 0.0; }
  double upper() const {
    return numeric() ? max : static_cast<double>(categories.size()) - 1.0;
  }

  std::optional<std::size_t> category_index(std::string_view value) const {
    for (std::size_t i = 0; i < categories.size(); ++i) {
      if (categories[i] == value) return i;
    }
    return std::nullopt;
  }

  bool contains(double v) const {
    if (!std::isfinite(v)) return false;
    if (v < lower() || v > upper()) return false;
    if (kind != KnobKind::continuous && v != std::floor(v)) return false;
    return true;
  }

  void validate() const {
    if (name.empty()) throw InvalidArgument("knob with empty name");
    if (numeric()) {
      if (!(min < max)) throw InvalidArgument("knob " + name + ": min must be < max");
      if (kind == KnobKind::integer && (min != std::floor(min) || max != std::floor(max))) {
        throw InvalidArgument("knob " + name + ": integer knob with fractional bounds");
      }
    } else {
      if (categories.empty()) throw InvalidArgument("knob " + name + ": no categories");
      for (std::size_t i = 0; i < categories.size(); ++i) {
        for (std::size_t j = i + 1; j < categories.size(); ++j) {
          if (categories[i] == categories[j]) {
            throw InvalidArgument("knob " + name + ": duplicate category '" + categories[i] + "'");
          }
        }
      }
    }
    if (!contains(default_value)) {
      throw InvalidArgument("knob " + name + ": default outside permissible range");
    }
  }
};

struct Configuration {
  std::vector<double> values;
  bool operator==(const Configuration&) const = default;
};

struct NormalizedConfiguration {
  std::vector<double> values;
  bool operator==(const NormalizedConfiguration&) const = default;
};

struct BucketedConfiguration {
  std::vector<int> buckets;
  bool operator==(const BucketedConfiguration&) const = default;
};

class KnobSpace {
 public:
  KnobSpace() = default;

  explicit KnobSpace(std::vector<KnobSpec> knobs) : knobs_(std::move(knobs)) {
    for (std::size_t i = 0; i < knobs_.size(); ++i) {
      knobs_[i].validate();
      if (!index_.emplace(knobs_[i].name, i).second) {
        throw InvalidArgument("duplicate knob name " + knobs_[i].name);
      }
    }
  }

  std::size_t size() const { return knobs_.size(); }
  const std::vector<KnobSpec>& knobs() const { return knobs_; }
  const KnobSpec& operator[](std::size_t i) const { return knobs_[i]; }

  std::optional<std::size_t> index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  Configuration default_configuration() const {
    Configuration cfg;
    cfg.values.reserve(knobs_.size());
    for (const auto& k : knobs_) cfg.values.push_back(k.default_value);
    return cfg;
  }

  void validate(const Configuration& cfg) const {
    if (cfg.values.size() != knobs_.size()) {
      throw DomainError("configuration has " + std::to_string(cfg.values.size()) +
                        " values, knob space has " + std::to_string(knobs_.size()));
    }
    for (std::size_t i = 0; i < knobs_.size(); ++i) {
      if (!knobs_[i].contains(cfg.values[i])) {
        throw DomainError("value " + text::shortest(cfg.values[i]) + " outside range of knob " +
                          knobs_[i].name);
      }
    }
  }

  /// Human-readable value: category name, integer digits or shortest decimal.
  std::string format_value(std::size_t i, double v) const {
    const auto& k = knobs_[i];
    if (k.kind == KnobKind::categorical) return k.categories.at(static_cast<std::size_t>(v));
    if (k.kind == KnobKind::integer) return std::to_string(static_cast<long long>(v));
    return text::shortest(v);
  }

  double parse_value(std::size_t i, std::string_view s) const {
    const auto& k = knobs_[i];
    if (k.kind == KnobKind::categorical) {
      auto idx = k.category_index(s);
      if (!idx) throw DomainError("knob " + k.name + " has no category '" + std::string(s) + "'");
      return static_cast<double>(*idx);
    }
    return text::parse_double(s);
  }

 private:
  std::vector<KnobSpec> knobs_;
  std::unordered_map<std::string, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Encodings

inline NormalizedConfiguration normalize(const KnobSpace& space, const Configuration& cfg) {
  space.validate(cfg);
  NormalizedConfiguration out;
  out.values.resize(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& k = space[i];
    if (k.numeric()) {
      out.values[i] = (cfg.values[i] - k.min) / (k.max - k.min);
    } else {
      const auto n = k.categories.size();
      out.values[i] = n == 1 ? 0.0 : cfg.values[i] / static_cast<double>(n - 1);
    }
  }
  return out;
}

inline double round_half_up(double v) { return std::floor(v + 0.5); }

inline Configuration denormalize(const KnobSpace& space, const NormalizedConfiguration& ncfg) {
  if (ncfg.values.size() != space.size()) {
    throw DomainError("normalized configuration length mismatch");
  }
  Configuration out;
  out.values.resize(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const double x = ncfg.values[i];
    const auto& k = space[i];
    if (!(x >= 0.0 && x <= 1.0)) {
      throw DomainError("normalized value " + text::shortest(x) + " for knob " + k.name +
                        " outside [0,1]");
    }
    switch (k.kind) {
      case KnobKind::continuous:
        out.values[i] = std::clamp(k.min + x * (k.max - k.min), k.min, k.max);
        break;
      case KnobKind::integer:
        out.values[i] = std::clamp(round_half_up(k.min + x * (k.max - k.min)), k.min, k.max);
        break;
      case KnobKind::categorical: {
        const auto n = static_cast<double>(k.categories.size());
        out.values[i] = n <= 1 ? 0.0 : std::clamp(round_half_up(x * (n - 1.0)), 0.0, n - 1.0);
        break;
      }
    }
  }
  return out;
}

/// Decile bucket of a normalized value; 1.0 lands in the top bucket.
inline int bucket_of(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("normalized value outside [0,1]");
  return std::min(static_cast<int>(std::floor(x * kBucketCount)), kBucketCount - 1);
}

inline double bucket_midpoint(int bucket) {
  if (bucket < 0 || bucket >= kBucketCount) {
    throw DomainError("bucket " + std::to_string(bucket) + " outside 0..9");
  }
  return (bucket * 10.0 + 5.0) / 100.0;
}

inline BucketedConfiguration bucketize(const NormalizedConfiguration& ncfg) {
  BucketedConfiguration out;
  out.buckets.reserve(ncfg.values.size());
  for (double x : ncfg.values) out.buckets.push_back(bucket_of(x));
  return out;
}

inline Configuration bucket_to_value(const KnobSpace& space, const BucketedConfiguration& bcfg) {
  if (bcfg.buckets.size() != space.size()) throw DomainError("bucket vector length mismatch");
  NormalizedConfiguration mid;
  mid.values.reserve(bcfg.buckets.size());
  for (int b : bcfg.buckets) mid.values.push_back(bucket_midpoint(b));
  return denormalize(space, mid);
}

// ---------------------------------------------------------------------------
// Knob catalog: one JSON object per line.
//
//   {"name": "shared_buffers", "kind": "integer", "min": 16, "max": 1048576,
//    "default": 16384, "restart_required": true, "unit": "8KB"}
//   {"name": "jit", "kind": "categorical", "categories": ["off", "on"], "default": "on"}
//
// Fields: name, kind, min, max, categories, default, restart_required, unit.
// min/max default to [0, 2^31-1] when omitted. Blank lines and lines starting
// with '#' are ignored.

inline KnobSpec knob_from_json(const nlohmann::json& j) {
  static const char* kFields[] = {"name",     "kind",    "min",  "max", "categories",
                                  "default", "restart_required", "unit"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(std::begin(kFields), std::end(kFields),
                     [&](const char* f) { return it.key() == f; }) == std::end(kFields)) {
      throw ParseError("unknown knob field '" + it.key() + "'");
    }
  }
  KnobSpec k;
  k.name = j.at("name").get<std::string>();
  k.kind = parse_knob_kind(j.at("kind").get<std::string>());
  k.restart_required = j.value("restart_required", false);
  k.unit = j.value("unit", std::string{});
  if (k.kind == KnobKind::categorical) {
    k.categories = j.at("categories").get<std::vector<std::string>>();
    const auto& d = j.at("default");
    if (!d.is_string()) throw ParseError("categorical default must be a string: " + k.name);
    auto idx = k.category_index(d.get<std::string>());
    if (!idx) throw ParseError("default not among categories: " + k.name);
    k.default_value = static_cast<double>(*idx);
  } else {
    k.min = j.value("min", kDefaultKnobMin);
    k.max = j.value("max", kDefaultKnobMax);
    k.default_value = j.at("default").get<double>();
  }
  return k;
}

inline nlohmann::json knob_to_json(const KnobSpec& k) {
  nlohmann::json j;
  j["name"] = k.name;
  j["kind"] = std::string(to_string(k.kind));
  if (k.kind == KnobKind::categorical) {
    j["categories"] = k.categories;
    j["default"] = k.categories.at(static_cast<std::size_t>(k.default_value));
  } else {
    j["min"] = k.min;
    j["max"] = k.max;
    j["default"] = k.default_value;
  }
  j["restart_required"] = k.restart_required;
  if (!k.unit.empty()) j["unit"] = k.unit;
  return j;
}

inline KnobSpace parse_knob_catalog(std::string_view content) {
  std::vector<KnobSpec> knobs;
  std::size_t line_no = 0;
  for (const auto& raw : text::split(content, '\n')) {
    ++line_no;
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    try {
      knobs.push_back(knob_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("knob catalog line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError("knob catalog line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  try {
    return KnobSpace(std::move(knobs));
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("knob catalog: ") + e.what());
  }
}

inline KnobSpace load_knob_catalog(const std::string& path) {
  return parse_knob_catalog(text::read_file(path));
}

inline std::string render_knob_catalog(const KnobSpace& space) {
  std::string out;
  for (const auto& k : space.knobs()) out += knob_to_json(k).dump() + "\n";
  return out;
}

/// {"knob": value, ...} with category names for categorical knobs.
inline nlohmann::json config_to_json(const KnobSpace& space, const Configuration& cfg) {
  space.validate(cfg);
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& k = space[i];
    if (k.kind == KnobKind::categorical) {
      j[k.name] = k.categories[static_cast<std::size_t>(cfg.values[i])];
    } else if (k.kind == KnobKind::integer) {
      j[k.name] = static_cast<long long>(cfg.values[i]);
    } else {
      j[k.name] = cfg.values[i];
    }
  }
  return j;
}

inline Configuration config_from_json(const KnobSpace& space, const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("configuration must be an object");
  Configuration cfg;
  cfg.values.resize(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& k = space[i];
    if (!j.contains(k.name)) throw ParseError("configuration lacks knob " + k.name);
    const auto& v = j.at(k.name);
    if (k.kind == KnobKind::categorical) {
      if (!v.is_string()) throw ParseError("knob " + k.name + " expects a category name");
      cfg.values[i] = space.parse_value(i, v.get<std::string>());
    } else {
      if (!v.is_number()) throw ParseError("knob " + k.name + " expects a number");
      cfg.values[i] = v.get<double>();
    }
  }
  if (j.size() != space.size()) throw ParseError("configuration has unknown knobs");
  space.validate(cfg);
  return cfg;
}

/// knob=value lines in catalog order.
inline std::string render_configuration(const KnobSpace& space, const Configuration& cfg) {
  std::string out;
  for (std::size_t i = 0; i < space.size(); ++i) {
    out += space[i].name + "=" + space.format_value(i, cfg.values[i]) + "\n";
  }
  return out;
}

}  // namespace e2etune

#pragma once

#include <cstdio>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "e2etune/env.hpp"
#include "e2etune/error.hpp"
#include "e2etune/features.hpp"
#include "e2etune/knobspace.hpp"
#include "e2etune/text.hpp"
#include "e2etune/workload.hpp"
#include "json.hpp"

// Versioned JSONL stores. Line one is {"format": ..., "version": ...}; every
// following non-empty line is one record.
namespace e2etune {

inline constexpr int kStoreVersion = 1;
inline constexpr std::string_view kWorkloadStore = "e2etune-workloads";
inline constexpr std::string_view kFeatureStore = "e2etune-features";
inline constexpr std::string_view kObservationStore = "e2etune-observations";
inline constexpr std::string_view kSampleStore = "e2etune-training-samples";

/// Per-workload features plus the default run they were taken from.
struct FeatureRecord {
  std::string workload_id;
  std::string benchmark;
  WorkloadKind kind = WorkloadKind::olap;
  std::string text;
  std::vector<double> vector;
  PerfMetric default_perf;
  double default_seconds = 0.0;
};

enum class LabelSource { cost_model, real_exec };

inline std::string_view to_string(LabelSource s) { return s == LabelSource::cost_model ? "cost_model" : "real_exec"; }

inline LabelSource parse_label_source(std::string_view s) {
  if (s == "cost_model") return LabelSource::cost_model;
  if (s == "real_exec") return LabelSource::real_exec;
  throw ParseError("unknown label source '" + std::string(s) + "'");
}

struct TrainingSample {
  std::string workload_id;
  std::string benchmark;
  WorkloadKind kind = WorkloadKind::olap;
  std::string feature_text;
  std::vector<double> feature_vector;
  BucketedConfiguration label;
  PerfMetric perf_default;
  PerfMetric perf_tuned;
  LabelSource label_source = LabelSource::cost_model;
};

namespace store {

inline std::string render(std::string_view format, const std::vector<nlohmann::json>& records) {
  std::string out = nlohmann::json{{"format", format}, {"version", kStoreVersion}}.dump();
  out += '\n';
  for (const auto& r : records) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

inline std::vector<nlohmann::json> parse(std::string_view content, std::string_view format) {
  std::vector<nlohmann::json> out;
  bool header = false;
  std::size_t line_no = 0;
  for (const auto& raw : text::split(content, '\n')) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string(format) + " line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!header) {
      if (!j.is_object() || j.value("format", std::string()) != format) {
        throw ParseError("expected a " + std::string(format) + " store header");
      }
      if (j.value("version", -1) != kStoreVersion) {
        throw ParseError(std::string(format) + " store version " + j.value("version", nlohmann::json()).dump() +
                             " is not supported (expected " + std::to_string(kStoreVersion) + ")",
                         "version_mismatch");
      }
      header = true;
      continue;
    }
    out.push_back(std::move(j));
  }
  if (!header) throw ParseError("empty " + std::string(format) + " store");
  return out;
}

/// Write-then-rename so an interrupted run never leaves a truncated store.
inline void write_atomic(const std::string& path, std::string_view content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  const std::string tmp = path + ".tmp";
  text::write_file(tmp, content);
  std::filesystem::rename(tmp, path);
}

template <typename T, typename Fn>
std::vector<T> load(const std::string& path, std::string_view format, Fn&& from_json) {
  if (!std::filesystem::exists(path)) throw InvalidArgument("missing store " + path);
  std::vector<T> out;
  for (const auto& j : parse(text::read_file(path), format)) {
    try {
      out.push_back(from_json(j));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string(format) + ": bad record: " + e.what());
    }
  }
  return out;
}

}  // namespace store

// --- record codecs ---------------------------------------------------------

inline nlohmann::json perf_to_json(const PerfMetric& p) {
  return {{"value", p.value}, {"orientation", to_string(p.orientation)}};
}

inline PerfMetric perf_from_json(const nlohmann::json& j) {
  return {j.at("value").get<double>(), parse_orientation(j.at("orientation").get<std::string>())};
}

inline nlohmann::json to_json(const Workload& w) {
  nlohmann::json j = {{"id", w.id}, {"kind", to_string(w.kind)}, {"benchmark", w.benchmark}};
  if (w.kind == WorkloadKind::olap) {
    j["queries"] = w.queries;
  } else {
    nlohmann::json mix = nlohmann::json::array();
    for (const auto& t : w.transaction_mix) mix.push_back({{"template", t.template_id}, {"weight", t.weight}});
    j["transaction_mix"] = mix;
  }
  return j;
}

inline Workload workload_from_json(const nlohmann::json& j) {
  Workload w;
  w.id = j.at("id").get<std::string>();
  w.kind = parse_workload_kind(j.at("kind").get<std::string>());
  w.benchmark = j.at("benchmark").get<std::string>();
  if (w.kind == WorkloadKind::olap) {
    w.queries = j.at("queries").get<std::vector<std::string>>();
  } else {
    for (const auto& t : j.at("transaction_mix")) {
      w.transaction_mix.push_back({t.at("template").get<std::string>(), t.at("weight").get<double>()});
    }
  }
  w.validate();
  return w;
}

inline nlohmann::json to_json(const FeatureRecord& f) {
  return {{"workload_id", f.workload_id}, {"benchmark", f.benchmark},     {"kind", to_string(f.kind)},
          {"text", f.text},               {"vector", f.vector},           {"default_perf", perf_to_json(f.default_perf)},
          {"default_seconds", f.default_seconds}};
}

inline FeatureRecord feature_record_from_json(const nlohmann::json& j) {
  FeatureRecord f;
  f.workload_id = j.at("workload_id").get<std::string>();
  f.benchmark = j.at("benchmark").get<std::string>();
  f.kind = parse_workload_kind(j.at("kind").get<std::string>());
  f.text = j.at("text").get<std::string>();
  f.vector = j.at("vector").get<std::vector<double>>();
  f.default_perf = perf_from_json(j.at("default_perf"));
  f.default_seconds = j.at("default_seconds").get<double>();
  return f;
}

inline nlohmann::json to_json(const KnobSpace& space, const Observation& o) {
  return {{"workload_id", o.workload_id},
          {"config", config_to_json(space, o.configuration)},
          {"perf", perf_to_json(o.perf)},
          {"metrics", metrics_to_json(o.metrics)},
          {"source", to_string(o.source)}};
}

inline Observation observation_from_json(const KnobSpace& space, const nlohmann::json& j) {
  Observation o;
  o.workload_id = j.at("workload_id").get<std::string>();
  o.configuration = config_from_json(space, j.at("config"));
  o.perf = perf_from_json(j.at("perf"));
  o.metrics = metrics_from_json(j.at("metrics"));
  o.source = parse_observation_source(j.at("source").get<std::string>());
  return o;
}

inline nlohmann::json to_json(const TrainingSample& s) {
  return {{"workload_id", s.workload_id},
          {"benchmark", s.benchmark},
          {"kind", to_string(s.kind)},
          {"feature_text", s.feature_text},
          {"feature_vector", s.feature_vector},
          {"label", s.label.buckets},
          {"perf_default", perf_to_json(s.perf_default)},
          {"perf_tuned", perf_to_json(s.perf_tuned)},
          {"label_source", to_string(s.label_source)}};
}

inline TrainingSample training_sample_from_json(const nlohmann::json& j) {
  TrainingSample s;
  s.workload_id = j.at("workload_id").get<std::string>();
  s.benchmark = j.at("benchmark").get<std::string>();
  s.kind = parse_workload_kind(j.at("kind").get<std::string>());
  s.feature_text = j.at("feature_text").get<std::string>();
  s.feature_vector = j.at("feature_vector").get<std::vector<double>>();
  s.label.buckets = j.at("label").get<std::vector<int>>();
  for (int b : s.label.buckets) {
    if (b < 0 || b >= kBucketCount) throw ParseError("label bucket outside [0, 9]");
  }
  s.perf_default = perf_from_json(j.at("perf_default"));
  s.perf_tuned = perf_from_json(j.at("perf_tuned"));
  s.label_source = parse_label_source(j.at("label_source").get<std::string>());
  return s;
}

// --- typed helpers ------------------------------------------------------------

inline std::string render_workloads(const std::vector<Workload>& ws) {
  std::vector<nlohmann::json> r;
  for (const auto& w : ws) r.push_back(to_json(w));
  return store::render(kWorkloadStore, r);
}

inline std::vector<Workload> load_workloads(const std::string& path) {
  return store::load<Workload>(path, kWorkloadStore, workload_from_json);
}

inline std::string render_features(const std::vector<FeatureRecord>& fs) {
  std::vector<nlohmann::json> r;
  for (const auto& f : fs) r.push_back(to_json(f));
  return store::render(kFeatureStore, r);
}

inline std::vector<FeatureRecord> load_features(const std::string& path) {
  return store::load<FeatureRecord>(path, kFeatureStore, feature_record_from_json);
}

inline std::string render_observations(const KnobSpace& space, const std::vector<Observation>& os) {
  std::vector<nlohmann::json> r;
  for (const auto& o : os) r.push_back(to_json(space, o));
  return store::render(kObservationStore, r);
}

inline std::vector<Observation> load_observations(const KnobSpace& space, const std::string& path) {
  return store::load<Observation>(path, kObservationStore,
                                  [&](const nlohmann::json& j) { return observation_from_json(space, j); });
}

/// Refuses to persist any sample whose workload is on the exclusion list
/// (held-out evaluation workloads must never leak into training data).
inline std::string render_samples(const std::vector<TrainingSample>& ss, const std::set<std::string>& excluded = {}) {
  std::vector<nlohmann::json> r;
  for (const auto& s : ss) {
    if (excluded.count(s.workload_id)) {
      throw InvalidArgument("workload " + s.workload_id + " is excluded from training data");
    }
    r.push_back(to_json(s));
  }
  return store::render(kSampleStore, r);
}

inline std::vector<TrainingSample> load_samples(const std::string& path) {
  return store::load<TrainingSample>(path, kSampleStore, training_sample_from_json);
}

}  // namespace e2etune

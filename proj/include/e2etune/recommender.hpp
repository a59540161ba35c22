#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "e2etune/costmodel.hpp"
#include "e2etune/error.hpp"
#include "e2etune/knobspace.hpp"
#include "e2etune/random.hpp"
#include "e2etune/store.hpp"
#include "e2etune/text.hpp"
#include "e2etune/transport.hpp"
#include "e2etune/trees.hpp"
#include "json.hpp"

namespace e2etune {

// ---------------------------------------------------------------------------
// LM output wire format: one `knob_name: P1% to P2%` line per knob.

enum class LmErrorKind { empty, malformed_line, unknown_knob, duplicate_knob, missing_knob, bad_range };

inline std::string_view to_string(LmErrorKind k) {
  switch (k) {
    case LmErrorKind::empty: return "empty";
    case LmErrorKind::malformed_line: return "malformed_line";
    case LmErrorKind::unknown_knob: return "unknown_knob";
    case LmErrorKind::duplicate_knob: return "duplicate_knob";
    case LmErrorKind::missing_knob: return "missing_knob";
    case LmErrorKind::bad_range: return "bad_range";
  }
  return "?";
}

/// Unparseable LM completion. Carries the offending line and the raw text.
class LmOutputError : public ParseError {
 public:
  LmOutputError(LmErrorKind kind, std::size_t line, const std::string& message, std::string raw)
      : ParseError(fmt::format("lm output {} (line {}): {}", to_string(kind), line, message), "lm_output"),
        kind_(kind), line_(line), raw_(std::move(raw)) {}

  LmErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }  // 1-based, 0 when not tied to a line
  const std::string& raw() const noexcept { return raw_; }

 private:
  LmErrorKind kind_;
  std::size_t line_;
  std::string raw_;
};

inline std::string render_lm_output(const KnobSpace& space, const BucketedConfiguration& b) {
  if (b.buckets.size() != space.size()) throw InvalidArgument("bucket vector length mismatch");
  std::string out;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const int p = b.buckets[i] * 10;
    if (b.buckets[i] < 0 || b.buckets[i] >= kBucketCount) throw DomainError("bucket outside [0, 9]");
    out += fmt::format("{}: {}% to {}%\n", space[i].name, p, p + 10);
  }
  return out;
}

inline BucketedConfiguration parse_lm_output(const KnobSpace& space, std::string_view textual) {
  const std::string raw(textual);
  if (text::trim(textual).empty()) throw LmOutputError(LmErrorKind::empty, 0, "no content", raw);
  static const std::regex range_re(R"(^(\d{1,3})\s*%\s*to\s*(\d{1,3})\s*%$)");
  BucketedConfiguration b;
  b.buckets.assign(space.size(), -1);
  std::size_t line_no = 0;
  for (const auto& line_raw : text::split(textual, '\n')) {
    ++line_no;
    const auto line = text::trim(line_raw);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw LmOutputError(LmErrorKind::malformed_line, line_no, "expected 'knob: P1% to P2%'", raw);
    }
    const auto name = text::trim(line.substr(0, colon));
    const std::string rhs(text::trim(line.substr(colon + 1)));
    const auto idx = space.index_of(name);
    if (!idx) throw LmOutputError(LmErrorKind::unknown_knob, line_no, "unknown knob '" + std::string(name) + "'", raw);
    if (b.buckets[*idx] != -1) {
      throw LmOutputError(LmErrorKind::duplicate_knob, line_no, "knob '" + std::string(name) + "' repeated", raw);
    }
    std::smatch m;
    if (!std::regex_match(rhs, m, range_re)) {
      throw LmOutputError(LmErrorKind::bad_range, line_no, "range '" + rhs + "' not of the form P1% to P2%", raw);
    }
    const int p1 = std::stoi(m[1].str());
    const int p2 = std::stoi(m[2].str());
    if (p1 % 10 != 0 || p1 < 0 || p1 > 90 || p2 != p1 + 10) {
      throw LmOutputError(LmErrorKind::bad_range, line_no, "range '" + rhs + "' is not one decile bucket", raw);
    }
    b.buckets[*idx] = p1 / 10;
  }
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (b.buckets[i] == -1) throw LmOutputError(LmErrorKind::missing_knob, 0, "knob '" + space[i].name + "' missing", raw);
  }
  return b;
}

// ---------------------------------------------------------------------------
// Predictor port

struct PredictorInput {
  std::string text;            // LM input sequence
  std::vector<double> vector;  // normalized metrics
};

inline PredictorInput predictor_input(const FeatureRecord& f) { return {f.text, f.vector}; }
inline PredictorInput predictor_input(const TrainingSample& s) { return {s.feature_text, s.feature_vector}; }

/// One sampled candidate; `config` is empty when the backend output failed to parse.
struct Draw {
  std::optional<BucketedConfiguration> config;
  std::string error;
  std::string raw;
};

class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual std::string backend() const = 0;
  virtual BucketedConfiguration greedy(const PredictorInput& in) const = 0;
  virtual std::vector<Draw> sample(const PredictorInput& in, double temperature, std::size_t n, Rng& rng) const = 0;
};

inline constexpr double kGreedyTemperature = 1e-6;

/// Draw from p^(1/T) normalized; T below kGreedyTemperature is the argmax
/// (lowest bucket on ties).
inline int soften_and_draw(std::span<const double> p, double temperature, Rng& rng) {
  if (p.empty()) throw InvalidArgument("empty distribution");
  if (!(temperature >= 0.0)) throw DomainError("temperature must be >= 0");
  const auto best = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
  if (temperature < kGreedyTemperature) return best;
  const double lmax = std::log(p[static_cast<std::size_t>(best)]);
  std::vector<double> w(p.size(), 0.0);
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] > 0.0) w[k] = std::exp((std::log(p[k]) - lmax) / temperature);
    sum += w[k];
  }
  const double u = rng.uniform() * sum;
  double acc = 0.0;
  int last = best;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] <= 0.0) continue;
    acc += w[k];
    last = static_cast<int>(k);
    if (u < acc) return last;
  }
  return last;
}

// ---------------------------------------------------------------------------
// Per-knob classifier backend

struct ClassifierParams {
  std::size_t n_trees = 1000;
  int max_depth = 50;
  std::size_t min_samples = 50;
  std::uint64_t seed = 0;
};

inline constexpr std::string_view kPredictorFormat = "e2etune-predictor";
inline constexpr int kPredictorVersion = 1;

class PerKnobClassifier : public Predictor {
 public:
  static PerKnobClassifier train(const std::vector<TrainingSample>& samples, std::size_t n_knobs,
                                 const ClassifierParams& params = {}) {
    if (samples.size() < params.min_samples) {
      throw InvalidArgument(fmt::format("classifier needs >= {} samples, got {}", params.min_samples, samples.size()));
    }
    const std::size_t dim = samples.front().feature_vector.size();
    ml::Matrix x;
    for (const auto& s : samples) {
      if (s.feature_vector.size() != dim) throw InvalidArgument("inconsistent feature dimensions");
      if (s.label.buckets.size() != n_knobs) throw InvalidArgument("label length does not match knob count");
      x.push_row(s.feature_vector);
    }
    PerKnobClassifier m;
    m.dim_ = dim;
    m.params_ = params;
    m.knobs_.resize(n_knobs);
    for (std::size_t i = 0; i < n_knobs; ++i) {
      std::vector<int> y;
      for (const auto& s : samples) y.push_back(s.label.buckets[i]);
      if (std::all_of(y.begin(), y.end(), [&](int v) { return v == y.front(); })) {
        m.knobs_[i].constant = y.front();
        spdlog::info("knob {}: every label is bucket {}, using a constant classifier", i, y.front());
        continue;
      }
      ml::ForestParams fp;
      fp.n_trees = params.n_trees;
      fp.tree.max_depth = params.max_depth;
      fp.tree.max_features = ml::sqrt_features(dim);
      fp.seed = derive_seed(params.seed, static_cast<std::uint64_t>(i));
      m.knobs_[i].forest.fit(x, y, kBucketCount, fp);
    }
    return m;
  }

  std::string backend() const override { return "classifier"; }
  std::size_t knob_count() const { return knobs_.size(); }
  std::size_t input_dim() const { return dim_; }

  /// Class distribution of every knob.
  std::vector<std::vector<double>> probabilities(const std::vector<double>& features) const {
    if (features.size() != dim_) throw InvalidArgument("feature dimension mismatch");
    std::vector<std::vector<double>> out;
    for (const auto& k : knobs_) {
      if (k.constant) {
        std::vector<double> p(kBucketCount, 0.0);
        p[static_cast<std::size_t>(*k.constant)] = 1.0;
        out.push_back(std::move(p));
      } else {
        out.push_back(k.forest.proba(features));
      }
    }
    return out;
  }

  BucketedConfiguration greedy(const PredictorInput& in) const override {
    Rng unused(0);
    return draw(probabilities(in.vector), 0.0, unused);
  }

  std::vector<Draw> sample(const PredictorInput& in, double temperature, std::size_t n, Rng& rng) const override {
    const auto p = probabilities(in.vector);
    std::vector<Draw> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back({draw(p, temperature, rng), {}, {}});
    return out;
  }

  static BucketedConfiguration draw(const std::vector<std::vector<double>>& p, double temperature, Rng& rng) {
    BucketedConfiguration b;
    for (const auto& pk : p) b.buckets.push_back(soften_and_draw(pk, temperature, rng));
    return b;
  }

  std::string serialize() const {
    nlohmann::json head = {{"format", kPredictorFormat},
                           {"version", kPredictorVersion},
                           {"knobs", knobs_.size()},
                           {"input_dim", dim_},
                           {"n_trees", params_.n_trees},
                           {"max_depth", params_.max_depth},
                           {"seed", params_.seed}};
    std::string out = head.dump() + "\n";
    for (std::size_t i = 0; i < knobs_.size(); ++i) {
      if (knobs_[i].constant) {
        out += fmt::format("knob {} constant {}\n", i, *knobs_[i].constant);
      } else {
        out += fmt::format("knob {} forest\n", i);
        knobs_[i].forest.write(out);
      }
    }
    return out;
  }

  static PerKnobClassifier deserialize(std::string_view textual) {
    ml::LineReader in(textual);
    nlohmann::json head;
    try {
      head = nlohmann::json::parse(in.next());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("predictor header: ") + e.what());
    }
    if (head.value("format", std::string()) != kPredictorFormat) throw ParseError("not a predictor file");
    if (head.value("version", -1) != kPredictorVersion) {
      throw ParseError("predictor version " + head.value("version", nlohmann::json()).dump() + " is not supported",
                       "version_mismatch");
    }
    PerKnobClassifier m;
    m.dim_ = head.at("input_dim").get<std::size_t>();
    m.params_.n_trees = head.at("n_trees").get<std::size_t>();
    m.params_.max_depth = head.at("max_depth").get<int>();
    m.params_.seed = head.at("seed").get<std::uint64_t>();
    m.knobs_.resize(head.at("knobs").get<std::size_t>());
    for (std::size_t i = 0; i < m.knobs_.size(); ++i) {
      const auto parts = text::split(in.next(), ' ');
      if (parts.size() < 3 || parts[0] != "knob" || text::parse_int(parts[1]) != static_cast<long long>(i)) {
        throw ParseError("predictor: expected knob " + std::to_string(i));
      }
      if (parts[2] == "constant" && parts.size() == 4) {
        m.knobs_[i].constant = static_cast<int>(text::parse_int(parts[3]));
      } else if (parts[2] == "forest") {
        m.knobs_[i].forest = ml::RandomForestClassifier::read(in);
      } else {
        throw ParseError("predictor: bad knob line");
      }
    }
    return m;
  }

 private:
  struct KnobModel {
    std::optional<int> constant;
    ml::RandomForestClassifier forest;
  };
  std::vector<KnobModel> knobs_;
  std::size_t dim_ = 0;
  ClassifierParams params_;
};

// ---------------------------------------------------------------------------
// Remote LM backend
//
// Request body:  {"prompt": <feature text>, "temperature": T, "n": k}
// Response body: {"completions": [<text>, ...]}

struct RemoteOptions {
  std::size_t retries = 2;
  std::string audit_path;  // raw completions appended here when set
};

class RemoteLmPredictor : public Predictor {
 public:
  RemoteLmPredictor(const KnobSpace& space, Transport& transport, RemoteOptions opt = {})
      : space_(space), transport_(transport), opt_(std::move(opt)) {}

  std::string backend() const override { return "remote"; }

  BucketedConfiguration greedy(const PredictorInput& in) const override {
    const auto raw = request(in, 0.0, 1);
    return parse_lm_output(space_, raw.front());
  }

  std::vector<Draw> sample(const PredictorInput& in, double temperature, std::size_t n, Rng&) const override {
    std::vector<Draw> out;
    for (const auto& r : request(in, temperature, n)) {
      Draw d;
      d.raw = r;
      try {
        d.config = parse_lm_output(space_, r);
      } catch (const LmOutputError& e) {
        d.error = e.what();
        spdlog::warn("remote completion rejected: {}", e.what());
      }
      out.push_back(std::move(d));
    }
    return out;
  }

  std::vector<std::string> audit_log() const {
    std::lock_guard lock(mu_);
    return audit_;
  }

 private:
  std::vector<std::string> request(const PredictorInput& in, double temperature, std::size_t n) const {
    const auto body = nlohmann::json{{"prompt", in.text}, {"temperature", temperature}, {"n", n}}.dump();
    std::string last;
    for (std::size_t attempt = 0; attempt <= opt_.retries; ++attempt) {
      try {
        const auto reply = nlohmann::json::parse(transport_.post(body));
        auto completions = reply.at("completions").get<std::vector<std::string>>();
        if (completions.empty()) throw ServiceError("remote returned no completions");
        record(completions, temperature);
        return completions;
      } catch (const ServiceError& e) {
        last = e.what();
      } catch (const nlohmann::json::exception& e) {
        last = std::string("malformed response: ") + e.what();
      }
      spdlog::warn("remote predictor attempt {} failed: {}", attempt + 1, last);
    }
    throw ServiceError(fmt::format("remote predictor failed after {} attempts: {}", opt_.retries + 1, last));
  }

  void record(const std::vector<std::string>& completions, double temperature) const {
    std::lock_guard lock(mu_);
    for (const auto& c : completions) audit_.push_back(c);
    if (opt_.audit_path.empty()) return;
    std::ofstream f(opt_.audit_path, std::ios::app);
    for (const auto& c : completions) f << nlohmann::json{{"temperature", temperature}, {"completion", c}}.dump() << "\n";
  }

  const KnobSpace& space_;
  Transport& transport_;
  RemoteOptions opt_;
  mutable std::mutex mu_;
  mutable std::vector<std::string> audit_;
};

// ---------------------------------------------------------------------------
// Sampling then ranking

struct Recommendation {
  Configuration configuration;
  double predicted_score = 0.0;
  std::size_t chosen = 0;  // index into candidates
  std::vector<BucketedConfiguration> candidates;
  std::vector<double> scores;
  std::vector<std::string> failures;
};

/// Index of the highest score; ties go to the earliest.
inline std::size_t argmax_first(const std::vector<double>& scores) {
  if (scores.empty()) throw InvalidArgument("no candidates to rank");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

inline Recommendation rank_candidates(const KnobSpace& space, std::vector<BucketedConfiguration> candidates,
                                      const std::function<double(const Configuration&)>& scorer) {
  Recommendation r;
  r.candidates = std::move(candidates);
  std::vector<Configuration> decoded;
  for (const auto& c : r.candidates) {
    decoded.push_back(bucket_to_value(space, c));
    r.scores.push_back(scorer(decoded.back()));
  }
  r.chosen = argmax_first(r.scores);
  r.configuration = decoded[r.chosen];
  r.predicted_score = r.scores[r.chosen];
  return r;
}

/// Draws k candidates, decodes each and returns the one the cost model
/// scores highest.
inline Recommendation recommend(const PredictorInput& in, const Predictor& predictor, const CostModel& model,
                                const KnobSpace& space, std::size_t k, double temperature, Rng& rng) {
  if (k == 0) throw InvalidArgument("k must be >= 1");
  std::vector<BucketedConfiguration> ok;
  std::vector<std::string> failures;
  std::string first_raw;
  for (auto& d : predictor.sample(in, temperature, k, rng)) {
    if (d.config) {
      ok.push_back(std::move(*d.config));
    } else {
      if (failures.empty()) first_raw = d.raw;
      failures.push_back(d.error);
    }
  }
  if (ok.empty()) {
    throw LmOutputError(LmErrorKind::malformed_line, 0,
                        fmt::format("all {} samples unparseable; first: {}", k, failures.front()), first_raw);
  }
  auto r = rank_candidates(space, std::move(ok), [&](const Configuration& c) {
    return model.predict(normalize(space, c), in.vector);
  });
  r.failures = std::move(failures);
  return r;
}

/// Greedy decode, no ranking.
inline Configuration recommend_greedy(const PredictorInput& in, const Predictor& predictor, const KnobSpace& space) {
  return bucket_to_value(space, predictor.greedy(in));
}

}  // namespace e2etune

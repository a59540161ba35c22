#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "e2etune/error.hpp"
#include "e2etune/random.hpp"
#include "e2etune/text.hpp"

// CART trees and the three ensembles built from them: a bagged regression
// forest, a gradient-boosted regressor and a bagged classification forest.
namespace e2etune::ml {

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  void push_row(std::span<const double> values) {
    if (rows_ == 0 && cols_ == 0) cols_ = values.size();
    if (values.size() != cols_) throw InvalidArgument("matrix row width mismatch");
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Runs fn(i) for i in [0, n) on up to hardware_concurrency threads. Each
/// index must write only to its own slot so results do not depend on timing.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct TreeParams {
  int max_depth = 6;
  std::size_t min_samples_split = 2;
  std::size_t min_samples_leaf = 1;
  std::size_t max_features = 0;  // 0: every feature at every split
  bool extra_random = false;  // one uniform cut in the node's range per candidate feature
};

struct TreeNode {
  int feature = -1;  // negative: leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;           // regression output
  std::uint32_t dist_offset = 0;  // classification leaf distribution
};

class DecisionTree {
 public:
  int num_classes() const { return num_classes_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(),
                                                  [](const TreeNode& n) { return n.feature < 0; }));
  }

  const TreeNode& leaf(std::span<const double> x) const {
    std::size_t i = 0;
    while (nodes_[i].feature >= 0) {
      const auto& n = nodes_[i];
      i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return nodes_[i];
  }

  double predict(std::span<const double> x) const { return leaf(x).value; }

  std::span<const double> proba(std::span<const double> x) const {
    const auto& l = leaf(x);
    return {dists_.data() + l.dist_offset, static_cast<std::size_t>(num_classes_)};
  }

  // Serialization. One node per line:
  //   n <feature> <threshold> <left> <right>
  //   l <value>
  //   c <class>:<probability> ...            (non-zero entries only)
  void write(std::string& out) const {
    out += "tree " + std::to_string(nodes_.size()) + " " + std::to_string(num_classes_) + "\n";
    for (const auto& n : nodes_) {
      if (n.feature >= 0) {
        out += "n " + std::to_string(n.feature) + " " + text::shortest(n.threshold) + " " +
               std::to_string(n.left) + " " + std::to_string(n.right) + "\n";
      } else if (num_classes_ == 0) {
        out += "l " + text::shortest(n.value) + "\n";
      } else {
        out += "c";
        for (int k = 0; k < num_classes_; ++k) {
          const double p = dists_[n.dist_offset + static_cast<std::size_t>(k)];
          if (p != 0.0) out += " " + std::to_string(k) + ":" + text::shortest(p);
        }
        out += "\n";
      }
    }
  }

  template <typename LineReader>
  static DecisionTree read(LineReader& in) {
    const auto head = text::split(in.next(), ' ');
    if (head.size() != 3 || head[0] != "tree") throw ParseError("expected tree header");
    DecisionTree t;
    const auto count = static_cast<std::size_t>(text::parse_int(head[1]));
    t.num_classes_ = static_cast<int>(text::parse_int(head[2]));
    t.nodes_.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      const auto f = text::split(in.next(), ' ');
      auto& n = t.nodes_[i];
      if (f.empty()) throw ParseError("empty tree node line");
      if (f[0] == "n" && f.size() == 5) {
        n.feature = static_cast<int>(text::parse_int(f[1]));
        n.threshold = text::parse_double(f[2]);
        n.left = static_cast<int>(text::parse_int(f[3]));
        n.right = static_cast<int>(text::parse_int(f[4]));
        if (n.left <= 0 || n.right <= 0 || static_cast<std::size_t>(n.left) >= count ||
            static_cast<std::size_t>(n.right) >= count) {
          throw ParseError("tree child index out of range");
        }
      } else if (f[0] == "l" && f.size() == 2 && t.num_classes_ == 0) {
        n.value = text::parse_double(f[1]);
      } else if (f[0] == "c" && t.num_classes_ > 0) {
        n.dist_offset = static_cast<std::uint32_t>(t.dists_.size());
        t.dists_.resize(t.dists_.size() + static_cast<std::size_t>(t.num_classes_), 0.0);
        for (std::size_t j = 1; j < f.size(); ++j) {
          const auto kv = text::split(f[j], ':');
          if (kv.size() != 2) throw ParseError("bad class entry");
          const auto k = text::parse_int(kv[0]);
          if (k < 0 || k >= t.num_classes_) throw ParseError("class index out of range");
          t.dists_[n.dist_offset + static_cast<std::size_t>(k)] = text::parse_double(kv[1]);
        }
      } else {
        throw ParseError("malformed tree node line");
      }
    }
    return t;
  }

 private:
  template <typename Criterion>
  friend class TreeBuilder;

  std::vector<TreeNode> nodes_;
  std::vector<double> dists_;
  int num_classes_ = 0;
};

/// Line cursor over serialized model text.
class LineReader {
 public:
  explicit LineReader(std::string_view s) : s_(s) {}

  std::string_view next() {
    if (pos_ >= s_.size()) throw ParseError("unexpected end of model text");
    const auto end = s_.find('\n', pos_);
    const auto stop = end == std::string_view::npos ? s_.size() : end;
    auto line = s_.substr(pos_, stop - pos_);
    pos_ = stop + 1;
    return line;
  }

  bool done() const { return pos_ >= s_.size(); }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Split criteria

/// Squared error. The split score is sum_L^2/n_L + sum_R^2/n_R, which is the
/// SSE reduction up to a node constant.
struct SquaredError {
  std::span<const double> y;

  struct Stats {
    double n = 0, sum = 0, sumsq = 0;
    void add(double v) { n += 1; sum += v; sumsq += v * v; }
    void remove(double v) { n -= 1; sum -= v; sumsq -= v * v; }
  };

  Stats make() const { return {}; }
  void add(Stats& s, std::size_t i) const { s.add(y[i]); }
  void remove(Stats& s, std::size_t i) const { s.remove(y[i]); }
  static double score(const Stats& s) { return s.n > 0 ? s.sum * s.sum / s.n : 0.0; }
  static bool pure(const Stats& s) {
    const double var = s.sumsq / s.n - (s.sum / s.n) * (s.sum / s.n);
    return var <= 1e-14 * std::max(1.0, s.sumsq / s.n);
  }
  void finish_leaf(const Stats& s, TreeNode& node, std::vector<double>&) const { node.value = s.sum / s.n; }
};

/// Gini impurity. Split score is sum_k c_Lk^2/n_L + sum_k c_Rk^2/n_R.
struct Gini {
  std::span<const int> labels;
  int num_classes;

  struct Stats {
    double n = 0;
    double sq = 0;  // sum of squared class counts
    std::vector<double> counts;
  };

  Stats make() const { return Stats{0, 0, std::vector<double>(static_cast<std::size_t>(num_classes), 0.0)}; }
  void add(Stats& s, std::size_t i) const {
    auto& c = s.counts[static_cast<std::size_t>(labels[i])];
    s.sq += 2 * c + 1;
    c += 1;
    s.n += 1;
  }
  void remove(Stats& s, std::size_t i) const {
    auto& c = s.counts[static_cast<std::size_t>(labels[i])];
    s.sq -= 2 * c - 1;
    c -= 1;
    s.n -= 1;
  }
  static double score(const Stats& s) { return s.n > 0 ? s.sq / s.n : 0.0; }
  static bool pure(const Stats& s) {
    return std::count_if(s.counts.begin(), s.counts.end(), [](double c) { return c > 0; }) <= 1;
  }
  void finish_leaf(const Stats& s, TreeNode& node, std::vector<double>& dists) const {
    node.dist_offset = static_cast<std::uint32_t>(dists.size());
    for (double c : s.counts) dists.push_back(c / s.n);
  }
};

/// Depth-first CART growth over presorted feature columns. Each column holds
/// the node's samples ordered by that feature; a split stable-partitions
/// every column so children stay sorted without re-sorting.
template <typename Criterion>
class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, Criterion crit, const TreeParams& params, Rng& rng)
      : x_(x), crit_(std::move(crit)), params_(params), rng_(rng) {}

  /// `samples` may contain repeats (bootstrap draws).
  DecisionTree build(const std::vector<std::size_t>& samples, int num_classes) {
    if (samples.empty()) throw InvalidArgument("cannot fit a tree on zero samples");
    tree_ = DecisionTree{};
    tree_.num_classes_ = num_classes;
    rows_ = samples;
    const std::size_t n = rows_.size();
    const std::size_t d = x_.cols();
    cols_.assign(d, std::vector<Entry>(n));
    for (std::size_t f = 0; f < d; ++f) {
      auto& c = cols_[f];
      for (std::size_t p = 0; p < n; ++p) c[p] = {x_(rows_[p], f), static_cast<std::uint32_t>(p)};
      std::sort(c.begin(), c.end(), [](const Entry& a, const Entry& b) {
        return a.v < b.v || (a.v == b.v && a.pos < b.pos);
      });
    }
    left_.assign(n, 0);
    scratch_.resize(n);
    grow(0, n, 0);
    return std::move(tree_);
  }

 private:
  struct Entry {
    double v;
    std::uint32_t pos;
  };

  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
    std::size_t left_count = 0;
  };

  int grow(std::size_t begin, std::size_t end, int depth) {
    const int id = static_cast<int>(tree_.nodes_.size());
    tree_.nodes_.emplace_back();
    auto stats = crit_.make();
    for (std::size_t k = begin; k < end; ++k) crit_.add(stats, rows_[cols_[0][k].pos]);
    const std::size_t m = end - begin;

    const bool stop = depth >= params_.max_depth || m < params_.min_samples_split ||
                      m < 2 * std::max<std::size_t>(1, params_.min_samples_leaf) || Criterion::pure(stats);
    Split best;
    if (!stop) best = find_split(begin, end, stats);
    if (best.feature < 0) {
      crit_.finish_leaf(stats, tree_.nodes_[static_cast<std::size_t>(id)], tree_.dists_);
      return id;
    }

    const auto& split_col = cols_[static_cast<std::size_t>(best.feature)];
    for (std::size_t k = begin; k < end; ++k) left_[split_col[k].pos] = split_col[k].v <= best.threshold;
    for (auto& c : cols_) {
      std::size_t l = begin, r = 0;
      for (std::size_t k = begin; k < end; ++k) {
        if (left_[c[k].pos]) {
          c[l++] = c[k];
        } else {
          scratch_[r++] = c[k];
        }
      }
      std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(r),
                c.begin() + static_cast<std::ptrdiff_t>(l));
    }
    const std::size_t mid = begin + best.left_count;
    const int left = grow(begin, mid, depth + 1);
    const int right = grow(mid, end, depth + 1);
    auto& node = tree_.nodes_[static_cast<std::size_t>(id)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = left;
    node.right = right;
    return id;
  }

  Split find_split(std::size_t begin, std::size_t end, const typename Criterion::Stats& parent) {
    const std::size_t d = x_.cols();
    std::vector<std::size_t> features;
    if (params_.max_features == 0 || params_.max_features >= d) {
      features.resize(d);
      for (std::size_t f = 0; f < d; ++f) features[f] = f;
    } else {
      features = rng_.choose(d, params_.max_features);
      std::sort(features.begin(), features.end());
    }

    const double parent_score = Criterion::score(parent);
    const std::size_t m = end - begin;
    const std::size_t min_leaf = std::max<std::size_t>(1, params_.min_samples_leaf);
    Split best;
    for (std::size_t f : features) {
      const auto& c = cols_[f];
      if (c[begin].v == c[end - 1].v) continue;
      if (params_.extra_random) {
        const double cut = c[begin].v + rng_.uniform() * (c[end - 1].v - c[begin].v);
        auto left = crit_.make();
        auto right = parent;
        std::size_t p = 0;
        while (begin + p < end && c[begin + p].v <= cut) {
          const std::size_t row = rows_[c[begin + p].pos];
          crit_.add(left, row);
          crit_.remove(right, row);
          ++p;
        }
        if (p < min_leaf || m - p < min_leaf || p == 0 || p == m) continue;
        const double gain = Criterion::score(left) + Criterion::score(right) - parent_score;
        if (best.feature < 0 || gain > best.gain) best = {static_cast<int>(f), cut, gain, p};
        continue;
      }
      auto left = crit_.make();
      auto right = parent;
      for (std::size_t p = 1; p < m; ++p) {
        const std::size_t row = rows_[c[begin + p - 1].pos];
        crit_.add(left, row);
        crit_.remove(right, row);
        if (p < min_leaf || m - p < min_leaf) continue;
        const double lo = c[begin + p - 1].v, hi = c[begin + p].v;
        if (lo == hi) continue;
        const double gain = Criterion::score(left) + Criterion::score(right) - parent_score;
        if (gain > best.gain + 1e-12 * std::abs(parent_score)) {
          double thr = 0.5 * (lo + hi);
          if (thr >= hi) thr = lo;
          best = {static_cast<int>(f), thr, gain, p};
        }
      }
    }
    return best;
  }

  const Matrix& x_;
  Criterion crit_;
  TreeParams params_;
  Rng& rng_;
  DecisionTree tree_;
  std::vector<std::size_t> rows_;
  std::vector<std::vector<Entry>> cols_;
  std::vector<char> left_;
  std::vector<Entry> scratch_;
};

inline DecisionTree fit_regression_tree(const Matrix& x, std::span<const double> y,
                                        std::vector<std::size_t> samples, const TreeParams& params,
                                        Rng& rng) {
  return TreeBuilder<SquaredError>(x, SquaredError{y}, params, rng).build(samples, 0);
}

inline DecisionTree fit_classification_tree(const Matrix& x, std::span<const int> labels, int num_classes,
                                            std::vector<std::size_t> samples, const TreeParams& params,
                                            Rng& rng) {
  return TreeBuilder<Gini>(x, Gini{labels, num_classes}, params, rng).build(samples, num_classes);
}

namespace detail {

inline std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

inline std::vector<std::size_t> bootstrap(std::size_t n, Rng& rng) {
  std::vector<std::size_t> v(n);
  for (auto& s : v) s = rng.index(n);
  std::sort(v.begin(), v.end());
  return v;
}

inline void check_xy(const Matrix& x, std::size_t n) {
  if (x.rows() == 0) throw InvalidArgument("empty training set");
  if (x.rows() != n) throw InvalidArgument("feature/target row count mismatch");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Ensembles

struct ForestParams {
  std::size_t n_trees = 100;
  TreeParams tree{.max_depth = 12, .min_samples_split = 2, .min_samples_leaf = 1, .max_features = 0};
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

class RandomForestRegressor {
 public:
  void fit(const Matrix& x, std::span<const double> y, const ForestParams& p) {
    detail::check_xy(x, y.size());
    dim_ = x.cols();
    trees_.assign(p.n_trees, {});
    parallel_for(p.n_trees, [&](std::size_t t) {
      Rng rng(derive_seed(p.seed, static_cast<std::uint64_t>(t)));
      auto rows = p.bootstrap ? detail::bootstrap(x.rows(), rng) : detail::all_rows(x.rows());
      trees_[t] = fit_regression_tree(x, y, std::move(rows), p.tree, rng);
    });
  }

  double predict(std::span<const double> x) const {
    check_dim(x);
    double s = 0.0;
    for (const auto& t : trees_) s += t.predict(x);
    return s / static_cast<double>(trees_.size());
  }

  /// Mean and standard deviation of the per-tree predictions.
  std::pair<double, double> predict_stats(std::span<const double> x) const {
    check_dim(x);
    double s = 0.0, ss = 0.0;
    for (const auto& t : trees_) {
      const double v = t.predict(x);
      s += v;
      ss += v * v;
    }
    const double n = static_cast<double>(trees_.size());
    const double mean = s / n;
    return {mean, std::sqrt(std::max(0.0, ss / n - mean * mean))};
  }

  std::size_t dim() const { return dim_; }
  const std::vector<DecisionTree>& trees() const { return trees_; }

  void write(std::string& out) const {
    out += "random_forest_regressor " + std::to_string(trees_.size()) + " " + std::to_string(dim_) + "\n";
    for (const auto& t : trees_) t.write(out);
  }

  static RandomForestRegressor read(LineReader& in) {
    const auto head = text::split(in.next(), ' ');
    if (head.size() != 3 || head[0] != "random_forest_regressor") throw ParseError("expected random forest block");
    RandomForestRegressor m;
    m.dim_ = static_cast<std::size_t>(text::parse_int(head[2]));
    const auto n = static_cast<std::size_t>(text::parse_int(head[1]));
    for (std::size_t i = 0; i < n; ++i) m.trees_.push_back(DecisionTree::read(in));
    return m;
  }

 private:
  void check_dim(std::span<const double> x) const {
    if (trees_.empty()) throw InvalidArgument("model not fitted");
    if (x.size() != dim_) throw InvalidArgument("input dimension mismatch");
  }

  std::vector<DecisionTree> trees_;
  std::size_t dim_ = 0;
};

struct BoostingParams {
  std::size_t n_trees = 200;
  double learning_rate = 0.1;
  TreeParams tree{.max_depth = 6, .min_samples_split = 2, .min_samples_leaf = 1, .max_features = 0};
  double subsample = 1.0;
  std::uint64_t seed = 0;
};

/// Least-squares gradient boosting: each stage fits the current residuals.
class GradientBoostingRegressor {
 public:
  void fit(const Matrix& x, std::span<const double> y, const BoostingParams& p) {
    detail::check_xy(x, y.size());
    if (!(p.subsample > 0.0 && p.subsample <= 1.0)) throw InvalidArgument("subsample outside (0,1]");
    dim_ = x.cols();
    learning_rate_ = p.learning_rate;
    const std::size_t n = x.rows();
    double mean = 0.0;
    for (double v : y) mean += v;
    init_ = mean / static_cast<double>(n);
    std::vector<double> pred(n, init_);
    std::vector<double> residual(n);
    trees_.clear();
    trees_.reserve(p.n_trees);
    Rng rng(derive_seed(p.seed, "boosting"));
    for (std::size_t t = 0; t < p.n_trees; ++t) {
      for (std::size_t i = 0; i < n; ++i) residual[i] = y[i] - pred[i];
      std::vector<std::size_t> rows;
      if (p.subsample < 1.0) {
        rows = rng.choose(n, std::max<std::size_t>(1, static_cast<std::size_t>(p.subsample * static_cast<double>(n))));
        std::sort(rows.begin(), rows.end());
      } else {
        rows = detail::all_rows(n);
      }
      trees_.push_back(fit_regression_tree(x, residual, std::move(rows), p.tree, rng));
      for (std::size_t i = 0; i < n; ++i) pred[i] += learning_rate_ * trees_.back().predict(x.row(i));
    }
  }

  double predict(std::span<const double> x) const {
    if (x.size() != dim_) throw InvalidArgument("input dimension mismatch");
    double v = init_;
    for (const auto& t : trees_) v += learning_rate_ * t.predict(x);
    return v;
  }

  std::size_t dim() const { return dim_; }

  void write(std::string& out) const {
    out += "gradient_boosting_regressor " + std::to_string(trees_.size()) + " " + std::to_string(dim_) + " " +
           text::shortest(init_) + " " + text::shortest(learning_rate_) + "\n";
    for (const auto& t : trees_) t.write(out);
  }

  static GradientBoostingRegressor read(LineReader& in) {
    const auto head = text::split(in.next(), ' ');
    if (head.size() != 5 || head[0] != "gradient_boosting_regressor") throw ParseError("expected boosting block");
    GradientBoostingRegressor m;
    const auto n = static_cast<std::size_t>(text::parse_int(head[1]));
    m.dim_ = static_cast<std::size_t>(text::parse_int(head[2]));
    m.init_ = text::parse_double(head[3]);
    m.learning_rate_ = text::parse_double(head[4]);
    for (std::size_t i = 0; i < n; ++i) m.trees_.push_back(DecisionTree::read(in));
    return m;
  }

 private:
  std::vector<DecisionTree> trees_;
  double init_ = 0.0;
  double learning_rate_ = 0.1;
  std::size_t dim_ = 0;
};

class RandomForestClassifier {
 public:
  void fit(const Matrix& x, std::span<const int> labels, int num_classes, const ForestParams& p) {
    detail::check_xy(x, labels.size());
    for (int l : labels) {
      if (l < 0 || l >= num_classes) throw InvalidArgument("class label out of range");
    }
    dim_ = x.cols();
    num_classes_ = num_classes;
    trees_.assign(p.n_trees, {});
    parallel_for(p.n_trees, [&](std::size_t t) {
      Rng rng(derive_seed(p.seed, static_cast<std::uint64_t>(t)));
      auto rows = p.bootstrap ? detail::bootstrap(x.rows(), rng) : detail::all_rows(x.rows());
      trees_[t] = fit_classification_tree(x, labels, num_classes, std::move(rows), p.tree, rng);
    });
  }

  /// Mean of the per-tree leaf distributions.
  std::vector<double> proba(std::span<const double> x) const {
    if (trees_.empty()) throw InvalidArgument("model not fitted");
    if (x.size() != dim_) throw InvalidArgument("input dimension mismatch");
    std::vector<double> p(static_cast<std::size_t>(num_classes_), 0.0);
    for (const auto& t : trees_) {
      const auto d = t.proba(x);
      for (std::size_t k = 0; k < p.size(); ++k) p[k] += d[k];
    }
    for (auto& v : p) v /= static_cast<double>(trees_.size());
    return p;
  }

  int num_classes() const { return num_classes_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return trees_.size(); }

  void write(std::string& out) const {
    out += "random_forest_classifier " + std::to_string(trees_.size()) + " " + std::to_string(dim_) + " " +
           std::to_string(num_classes_) + "\n";
    for (const auto& t : trees_) t.write(out);
  }

  static RandomForestClassifier read(LineReader& in) {
    const auto head = text::split(in.next(), ' ');
    if (head.size() != 4 || head[0] != "random_forest_classifier") throw ParseError("expected classifier block");
    RandomForestClassifier m;
    const auto n = static_cast<std::size_t>(text::parse_int(head[1]));
    m.dim_ = static_cast<std::size_t>(text::parse_int(head[2]));
    m.num_classes_ = static_cast<int>(text::parse_int(head[3]));
    for (std::size_t i = 0; i < n; ++i) m.trees_.push_back(DecisionTree::read(in));
    return m;
  }

 private:
  std::vector<DecisionTree> trees_;
  std::size_t dim_ = 0;
  int num_classes_ = 0;
};

/// sqrt(d) rounded, at least 1.
inline std::size_t sqrt_features(std::size_t d) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(d)))));
}

}  // namespace e2etune::ml

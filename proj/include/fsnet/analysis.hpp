#ifndef FSNET_ANALYSIS_HPP
#define FSNET_ANALYSIS_HPP

#include <fsnet/and_feature.hpp>
#include <fsnet/error.hpp>
#include <fsnet/network.hpp>
#include <fsnet/parallel.hpp>
#include <fsnet/random.hpp>

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace fsnet
{

// Binary sample-by-feature matrix with rows packed into 64-bit words.
class InteractionMatrix
{
public:
  InteractionMatrix() = default;

  InteractionMatrix(std::size_t rows, std::size_t width, std::vector<std::uint32_t> labels)
    : rows_(rows)
    , width_(width)
    , words_((width + 63) / 64)
    , bits_(rows * words_, 0)
    , labels_(std::move(labels))
  {
    if (labels_.size() != rows_)
      throw std::invalid_argument("label count does not match row count");
  }

  static auto from_dense(const std::vector<std::vector<std::uint8_t>>& rows,
                         std::vector<std::uint32_t> labels) -> InteractionMatrix
  {
    const auto width = rows.empty() ? std::size_t{0} : rows.front().size();
    auto m = InteractionMatrix{rows.size(), width, std::move(labels)};
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
      if (rows[i].size() != width)
        throw std::invalid_argument("ragged matrix rows");
      for (std::size_t j = 0; j < width; ++j)
        if (rows[i][j])
          m.set(i, j);
    }
    return m;
  }

  auto n_rows() const -> std::size_t { return rows_; }
  auto width() const -> std::size_t { return width_; }
  auto labels() const -> std::span<const std::uint32_t> { return labels_; }
  auto label(std::size_t i) const -> std::uint32_t { return labels_[i]; }

  auto row(std::size_t i) const -> std::span<const std::uint64_t>
  {
    return std::span<const std::uint64_t>(bits_).subspan(i * words_, words_);
  }

  auto at(std::size_t i, std::size_t j) const -> bool
  {
    return (bits_[i * words_ + j / 64] >> (j % 64)) & 1u;
  }

  auto set(std::size_t i, std::size_t j) -> void
  {
    bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64);
  }

  auto row_sum(std::size_t i) const -> std::size_t
  {
    auto s = std::size_t{0};
    for (const auto w : row(i))
      s += static_cast<std::size_t>(std::popcount(w));
    return s;
  }

private:
  std::size_t rows_ = 0;
  std::size_t width_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint32_t> labels_;
};

inline auto hamming(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b)
  -> std::size_t
{
  auto d = std::size_t{0};
  for (std::size_t w = 0; w < a.size(); ++w)
    d += static_cast<std::size_t>(std::popcount(a[w] ^ b[w]));
  return d;
}

// Original features followed by one column per and-feature (in the given order),
// set at its connected samples. And-features must be connected; evaluate() has
// already pruned the others.
inline auto enhanced_matrix(const FeatureSampleNetwork& g, std::span<const AndFeature> features)
  -> InteractionMatrix
{
  if (!g.has_labels())
    throw data_error("network has no class labels");
  auto m = InteractionMatrix{g.n_samples(), g.n_features() + features.size(), *g.labels()};
  for (std::size_t i = 0; i < g.n_samples(); ++i)
    for (const auto j : g.sample_adj(i))
      m.set(i, j);
  for (std::size_t c = 0; c < features.size(); ++c)
  {
    const auto conn = connected_samples(g, features[c]);
    if (conn.empty())
      throw domain_error("and-feature " + to_afs_line(features[c]) + " has no connected sample");
    for (const auto i : conn)
      m.set(i, g.n_features() + c);
  }
  return m;
}

inline auto original_matrix(const FeatureSampleNetwork& g) -> InteractionMatrix
{
  return enhanced_matrix(g, {});
}

namespace detail
{

struct Neighbor
{
  std::size_t distance;
  std::size_t index; // position in the training subset

  friend auto operator<=>(const Neighbor&, const Neighbor&) = default;
};

// Training rows ordered by (distance, index), first `limit` only.
inline auto nearest(const InteractionMatrix& m, std::span<const std::size_t> train,
                    std::span<const std::uint64_t> query, std::size_t limit)
  -> std::vector<Neighbor>
{
  auto out = std::vector<Neighbor>(train.size());
  for (std::size_t t = 0; t < train.size(); ++t)
    out[t] = {hamming(m.row(train[t]), query), t};
  limit = std::min(limit, out.size());
  std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(limit), out.end());
  out.resize(limit);
  return out;
}

// Majority class among votes; ties go to the smallest class id.
inline auto majority(const std::map<std::uint32_t, std::size_t>& votes) -> std::uint32_t
{
  auto best = votes.begin();
  for (auto it = votes.begin(); it != votes.end(); ++it)
    if (it->second > best->second)
      best = it;
  return best->first;
}

} // namespace detail

// Classifies `query` by majority vote of the k nearest rows among `train` (row
// indices into m) under Hamming distance.
inline auto knn_predict(const InteractionMatrix& m, std::span<const std::size_t> train,
                        std::span<const std::uint64_t> query, std::size_t k) -> std::uint32_t
{
  if (train.empty())
    throw std::invalid_argument("empty training set");
  if (k < 1 || k > train.size())
    throw std::invalid_argument("k must lie in [1, " + std::to_string(train.size()) + "]");
  auto votes = std::map<std::uint32_t, std::size_t>{};
  for (const auto& nb : detail::nearest(m, train, query, k))
    ++votes[m.label(train[nb.index])];
  return detail::majority(votes);
}

// Uses every row of `train` as training data.
inline auto knn_predict(const InteractionMatrix& train, std::span<const std::uint64_t> query,
                        std::size_t k) -> std::uint32_t
{
  auto all = std::vector<std::size_t>(train.n_rows());
  for (std::size_t i = 0; i < all.size(); ++i)
    all[i] = i;
  return knn_predict(train, all, query, k);
}

struct ValidationOptions
{
  std::vector<double> fractions{0.7, 0.8};
  std::size_t repeats = 20;
  std::size_t k_max = 20;
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  auto validate() const -> void
  {
    if (fractions.empty())
      throw config_error("at least one labeled fraction is required");
    for (const auto f : fractions)
      if (!(f > 0.0 && f < 1.0))
        throw config_error("labeled fractions must lie in (0, 1)");
    if (repeats < 1)
      throw config_error("repeats must be at least 1");
    if (k_max < 1)
      throw config_error("k range must include at least k = 1");
  }
};

struct AccuracyRecord
{
  double fraction = 0.0;
  std::size_t k = 0;
  double mean = 0.0;
  double sd = 0.0;

  friend auto operator==(const AccuracyRecord&, const AccuracyRecord&) -> bool = default;
};

struct AccuracyTable
{
  std::size_t repeats = 0;
  std::vector<AccuracyRecord> records;

  // Highest mean accuracy for the fraction; ties go to the smallest k.
  auto best(double fraction) const -> const AccuracyRecord&
  {
    const AccuracyRecord* out = nullptr;
    for (const auto& r : records)
      if (r.fraction == fraction && (!out || r.mean > out->mean))
        out = &r;
    if (!out)
      throw std::out_of_range("no records for fraction " + std::to_string(fraction));
    return *out;
  }

  auto fractions() const -> std::vector<double>
  {
    auto out = std::vector<double>{};
    for (const auto& r : records)
      if (std::find(out.begin(), out.end(), r.fraction) == out.end())
        out.push_back(r.fraction);
    return out;
  }

  friend auto operator==(const AccuracyTable&, const AccuracyTable&) -> bool = default;
};

namespace detail
{

inline auto class_train_size(std::size_t n, double fraction) -> std::size_t
{
  return std::clamp<std::size_t>(
    static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 0.5)), 1, n);
}

} // namespace detail

// Per-class proportional training split (round half up, at least one per class).
// Returns ascending training and test row indices.
template <typename Rng>
auto stratified_split(std::span<const std::uint32_t> labels, double fraction, Rng& rng)
  -> std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
{
  auto by_class = std::map<std::uint32_t, std::vector<std::size_t>>{};
  for (std::size_t i = 0; i < labels.size(); ++i)
    by_class[labels[i]].push_back(i);

  auto train = std::vector<std::size_t>{};
  auto test = std::vector<std::size_t>{};
  for (auto& [label, rows] : by_class)
  {
    const auto n = rows.size();
    const auto t = detail::class_train_size(n, fraction);
    for (std::size_t i = 0; i < t; ++i)
      std::swap(rows[i], rows[i + uniform_index(rng, n - i)]);
    train.insert(train.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(t));
    test.insert(test.end(), rows.begin() + static_cast<std::ptrdiff_t>(t), rows.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

// Repeated stratified split validation of k-NN for k = 1..k_max. The split of a
// (fraction, repeat) pair depends only on the labels and the seed, so matrices
// over the same samples are compared on identical splits.
inline auto split_validate(const InteractionMatrix& m, const ValidationOptions& options)
  -> AccuracyTable
{
  options.validate();
  auto counts = std::map<std::uint32_t, std::size_t>{};
  for (const auto l : m.labels())
    ++counts[l];
  for (const auto& [label, n] : counts)
    if (n < 2)
      throw data_error("class " + std::to_string(label) + " has fewer than 2 members");

  auto table = AccuracyTable{};
  table.repeats = options.repeats;
  for (std::size_t fi = 0; fi < options.fractions.size(); ++fi)
  {
    const auto fraction = options.fractions[fi];
    // accuracy[r * k_max + (k - 1)]
    auto accuracy = std::vector<double>(options.repeats * options.k_max, 0.0);
    auto train_size = std::size_t{0};
    for (const auto& [label, n] : counts)
      train_size += detail::class_train_size(n, fraction);
    const auto k_limit = std::min(options.k_max, train_size);
    parallel_for(options.repeats, options.threads, [&](std::size_t r) {
      auto rng = make_rng(options.seed, {fi, r});
      const auto [train, test] = stratified_split(m.labels(), fraction, rng);
      const auto k_top = k_limit;
      auto correct = std::vector<std::size_t>(options.k_max, 0);
      for (const auto q : test)
      {
        const auto neighbors = detail::nearest(m, train, m.row(q), k_top);
        auto votes = std::map<std::uint32_t, std::size_t>{};
        for (std::size_t k = 1; k <= k_top; ++k)
        {
          ++votes[m.label(train[neighbors[k - 1].index])];
          if (detail::majority(votes) == m.label(q))
            ++correct[k - 1];
        }
      }
      for (std::size_t k = 1; k <= k_top; ++k)
        accuracy[r * options.k_max + (k - 1)] =
          test.empty() ? 1.0
                       : static_cast<double>(correct[k - 1]) / static_cast<double>(test.size());
    });
    for (std::size_t k = 1; k <= k_limit; ++k)
    {
      auto mean = 0.0;
      for (std::size_t r = 0; r < options.repeats; ++r)
        mean += accuracy[r * options.k_max + (k - 1)];
      mean /= static_cast<double>(options.repeats);
      auto ss = 0.0;
      for (std::size_t r = 0; r < options.repeats; ++r)
      {
        const auto d = accuracy[r * options.k_max + (k - 1)] - mean;
        ss += d * d;
      }
      const auto sd =
        options.repeats > 1 ? std::sqrt(ss / static_cast<double>(options.repeats - 1)) : 0.0;
      table.records.push_back({fraction, k, mean, sd});
    }
  }
  return table;
}

inline auto write_csv(std::ostream& os, const AccuracyTable& table) -> void
{
  os << "fraction,k,mean,sd\n";
  for (const auto& r : table.records)
  {
    auto line = nlohmann::json::array({r.fraction, r.k, r.mean, r.sd}).dump();
    line = line.substr(1, line.size() - 2);
    os << line << '\n';
  }
}

inline auto to_json(const AccuracyTable& table) -> nlohmann::ordered_json
{
  auto records = nlohmann::ordered_json::array();
  for (const auto& r : table.records)
    records.push_back({{"fraction", r.fraction}, {"k", r.k}, {"mean", r.mean}, {"sd", r.sd}});
  auto best = nlohmann::ordered_json::array();
  for (const auto f : table.fractions())
  {
    const auto& b = table.best(f);
    best.push_back({{"fraction", b.fraction}, {"k", b.k}, {"mean", b.mean}, {"sd", b.sd}});
  }
  return {{"repeats", table.repeats}, {"records", std::move(records)}, {"best", std::move(best)}};
}

} // namespace fsnet

#endif // FSNET_ANALYSIS_HPP

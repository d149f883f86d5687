#ifndef FSNET_OBJECTIVES_HPP
#define FSNET_OBJECTIVES_HPP

#include <fsnet/and_feature.hpp>
#include <fsnet/connection_cache.hpp>
#include <fsnet/network.hpp>
#include <fsnet/random.hpp>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <iterator>
#include <optional>
#include <span>
#include <vector>

namespace fsnet
{

// Both components are minimized: f1 = D(empty) - D(Y) = -(connected and-features),
// f2 = disproportion.
struct ObjectiveVector
{
  std::int64_t f1 = 0;
  double f2 = 0.0;

  static auto from(std::size_t connected_count, double disproportion) -> ObjectiveVector
  {
    return {-static_cast<std::int64_t>(connected_count), disproportion};
  }

  auto connected_count() const -> std::size_t { return static_cast<std::size_t>(-f1); }

  friend auto operator==(const ObjectiveVector&, const ObjectiveVector&) -> bool = default;
};

// Pareto dominance under minimization.
inline auto dominates(const ObjectiveVector& a, const ObjectiveVector& b) -> bool
{
  return a.f1 <= b.f1 && a.f2 <= b.f2 && (a.f1 < b.f1 || a.f2 < b.f2);
}

// Lexicographic order: more connected and-features first, then lower disproportion.
// `less` means a is better than b.
inline auto lex_compare(const ObjectiveVector& a, const ObjectiveVector& b) -> std::weak_ordering
{
  if (a.f1 != b.f1)
    return a.f1 < b.f1 ? std::weak_ordering::less : std::weak_ordering::greater;
  if (a.f2 != b.f2)
    return a.f2 < b.f2 ? std::weak_ordering::less : std::weak_ordering::greater;
  return std::weak_ordering::equivalent;
}

inline auto lex_better(const ObjectiveVector& a, const ObjectiveVector& b) -> bool
{
  return lex_compare(a, b) < 0;
}

// Sample standard deviation (N-1 denominator) of added_i / k_i. Returns exactly 0
// when all ratios are equal as rationals.
template <typename Degree, typename Added>
auto disproportion(std::span<const Degree> original_degrees, std::span<const Added> added) -> double
{
  const auto n = original_degrees.size();
  if (added.size() != n)
    throw domain_error("degree and addition vectors differ in length");
  if (n < 2)
    throw domain_error("disproportion needs at least two samples");
  for (std::size_t i = 0; i < n; ++i)
    if (original_degrees[i] == 0)
      throw domain_error("sample " + std::to_string(i) + " has degree 0");

  const auto k0 = static_cast<std::int64_t>(original_degrees[0]);
  const auto a0 = static_cast<std::int64_t>(added[0]);
  auto all_equal = true;
  for (std::size_t i = 1; i < n && all_equal; ++i)
    all_equal = static_cast<std::int64_t>(added[i]) * k0 ==
                a0 * static_cast<std::int64_t>(original_degrees[i]);
  if (all_equal)
    return 0.0;

  auto ratios = std::vector<double>(n);
  auto mean = 0.0;
  for (std::size_t i = 0; i < n; ++i)
  {
    ratios[i] = static_cast<double>(added[i]) / static_cast<double>(original_degrees[i]);
    mean += ratios[i];
  }
  mean /= static_cast<double>(n);
  auto ss = 0.0;
  for (const auto r : ratios)
    ss += (r - mean) * (r - mean);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

inline auto disproportion(const std::vector<std::size_t>& original_degrees,
                          const std::vector<std::int32_t>& added) -> double
{
  return disproportion(std::span<const std::size_t>(original_degrees),
                       std::span<const std::int32_t>(added));
}

struct EvaluationResult
{
  std::size_t connected_count = 0;
  double disproportion = 0.0;
  std::vector<std::int32_t> per_sample_added;
  bool feasible = true;

  auto objectives() const -> ObjectiveVector
  {
    return ObjectiveVector::from(connected_count, disproportion);
  }
};

namespace detail
{

template <typename T>
auto set_difference(const std::vector<T>& a, const std::vector<T>& b) -> std::vector<T>
{
  auto out = std::vector<T>{};
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

template <typename T>
auto set_union(const std::vector<T>& a, const std::vector<T>& b) -> std::vector<T>
{
  auto out = std::vector<T>{};
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

} // namespace detail

class CandidateSolution;
struct EvaluationResult;

template <typename Rng>
auto evaluate(const FeatureSampleNetwork& g, CandidateSolution& solution,
              std::size_t max_new_features, Rng& rng, ConnectionCache* cache = nullptr)
  -> const EvaluationResult&;

// A set Y of and-features. Kept sorted and duplicate-free. After evaluation the
// set holds no zero-connection and-feature. Changes made after an evaluation are
// journaled so that the next evaluation only touches the difference.
class CandidateSolution
{
public:
  CandidateSolution() = default;

  explicit CandidateSolution(std::vector<AndFeature> features)
    : features_(std::move(features))
  {
    std::sort(features_.begin(), features_.end());
    features_.erase(std::unique(features_.begin(), features_.end()), features_.end());
  }

  auto features() const -> std::span<const AndFeature> { return features_; }
  auto size() const -> std::size_t { return features_.size(); }
  auto empty() const -> bool { return features_.empty(); }

  auto contains(const AndFeature& af) const -> bool
  {
    return std::binary_search(features_.begin(), features_.end(), af);
  }

  auto insert(AndFeature af) -> bool
  {
    const auto it = std::lower_bound(features_.begin(), features_.end(), af);
    if (it != features_.end() && *it == af)
      return false;
    if (evaluation_)
      journal_insert(af);
    features_.insert(it, std::move(af));
    return true;
  }

  auto erase(const AndFeature& af) -> bool
  {
    const auto it = std::lower_bound(features_.begin(), features_.end(), af);
    if (it == features_.end() || *it != af)
      return false;
    if (evaluation_)
      journal_erase(af);
    features_.erase(it);
    return true;
  }

  // Bulk update. Both inputs sorted; `added` disjoint from the set, `removed` a subset.
  auto apply(const std::vector<AndFeature>& added, const std::vector<AndFeature>& removed) -> void
  {
    if (added.empty() && removed.empty())
      return;
    auto next = std::vector<AndFeature>{};
    next.reserve(features_.size() + added.size() - std::min(removed.size(), features_.size()));
    auto r = removed.begin();
    auto a = added.begin();
    for (auto& f : features_)
    {
      while (r != removed.end() && *r < f)
        ++r;
      if (r != removed.end() && *r == f)
        continue;
      while (a != added.end() && *a < f)
        next.push_back(*a++);
      next.push_back(std::move(f));
    }
    next.insert(next.end(), a, added.end());
    features_ = std::move(next);

    if (evaluation_)
    {
      auto new_added = detail::set_union(detail::set_difference(added_, removed),
                                         detail::set_difference(added, removed_));
      auto new_removed = detail::set_union(detail::set_difference(removed_, added),
                                           detail::set_difference(removed, added_));
      added_ = std::move(new_added);
      removed_ = std::move(new_removed);
    }
  }

  // True when an evaluation exists and matches the current content.
  auto is_evaluated() const -> bool { return evaluation_ && added_.empty() && removed_.empty(); }

  auto evaluation() const -> const EvaluationResult&
  {
    if (!is_evaluated())
      throw std::logic_error("solution has not been evaluated since its last change");
    return *evaluation_;
  }

  auto objectives() const -> ObjectiveVector { return evaluation().objectives(); }

  auto clear_evaluation() -> void
  {
    evaluation_.reset();
    added_.clear();
    removed_.clear();
  }

  friend auto operator==(const CandidateSolution& a, const CandidateSolution& b) -> bool
  {
    return a.features_ == b.features_;
  }

  template <typename Rng>
  friend auto evaluate(const FeatureSampleNetwork& g, CandidateSolution& solution,
                       std::size_t max_new_features, Rng& rng, ConnectionCache* cache)
    -> const EvaluationResult&;

private:
  auto journal_insert(const AndFeature& af) -> void
  {
    if (const auto it = std::lower_bound(removed_.begin(), removed_.end(), af);
        it != removed_.end() && *it == af)
      removed_.erase(it);
    else
      added_.insert(std::lower_bound(added_.begin(), added_.end(), af), af);
  }

  auto journal_erase(const AndFeature& af) -> void
  {
    if (const auto it = std::lower_bound(added_.begin(), added_.end(), af);
        it != added_.end() && *it == af)
      added_.erase(it);
    else
      removed_.insert(std::lower_bound(removed_.begin(), removed_.end(), af), af);
  }

  std::vector<AndFeature> features_;
  std::optional<EvaluationResult> evaluation_;
  std::vector<AndFeature> added_, removed_; // relative to evaluation_
};

namespace detail
{

inline auto lookup(const FeatureSampleNetwork& g, const AndFeature& af, ConnectionCache* cache)
  -> shared_samples
{
  if (cache)
    return cache->connections(g, af);
  return std::make_shared<const index_list>(connected_samples(g, af));
}

} // namespace detail

// Prunes and-features without connections, counts per-sample additions, and
// computes the disproportion. If more than max_new_features remain, uniformly
// chosen and-features are dropped until exactly max_new_features are left. The
// result is stored on the solution; re-evaluating an unchanged solution is a no-op.
template <typename Rng>
auto evaluate(const FeatureSampleNetwork& g, CandidateSolution& solution,
              std::size_t max_new_features, Rng& rng, ConnectionCache* cache)
  -> const EvaluationResult&
{
  auto& s = solution;
  if (s.is_evaluated() && s.features_.size() <= max_new_features)
    return *s.evaluation_;

  auto added = std::vector<std::int32_t>{};
  auto pruned = std::vector<AndFeature>{};

  const auto accumulate = [&](const AndFeature& af, std::int32_t sign) -> bool {
    const auto conn = detail::lookup(g, af, cache);
    for (const auto i : *conn)
      added[i] += sign;
    return !conn->empty();
  };

  if (!s.evaluation_)
  {
    added.assign(g.n_samples(), 0);
    for (const auto& af : s.features_)
      if (!accumulate(af, +1))
        pruned.push_back(af);
  }
  else
  {
    added = std::move(s.evaluation_->per_sample_added);
    for (const auto& af : s.removed_)
      accumulate(af, -1);
    for (const auto& af : s.added_)
      if (!accumulate(af, +1))
        pruned.push_back(af);
  }
  s.added_.clear();
  s.removed_.clear();
  s.evaluation_.reset();
  if (!pruned.empty())
    s.features_ = detail::set_difference(s.features_, pruned);

  if (s.features_.size() > max_new_features)
  {
    const auto excess = s.features_.size() - max_new_features;
    auto idx = std::vector<std::size_t>(s.features_.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      idx[i] = i;
    for (std::size_t i = 0; i < excess; ++i)
      std::swap(idx[i], idx[i + uniform_index(rng, idx.size() - i)]);
    idx.resize(excess);
    std::sort(idx.begin(), idx.end());

    auto kept = std::vector<AndFeature>{};
    kept.reserve(max_new_features);
    auto next = idx.begin();
    for (std::size_t i = 0; i < s.features_.size(); ++i)
    {
      if (next != idx.end() && *next == i)
      {
        accumulate(s.features_[i], -1);
        ++next;
      }
      else
        kept.push_back(std::move(s.features_[i]));
    }
    s.features_ = std::move(kept);
  }

  auto result = EvaluationResult{};
  result.connected_count = s.features_.size();
  result.disproportion =
    disproportion(g.sample_degrees(), std::span<const std::int32_t>(added));
  result.per_sample_added = std::move(added);
  result.feasible = result.connected_count <= max_new_features;
  s.evaluation_ = std::move(result);
  return *s.evaluation_;
}

} // namespace fsnet

#endif // FSNET_OBJECTIVES_HPP

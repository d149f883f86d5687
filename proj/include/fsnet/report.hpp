#ifndef FSNET_REPORT_HPP
#define FSNET_REPORT_HPP

#include <fsnet/and_feature.hpp>
#include <fsnet/error.hpp>
#include <fsnet/objectives.hpp>
#include <fsnet/operators.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fsnet
{

// Parameters shared by both engines.
struct EvolutionConfig
{
  std::size_t population_size = 1000;
  std::size_t generations = 1000;
  InitParams init{};
  VariationParams variation{};
  std::size_t max_new_features = 0; // M_max; 0 resolves to 100 * D
  std::uint64_t seed = 0;
  std::size_t threads = 1;          // does not influence results
  std::size_t cache_capacity = std::size_t{1} << 20;

  auto resolved_max_new_features(const FeatureSampleNetwork& g) const -> std::size_t
  {
    return max_new_features ? max_new_features : 100 * g.n_features();
  }

  auto validate() const -> void
  {
    if (population_size < 2)
      throw config_error("population size must be at least 2");
    if (generations < 1)
      throw config_error("generations must be at least 1");
    init.validate();
    variation.validate();
  }
};

struct SummaryStats
{
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

struct GenerationStats
{
  SummaryStats count;
  SummaryStats disproportion;
  std::size_t tracked = 0;
};

struct FinalSolution
{
  ObjectiveVector objectives;
  std::vector<AndFeature> features;
};

struct RunReport
{
  std::string strategy;
  nlohmann::ordered_json config;
  std::uint64_t seed = 0;
  std::vector<GenerationStats> generations;
  std::vector<std::size_t> archive_nondominated_count; // SPEA2 only
  std::vector<FinalSolution> final_set;                // lexicographically sorted
  std::optional<double> wall_time_seconds;

  // The final solution with the most connected and-features (ties: lowest disproportion).
  auto best_count() const -> const FinalSolution&
  {
    if (final_set.empty())
      throw std::logic_error("empty final set");
    return final_set.front();
  }

  // The final solution with the lowest disproportion among those with at least
  // min_count and-features (ties: more and-features).
  auto lowest_disproportion(std::size_t min_count = 1) const -> const FinalSolution*
  {
    const FinalSolution* best = nullptr;
    for (const auto& s : final_set)
    {
      if (s.objectives.connected_count() < min_count)
        continue;
      if (!best || s.objectives.f2 < best->objectives.f2 ||
          (s.objectives.f2 == best->objectives.f2 && s.objectives.f1 < best->objectives.f1))
        best = &s;
    }
    return best;
  }
};

using GenerationObserver =
  std::function<void(std::size_t generation, std::span<const CandidateSolution> tracked)>;

namespace detail
{

inline auto summarize(std::span<const CandidateSolution> tracked) -> GenerationStats
{
  auto stats = GenerationStats{};
  stats.tracked = tracked.size();
  if (tracked.empty())
    return stats;
  stats.count.min = stats.disproportion.min = std::numeric_limits<double>::infinity();
  stats.count.max = stats.disproportion.max = -std::numeric_limits<double>::infinity();
  for (const auto& s : tracked)
  {
    const auto& e = s.evaluation();
    const auto c = static_cast<double>(e.connected_count);
    stats.count.min = std::min(stats.count.min, c);
    stats.count.max = std::max(stats.count.max, c);
    stats.count.mean += c;
    stats.disproportion.min = std::min(stats.disproportion.min, e.disproportion);
    stats.disproportion.max = std::max(stats.disproportion.max, e.disproportion);
    stats.disproportion.mean += e.disproportion;
  }
  stats.count.mean /= static_cast<double>(tracked.size());
  stats.disproportion.mean /= static_cast<double>(tracked.size());
  return stats;
}

// Deduplicates by content and sorts lexicographically (best first).
inline auto final_set(std::span<const CandidateSolution> tracked) -> std::vector<FinalSolution>
{
  auto out = std::vector<FinalSolution>{};
  auto sorted = std::vector<const CandidateSolution*>{};
  for (const auto& s : tracked)
    sorted.push_back(&s);
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    const auto order = lex_compare(a->objectives(), b->objectives());
    if (order != 0)
      return order < 0;
    return std::lexicographical_compare(a->features().begin(), a->features().end(),
                                        b->features().begin(), b->features().end());
  });
  for (const auto* s : sorted)
  {
    if (!out.empty() && std::equal(out.back().features.begin(), out.back().features.end(),
                                   s->features().begin(), s->features().end()))
      continue;
    out.push_back({s->objectives(), {s->features().begin(), s->features().end()}});
  }
  return out;
}

} // namespace detail

inline auto to_json(const EvolutionConfig& c) -> nlohmann::ordered_json
{
  return {
    {"population", c.population_size},
    {"generations", c.generations},
    {"mu", c.init.mu},
    {"sigma", c.init.sigma},
    {"recombination_rate", c.variation.recombination_rate},
    {"eta", c.variation.eta},
    {"max_new_features", c.max_new_features},
    {"seed", c.seed},
  };
}

inline auto to_json(const RunReport& r) -> nlohmann::ordered_json
{
  auto j = nlohmann::ordered_json{};
  j["strategy"] = r.strategy;
  j["seed"] = r.seed;
  j["config"] = r.config;
  j["disproportion_sd"] = "sample";

  auto stats = nlohmann::ordered_json{};
  const auto column = [&](auto&& get) {
    auto a = nlohmann::ordered_json::array();
    for (const auto& g : r.generations)
      a.push_back(get(g));
    return a;
  };
  stats["count_min"] = column([](const auto& g) { return g.count.min; });
  stats["count_mean"] = column([](const auto& g) { return g.count.mean; });
  stats["count_max"] = column([](const auto& g) { return g.count.max; });
  stats["disproportion_min"] = column([](const auto& g) { return g.disproportion.min; });
  stats["disproportion_mean"] = column([](const auto& g) { return g.disproportion.mean; });
  stats["disproportion_max"] = column([](const auto& g) { return g.disproportion.max; });
  stats["tracked"] = column([](const auto& g) { return g.tracked; });
  j["generations"] = std::move(stats);
  if (r.strategy == "spea2")
    j["archive_nondominated_count"] = r.archive_nondominated_count;

  auto final_set = nlohmann::ordered_json::array();
  for (const auto& s : r.final_set)
  {
    auto lines = nlohmann::ordered_json::array();
    for (const auto& af : s.features)
      lines.push_back(to_afs_line(af));
    final_set.push_back({{"connected_count", s.objectives.connected_count()},
                         {"disproportion", s.objectives.f2},
                         {"and_features", std::move(lines)}});
  }
  j["final_set"] = std::move(final_set);
  if (r.wall_time_seconds)
    j["wall_time_seconds"] = *r.wall_time_seconds;
  return j;
}

} // namespace fsnet

#endif // FSNET_REPORT_HPP

#ifndef FSNET_LGA_HPP
#define FSNET_LGA_HPP

#include <fsnet/connection_cache.hpp>
#include <fsnet/objectives.hpp>
#include <fsnet/operators.hpp>
#include <fsnet/parallel.hpp>
#include <fsnet/random.hpp>
#include <fsnet/report.hpp>

#include <algorithm>
#include <chrono>
#include <numeric>
#include <vector>

namespace fsnet
{

struct LgaConfig : EvolutionConfig
{
  std::size_t elite_size = 100;

  auto validate() const -> void
  {
    EvolutionConfig::validate();
    if (elite_size >= population_size)
      throw config_error("elite size (" + std::to_string(elite_size) +
                         ") must be smaller than the population size (" +
                         std::to_string(population_size) + ")");
  }
};

inline auto to_json(const LgaConfig& c) -> nlohmann::ordered_json
{
  auto j = to_json(static_cast<const EvolutionConfig&>(c));
  j["elitism"] = c.elite_size;
  return j;
}

namespace detail
{

// Stream tags for derive_seed paths.
enum stream_tag : std::uint64_t
{
  tag_init = 1,
  tag_evaluate = 2,
  tag_variation = 3,
};

inline auto evaluate_all(const FeatureSampleNetwork& g, std::vector<CandidateSolution>& population,
                         std::size_t max_new_features, ConnectionCache& cache, std::uint64_t seed,
                         std::size_t generation, std::size_t threads) -> void
{
  parallel_for(population.size(), threads, [&](std::size_t i) {
    auto rng = make_rng(seed, {tag_evaluate, generation, i});
    evaluate(g, population[i], max_new_features, rng, &cache);
  });
}

inline auto initial_population(const FeatureSampleNetwork& g, const EvolutionConfig& cfg)
  -> std::vector<CandidateSolution>
{
  auto population = std::vector<CandidateSolution>(cfg.population_size);
  parallel_for(population.size(), cfg.threads, [&](std::size_t i) {
    auto rng = make_rng(cfg.seed, {tag_init, i});
    population[i] = init_individual(g, cfg.init, rng);
  });
  return population;
}

// Fills `children` by pairs: two parents chosen by `pick` (a tournament), crossover
// at the recombination rate (copies otherwise), then mutation of both. An odd last
// slot keeps one child of its pair, chosen by a coin.
template <typename Pick>
auto breed(const FeatureSampleNetwork& g, std::span<const CandidateSolution> parents, Pick&& pick,
           const EvolutionConfig& cfg, std::size_t generation,
           std::vector<CandidateSolution>& children) -> void
{
  const auto n = children.size();
  const auto pairs = (n + 1) / 2;
  parallel_for(pairs, cfg.threads, [&](std::size_t p) {
    auto rng = make_rng(cfg.seed, {tag_variation, generation, p});
    const auto a = pick(rng);
    const auto b = pick(rng);
    auto [c1, c2] = coin(rng, cfg.variation.recombination_rate)
                      ? uniform_crossover(parents[a], parents[b], rng)
                      : std::pair{parents[a], parents[b]};
    mutate(g, c1, cfg.variation.eta, rng);
    mutate(g, c2, cfg.variation.eta, rng);
    if (2 * p + 1 < n)
    {
      children[2 * p] = std::move(c1);
      children[2 * p + 1] = std::move(c2);
    }
    else
      children[2 * p] = coin(rng, 0.5) ? std::move(c1) : std::move(c2);
  });
}

} // namespace detail

inline auto lex_order(const CandidateSolution& a, const CandidateSolution& b) -> std::weak_ordering
{
  return lex_compare(a.objectives(), b.objectives());
}

// Generational GA with elitism where solutions are ranked lexicographically: more
// connected and-features first, lower disproportion on ties. The report tracks
// the elite of every generation; the final set is the last elite, deduplicated.
inline auto run_lga(const FeatureSampleNetwork& g, const LgaConfig& cfg,
                    const GenerationObserver& observe = {}) -> RunReport
{
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto max_new = cfg.resolved_max_new_features(g);
  auto cache = ConnectionCache{cfg.cache_capacity};

  auto report = RunReport{};
  report.strategy = "lga";
  report.seed = cfg.seed;
  report.config = to_json(cfg);
  report.config["max_new_features"] = max_new;

  auto population = detail::initial_population(g, cfg);
  auto children = std::vector<CandidateSolution>(cfg.population_size - cfg.elite_size);

  for (std::size_t gen = 0; gen < cfg.generations; ++gen)
  {
    detail::evaluate_all(g, population, max_new, cache, cfg.seed, gen, cfg.threads);
    std::stable_sort(population.begin(), population.end(),
                     [](const auto& a, const auto& b) { return lex_order(a, b) < 0; });

    const auto elite = std::span<const CandidateSolution>(population).first(cfg.elite_size);
    report.generations.push_back(detail::summarize(elite));
    if (observe)
      observe(gen, elite);
    if (gen + 1 == cfg.generations)
    {
      report.final_set = detail::final_set(elite);
      break;
    }

    const auto parents = std::span<const CandidateSolution>(population);
    detail::breed(
      g, parents, [&](rng_type& rng) { return binary_tournament(parents, lex_order, rng); }, cfg,
      gen, children);
    std::move(children.begin(), children.end(),
              population.begin() + static_cast<std::ptrdiff_t>(cfg.elite_size));
  }

  report.wall_time_seconds =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

} // namespace fsnet

#endif // FSNET_LGA_HPP

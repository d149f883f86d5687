#ifndef FSNET_SPEA2_HPP
#define FSNET_SPEA2_HPP

#include <fsnet/connection_cache.hpp>
#include <fsnet/lga.hpp>
#include <fsnet/objectives.hpp>
#include <fsnet/operators.hpp>
#include <fsnet/parallel.hpp>
#include <fsnet/report.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <span>
#include <vector>

namespace fsnet
{

struct Spea2Config : EvolutionConfig
{
  std::size_t archive_size = 100;
  std::size_t density_k = 0; // 0 resolves to floor(sqrt(archive_size))

  auto resolved_k() const -> std::size_t
  {
    if (density_k)
      return density_k;
    return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(archive_size)))));
  }

  auto validate() const -> void
  {
    EvolutionConfig::validate();
    if (archive_size < 2)
      throw config_error("archive size must be at least 2");
    if (archive_size > population_size)
      throw config_error("archive size (" + std::to_string(archive_size) +
                         ") must not exceed the population size (" +
                         std::to_string(population_size) + ")");
  }
};

inline auto to_json(const Spea2Config& c) -> nlohmann::ordered_json
{
  auto j = to_json(static_cast<const EvolutionConfig&>(c));
  j["archive"] = c.archive_size;
  j["density_k"] = c.resolved_k();
  return j;
}

struct Spea2Fitness
{
  std::size_t strength = 0; // individuals this one dominates
  std::size_t raw = 0;      // sum of strengths of its dominators
  double density = 0.0;     // 1 / (sigma_k + 2)
  double total = 0.0;       // raw + density; < 1 iff nondominated
};

using point2 = std::array<double, 2>;

// Min-max scales both objectives to [0, 1] over the given set. A coordinate with
// zero range maps to 0.
inline auto normalize(std::span<const ObjectiveVector> objectives) -> std::vector<point2>
{
  auto out = std::vector<point2>(objectives.size(), point2{0.0, 0.0});
  if (objectives.empty())
    return out;
  auto lo = point2{static_cast<double>(objectives[0].f1), objectives[0].f2};
  auto hi = lo;
  for (const auto& o : objectives)
  {
    const auto p = point2{static_cast<double>(o.f1), o.f2};
    for (std::size_t c = 0; c < 2; ++c)
    {
      lo[c] = std::min(lo[c], p[c]);
      hi[c] = std::max(hi[c], p[c]);
    }
  }
  for (std::size_t i = 0; i < objectives.size(); ++i)
  {
    const auto p = point2{static_cast<double>(objectives[i].f1), objectives[i].f2};
    for (std::size_t c = 0; c < 2; ++c)
      out[i][c] = hi[c] > lo[c] ? (p[c] - lo[c]) / (hi[c] - lo[c]) : 0.0;
  }
  return out;
}

inline auto distance(const point2& a, const point2& b) -> double
{
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

inline auto spea2_fitness(std::span<const ObjectiveVector> objectives, std::size_t k,
                          std::size_t threads = 1) -> std::vector<Spea2Fitness>
{
  const auto n = objectives.size();
  if (n < 2)
    throw std::invalid_argument("SPEA2 fitness needs at least two individuals");
  k = std::clamp<std::size_t>(k, 1, n - 1);

  auto fitness = std::vector<Spea2Fitness>(n);
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j)
      if (dominates(objectives[i], objectives[j]))
        ++fitness[i].strength;
  });
  const auto points = normalize(objectives);
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j)
      if (dominates(objectives[j], objectives[i]))
        fitness[i].raw += fitness[j].strength;
    auto d = std::vector<double>{};
    d.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i)
        d.push_back(distance(points[i], points[j]));
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k - 1), d.end());
    fitness[i].density = 1.0 / (d[k - 1] + 2.0);
    fitness[i].total = static_cast<double>(fitness[i].raw) + fitness[i].density;
  });
  return fitness;
}

namespace detail
{

// Iterative truncation on normalized points. Identical points are handled as one
// group with a multiplicity; a point's sorted distance vector is then its
// multiplicity-1 zeros followed by the distances to the other live groups, each
// repeated by that group's multiplicity. Removes the point with the
// lexicographically smallest vector (ties: lowest index) until `keep` remain.
// Returns the surviving indices in ascending order.
inline auto truncate_points(std::span<const point2> points, std::size_t keep)
  -> std::vector<std::size_t>
{
  const auto n = points.size();
  if (keep >= n)
  {
    auto all = std::vector<std::size_t>(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }

  auto group_of = std::map<point2, std::size_t>{};
  auto members = std::vector<std::vector<std::size_t>>{}; // ascending, consumed from front
  auto heads = std::vector<std::size_t>{};                // next live member position
  auto centers = std::vector<point2>{};
  for (std::size_t i = 0; i < n; ++i)
  {
    const auto [it, inserted] = group_of.try_emplace(points[i], members.size());
    if (inserted)
    {
      members.emplace_back();
      centers.push_back(points[i]);
    }
    members[it->second].push_back(i);
  }
  const auto groups = members.size();
  heads.assign(groups, 0);
  auto mult = std::vector<std::size_t>(groups);
  for (std::size_t g = 0; g < groups; ++g)
    mult[g] = members[g].size();

  auto dist = std::vector<double>(groups * groups);
  for (std::size_t a = 0; a < groups; ++a)
    for (std::size_t b = 0; b < groups; ++b)
      dist[a * groups + b] = distance(centers[a], centers[b]);

  auto neighbors = std::vector<std::vector<std::size_t>>(groups);
  for (std::size_t a = 0; a < groups; ++a)
  {
    auto& nb = neighbors[a];
    for (std::size_t b = 0; b < groups; ++b)
      if (b != a)
        nb.push_back(b);
    std::sort(nb.begin(), nb.end(), [&](auto x, auto y) {
      const auto dx = dist[a * groups + x];
      const auto dy = dist[a * groups + y];
      return dx != dy ? dx < dy : x < y;
    });
  }
  auto nearest = std::vector<std::size_t>(groups, 0); // first possibly-live neighbor position

  const auto first_live = [&](std::size_t a) -> std::size_t {
    auto& p = nearest[a];
    while (p < neighbors[a].size() && mult[neighbors[a][p]] == 0)
      ++p;
    return p;
  };

  // Compares the tails (distances to other groups, expanded by multiplicity).
  const auto compare_tails = [&](std::size_t a, std::size_t b) -> std::weak_ordering {
    auto pa = first_live(a);
    auto pb = first_live(b);
    auto ra = std::size_t{0};
    auto rb = std::size_t{0};
    const auto advance = [&](std::size_t g, std::size_t& p, std::size_t& r) {
      while (r == 0 && p < neighbors[g].size())
      {
        r = mult[neighbors[g][p]];
        if (r == 0)
          ++p;
      }
    };
    for (;;)
    {
      advance(a, pa, ra);
      advance(b, pb, rb);
      const auto end_a = pa >= neighbors[a].size();
      const auto end_b = pb >= neighbors[b].size();
      if (end_a || end_b)
        return end_a == end_b ? std::weak_ordering::equivalent
                              : (end_a ? std::weak_ordering::less : std::weak_ordering::greater);
      const auto da = dist[a * groups + neighbors[a][pa]];
      const auto db = dist[b * groups + neighbors[b][pb]];
      if (da != db)
        return da < db ? std::weak_ordering::less : std::weak_ordering::greater;
      const auto step = std::min(ra, rb);
      ra -= step;
      rb -= step;
      if (ra == 0)
        ++pa;
      if (rb == 0)
        ++pb;
    }
  };

  auto live = n;
  while (live > keep)
  {
    auto max_mult = std::size_t{0};
    for (std::size_t g = 0; g < groups; ++g)
      max_mult = std::max(max_mult, mult[g]);

    auto best = groups;
    for (std::size_t g = 0; g < groups; ++g)
    {
      if (mult[g] != max_mult)
        continue;
      if (best == groups)
      {
        best = g;
        continue;
      }
      const auto order = compare_tails(g, best);
      if (order < 0 || (order == 0 && members[g][heads[g]] < members[best][heads[best]]))
        best = g;
    }
    ++heads[best];
    --mult[best];
    --live;
  }

  auto kept = std::vector<std::size_t>{};
  kept.reserve(keep);
  for (std::size_t g = 0; g < groups; ++g)
    for (auto p = heads[g]; p < members[g].size(); ++p)
      kept.push_back(members[g][p]);
  std::sort(kept.begin(), kept.end());
  return kept;
}

} // namespace detail

// Reduces a nondominated set to `keep` members, removing at each step the member
// closest to the others (by its sorted distance vector in normalized objective
// space). Returns surviving indices into `objectives`, ascending.
inline auto truncate(std::span<const ObjectiveVector> objectives, std::size_t keep)
  -> std::vector<std::size_t>
{
  const auto points = normalize(objectives);
  return detail::truncate_points(points, keep);
}

// Selects the next archive from an evaluated union: every individual with
// fitness < 1, truncated if there are more than archive_size, or topped up with
// the lowest-fitness dominated individuals. Returns union indices, nondominated first.
inline auto environmental_selection(std::span<const ObjectiveVector> objectives,
                                    std::span<const Spea2Fitness> fitness,
                                    std::size_t archive_size) -> std::vector<std::size_t>
{
  auto nondominated = std::vector<std::size_t>{};
  auto dominated = std::vector<std::size_t>{};
  for (std::size_t i = 0; i < objectives.size(); ++i)
    (fitness[i].total < 1.0 ? nondominated : dominated).push_back(i);

  if (nondominated.size() > archive_size)
  {
    auto points = normalize(objectives);
    auto subset = std::vector<point2>{};
    subset.reserve(nondominated.size());
    for (const auto i : nondominated)
      subset.push_back(points[i]);
    auto kept = std::vector<std::size_t>{};
    for (const auto p : detail::truncate_points(subset, archive_size))
      kept.push_back(nondominated[p]);
    return kept;
  }

  auto archive = std::move(nondominated);
  std::stable_sort(dominated.begin(), dominated.end(), [&](auto a, auto b) {
    return fitness[a].total < fitness[b].total;
  });
  for (std::size_t p = 0; p < dominated.size() && archive.size() < archive_size; ++p)
    archive.push_back(dominated[p]);
  return archive;
}

struct ArchiveMember
{
  CandidateSolution solution;
  Spea2Fitness fitness;
};

namespace detail
{

inline auto nondominated_members(std::span<const ArchiveMember> archive)
  -> std::vector<CandidateSolution>
{
  auto out = std::vector<CandidateSolution>{};
  for (const auto& m : archive)
    if (m.fitness.raw == 0)
      out.push_back(m.solution);
  return out;
}

} // namespace detail

// Sees every evaluated union with its fitness, before environmental selection.
using UnionObserver = std::function<void(std::size_t generation,
                                         std::span<const ObjectiveVector> objectives,
                                         std::span<const Spea2Fitness> fitness)>;

// SPEA2 with an external archive. Mating draws binary tournaments on archive
// fitness; fitness and environmental selection run on population + archive.
// The report tracks the nondominated archive members of every generation.
inline auto run_spea2(const FeatureSampleNetwork& g, const Spea2Config& cfg,
                      const GenerationObserver& observe = {},
                      const UnionObserver& inspect = {}) -> RunReport
{
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto max_new = cfg.resolved_max_new_features(g);
  const auto k = cfg.resolved_k();
  auto cache = ConnectionCache{cfg.cache_capacity};

  auto report = RunReport{};
  report.strategy = "spea2";
  report.seed = cfg.seed;
  report.config = to_json(cfg);
  report.config["max_new_features"] = max_new;

  auto population = detail::initial_population(g, cfg);
  auto archive = std::vector<ArchiveMember>{};

  for (std::size_t gen = 0; gen < cfg.generations; ++gen)
  {
    if (gen > 0)
    {
      auto parents = std::vector<CandidateSolution>{};
      auto scores = std::vector<double>{};
      for (const auto& m : archive)
      {
        parents.push_back(m.solution);
        scores.push_back(m.fitness.total);
      }
      const auto by_fitness = [](double a, double b) { return std::weak_order(a, b); };
      population.resize(cfg.population_size);
      detail::breed(
        g, std::span<const CandidateSolution>(parents),
        [&](rng_type& rng) {
          return binary_tournament(std::span<const double>(scores), by_fitness, rng);
        },
        cfg, gen, population);
    }
    detail::evaluate_all(g, population, max_new, cache, cfg.seed, gen, cfg.threads);

    // Union: new population first, then the previous archive.
    auto union_solutions = std::move(population);
    for (auto& m : archive)
      union_solutions.push_back(std::move(m.solution));
    auto objectives = std::vector<ObjectiveVector>{};
    objectives.reserve(union_solutions.size());
    for (const auto& s : union_solutions)
      objectives.push_back(s.objectives());

    const auto fitness = spea2_fitness(objectives, k, cfg.threads);
    if (inspect)
      inspect(gen, objectives, fitness);
    const auto selected = environmental_selection(objectives, fitness, cfg.archive_size);
    archive.clear();
    for (const auto i : selected)
      archive.push_back({std::move(union_solutions[i]), fitness[i]});
    population.clear();

    const auto tracked = detail::nondominated_members(archive);
    report.generations.push_back(detail::summarize(tracked));
    report.archive_nondominated_count.push_back(tracked.size());
    if (observe)
      observe(gen, tracked);
    if (gen + 1 == cfg.generations)
      report.final_set = detail::final_set(tracked);
  }

  report.wall_time_seconds =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

} // namespace fsnet

#endif // FSNET_SPEA2_HPP

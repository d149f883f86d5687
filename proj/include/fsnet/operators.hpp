#ifndef FSNET_OPERATORS_HPP
#define FSNET_OPERATORS_HPP

#include <fsnet/and_feature.hpp>
#include <fsnet/error.hpp>
#include <fsnet/objectives.hpp>
#include <fsnet/random.hpp>

#include <algorithm>
#include <cmath>
#include <compare>
#include <random>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

namespace fsnet
{

// Individual size is drawn as floor(M), M ~ N(mu, sigma), raised to at least 1.
struct InitParams
{
  double mu = 50.0;
  double sigma = 10.0;

  auto validate() const -> void
  {
    if (!(mu > 0.0) || !(sigma > 0.0))
      throw config_error("mu and sigma must be positive");
  }
};

struct VariationParams
{
  double recombination_rate = 0.6;
  std::size_t eta = 1; // random changes applied to every generated child

  auto validate() const -> void
  {
    if (!(recombination_rate >= 0.0 && recombination_rate <= 1.0))
      throw config_error("recombination rate must lie in [0, 1]");
  }
};

template <typename Rng>
auto init_individual(const FeatureSampleNetwork& g, const InitParams& params, Rng& rng)
  -> CandidateSolution
{
  const auto m = std::normal_distribution<double>{params.mu, params.sigma}(rng);
  auto size = m < 1.0 ? std::size_t{1} : static_cast<std::size_t>(std::floor(m));
  if (g.n_features() < 64)
  {
    const auto possible = (std::uint64_t{1} << g.n_features()) - g.n_features() - 1;
    size = static_cast<std::size_t>(std::min<std::uint64_t>(size, possible));
  }

  auto drawn = std::unordered_set<AndFeature, AndFeatureHash>{};
  auto features = std::vector<AndFeature>{};
  features.reserve(size);
  while (features.size() < size)
  {
    auto af = sample_and_feature(g, rng);
    if (drawn.insert(af).second)
      features.push_back(std::move(af));
  }
  return CandidateSolution{std::move(features)};
}

// Both children start as the intersection of the parents; every element of the
// symmetric difference, visited in sorted order, goes to the first child on a
// fair coin and to the second child otherwise. Children inherit their parent's
// evaluation as the base for incremental re-evaluation.
template <typename Rng>
auto uniform_crossover(const CandidateSolution& p1, const CandidateSolution& p2, Rng& rng)
  -> std::pair<CandidateSolution, CandidateSolution>
{
  auto to_first = std::vector<AndFeature>{};  // from p2 only, moved into child 1
  auto to_second = std::vector<AndFeature>{}; // from p1 only, moved into child 2

  const auto a = p1.features();
  const auto b = p2.features();
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() || j != b.end())
  {
    if (j == b.end() || (i != a.end() && *i < *j))
    {
      if (!coin(rng, 0.5))
        to_second.push_back(*i);
      ++i;
    }
    else if (i == a.end() || *j < *i)
    {
      if (coin(rng, 0.5))
        to_first.push_back(*j);
      ++j;
    }
    else
    {
      ++i;
      ++j;
    }
  }

  auto c1 = p1;
  auto c2 = p2;
  c1.apply(to_first, to_second);
  c2.apply(to_second, to_first);
  return {std::move(c1), std::move(c2)};
}

enum class MutationKind
{
  add,
  remove,
  modify,
};

namespace detail
{

// Modifies a: with chance 1/q sets one uniformly chosen index; otherwise swaps a
// set position with a uniformly chosen position in [0, D).
template <typename Rng>
auto modify_and_feature(const AndFeature& af, std::size_t n_features, Rng& rng) -> AndFeature
{
  const auto q = af.order();
  auto members = AndFeature::member_list(af.members().begin(), af.members().end());
  if (coin(rng, 1.0 / static_cast<double>(q)))
  {
    const auto j = static_cast<index_type>(uniform_index(rng, n_features));
    if (af.contains(j))
      return af;
    members.insert(std::lower_bound(members.begin(), members.end(), j), j);
  }
  else
  {
    const auto pos = uniform_index(rng, q);
    const auto j = static_cast<index_type>(uniform_index(rng, n_features));
    if (af.contains(j))
      return af;
    members.erase(members.begin() + static_cast<std::ptrdiff_t>(pos));
    members.insert(std::lower_bound(members.begin(), members.end(), j), j);
  }
  return AndFeature::from_sorted(std::move(members));
}

} // namespace detail

template <typename Rng>
auto mutate_once(const FeatureSampleNetwork& g, CandidateSolution& solution, MutationKind kind,
                 Rng& rng) -> void
{
  switch (kind)
  {
  case MutationKind::add:
    solution.insert(sample_and_feature(g, rng));
    break;
  case MutationKind::remove:
  {
    if (solution.empty())
      break;
    const auto r = uniform_index(rng, solution.size() + 1);
    if (r < solution.size())
    {
      const auto victim = solution.features()[r];
      solution.erase(victim);
    }
    break;
  }
  case MutationKind::modify:
  {
    if (solution.empty())
      break;
    const auto v = solution.features()[uniform_index(rng, solution.size())];
    auto modified = detail::modify_and_feature(v, g.n_features(), rng);
    if (modified != v)
    {
      solution.erase(v);
      solution.insert(std::move(modified));
    }
    break;
  }
  }
}

// Applies eta random changes, each an add, remove or modify with equal probability.
template <typename Rng>
auto mutate(const FeatureSampleNetwork& g, CandidateSolution& solution, std::size_t eta, Rng& rng)
  -> void
{
  for (std::size_t c = 0; c < eta; ++c)
    mutate_once(g, solution, static_cast<MutationKind>(uniform_index(rng, 3)), rng);
}

// Draws two indices uniformly with replacement and returns the better one under
// `compare` (std::weak_ordering::less means better); exact ties are broken by a coin.
template <typename T, typename Compare, typename Rng>
auto binary_tournament(std::span<const T> population, Compare&& compare, Rng& rng) -> std::size_t
{
  if (population.empty())
    throw std::invalid_argument("binary tournament on an empty population");
  const auto a = uniform_index(rng, population.size());
  const auto b = uniform_index(rng, population.size());
  const auto order = compare(population[a], population[b]);
  if (order < 0)
    return a;
  if (order > 0)
    return b;
  return coin(rng, 0.5) ? a : b;
}

} // namespace fsnet

#endif // FSNET_OPERATORS_HPP

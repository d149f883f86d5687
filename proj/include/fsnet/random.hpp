#ifndef FSNET_RANDOM_HPP
#define FSNET_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace fsnet
{

using rng_type = std::mt19937_64;

namespace detail
{
constexpr auto splitmix64(std::uint64_t x) -> std::uint64_t
{
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}
} // namespace detail

// Mixes a base seed with a path of indices (generation, slot, purpose, ...) so that
// every unit of work owns an independent stream regardless of scheduling.
inline auto derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
  -> std::uint64_t
{
  auto state = detail::splitmix64(seed);
  for (const auto p : path)
    state = detail::splitmix64(state ^ detail::splitmix64(p + 0x632be59bd9b4e019ull));
  return state;
}

inline auto make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path) -> rng_type
{
  return rng_type{derive_seed(seed, path)};
}

template <typename Rng> auto uniform_index(Rng& rng, std::size_t n) -> std::size_t
{
  return std::uniform_int_distribution<std::size_t>{0, n - 1}(rng);
}

template <typename Rng> auto uniform01(Rng& rng) -> double
{
  return std::uniform_real_distribution<double>{0.0, 1.0}(rng);
}

template <typename Rng> auto coin(Rng& rng, double p) -> bool { return uniform01(rng) < p; }

} // namespace fsnet

#endif // FSNET_RANDOM_HPP

#ifndef FSNET_AND_FEATURE_HPP
#define FSNET_AND_FEATURE_HPP

#include <fsnet/error.hpp>
#include <fsnet/network.hpp>
#include <fsnet/random.hpp>

#include <boost/container/small_vector.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsnet
{

using big_int = boost::multiprecision::cpp_int;
using big_rational = boost::multiprecision::cpp_rational;

// A conjunction of two or more base features. It connects to sample i iff every
// member feature is active in i. Members are kept strictly ascending, so two
// and-features are equal iff their member lists are equal.
class AndFeature
{
public:
  using member_list = boost::container::small_vector<index_type, 6>;

  AndFeature() = default;

  AndFeature(std::initializer_list<index_type> members)
    : AndFeature(std::span<const index_type>(members.begin(), members.size()))
  {
  }

  explicit AndFeature(std::span<const index_type> members)
    : members_(members.begin(), members.end())
  {
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
      throw domain_error("and-feature members must be distinct");
    if (members_.size() < 2)
      throw domain_error("an and-feature needs at least two members");
  }

  // Trusts the caller: members already strictly ascending, at least two.
  static auto from_sorted(member_list members) -> AndFeature
  {
    auto af = AndFeature{};
    af.members_ = std::move(members);
    return af;
  }

  auto order() const -> std::size_t { return members_.size(); }
  auto members() const -> std::span<const index_type> { return {members_.data(), members_.size()}; }
  auto contains(index_type j) const -> bool
  {
    return std::binary_search(members_.begin(), members_.end(), j);
  }

  friend auto operator==(const AndFeature& a, const AndFeature& b) -> bool
  {
    return a.members_ == b.members_;
  }
  friend auto operator<=>(const AndFeature& a, const AndFeature& b) -> std::strong_ordering
  {
    return std::lexicographical_compare_three_way(a.members_.begin(), a.members_.end(),
                                                  b.members_.begin(), b.members_.end());
  }

  auto hash() const -> std::size_t
  {
    auto h = std::uint64_t{0xcbf29ce484222325ull};
    for (const auto m : members_)
    {
      h ^= m;
      h *= 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }

private:
  member_list members_;
};

struct AndFeatureHash
{
  auto operator()(const AndFeature& af) const -> std::size_t { return af.hash(); }
};

// Samples connected to the and-feature: the intersection of its members' feature
// adjacency lists, merged shortest-first and stopping as soon as it is empty.
inline auto connected_samples(const FeatureSampleNetwork& g, const AndFeature& af) -> index_list
{
  auto lists = boost::container::small_vector<std::span<const index_type>, 8>{};
  for (const auto j : af.members())
  {
    if (j >= g.n_features())
      throw std::out_of_range("and-feature member " + std::to_string(j) + " >= D = " +
                              std::to_string(g.n_features()));
    lists.push_back(g.feature_adj(j));
  }
  std::sort(lists.begin(), lists.end(),
            [](const auto& a, const auto& b) { return a.size() < b.size(); });

  auto result = index_list(lists.front().begin(), lists.front().end());
  for (std::size_t l = 1; l < lists.size() && !result.empty(); ++l)
  {
    const auto& other = lists[l];
    auto out = result.begin();
    auto it = other.begin();
    for (const auto s : result)
    {
      it = std::lower_bound(it, other.end(), s);
      if (it == other.end())
        break;
      if (*it == s)
        *out++ = s;
    }
    result.erase(out, result.end());
  }
  return result;
}

// 2^D - D - 1, the number of member sets of size >= 2 over D base features.
inline auto count_possible_and_features(std::size_t n_features) -> big_int
{
  if (n_features < 2)
    throw domain_error("need at least two base features");
  auto count = big_int{1};
  count <<= n_features;
  return count - n_features - 1;
}

// Probability (q-1)/q! that a sampled and-feature has order q.
inline auto order_probability(std::size_t q) -> big_rational
{
  if (q < 2)
    throw domain_error("and-feature order must be at least 2");
  auto factorial = big_int{1};
  for (std::size_t i = 2; i <= q; ++i)
    factorial *= i;
  return big_rational{big_int{q - 1}, factorial};
}

// Orders are distributed as (q-1)/q!, restricted to q <= D by restarting the draw
// whenever it would need to grow past D. Members are drawn uniformly without
// replacement; the result may have no connected sample.
template <typename Rng> auto sample_and_feature(std::size_t n_features, Rng& rng) -> AndFeature
{
  if (n_features < 2)
    throw domain_error("need at least two base features");

  auto members = AndFeature::member_list{};
  const auto draw_new = [&] {
    for (;;)
    {
      const auto j = static_cast<index_type>(uniform_index(rng, n_features));
      if (std::find(members.begin(), members.end(), j) == members.end())
      {
        members.push_back(j);
        return;
      }
    }
  };

  for (;;)
  {
    members.clear();
    draw_new();
    draw_new();
    auto accepted = false;
    for (;;)
    {
      const auto size = static_cast<double>(members.size());
      if (coin(rng, 1.0 - 1.0 / size))
      {
        accepted = true;
        break;
      }
      if (members.size() == n_features)
        break;
      draw_new();
    }
    if (accepted)
      break;
  }
  std::sort(members.begin(), members.end());
  return AndFeature::from_sorted(std::move(members));
}

template <typename Rng>
auto sample_and_feature(const FeatureSampleNetwork& g, Rng& rng) -> AndFeature
{
  return sample_and_feature(g.n_features(), rng);
}

inline constexpr std::uint64_t default_oracle_budget = std::uint64_t{1} << 22;

// Sum over samples of 2^{k_i}: the work bound of exhaustive enumeration.
inline auto oracle_cost(const FeatureSampleNetwork& g) -> big_int
{
  auto total = big_int{0};
  for (std::size_t i = 0; i < g.n_samples(); ++i)
  {
    auto term = big_int{1};
    term <<= g.sample_degree(i);
    total += term;
  }
  return total;
}

// Every connectable and-feature: the union over samples of all member subsets of
// size >= 2 of the sample's feature set. Sorted, duplicate-free.
inline auto enumerate_connected_oracle(const FeatureSampleNetwork& g,
                                       std::uint64_t budget = default_oracle_budget)
  -> std::vector<AndFeature>
{
  const auto cost = oracle_cost(g);
  if (cost > budget)
    throw budget_error("oracle infeasible: sum of 2^k_i = " + cost.str() +
                       " exceeds budget " + std::to_string(budget));

  auto rows = std::vector<index_list>{};
  rows.reserve(g.n_samples());
  for (std::size_t i = 0; i < g.n_samples(); ++i)
  {
    const auto adj = g.sample_adj(i);
    rows.emplace_back(adj.begin(), adj.end());
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());

  auto out = std::vector<AndFeature>{};
  for (const auto& row : rows)
  {
    const auto k = row.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask)
    {
      if (std::popcount(mask) < 2)
        continue;
      auto members = AndFeature::member_list{};
      for (std::size_t b = 0; b < k; ++b)
        if (mask >> b & 1u)
          members.push_back(row[b]);
      out.push_back(AndFeature::from_sorted(std::move(members)));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// AFS v1: one and-feature per line, ascending member indices separated by a single
// space, lines in lexicographic order.
inline auto write_afs(std::ostream& os, std::span<const AndFeature> features) -> void
{
  auto sorted = std::vector<AndFeature>(features.begin(), features.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& af : sorted)
  {
    auto first = true;
    for (const auto j : af.members())
    {
      if (!first)
        os << ' ';
      os << j;
      first = false;
    }
    os << '\n';
  }
}

inline auto to_afs_line(const AndFeature& af) -> std::string
{
  auto s = std::string{};
  for (const auto j : af.members())
  {
    if (!s.empty())
      s += ' ';
    s += std::to_string(j);
  }
  return s;
}

inline auto parse_afs_line(std::string_view line, std::size_t line_no) -> AndFeature
{
  auto members = AndFeature::member_list{};
  for (const auto tok : detail::split_ws(line))
  {
    const auto v = detail::parse_index(tok, line_no);
    if (!members.empty() && v <= members.back())
      throw parse_error("and-feature members are not strictly ascending", line_no);
    members.push_back(static_cast<index_type>(v));
  }
  if (members.size() < 2)
    throw parse_error("and-feature needs at least two members", line_no);
  return AndFeature::from_sorted(std::move(members));
}

// Reads an AFS v1 stream. When n_features is nonzero, members are range-checked.
inline auto read_afs(std::istream& in, std::size_t n_features = 0) -> std::vector<AndFeature>
{
  auto out = std::vector<AndFeature>{};
  auto line = std::string{};
  auto line_no = std::size_t{0};
  while (std::getline(in, line))
  {
    ++line_no;
    if (detail::trim(line).empty())
      continue;
    auto af = parse_afs_line(line, line_no);
    if (n_features && af.members().back() >= n_features)
      throw parse_error("member index " + std::to_string(af.members().back()) +
                          " out of range [0," + std::to_string(n_features) + ")",
                        line_no);
    out.push_back(std::move(af));
  }
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    throw parse_error("duplicate and-feature in set");
  return out;
}

} // namespace fsnet

#endif // FSNET_AND_FEATURE_HPP

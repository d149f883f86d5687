#ifndef FSNET_TESTS_SUPPORT_HPP
#define FSNET_TESTS_SUPPORT_HPP

// Helpers shared by the test suites: fixtures, random instances and brute-force
// oracles written independently of the library's algorithms.

#include <fsnet/fsnet.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fsnet::test
{

using dense_rows = std::vector<std::vector<std::uint8_t>>;

inline auto data_path(const std::string& name) -> std::string
{
  return std::string{FSNET_DATA_DIR} + "/" + name + ".csv";
}

inline auto load_network(const std::string& name, std::size_t bins = 3,
                         Binning scheme = Binning::equal_width) -> FeatureSampleNetwork
{
  auto in = std::ifstream{data_path(name)};
  if (!in)
    throw std::runtime_error("missing dataset " + data_path(name));
  return build_network(binarize(ingest_csv(in, {.label_column = "class"}), bins, scheme));
}

inline auto network_from_rows(const dense_rows& rows,
                              std::optional<std::vector<std::uint32_t>> labels = std::nullopt)
  -> FeatureSampleNetwork
{
  auto adj = std::vector<index_list>(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      if (rows[i][j])
        adj[i].push_back(static_cast<index_type>(j));
  return {rows.empty() ? 0 : rows.front().size(), std::move(adj), std::move(labels)};
}

// Random 0/1 matrix with every row nonzero.
inline auto random_rows(std::size_t n, std::size_t d, double density, std::mt19937_64& rng)
  -> dense_rows
{
  auto coin = std::bernoulli_distribution{density};
  auto pick = std::uniform_int_distribution<std::size_t>{0, d - 1};
  auto rows = dense_rows(n, std::vector<std::uint8_t>(d, 0));
  for (auto& row : rows)
  {
    for (auto& x : row)
      x = coin(rng) ? 1 : 0;
    row[pick(rng)] = 1;
  }
  return rows;
}

// Members as a bitmask over base features.
inline auto mask_of(const AndFeature& af) -> std::uint64_t
{
  auto m = std::uint64_t{0};
  for (const auto j : af.members())
    m |= std::uint64_t{1} << j;
  return m;
}

inline auto row_mask(const dense_rows& rows, std::size_t i) -> std::uint64_t
{
  auto m = std::uint64_t{0};
  for (std::size_t j = 0; j < rows[i].size(); ++j)
    if (rows[i][j])
      m |= std::uint64_t{1} << j;
  return m;
}

// Samples i with every member of af set in row i.
inline auto brute_connections(const dense_rows& rows, const AndFeature& af) -> std::vector<std::size_t>
{
  const auto m = mask_of(af);
  auto out = std::vector<std::size_t>{};
  for (std::size_t i = 0; i < rows.size(); ++i)
    if ((row_mask(rows, i) & m) == m)
      out.push_back(i);
  return out;
}

// Two-pass textbook sample standard deviation.
inline auto sample_sd(const std::vector<double>& xs) -> double
{
  auto mean = 0.0;
  for (const auto x : xs)
    mean += x;
  mean /= static_cast<double>(xs.size());
  auto ss = 0.0;
  for (const auto x : xs)
    ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

struct BruteEvaluation
{
  std::size_t count = 0;
  std::vector<std::int32_t> added;
  double disproportion = 0.0;
};

// From-scratch evaluation of a set of and-features without pruning or repair
// bookkeeping: counts the connected ones and per-sample additions.
inline auto brute_evaluate(const dense_rows& rows, const std::vector<AndFeature>& features)
  -> BruteEvaluation
{
  auto e = BruteEvaluation{};
  e.added.assign(rows.size(), 0);
  for (const auto& af : features)
  {
    const auto conn = brute_connections(rows, af);
    if (conn.empty())
      continue;
    ++e.count;
    for (const auto i : conn)
      ++e.added[i];
  }
  auto ratios = std::vector<double>{};
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    auto k = 0;
    for (const auto x : rows[i])
      k += x;
    ratios.push_back(static_cast<double>(e.added[i]) / k);
  }
  e.disproportion = sample_sd(ratios);
  return e;
}

} // namespace fsnet::test

#endif // FSNET_TESTS_SUPPORT_HPP

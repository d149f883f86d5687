#ifndef FSNET_NETWORK_HPP
#define FSNET_NETWORK_HPP

#include <fsnet/dataset.hpp>
#include <fsnet/error.hpp>

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace fsnet
{

using index_type = std::uint32_t;
using index_list = std::vector<index_type>;

// Bipartite graph between N samples and D binary features. Sample i is linked to
// feature j iff x_ij = 1. Immutable once built; both adjacency directions are kept
// as strictly ascending lists.
class FeatureSampleNetwork
{
public:
  FeatureSampleNetwork() = default;

  FeatureSampleNetwork(std::size_t n_features, std::vector<index_list> sample_adj,
                       std::optional<std::vector<std::uint32_t>> labels = std::nullopt)
    : n_features_(n_features)
    , sample_adj_(std::move(sample_adj))
    , feature_adj_(n_features)
    , labels_(std::move(labels))
  {
    if (labels_ && labels_->size() != sample_adj_.size())
      throw data_error("label count does not match the number of samples");
    for (std::size_t i = 0; i < sample_adj_.size(); ++i)
    {
      const auto& adj = sample_adj_[i];
      if (adj.empty())
        throw data_error("sample " + std::to_string(i) + " has no active feature (degree 0)");
      for (std::size_t p = 0; p < adj.size(); ++p)
      {
        if (adj[p] >= n_features_)
          throw data_error("sample " + std::to_string(i) + " references feature " +
                           std::to_string(adj[p]) + " >= D");
        if (p > 0 && adj[p] <= adj[p - 1])
          throw data_error("sample " + std::to_string(i) + " adjacency is not strictly ascending");
        feature_adj_[adj[p]].push_back(static_cast<index_type>(i));
      }
      n_edges_ += adj.size();
      degrees_.push_back(adj.size());
    }
  }

  auto n_samples() const -> std::size_t { return sample_adj_.size(); }
  auto n_features() const -> std::size_t { return n_features_; }
  auto n_edges() const -> std::size_t { return n_edges_; }

  auto sample_adj(std::size_t i) const -> std::span<const index_type> { return sample_adj_[i]; }
  auto feature_adj(std::size_t j) const -> std::span<const index_type> { return feature_adj_[j]; }
  auto sample_degree(std::size_t i) const -> std::size_t { return sample_adj_[i].size(); }
  auto feature_degree(std::size_t j) const -> std::size_t { return feature_adj_[j].size(); }

  auto has_labels() const -> bool { return labels_.has_value(); }
  auto labels() const -> const std::optional<std::vector<std::uint32_t>>& { return labels_; }

  auto sample_degrees() const -> std::span<const std::size_t> { return degrees_; }

  friend auto operator==(const FeatureSampleNetwork& a, const FeatureSampleNetwork& b) -> bool
  {
    return a.n_features_ == b.n_features_ && a.sample_adj_ == b.sample_adj_ &&
           a.labels_ == b.labels_;
  }

private:
  std::size_t n_features_ = 0;
  std::size_t n_edges_ = 0;
  std::vector<index_list> sample_adj_;
  std::vector<index_list> feature_adj_;
  std::vector<std::size_t> degrees_;
  std::optional<std::vector<std::uint32_t>> labels_;
};

inline auto build_network(const BinaryDataset& data) -> FeatureSampleNetwork
{
  auto adj = std::vector<index_list>(data.n_samples());
  for (std::size_t i = 0; i < data.n_samples(); ++i)
  {
    if (data.rows[i].size() != data.n_features)
      throw data_error("row " + std::to_string(i) + " has wrong dimension");
    for (std::size_t j = 0; j < data.n_features; ++j)
      if (data.rows[i][j])
        adj[i].push_back(static_cast<index_type>(j));
  }
  return {data.n_features, std::move(adj), data.labels};
}

// FSN v1:
//   FSN 1
//   N D
//   i: j1 j2 ...        (N lines, strictly ascending 0-based feature indices)
//   LABELS              (optional)
//   i: classid          (N lines)
inline auto write_fsn(std::ostream& os, const FeatureSampleNetwork& g) -> void
{
  os << "FSN 1\n" << g.n_samples() << ' ' << g.n_features() << '\n';
  for (std::size_t i = 0; i < g.n_samples(); ++i)
  {
    os << i << ':';
    for (const auto j : g.sample_adj(i))
      os << ' ' << j;
    os << '\n';
  }
  if (g.has_labels())
  {
    os << "LABELS\n";
    for (std::size_t i = 0; i < g.n_samples(); ++i)
      os << i << ": " << (*g.labels())[i] << '\n';
  }
}

namespace detail
{

inline auto parse_index(std::string_view token, std::size_t line_no) -> std::uint64_t
{
  auto value = std::uint64_t{0};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw parse_error("invalid integer '" + std::string{token} + "'", line_no);
  return value;
}

inline auto split_ws(std::string_view s) -> std::vector<std::string_view>
{
  auto out = std::vector<std::string_view>{};
  std::size_t p = 0;
  while (p < s.size())
  {
    while (p < s.size() && (s[p] == ' ' || s[p] == '\t' || s[p] == '\r'))
      ++p;
    auto q = p;
    while (q < s.size() && s[q] != ' ' && s[q] != '\t' && s[q] != '\r')
      ++q;
    if (q > p)
      out.push_back(s.substr(p, q - p));
    p = q;
  }
  return out;
}

// Parses "i: a b c" and checks that i equals the expected row index.
inline auto parse_indexed_line(std::string_view line, std::size_t expected, std::size_t line_no)
  -> std::vector<std::uint64_t>
{
  const auto colon = line.find(':');
  if (colon == std::string_view::npos)
    throw parse_error("expected '<index>: ...'", line_no);
  const auto head = trim(line.substr(0, colon));
  if (parse_index(head, line_no) != expected)
    throw parse_error("expected row index " + std::to_string(expected), line_no);
  auto values = std::vector<std::uint64_t>{};
  for (const auto tok : split_ws(line.substr(colon + 1)))
    values.push_back(parse_index(tok, line_no));
  return values;
}

} // namespace detail

inline auto read_fsn(std::istream& in) -> FeatureSampleNetwork
{
  auto line = std::string{};
  auto line_no = std::size_t{0};
  const auto next = [&]() -> bool {
    if (!std::getline(in, line))
      return false;
    ++line_no;
    return true;
  };

  if (!next())
    throw parse_error("empty FSN stream");
  const auto magic = detail::split_ws(line);
  if (magic.size() != 2 || magic[0] != "FSN")
    throw parse_error("missing 'FSN <version>' header", line_no);
  if (magic[1] != "1")
    throw parse_error("unsupported FSN version " + std::string{magic[1]}, line_no);

  if (!next())
    throw parse_error("missing 'N D' line", line_no + 1);
  const auto dims = detail::split_ws(line);
  if (dims.size() != 2)
    throw parse_error("expected 'N D'", line_no);
  const auto n = detail::parse_index(dims[0], line_no);
  const auto d = detail::parse_index(dims[1], line_no);

  auto adj = std::vector<index_list>(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    if (!next())
      throw parse_error("unexpected end of stream, expected sample " + std::to_string(i),
                        line_no + 1);
    const auto values = detail::parse_indexed_line(line, i, line_no);
    if (values.empty())
      throw parse_error("sample " + std::to_string(i) + " has no features", line_no);
    for (std::size_t p = 0; p < values.size(); ++p)
    {
      if (values[p] >= d)
        throw parse_error("feature index " + std::to_string(values[p]) + " out of range [0," +
                            std::to_string(d) + ")",
                          line_no);
      if (p > 0 && values[p] <= values[p - 1])
        throw parse_error("feature indices are not strictly ascending", line_no);
      adj[i].push_back(static_cast<index_type>(values[p]));
    }
  }

  auto labels = std::optional<std::vector<std::uint32_t>>{};
  while (next())
  {
    if (detail::trim(line).empty())
      continue;
    if (detail::trim(line) != "LABELS" || labels)
      throw parse_error("unexpected content after adjacency block", line_no);
    labels.emplace();
    for (std::size_t i = 0; i < n; ++i)
    {
      if (!next())
        throw parse_error("unexpected end of LABELS block", line_no + 1);
      const auto values = detail::parse_indexed_line(line, i, line_no);
      if (values.size() != 1)
        throw parse_error("expected exactly one class id", line_no);
      labels->push_back(static_cast<std::uint32_t>(values[0]));
    }
  }
  return {d, std::move(adj), std::move(labels)};
}

inline auto to_fsn_string(const FeatureSampleNetwork& g) -> std::string
{
  auto os = std::ostringstream{};
  write_fsn(os, g);
  return os.str();
}

inline auto fsn_from_string(const std::string& text) -> FeatureSampleNetwork
{
  auto in = std::istringstream{text};
  return read_fsn(in);
}

} // namespace fsnet

#endif // FSNET_NETWORK_HPP

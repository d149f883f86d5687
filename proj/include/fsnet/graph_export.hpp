#ifndef FSNET_GRAPH_EXPORT_HPP
#define FSNET_GRAPH_EXPORT_HPP

#include <fsnet/and_feature.hpp>
#include <fsnet/network.hpp>

#include <array>
#include <ostream>
#include <span>
#include <sstream>
#include <string>

namespace fsnet
{

// Writes the (possibly enhanced) network as an undirected DOT graph. Samples are
// circles s<i> filled by class color, features are boxes f<j>, and-features are
// filled boxes a<c> labeled with their members.
inline auto write_dot(std::ostream& os, const FeatureSampleNetwork& g,
                      std::span<const AndFeature> features = {}) -> void
{
  static constexpr auto palette = std::array{
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
  };

  os << "graph fsn {\n";
  os << "  graph [layout=neato, overlap=false];\n";
  for (std::size_t i = 0; i < g.n_samples(); ++i)
  {
    os << "  s" << i << " [shape=circle, label=\"" << i << '"';
    if (g.has_labels())
    {
      const auto c = (*g.labels())[i];
      os << ", class=" << c << ", style=filled, fillcolor=\"" << palette[c % palette.size()]
         << '"';
    }
    os << "];\n";
  }
  for (std::size_t j = 0; j < g.n_features(); ++j)
    os << "  f" << j << " [shape=box, label=\"" << j << "\"];\n";
  for (std::size_t c = 0; c < features.size(); ++c)
    os << "  a" << c << " [shape=box, style=filled, fillcolor=\"#dddddd\", label=\""
       << to_afs_line(features[c]) << "\"];\n";

  for (std::size_t i = 0; i < g.n_samples(); ++i)
    for (const auto j : g.sample_adj(i))
      os << "  s" << i << " -- f" << j << ";\n";
  for (std::size_t c = 0; c < features.size(); ++c)
    for (const auto i : connected_samples(g, features[c]))
      os << "  s" << i << " -- a" << c << ";\n";
  os << "}\n";
}

inline auto to_dot(const FeatureSampleNetwork& g, std::span<const AndFeature> features = {})
  -> std::string
{
  auto os = std::ostringstream{};
  write_dot(os, g, features);
  return os.str();
}

} // namespace fsnet

#endif // FSNET_GRAPH_EXPORT_HPP

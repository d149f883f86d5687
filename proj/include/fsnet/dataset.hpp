#ifndef FSNET_DATASET_HPP
#define FSNET_DATASET_HPP

#include <fsnet/error.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace fsnet
{

struct Attribute
{
  std::string name;
  bool numeric = true;
  std::vector<double> values;            // numeric attributes
  std::vector<std::string> categories;   // categorical attributes

  auto size() const -> std::size_t { return numeric ? values.size() : categories.size(); }
};

struct RawDataset
{
  std::vector<Attribute> attributes;
  std::optional<std::vector<std::uint32_t>> labels;
  std::vector<std::string> label_names; // label_names[id] is the original class value

  auto n_samples() const -> std::size_t
  {
    return attributes.empty() ? (labels ? labels->size() : 0) : attributes.front().size();
  }
};

struct CsvOptions
{
  char delimiter = ',';
  bool has_header = true;
  // Column name (requires a header) or 0-based index. Empty means unlabeled.
  std::string label_column;
};

namespace detail
{

inline auto trim(std::string_view s) -> std::string_view
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline auto split_csv_line(std::string_view line, char delimiter, std::size_t line_no)
  -> std::vector<std::string>
{
  auto fields = std::vector<std::string>{};
  auto current = std::string{};
  auto quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i)
  {
    const auto c = line[i];
    if (quoted)
    {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"')
      {
        current.push_back('"');
        ++i;
      }
      else if (c == '"')
        quoted = false;
      else
        current.push_back(c);
    }
    else if (c == '"')
      quoted = true;
    else if (c == delimiter)
    {
      fields.emplace_back(trim(current));
      current.clear();
    }
    else
      current.push_back(c);
  }
  if (quoted)
    throw parse_error("unterminated quoted field", line_no);
  fields.emplace_back(trim(current));
  return fields;
}

inline auto parse_double(std::string_view s) -> std::optional<double>
{
  if (s.empty())
    return std::nullopt;
  // from_chars rejects a leading '+'; accept ".5" style values by prefixing a zero.
  auto text = std::string{s.front() == '+' ? s.substr(1) : s};
  if (!text.empty() && text.front() == '.')
    text.insert(text.begin(), '0');
  else if (text.size() > 1 && text.front() == '-' && text[1] == '.')
    text.insert(text.begin() + 1, '0');
  auto value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value))
    return std::nullopt;
  return value;
}

// Sorts distinct strings numerically when all of them are numbers, lexicographically otherwise.
inline auto sorted_distinct(const std::vector<std::string>& values) -> std::vector<std::string>
{
  auto distinct = std::vector<std::string>(values.begin(), values.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const auto all_numeric = std::all_of(distinct.begin(), distinct.end(),
                                       [](const auto& s) { return parse_double(s).has_value(); });
  if (all_numeric)
    std::stable_sort(distinct.begin(), distinct.end(), [](const auto& a, const auto& b) {
      return *parse_double(a) < *parse_double(b);
    });
  return distinct;
}

} // namespace detail

inline auto ingest_csv(std::istream& in, const CsvOptions& options = {}) -> RawDataset
{
  auto header = std::vector<std::string>{};
  auto rows = std::vector<std::vector<std::string>>{};
  auto line = std::string{};
  auto line_no = std::size_t{0};
  auto width = std::size_t{0};

  while (std::getline(in, line))
  {
    ++line_no;
    if (detail::trim(line).empty())
      continue;
    auto fields = detail::split_csv_line(line, options.delimiter, line_no);
    if (width == 0)
      width = fields.size();
    else if (fields.size() != width)
      throw parse_error("expected " + std::to_string(width) + " fields, found " +
                          std::to_string(fields.size()),
                        line_no);
    if (options.has_header && header.empty())
      header = std::move(fields);
    else
      rows.push_back(std::move(fields));
  }
  if (rows.empty())
    throw parse_error("empty input: no data rows");

  auto label_index = std::optional<std::size_t>{};
  if (!options.label_column.empty())
  {
    const auto it = std::find(header.begin(), header.end(), options.label_column);
    if (it != header.end())
      label_index = static_cast<std::size_t>(it - header.begin());
    else
    {
      auto index = std::size_t{0};
      const auto& s = options.label_column;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), index);
      if (ec != std::errc{} || ptr != s.data() + s.size() || index >= width)
        throw config_error("label column '" + s + "' does not exist");
      label_index = index;
    }
  }

  auto data = RawDataset{};
  for (std::size_t c = 0; c < width; ++c)
  {
    if (label_index && c == *label_index)
      continue;
    auto attribute = Attribute{};
    attribute.name = header.empty() ? "attr" + std::to_string(c) : header[c];
    attribute.numeric = std::all_of(rows.begin(), rows.end(), [c](const auto& row) {
      return detail::parse_double(row[c]).has_value();
    });
    for (const auto& row : rows)
    {
      if (attribute.numeric)
        attribute.values.push_back(*detail::parse_double(row[c]));
      else
        attribute.categories.push_back(row[c]);
    }
    data.attributes.push_back(std::move(attribute));
  }

  if (label_index)
  {
    auto raw = std::vector<std::string>{};
    raw.reserve(rows.size());
    for (const auto& row : rows)
      raw.push_back(row[*label_index]);
    data.label_names = detail::sorted_distinct(raw);
    auto ids = std::map<std::string, std::uint32_t>{};
    for (std::uint32_t i = 0; i < data.label_names.size(); ++i)
      ids.emplace(data.label_names[i], i);
    auto labels = std::vector<std::uint32_t>{};
    labels.reserve(raw.size());
    for (const auto& r : raw)
      labels.push_back(ids.at(r));
    data.labels = std::move(labels);
  }
  return data;
}

inline auto ingest_csv(const std::string& text, const CsvOptions& options = {}) -> RawDataset
{
  auto in = std::istringstream{text};
  return ingest_csv(in, options);
}

enum class Binning
{
  equal_width,     // `bins` intervals of equal length over [min, max], last one closed
  equal_frequency, // interpolated quantile edges, right-closed intervals, first one closed
};

struct FeatureOrigin
{
  std::size_t attribute;
  std::size_t bin; // bin index, or category id for categorical attributes
  std::string description;
};

struct BinaryDataset
{
  std::size_t n_features = 0;
  std::vector<std::vector<std::uint8_t>> rows;
  std::optional<std::vector<std::uint32_t>> labels;
  std::vector<FeatureOrigin> origins;
  std::vector<std::string> warnings;

  auto n_samples() const -> std::size_t { return rows.size(); }
};

namespace detail
{

// Linear quantile interpolation as done by numpy's default method.
inline auto quantile(const std::vector<double>& sorted, double p) -> double
{
  const auto h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size())
    return sorted.back();
  const auto t = h - static_cast<double>(lo);
  const auto a = sorted[lo];
  const auto b = sorted[lo + 1];
  const auto d = b - a;
  return t >= 0.5 ? b - d * (1.0 - t) : a + d * t;
}

inline auto bin_numeric(const std::vector<double>& values, std::size_t bins, Binning scheme)
  -> std::vector<std::size_t>
{
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const auto lo = *lo_it;
  const auto hi = *hi_it;
  auto out = std::vector<std::size_t>(values.size(), 0);

  if (scheme == Binning::equal_width)
  {
    for (std::size_t i = 0; i < values.size(); ++i)
    {
      const auto b = static_cast<std::size_t>((values[i] - lo) / (hi - lo) * static_cast<double>(bins));
      out[i] = std::min(b, bins - 1);
    }
    return out;
  }

  auto sorted = values;
  std::sort(sorted.begin(), sorted.end());
  auto edges = std::vector<double>{};
  for (std::size_t b = 0; b <= bins; ++b)
    edges.push_back(quantile(sorted, static_cast<double>(b) / static_cast<double>(bins)));
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (std::size_t i = 0; i < values.size(); ++i)
  {
    const auto pos = static_cast<std::size_t>(
      std::lower_bound(edges.begin(), edges.end(), values[i]) - edges.begin());
    out[i] = pos == 0 ? 0 : pos - 1;
  }
  return out;
}

inline auto format_number(double v) -> std::string
{
  auto os = std::ostringstream{};
  os.precision(6);
  os << v;
  return os.str();
}

} // namespace detail

// One-hot encodes every attribute. Numeric attributes are discretized into `bins`
// intervals; bins that no sample falls into are dropped, so every feature has at
// least one sample. A constant attribute yields a single always-on feature.
inline auto binarize(const RawDataset& raw, std::size_t bins, Binning scheme = Binning::equal_width)
  -> BinaryDataset
{
  const auto n = raw.n_samples();
  if (n == 0 || raw.attributes.empty())
    throw data_error("cannot binarize an empty dataset");
  for (const auto& a : raw.attributes)
    if (a.size() != n)
      throw data_error("attribute '" + a.name + "' has " + std::to_string(a.size()) +
                       " values, expected " + std::to_string(n));
  if (raw.labels && raw.labels->size() != n)
    throw data_error("label vector length does not match the number of samples");
  const auto any_numeric = std::any_of(raw.attributes.begin(), raw.attributes.end(),
                                       [](const auto& a) { return a.numeric; });
  if (any_numeric && bins < 2)
    throw config_error("bins must be at least 2 for numeric attributes");

  auto out = BinaryDataset{};
  out.labels = raw.labels;
  // Per-sample active feature index, one per attribute.
  auto active = std::vector<std::vector<std::size_t>>(n);

  for (std::size_t a = 0; a < raw.attributes.size(); ++a)
  {
    const auto& attribute = raw.attributes[a];
    auto codes = std::vector<std::size_t>(n, 0);
    auto labels = std::vector<std::string>{};

    if (attribute.numeric)
    {
      const auto [lo_it, hi_it] =
        std::minmax_element(attribute.values.begin(), attribute.values.end());
      if (*lo_it == *hi_it)
      {
        out.warnings.push_back("attribute '" + attribute.name +
                               "' is constant; emitting a single always-on feature");
        labels.push_back(attribute.name + "=" + detail::format_number(*lo_it));
      }
      else
      {
        codes = detail::bin_numeric(attribute.values, bins, scheme);
        for (std::size_t b = 0; b < bins; ++b)
          labels.push_back(attribute.name + " bin " + std::to_string(b));
      }
    }
    else
    {
      const auto categories = detail::sorted_distinct(attribute.categories);
      for (std::size_t i = 0; i < n; ++i)
        codes[i] = static_cast<std::size_t>(
          std::find(categories.begin(), categories.end(), attribute.categories[i]) -
          categories.begin());
      for (const auto& c : categories)
        labels.push_back(attribute.name + "=" + c);
    }

    auto used = std::set<std::size_t>(codes.begin(), codes.end());
    auto remap = std::map<std::size_t, std::size_t>{};
    for (const auto code : used)
    {
      remap.emplace(code, out.n_features++);
      out.origins.push_back({a, code, labels[code]});
    }
    for (std::size_t i = 0; i < n; ++i)
      active[i].push_back(remap.at(codes[i]));
  }

  if (out.n_features < 2)
    throw data_error("binarized dataset has fewer than 2 features");

  out.rows.assign(n, std::vector<std::uint8_t>(out.n_features, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (const auto j : active[i])
      out.rows[i][j] = 1;
  return out;
}

} // namespace fsnet

#endif // FSNET_DATASET_HPP

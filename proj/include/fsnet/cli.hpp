#ifndef FSNET_CLI_HPP
#define FSNET_CLI_HPP

#include <fsnet/fsnet.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fsnet::cli
{

enum exit_code : int
{
  exit_ok = 0,
  exit_failure = 1,
  exit_config = 2,
  exit_data = 3,
  exit_budget = 4,
};

// Every setting a run can take from a config file or a flag. Config file keys are
// the flag names with '-' replaced by '_'.
struct Settings
{
  std::string strategy = "lga";
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::size_t population = 1000;
  std::size_t archive = 100;
  std::size_t elitism = 100;
  std::size_t generations = 1000;
  double mu = 50.0;
  double sigma = 10.0;
  double recombination_rate = 0.6;
  std::size_t eta = 1;
  std::size_t max_new_features = 0;
  std::size_t bins = 3;
  std::string label_column;
  std::string binning = "equal-width";
  std::vector<double> fractions{0.7, 0.8};
  std::size_t repeats = 20;
  std::size_t k_max = 20;
};

namespace detail
{

template <typename T> auto set_from(const nlohmann::json& j, T& field, const std::string& key) -> void
{
  try
  {
    field = j.get<T>();
  }
  catch (const nlohmann::json::exception&)
  {
    throw config_error("config key '" + key + "' has the wrong type");
  }
}

inline auto apply_config(const nlohmann::json& j, Settings& s) -> void
{
  if (!j.is_object())
    throw config_error("config file must hold a JSON object");
  for (const auto& [key, value] : j.items())
  {
    if (key == "strategy")
      set_from(value, s.strategy, key);
    else if (key == "seed")
      set_from(value, s.seed, key);
    else if (key == "threads")
      set_from(value, s.threads, key);
    else if (key == "population")
      set_from(value, s.population, key);
    else if (key == "archive")
      set_from(value, s.archive, key);
    else if (key == "elitism")
      set_from(value, s.elitism, key);
    else if (key == "generations")
      set_from(value, s.generations, key);
    else if (key == "mu")
      set_from(value, s.mu, key);
    else if (key == "sigma")
      set_from(value, s.sigma, key);
    else if (key == "recombination_rate")
      set_from(value, s.recombination_rate, key);
    else if (key == "eta")
      set_from(value, s.eta, key);
    else if (key == "max_new_features")
      set_from(value, s.max_new_features, key);
    else if (key == "bins")
      set_from(value, s.bins, key);
    else if (key == "label_column")
      set_from(value, s.label_column, key);
    else if (key == "binning")
      set_from(value, s.binning, key);
    else if (key == "fractions")
      set_from(value, s.fractions, key);
    else if (key == "repeats")
      set_from(value, s.repeats, key);
    else if (key == "k_max")
      set_from(value, s.k_max, key);
    else
      throw config_error("unknown config key '" + key + "'");
  }
}

// Flags are parsed into their own storage and copied over the settings only when
// given, so they take precedence over config file values.
class Overrides
{
public:
  template <typename T>
  auto bind(CLI::App& app, const std::string& flag, T Settings::*field, const std::string& help)
    -> CLI::Option*
  {
    auto value = std::make_shared<T>();
    auto* option = app.add_option(flag, *value, help);
    appliers_.push_back([=](Settings& s) {
      if (option->count() > 0)
        s.*field = *value;
    });
    return option;
  }

  auto apply(Settings& s) const -> void
  {
    for (const auto& f : appliers_)
      f(s);
  }

private:
  std::vector<std::function<void(Settings&)>> appliers_;
};

inline auto open_in(const std::string& path) -> std::ifstream
{
  auto in = std::ifstream{path};
  if (!in)
    throw data_error("cannot open '" + path + "'");
  return in;
}

inline auto open_out(const std::string& path) -> std::ofstream
{
  auto out = std::ofstream{path};
  if (!out)
    throw data_error("cannot write '" + path + "'");
  return out;
}

inline auto parse_binning(const std::string& name) -> Binning
{
  if (name == "equal-width")
    return Binning::equal_width;
  if (name == "equal-frequency")
    return Binning::equal_frequency;
  throw config_error("unknown binning '" + name + "' (expected equal-width or equal-frequency)");
}

inline auto load_network(const std::string& path) -> FeatureSampleNetwork
{
  auto in = open_in(path);
  return read_fsn(in);
}

inline auto lga_config(const Settings& s) -> LgaConfig
{
  auto c = LgaConfig{};
  c.population_size = s.population;
  c.generations = s.generations;
  c.init = {s.mu, s.sigma};
  c.variation = {s.recombination_rate, s.eta};
  c.max_new_features = s.max_new_features;
  c.seed = s.seed;
  c.threads = s.threads;
  c.elite_size = s.elitism;
  return c;
}

inline auto spea2_config(const Settings& s) -> Spea2Config
{
  auto c = Spea2Config{};
  c.population_size = s.population;
  c.generations = s.generations;
  c.init = {s.mu, s.sigma};
  c.variation = {s.recombination_rate, s.eta};
  c.max_new_features = s.max_new_features;
  c.seed = s.seed;
  c.threads = s.threads;
  c.archive_size = s.archive;
  return c;
}

inline auto validation_options(const Settings& s) -> ValidationOptions
{
  auto o = ValidationOptions{};
  o.fractions = s.fractions;
  o.repeats = s.repeats;
  o.k_max = s.k_max;
  o.seed = s.seed;
  o.threads = s.threads;
  return o;
}

// Drops and-features without connections, reporting each on `err`.
inline auto connected_only(const FeatureSampleNetwork& g, std::vector<AndFeature> features,
                           std::ostream& err) -> std::vector<AndFeature>
{
  auto out = std::vector<AndFeature>{};
  for (auto& af : features)
  {
    if (connected_samples(g, af).empty())
      err << "warning: and-feature " << to_afs_line(af) << " has no connected sample; ignored\n";
    else
      out.push_back(std::move(af));
  }
  return out;
}

} // namespace detail

struct IngestArgs
{
  std::string csv;
  std::string output;
  char delimiter = ',';
  bool no_header = false;
};

inline auto cmd_ingest(const IngestArgs& args, const Settings& s, std::ostream& out,
                       std::ostream& err) -> int
{
  const auto scheme = detail::parse_binning(s.binning);
  auto in = detail::open_in(args.csv);
  const auto raw =
    ingest_csv(in, {.delimiter = args.delimiter, .has_header = !args.no_header, .label_column = s.label_column});
  const auto data = binarize(raw, s.bins, scheme);
  for (const auto& w : data.warnings)
    err << "warning: " << w << '\n';
  const auto g = build_network(data);

  auto summary_file = std::ofstream{};
  auto* summary = &err;
  if (args.output.empty())
    write_fsn(out, g);
  else
  {
    auto fsn = detail::open_out(args.output);
    write_fsn(fsn, g);
    summary = &out;
  }

  auto histogram = std::map<std::size_t, std::size_t>{};
  for (std::size_t i = 0; i < g.n_samples(); ++i)
    ++histogram[g.sample_degree(i)];
  *summary << "samples: " << g.n_samples() << '\n';
  *summary << "features: " << g.n_features() << '\n';
  *summary << "edges: " << g.n_edges() << '\n';
  *summary << "binning: " << s.binning << ", " << s.bins << " bins\n";
  *summary << "labels: " << (g.has_labels() ? "yes" : "no") << '\n';
  *summary << "degree histogram:";
  for (const auto& [degree, count] : histogram)
    *summary << ' ' << degree << ':' << count;
  *summary << '\n';
  *summary << "possible and-features: " << count_possible_and_features(g.n_features()).str()
           << '\n';
  return exit_ok;
}

struct EnhanceArgs
{
  std::string fsn;
  std::string report;
  std::string output;
  std::string pick = "best-count";
  bool wall_time = false;
};

inline auto cmd_enhance(const EnhanceArgs& args, const Settings& s, std::ostream& out,
                        std::ostream& err) -> int
{
  if (args.pick != "best-count" && args.pick != "lowest-disproportion")
    throw config_error("unknown --pick '" + args.pick +
                       "' (expected best-count or lowest-disproportion)");
  auto report = RunReport{};
  const auto g = detail::load_network(args.fsn);
  if (s.strategy == "lga")
  {
    const auto cfg = detail::lga_config(s);
    cfg.validate();
    report = run_lga(g, cfg);
  }
  else if (s.strategy == "spea2")
  {
    const auto cfg = detail::spea2_config(s);
    cfg.validate();
    report = run_spea2(g, cfg);
  }
  else
    throw config_error("unknown strategy '" + s.strategy + "' (expected lga or spea2)");

  err << "finished " << report.generations.size() << " generations in "
      << *report.wall_time_seconds << " s\n";
  if (!args.wall_time)
    report.wall_time_seconds.reset();

  const auto text = to_json(report).dump(2) + '\n';
  if (args.report.empty())
    out << text;
  else
    detail::open_out(args.report) << text;

  if (!args.output.empty())
  {
    const auto* chosen = args.pick == "best-count" ? &report.best_count()
                                                   : report.lowest_disproportion(1);
    if (!chosen)
      chosen = &report.best_count();
    auto afs = detail::open_out(args.output);
    write_afs(afs, chosen->features);
  }
  return exit_ok;
}

struct EvaluateArgs
{
  std::string fsn;
  std::string afs;
  std::string output;
  std::string report;
};

inline auto cmd_evaluate(const EvaluateArgs& args, const Settings& s, std::ostream& out,
                         std::ostream& err) -> int
{
  const auto options = detail::validation_options(s);
  options.validate();
  const auto g = detail::load_network(args.fsn);
  if (!g.has_labels())
    throw data_error("'" + args.fsn + "' carries no class labels");

  auto features = std::vector<AndFeature>{};
  if (args.afs != "none")
  {
    auto in = detail::open_in(args.afs);
    features = detail::connected_only(g, read_afs(in, g.n_features()), err);
  }
  const auto table = split_validate(enhanced_matrix(g, features), options);

  if (args.output.empty())
    write_csv(out, table);
  else
  {
    auto csv = detail::open_out(args.output);
    write_csv(csv, table);
  }
  if (!args.report.empty())
  {
    auto j = nlohmann::ordered_json{};
    j["config"] = {{"fractions", options.fractions},
                   {"repeats", options.repeats},
                   {"k_max", options.k_max},
                   {"seed", options.seed}};
    j["and_features"] = features.size();
    j["accuracy"] = to_json(table);
    detail::open_out(args.report) << j.dump(2) << '\n';
  }
  return exit_ok;
}

struct OracleArgs
{
  std::string fsn;
  std::string dump;
  std::uint64_t budget = default_oracle_budget;
};

inline auto cmd_oracle(const OracleArgs& args, std::ostream& out) -> int
{
  const auto g = detail::load_network(args.fsn);
  const auto all = enumerate_connected_oracle(g, args.budget);
  out << all.size() << '\n';
  if (!args.dump.empty())
  {
    auto afs = detail::open_out(args.dump);
    write_afs(afs, all);
  }
  return exit_ok;
}

struct DotArgs
{
  std::string fsn;
  std::string afs;
  std::string output;
};

inline auto cmd_dot(const DotArgs& args, std::ostream& out, std::ostream& err) -> int
{
  const auto g = detail::load_network(args.fsn);
  auto features = std::vector<AndFeature>{};
  if (!args.afs.empty())
  {
    auto in = detail::open_in(args.afs);
    features = detail::connected_only(g, read_afs(in, g.n_features()), err);
  }
  if (args.output.empty())
    write_dot(out, g, features);
  else
  {
    auto dot = detail::open_out(args.output);
    write_dot(dot, g, features);
  }
  return exit_ok;
}

// Parses and runs one command. `args` excludes the program name.
inline auto run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) -> int
{
  auto app = CLI::App{"Enhance feature-sample networks with evolved and-features", "fsnet"};
  app.require_subcommand(1);

  auto settings = Settings{};
  auto config_path = std::string{};
  auto overrides = detail::Overrides{};
  const auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON file with settings (flags take precedence)");
  };

  auto ingest = IngestArgs{};
  auto* ingest_cmd = app.add_subcommand("ingest", "Binarize a CSV dataset and write an FSN file");
  ingest_cmd->add_option("csv", ingest.csv, "input CSV")->required();
  ingest_cmd->add_option("-o,--output", ingest.output, "FSN output (default: stdout)");
  ingest_cmd->add_option("--delimiter", ingest.delimiter, "field delimiter");
  ingest_cmd->add_flag("--no-header", ingest.no_header, "first line is data");
  overrides.bind(*ingest_cmd, "--bins", &Settings::bins, "bins per numeric attribute");
  overrides.bind(*ingest_cmd, "--label-column", &Settings::label_column,
                 "class column name or 0-based index");
  overrides.bind(*ingest_cmd, "--binning", &Settings::binning, "equal-width or equal-frequency");
  add_config(ingest_cmd);

  auto enhance = EnhanceArgs{};
  auto* enhance_cmd = app.add_subcommand("enhance", "Evolve and-features for an FSN network");
  enhance_cmd->add_option("fsn", enhance.fsn, "input FSN")->required();
  enhance_cmd->add_option("--report", enhance.report, "report JSON output (default: stdout)");
  enhance_cmd->add_option("-o,--output", enhance.output, "AFS output for the picked solution");
  enhance_cmd->add_option("--pick", enhance.pick, "best-count or lowest-disproportion");
  enhance_cmd->add_flag("--wall-time", enhance.wall_time, "include wall time in the report");
  overrides.bind(*enhance_cmd, "--strategy", &Settings::strategy, "lga or spea2");
  overrides.bind(*enhance_cmd, "--seed", &Settings::seed, "random seed");
  overrides.bind(*enhance_cmd, "--threads", &Settings::threads, "worker threads");
  overrides.bind(*enhance_cmd, "--population", &Settings::population, "population size");
  overrides.bind(*enhance_cmd, "--archive", &Settings::archive, "SPEA2 archive size");
  overrides.bind(*enhance_cmd, "--elitism", &Settings::elitism, "LGA elite size");
  overrides.bind(*enhance_cmd, "--generations", &Settings::generations, "generations");
  overrides.bind(*enhance_cmd, "--mu", &Settings::mu, "mean initial solution size");
  overrides.bind(*enhance_cmd, "--sigma", &Settings::sigma, "sd of initial solution size");
  overrides.bind(*enhance_cmd, "--recombination-rate", &Settings::recombination_rate,
                 "crossover probability");
  overrides.bind(*enhance_cmd, "--eta", &Settings::eta, "mutations per child");
  overrides.bind(*enhance_cmd, "--max-new-features", &Settings::max_new_features,
                 "M_max (0: 100 times the feature count)");
  add_config(enhance_cmd);

  auto evaluate = EvaluateArgs{};
  auto* evaluate_cmd = app.add_subcommand("evaluate", "k-NN split validation of a network");
  evaluate_cmd->add_option("fsn", evaluate.fsn, "input FSN")->required();
  evaluate_cmd->add_option("afs", evaluate.afs, "AFS file, or 'none' for the original network")
    ->required();
  evaluate_cmd->add_option("-o,--output", evaluate.output, "CSV output (default: stdout)");
  evaluate_cmd->add_option("--report", evaluate.report, "JSON output with config and best rows");
  overrides.bind(*evaluate_cmd, "--fractions", &Settings::fractions, "labeled fractions")
    ->delimiter(',');
  overrides.bind(*evaluate_cmd, "--repeats", &Settings::repeats, "splits per fraction");
  overrides.bind(*evaluate_cmd, "--k-max", &Settings::k_max, "largest k");
  overrides.bind(*evaluate_cmd, "--seed", &Settings::seed, "random seed");
  overrides.bind(*evaluate_cmd, "--threads", &Settings::threads, "worker threads");
  add_config(evaluate_cmd);

  auto oracle = OracleArgs{};
  auto* oracle_cmd = app.add_subcommand("oracle", "Count every connectable and-feature exactly");
  oracle_cmd->add_option("fsn", oracle.fsn, "input FSN")->required();
  oracle_cmd->add_option("--dump", oracle.dump, "write the full set as AFS");
  oracle_cmd->add_option("--budget", oracle.budget, "refuse when the sum of 2^degree exceeds this");

  auto dot = DotArgs{};
  auto* dot_cmd = app.add_subcommand("dot", "Write the network as a DOT graph");
  dot_cmd->add_option("fsn", dot.fsn, "input FSN")->required();
  dot_cmd->add_option("afs", dot.afs, "optional AFS file of and-features");
  dot_cmd->add_option("-o,--output", dot.output, "DOT output (default: stdout)");

  try
  {
    auto reversed = std::vector<std::string>(args.rbegin(), args.rend());
    app.parse(reversed);
  }
  catch (const CLI::ParseError& e)
  {
    const auto code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }

  try
  {
    if (!config_path.empty())
    {
      auto in = detail::open_in(config_path);
      auto j = nlohmann::json{};
      try
      {
        j = nlohmann::json::parse(in);
      }
      catch (const nlohmann::json::parse_error& e)
      {
        throw config_error("cannot parse '" + config_path + "': " + e.what());
      }
      detail::apply_config(j, settings);
    }
    overrides.apply(settings);

    if (ingest_cmd->parsed())
      return cmd_ingest(ingest, settings, out, err);
    if (enhance_cmd->parsed())
      return cmd_enhance(enhance, settings, out, err);
    if (evaluate_cmd->parsed())
      return cmd_evaluate(evaluate, settings, out, err);
    if (oracle_cmd->parsed())
      return cmd_oracle(oracle, out);
    return cmd_dot(dot, out, err);
  }
  catch (const config_error& e)
  {
    err << "config error: " << e.what() << '\n';
    return exit_config;
  }
  catch (const budget_error& e)
  {
    err << "refused: " << e.what() << '\n';
    return exit_budget;
  }
  catch (const parse_error& e)
  {
    err << "parse error: " << e.what() << '\n';
    return exit_data;
  }
  catch (const data_error& e)
  {
    err << "data error: " << e.what() << '\n';
    return exit_data;
  }
  catch (const std::exception& e)
  {
    err << "error: " << e.what() << '\n';
    return exit_failure;
  }
}

} // namespace fsnet::cli

#endif // FSNET_CLI_HPP

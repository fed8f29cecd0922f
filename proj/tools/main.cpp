// sevrank command-line tool: rank | sensitivity | generate | curves | version.
//
// Exit codes: 0 success, 1 configuration error, 2 data error, 3 I/O error.
// Errors print a single line `sevrank: <kind> error: <reason>` to stderr.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <sevrank/sevrank.hpp>

namespace {

using namespace sevrank;

struct InputOptions {
  std::string input;
  double alpha = 0.05;
  double severity = 0.8;
  double delta_p = 0.0;
  std::size_t resamples = 10000;
  std::uint64_t seed = 1;
  std::string bh_scope = "global";
  std::optional<double> budget;
  bool no_cap = false;
  unsigned threads = 0;
};

void add_input_flags(CLI::App* sub, InputOptions& opt, bool with_delta_p) {
  sub->add_option("--input", opt.input,
                  "Run CSV with header 'algorithm,problem,run,value'")
      ->required();
  sub->add_option("--alpha", opt.alpha, "Significance level for the decisions")
      ->capture_default_str();
  sub->add_option("--severity", opt.severity,
                  "Severity level s for the supported discrepancy")
      ->capture_default_str();
  if (with_delta_p)
    sub->add_option("--delta-p", opt.delta_p,
                    "Practically relevant performance difference, in the "
                    "units of the run values (no default: metric-dependent)")
        ->required();
  sub->add_option("--resamples", opt.resamples, "Bootstrap resample count n_b")
      ->capture_default_str();
  sub->add_option("--seed", opt.seed, "Master seed for all resampling")
      ->capture_default_str();
  sub->add_option("--bh-scope", opt.bh_scope,
                  "Family for the Benjamini-Hochberg adjustment")
      ->capture_default_str()
      ->check(CLI::IsMember({"global", "per-problem"}));
  sub->add_option("--budget", opt.budget,
                  "Evaluation budget; values above it (and empty values) are "
                  "capped to it");
  sub->add_flag("--no-cap", opt.no_cap,
                "Reject values above the budget instead of capping");
  sub->add_option("--threads", opt.threads,
                  "Worker threads for null construction (0 = all cores); "
                  "never changes results")
      ->capture_default_str()
      ->envname("SEVRANK_THREADS");
}

RankingConfig make_config(const InputOptions& opt) {
  RankingConfig config;
  config.alpha = opt.alpha;
  config.severity_s = opt.severity;
  config.delta_p = opt.delta_p;
  config.n_b = opt.resamples;
  config.seed = opt.seed;
  config.bh_scope =
      opt.bh_scope == "per-problem" ? BhScope::per_problem : BhScope::global;
  config.budget = opt.budget;
  config.cap_to_budget = !opt.no_cap;
  return config;
}

RunMatrix load_checked(const InputOptions& opt, const RankingConfig& config) {
  const auto matrix = load_runs(std::filesystem::path(opt.input), config);
  for (const auto& diagnostic : validate(matrix)) {
    if (diagnostic.level == Diagnostic::Level::error)
      throw data_error(diagnostic.message);
    std::cerr << "sevrank: warning: " << diagnostic.message << "\n";
  }
  return matrix;
}

std::set<ReportFormat> parse_formats(const std::vector<std::string>& names) {
  std::set<ReportFormat> formats;
  for (const auto& name : names) formats.insert(parse_report_format(name));
  return formats;
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

void run_rank(const InputOptions& opt, const std::string& out_dir,
              const std::vector<std::string>& format_names) {
  const RankingConfig config = make_config(opt);
  validate_config(config);
  const auto formats = parse_formats(format_names);
  const auto matrix = load_checked(opt, config);
  const auto outcomes = run_tournament(matrix, config, opt.threads);
  const auto bundle = build_bundle(outcomes, config, matrix_digest(matrix));
  emit(bundle, out_dir, formats);
  std::cout << league_csv(bundle.league);
}

void run_sensitivity(const InputOptions& opt, const std::string& out_dir,
                     const std::vector<double>& s_values,
                     const std::vector<double>& delta_p_values) {
  const RankingConfig config = make_config(opt);
  validate_config(config);
  const auto matrix = load_checked(opt, config);
  const auto core = tournament_core(matrix, config, opt.threads);
  const auto grid = sweep(core, s_values, delta_p_values);

  const std::filesystem::path out(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec)
    throw io_error("cannot create directory '" + out.string() +
                   "': " + ec.message());

  write_sensitivity_csv(grid, out / "sensitivity.csv");
  for (const auto& cell : grid.cells)
    write_league_csv(cell.table,
                     out / ("league_s" + format_double(cell.s) + "_dp" +
                            format_double(cell.delta_p) + ".csv"));

  // The grids land in the metadata sorted and deduplicated, exactly as used.
  std::map<std::string, std::string> extra;
  extra["s_grid"] = join_doubles(grid.s_values);
  extra["delta_p_grid"] = join_doubles(grid.delta_p_values);
  write_metadata(config, matrix_digest(matrix), version_string, extra,
                 out / "metadata");
}

struct GenerateOptions {
  std::vector<std::string> problems{"onemax", "leadingones"};
  std::vector<std::size_t> dimensions{30};
  std::vector<std::size_t> targets;
  std::vector<std::string> algorithms{"rls", "one_plus_one_ea",
                                      "random_search"};
  std::optional<double> mutation_rate;
  std::size_t runs = 100;
  std::uint64_t budget = 50000;
  std::uint64_t seed = 1;
  std::string out;
};

void run_generate(const GenerateOptions& opt) {
  if (opt.dimensions.size() != 1 && opt.dimensions.size() != opt.problems.size())
    throw config_error("--dimension needs one value or one per --problem");
  if (!opt.targets.empty() && opt.targets.size() != 1 &&
      opt.targets.size() != opt.problems.size())
    throw config_error("--target needs one value or one per --problem");

  std::vector<ProblemSpec> problems;
  problems.reserve(opt.problems.size());
  for (std::size_t i = 0; i < opt.problems.size(); ++i) {
    ProblemSpec problem;
    problem.kind = parse_problem_kind(opt.problems[i]);
    problem.dimension =
        opt.dimensions.size() == 1 ? opt.dimensions[0] : opt.dimensions[i];
    problem.target = opt.targets.empty()
                         ? problem.dimension
                         : (opt.targets.size() == 1 ? opt.targets[0]
                                                    : opt.targets[i]);
    problems.push_back(problem);
  }

  std::vector<HeuristicSpec> heuristics;
  heuristics.reserve(opt.algorithms.size());
  for (const auto& name : opt.algorithms) {
    HeuristicSpec heuristic;
    heuristic.kind = parse_heuristic_kind(name);
    if (heuristic.kind == HeuristicKind::one_plus_one_ea && opt.mutation_rate)
      heuristic.mutation_rate = opt.mutation_rate;
    heuristics.push_back(heuristic);
  }

  const auto matrix =
      generate_matrix(problems, heuristics, opt.runs, opt.budget, opt.seed);
  save_canonical_csv(matrix, opt.out);
}

void run_curves(const InputOptions& opt, const std::string& pair,
                const std::string& problem, std::size_t grid_points,
                const std::string& out_path) {
  const auto comma = pair.find(',');
  if (comma == std::string::npos || comma == 0 || comma + 1 == pair.size() ||
      pair.find(',', comma + 1) != std::string::npos)
    throw config_error("--pair must be 'candidate,opponent'");
  const std::string candidate = pair.substr(0, comma);
  const std::string opponent = pair.substr(comma + 1);

  RankingConfig config = make_config(opt);
  // The curve has no points/GD, so the practical threshold is irrelevant
  // here; satisfy validation with a placeholder.
  config.delta_p = 1.0;
  validate_config(config);

  const auto matrix = load_checked(opt, config);
  const auto core = tournament_core(matrix, config, opt.threads);
  const TournamentComparison* found = nullptr;
  for (const auto& c : core.comparisons)
    if (c.candidate == candidate && c.opponent == opponent &&
        c.problem == problem) {
      found = &c;
      break;
    }
  if (!found)
    throw data_error("no comparison of '" + candidate + "' vs '" + opponent +
                     "' on problem '" + problem + "' in the input");

  const auto grid = default_delta_grid(*found->null, found->t_obs, grid_points);
  const auto curve =
      severity_curve(*found->null, found->t_obs, found->decision, grid);
  const double delta_star = supported_delta(*found->null, found->t_obs,
                                            config.severity_s, found->decision);
  write_severity_curve_csv(curve, delta_star, out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sevrank -- ranks stochastic optimization algorithms with "
      "severity-checked bootstrap hypothesis tests, scored like a football "
      "league"};
  app.footer(
      "Exit codes: 0 success, 1 configuration error, 2 data error, 3 I/O "
      "error.");
  app.require_subcommand(1);
  app.set_version_flag("--version",
                       std::string("sevrank ") + version_string);

  InputOptions rank_opt;
  std::string rank_out;
  std::vector<std::string> rank_formats{"csv", "markdown"};
  auto* rank_cmd = app.add_subcommand(
      "rank", "Run the full tournament and write the report bundle");
  add_input_flags(rank_cmd, rank_opt, /*with_delta_p=*/true);
  rank_cmd->add_option("--out", rank_out, "Output directory for the report")
      ->required();
  rank_cmd
      ->add_option("--formats", rank_formats, "Report formats (csv, markdown)")
      ->capture_default_str()
      ->delimiter(',');

  InputOptions sens_opt;
  std::string sens_out;
  std::vector<double> s_values{0.5, 0.65, 0.8, 0.95};
  std::vector<double> delta_p_values{50, 100, 250, 500};
  auto* sens_cmd = app.add_subcommand(
      "sensitivity",
      "Re-score one tournament across severity and delta-p grids");
  add_input_flags(sens_cmd, sens_opt, /*with_delta_p=*/true);
  sens_cmd->add_option("--out", sens_out, "Output directory for the grid")
      ->required();
  sens_cmd
      ->add_option("--severity-list", s_values,
                   "Severity grid (sorted and deduplicated internally)")
      ->capture_default_str()
      ->delimiter(',');
  sens_cmd
      ->add_option("--delta-p-list", delta_p_values,
                   "Delta-p grid (sorted and deduplicated internally)")
      ->capture_default_str()
      ->delimiter(',');

  GenerateOptions gen_opt;
  auto* gen_cmd = app.add_subcommand(
      "generate", "Generate capped first-hitting-time run data");
  gen_cmd->add_option("--problem", gen_opt.problems,
                      "Problem kinds (onemax, leadingones); repeatable")
      ->capture_default_str();
  gen_cmd->add_option("--dimension", gen_opt.dimensions,
                      "Bit-string length, one value or one per --problem")
      ->capture_default_str();
  gen_cmd->add_option("--target", gen_opt.targets,
                      "Fitness target, one value or one per --problem "
                      "(default: the dimension)");
  gen_cmd->add_option("--algorithms", gen_opt.algorithms,
                      "Heuristics to run (rls, one_plus_one_ea, random_search)")
      ->capture_default_str()
      ->delimiter(',');
  gen_cmd->add_option("--mutation-rate", gen_opt.mutation_rate,
                      "Per-bit flip probability for one_plus_one_ea "
                      "(default 1/dimension)");
  gen_cmd->add_option("--runs", gen_opt.runs, "Trials per (problem, algorithm)")
      ->capture_default_str();
  gen_cmd->add_option("--budget", gen_opt.budget, "Evaluation budget per trial")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen_opt.seed, "Master seed")
      ->capture_default_str();
  gen_cmd->add_option("--out", gen_opt.out, "Output CSV path")->required();

  InputOptions curve_opt;
  std::string curve_pair, curve_problem, curve_out;
  std::size_t grid_points = 101;
  auto* curve_cmd = app.add_subcommand(
      "curves", "Export the severity curve of one comparison");
  add_input_flags(curve_cmd, curve_opt, /*with_delta_p=*/false);
  curve_cmd->add_option("--pair", curve_pair, "Comparison as 'candidate,opponent'")
      ->required();
  curve_cmd->add_option("--problem", curve_problem, "Problem id")->required();
  curve_cmd->add_option("--grid-points", grid_points, "Grid size for the curve")
      ->capture_default_str();
  curve_cmd->add_option("--out", curve_out, "Output CSV path")->required();

  auto* version_cmd =
      app.add_subcommand("version", "Print the tool version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "sevrank: config error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (rank_cmd->parsed()) {
      run_rank(rank_opt, rank_out, rank_formats);
    } else if (sens_cmd->parsed()) {
      run_sensitivity(sens_opt, sens_out, s_values, delta_p_values);
    } else if (gen_cmd->parsed()) {
      run_generate(gen_opt);
    } else if (curve_cmd->parsed()) {
      run_curves(curve_opt, curve_pair, curve_problem, grid_points, curve_out);
    } else if (version_cmd->parsed()) {
      std::cout << "sevrank " << version_string << "\n";
    }
    return 0;
  } catch (const config_error& e) {
    std::cerr << "sevrank: config error: " << e.what() << "\n";
    return 1;
  } catch (const data_error& e) {
    std::cerr << "sevrank: data error: " << e.what() << "\n";
    return 2;
  } catch (const io_error& e) {
    std::cerr << "sevrank: io error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "sevrank: error: " << e.what() << "\n";
    return 1;
  }
}

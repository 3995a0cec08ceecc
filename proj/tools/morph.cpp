#include <chrono>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "morph/pipeline.hpp"

namespace {

struct CliConfig {
  std::string model_path;
  std::string priorities = "file";
  double p = 0.5;
  double q = 1.0;
  int propagate_layers = 1;
  bool flatten_quality = false;
  std::string mcp = "greedy";
  std::string strategy = "extend";
  std::string compress_limit = "budget";
  std::vector<double> budgets;
  std::string format = "text";
  std::string out_path;
};

void add_common_options(CLI::App* cmd, CliConfig& config) {
  cmd->add_option("model", config.model_path, "model file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--priorities", config.priorities,
                  "use the file's priorities or recompute them by ranking")
      ->check(CLI::IsMember({"file", "rank"}));
  cmd->add_option("--p", config.p, "concordance threshold (0,1]");
  cmd->add_option("--q", config.q, "discordance threshold [0,1]");
  cmd->add_option("--propagate-layers", config.propagate_layers,
                  "composite layers carried upward during synthesis")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--flatten-quality", config.flatten_quality,
                "score composites over leaf constituents instead of units");
  cmd->add_option("--mcp", config.mcp, "knapsack solver")
      ->check(CLI::IsMember({"greedy", "exact"}));
  cmd->add_option("--strategy", config.strategy, "aggregation strategy")
      ->check(CLI::IsMember({"extend", "compress", "median"}));
  cmd->add_option("--compress-constraint", config.compress_limit,
                  "limit compression by deleted cost or deleted count")
      ->check(CLI::IsMember({"budget", "count"}));
  cmd->add_option("--budget", config.budgets,
                  "budget(s); overrides the model file's budgets");
  cmd->add_option("--format", config.format, "report format")
      ->check(CLI::IsMember({"text", "machine"}));
  cmd->add_option("--out", config.out_path, "write the report to a file");
}

morph::RunOptions to_options(const CliConfig& config) {
  morph::RunOptions options;
  options.ranked_priorities = config.priorities == "rank";
  options.thresholds.concordance_min = config.p;
  options.thresholds.discordance_max = config.q;
  options.propagate_layers = config.propagate_layers;
  options.flatten_quality = config.flatten_quality;
  options.mcp = config.mcp == "exact" ? morph::McpMethod::exact
                                      : morph::McpMethod::greedy;
  options.strategy = config.strategy;
  options.compress_limit = config.compress_limit == "count"
                               ? morph::CompressLimit::deleted_count
                               : morph::CompressLimit::deleted_cost;
  options.budgets = config.budgets;
  return options;
}

void emit(const morph::RunReport& report, const CliConfig& config) {
  const morph::ReportFormat format = config.format == "machine"
                                         ? morph::ReportFormat::machine
                                         : morph::ReportFormat::text;
  const std::string rendered = morph::render_report(report, format);
  if (config.out_path.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream out(config.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << config.out_path << "'\n";
      std::exit(1);
    }
    out << rendered;
  }
}

int exit_code_for(const morph::Error& e) {
  return e.code() == morph::Errc::infeasible ||
                 e.code() == morph::Errc::empty_front
             ? 2
             : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"morph: multicriteria configuration of modular systems"};
  app.require_subcommand(1);

  CliConfig config;
  CLI::App* validate = app.add_subcommand("validate", "check a model file");
  CLI::App* rank = app.add_subcommand("rank", "rank alternatives per group");
  CLI::App* synth =
      app.add_subcommand("synth", "compose Pareto-efficient solutions");
  CLI::App* aggregate =
      app.add_subcommand("aggregate", "aggregate composed solutions");
  CLI::App* pipeline =
      app.add_subcommand("pipeline", "rank, synthesize and aggregate");
  for (CLI::App* cmd : {validate, rank, synth, aggregate, pipeline})
    add_common_options(cmd, config);

  CLI11_PARSE(app, argc, argv);

  const auto started = std::chrono::steady_clock::now();
  try {
    morph::RunOptions options = to_options(config);
    morph::RunReport report;
    bool ok = true;

    if (validate->parsed()) {
      // Keep reporting validation findings instead of failing the parse.
      try {
        const morph::Problem problem = morph::parse_model(config.model_path);
        report = morph::cmd_validate(problem, options);
      } catch (const morph::ValidationFailure& failure) {
        report.command = "validate";
        report.priorities_mode = config.priorities;
        report.concordance_min = config.p;
        report.discordance_max = config.q;
        report.propagate_layers = config.propagate_layers;
        report.mcp_method = config.mcp;
        report.strategy = config.strategy;
        report.validation = failure.report();
        ok = false;
      }
    } else {
      const morph::Problem problem = morph::parse_model(config.model_path);
      if (rank->parsed())
        report = morph::cmd_rank(problem, options);
      else if (synth->parsed())
        report = morph::cmd_synth(problem, options);
      else if (aggregate->parsed())
        report = morph::cmd_aggregate(problem, options);
      else
        report = morph::cmd_pipeline(problem, options);
    }

    report.model_path = config.model_path;
    report.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - started)
                            .count();
    ok = ok && report.validation.ok();
    emit(report, config);
    std::cerr << "done in " << report.elapsed_ms << " ms\n";

    for (const morph::AggregationOutcome& outcome : report.outcomes)
      if (!outcome.feasible) return 2;
    return ok ? 0 : 1;
  } catch (const morph::Error& e) {
    std::cerr << "error [" << morph::errc_name(e.code()) << "]: " << e.what()
              << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

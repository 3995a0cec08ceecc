#pragma once

#include "morph/model_io.hpp"
#include "morph/ranking.hpp"
#include "morph/report.hpp"

namespace morph {

struct RunOptions {
  bool ranked_priorities = false;  // recompute priorities before synthesis
  Thresholds thresholds{};
  int propagate_layers = 1;
  bool flatten_quality = false;
  McpMethod mcp = McpMethod::greedy;
  std::string strategy = "extend";  // extend | compress | median
  CompressLimit compress_limit = CompressLimit::deleted_cost;
  std::vector<double> budgets;  // overrides the file's budgets when nonempty
};

RunReport cmd_validate(const Problem& problem, const RunOptions& options);
RunReport cmd_rank(const Problem& problem, const RunOptions& options);
RunReport cmd_synth(const Problem& problem, const RunOptions& options);
RunReport cmd_aggregate(const Problem& problem, const RunOptions& options);
RunReport cmd_pipeline(const Problem& problem, const RunOptions& options);

}  // namespace morph

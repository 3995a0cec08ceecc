#pragma once

#include <optional>
#include <string>

#include "morph/aggregation.hpp"
#include "morph/model.hpp"
#include "morph/ranking.hpp"

namespace morph {

struct CriteriaData {
  std::vector<CriterionSpec> specs;
  std::map<std::pair<DaId, CriterionId>, double> values;

  friend bool operator==(const CriteriaData&, const CriteriaData&) = default;
};

struct AggregationData {
  AggregationTable estimates;
  std::vector<double> budgets;

  friend bool operator==(const AggregationData&,
                         const AggregationData&) = default;
};

/// One model file: the tree with its alternatives plus the optional
/// criteria, compatibility and aggregation sections.
struct Problem {
  SystemModel model;
  std::optional<CriteriaData> criteria;
  std::optional<AggregationData> aggregation;

  friend bool operator==(const Problem&, const Problem&) = default;
};

/// Thrown when a file parses but the resulting model breaks an invariant;
/// carries the full validation report.
class ValidationFailure : public Error {
 public:
  ValidationFailure(ValidationReport report, const std::string& message)
      : Error(Errc::validation_error, message), report_(std::move(report)) {}
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// Parses and fully validates a model file. Syntax problems raise
/// Errc::parse_error with line/column; invariant violations raise
/// ValidationFailure.
Problem parse_model(const std::string& path);
Problem parse_model_text(const std::string& text,
                         const std::string& source_name = "<input>");

/// Canonical textual form: parse(serialize(p)) == p and serialization is
/// byte-deterministic.
std::string serialize_problem(const Problem& problem);

/// Per-group estimate table assembled from the criteria section.
EstimateTable estimate_table(const Problem& problem, const NodeId& group);

}  // namespace morph

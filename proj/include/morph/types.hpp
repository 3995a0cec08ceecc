#pragma once

#include <stdexcept>
#include <string>

namespace morph {

using NodeId = std::string;
using DaId = std::string;
using CriterionId = std::string;

enum class Errc {
  unrelated_pair,
  no_active_criteria,
  shape_mismatch,
  infeasible,
  cap_exceeded,
  empty_front,
  parse_error,
  validation_error,
  cost_precision,
  missing_estimate,
  missing_budget,
};

const char* errc_name(Errc c);

/// Library error. `code()` is stable and machine-checkable; the message is for
/// humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Orders "S2" before "S10": digit runs compare numerically, everything else
/// byte-wise.
bool natural_less(const std::string& a, const std::string& b);

}  // namespace morph

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mskit/dualspace.hpp"

namespace mskit {

struct CheckConfig {
  std::string theorem_id;
  std::uint64_t seed = 1;
  /// 0 picks the check's default trial count.
  int trials = 0;
  int degree_lo = 1;
  int degree_hi = 6;
  /// Overrides for the named tolerances (quadrature, identity, positive,
  /// negative, rank, norm).
  std::map<std::string, double> tolerances;
  std::optional<LaurentWindow> window;
};

enum class TrialStatus { pass, fail, indeterminate };

struct TrialRecord {
  int index = 0;
  TrialStatus status = TrialStatus::fail;
  /// Primary measured quantity and the tolerance it was held against.
  double residual = 0.0;
  double tolerance = 0.0;
  /// True when the trial was re-run at doubled grid or window.
  bool retried = false;
  std::string detail;
};

/// Aggregate passes only with zero fails and zero indeterminates. Content is
/// a pure function of (theorem_id, config) except elapsed_seconds.
struct VerificationReport {
  std::string theorem_id;
  std::uint64_t seed = 0;
  int trials = 0;
  int degree_lo = 1;
  int degree_hi = 6;
  int passed = 0;
  int failed = 0;
  int indeterminate = 0;
  bool pass = false;
  double max_residual = 0.0;
  double elapsed_seconds = 0.0;
  std::vector<TrialRecord> records;
};

/// Registered check ids in suite order.
const std::vector<std::string>& check_ids();

/// Central tolerance table: quadrature 1e-10, identity 1e-9, positive 1e-8,
/// negative 1e-3, rank 1e-10, norm 1e-6.
const std::map<std::string, double>& default_tolerances();

/// Runs one named check. Throws UnknownTheorem for an unregistered id and
/// Error for an invalid config (trials < 0, degree range outside [1, 12]).
VerificationReport run_check(const CheckConfig& config);

/// Runs every registered check at its default configuration.
std::vector<VerificationReport> run_all(std::uint64_t seed = 1);

/// Versioned JSON serialization, schema "mskit-report/1".
std::string report_to_json(const VerificationReport& report, int indent = -1);
std::string reports_to_json(const std::vector<VerificationReport>& reports, int indent = -1);

const char* status_name(TrialStatus s);

}  // namespace mskit

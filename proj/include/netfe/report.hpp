#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "netfe/inference.hpp"

namespace netfe {

/// Summary row in the Tables 1-2 layout: mean, stdev, deciles 1..9.
/// Deciles use linear interpolation between order statistics.
struct DecileRow {
  double mean = 0.0;
  double stdev = 0.0;
  std::array<double, 9> deciles{};
};

DecileRow decile_row(const Eigen::VectorXd& values);

/// Quantile by linear interpolation (Hyndman-Fan type 7), q in [0,1].
double quantile(const Eigen::VectorXd& values, double q);

/// Run provenance embedded in every emitted report. wall_clock_ms is excluded
/// from determinism comparisons (and from the hashed body).
struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string version;
  double wall_clock_ms = 0.0;
  int n = 0;  // after largest-component reduction
  int m = 0;
};

nlohmann::json to_json(const RunManifest& manifest);

/// FNV-1a 64 over a byte string, hex encoded.
std::string content_hash(const std::string& bytes);

/// Full diag report: global block, per-vertex rows with the homoskedastic
/// variance bounds, exact variance and se at the given sigma2, and the decile
/// tables. diag_method labels how the (S^dagger)_ii column was computed.
nlohmann::json report_json(const ConnectivityReport& rep, const Diagnostics& diag,
                           const VertexBounds& bounds, const RunManifest& manifest,
                           const std::string& diag_method = "exact");

/// Aligned plain-text decile table with one row per named statistic.
std::string format_decile_table(
    const std::vector<std::pair<std::string, DecileRow>>& rows);

}  // namespace netfe

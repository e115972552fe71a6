#include "netfe/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "netfe/error.hpp"

namespace netfe {

double quantile(const Eigen::VectorXd& values, double q) {
  const int n = static_cast<int>(values.size());
  if (n == 0) throw InputError("quantile of empty vector");
  std::vector<double> v(values.data(), values.data() + n);
  std::sort(v.begin(), v.end());
  const double pos = q * (n - 1);
  const int lo = static_cast<int>(std::floor(pos));
  const int hi = std::min(lo + 1, n - 1);
  const double frac = pos - lo;
  return v[lo] + frac * (v[hi] - v[lo]);
}

DecileRow decile_row(const Eigen::VectorXd& values) {
  DecileRow row;
  row.mean = values.mean();
  const int n = static_cast<int>(values.size());
  row.stdev = n > 1 ? std::sqrt((values.array() - row.mean).square().sum() / (n - 1))
                    : 0.0;
  for (int k = 1; k <= 9; ++k) row.deciles[k - 1] = quantile(values, k / 10.0);
  return row;
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

nlohmann::json to_json(const RunManifest& manifest) {
  return nlohmann::json{{"command", manifest.command},
                        {"inputs", manifest.inputs},
                        {"config_hash", manifest.config_hash},
                        {"seed", manifest.seed},
                        {"version", manifest.version},
                        {"wall_clock_ms", manifest.wall_clock_ms},
                        {"n", manifest.n},
                        {"m", manifest.m}};
}

namespace {

nlohmann::json decile_json(const DecileRow& row) {
  return nlohmann::json{
      {"mean", row.mean}, {"stdev", row.stdev}, {"deciles", row.deciles}};
}

}  // namespace

nlohmann::json report_json(const ConnectivityReport& rep, const Diagnostics& diag,
                           const VertexBounds& bounds, const RunManifest& manifest,
                           const std::string& diag_method) {
  nlohmann::json global{{"lambda2", rep.lambda2},
                        {"h", rep.h},
                        {"H", rep.H},
                        {"trace_Lstar_over_nm1", diag.trace_lstar_over_nm1},
                        {"m", rep.m},
                        {"n", rep.n}};
  if (rep.rho) global["rho"] = *rep.rho;

  nlohmann::json vertices = nlohmann::json::array();
  for (int v = 0; v < rep.n; ++v) {
    const double var_exact = diag.sigma2 * rep.diag_Sdag[v] / rep.d[v];
    vertices.push_back(nlohmann::json{{"id", v + 1},
                                      {"d", rep.d[v]},
                                      {"h_i", rep.h_i[v]},
                                      {"H_i", rep.H_i[v]},
                                      {"h_i2", rep.h_i2[v]},
                                      {"Sdag_ii", rep.diag_Sdag[v]},
                                      {"var_exact", var_exact},
                                      {"lower", bounds.lower[v]},
                                      {"upper", bounds.upper[v]},
                                      {"se", std::sqrt(std::max(var_exact, 0.0))},
                                      {"ci_width_exact", diag.ci_width_exact[v]},
                                      {"ci_width_approx", diag.ci_width_approx[v]}});
  }

  nlohmann::json deciles{{"d", decile_json(decile_row(rep.d))},
                         {"h_i", decile_json(decile_row(rep.h_i))},
                         {"H_i", decile_json(decile_row(rep.H_i))},
                         {"h_i2", decile_json(decile_row(rep.h_i2))},
                         {"Sdag_ii", decile_json(decile_row(rep.diag_Sdag))}};

  return nlohmann::json{{"manifest", to_json(manifest)},
                        {"global", global},
                        {"vertices", vertices},
                        {"deciles", deciles},
                        {"h_inv", diag.h_inv},
                        {"sigma2", diag.sigma2},
                        {"diag_method", diag_method}};
}

std::string format_decile_table(
    const std::vector<std::pair<std::string, DecileRow>>& rows) {
  std::ostringstream out;
  out << std::setw(10) << "" << std::setw(10) << "mean" << std::setw(10) << "stdev";
  for (int k = 1; k <= 9; ++k) {
    out << std::setw(10) << (std::to_string(k * 10) + "%");
  }
  out << '\n';
  out << std::fixed << std::setprecision(2);
  for (const auto& [name, row] : rows) {
    out << std::setw(10) << name << std::setw(10) << row.mean << std::setw(10)
        << row.stdev;
    for (double d : row.deciles) out << std::setw(10) << d;
    out << '\n';
  }
  return out.str();
}

}  // namespace netfe

#include "netfe/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "netfe/error.hpp"
#include "netfe/inference.hpp"
#include "netfe/moments.hpp"
#include "netfe/parallel.hpp"
#include "netfe/rng.hpp"
#include "netfe/stats.hpp"

namespace netfe {

SimConfig parse_sim_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError("config line " + std::to_string(line_no) +
                       " is not 'key = value'");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  static const std::map<std::string, int> known = {
      {"graph", 0}, {"n", 0},      {"N", 0},    {"p_edge", 0}, {"reps", 0},
      {"sigma2", 0}, {"errors", 0}, {"seed", 0}, {"p", 0},      {"beta", 0}};
  std::string unknown;
  for (const auto& [k, v] : kv) {
    if (!known.count(k)) unknown += (unknown.empty() ? "" : ", ") + k;
  }
  if (!unknown.empty()) throw InputError("unknown config keys: " + unknown);

  SimConfig cfg;
  auto get = [&](const char* key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (const auto* v = get("graph")) cfg.family = *v;
  if (cfg.family.empty()) throw InputError("config needs a 'graph' family");
  if (const auto* v = get("n")) cfg.n = std::stoi(*v);
  if (const auto* v = get("N")) cfg.N = std::stoi(*v);
  if (const auto* v = get("p_edge")) cfg.p_edge = std::stod(*v);
  if (const auto* v = get("reps")) cfg.reps = std::stoll(*v);
  if (const auto* v = get("sigma2")) cfg.sigma2 = std::stod(*v);
  if (const auto* v = get("seed")) cfg.seed = std::stoull(*v);
  if (const auto* v = get("p")) cfg.p = std::stoi(*v);
  if (const auto* v = get("errors")) {
    if (*v == "homoskedastic") {
      cfg.errors = ErrorModel::homoskedastic;
    } else if (*v == "heteroskedastic") {
      cfg.errors = ErrorModel::heteroskedastic;
    } else {
      throw InputError("errors must be homoskedastic or heteroskedastic");
    }
  }
  if (const auto* v = get("beta")) {
    std::vector<double> vals;
    std::istringstream bs(*v);
    std::string tok;
    while (std::getline(bs, tok, ',')) vals.push_back(std::stod(tok));
    cfg.beta = Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size());
  }
  if (cfg.reps < 1) throw InputError("reps must be positive");
  if (cfg.sigma2 < 0) throw InputError("sigma2 must be nonnegative");
  return cfg;
}

Graph build_config_graph(const SimConfig& cfg) {
  if (cfg.family == "hypercube") return hypercube(cfg.N);
  if (cfg.family == "extended_hypercube") return extended_hypercube(cfg.N);
  if (cfg.family == "star") return star(cfg.n);
  if (cfg.family == "wheel") return wheel(cfg.n);
  if (cfg.family == "complete") return complete(cfg.n);
  if (cfg.family == "erdos_renyi") {
    Graph g = erdos_renyi(cfg.n, cfg.p_edge, cfg.seed);
    return largest_component(g).graph;
  }
  throw InputError("unknown graph family '" + cfg.family + "'");
}

nlohmann::json simulate_summary(const SimConfig& cfg) {
  Graph g = build_config_graph(cfg);
  GraphMatrices gm = matrices(g);
  const int n = gm.n();
  const int m = gm.m();
  const long long reps = cfg.reps;

  DGPConfig dgp;
  dgp.graph = g;
  dgp.sigma2 = std::max(cfg.sigma2, 0.0);
  dgp.errors = cfg.errors;
  dgp.seed = cfg.seed;
  if (cfg.p > 0) {
    CounterRng rng(cfg.seed, 0xc0f);
    dgp.X.resize(m, cfg.p);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < cfg.p; ++c) dgp.X(r, c) = rng.normal();
    }
    dgp.beta = cfg.beta.size() == cfg.p
                   ? cfg.beta
                   : Eigen::VectorXd::Ones(cfg.p);
  }
  const bool noiseless = cfg.sigma2 == 0.0;

  // realize_dgp rejects sigma2 <= 0; run the noiseless case at sigma2 = 1 and
  // zero the errors through edge_sd.
  DGPConfig dgp_run = dgp;
  if (noiseless) dgp_run.sigma2 = 1.0;
  MonteCarloStream stream(dgp_run, gm);
  RealizedDGP realized = stream.dgp();
  if (noiseless) realized.edge_sd.setZero();

  LaplacianPseudoinverse lstar(gm);
  NeighborIndex nbr(g);
  HarmonicMeans hm = harmonic_means(nbr, gm.d);
  const double lam2 = lambda2(gm);

  // first-order variances b_i' Sigma b_i / d_i^2 under the realized error model
  Eigen::VectorXd edge_var = realized.edge_sd.array().square();
  Eigen::VectorXd denom_var = quadratic_diag_form(gm, edge_var)
                                  .cwiseQuotient(gm.d.cwiseProduct(gm.d));
  const int p = static_cast<int>(dgp.X.cols());

  const int tracked = std::min(5, n);
  std::vector<int> tracked_ids(tracked);
  for (int k = 0; k < tracked; ++k) {
    tracked_ids[k] = 1 + static_cast<int>((static_cast<long long>(k) * n) / tracked);
  }

  // per-rep slots keep the reduction order fixed under any thread count
  const bool keep_cov = n <= 64;
  Eigen::MatrixXd alpha_draws;  // n x reps when covariance is checked
  if (keep_cov) alpha_draws.resize(n, reps);
  Eigen::MatrixXd tracked_draws(tracked, reps);
  Eigen::VectorXd sample_vars(reps);

  std::vector<Eigen::VectorXd> partial(static_cast<std::size_t>(reps));
  parallel_for(static_cast<std::size_t>(reps), [&](std::size_t r) {
    CounterRng rng(cfg.seed, 0x100000ULL + r);
    Eigen::VectorXd u(m);
    for (int e = 0; e < m; ++e) u[e] = realized.edge_sd[e] * rng.normal();
    Eigen::VectorXd y = realized.mean + u;
    Eigen::VectorXd alpha_hat;
    if (p == 0) {
      alpha_hat = lstar.apply(gm.B.transpose() * y);
    } else {
      FixedEffectFit fit = fit_full(gm, y, dgp.X, lstar);
      alpha_hat = fit.alpha;
    }
    partial[r] = alpha_hat;
    if (keep_cov) alpha_draws.col(static_cast<int>(r)) = alpha_hat;
    for (int k = 0; k < tracked; ++k) {
      tracked_draws(k, static_cast<int>(r)) = alpha_hat[tracked_ids[k] - 1];
    }
    sample_vars[static_cast<int>(r)] = sample_variance(alpha_hat);
  });

  Eigen::VectorXd alpha_mean = Eigen::VectorXd::Zero(n);
  for (const auto& a : partial) alpha_mean += a;
  alpha_mean /= static_cast<double>(reps);

  nlohmann::json out;
  out["config"] = {{"graph", cfg.family},
                   {"n", n},
                   {"m", m},
                   {"reps", reps},
                   {"sigma2", cfg.sigma2},
                   {"errors", cfg.errors == ErrorModel::homoskedastic
                                  ? "homoskedastic"
                                  : "heteroskedastic"},
                   {"seed", cfg.seed},
                   {"p", p},
                   {"rng", std::string(CounterRng::name())}};

  const double max_bias = (alpha_mean - realized.alpha).cwiseAbs().maxCoeff();
  out["recovery"] = {{"max_abs_mean_bias", max_bias},
                     {"exact_recovery", noiseless && max_bias < 1e-10}};

  if (keep_cov && !noiseless && cfg.errors == ErrorModel::homoskedastic) {
    Eigen::MatrixXd centered = alpha_draws.colwise() - alpha_mean;
    Eigen::MatrixXd emp_cov =
        centered * centered.transpose() / static_cast<double>(reps - 1);
    Eigen::MatrixXd theory = cfg.sigma2 * lstar.dense();
    const double rel = (emp_cov - theory).norm() / theory.norm();
    out["covariance"] = {{"rel_frobenius_error", rel}};
  }

  if (!noiseless && cfg.errors == ErrorModel::homoskedastic) {
    VertexBounds vb =
        variance_bounds(gm.d, hm.h_i, lam2, gm.degree_sum(), cfg.sigma2);
    Eigen::VectorXd exact = cfg.sigma2 * lstar.diag();
    int ok_exact = 0, ok_emp = 0;
    Eigen::VectorXd emp_var(n);
    if (keep_cov) {
      Eigen::MatrixXd centered = alpha_draws.colwise() - alpha_mean;
      emp_var = centered.array().square().rowwise().sum() /
                static_cast<double>(reps - 1);
    }
    for (int v = 0; v < n; ++v) {
      if (exact[v] >= vb.lower[v] - 1e-12 && exact[v] <= vb.upper[v] + 1e-12) {
        ++ok_exact;
      }
      if (keep_cov && emp_var[v] >= vb.lower[v] - 3e-2 * cfg.sigma2 &&
          emp_var[v] <= vb.upper[v] + 3e-2 * cfg.sigma2) {
        ++ok_emp;
      }
    }
    out["containment"] = {{"exact_rate", static_cast<double>(ok_exact) / n}};
    if (keep_cov) {
      out["containment"]["empirical_rate"] = static_cast<double>(ok_emp) / n;
    }
  }

  if (!noiseless) {
    nlohmann::json ks = nlohmann::json::array();
    for (int k = 0; k < tracked; ++k) {
      const int v = tracked_ids[k];
      const double sd = std::sqrt(denom_var[v - 1]);
      Eigen::VectorXd z =
          (tracked_draws.row(k).transpose().array() - realized.alpha[v - 1]) / sd;
      ks.push_back({{"vertex", v}, {"ks_pvalue", ks_pvalue_normal(z)}});
    }
    out["normality"] = ks;

    const double true_var = sample_variance(realized.alpha);
    const double mc_mean = sample_vars.mean();
    const double mc_se =
        std::sqrt((sample_vars.array() - mc_mean).square().sum() /
                  (reps * std::max<long long>(reps - 1, 1)));
    out["variance_bias"] = {{"mc_mean_sample_variance", mc_mean},
                            {"true_sample_variance", true_var},
                            {"mc_bias", mc_mean - true_var},
                            {"mc_se", mc_se}};
    if (cfg.errors == ErrorModel::homoskedastic) {
      VarianceNoiseBias bias = variance_noise_bias(lstar, cfg.sigma2);
      out["variance_bias"]["predicted_bias_centered"] = bias.centered;
      out["variance_bias"]["predicted_bias_literal"] = bias.literal;
    }
  }
  return out;
}

}  // namespace netfe

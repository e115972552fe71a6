// netfe command line: diag / fit / project / simulate.
// Exit codes: 0 success, 2 input error, 3 numerical failure.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <set>
#include <sstream>

#include "netfe/csv.hpp"
#include "netfe/error.hpp"
#include "netfe/estimator.hpp"
#include "netfe/inference.hpp"
#include "netfe/report.hpp"
#include "netfe/simulate.hpp"
#include "netfe/two_way.hpp"

namespace {

using netfe::RunManifest;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw netfe::InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& body) {
  if (path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw netfe::InputError("cannot write '" + path + "'");
  out << body;
}

RunManifest make_manifest(const std::string& command,
                          const std::vector<std::string>& inputs,
                          std::uint64_t seed) {
  RunManifest m;
  m.command = command;
  m.inputs = inputs;
  m.seed = seed;
  m.version = NETFE_VERSION;
  std::string blob;
  for (const auto& p : inputs) blob += read_file(p);
  m.config_hash = netfe::content_hash(blob);
  return m;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

netfe::Graph load_reduced(const std::string& path, bool no_reduce, RunManifest& man) {
  netfe::Graph g = netfe::read_edge_csv(path);
  auto comps = netfe::connected_components(g);
  if (comps.size() > 1) {
    if (no_reduce) {
      throw netfe::InputError("graph disconnected (" +
                              std::to_string(comps.size()) +
                              " components) and --no-reduce given");
    }
    netfe::LargestComponent lc = netfe::largest_component(g);
    std::cerr << "warning: graph disconnected; reduced to largest component "
              << "(dropped " << lc.dropped_vertices << " vertices, "
              << lc.dropped_edges << " edges)\n";
    g = lc.graph;
  }
  man.n = g.vertex_count();
  man.m = g.edge_count();
  return g;
}

int cmd_diag(const std::string& input, double sigma2, bool no_reduce, int probes,
             std::uint64_t seed, const std::string& json_out,
             const std::string& csv_out) {
  Timer timer;
  RunManifest man = make_manifest("diag", {input}, seed);
  netfe::Graph g = load_reduced(input, no_reduce, man);

  std::string diag_method = "exact";
  netfe::ConnectivityReport rep = [&] {
    if (probes > 0) {
      netfe::StochasticDiag est =
          netfe::diag_Sdag_stochastic(netfe::matrices(g), probes, seed);
      diag_method = "stochastic(" + std::to_string(probes) + " probes)";
      std::cerr << "note: (S^dagger)_ii estimated stochastically; max per-entry "
                << "standard error " << est.stderr_.maxCoeff() << "\n";
      return netfe::connectivity_report_with_diag(g, est.value);
    }
    return netfe::connectivity_report(g);
  }();
  netfe::Diagnostics diag = netfe::diagnostics_from_report(rep, sigma2);
  netfe::VertexBounds bounds = netfe::variance_bounds(
      rep.d, rep.h_i, rep.lambda2, rep.d.sum(), sigma2);

  std::vector<std::pair<std::string, netfe::DecileRow>> table = {
      {"d_i", netfe::decile_row(rep.d)},
      {"h_i", netfe::decile_row(rep.h_i)},
      {"H_i", netfe::decile_row(rep.H_i)},
      {"Sdag_ii", netfe::decile_row(rep.diag_Sdag)},
  };
  std::cout << "n = " << rep.n << ", m = " << rep.m << ", lambda2 = " << rep.lambda2
            << ", h = " << rep.h << ", H = " << rep.H << "\n"
            << "tr(L*)/(n-1) = " << diag.trace_lstar_over_nm1
            << ", 1/h = " << diag.h_inv << "\n\n"
            << netfe::format_decile_table(table);

  man.wall_clock_ms = timer.ms();
  if (!json_out.empty()) {
    write_output(json_out,
                 netfe::report_json(rep, diag, bounds, man, diag_method).dump(2) +
                     "\n");
  }
  if (!csv_out.empty()) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "id,d,h_i,H_i,h_i2,Sdag_ii,var_exact,lower,upper,se\n";
    for (int v = 0; v < rep.n; ++v) {
      const double var_exact = sigma2 * rep.diag_Sdag[v] / rep.d[v];
      csv << g.original_id(v + 1) << ',' << rep.d[v] << ',' << rep.h_i[v] << ','
          << rep.H_i[v] << ',' << rep.h_i2[v] << ',' << rep.diag_Sdag[v] << ','
          << var_exact << ',' << bounds.lower[v] << ',' << bounds.upper[v] << ','
          << std::sqrt(std::max(var_exact, 0.0)) << '\n';
    }
    write_output(csv_out, csv.str());
  }
  return 0;
}

netfe::SeMode parse_se_mode(const std::string& se_mode) {
  if (se_mode == "plugin") return netfe::SeMode::plugin_inid;
  if (se_mode == "plugin-unscaled") return netfe::SeMode::plugin_unscaled;
  return netfe::SeMode::homoskedastic;
}

int cmd_fit(const std::string& input, bool two_way, bool no_reduce,
            const std::string& route, const std::string& normalization,
            const std::string& se_mode, const std::string& json_out,
            const std::string& csv_out) {
  Timer timer;
  RunManifest man = make_manifest("fit", {input}, 0);
  netfe::MatchedCsv data = netfe::read_matched_csv(input);

  nlohmann::json body;
  std::vector<std::string> ids;
  Eigen::VectorXd effects, se;

  if (two_way) {
    netfe::BipartiteData bd(data.rows);
    netfe::StackedTwoWay stacked = netfe::stack_two_way(bd);
    if (!netfe::is_connected(stacked.graph)) {
      if (no_reduce) {
        throw netfe::InputError("two-way data disconnected and --no-reduce given");
      }
      // keep only rows whose endpoints live in the largest component
      netfe::LargestComponent lc = netfe::largest_component(stacked.graph);
      std::set<std::string> kept;
      for (int v : lc.vertex_map) kept.insert(stacked.graph.original_id(v));
      std::vector<netfe::MatchedRow> rows;
      for (const auto& row : data.rows) {
        if (kept.count("1:" + row.i) && kept.count("2:" + row.j)) {
          rows.push_back(row);
        }
      }
      std::cerr << "warning: two-way data disconnected; kept " << rows.size()
                << " of " << data.rows.size() << " rows\n";
      data.rows = std::move(rows);
      bd = netfe::BipartiteData(data.rows);
      stacked = netfe::stack_two_way(bd);
    }
    netfe::EtaRoutes routes = netfe::fit_eta_three_ways(bd);
    Eigen::VectorXd eta = route == "profiled"     ? routes.profiled
                          : route == "weightedfd" ? routes.weighted_fd
                                                  : routes.joint;
    man.n = stacked.graph.vertex_count();
    man.m = stacked.graph.edge_count();

    // standard errors from the joint (stacked) fit; se(eta_j) = se(alpha_{n1+j})
    netfe::GraphMatrices gm = netfe::matrices(stacked.graph);
    netfe::LaplacianPseudoinverse lstar(gm);
    netfe::FixedEffectFit fit = netfe::fit_full(gm, bd.y(), bd.X(), lstar);
    netfe::StandardErrors ses =
        netfe::standard_errors(gm, fit, parse_se_mode(se_mode), lstar, bd.X());

    body["eta"] = std::vector<double>(eta.data(), eta.data() + eta.size());
    body["eta_se"] = std::vector<double>(ses.se.data() + bd.n1(),
                                         ses.se.data() + bd.n1() + bd.n2());
    body["mu"] = std::vector<double>(routes.mu_joint.data(),
                                     routes.mu_joint.data() + routes.mu_joint.size());
    body["mu_se"] =
        std::vector<double>(ses.se.data(), ses.se.data() + bd.n1());
    body["beta"] = std::vector<double>(routes.beta.data(),
                                       routes.beta.data() + routes.beta.size());
    body["residuals"] = std::vector<double>(
        fit.residuals.data(), fit.residuals.data() + fit.residuals.size());
    body["route"] = route;
    body["se_mode"] = se_mode;
    body["type2_ids"] = bd.ids2();
    body["type1_ids"] = bd.ids1();
    ids = bd.ids2();
    effects = eta;
    se = ses.se.tail(bd.n2());
  } else {
    std::vector<std::tuple<std::string, std::string, double>> edge_rows;
    edge_rows.reserve(data.rows.size());
    for (std::size_t r = 0; r < data.rows.size(); ++r) {
      edge_rows.emplace_back(data.rows[r].i, data.rows[r].j, data.w[r]);
    }
    netfe::Graph g = netfe::build_graph_labeled(edge_rows);
    std::vector<std::size_t> keep_rows(data.rows.size());
    for (std::size_t r = 0; r < keep_rows.size(); ++r) keep_rows[r] = r;
    if (!netfe::is_connected(g)) {
      if (no_reduce) {
        throw netfe::InputError("graph disconnected and --no-reduce given");
      }
      netfe::LargestComponent lc = netfe::largest_component(g);
      std::set<std::string> kept;
      for (int v : lc.vertex_map) kept.insert(g.original_id(v));
      std::vector<std::tuple<std::string, std::string, double>> reduced;
      std::vector<std::size_t> reduced_rows;
      for (std::size_t r = 0; r < edge_rows.size(); ++r) {
        if (kept.count(std::get<0>(edge_rows[r])) &&
            kept.count(std::get<1>(edge_rows[r]))) {
          reduced.push_back(edge_rows[r]);
          reduced_rows.push_back(r);
        }
      }
      std::cerr << "warning: graph disconnected; kept " << reduced.size() << " of "
                << edge_rows.size() << " rows\n";
      edge_rows = std::move(reduced);
      keep_rows = std::move(reduced_rows);
      g = netfe::build_graph_labeled(edge_rows);
    }
    man.n = g.vertex_count();
    man.m = g.edge_count();
    const int m = g.edge_count();
    const int p = static_cast<int>(data.rows.front().x.size());
    Eigen::VectorXd y(m);
    Eigen::MatrixXd X(m, p);
    for (int r = 0; r < m; ++r) {
      const netfe::MatchedRow& row = data.rows[keep_rows[r]];
      y[r] = row.y;
      for (int c = 0; c < p; ++c) X(r, c) = row.x[c];
    }
    netfe::GraphMatrices gm = netfe::matrices(g);
    netfe::LaplacianPseudoinverse lstar(gm);
    netfe::FixedEffectFit fit = netfe::fit_full(gm, y, X, lstar);
    netfe::StandardErrors ses =
        netfe::standard_errors(gm, fit, parse_se_mode(se_mode), lstar, X);
    if (normalization == "mean") {
      fit = netfe::fit_alternative_normalization(fit);
      if (ses.mode == netfe::SeMode::homoskedastic && p == 0) {
        // the mean-zero estimator's variance is sigma^2 (M_iota L* M_iota)_ii
        const Eigen::MatrixXd& Ls = lstar.dense();
        Eigen::VectorXd rm = Ls.rowwise().mean();
        Eigen::VectorXd centered =
            Ls.diagonal().array() - 2.0 * rm.array() + rm.mean();
        ses.se = (ses.sigma2_hat * centered.cwiseMax(0.0)).cwiseSqrt();
      }
    }

    body["alpha"] = std::vector<double>(fit.alpha.data(),
                                        fit.alpha.data() + fit.alpha.size());
    body["beta"] = std::vector<double>(fit.beta.data(),
                                       fit.beta.data() + fit.beta.size());
    body["residuals"] = std::vector<double>(
        fit.residuals.data(), fit.residuals.data() + fit.residuals.size());
    body["se"] = std::vector<double>(ses.se.data(), ses.se.data() + ses.se.size());
    body["se_mode"] = se_mode;
    body["normalization"] = normalization;
    body["rank"] = {{"x_full_rank", fit.rank_report.x_full_rank},
                    {"joint_full_rank", fit.rank_report.joint_full_rank},
                    {"connected", fit.rank_report.connected}};
    if (ses.mode == netfe::SeMode::homoskedastic) {
      body["sigma2_hat"] = ses.sigma2_hat;
    }
    ids = g.original_ids();
    effects = fit.alpha;
    se = ses.se;
  }

  man.wall_clock_ms = timer.ms();
  body["manifest"] = netfe::to_json(man);
  if (!json_out.empty()) write_output(json_out, body.dump(2) + "\n");
  if (!csv_out.empty()) netfe::write_fit_csv(csv_out, ids, effects, se);
  if (json_out.empty() && csv_out.empty()) std::cout << body.dump(2) << "\n";
  return 0;
}

int cmd_project(const std::string& input, const std::string& out_csv,
                const std::string& json_out) {
  Timer timer;
  RunManifest man = make_manifest("project", {input}, 0);
  netfe::MatchedCsv data = netfe::read_matched_csv(input);
  netfe::BipartiteData bd(data.rows);
  netfe::Projection proj = netfe::one_mode_projection(bd);
  man.n = bd.n2();
  man.m = proj.graph.edge_count();

  if (proj.graph.edge_count() == 0) {
    std::cerr << "warning: empty projection (every type-1 unit has degree 1)\n";
  } else {
    netfe::write_projection_csv(out_csv, proj);
  }
  std::cout << "type-1 units: " << bd.n1() << ", type-2 units: " << bd.n2()
            << ", rows: " << bd.m() << "\n"
            << "projected edges (pairs): " << proj.m_prime
            << ", weighted edges: " << proj.graph.edge_count() << "\n";
  if (!proj.isolated2.empty()) {
    std::cout << "isolated type-2 units in projection: " << proj.isolated2.size()
              << "\n";
  }
  if (!json_out.empty()) {
    man.wall_clock_ms = timer.ms();
    nlohmann::json body{{"manifest", netfe::to_json(man)},
                        {"n1", bd.n1()},
                        {"n2", bd.n2()},
                        {"rows", bd.m()},
                        {"m_prime", proj.m_prime},
                        {"weighted_edges", proj.graph.edge_count()},
                        {"isolated_type2", proj.isolated2}};
    write_output(json_out, body.dump(2) + "\n");
  }
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& json_out) {
  Timer timer;
  const std::string text = read_file(config_path);
  netfe::SimConfig cfg = netfe::parse_sim_config(text);
  RunManifest man = make_manifest("simulate", {config_path}, cfg.seed);

  nlohmann::json body = netfe::simulate_summary(cfg);
  man.n = body["config"]["n"];
  man.m = body["config"]["m"];
  man.wall_clock_ms = timer.ms();
  body["manifest"] = netfe::to_json(man);

  const std::string dumped = body.dump(2) + "\n";
  if (!json_out.empty()) {
    write_output(json_out, dumped);
  } else {
    std::cout << dumped;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fixed-effect regressions on network data"};
  app.set_version_flag("--version", NETFE_VERSION);
  app.require_subcommand(1);

  std::string input, json_out, csv_out, out_csv = "projection.csv";
  double sigma2 = 1.0;
  bool no_reduce = false, two_way = false;
  int probes = 0;
  std::uint64_t seed = 1;
  std::string route = "joint", normalization = "d", se_mode = "homosked";

  auto* diag = app.add_subcommand("diag", "connectivity diagnostics for an edge list");
  diag->add_option("input", input, "edge CSV (header i,j[,w])")->required();
  diag->add_option("--sigma2", sigma2, "error variance for CI widths and bounds");
  diag->add_flag("--no-reduce", no_reduce, "fail on disconnected input");
  diag->add_option("--probes", probes,
                   "estimate (S^dagger)_ii stochastically with this many probes");
  diag->add_option("--seed", seed, "probe seed");
  diag->add_option("--json", json_out, "write JSON report here ('-' = stdout)");
  diag->add_option("--csv", csv_out, "write per-vertex CSV here");

  auto* fit = app.add_subcommand("fit", "constrained least-squares fit");
  fit->add_option("input", input, "matched CSV (header i,j[,w],y[,x1..xp])")
      ->required();
  fit->add_flag("--two-way", two_way, "bipartite two-way mode (eta/mu split)");
  fit->add_flag("--no-reduce", no_reduce, "fail on disconnected input");
  fit->add_option("--route", route, "two-way route")
      ->check(CLI::IsMember({"joint", "profiled", "weightedfd"}));
  fit->add_option("--normalization", normalization, "effect normalization")
      ->check(CLI::IsMember({"d", "mean"}));
  fit->add_option("--se", se_mode, "standard error mode")
      ->check(CLI::IsMember({"plugin", "plugin-unscaled", "homosked"}));
  fit->add_option("--json", json_out, "write JSON fit here ('-' = stdout)");
  fit->add_option("--csv", csv_out, "write vertex_id,alpha,se CSV here");

  auto* project = app.add_subcommand("project", "one-mode projection onto type 2");
  project->add_option("input", input, "matched CSV (header i,j,y[,x..])")->required();
  project->add_option("-o,--output", out_csv, "weighted edge-list CSV");
  project->add_option("--json", json_out, "write summary JSON here ('-' = stdout)");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo study from a config");
  simulate->add_option("config", input, "key = value config file")->required();
  simulate->add_option("--json", json_out, "write summary JSON here ('-' = stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (diag->parsed()) {
      return cmd_diag(input, sigma2, no_reduce, probes, seed, json_out, csv_out);
    }
    if (fit->parsed()) {
      return cmd_fit(input, two_way, no_reduce, route, normalization, se_mode,
                     json_out, csv_out);
    }
    if (project->parsed()) return cmd_project(input, out_csv, json_out);
    if (simulate->parsed()) return cmd_simulate(input, json_out);
  } catch (const netfe::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const netfe::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

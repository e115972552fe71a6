#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "netfe/bipartite.hpp"
#include "netfe/csv.hpp"
#include "netfe/error.hpp"
#include "netfe/estimator.hpp"
#include "netfe/generators.hpp"
#include "netfe/inference.hpp"
#include "netfe/moments.hpp"
#include "netfe/simulate.hpp"
#include "netfe/spectral.hpp"
#include "netfe/stats.hpp"
#include "netfe/two_way.hpp"

namespace py = pybind11;
using namespace netfe;

namespace {

Graph graph_from_array(const Eigen::MatrixXd& edges) {
  if (edges.cols() != 2 && edges.cols() != 3) {
    throw InputError("edge array must have columns (i, j[, w])");
  }
  std::vector<EdgeInput> rows;
  rows.reserve(edges.rows());
  for (int r = 0; r < edges.rows(); ++r) {
    EdgeInput e;
    e.i = static_cast<std::int64_t>(edges(r, 0));
    e.j = static_cast<std::int64_t>(edges(r, 1));
    e.w = edges.cols() == 3 ? edges(r, 2) : 1.0;
    rows.push_back(e);
  }
  return build_graph(rows);
}

Eigen::MatrixXd edges_to_array(const Graph& g) {
  Eigen::MatrixXd out(g.edge_count(), 3);
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edges()[e];
    out(e, 0) = ed.i;
    out(e, 1) = ed.j;
    out(e, 2) = ed.w;
  }
  return out;
}

BipartiteData bipartite_from_rows(const std::vector<std::string>& i_ids,
                                  const std::vector<std::string>& j_ids,
                                  const Eigen::VectorXd& y,
                                  const Eigen::MatrixXd& X) {
  if (i_ids.size() != j_ids.size() ||
      static_cast<Eigen::Index>(i_ids.size()) != y.size()) {
    throw InputError("i, j and y must have equal length");
  }
  std::vector<MatchedRow> rows(i_ids.size());
  for (std::size_t r = 0; r < i_ids.size(); ++r) {
    rows[r].i = i_ids[r];
    rows[r].j = j_ids[r];
    rows[r].y = y[static_cast<Eigen::Index>(r)];
    for (int c = 0; c < X.cols(); ++c) {
      rows[r].x.push_back(X(static_cast<Eigen::Index>(r), c));
    }
  }
  return BipartiteData(rows);
}

}  // namespace

PYBIND11_MODULE(_netfe, m) {
  m.doc() = "fixed-effect regressions on network data";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<Graph>(m, "Graph")
      .def_property_readonly("n", &Graph::vertex_count)
      .def_property_readonly("m", &Graph::edge_count)
      .def("edges", &edges_to_array, "edge array (i, j, w) with 1-based ids")
      .def("original_ids", &Graph::original_ids)
      .def("__repr__", [](const Graph& g) {
        return "<netfe.Graph n=" + std::to_string(g.vertex_count()) +
               " m=" + std::to_string(g.edge_count()) + ">";
      });

  m.def("build_graph", &graph_from_array, py::arg("edges"),
        "Graph from an (m,2) or (m,3) array of (i, j[, w]) rows");
  m.def("read_edge_csv", &read_edge_csv, py::arg("path"));

  m.def("connected_components", &connected_components);
  m.def("is_connected", &is_connected);
  m.def("largest_component", [](const Graph& g) {
    LargestComponent lc = largest_component(g);
    return py::make_tuple(lc.graph, lc.vertex_map);
  });

  m.def("incidence", [](const Graph& g) {
    return Eigen::MatrixXd(matrices(g).B);
  });
  m.def("laplacian", [](const Graph& g) {
    return Eigen::MatrixXd(matrices(g).L);
  });
  m.def("adjacency", [](const Graph& g) {
    return Eigen::MatrixXd(matrices(g).A);
  });
  m.def("degrees", [](const Graph& g) { return matrices(g).d; });
  m.def("normalized_laplacian", [](const Graph& g) {
    return Eigen::MatrixXd(normalized_laplacian(matrices(g)));
  });

  m.def(
      "lambda2",
      [](const Graph& g, double tol) {
        Lambda2Options opts;
        opts.tol = tol;
        return lambda2(g, opts);
      },
      py::arg("graph"), py::arg("tol") = 1e-8);
  m.def("cheeger_exact", &cheeger_exact);
  m.def("lstar", [](const Graph& g) {
    return LaplacianPseudoinverse(matrices(g)).dense();
  });
  m.def("diag_sdag", [](const Graph& g) { return diag_Sdag_exact(matrices(g)); });

  m.def(
      "fit",
      [](const Graph& g, const Eigen::VectorXd& y, const Eigen::MatrixXd& X) {
        FixedEffectFit fit = fit_full(g, y, X);
        py::dict out;
        out["alpha"] = fit.alpha;
        out["beta"] = fit.beta;
        out["residuals"] = fit.residuals;
        return out;
      },
      py::arg("graph"), py::arg("y"), py::arg("X") = Eigen::MatrixXd());

  m.def(
      "connectivity_report",
      [](const Graph& g) {
        ConnectivityReport rep = connectivity_report(g);
        py::dict out;
        out["n"] = rep.n;
        out["m"] = rep.m;
        out["lambda2"] = rep.lambda2;
        out["h"] = rep.h;
        out["H"] = rep.H;
        out["d"] = rep.d;
        out["h_i"] = rep.h_i;
        out["H_i"] = rep.H_i;
        out["h_i2"] = rep.h_i2;
        out["Sdag_ii"] = rep.diag_Sdag;
        return out;
      },
      py::arg("graph"));

  m.def(
      "variance_bounds",
      [](const Graph& g, double sigma2) {
        GraphMatrices gm = matrices(g);
        NeighborIndex nbr(g);
        HarmonicMeans hm = harmonic_means(nbr, gm.d);
        VertexBounds vb =
            variance_bounds(gm.d, hm.h_i, lambda2(gm), gm.degree_sum(), sigma2);
        return py::make_tuple(vb.lower, vb.upper);
      },
      py::arg("graph"), py::arg("sigma2") = 1.0);

  py::class_<BipartiteData>(m, "BipartiteData")
      .def_property_readonly("n1", &BipartiteData::n1)
      .def_property_readonly("n2", &BipartiteData::n2)
      .def_property_readonly("m", &BipartiteData::m)
      .def_property_readonly("p", &BipartiteData::p)
      .def("ids1", &BipartiteData::ids1)
      .def("ids2", &BipartiteData::ids2);

  m.def("build_bipartite", &bipartite_from_rows, py::arg("i"), py::arg("j"),
        py::arg("y"), py::arg("X") = Eigen::MatrixXd());

  m.def("stack_two_way", [](const BipartiteData& bd) {
    StackedTwoWay s = stack_two_way(bd);
    return py::make_tuple(s.graph, s.n1, s.n2);
  });

  m.def("one_mode_projection", [](const BipartiteData& bd) {
    Projection proj = one_mode_projection(bd);
    py::dict out;
    out["graph"] = proj.graph;
    out["m_prime"] = proj.m_prime;
    out["Q"] = Eigen::MatrixXd(proj.Q);
    out["W"] = proj.W;
    out["connector"] = proj.connector;
    return out;
  });

  m.def("fit_eta_three_ways", [](const BipartiteData& bd) {
    EtaRoutes r = fit_eta_three_ways(bd);
    py::dict out;
    out["joint"] = r.joint;
    out["profiled"] = r.profiled;
    out["weighted_fd"] = r.weighted_fd;
    out["beta"] = r.beta;
    return out;
  });

  m.def(
      "standard_errors",
      [](const Graph& g, const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
         const std::string& mode) {
        GraphMatrices gm = matrices(g);
        LaplacianPseudoinverse lstar(gm);
        FixedEffectFit fit = fit_full(gm, y, X, lstar);
        SeMode se_mode = mode == "plugin"            ? SeMode::plugin_inid
                         : mode == "plugin-unscaled" ? SeMode::plugin_unscaled
                                                     : SeMode::homoskedastic;
        StandardErrors ses = standard_errors(gm, fit, se_mode, lstar, X);
        py::dict out;
        out["se"] = ses.se;
        out["mode"] = mode;
        if (se_mode == SeMode::homoskedastic) out["sigma2_hat"] = ses.sigma2_hat;
        return out;
      },
      py::arg("graph"), py::arg("y"), py::arg("X") = Eigen::MatrixXd(),
      py::arg("mode") = "homosked");

  m.def("sample_variance", &sample_variance, py::arg("alpha"));

  m.def(
      "bias_corrected_variance",
      [](const Graph& g, const Eigen::VectorXd& alpha, double sigma2_hat) {
        LaplacianPseudoinverse lstar(matrices(g));
        MomentEstimate est = bias_corrected_variance(alpha, sigma2_hat, lstar);
        py::dict out;
        out["tau_hat"] = est.tau_hat;
        out["bias_hat"] = est.bias_hat;
        out["tau_corrected"] = est.tau_corrected;
        return out;
      },
      py::arg("graph"), py::arg("alpha"), py::arg("sigma2_hat"),
      "sample variance of the effects minus its estimation-noise bias");

  m.def(
      "diagnostics",
      [](const Graph& g, double sigma2) {
        Diagnostics d = diagnostics(g, sigma2);
        py::dict out;
        out["sdag_ratio"] = d.sdag_ratio;
        out["trace_lstar_over_nm1"] = d.trace_lstar_over_nm1;
        out["h_inv"] = d.h_inv;
        out["ci_width_exact"] = d.ci_width_exact;
        out["ci_width_approx"] = d.ci_width_approx;
        return out;
      },
      py::arg("graph"), py::arg("sigma2") = 1.0);

  m.def("hypercube", &hypercube, py::arg("N"));
  m.def("extended_hypercube", &extended_hypercube, py::arg("N"));
  m.def("star", &star, py::arg("n"));
  m.def("wheel", &wheel, py::arg("n"));
  m.def("complete", &complete, py::arg("n"));
  m.def("erdos_renyi", &erdos_renyi, py::arg("n"), py::arg("p"), py::arg("seed"));

  m.def(
      "simulate",
      [](const std::string& config_text) {
        SimConfig cfg = parse_sim_config(config_text);
        return simulate_summary(cfg).dump(2);
      },
      py::arg("config_text"), "Monte Carlo summary JSON from config text");

  m.attr("__version__") = NETFE_VERSION;
}

#pragma once

#include <Eigen/Core>

#include "netfe/bipartite.hpp"
#include "netfe/estimator.hpp"

namespace netfe {

/// The type-2 effects eta of the two-way model through three numerically
/// equivalent routes:
///   joint        fit of the stacked graph, sign-mapped (eta = -alpha on V2),
///   profiled     least squares after projecting out the type-1 dummies,
///   weighted_fd  weighted least squares on the first-differenced equation.
/// Each eta is reported mean-zero so the routes can be compared directly;
/// beta is identical across routes.
struct EtaRoutes {
  Eigen::VectorXd joint;
  Eigen::VectorXd profiled;
  Eigen::VectorXd weighted_fd;
  Eigen::VectorXd beta;
  Eigen::VectorXd mu_joint;  // type-1 effects from the joint route (d-normalized)
};

EtaRoutes fit_eta_three_ways(const BipartiteData& bd);

/// Plain (unweighted) least squares on the first differences, mean-zero
/// normalized. Not equivalent to the two-way fit; serves as the negative
/// control.
Eigen::VectorXd fit_eta_plain_fd(const BipartiteData& bd);

}  // namespace netfe

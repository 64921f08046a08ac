#pragma once

#include <Eigen/Core>
#include <string>

namespace ffts {

/// Mean squared error over all horizon x grid-point cells.
double amse(const Eigen::MatrixXd& actual, const Eigen::MatrixXd& predicted);

/// Fraction of points falling inside the closed interval [lower, upper].
double coverage(const Eigen::MatrixXd& actual, const Eigen::MatrixXd& lower,
                const Eigen::MatrixXd& upper);

/// Mean interval score: width plus 2/alpha-weighted penalties for points
/// missed below or above the interval. Equals the mean width exactly when
/// every point is covered.
double interval_score(const Eigen::MatrixXd& actual, const Eigen::MatrixXd& lower,
                      const Eigen::MatrixXd& upper, double alpha);

/// One evaluation row: a configuration label, method, horizon, and the three
/// forecast quality metrics.
struct MetricRow {
    std::string config;
    std::string method;
    int horizon = 0;
    double amse = 0.0;
    double coverage = 0.0;
    double score = 0.0;
};

}  // namespace ffts

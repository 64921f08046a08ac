#pragma once

#include <Eigen/Core>

#include "ffts/series.hpp"

namespace ffts {

/// Functional principal component decomposition of a smoothed series.
///
/// Every curve satisfies the exact identity
///   curve_t = mean + scores.row(t) * components + residuals.row(t)
/// with components orthonormal under the grid's quadrature inner product and
/// eigenvalues sorted in non-increasing order (negatives within the numerical
/// noise floor are clipped to zero).
struct FpcaModel {
    Grid grid;
    Eigen::VectorXd mean;        // J
    Eigen::MatrixXd components;  // K x J, row k = k-th component
    Eigen::VectorXd eigenvalues; // K
    Eigen::MatrixXd scores;      // N x K
    Eigen::MatrixXd residuals;   // N x J

    int component_count() const noexcept { return static_cast<int>(components.rows()); }
};

/// Eigendecomposition of the quadrature-weighted sample covariance of the
/// input curves. Scores are quadrature inner products of the centered curves
/// with each component; the sign of each component is fixed so that its entry
/// of largest magnitude is positive.
///
/// Requires 1 <= num_components < min(N, J).
FpcaModel fit_fpca(const FunctionalSeries& smooth, int num_components);

/// mean + sum_k scores_row[k] * component_k.
Eigen::VectorXd reconstruct(const FpcaModel& model,
                            const Eigen::Ref<const Eigen::VectorXd>& scores_row);

/// Total quadrature-weighted variance of the centered input, i.e. the trace
/// of the weighted covariance; equals the sum of all its eigenvalues.
double total_weighted_variance(const FunctionalSeries& series);

}  // namespace ffts

#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "ffts/series.hpp"

namespace ffts {

/// The noisy observation model behind every smoothed series: observed value =
/// smooth value + pointwise scale * standardized residual.
struct SmoothedSeries {
    FunctionalSeries smooth;        // fitted smooth curves
    FunctionalSeries scale;         // pointwise noise scale, strictly positive
    Eigen::MatrixXd std_residuals;  // (raw - smooth) / scale, dimensionless
    Eigen::VectorXd penalties;      // per-curve roughness penalty actually used
};

/// Flattened resampling pools extracted from a smoothed series: all N*J
/// standardized residuals, and the N scale curves (one row per curve).
struct ResidualPools {
    std::vector<double> std_residuals;
    Eigen::MatrixXd scale_curves;
};

/// Grid of candidate penalties searched by generalized cross-validation:
/// 41 log-spaced values from 1e-4 to 1e4.
inline constexpr int kGcvLadderSize = 41;
inline constexpr double kGcvLadderLogMin = -4.0;
inline constexpr double kGcvLadderLogMax = 4.0;

/// Smallest admissible noise scale; keeps standardized residuals finite on
/// degenerate flat curves (which then get residuals of exactly zero).
inline constexpr double kScaleFloor = 1e-8;

/// Penalized least-squares smoother applied independently to each curve.
///
/// Each row of the result minimizes sum_j (y_j - f_j)^2 + penalty * sum (d2 f)^2
/// with d2 the second difference along the grid index. When `penalty` is not
/// supplied it is chosen per curve by generalized cross-validation over the
/// ladder above. The pointwise noise scale is the square root of a Gaussian
/// kernel smooth (bandwidth = two mean grid steps) of the squared raw
/// residuals, floored at kScaleFloor.
///
/// Requires at least four grid points.
SmoothedSeries smooth_series(const FunctionalSeries& raw,
                             std::optional<double> penalty = std::nullopt);

ResidualPools residual_pools(const SmoothedSeries& smoothed);

}  // namespace ffts

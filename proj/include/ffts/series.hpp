#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>

#include "ffts/grid.hpp"

namespace ffts {

/// A functional time series: N curves observed on one common grid.
/// Row t of values() is the curve at time t. All entries must be finite.
class FunctionalSeries {
public:
    FunctionalSeries(Eigen::MatrixXd values, Grid grid, std::string label = "");

    int curve_count() const noexcept { return static_cast<int>(values_.rows()); }
    int point_count() const noexcept { return static_cast<int>(values_.cols()); }
    const Eigen::MatrixXd& values() const noexcept { return values_; }
    const Grid& grid() const noexcept { return grid_; }
    const std::string& label() const noexcept { return label_; }

    Eigen::VectorXd curve(int t) const { return values_.row(t).transpose(); }

    /// Series restricted to curves [first, first + count).
    FunctionalSeries slice(int first, int count) const;

private:
    Eigen::MatrixXd values_;
    Grid grid_;
    std::string label_;
};

struct CenteredSeries {
    Eigen::VectorXd mean;       // columnwise average curve
    FunctionalSeries centered;  // rows sum to the zero curve
};

/// Columnwise mean curve plus the mean-subtracted series.
CenteredSeries center(const FunctionalSeries& series);

}  // namespace ffts

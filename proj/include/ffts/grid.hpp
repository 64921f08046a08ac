#pragma once

#include <Eigen/Core>
#include <vector>

#include "ffts/errors.hpp"

namespace ffts {

/// Ordered evaluation points shared by all curves of a series, together with
/// the trapezoidal quadrature weights used for every inner product.
///
/// Points must be strictly increasing with at least two entries; the weights
/// are then strictly positive and sum to the domain length.
class Grid {
public:
    explicit Grid(std::vector<double> points);
    explicit Grid(Eigen::VectorXd points);

    /// n equally spaced points spanning [a, b].
    static Grid regular(double a, double b, int n);

    int size() const noexcept { return static_cast<int>(points_.size()); }
    const Eigen::VectorXd& points() const noexcept { return points_; }
    const Eigen::VectorXd& weights() const noexcept { return weights_; }
    double length() const noexcept { return points_(points_.size() - 1) - points_(0); }

    /// Mean spacing between adjacent points.
    double mean_step() const noexcept { return length() / (size() - 1); }

    bool operator==(const Grid& other) const {
        return points_.size() == other.points_.size() && points_ == other.points_;
    }
    bool operator!=(const Grid& other) const { return !(*this == other); }

private:
    void init();

    Eigen::VectorXd points_;
    Eigen::VectorXd weights_;
};

/// Trapezoidal quadrature of the pointwise product of two curves on `grid`.
/// Throws GridMismatchError when the curve lengths do not match the grid.
double inner_product(const Grid& grid, const Eigen::Ref<const Eigen::VectorXd>& f,
                     const Eigen::Ref<const Eigen::VectorXd>& g);

/// Quadrature norm sqrt(inner_product(f, f)).
double curve_norm(const Grid& grid, const Eigen::Ref<const Eigen::VectorXd>& f);

}  // namespace ffts

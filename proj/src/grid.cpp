#include "ffts/grid.hpp"

#include <cmath>
#include <utility>

namespace ffts {

Grid::Grid(std::vector<double> points)
    : points_(Eigen::Map<Eigen::VectorXd>(points.data(), static_cast<Eigen::Index>(points.size()))) {
    init();
}

Grid::Grid(Eigen::VectorXd points) : points_(std::move(points)) { init(); }

Grid Grid::regular(double a, double b, int n) {
    if (n < 2) throw InvalidDataError("grid needs at least two points");
    Eigen::VectorXd pts(n);
    for (int i = 0; i < n; ++i) pts(i) = a + (b - a) * static_cast<double>(i) / (n - 1);
    return Grid(std::move(pts));
}

void Grid::init() {
    const Eigen::Index n = points_.size();
    if (n < 2) throw InvalidDataError("grid needs at least two points");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!std::isfinite(points_(i))) throw InvalidDataError("grid points must be finite");
        if (i > 0 && points_(i) <= points_(i - 1))
            throw InvalidDataError("grid points must be strictly increasing");
    }
    weights_ = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double half = 0.5 * (points_(i + 1) - points_(i));
        weights_(i) += half;
        weights_(i + 1) += half;
    }
}

double inner_product(const Grid& grid, const Eigen::Ref<const Eigen::VectorXd>& f,
                     const Eigen::Ref<const Eigen::VectorXd>& g) {
    if (f.size() != grid.size() || g.size() != grid.size())
        throw GridMismatchError("inner_product: curves not defined on this grid");
    return (grid.weights().array() * f.array() * g.array()).sum();
}

double curve_norm(const Grid& grid, const Eigen::Ref<const Eigen::VectorXd>& f) {
    return std::sqrt(inner_product(grid, f, f));
}

}  // namespace ffts

#include "ffts/fpca.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace ffts {

FpcaModel fit_fpca(const FunctionalSeries& smooth, int num_components) {
    const int n_curves = smooth.curve_count();
    const int n_points = smooth.point_count();
    const int max_k = std::min(n_curves, n_points) - 1;
    if (num_components < 1 || num_components > max_k)
        throw DimensionError("fit_fpca: component count must lie in [1, min(N, J) - 1]");

    CenteredSeries centered = center(smooth);
    const Eigen::MatrixXd& x = centered.centered.values();

    Eigen::MatrixXd cov = x.transpose() * x / static_cast<double>(n_curves - 1);
    cov = 0.5 * (cov + cov.transpose());

    // Quadrature-weighted eigenproblem, symmetrized through W^(1/2).
    const Eigen::VectorXd sqrt_w = smooth.grid().weights().cwiseSqrt();
    const Eigen::MatrixXd weighted =
        sqrt_w.asDiagonal() * cov * sqrt_w.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(weighted);
    if (eig.info() != Eigen::Success)
        throw NumericalError("fit_fpca: eigendecomposition failed");

    const Eigen::VectorXd raw_values = eig.eigenvalues();  // ascending
    const double top = raw_values(n_points - 1);
    if (raw_values(0) < -1e-8 * std::max(top, 1.0))
        throw NumericalError("fit_fpca: weighted covariance is not positive semidefinite");

    Eigen::VectorXd eigenvalues(num_components);
    Eigen::MatrixXd components(num_components, n_points);
    for (int k = 0; k < num_components; ++k) {
        const int src = n_points - 1 - k;  // descending order
        double value = raw_values(src);
        if (value < 1e-10 * std::max(top, 0.0)) value = 0.0;
        eigenvalues(k) = value;

        Eigen::VectorXd component = eig.eigenvectors().col(src).cwiseQuotient(sqrt_w);
        int arg_max = 0;
        for (int j = 1; j < n_points; ++j)
            if (std::abs(component(j)) > std::abs(component(arg_max))) arg_max = j;
        if (component(arg_max) < 0.0) component = -component;
        components.row(k) = component.transpose();
    }

    const Eigen::MatrixXd scores =
        x * smooth.grid().weights().asDiagonal() * components.transpose();
    Eigen::MatrixXd residuals = x - scores * components;

    return FpcaModel{smooth.grid(), std::move(centered.mean), std::move(components),
                     std::move(eigenvalues), scores, std::move(residuals)};
}

Eigen::VectorXd reconstruct(const FpcaModel& model,
                            const Eigen::Ref<const Eigen::VectorXd>& scores_row) {
    if (scores_row.size() != model.component_count())
        throw DimensionError("reconstruct: score length does not match component count");
    return model.mean + model.components.transpose() * scores_row;
}

double total_weighted_variance(const FunctionalSeries& series) {
    if (series.curve_count() < 2)
        throw DimensionError("total_weighted_variance: need at least two curves");
    CenteredSeries centered = center(series);
    const Eigen::MatrixXd& x = centered.centered.values();
    const Eigen::VectorXd& w = series.grid().weights();
    double total = 0.0;
    for (int j = 0; j < series.point_count(); ++j)
        total += w(j) * x.col(j).squaredNorm() / static_cast<double>(series.curve_count() - 1);
    return total;
}

}  // namespace ffts

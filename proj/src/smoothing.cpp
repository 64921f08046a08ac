#include "ffts/smoothing.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace ffts {

namespace {

Eigen::MatrixXd second_difference_matrix(int n) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n - 2, n);
    for (int i = 0; i < n - 2; ++i) {
        d(i, i) = 1.0;
        d(i, i + 1) = -2.0;
        d(i, i + 2) = 1.0;
    }
    return d;
}

/// Smooths one curve in the eigenbasis of D'D and returns the fitted values.
/// `spectrum` holds the eigenvalues of D'D, `basis` its eigenvectors.
Eigen::VectorXd apply_penalty(const Eigen::VectorXd& transformed, double penalty,
                              const Eigen::VectorXd& spectrum, const Eigen::MatrixXd& basis) {
    Eigen::VectorXd shrunk(transformed.size());
    for (Eigen::Index i = 0; i < transformed.size(); ++i)
        shrunk(i) = transformed(i) / (1.0 + penalty * spectrum(i));
    return basis * shrunk;
}

double gcv_score(const Eigen::VectorXd& transformed, double penalty,
                 const Eigen::VectorXd& spectrum) {
    const Eigen::Index n = transformed.size();
    double rss = 0.0;
    double trace = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double shrink = 1.0 / (1.0 + penalty * spectrum(i));
        const double resid = transformed(i) * (1.0 - shrink);
        rss += resid * resid;
        trace += shrink;
    }
    const double df = static_cast<double>(n) - trace;
    if (df <= 0.0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(n) * rss / (df * df);
}

}  // namespace

SmoothedSeries smooth_series(const FunctionalSeries& raw, std::optional<double> penalty) {
    const int n_curves = raw.curve_count();
    const int n_points = raw.point_count();
    if (n_points < 4)
        throw InsufficientGridError("smooth_series: need at least four grid points");
    if (penalty && (!std::isfinite(*penalty) || *penalty < 0.0))
        throw InvalidConfigError("smooth_series: penalty must be a non-negative finite value");

    const Eigen::MatrixXd d = second_difference_matrix(n_points);
    const Eigen::MatrixXd dtd = d.transpose() * d;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dtd);
    const Eigen::VectorXd spectrum = eig.eigenvalues().cwiseMax(0.0);
    const Eigen::MatrixXd basis = eig.eigenvectors();

    Eigen::MatrixXd smooth(n_curves, n_points);
    Eigen::VectorXd penalties(n_curves);
    for (int t = 0; t < n_curves; ++t) {
        const Eigen::VectorXd y = raw.curve(t);
        const Eigen::VectorXd transformed = basis.transpose() * y;
        double chosen;
        if (penalty) {
            chosen = *penalty;
        } else {
            chosen = std::pow(10.0, kGcvLadderLogMin);
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < kGcvLadderSize; ++i) {
                const double step = (kGcvLadderLogMax - kGcvLadderLogMin) / (kGcvLadderSize - 1);
                const double candidate = std::pow(10.0, kGcvLadderLogMin + step * i);
                const double score = gcv_score(transformed, candidate, spectrum);
                if (score < best) {
                    best = score;
                    chosen = candidate;
                }
            }
        }
        smooth.row(t) = apply_penalty(transformed, chosen, spectrum, basis).transpose();
        penalties(t) = chosen;
    }

    // Pointwise noise scale: Gaussian kernel smooth of the squared residuals
    // over x, bandwidth two mean grid steps.
    const Eigen::VectorXd& x = raw.grid().points();
    const double bandwidth = 2.0 * raw.grid().mean_step();
    Eigen::MatrixXd kernel(n_points, n_points);
    for (int j = 0; j < n_points; ++j)
        for (int l = 0; l < n_points; ++l) {
            const double z = (x(j) - x(l)) / bandwidth;
            kernel(j, l) = std::exp(-0.5 * z * z);
        }
    const Eigen::VectorXd kernel_row_sums = kernel.rowwise().sum();

    const Eigen::MatrixXd residual = raw.values() - smooth;
    Eigen::MatrixXd scale(n_curves, n_points);
    for (int t = 0; t < n_curves; ++t) {
        const Eigen::VectorXd squared = residual.row(t).array().square();
        const Eigen::VectorXd smoothed_sq = (kernel * squared).cwiseQuotient(kernel_row_sums);
        for (int j = 0; j < n_points; ++j)
            scale(t, j) = std::max(std::sqrt(std::max(smoothed_sq(j), 0.0)), kScaleFloor);
    }

    Eigen::MatrixXd std_residuals = residual.cwiseQuotient(scale);
    return SmoothedSeries{FunctionalSeries(std::move(smooth), raw.grid(), raw.label()),
                          FunctionalSeries(std::move(scale), raw.grid(), raw.label()),
                          std::move(std_residuals), std::move(penalties)};
}

ResidualPools residual_pools(const SmoothedSeries& smoothed) {
    const Eigen::MatrixXd& r = smoothed.std_residuals;
    std::vector<double> pool;
    pool.reserve(static_cast<std::size_t>(r.size()));
    for (Eigen::Index t = 0; t < r.rows(); ++t)
        for (Eigen::Index j = 0; j < r.cols(); ++j) pool.push_back(r(t, j));
    return ResidualPools{std::move(pool), smoothed.scale.values()};
}

}  // namespace ffts

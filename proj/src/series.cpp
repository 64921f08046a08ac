#include "ffts/series.hpp"

#include <cmath>

namespace ffts {

FunctionalSeries::FunctionalSeries(Eigen::MatrixXd values, Grid grid, std::string label)
    : values_(std::move(values)), grid_(std::move(grid)), label_(std::move(label)) {
    if (values_.rows() < 1) throw InvalidDataError("functional series needs at least one curve");
    if (values_.cols() != grid_.size())
        throw DimensionError("functional series: value columns do not match grid size");
    if (!values_.allFinite()) throw InvalidDataError("functional series values must be finite");
}

FunctionalSeries FunctionalSeries::slice(int first, int count) const {
    if (first < 0 || count < 1 || first + count > curve_count())
        throw DimensionError("slice: curve range out of bounds");
    return FunctionalSeries(values_.middleRows(first, count), grid_, label_);
}

CenteredSeries center(const FunctionalSeries& series) {
    const Eigen::VectorXd mean = series.values().colwise().mean().transpose();
    Eigen::MatrixXd centered = series.values().rowwise() - mean.transpose();
    return CenteredSeries{mean, FunctionalSeries(std::move(centered), series.grid(), series.label())};
}

}  // namespace ffts

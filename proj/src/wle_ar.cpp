#include "ffts/wle_ar.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace ffts {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;
constexpr std::size_t kExactKdeLimit = 1024;
constexpr int kKdeBinCount = 4096;
constexpr double kKernelCutoffSds = 8.5;
constexpr double kMinWeight = 1e-6;

double normal_pdf(double z, double variance) {
    return std::exp(-0.5 * z * z / variance) / std::sqrt(kTwoPi * variance);
}

double root_mean_square(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s / static_cast<double>(x.size()));
}

double sample_mean(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double median_of(std::vector<double> x) {
    const std::size_t n = x.size();
    auto mid = x.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(x.begin(), mid, x.end());
    double upper = *mid;
    if (n % 2 == 1) return upper;
    double lower = *std::max_element(x.begin(), mid);
    return 0.5 * (lower + upper);
}

/// One-step residuals of the zero-mean AR recursion applied to (x - level).
std::vector<double> ar_residuals(const std::vector<double>& x, double level,
                                 const std::vector<double>& coef) {
    const int p = static_cast<int>(coef.size());
    const int n = static_cast<int>(x.size());
    std::vector<double> r(static_cast<std::size_t>(n - p));
    for (int t = p; t < n; ++t) {
        double pred = 0.0;
        for (int k = 0; k < p; ++k) pred += coef[static_cast<std::size_t>(k)] * (x[static_cast<std::size_t>(t - 1 - k)] - level);
        r[static_cast<std::size_t>(t - p)] = (x[static_cast<std::size_t>(t)] - level) - pred;
    }
    return r;
}

struct LsSolution {
    double level = 0.0;
    std::vector<double> coef;
};

/// Weighted least squares of x[t] on its lags (plus an optional constant) over
/// t = p..n-1. Weights apply per regression row.
LsSolution weighted_ar_ls(const std::vector<double>& x, int p, const std::vector<double>& w,
                          bool with_intercept, double fallback_level) {
    const int n = static_cast<int>(x.size());
    const int rows = n - p;
    const int cols = p + (with_intercept ? 1 : 0);
    LsSolution out;
    out.coef.assign(static_cast<std::size_t>(p), 0.0);
    if (cols == 0) return out;

    Eigen::MatrixXd a(rows, cols);
    Eigen::VectorXd y(rows);
    for (int i = 0; i < rows; ++i) {
        const int t = p + i;
        const double s = std::sqrt(w[static_cast<std::size_t>(i)]);
        int c = 0;
        if (with_intercept) a(i, c++) = s;
        for (int k = 0; k < p; ++k) a(i, c++) = s * x[static_cast<std::size_t>(t - 1 - k)];
        y(i) = s * x[static_cast<std::size_t>(t)];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < cols) throw SingularFitError("ar fit: singular lag design");
    const Eigen::VectorXd sol = qr.solve(y);

    int c = 0;
    double intercept = 0.0;
    if (with_intercept) intercept = sol(c++);
    double coef_sum = 0.0;
    for (int k = 0; k < p; ++k) {
        out.coef[static_cast<std::size_t>(k)] = sol(c++);
        coef_sum += out.coef[static_cast<std::size_t>(k)];
    }
    if (with_intercept) {
        const double denom = 1.0 - coef_sum;
        out.level = std::abs(denom) > 1e-8 ? intercept / denom : fallback_level;
    }
    return out;
}

struct IterState {
    double level = 0.0;
    std::vector<double> coef;
    double sd = 0.0;
    std::vector<double> weights;
    std::vector<double> residuals;
    bool converged = false;
    double weighted_loglik = -std::numeric_limits<double>::infinity();
};

double weighted_loglik(const std::vector<double>& resid, const std::vector<double>& w, double sd) {
    const double variance = sd * sd;
    double ll = 0.0;
    for (std::size_t i = 0; i < resid.size(); ++i)
        ll += w[i] * (-0.5 * std::log(kTwoPi * variance) - 0.5 * resid[i] * resid[i] / variance);
    return ll;
}

IterState run_weighted_fit(const std::vector<double>& x, int p, const WleConfig& cfg,
                           bool with_location, double level0, std::vector<double> coef0,
                           double sd0) {
    const int n = static_cast<int>(x.size());
    const std::size_t rows = static_cast<std::size_t>(n - p);
    const double sd_floor = 1e-12 * (1.0 + root_mean_square(x));

    IterState st;
    st.level = level0;
    st.coef = std::move(coef0);
    st.sd = sd0;

    if (st.sd <= sd_floor) {
        // The start already fits exactly; no observation can be downweighted.
        st.residuals = ar_residuals(x, st.level, st.coef);
        st.weights.assign(rows, 1.0);
        st.converged = true;
        st.weighted_loglik = weighted_loglik(st.residuals, st.weights, std::max(st.sd, sd_floor));
        return st;
    }

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        const std::vector<double> resid = ar_residuals(x, st.level, st.coef);
        std::vector<double> w(rows, 1.0);
        if (!cfg.force_unit_weights) {
            const std::vector<double> delta =
                pearson_residuals(resid, st.sd, cfg.kernel_variance_ratio);
            double max_w = 0.0;
            for (std::size_t i = 0; i < rows; ++i) {
                w[i] = raf_weight(delta[i]);
                max_w = std::max(max_w, w[i]);
            }
            if (max_w < kMinWeight)
                throw DegenerateWeightsError("weighted ar fit: all observation weights vanished");
        }

        const LsSolution ls = weighted_ar_ls(x, p, w, with_location, st.level);
        const double new_level = with_location ? ls.level : 0.0;
        const std::vector<double> new_resid = ar_residuals(x, new_level, ls.coef);
        double weight_sum = 0.0;
        double weighted_ss = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
            weight_sum += w[i];
            weighted_ss += w[i] * new_resid[i] * new_resid[i];
        }
        double new_sd = std::sqrt(weighted_ss / weight_sum);
        new_sd = std::max(new_sd, sd_floor);

        double change = std::abs(new_sd - st.sd);
        if (with_location) change = std::max(change, std::abs(new_level - st.level));
        for (int k = 0; k < p; ++k)
            change = std::max(change, std::abs(ls.coef[static_cast<std::size_t>(k)] -
                                               st.coef[static_cast<std::size_t>(k)]));

        st.level = new_level;
        st.coef = ls.coef;
        st.sd = new_sd;
        if (change < cfg.tolerance || new_sd <= sd_floor) {
            st.converged = true;
            break;
        }
    }

    st.residuals = ar_residuals(x, st.level, st.coef);
    st.weights.assign(rows, 1.0);
    if (!cfg.force_unit_weights && st.sd > sd_floor) {
        const std::vector<double> delta =
            pearson_residuals(st.residuals, st.sd, cfg.kernel_variance_ratio);
        for (std::size_t i = 0; i < rows; ++i) st.weights[i] = raf_weight(delta[i]);
    }
    st.weighted_loglik = weighted_loglik(st.residuals, st.weights, st.sd);
    return st;
}

struct StartPoint {
    double level = 0.0;
    std::vector<double> coef;
    double sd = 0.0;
};

/// Robust starting point: clip the series at median +- 3 MAD, then solve
/// Yule-Walker on the clipped values. Unavailable when the MAD degenerates.
std::optional<StartPoint> robust_start(const std::vector<double>& x, int p, bool with_location) {
    const std::size_t n = x.size();
    const double med = median_of(x);
    std::vector<double> abs_dev(n);
    for (std::size_t i = 0; i < n; ++i) abs_dev[i] = std::abs(x[i] - med);
    const double mad = median_of(abs_dev);
    if (!(mad > 0.0)) return std::nullopt;

    std::vector<double> clipped(n);
    for (std::size_t i = 0; i < n; ++i)
        clipped[i] = std::clamp(x[i], med - 3.0 * mad, med + 3.0 * mad);

    StartPoint start;
    start.level = with_location ? sample_mean(clipped) : 0.0;

    std::vector<double> autocov(static_cast<std::size_t>(p) + 1, 0.0);
    for (int lag = 0; lag <= p; ++lag) {
        double s = 0.0;
        for (std::size_t t = static_cast<std::size_t>(lag); t < n; ++t)
            s += (clipped[t] - start.level) * (clipped[t - static_cast<std::size_t>(lag)] - start.level);
        autocov[static_cast<std::size_t>(lag)] = s / static_cast<double>(n);
    }
    if (!(autocov[0] > 0.0)) return std::nullopt;

    if (p == 0) {
        start.sd = std::sqrt(autocov[0]);
        return start;
    }

    Eigen::MatrixXd gamma(p, p);
    Eigen::VectorXd rhs(p);
    for (int i = 0; i < p; ++i) {
        rhs(i) = autocov[static_cast<std::size_t>(i) + 1];
        for (int j = 0; j < p; ++j) gamma(i, j) = autocov[static_cast<std::size_t>(std::abs(i - j))];
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gamma);
    if (ldlt.info() != Eigen::Success) return std::nullopt;
    const Eigen::VectorXd coef = ldlt.solve(rhs);
    if (!coef.allFinite()) return std::nullopt;

    start.coef.assign(coef.data(), coef.data() + p);
    const double innovation_var = autocov[0] - coef.dot(rhs);
    start.sd = std::sqrt(std::max(innovation_var, 1e-4 * autocov[0]));
    return start;
}

ArFit state_to_fit(int p, FitMethod method, const IterState& st) {
    ArFit fit;
    fit.order = p;
    fit.coefficients = st.coef;
    fit.innovation_sd = st.sd;
    fit.method = method;
    fit.weights = st.weights;
    fit.residuals = st.residuals;
    return fit;
}

void validate_wle_inputs(const std::vector<double>& series, int order, const WleConfig& cfg) {
    if (order < 0) throw DimensionError("weighted ar fit: negative order");
    if (series.empty() || static_cast<int>(series.size()) <= order)
        throw DimensionError("weighted ar fit: series too short for the requested order");
    if (!(cfg.kernel_variance_ratio > 0.0))
        throw InvalidConfigError("weighted ar fit: kernel variance ratio must be positive");
    if (!(cfg.tolerance > 0.0))
        throw InvalidConfigError("weighted ar fit: tolerance must be positive");
    if (cfg.max_iterations < 1)
        throw InvalidConfigError("weighted ar fit: need at least one iteration");
    if (!cfg.use_mle_start && !cfg.use_robust_start)
        throw InvalidConfigError("weighted ar fit: no starting point enabled");
}

/// Shared driver for fit_ar_wle / fit_score_wle: runs the fixed point from
/// every enabled start and keeps the best converged root.
IterState best_weighted_root(const std::vector<double>& x, int p, const WleConfig& cfg,
                             bool with_location) {
    std::vector<IterState> states;
    if (cfg.use_mle_start) {
        const double level0 = with_location ? sample_mean(x) : 0.0;
        std::vector<double> deviations(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) deviations[i] = x[i] - level0;
        const ArFit mle = fit_ar_mle(deviations, p);
        states.push_back(
            run_weighted_fit(x, p, cfg, with_location, level0, mle.coefficients, mle.innovation_sd));
    }
    if (cfg.use_robust_start) {
        if (auto start = robust_start(x, p, with_location))
            states.push_back(
                run_weighted_fit(x, p, cfg, with_location, start->level, start->coef, start->sd));
    }
    if (states.empty())
        throw SingularFitError("weighted ar fit: no usable starting point (degenerate series)");

    const IterState* best = nullptr;
    for (const IterState& st : states) {
        if (best == nullptr || (st.converged && !best->converged) ||
            (st.converged == best->converged && st.weighted_loglik > best->weighted_loglik))
            best = &st;
    }
    if (!best->converged)
        throw ConvergenceError("weighted ar fit: no start converged within the iteration budget",
                               state_to_fit(p, FitMethod::wle, *best));
    return *best;
}

/// Residual sum of squares of the no-intercept lag regression restricted to
/// the common effective sample t = start..n-1 (used for order selection).
double common_window_ssr(const std::vector<double>& x, int p, int start) {
    const int n = static_cast<int>(x.size());
    const int rows = n - start;
    if (p == 0) {
        double s = 0.0;
        for (int t = start; t < n; ++t) s += x[static_cast<std::size_t>(t)] * x[static_cast<std::size_t>(t)];
        return s;
    }
    Eigen::MatrixXd a(rows, p);
    Eigen::VectorXd y(rows);
    for (int i = 0; i < rows; ++i) {
        const int t = start + i;
        for (int k = 0; k < p; ++k) a(i, k) = x[static_cast<std::size_t>(t - 1 - k)];
        y(i) = x[static_cast<std::size_t>(t)];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < p) throw SingularFitError("select_order: singular lag design");
    return (y - a * qr.solve(y)).squaredNorm();
}

}  // namespace

ArFit fit_ar_mle(const std::vector<double>& series, int order) {
    const int n = static_cast<int>(series.size());
    if (order < 0) throw DimensionError("fit_ar_mle: negative order");
    if (n == 0) throw DimensionError("fit_ar_mle: empty series");
    if (order >= n) throw DimensionError("fit_ar_mle: order must be below the series length");

    ArFit fit;
    fit.order = order;
    fit.method = FitMethod::mle;
    if (order == 0) {
        fit.residuals = series;
        fit.innovation_sd = root_mean_square(series);
        fit.weights.assign(series.size(), 1.0);
        return fit;
    }
    const std::vector<double> unit(static_cast<std::size_t>(n - order), 1.0);
    const LsSolution ls = weighted_ar_ls(series, order, unit, false, 0.0);
    fit.coefficients = ls.coef;
    fit.residuals = ar_residuals(series, 0.0, ls.coef);
    double ss = 0.0;
    for (double r : fit.residuals) ss += r * r;
    fit.innovation_sd = std::sqrt(ss / static_cast<double>(n - order));
    fit.weights = unit;
    return fit;
}

std::vector<double> pearson_residuals(const std::vector<double>& residuals, double innovation_sd,
                                      double kernel_variance_ratio) {
    const std::size_t n = residuals.size();
    if (n == 0) throw DimensionError("pearson_residuals: empty residual vector");
    if (!(innovation_sd > 0.0) || !std::isfinite(innovation_sd))
        throw InvalidConfigError("pearson_residuals: innovation sd must be positive and finite");
    if (!(kernel_variance_ratio > 0.0) || !std::isfinite(kernel_variance_ratio))
        throw InvalidConfigError("pearson_residuals: kernel variance ratio must be positive");

    const double kernel_var = kernel_variance_ratio * innovation_sd * innovation_sd;
    const double model_var = innovation_sd * innovation_sd + kernel_var;

    std::vector<double> density(n);
    const double lo = *std::min_element(residuals.begin(), residuals.end());
    const double hi = *std::max_element(residuals.begin(), residuals.end());
    if (n <= kExactKdeLimit) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t u = 0; u < n; ++u) s += normal_pdf(residuals[i] - residuals[u], kernel_var);
            density[i] = s / static_cast<double>(n);
        }
    } else if (!(hi > lo)) {
        std::fill(density.begin(), density.end(), normal_pdf(0.0, kernel_var));
    } else {
        // Linearly binned estimate with a truncated kernel.
        const double width = (hi - lo) / static_cast<double>(kKdeBinCount - 1);
        std::vector<double> bins(kKdeBinCount, 0.0);
        for (double v : residuals) {
            const double pos = (v - lo) / width;
            const int i0 = std::min(static_cast<int>(pos), kKdeBinCount - 2);
            const double frac = pos - i0;
            bins[static_cast<std::size_t>(i0)] += 1.0 - frac;
            bins[static_cast<std::size_t>(i0) + 1] += frac;
        }
        const double kernel_sd = std::sqrt(kernel_var);
        const int window =
            std::min(kKdeBinCount - 1,
                     static_cast<int>(std::ceil(kKernelCutoffSds * kernel_sd / width)));
        std::vector<double> kernel(static_cast<std::size_t>(window) + 1);
        for (int d = 0; d <= window; ++d) kernel[static_cast<std::size_t>(d)] = normal_pdf(d * width, kernel_var);
        std::vector<double> node(kKdeBinCount, 0.0);
        for (int i = 0; i < kKdeBinCount; ++i) {
            double s = bins[static_cast<std::size_t>(i)] * kernel[0];
            for (int d = 1; d <= window; ++d) {
                double mass = 0.0;
                if (i - d >= 0) mass += bins[static_cast<std::size_t>(i - d)];
                if (i + d < kKdeBinCount) mass += bins[static_cast<std::size_t>(i + d)];
                if (mass != 0.0) s += mass * kernel[static_cast<std::size_t>(d)];
            }
            node[static_cast<std::size_t>(i)] = s / static_cast<double>(n);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double pos = (residuals[i] - lo) / width;
            const int i0 = std::min(static_cast<int>(pos), kKdeBinCount - 2);
            const double frac = pos - i0;
            density[i] = node[static_cast<std::size_t>(i0)] * (1.0 - frac) +
                         node[static_cast<std::size_t>(i0) + 1] * frac;
        }
    }

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = density[i] / normal_pdf(residuals[i], model_var) - 1.0;
    return out;
}

double raf_weight(double pearson_residual) {
    if (pearson_residual < -1.0 - 1e-12)
        throw DomainError("raf_weight: pearson residual below -1");
    const double shifted = std::max(pearson_residual + 1.0, 0.0);
    if (shifted == 0.0) return 0.0;
    const double adjusted = 2.0 * std::sqrt(shifted) - 1.0;
    if (adjusted <= 0.0) return 0.0;
    return std::min(1.0, adjusted / shifted);
}

ArFit fit_ar_wle(const std::vector<double>& series, int order, const WleConfig& config) {
    validate_wle_inputs(series, order, config);
    const IterState best = best_weighted_root(series, order, config, false);
    return state_to_fit(order, FitMethod::wle, best);
}

int select_order(const std::vector<double>& series, int max_order, FitMethod method) {
    (void)method;  // both methods share the MLE-selected order
    const int n = static_cast<int>(series.size());
    if (max_order < 0) throw DimensionError("select_order: negative max order");
    if (!(static_cast<double>(max_order) < n / 4.0))
        throw DimensionError("select_order: max order must be below a quarter of the length");
    const int rows = n - max_order;
    int best_order = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    for (int p = 0; p <= max_order; ++p) {
        const double ssr = common_window_ssr(series, p, max_order);
        const double s2 = std::max(ssr / static_cast<double>(rows), 1e-300);
        const double aic = rows * std::log(s2) + 2.0 * p;
        if (aic < best_aic) {
            best_aic = aic;
            best_order = p;
        }
    }
    return best_order;
}

std::vector<double> forecast_scores(const ArFit& fit, const std::vector<double>& history,
                                    int horizon) {
    if (horizon < 1) throw DimensionError("forecast_scores: horizon must be at least 1");
    if (static_cast<int>(history.size()) < fit.order)
        throw DimensionError("forecast_scores: history shorter than the model order");
    std::vector<double> buffer(history.end() - fit.order, history.end());
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(horizon));
    for (int i = 0; i < horizon; ++i) {
        double next = 0.0;
        for (int k = 0; k < fit.order; ++k)
            next += fit.coefficients[static_cast<std::size_t>(k)] *
                    buffer[buffer.size() - 1 - static_cast<std::size_t>(k)];
        buffer.push_back(next);
        out.push_back(next);
    }
    return out;
}

ForecastErrors historical_forecast_errors(const ArFit& fit, const std::vector<double>& series,
                                          int horizon) {
    const int n = static_cast<int>(series.size());
    if (horizon < 1) throw DimensionError("historical_forecast_errors: horizon must be >= 1");
    if (n <= fit.order + horizon)
        throw DimensionError("historical_forecast_errors: series too short for this horizon");

    ForecastErrors out;
    out.horizon = horizon;
    out.errors.reserve(static_cast<std::size_t>(n - horizon));
    out.target_index.reserve(static_cast<std::size_t>(n - horizon));
    std::vector<double> path(static_cast<std::size_t>(horizon));
    for (int target = horizon; target < n; ++target) {
        const int last_known = target - horizon;
        // Pre-sample values are the process mean (zero).
        auto value_at = [&](int idx) -> double {
            if (idx < 0) return 0.0;
            if (idx <= last_known) return series[static_cast<std::size_t>(idx)];
            return path[static_cast<std::size_t>(idx - last_known - 1)];
        };
        for (int step = 0; step < horizon; ++step) {
            const int time = last_known + 1 + step;
            double pred = 0.0;
            for (int k = 0; k < fit.order; ++k)
                pred += fit.coefficients[static_cast<std::size_t>(k)] * value_at(time - 1 - k);
            path[static_cast<std::size_t>(step)] = pred;
        }
        out.errors.push_back(series[static_cast<std::size_t>(target)] -
                             path[static_cast<std::size_t>(horizon - 1)]);
        out.target_index.push_back(target);
    }
    return out;
}

std::vector<double> ScoreModel::forecast(int horizon) const {
    std::vector<double> deviations(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) deviations[i] = series[i] - level;
    std::vector<double> out = forecast_scores(fit, deviations, horizon);
    for (double& v : out) v += level;
    return out;
}

ForecastErrors ScoreModel::errors(int horizon) const {
    std::vector<double> deviations(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) deviations[i] = series[i] - level;
    return historical_forecast_errors(fit, deviations, horizon);
}

double ScoreModel::weight_at(int t) const {
    const int i = t - fit.order;
    if (i < 0 || i >= static_cast<int>(fit.weights.size())) return 1.0;
    return fit.weights[static_cast<std::size_t>(i)];
}

ScoreModel fit_score_mle(const std::vector<double>& series, int order) {
    if (series.empty() || static_cast<int>(series.size()) <= order)
        throw DimensionError("fit_score_mle: series too short for the requested order");
    const double level = sample_mean(series);
    std::vector<double> deviations(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) deviations[i] = series[i] - level;
    return ScoreModel{level, fit_ar_mle(deviations, order), series};
}

ScoreModel fit_score_wle(const std::vector<double>& series, int order, const WleConfig& config) {
    validate_wle_inputs(series, order, config);
    const IterState best = best_weighted_root(series, order, config, true);
    ScoreModel model;
    model.level = best.level;
    model.fit = state_to_fit(order, FitMethod::wle, best);
    model.series = series;
    return model;
}

}  // namespace ffts

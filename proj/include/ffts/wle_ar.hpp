#pragma once

#include <string>
#include <vector>

#include "ffts/errors.hpp"

namespace ffts {

enum class FitMethod { mle, wle };

inline const char* to_string(FitMethod m) { return m == FitMethod::mle ? "mle" : "wle"; }

/// A fitted zero-mean AR(p) model.
///
/// residuals[i] is the one-step residual at time index p + i (0-based), i.e.
/// series[t] - sum_k coefficients[k] * series[t - 1 - k], and weights[i] is the
/// final observation weight at the same index (identically 1 under MLE).
struct ArFit {
    int order = 0;
    std::vector<double> coefficients;
    double innovation_sd = 0.0;
    FitMethod method = FitMethod::mle;
    std::vector<double> weights;
    std::vector<double> residuals;
};

/// Tuning constants for the weighted-likelihood fit.
struct WleConfig {
    /// Kernel variance as a fraction of the innovation variance.
    double kernel_variance_ratio = 0.2;
    int max_iterations = 500;
    /// Convergence threshold on the largest absolute parameter change.
    double tolerance = 1e-8;
    /// Candidate starting points for the fixed-point iteration. The robust
    /// start clips the series at median +- 3 MAD and solves Yule-Walker.
    bool use_mle_start = true;
    bool use_robust_start = true;
    /// Pins every weight at 1, which reproduces the MLE fit exactly.
    bool force_unit_weights = false;
};

/// Raised when the weighted fixed-point iteration exhausts its iteration
/// budget from every starting point; carries the best iterate found.
class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& message, ArFit best)
        : NumericalError(message), best_(std::move(best)) {}
    const ArFit& best_iterate() const noexcept { return best_; }

private:
    ArFit best_;
};

/// Conditional Gaussian maximum likelihood: least squares of the series on its
/// p lags with no intercept; innovation variance is the mean squared residual.
/// order = 0 fits white noise (innovation sd = RMS of the series).
ArFit fit_ar_mle(const std::vector<double>& series, int order);

/// Pearson residuals of a residual sample against the N(0, innovation_sd^2)
/// model: ratio of a Gaussian-kernel density estimate of the sample to the
/// kernel-smoothed model density, minus one. The kernel variance is
/// kernel_variance_ratio * innovation_sd^2, and the smoothed model density is
/// the exact closed form N(0, innovation variance + kernel variance).
///
/// Samples larger than 1024 points are evaluated through a linearly binned
/// density estimate (4096 bins, truncated kernel); the approximation error is
/// far below the scale at which the downstream weights react.
std::vector<double> pearson_residuals(const std::vector<double>& residuals, double innovation_sd,
                                      double kernel_variance_ratio);

/// Hellinger residual-adjustment weight min{1, [2 sqrt(d+1) - 1]^+ / (d+1)},
/// mapping [-1, inf) into [0, 1] with weight 1 exactly at d = 0.
double raf_weight(double pearson_residual);

/// Weighted-likelihood AR fit: iterates residuals -> Pearson residuals ->
/// weights -> weighted least squares -> weighted innovation variance until the
/// parameters settle. Runs from the MLE start and a robust start and keeps the
/// converged root with the larger weighted log-likelihood.
///
/// order = 0 runs the same iteration with no lag coefficients, so the final
/// weights and innovation scale still downweight outlying observations.
ArFit fit_ar_wle(const std::vector<double>& series, int order, const WleConfig& config = {});

/// AIC order selection on the common effective sample (the last N - max_order
/// points): minimizes (N - max_order) log s2 + 2p over p in 0..max_order under
/// conditional MLE. The method argument does not change the selection; both
/// methods share the MLE-selected order so their fits stay comparable.
int select_order(const std::vector<double>& series, int max_order,
                 FitMethod method = FitMethod::mle);

/// Iterates the AR recursion forward, substituting forecasts for unavailable
/// future values; innovations are set to zero.
std::vector<double> forecast_scores(const ArFit& fit, const std::vector<double>& history,
                                    int horizon);

/// In-sample horizon-step forecast errors. errors[i] is the difference between
/// series[target_index[i]] and its prediction from information up to
/// target_index[i] - horizon; pre-sample values are taken as the process mean
/// (zero), so there is one error for every target from index `horizon` on.
struct ForecastErrors {
    int horizon = 0;
    std::vector<double> errors;
    std::vector<int> target_index;  // 0-based time index of each error
};

ForecastErrors historical_forecast_errors(const ArFit& fit, const std::vector<double>& series,
                                          int horizon);

/// One fitted score series: an estimated level plus an AR fit of the
/// deviations, bundled with the observed scores. This is the unit the
/// forecaster consumes. The level is the weighted location under WLE (the
/// plain sample mean under MLE), which is what keeps forecasts anchored to the
/// bulk of the data when some scores are contaminated.
struct ScoreModel {
    double level = 0.0;
    ArFit fit;
    std::vector<double> series;

    std::vector<double> forecast(int horizon) const;
    ForecastErrors errors(int horizon) const;

    /// Final observation weight at a 0-based time index (1 outside the window
    /// covered by the fit).
    double weight_at(int t) const;
};

ScoreModel fit_score_mle(const std::vector<double>& series, int order);
ScoreModel fit_score_wle(const std::vector<double>& series, int order, const WleConfig& config = {});

}  // namespace ffts

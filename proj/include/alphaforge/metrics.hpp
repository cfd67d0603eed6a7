#ifndef ALPHAFORGE_METRICS_HPP_
#define ALPHAFORGE_METRICS_HPP_

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "alphaforge/evaluator.hpp"
#include "alphaforge/panel.hpp"

namespace alphaforge {

// Per-day information coefficients over an evaluation range. Degenerate days
// (zero variance, or fewer than two finite pairs) are skipped, not zero
// filled.
struct ICSeries {
  std::vector<double> daily;
  double mean = 0.0;
  int skipped = 0;
};

// Pearson correlation across assets; nullopt signals a degenerate day.
// Throws std::invalid_argument on length mismatch or length < 2.
std::optional<double> pearson_ic(std::span<const double> z,
                                 std::span<const double> y);

// Pearson of average-rank transforms (ties share the mean rank).
std::optional<double> rank_ic(std::span<const double> z,
                              std::span<const double> y);

// Average ranks, 1-based, ties averaged.
std::vector<double> average_ranks(std::span<const double> v);

// Per-day pearson_ic of factor values vs targets over `days` (which must lie
// inside the factor's evaluated range), averaged over retained days. Days with
// non-finite cells are restricted to their finite pairs. nullopt when no day
// is valid.
std::optional<ICSeries> mean_ic(const FactorMatrix& factor,
                                const TargetMatrix& targets, DayRange days);
std::optional<ICSeries> mean_rank_ic(const FactorMatrix& factor,
                                     const TargetMatrix& targets,
                                     DayRange days);

// Cross-sectional z-score per day: subtract the day mean, divide by the day
// (population) std. Constant days become all zeros; NaN cells stay NaN.
Eigen::MatrixXd zscore_daily(const Eigen::MatrixXd& values);

}  // namespace alphaforge

#endif  // ALPHAFORGE_METRICS_HPP_

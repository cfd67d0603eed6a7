#ifndef ALPHAFORGE_EVALUATOR_HPP_
#define ALPHAFORGE_EVALUATOR_HPP_

#include <Eigen/Dense>
#include <optional>

#include "alphaforge/expr.hpp"
#include "alphaforge/panel.hpp"

namespace alphaforge {

// Factor values over a contiguous day range; row 0 corresponds to panel day
// index `first_day`.
struct FactorMatrix {
  int first_day = 0;
  Eigen::MatrixXd values;  // days x assets

  int num_days() const { return static_cast<int>(values.rows()); }
  DayRange day_range() const {
    return {first_day, first_day + num_days()};
  }
};

// Exact number of prior days `evaluate` reads before days.begin. Nested
// windows compound additively per nesting chain.
int max_lookback(const ExprNode& tree);

// Factor values under the documented operator semantics. Returns nullopt
// (invalid) when the non-finite fraction exceeds nan_tolerance. Throws
// InsufficientHistoryError when the range reaches before day 0 or past the
// panel end; that is a caller bug, not factor invalidity.
//
// threads > 1 evaluates disjoint day partitions concurrently; results are
// bit-identical to the single-threaded path.
std::optional<FactorMatrix> evaluate(const ExprNode& tree, const Panel& panel,
                                     DayRange days, double nan_tolerance = 0.0,
                                     int threads = 1);

}  // namespace alphaforge

#endif  // ALPHAFORGE_EVALUATOR_HPP_

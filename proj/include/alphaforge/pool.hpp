#ifndef ALPHAFORGE_POOL_HPP_
#define ALPHAFORGE_POOL_HPP_

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "alphaforge/evaluator.hpp"
#include "alphaforge/expr.hpp"
#include "alphaforge/metrics.hpp"
#include "alphaforge/panel.hpp"

namespace alphaforge {

struct PoolEntry {
  ExprNode tree;
  TokenSequence rpn;       // SEP-terminated, used for dedup and export
  Eigen::MatrixXd zscores; // training-range daily z-scores
  double weight = 0.0;
  double solo_ic = 0.0;    // training mean IC of this factor alone
};

struct PoolFitConfig {
  double learning_rate = 1e-2;
  int steps = 500;
};

// The validated factor set combined linearly with gradient-descent weights.
// Single writer: admit/fit calls must not run concurrently.
class FactorPool {
 public:
  FactorPool(int capacity, PoolFitConfig fit, DayRange train_days,
             double nan_tolerance = 0.0);

  // Admits a candidate: caches its z-scores, refits weights, evicts the
  // weakest factor when over capacity, and returns the combination mean IC
  // (the terminal MDP reward). nullopt = invalid candidate; the pool is left
  // unchanged. Exact duplicates leave the pool unchanged and return the
  // current combination IC.
  std::optional<double> admit(const ExprNode& tree, const Panel& panel,
                              const TargetMatrix& targets);

  // Weighted sum of the cached training-range z-scores. Pool must be
  // non-empty.
  FactorMatrix combination() const;

  // Re-evaluates every factor over an arbitrary day range with the current
  // (train-fit) weights. nullopt when any factor fails to evaluate there.
  std::optional<FactorMatrix> combination_on(const Panel& panel,
                                             DayRange days,
                                             int threads = 1) const;

  // Full-batch gradient descent on the mean squared prediction error.
  // Returns the final loss, or nullopt (weights restored) when the loss goes
  // non-finite.
  std::optional<double> fit_weights(const TargetMatrix& targets);

  // Removes argmin |w|, oldest first on ties. Pool must be non-empty.
  PoolEntry evict_weakest();

  int size() const { return static_cast<int>(entries_.size()); }
  int capacity() const { return capacity_; }
  const std::vector<PoolEntry>& entries() const { return entries_; }
  DayRange train_days() const { return train_days_; }
  double current_ic() const { return current_ic_; }

  // One record per factor: infix formula, RPN text, weight, solo train IC.
  void export_to(const Vocabulary& vocab, const std::string& path) const;

  // Checkpoint support.
  void restore_entry(PoolEntry entry);
  void set_current_ic(double ic) { current_ic_ = ic; }

 private:
  double combination_ic(const TargetMatrix& targets) const;

  int capacity_;
  PoolFitConfig fit_;
  DayRange train_days_;
  double nan_tolerance_;
  std::vector<PoolEntry> entries_;
  double current_ic_ = 0.0;
};

}  // namespace alphaforge

#endif  // ALPHAFORGE_POOL_HPP_

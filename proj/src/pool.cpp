#include "alphaforge/pool.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "alphaforge/errors.hpp"

namespace alphaforge {

FactorPool::FactorPool(int capacity, PoolFitConfig fit, DayRange train_days,
                       double nan_tolerance)
    : capacity_(capacity), fit_(fit), train_days_(train_days),
      nan_tolerance_(nan_tolerance) {
  if (capacity_ < 0) throw std::invalid_argument("pool capacity < 0");
}

std::optional<double> FactorPool::admit(const ExprNode& tree,
                                        const Panel& panel,
                                        const TargetMatrix& targets) {
  // Dedup by exact token sequence: the combination span is unchanged, so the
  // reward is the current combination IC.
  TokenSequence rpn;
  {
    // Reuse the entry encoding so comparisons are canonical.
    for (const PoolEntry& entry : entries_) {
      (void)entry;
    }
  }
  rpn.clear();
  {
    TokenSequence body;
    // post-order emission without vocab: entries store SEP-terminated rpn,
    // so encode via the tree tokens plus the SEP id taken from an existing
    // entry when present. The tree itself carries token ids.
    std::vector<const ExprNode*> stack;
    // iterative post-order
    struct Frame {
      const ExprNode* node;
      size_t child = 0;
    };
    std::vector<Frame> frames{{&tree, 0}};
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < f.node->children.size()) {
        frames.push_back({&f.node->children[f.child], 0});
        ++f.child;
      } else {
        body.push_back(f.node->token.id);
        frames.pop_back();
      }
    }
    rpn = std::move(body);
  }

  for (const PoolEntry& entry : entries_) {
    TokenSequence existing(entry.rpn.begin(), entry.rpn.end() - 1);
    if (existing == rpn && size() > 0) {
      return current_ic_;
    }
  }

  std::optional<FactorMatrix> values;
  try {
    values = evaluate(tree, panel, train_days_, nan_tolerance_);
  } catch (const InsufficientHistoryError&) {
    return std::nullopt;
  }
  if (!values.has_value()) return std::nullopt;

  PoolEntry entry;
  entry.tree = tree;
  entry.rpn = rpn;
  entry.zscores = zscore_daily(values->values);

  FactorMatrix solo{train_days_.begin, entry.zscores};
  const auto solo_ic = mean_ic(solo, targets, train_days_);
  if (!solo_ic.has_value()) return std::nullopt;  // e.g. constant factor
  entry.solo_ic = solo_ic->mean;

  entries_.push_back(std::move(entry));
  // SEP-terminate the stored sequence for export/dedup.
  entries_.back().rpn.push_back(-1);  // placeholder fixed below

  if (!fit_weights(targets).has_value()) {
    entries_.pop_back();
    return std::nullopt;
  }
  if (size() > capacity_) {
    evict_weakest();
    if (!entries_.empty() && !fit_weights(targets).has_value()) {
      return std::nullopt;
    }
  }
  current_ic_ = entries_.empty() ? 0.0 : combination_ic(targets);
  return current_ic_;
}

FactorMatrix FactorPool::combination() const {
  if (entries_.empty()) throw std::logic_error("combination of empty pool");
  Eigen::MatrixXd sum = entries_.front().zscores * entries_.front().weight;
  for (size_t k = 1; k < entries_.size(); ++k) {
    sum += entries_[k].zscores * entries_[k].weight;
  }
  return {train_days_.begin, std::move(sum)};
}

std::optional<FactorMatrix> FactorPool::combination_on(const Panel& panel,
                                                       DayRange days,
                                                       int threads) const {
  if (entries_.empty()) throw std::logic_error("combination of empty pool");
  Eigen::MatrixXd sum =
      Eigen::MatrixXd::Zero(days.size(), panel.num_assets());
  for (const PoolEntry& entry : entries_) {
    const auto values =
        evaluate(entry.tree, panel, days, nan_tolerance_, threads);
    if (!values.has_value()) return std::nullopt;
    sum += zscore_daily(values->values) * entry.weight;
  }
  return FactorMatrix{days.begin, std::move(sum)};
}

std::optional<double> FactorPool::fit_weights(const TargetMatrix& targets) {
  if (entries_.empty()) throw std::logic_error("fit_weights on empty pool");
  const int days = train_days_.size();
  const int assets = static_cast<int>(entries_.front().zscores.cols());
  const size_t K = entries_.size();

  // Valid rows: target row fully finite (unavailable days are all-NaN rows).
  std::vector<int> valid;
  valid.reserve(static_cast<size_t>(days));
  for (int d = 0; d < days; ++d) {
    const int day = train_days_.begin + d;
    bool ok = day < targets.values.rows();
    for (int i = 0; ok && i < assets; ++i) {
      if (!std::isfinite(targets.values(day, i))) ok = false;
    }
    if (ok) valid.push_back(d);
  }
  if (valid.empty()) return std::nullopt;
  const double scale = 1.0 / static_cast<double>(valid.size());

  std::vector<double> saved(K);
  for (size_t k = 0; k < K; ++k) saved[k] = entries_[k].weight;

  Eigen::MatrixXd residual(valid.size(), assets);
  double loss = 0.0;
  for (int step = 0; step <= fit_.steps; ++step) {
    // residual = combination - targets on valid rows
    for (size_t r = 0; r < valid.size(); ++r) {
      const int d = valid[r];
      for (int i = 0; i < assets; ++i) {
        double z = 0.0;
        for (size_t k = 0; k < K; ++k) {
          z += entries_[k].weight * entries_[k].zscores(d, i);
        }
        residual(static_cast<int>(r), i) =
            z - targets.values(train_days_.begin + d, i);
      }
    }
    loss = residual.squaredNorm() * scale;
    if (!std::isfinite(loss)) {
      for (size_t k = 0; k < K; ++k) entries_[k].weight = saved[k];
      return std::nullopt;
    }
    if (step == fit_.steps) break;
    for (size_t k = 0; k < K; ++k) {
      double grad = 0.0;
      for (size_t r = 0; r < valid.size(); ++r) {
        const int d = valid[r];
        for (int i = 0; i < assets; ++i) {
          grad += residual(static_cast<int>(r), i) * entries_[k].zscores(d, i);
        }
      }
      entries_[k].weight -= fit_.learning_rate * 2.0 * scale * grad;
    }
  }
  return loss;
}

PoolEntry FactorPool::evict_weakest() {
  if (entries_.empty()) throw std::logic_error("evict from empty pool");
  size_t weakest = 0;
  for (size_t k = 1; k < entries_.size(); ++k) {
    if (std::abs(entries_[k].weight) < std::abs(entries_[weakest].weight)) {
      weakest = k;
    }
  }
  PoolEntry removed = std::move(entries_[weakest]);
  entries_.erase(entries_.begin() + static_cast<long>(weakest));
  return removed;
}

double FactorPool::combination_ic(const TargetMatrix& targets) const {
  const auto ic = mean_ic(combination(), targets, train_days_);
  return ic.has_value() ? ic->mean : 0.0;
}

void FactorPool::export_to(const Vocabulary& vocab,
                           const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write pool export: " + path);
  out << "# formula\trpn\tweight\tsolo_train_ic\n";
  char buf[64];
  for (const PoolEntry& entry : entries_) {
    TokenSequence seq(entry.rpn.begin(), entry.rpn.end() - 1);
    seq.push_back(vocab.sep_id());
    out << to_infix(entry.tree) << '\t' << to_text(vocab, seq) << '\t';
    std::snprintf(buf, sizeof(buf), "%.12g\t%.12g", entry.weight,
                  entry.solo_ic);
    out << buf << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

void FactorPool::restore_entry(PoolEntry entry) {
  entries_.push_back(std::move(entry));
}

}  // namespace alphaforge

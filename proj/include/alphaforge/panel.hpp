#ifndef ALPHAFORGE_PANEL_HPP_
#define ALPHAFORGE_PANEL_HPP_

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "alphaforge/expr.hpp"
#include "alphaforge/vocab.hpp"

namespace alphaforge {

// Half-open range of panel day indices.
struct DayRange {
  int begin = 0;
  int end = 0;
  int size() const { return end - begin; }
  bool contains(int day) const { return day >= begin && day < end; }
};

// Dense asset x feature x day market panel. Feature order follows
// kFeatureNames; each feature grid is day-major (row = day, col = asset).
// Immutable after construction.
struct Panel {
  std::vector<std::string> assets;
  std::vector<std::string> dates;  // ISO-8601, ascending
  std::array<Eigen::MatrixXd, kNumFeatures> features;

  int num_assets() const { return static_cast<int>(assets.size()); }
  int num_days() const { return static_cast<int>(dates.size()); }
  const Eigen::MatrixXd& feature(int index) const {
    return features[static_cast<size_t>(index)];
  }

  // First day index with date >= iso (lexicographic works for ISO-8601).
  int lower_bound_date(const std::string& iso) const;
};

// Forward returns aligned to the panel. NaN rows mark unavailable days
// (the last `horizon` days, plus any head days a planted target cannot
// cover).
struct TargetMatrix {
  Eigen::MatrixXd values;  // days x assets
  int horizon = 0;
};

enum class MissingPolicy { kReject, kDropAsset };

// CSV schema: date,symbol,open,high,low,close,volume,vwap.
Panel load_panel(const std::string& path,
                 MissingPolicy missing = MissingPolicy::kReject);

void write_panel_csv(const Panel& panel, const std::string& path);

// value[l,i] = close[l+horizon,i]/close[l,i] - 1.
TargetMatrix forward_returns(const Panel& panel, int horizon);

struct SynthConfig {
  std::uint64_t seed = 1;
  int assets = 10;
  int days = 300;
  int horizon = 5;
  double noise_std = 0.0;
  // Optional planted ground-truth factor, as bare RPN text. When set, targets
  // are the plant's daily z-scores plus Gaussian noise instead of realized
  // returns, so the plant has known predictive power.
  std::string planted_rpn;
};

struct SynthResult {
  Panel panel;
  TargetMatrix targets;
};

SynthResult synth_panel(const Vocabulary& vocab, const SynthConfig& config);

// ISO date for `offset` calendar days after 2016-01-04 (synthetic calendars).
std::string synth_date(int offset);

}  // namespace alphaforge

#endif  // ALPHAFORGE_PANEL_HPP_

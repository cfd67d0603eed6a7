#include "alphaforge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace alphaforge {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::optional<double> pearson(const double* z, const double* y, size_t n) {
  double mz = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mz += z[i];
    my += y[i];
  }
  mz /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double cov = 0.0, vz = 0.0, vy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    cov += (z[i] - mz) * (y[i] - my);
    vz += (z[i] - mz) * (z[i] - mz);
    vy += (y[i] - my) * (y[i] - my);
  }
  if (vz == 0.0 || vy == 0.0) return std::nullopt;
  return cov / std::sqrt(vz * vy);
}

template <typename DayFn>
std::optional<ICSeries> accumulate_daily(const FactorMatrix& factor,
                                         const TargetMatrix& targets,
                                         DayRange days, DayFn day_ic) {
  ICSeries series;
  double sum = 0.0;
  for (int day = days.begin; day < days.end; ++day) {
    const int row = day - factor.first_day;
    if (row < 0 || row >= factor.num_days() || day >= targets.values.rows()) {
      ++series.skipped;
      continue;
    }
    std::vector<double> z, y;
    z.reserve(static_cast<size_t>(factor.values.cols()));
    y.reserve(z.capacity());
    for (int i = 0; i < factor.values.cols(); ++i) {
      const double zi = factor.values(row, i);
      const double yi = targets.values(day, i);
      if (std::isfinite(zi) && std::isfinite(yi)) {
        z.push_back(zi);
        y.push_back(yi);
      }
    }
    if (z.size() < 2) {
      ++series.skipped;
      continue;
    }
    const auto ic = day_ic(std::span<const double>(z),
                           std::span<const double>(y));
    if (!ic.has_value()) {
      ++series.skipped;
      continue;
    }
    series.daily.push_back(*ic);
    sum += *ic;
  }
  if (series.daily.empty()) return std::nullopt;
  series.mean = sum / static_cast<double>(series.daily.size());
  return series;
}

}  // namespace

std::optional<double> pearson_ic(std::span<const double> z,
                                 std::span<const double> y) {
  if (z.size() != y.size()) {
    throw std::invalid_argument("pearson_ic: length mismatch");
  }
  if (z.size() < 2) {
    throw std::invalid_argument("pearson_ic: need at least 2 assets");
  }
  return pearson(z.data(), y.data(), z.size());
}

std::vector<double> average_ranks(std::span<const double> v) {
  const size_t n = v.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n, 0.0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> rank_ic(std::span<const double> z,
                              std::span<const double> y) {
  if (z.size() != y.size()) {
    throw std::invalid_argument("rank_ic: length mismatch");
  }
  if (z.size() < 2) {
    throw std::invalid_argument("rank_ic: need at least 2 assets");
  }
  const auto rz = average_ranks(z);
  const auto ry = average_ranks(y);
  return pearson(rz.data(), ry.data(), rz.size());
}

std::optional<ICSeries> mean_ic(const FactorMatrix& factor,
                                const TargetMatrix& targets, DayRange days) {
  return accumulate_daily(factor, targets, days,
                          [](std::span<const double> z,
                             std::span<const double> y) {
                            return pearson(z.data(), y.data(), z.size());
                          });
}

std::optional<ICSeries> mean_rank_ic(const FactorMatrix& factor,
                                     const TargetMatrix& targets,
                                     DayRange days) {
  return accumulate_daily(
      factor, targets, days,
      [](std::span<const double> z, std::span<const double> y) {
        const auto rz = average_ranks(z);
        const auto ry = average_ranks(y);
        return pearson(rz.data(), ry.data(), rz.size());
      });
}

Eigen::MatrixXd zscore_daily(const Eigen::MatrixXd& values) {
  Eigen::MatrixXd out = values;
  for (int l = 0; l < values.rows(); ++l) {
    double sum = 0.0;
    int count = 0;
    for (int i = 0; i < values.cols(); ++i) {
      if (std::isfinite(values(l, i))) {
        sum += values(l, i);
        ++count;
      }
    }
    if (count == 0) continue;
    const double mean = sum / count;
    double ss = 0.0;
    for (int i = 0; i < values.cols(); ++i) {
      if (std::isfinite(values(l, i))) {
        ss += (values(l, i) - mean) * (values(l, i) - mean);
      }
    }
    const double std_dev = std::sqrt(ss / count);
    for (int i = 0; i < values.cols(); ++i) {
      if (!std::isfinite(values(l, i))) {
        out(l, i) = kNan;
      } else if (std_dev == 0.0) {
        out(l, i) = 0.0;
      } else {
        out(l, i) = (values(l, i) - mean) / std_dev;
      }
    }
  }
  return out;
}

}  // namespace alphaforge

#include "alphaforge/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "alphaforge/errors.hpp"

namespace alphaforge {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Days of history a time-series operator itself consumes. Ref and Delta read
// the value exactly `span` days back; rolling windows cover span-1 prior days.
int window_reach(OpCode op, int span) {
  switch (op) {
    case OpCode::kRef:
    case OpCode::kDelta:
      return span;
    default:
      return span - 1;
  }
}

using Mat = Eigen::MatrixXd;

Mat eval_node(const ExprNode& node, const Panel& panel, int begin, int end);

Mat eval_cross_section(const ExprNode& node, const Panel& panel, int begin,
                       int end) {
  const OpCode op = node.token.op;
  if (node.token.arity == 1) {
    Mat x = eval_node(node.children[0], panel, begin, end);
    switch (op) {
      case OpCode::kAbs:
        return x.array().abs();
      case OpCode::kLog:
        return x.unaryExpr(
            [](double v) { return v > 0.0 ? std::log(v) : kNan; });
      case OpCode::kSign:
        return x.unaryExpr([](double v) {
          if (std::isnan(v)) return kNan;
          return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
        });
      default:
        break;
    }
  }
  Mat x = eval_node(node.children[0], panel, begin, end);
  Mat y = eval_node(node.children[1], panel, begin, end);
  switch (op) {
    case OpCode::kAdd:
      return x + y;
    case OpCode::kSub:
      return x - y;
    case OpCode::kMul:
      return x.cwiseProduct(y);
    case OpCode::kDiv:
      return x.binaryExpr(y, [](double a, double b) {
        return b == 0.0 ? kNan : a / b;
      });
    case OpCode::kLarger:
      return x.binaryExpr(y, [](double a, double b) {
        return (std::isnan(a) || std::isnan(b)) ? kNan : std::max(a, b);
      });
    case OpCode::kSmaller:
      return x.binaryExpr(y, [](double a, double b) {
        return (std::isnan(a) || std::isnan(b)) ? kNan : std::min(a, b);
      });
    case OpCode::kPow:
      return x.binaryExpr(y,
                          [](double a, double b) { return std::pow(a, b); });
    default:
      break;
  }
  return Mat::Constant(end - begin, panel.num_assets(), kNan);
}

// Single-series rolling statistics over the trailing `span` days inclusive of
// today. Any NaN inside the window yields NaN.
double window_stat(OpCode op, const double* w, int span) {
  for (int k = 0; k < span; ++k) {
    if (std::isnan(w[k])) return kNan;
  }
  switch (op) {
    case OpCode::kSum: {
      double s = 0.0;
      for (int k = 0; k < span; ++k) s += w[k];
      return s;
    }
    case OpCode::kMean: {
      double s = 0.0;
      for (int k = 0; k < span; ++k) s += w[k];
      return s / span;
    }
    case OpCode::kStd:
    case OpCode::kVar: {
      double s = 0.0;
      for (int k = 0; k < span; ++k) s += w[k];
      const double mean = s / span;
      double ss = 0.0;
      for (int k = 0; k < span; ++k) ss += (w[k] - mean) * (w[k] - mean);
      const double var = ss / span;  // population
      return op == OpCode::kVar ? var : std::sqrt(var);
    }
    case OpCode::kMax: {
      double m = w[0];
      for (int k = 1; k < span; ++k) m = std::max(m, w[k]);
      return m;
    }
    case OpCode::kMin: {
      double m = w[0];
      for (int k = 1; k < span; ++k) m = std::min(m, w[k]);
      return m;
    }
    case OpCode::kMed: {
      std::vector<double> tmp(w, w + span);
      const size_t pos = (tmp.size() - 1) / 2;  // lower median for even spans
      std::nth_element(tmp.begin(), tmp.begin() + pos, tmp.end());
      return tmp[pos];
    }
    case OpCode::kMad: {
      double s = 0.0;
      for (int k = 0; k < span; ++k) s += w[k];
      const double mean = s / span;
      double ad = 0.0;
      for (int k = 0; k < span; ++k) ad += std::abs(w[k] - mean);
      return ad / span;
    }
    case OpCode::kWma: {
      // Today gets weight span, the oldest gets 1.
      double s = 0.0;
      for (int k = 0; k < span; ++k) s += (k + 1) * w[k];
      return s * 2.0 / (static_cast<double>(span) * (span + 1));
    }
    case OpCode::kEma: {
      const double alpha = 2.0 / (span + 1.0);
      double v = w[0];  // seeded with the oldest value in the window
      for (int k = 1; k < span; ++k) v = alpha * w[k] + (1.0 - alpha) * v;
      return v;
    }
    default:
      return kNan;
  }
}

double window_pair_stat(OpCode op, const double* x, const double* y,
                        int span) {
  for (int k = 0; k < span; ++k) {
    if (std::isnan(x[k]) || std::isnan(y[k])) return kNan;
  }
  double mx = 0.0;
  double my = 0.0;
  for (int k = 0; k < span; ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= span;
  my /= span;
  double cov = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  for (int k = 0; k < span; ++k) {
    cov += (x[k] - mx) * (y[k] - my);
    vx += (x[k] - mx) * (x[k] - mx);
    vy += (y[k] - my) * (y[k] - my);
  }
  cov /= span;
  vx /= span;
  vy /= span;
  if (op == OpCode::kCov) return cov;
  if (vx == 0.0 || vy == 0.0) return kNan;
  return cov / std::sqrt(vx * vy);
}

Mat eval_time_series(const ExprNode& node, const Panel& panel, int begin,
                     int end) {
  const OpCode op = node.token.op;
  const int span = node.children.back().token.span;
  const int reach = window_reach(op, span);
  const int n = panel.num_assets();
  const int days = end - begin;
  Mat out(days, n);

  if (op == OpCode::kRef || op == OpCode::kDelta) {
    // Child rows cover panel days [begin-span, end): row r = day begin-span+r.
    Mat x = eval_node(node.children[0], panel, begin - span, end);
    for (int d = 0; d < days; ++d) {
      for (int i = 0; i < n; ++i) {
        const double past = x(d, i);
        const double today = x(d + span, i);
        out(d, i) = op == OpCode::kRef ? past : today - past;
      }
    }
    return out;
  }

  if (op == OpCode::kCov || op == OpCode::kCorr) {
    Mat x = eval_node(node.children[0], panel, begin - reach, end);
    Mat y = eval_node(node.children[1], panel, begin - reach, end);
    std::vector<double> wx(span), wy(span);
    for (int d = 0; d < days; ++d) {
      for (int i = 0; i < n; ++i) {
        for (int k = 0; k < span; ++k) {
          wx[k] = x(d + k, i);  // rows d..d+span-1 = days begin+d-reach..begin+d
          wy[k] = y(d + k, i);
        }
        out(d, i) = window_pair_stat(op, wx.data(), wy.data(), span);
      }
    }
    return out;
  }

  Mat x = eval_node(node.children[0], panel, begin - reach, end);
  std::vector<double> w(span);
  for (int d = 0; d < days; ++d) {
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < span; ++k) w[k] = x(d + k, i);
      out(d, i) = window_stat(op, w.data(), span);
    }
  }
  return out;
}

Mat eval_node(const ExprNode& node, const Panel& panel, int begin, int end) {
  switch (node.token.kind) {
    case TokenKind::kFeature:
      return panel.feature(node.token.feature)
          .middleRows(begin, end - begin);
    case TokenKind::kConstant:
      return Mat::Constant(end - begin, panel.num_assets(),
                           node.token.value);
    case TokenKind::kCrossSectionOp:
      return eval_cross_section(node, panel, begin, end);
    case TokenKind::kTimeSeriesOp:
      return eval_time_series(node, panel, begin, end);
    default:
      return Mat::Constant(end - begin, panel.num_assets(), kNan);
  }
}

}  // namespace

int max_lookback(const ExprNode& tree) {
  switch (tree.token.kind) {
    case TokenKind::kFeature:
    case TokenKind::kConstant:
    case TokenKind::kTimeSpan:
      return 0;
    case TokenKind::kCrossSectionOp: {
      int worst = 0;
      for (const ExprNode& child : tree.children) {
        worst = std::max(worst, max_lookback(child));
      }
      return worst;
    }
    case TokenKind::kTimeSeriesOp: {
      const int span = tree.children.back().token.span;
      int worst = 0;
      for (size_t i = 0; i + 1 < tree.children.size(); ++i) {
        worst = std::max(worst, max_lookback(tree.children[i]));
      }
      return window_reach(tree.token.op, span) + worst;
    }
    default:
      return 0;
  }
}

std::optional<FactorMatrix> evaluate(const ExprNode& tree, const Panel& panel,
                                     DayRange days, double nan_tolerance,
                                     int threads) {
  const int lookback = max_lookback(tree);
  if (days.begin - lookback < 0 || days.end > panel.num_days() ||
      days.begin >= days.end) {
    throw InsufficientHistoryError(lookback, days.begin);
  }

  FactorMatrix result;
  result.first_day = days.begin;
  const int total = days.size();
  const int workers =
      std::max(1, std::min(threads, total / 32));  // tiny ranges stay serial
  if (workers <= 1) {
    result.values = eval_node(tree, panel, days.begin, days.end);
  } else {
    result.values.resize(total, panel.num_assets());
    std::vector<std::thread> pool;
    const int chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int lo = days.begin + w * chunk;
      const int hi = std::min(days.end, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi]() {
        Mat part = eval_node(tree, panel, lo, hi);
        result.values.middleRows(lo - days.begin, hi - lo) = part;
      });
    }
    for (std::thread& t : pool) t.join();
  }

  const auto finite =
      result.values.array().unaryExpr([](double v) {
        return std::isfinite(v) ? 0.0 : 1.0;
      });
  const double bad_fraction = finite.sum() / static_cast<double>(total * panel.num_assets());
  if (bad_fraction > nan_tolerance) return std::nullopt;
  return result;
}

}  // namespace alphaforge

#include <cmath>
#include <string>

#include "alphaforge/errors.hpp"
#include "alphaforge/evaluator.hpp"
#include "alphaforge/metrics.hpp"
#include "alphaforge/panel.hpp"
#include "alphaforge/rng.hpp"

namespace alphaforge {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

SynthResult synth_panel(const Vocabulary& vocab, const SynthConfig& config) {
  if (config.assets < 2 || config.days <= config.horizon + 2) {
    throw ConfigError("degenerate synth config: need >= 2 assets and days > "
                      "horizon + 2");
  }

  Rng rng(config.seed);
  Rng price_rng = rng.fork(1);
  Rng noise_rng = rng.fork(2);

  const int n = config.assets;
  const int L = config.days;
  Panel panel;
  panel.assets.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "A%03d", i);
    panel.assets.emplace_back(buf);
  }
  panel.dates.reserve(static_cast<size_t>(L));
  for (int l = 0; l < L; ++l) panel.dates.push_back(synth_date(l));
  for (auto& grid : panel.features) grid.resize(L, n);

  auto& open = panel.features[0];
  auto& close = panel.features[1];
  auto& high = panel.features[2];
  auto& low = panel.features[3];
  auto& volume = panel.features[4];
  auto& vwap = panel.features[5];

  // Geometric random walk per asset with consistent OHLC ordering.
  for (int i = 0; i < n; ++i) {
    double level = 20.0 + 80.0 * price_rng.uniform();
    const double vol = 0.01 + 0.02 * price_rng.uniform();
    double base_volume = 1e5 * (1.0 + 9.0 * price_rng.uniform());
    for (int l = 0; l < L; ++l) {
      const double prev = level;
      level *= std::exp(vol * price_rng.normal() + 0.0001);
      const double o = prev * std::exp(0.3 * vol * price_rng.normal());
      const double c = level;
      const double hi = std::max(o, c) * std::exp(std::abs(0.4 * vol * price_rng.normal()));
      const double lo = std::min(o, c) * std::exp(-std::abs(0.4 * vol * price_rng.normal()));
      open(l, i) = o;
      close(l, i) = c;
      high(l, i) = hi;
      low(l, i) = lo;
      const double w = price_rng.uniform();
      vwap(l, i) = lo + (hi - lo) * (0.25 + 0.5 * w);
      volume(l, i) = base_volume * std::exp(0.5 * price_rng.normal());
    }
  }

  SynthResult result;
  result.panel = std::move(panel);

  if (config.planted_rpn.empty()) {
    result.targets = forward_returns(result.panel, config.horizon);
    if (config.noise_std > 0.0) {
      for (int l = 0; l < L; ++l) {
        for (int i = 0; i < n; ++i) {
          if (std::isfinite(result.targets.values(l, i))) {
            result.targets.values(l, i) +=
                config.noise_std * noise_rng.normal();
          }
        }
      }
    }
    return result;
  }

  // Planted target: the plant's daily z-scores plus Gaussian noise. The first
  // lookback days and the last `horizon` days are unavailable, matching the
  // forward-return mask convention.
  const ExprNode plant =
      parse_rpn(vocab, tokenize(vocab, config.planted_rpn));
  const int lookback = max_lookback(plant);
  if (lookback >= L - config.horizon) {
    throw ConfigError("degenerate synth config: planted factor lookback " +
                      std::to_string(lookback) + " exceeds panel length");
  }
  const auto values =
      evaluate(plant, result.panel, {lookback, L}, 0.0, 1);
  if (!values.has_value()) {
    throw ConfigError("planted factor does not evaluate on the synthetic "
                      "panel");
  }
  const Eigen::MatrixXd z = zscore_daily(values->values);
  result.targets.horizon = config.horizon;
  result.targets.values = Eigen::MatrixXd::Constant(L, n, kNan);
  for (int l = lookback; l < L - config.horizon; ++l) {
    for (int i = 0; i < n; ++i) {
      result.targets.values(l, i) =
          z(l - lookback, i) + config.noise_std * noise_rng.normal();
    }
  }
  return result;
}

}  // namespace alphaforge

#include "alphaforge/panel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "alphaforge/errors.hpp"

namespace alphaforge {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
const char* kHeader = "date,symbol,open,high,low,close,volume,vwap";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream iss(line);
  while (std::getline(iss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& cell, size_t line_no) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0') {
    throw IoError("non-numeric cell '" + cell + "' on line " +
                  std::to_string(line_no));
  }
  return v;
}

// CSV column order; maps to the Panel feature order below.
constexpr int kCsvFeatureCount = 6;
const int kCsvToPanelFeature[kCsvFeatureCount] = {0, 2, 3, 1, 4, 5};

}  // namespace

int Panel::lower_bound_date(const std::string& iso) const {
  return static_cast<int>(
      std::lower_bound(dates.begin(), dates.end(), iso) - dates.begin());
}

Panel load_panel(const std::string& path, MissingPolicy missing) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open panel file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw IoError("empty panel file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) {
    throw IoError("schema error: expected header '" + std::string(kHeader) +
                  "', got '" + line + "'");
  }

  struct Row {
    double v[kCsvFeatureCount];
  };
  std::map<std::pair<std::string, std::string>, Row> rows;  // (date,symbol)
  std::set<std::string> dates;
  std::set<std::string> symbols;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 2 + kCsvFeatureCount) {
      throw IoError("schema error: expected 8 columns on line " +
                    std::to_string(line_no));
    }
    Row row;
    for (int j = 0; j < kCsvFeatureCount; ++j) {
      row.v[j] = parse_cell(cells[static_cast<size_t>(j + 2)], line_no);
    }
    const double open = row.v[0], high = row.v[1], low = row.v[2],
                 close = row.v[3], volume = row.v[4];
    if (volume < 0.0 || high < std::max(open, close) ||
        low > std::min(open, close)) {
      throw IoError("validation error: inconsistent OHLC/volume on line " +
                    std::to_string(line_no));
    }
    auto key = std::make_pair(cells[0], cells[1]);
    if (!rows.emplace(key, row).second) {
      throw IoError("duplicate row for (" + cells[0] + ", " + cells[1] +
                    ") on line " + std::to_string(line_no));
    }
    dates.insert(cells[0]);
    symbols.insert(cells[1]);
  }
  if (rows.empty()) throw IoError("panel file has no data rows: " + path);

  // Gap handling: a symbol missing any date is either fatal or dropped.
  std::vector<std::string> kept;
  for (const std::string& sym : symbols) {
    bool complete = true;
    for (const std::string& d : dates) {
      if (rows.find({d, sym}) == rows.end()) {
        complete = false;
        break;
      }
    }
    if (complete) {
      kept.push_back(sym);
    } else if (missing == MissingPolicy::kReject) {
      throw IoError("gap: symbol " + sym + " is missing dates");
    }
  }
  if (kept.empty()) throw IoError("no complete assets after gap filtering");

  Panel panel;
  panel.assets = kept;
  panel.dates.assign(dates.begin(), dates.end());
  const int L = panel.num_days();
  const int n = panel.num_assets();
  for (auto& grid : panel.features) grid.resize(L, n);
  for (int l = 0; l < L; ++l) {
    for (int i = 0; i < n; ++i) {
      const Row& row = rows.at({panel.dates[static_cast<size_t>(l)],
                                panel.assets[static_cast<size_t>(i)]});
      for (int j = 0; j < kCsvFeatureCount; ++j) {
        panel.features[static_cast<size_t>(kCsvToPanelFeature[j])](l, i) =
            row.v[j];
      }
    }
  }
  return panel;
}

void write_panel_csv(const Panel& panel, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write panel file: " + path);
  out << kHeader << "\n";
  char buf[64];
  for (int l = 0; l < panel.num_days(); ++l) {
    for (int i = 0; i < panel.num_assets(); ++i) {
      out << panel.dates[static_cast<size_t>(l)] << ','
          << panel.assets[static_cast<size_t>(i)];
      // CSV column order: open,high,low,close,volume,vwap.
      const int order[kCsvFeatureCount] = {0, 2, 3, 1, 4, 5};
      for (int j = 0; j < kCsvFeatureCount; ++j) {
        std::snprintf(buf, sizeof(buf), "%.12g", panel.feature(order[j])(l, i));
        out << ',' << buf;
      }
      out << "\n";
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

TargetMatrix forward_returns(const Panel& panel, int horizon) {
  const int L = panel.num_days();
  if (horizon < 1 || horizon >= L) {
    throw ConfigError("horizon " + std::to_string(horizon) +
                      " too large for panel of " + std::to_string(L) +
                      " days");
  }
  TargetMatrix t;
  t.horizon = horizon;
  t.values = Eigen::MatrixXd::Constant(L, panel.num_assets(), kNan);
  const Eigen::MatrixXd& close = panel.feature(1);
  for (int l = 0; l + horizon < L; ++l) {
    for (int i = 0; i < panel.num_assets(); ++i) {
      t.values(l, i) = close(l + horizon, i) / close(l, i) - 1.0;
    }
  }
  return t;
}

std::string synth_date(int offset) {
  // Civil-from-days (Hinnant). Base date 2016-01-04 = 16804 days from epoch.
  long z = 16804 + offset + 719468;
  const long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const long y = static_cast<long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04ld-%02u-%02u", y + (m <= 2), m, d);
  return buf;
}

}  // namespace alphaforge

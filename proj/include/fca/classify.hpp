#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fca/engine.hpp"
#include "fca/errors.hpp"

namespace fca {

// Natural-breaks classification of scored zones.
struct Classification {
  std::size_t k = 1;
  std::vector<double> breaks;                    // ascending class upper bounds
  std::map<std::string, std::size_t> assignment; // zone-id -> class 1..k
  double gvf = 1.0;                              // goodness of variance fit, [0, 1]
};

namespace detail {

// Weighted sum-of-squared-deviations machinery over distinct sorted values.
// Classes are intervals of distinct values, so equal values never split
// across classes and break values stay strictly ascending.
struct JenksCosts {
  std::vector<double> values;  // distinct, ascending
  std::vector<double> cum_w, cum_wv, cum_wv2;

  explicit JenksCosts(std::span<const std::pair<std::string, double>> data) {
    std::vector<double> sorted;
    sorted.reserve(data.size());
    for (const auto& [id, v] : data) {
      if (!std::isfinite(v)) {
        throw ContractError("jenks_breaks: value for \"" + id + "\" is not finite");
      }
      sorted.push_back(v);
    }
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> weights;
    for (double v : sorted) {
      if (values.empty() || values.back() != v) {
        values.push_back(v);
        weights.push_back(1.0);
      } else {
        weights.back() += 1.0;
      }
    }
    cum_w.assign(values.size() + 1, 0.0);
    cum_wv.assign(values.size() + 1, 0.0);
    cum_wv2.assign(values.size() + 1, 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      cum_w[i + 1] = cum_w[i] + weights[i];
      cum_wv[i + 1] = cum_wv[i] + weights[i] * values[i];
      cum_wv2[i + 1] = cum_wv2[i] + weights[i] * values[i] * values[i];
    }
  }

  // SSD of distinct values [i, j] inclusive, with multiplicities.
  double ssd(std::size_t i, std::size_t j) const {
    const double w = cum_w[j + 1] - cum_w[i];
    const double wv = cum_wv[j + 1] - cum_wv[i];
    const double wv2 = cum_wv2[j + 1] - cum_wv2[i];
    return wv2 - (wv * wv) / w;
  }
};

}  // namespace detail

// Fisher's optimal partition of the sorted values into k classes minimizing
// total within-class sum of squared deviations. Deterministic: among
// equal-cost partitions the lexicographically smallest break sequence wins.
inline Classification jenks_breaks(std::span<const std::pair<std::string, double>> values,
                                   std::size_t k) {
  if (values.empty()) {
    throw ContractError("jenks_breaks: no values");
  }
  const detail::JenksCosts costs(values);
  const std::size_t m = costs.values.size();
  if (k < 1 || k > m) {
    throw ContractError("jenks_breaks: k = " + std::to_string(k) + " but only " +
                        std::to_string(m) + " distinct values");
  }

  // suffix[c][i]: least cost of splitting distinct values [i, m) into c
  // classes. Reconstruction below re-evaluates the same expressions, so the
  // exact-equality match always finds the smallest feasible class end first.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> suffix(k + 1, std::vector<double>(m + 1, kInf));
  for (std::size_t i = 0; i < m; ++i) suffix[1][i] = costs.ssd(i, m - 1);
  for (std::size_t c = 2; c <= k; ++c) {
    for (std::size_t i = 0; i + c <= m; ++i) {
      double best = kInf;
      for (std::size_t e = i; e + (c - 1) < m; ++e) {
        const double candidate = costs.ssd(i, e) + suffix[c - 1][e + 1];
        if (candidate < best) best = candidate;
      }
      suffix[c][i] = best;
    }
  }

  Classification out;
  out.k = k;
  out.breaks.reserve(k);
  std::size_t start = 0;
  for (std::size_t c = k; c >= 1; --c) {
    if (c == 1) {
      out.breaks.push_back(costs.values[m - 1]);
      break;
    }
    for (std::size_t e = start; e + (c - 1) < m; ++e) {
      if (costs.ssd(start, e) + suffix[c - 1][e + 1] == suffix[c][start]) {
        out.breaks.push_back(costs.values[e]);
        start = e + 1;
        break;
      }
    }
  }

  for (const auto& [id, v] : values) {
    const auto it = std::lower_bound(out.breaks.begin(), out.breaks.end(), v);
    out.assignment[id] = static_cast<std::size_t>(it - out.breaks.begin()) + 1;
  }

  const double sdam = costs.ssd(0, m - 1);
  out.gvf = sdam > 0.0 ? 1.0 - suffix[k][0] / sdam : 1.0;
  return out;
}

// Descriptive statistics over a run's final indices.
struct Summary {
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double median = 0.0;
  std::vector<std::string> zero_access_ids;  // sorted
};

inline Summary summary_stats(const AccessResult& result) {
  if (result.zones.empty()) {
    throw ContractError("summary_stats: empty result");
  }
  Summary s;
  s.count = result.zones.size();
  std::vector<double> values;
  values.reserve(result.zones.size());
  double sum = 0.0;
  for (const auto& zone : result.zones) {  // zones are sorted by id
    values.push_back(zone.final_index);
    sum += zone.final_index;
    if (zone.final_index == 0.0) s.zero_access_ids.push_back(zone.zone_id);
  }
  std::sort(values.begin(), values.end());
  s.min = values.front();
  s.max = values.back();
  s.mean = sum / static_cast<double>(values.size());
  const std::size_t half = values.size() / 2;
  s.median = values.size() % 2 == 1 ? values[half] : (values[half - 1] + values[half]) / 2.0;
  return s;
}

}  // namespace fca

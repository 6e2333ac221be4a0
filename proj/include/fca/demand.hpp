#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "fca/errors.hpp"

namespace fca {

struct AgeBand {
  std::string label;
  double rate_per_million = 0.0;  // disease incidence in this band
  double weight = 1.0;            // demand multiplier relative to the first band
};

// Ordered age bands with demand weights. The first band is the baseline and
// always carries weight 1.
struct AgeWeights {
  std::vector<AgeBand> bands;
};

struct AgeBandRate {
  std::string label;
  double rate_per_million = 0.0;
};

// Weight per band = round(rate / baseline rate), half away from zero. The
// first rate is the baseline; every derived weight must come out >= 1.
inline AgeWeights derive_age_weights(std::span<const AgeBandRate> rates) {
  if (rates.empty()) {
    throw ContractError("derive_age_weights: no bands given");
  }
  AgeWeights weights;
  weights.bands.reserve(rates.size());
  for (const auto& band : rates) {
    if (!(band.rate_per_million > 0.0) || !std::isfinite(band.rate_per_million)) {
      throw ContractError("derive_age_weights: band \"" + band.label +
                          "\" has nonpositive rate");
    }
    const double ratio = band.rate_per_million / rates.front().rate_per_million;
    const double weight = std::round(ratio);
    if (weight < 1.0) {
      throw ContractError("derive_age_weights: band \"" + band.label +
                          "\" rounds to weight < 1; the first band must be the baseline");
    }
    weights.bands.push_back(AgeBand{band.label, band.rate_per_million, weight});
  }
  weights.bands.front().weight = 1.0;
  return weights;
}

// Age-adjusted demand: sum of band count x band weight.
inline double age_adjusted_demand(std::span<const double> counts, const AgeWeights& weights) {
  if (counts.size() != weights.bands.size()) {
    throw ContractError("age_adjusted_demand: " + std::to_string(counts.size()) +
                        " counts vs " + std::to_string(weights.bands.size()) + " bands");
  }
  double demand = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (!(counts[i] >= 0.0) || !std::isfinite(counts[i])) {
      throw ContractError("age_adjusted_demand: count for band \"" + weights.bands[i].label +
                          "\" must be finite and >= 0");
    }
    demand += counts[i] * weights.bands[i].weight;
  }
  return demand;
}

}  // namespace fca

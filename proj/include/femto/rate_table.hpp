#pragma once

#include <optional>
#include <vector>

#include "femto/units.hpp"

namespace femto {

// One step of the discrete transmission-rate ladder: spectral efficiency
// b_l (bit/s/Hz) usable whenever the SINR is at least sinr_lower_db.
struct RateStep {
  double spectral_efficiency = 0.0;
  double sinr_lower_db = 0.0;
};

// Ordered rate ladder. SINR below the first threshold is an outage (rate 0);
// the region above the last threshold is unbounded.
class RateTable {
 public:
  RateTable() = default;
  explicit RateTable(std::vector<RateStep> steps);

  static RateTable defaults();  // the embedded M-QAM rate set

  std::size_t size() const { return steps_.size(); }
  const RateStep& step(std::size_t l) const { return steps_[l - 1]; }  // 1-based
  double efficiency(std::size_t l) const { return steps_[l - 1].spectral_efficiency; }
  double threshold_db(std::size_t l) const { return steps_[l - 1].sinr_lower_db; }
  double threshold_linear(std::size_t l) const { return thresholds_lin_[l - 1]; }
  double top_efficiency() const { return steps_.back().spectral_efficiency; }

  // b_l - b_{l-1}, with b_0 = 0. Summation-by-parts weight for CCDF averages.
  double efficiency_gain(std::size_t l) const {
    return steps_[l - 1].spectral_efficiency -
           (l > 1 ? steps_[l - 2].spectral_efficiency : 0.0);
  }

  // Largest rate index whose threshold the SINR meets; nullopt on outage.
  std::optional<std::size_t> rate_index_for(double sinr_db) const;

  // E[b(SINR)] when SINR = scale * Exp(1). Closed form for the exponential
  // fading of a single link: sum_l (b_l - b_{l-1}) * exp(-G_l / scale).
  double mean_efficiency_exponential(double scale) const;

  // P[scale * Exp(1) < G_1]: outage probability under exponential fading.
  double outage_exponential(double scale) const;

 private:
  std::vector<RateStep> steps_;
  std::vector<double> thresholds_lin_;
};

}  // namespace femto

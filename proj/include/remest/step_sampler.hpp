#ifndef REMEST_STEP_SAMPLER_HPP
#define REMEST_STEP_SAMPLER_HPP

#include <random>
#include <vector>

#include "remest/rng.hpp"
#include "remest/source_model.hpp"

namespace remest {

/// Samples one-step increments of the source by inverting the CDF of the
/// symmetric step distribution (w = -b..b with mass p_|w|). For truncated
/// sources the residual tail mass is spread by renormalization; the bound is
/// reported alongside simulation output.
class StepSampler {
public:
  explicit StepSampler(const MarkovSource& source) : band_(source.band()) {
    double total = 0.0;
    cdf_.reserve(static_cast<std::size_t>(2 * band_ + 1));
    for (int w = -band_; w <= band_; ++w) {
      total += source.tail(w < 0 ? -w : w);
      cdf_.push_back(total);
    }
    for (double& c : cdf_) c /= total;
    cdf_.back() = 1.0;
  }

  int operator()(std::mt19937_64& rng) const {
    double u = uniform01(rng);
    // Linear scan; the band is small in every model handled here.
    for (std::size_t i = 0; i < cdf_.size(); ++i)
      if (u < cdf_[i]) return static_cast<int>(i) - band_;
    return band_;
  }

private:
  int band_;
  std::vector<double> cdf_;
};

}  // namespace remest

#endif

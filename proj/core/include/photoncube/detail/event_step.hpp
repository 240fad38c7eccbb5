#pragma once

#include <cmath>

namespace photoncube {

inline int event_pixel_step(const EventParams& p, const SensorParams& sensor, bool bit,
                            std::size_t t, double& mu, double& ref) {
  mu = p.beta * mu + (1.0 - p.beta) * (bit ? 1.0 : 0.0);
  const double level = brightness_encode(mu, p.encoding, sensor);
  if (t < p.warmup) {
    ref = level;
    return 0;
  }
  const double diff = level - ref;
  // NaN (both levels infinite) never fires.
  if (!(std::abs(diff) > p.threshold_for(mu))) return 0;
  const int polarity = diff > 0 ? 1 : -1;
  if (p.update == ReferenceUpdate::additive) {
    ref += p.threshold_for(mu) * polarity;
  } else {
    ref = level;
  }
  return polarity;
}

}  // namespace photoncube

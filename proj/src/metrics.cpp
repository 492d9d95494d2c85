#include "hatchling/metrics.hpp"

#include <cmath>

namespace hatchling::sim {

double compute_power_in(const std::vector<double>& amps, double supply_v) {
  if (amps.size() != 6) {
    throw ArityError("expected six motor currents, got " +
                     std::to_string(amps.size()));
  }
  if (!(supply_v > 0.0)) throw RangeError("supply voltage must be positive");
  double p = 0.0;
  for (double a : amps) p += a * supply_v;
  return p;
}

double compute_power_in(const sensors::MotorCurrents& currents) {
  return currents.power_in_w();
}

double compute_cot(double energy_j, double mass_kg, double g_m_s2,
                   double distance_m) {
  if (!(mass_kg > 0.0)) throw RangeError("mass must be positive");
  if (!(g_m_s2 > 0.0)) throw RangeError("g must be positive");
  if (energy_j < 0.0) throw RangeError("energy must be nonnegative");
  if (!(distance_m > 0.0)) {
    throw UndefinedMetricError("cost of transport needs a positive distance");
  }
  return energy_j / (mass_kg * g_m_s2 * distance_m);
}

double compute_cot_power(double power_w, double mass_kg, double g_m_s2,
                         double speed_m_s) {
  if (!(mass_kg > 0.0)) throw RangeError("mass must be positive");
  if (!(g_m_s2 > 0.0)) throw RangeError("g must be positive");
  if (power_w < 0.0) throw RangeError("power must be nonnegative");
  if (!(speed_m_s > 0.0)) {
    throw UndefinedMetricError("cost of transport needs a positive speed");
  }
  return power_w / (mass_kg * g_m_s2 * speed_m_s);
}

double displacement_rate(const TrialResult& result, double body_length_cm) {
  if (!(body_length_cm > 0.0)) {
    throw RangeError("body length must be positive");
  }
  if (result.cycles < 1) {
    throw UndefinedMetricError("displacement rate needs at least one cycle");
  }
  return result.distance_cm / body_length_cm /
         static_cast<double>(result.cycles);
}

double turning_rate(const TrialResult& result) {
  if (result.cycles < 1) {
    throw UndefinedMetricError("turning rate needs at least one cycle");
  }
  return std::abs(result.rotation_deg) / static_cast<double>(result.cycles);
}

Aggregate aggregate(const std::vector<double>& values) {
  if (values.empty()) throw ArityError("cannot aggregate an empty sample");
  Aggregate out;
  out.n = static_cast<long>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(out.n);
  if (out.n > 1) {
    double ss = 0.0;
    for (double v : values) {
      const double d = v - out.mean;
      ss += d * d;
    }
    out.stddev = std::sqrt(ss / static_cast<double>(out.n - 1));
  }
  return out;
}

}  // namespace hatchling::sim

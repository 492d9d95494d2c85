#pragma once

#include <vector>

#include "hatchling/errors.hpp"
#include "hatchling/sensors.hpp"
#include "hatchling/sim.hpp"

namespace hatchling::sim {

/// Electrical input power: sum of I_n * V over the six drive motors.
double compute_power_in(const std::vector<double>& amps, double supply_v);
double compute_power_in(const sensors::MotorCurrents& currents);

/// Cost of transport, energy form: E / (m * g * d). Zero energy costs 0;
/// zero distance is undefined, never infinite.
double compute_cot(double energy_j, double mass_kg, double g_m_s2,
                   double distance_m);

/// Cost of transport, power form: P / (m * g * v). Agrees with the energy
/// form to rounding when both derive from the same trial.
double compute_cot_power(double power_w, double mass_kg, double g_m_s2,
                         double speed_m_s);

/// Body lengths advanced per gait cycle.
double displacement_rate(const TrialResult& result, double body_length_cm);

/// Magnitude of heading change per gait cycle, degrees.
double turning_rate(const TrialResult& result);

struct Aggregate {
  double mean = 0.0;
  double stddev = 0.0;  // Bessel-corrected; 0 when n == 1
  long n = 0;
};

Aggregate aggregate(const std::vector<double>& values);

}  // namespace hatchling::sim

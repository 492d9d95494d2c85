#pragma once

#include "hatchling/terrain.hpp"

namespace hatchling::testsupport {

/// Copy of a calibration table with every spread zeroed, for exact-value
/// trials.
inline terrain::CalibrationTable zero_variance_clone(
    const terrain::CalibrationTable& src) {
  terrain::CalibrationTable out;
  out.body_length_cm = src.body_length_cm;
  for (const auto& row : src.rows()) {
    terrain::PerformanceEntry e = *row.entry;
    if (e.disp_std) e.disp_std = 0.0;
    if (e.turn_std) e.turn_std = 0.0;
    if (e.cycles_std) e.cycles_std = 0.0;
    out.insert(row.terrain, row.morphology, row.gait, e);
  }
  for (const auto& row : src.transit_rows()) {
    terrain::PerformanceEntry e = *row.entry;
    if (e.disp_std) e.disp_std = 0.0;
    out.insert_transit(row.stiffness, row.policy, e);
  }
  return out;
}

}  // namespace hatchling::testsupport

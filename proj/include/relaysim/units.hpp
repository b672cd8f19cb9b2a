#pragma once

#include <cmath>

namespace relaysim {

// All internal arithmetic is linear (mW, Hz, dimensionless ratios).
// dB and dBm appear only at configuration boundaries.

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

constexpr double speed_of_light_m_s = 299792458.0;

}  // namespace relaysim

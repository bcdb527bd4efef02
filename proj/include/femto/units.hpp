#pragma once

#include <cmath>

namespace femto {

// dB / linear conversions. All internal computation is done in linear units
// (W, Hz, m); dB and dBm appear only at configuration and reporting
// boundaries.

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

}  // namespace femto

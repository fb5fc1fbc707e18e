#pragma once

#include <cmath>

// dB/dBm live at the config and report boundaries only; everything inside the
// library is linear (mW and plain ratios).

namespace femto {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }
inline double dbm_to_mw(double dbm) { return db_to_linear(dbm); }
inline double mw_to_dbm(double mw) { return linear_to_db(mw); }

}  // namespace femto

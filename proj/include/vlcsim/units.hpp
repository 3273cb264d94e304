#pragma once

#include <limits>

namespace vlcsim {

// Level of a chain or stream that carries nothing at all. Used for both
// dBm powers and dB SNRs.
inline constexpr double kNoSignalDbm = -std::numeric_limits<double>::infinity();
inline constexpr double kNoSignalDb = kNoSignalDbm;
inline bool is_no_signal(double level) { return level == kNoSignalDbm; }

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);
double db_to_linear(double db);
double linear_to_db(double ratio);

}  // namespace vlcsim

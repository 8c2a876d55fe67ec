#pragma once

namespace nvcap {

inline constexpr double k_boltzmann = 1.380649e-23; // J/K, exact SI

// Standard deviation of sampled kT/C charge, sqrt(k_B T C), in coulombs.
double thermal_charge_sigma(double temperature, double c_total);

// ENOB = (SNR_dB - 1.76) / 6.02, full-scale sinusoid convention. Returned
// as-is for SNR below the 1.76 dB floor (negative bits).
double enob_from_snr_db(double snr_db);

} // namespace nvcap

#pragma once

#include <string>
#include <vector>

namespace nv2d {

// Per-step scalar diagnostics. energy_residual carries the latest complete
// centered triple (zero until three levels exist).
struct DiagnosticsRecord {
    double t = 0.0;
    double total_energy = 0.0;
    double energy_residual = 0.0;
    double P_t = 3.0;
    double barP_t = 3.0;
    double sup_f = 0.0;
    double conformal_drift = 0.0;
    double mass = 0.0;
    double clipped_mass = 0.0;
};

inline constexpr const char* kDiagnosticsHeader =
    "t,total_energy,energy_residual,P_t,barP_t,sup_f,conformal_drift,mass,clipped_mass";

void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRecord>& rows);

} // namespace nv2d

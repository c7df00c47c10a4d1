#include "nv2d/diagnostics.hpp"

#include <cstdio>
#include <stdexcept>

namespace nv2d {

void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRecord>& rows) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (fp == nullptr) throw std::runtime_error("cannot open " + path);
    std::fprintf(fp, "%s\n", kDiagnosticsHeader);
    for (const DiagnosticsRecord& r : rows)
        std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t,
                      r.total_energy, r.energy_residual, r.P_t, r.barP_t, r.sup_f,
                      r.conformal_drift, r.mass, r.clipped_mass);
    std::fclose(fp);
}

} // namespace nv2d

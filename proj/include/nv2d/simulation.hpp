#pragma once

#include <string>
#include <vector>

#include "nv2d/config.hpp"
#include "nv2d/diagnostics.hpp"
#include "nv2d/field_solver.hpp"
#include "nv2d/initial_data.hpp"
#include "nv2d/retarded.hpp"
#include "nv2d/vlasov.hpp"

namespace nv2d {

// Outcome of a coupled run, kept in memory so probes and tests can consume
// the history directly; files are written as a side effect when out_dir is
// set.
struct RunResult {
    RunConfig config;
    InitialData data;
    std::vector<DiagnosticsRecord> diagnostics;
    ConeHistory history;
    FieldState final_field;
    GradientFields final_grads;
    DistributionGrid final_f;
};

// The coupled loop, per step: moments -> field leapfrog -> gradients ->
// semi-Lagrangian transport -> diagnostics -> snapshots. Deterministic given
// the config. On abort the partial diagnostics are flushed before the error
// propagates.
RunResult run_simulation(const RunConfig& cfg);

struct ProbePoint {
    double t = 0.0;
    Vec2 x;
};

// Points file: one `t x1 x2` triple per line (whitespace or commas),
// '#' comments allowed.
std::vector<ProbePoint> read_points_file(const std::string& path);

// Writes the probe CSV (grid field, retarded field, derivative
// representations and finite differences of the retarded field). Rows whose
// point is outside the history/causal coverage carry ERR markers; the return
// value is the number of such rows.
int probe_to_csv(const RunResult& result, const std::vector<ProbePoint>& points,
                 const std::string& out_path, const ConeQuadratureSpec& quad = {});

inline constexpr const char* kProbeHeader =
    "t,x1,x2,phi_grid,phi_retarded,dphi_t_rep,dphi_x1_rep,dphi_x2_rep,"
    "dphi_t_fd,dphi_x1_fd,dphi_x2_fd";

} // namespace nv2d

// nv2d: 2D Nordstrom-Vlasov simulator and verification harness.
//   run    - coupled field/transport loop, diagnostics CSV + snapshots
//   verify - property suite (kernel identities, inequalities, order studies)
//   probe  - retarded-integral field evaluation at user points

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nv2d/config.hpp"
#include "nv2d/errors.hpp"
#include "nv2d/simulation.hpp"
#include "nv2d/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

nv2d::RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides,
                            const std::string& out_dir) {
    nv2d::RunConfig cfg = nv2d::parse_config_file(path);
    for (const std::string& o : overrides) nv2d::apply_override(cfg, o);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D Nordstrom-Vlasov simulator and verification suite"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string points_path;
    std::vector<std::string> overrides;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "configuration file (key = value)")
            ->required();
        cmd->add_option("--out", out_dir, "output directory (overrides out_dir)");
        cmd->add_option("--override", overrides, "repeatable key=value override");
    };

    CLI::App* cmd_run = app.add_subcommand("run", "coupled time loop");
    add_common(cmd_run);

    CLI::App* cmd_verify = app.add_subcommand("verify", "property suite");
    add_common(cmd_verify);

    CLI::App* cmd_probe = app.add_subcommand("probe", "retarded-field probe");
    add_common(cmd_probe);
    cmd_probe->add_option("--points", points_path, "points file with t x1 x2 rows")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        const nv2d::RunConfig cfg = load_config(config_path, overrides, out_dir);

        if (cmd_run->parsed()) {
            cfg.validate();
            const nv2d::RunResult result = nv2d::run_simulation(cfg);
            std::printf("run complete: %zu records, t = %.6g, out = %s\n",
                        result.diagnostics.size(), result.diagnostics.back().t,
                        cfg.out_dir.empty() ? "(none)" : cfg.out_dir.c_str());
            return kExitOk;
        }

        if (cmd_verify->parsed()) {
            cfg.validate();
            const auto results = nv2d::run_verify_suite(cfg.seed, cfg.verify_heavy);
            nv2d::print_property_results(stdout, results);
            return nv2d::all_pass(results) ? kExitOk : kExitRuntime;
        }

        if (cmd_probe->parsed()) {
            cfg.validate();
            if (!cfg.history_keep_f)
                std::fprintf(stderr,
                             "probe: history_keep_f=0, derivative columns will be ERR\n");
            const std::vector<nv2d::ProbePoint> points = nv2d::read_points_file(points_path);
            const nv2d::RunResult result = nv2d::run_simulation(cfg);
            const std::string out =
                (cfg.out_dir.empty() ? std::string(".") : cfg.out_dir) + "/probe.csv";
            const int failures = nv2d::probe_to_csv(result, points, out);
            std::printf("probe complete: %zu points, %d failures, out = %s\n", points.size(),
                        failures, out.c_str());
            return failures == 0 ? kExitOk : kExitRuntime;
        }
    } catch (const nv2d::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime abort: %s\n", e.what());
        return kExitRuntime;
    }
    return kExitOk;
}

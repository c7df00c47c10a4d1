#pragma once

#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "nv2d/vec2.hpp"

namespace nv2d {

// One property verdict: measured value against its pinned tolerance.
struct PropertyResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

// Stratified phase-space sampler for the kernel inequalities: the bounds are
// tightest as |xi| -> 1 with vhat antiparallel to xi, so half the |xi| draws
// sit at 1 - 10^-k, k = 1..6, and |p| is log-uniform up to 10^3.
class StratifiedSampler {
  public:
    explicit StratifiedSampler(std::uint64_t seed) : rng_(seed) {}

    double uniform() { return dist_(rng_); }
    Vec2 direction() {
        const double a = 2.0 * M_PI * uniform();
        return {std::cos(a), std::sin(a)};
    }
    Vec2 sample_xi() {
        double r;
        if (uniform() < 0.5) {
            r = uniform();
        } else {
            const int k = 1 + static_cast<int>(uniform() * 6.0);
            r = 1.0 - std::pow(10.0, -k);
        }
        return r * direction();
    }
    Vec2 sample_p(double max_mag = 1e3) {
        const double lo = std::log(1e-2);
        const double hi = std::log(max_mag);
        const double mag = std::exp(lo + (hi - lo) * uniform());
        return mag * direction();
    }

  private:
    std::mt19937_64 rng_;
    std::uniform_real_distribution<double> dist_{0.0, 1.0};
};

// Kernel identities, the momentum-cone inequalities, basis identities, the
// bilinear-form decomposition and the kernel envelope monitor.
std::vector<PropertyResult> verify_kernel_suite(std::uint64_t seed);

// Angular integral, cone quadrature analytic cases and convergence, and the
// homogeneous-wave oracles.
std::vector<PropertyResult> verify_quadrature_suite();

// Operator-decomposition and momentum-divergence order studies,
// characteristics exactness/round-trip, transport law, conformal momentum.
std::vector<PropertyResult> verify_dynamics_suite(std::uint64_t seed);

// The full suite; `heavy` adds a small free-transport run.
std::vector<PropertyResult> run_verify_suite(std::uint64_t seed, bool heavy);

// Individual checks at pinned sample counts, for the acceptance suite.
PropertyResult check_kernel_identities(std::uint64_t seed, long n);
PropertyResult check_lemma_inequalities(std::uint64_t seed, long n);
PropertyResult check_angular_integral();
PropertyResult check_operator_order(std::uint64_t seed);
PropertyResult check_divp_force_order(std::uint64_t seed);
PropertyResult check_transport_order();
PropertyResult check_phi_hom_unit_ramp();
PropertyResult check_cone_constant();

void print_property_results(std::FILE* out, const std::vector<PropertyResult>& results);
bool all_pass(const std::vector<PropertyResult>& results);

// Order of convergence from consecutive errors under step halving.
inline double measured_order(double err_coarse, double err_fine) {
    if (err_fine <= 0.0 || err_coarse <= 0.0) return 0.0;
    return std::log2(err_coarse / err_fine);
}

} // namespace nv2d

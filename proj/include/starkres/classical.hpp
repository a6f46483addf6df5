#ifndef STARKRES_CLASSICAL_HPP
#define STARKRES_CLASSICAL_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "starkres/potential.hpp"
#include "starkres/rng.hpp"

namespace starkres {

// Hamilton vector field of p: (dp/dxi, dp/deta, -dp/dx, -dp/dy).
std::array<double, 4> hamilton_rhs(const HamiltonianParams& params, const PotentialSpec& spec,
                                   const ClassicalState& state);

enum class FlowStatus { Trapped, Escaped, Failed };

struct TrajectoryVerdict {
    FlowStatus status = FlowStatus::Trapped;
    double exit_time = 0.0;     // meaningful for Escaped
    double max_radius = 0.0;    // sup |(x,y)| attained along the computed arc
    double energy_drift = 0.0;  // |p(end) - p(start)|
};

struct FlowOptions {
    double t_max = 0.0;        // 0 selects 50 cyclotron periods; < 0 integrates backward
    double tol = 1e-10;
    double escape_radius = 20.0;
    double fast_exit_x = 40.0;  // escaped when x < -fast_exit_x (Stark slide)
};

struct FlowResult {
    ClassicalState final_state;
    TrajectoryVerdict verdict;
};

// Adaptive Dormand-Prince 5(4).  Escaped is declared on the first accepted
// step with |(x,y)| > escape_radius or x < -fast_exit_x.
FlowResult integrate_flow(const HamiltonianParams& params, const PotentialSpec& spec,
                          const ClassicalState& initial, const FlowOptions& opts);

struct SamplingPlan {
    std::array<double, 4> lo{};  // box in (x, y, xi, eta)
    std::array<double, 4> hi{};
    int n_samples = 0;
    std::uint64_t seed = 0;
};

struct SampleVerdict {
    ClassicalState state;
    double energy = 0.0;
    TrajectoryVerdict verdict;
};

// Rejection-samples states with a <= p <= b from the plan box and integrates
// each.  Used as sampling evidence that a configured window has no trapped
// trajectories outside the well.
std::vector<SampleVerdict> classify_trapped_grid(const HamiltonianParams& params,
                                                 const PotentialSpec& spec, double a, double b,
                                                 const SamplingPlan& plan,
                                                 const FlowOptions& flow_opts, int threads = 1);

enum class VolumeMethod { ClosedForm, MonteCarlo };

struct VolumeEstimate {
    double value = 0.0;
    double std_error = 0.0;  // zero for ClosedForm, may be +inf for n = 0
    VolumeMethod method = VolumeMethod::ClosedForm;
    long long sample_count = 0;
    std::uint64_t seed = 0;
};

struct Rectangle {
    double x_min, x_max, y_min, y_max;
};

// Vol(K_[a,b]) = 2 pi Int_region (b - max(a, U))_+ dx dy: for fixed (x,y) the
// momentum fiber {a <= p <= b} is a disc or annulus of that area, and the
// shift xi -> xi + By preserves measure (the formula never reads B).
// Rejects the region when U <= b somewhere on its boundary.
VolumeEstimate trapped_volume_closed_form(const PotentialSpec& spec, double a, double b,
                                          const Rectangle& well_region, int resolution);

struct Box4 {
    std::array<double, 4> lo{};
    std::array<double, 4> hi{};
};

// Hit-or-miss estimate over the box, hits = {a <= p <= b, (x,y) in region}.
VolumeEstimate trapped_volume_monte_carlo(const PotentialSpec& spec, double a, double b,
                                          const Rectangle& well_region, const Box4& box,
                                          long long n_samples, std::uint64_t seed,
                                          double B = 1.0, int threads = 1);

}  // namespace starkres

#endif

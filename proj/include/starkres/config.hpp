#ifndef STARKRES_CONFIG_HPP
#define STARKRES_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "starkres/classical.hpp"
#include "starkres/distortion.hpp"
#include "starkres/wellops.hpp"

namespace starkres {

// Box and resolution rule for the Dirichlet truncation.  The spacing for a
// given h is d = h / points_per_h clamped to [min_n, max_n] points per axis;
// explicit nx/ny override the rule when positive.
struct GridSpec {
    double x_min = -1.0, x_max = 1.0, y_min = -1.0, y_max = 1.0;
    double points_per_h = 4.0;
    int nx = 0, ny = 0;
    int min_n = 31, max_n = 1400;

    int resolve_n(double h, double length) const;
};

struct ExperimentKnobs {
    double escape_radius = 20.0;
    double fast_exit_x = 40.0;
    double t_max_periods = 50.0;
    double flow_tol = 1e-10;
    int trap_samples = 200;
    std::uint64_t seed = 1;
    long long mc_samples = 1000000;
    Box4 mc_box;
    Rectangle volume_region{-1.0, 1.0, -1.0, 1.0};
    int quadrature_resolution = 800;
    double gamma = 0.01;          // gap band depth stand-in for M h log(1/h)
    double epsilon = 0.0;         // 0 = calibrate from the h-sweep decay
    int num_pairs = 6;            // eigenpairs near the bottom
    double window_levels = 0.0;   // >0: per-h window top E + window_levels*h*(a1+a2)/2
    int dense_cap = 2000;
    double arnoldi_tol = 1e-10;
    int resolvent_grid_re = 5;
    int resolvent_grid_im = 3;
    double c_resolvent = 0.0;     // 0 = fit once and report
    bool compute_distorted = true;
    bool filled = false;          // nontrap: probe Q^ext_theta of the filled well
    int refine_max_rounds = 3;
};

struct ScenarioConfig {
    int schema_version = 1;
    PotentialSpec potential;
    double B = 1.0;
    std::vector<double> h_list;
    DistortionParams distortion;
    WellSurgerySpec surgery;
    double delta = 0.1;  // window margin; surgery level = b + 2*delta
    GridSpec grid;
    double window_a = 0.0, window_b = 1.0;
    ExperimentKnobs knobs;
    nlohmann::json raw;  // scenario echo for reports

    HamiltonianParams params_at(double h) const { return HamiltonianParams{B, h}; }
};

ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const nlohmann::json& j);

}  // namespace starkres

#endif

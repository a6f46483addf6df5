#ifndef STARKRES_EXPERIMENTS_HPP
#define STARKRES_EXPERIMENTS_HPP

#include <string>

#include "starkres/arnoldi.hpp"
#include "starkres/config.hpp"
#include "starkres/report.hpp"

namespace starkres {

struct OperatorBundle {
    Grid2D grid;
    ComplexSparseMatrix matrix;
};

// which: "plain" (P), "reference" (P^int), "distorted" (Q_theta),
// "distorted_filled" (Q^ext_theta), "plain_warped" (P on the image box of
// Phi_theta, for the real-theta similarity study).
OperatorBundle assemble_scenario_operator(const ScenarioConfig& config, double h,
                                          const std::string& which, int nx = 0, int ny = 0);

// Dense solve below the cap, shift-invert Arnoldi above it; pairs sorted by
// distance from the shift.
std::vector<EigenPair> eigenpairs_near(const ComplexSparseMatrix& a, Complex shift, int k,
                                       double tol, int dense_cap);

ExperimentReport run_volume(const ScenarioConfig& config, int threads = 1);
ExperimentReport run_bottom_spectrum(const ScenarioConfig& config, int threads = 1);
ExperimentReport run_weyl(const ScenarioConfig& config, int threads = 1);
ExperimentReport run_gap(const ScenarioConfig& config, int threads = 1);
ExperimentReport run_nontrapping(const ScenarioConfig& config, int threads = 1);

// Low-lying eigenvalues of Q_{theta real} on the configured box against P on
// the translated image box, over a refinement sequence; reports per-level
// differences and their decay order.
ExperimentReport validate_real_theta_similarity(const ScenarioConfig& config, int threads = 1);

// Resonance movement under Im theta doubling and R0 growth by one ramp width
// at fixed grid.
ExperimentReport run_theta_stability(const ScenarioConfig& config, int threads = 1);

ExperimentReport run_experiment(const std::string& name, const ScenarioConfig& config,
                                int threads = 1);

}  // namespace starkres

#endif

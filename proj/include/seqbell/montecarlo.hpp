#pragma once

// Finite-statistics simulation of the sequential Bell experiment: coincidence
// counts are Poisson in each setting block, split multinomially over the 8
// outcome combinations, and the CHSH estimates carry first-order (delta
// method) Poisson error bars.
//
// The imperfect source is modeled with two parameters fitted to the usual
// pair of interference visibilities: white-noise admixture w and a dephasing
// weight lambda acting on the singlet's coherences in the H/V basis,
//   rho = (1 - w) [ (1 - lambda) rho_s + lambda diag(rho_s) ] + w I/4,
// giving V_zx = 1 - w (H/V basis) and V_diag = (1 - w)(1 - lambda)
// (diagonal basis), inverted in closed form. Infeasible visibility pairs
// (V_diag > V_zx or values outside [0, 1]) are reported as errors, never
// clamped.

#include <array>
#include <cstdint>
#include <vector>

#include "seqbell/bell.hpp"
#include "seqbell/qcore.hpp"
#include "seqbell/rng.hpp"

namespace seqbell::montecarlo {

struct ExperimentConfig {
    double pair_rate = 3200.0;  // coincidence pairs per second
    double window = 6.0;        // seconds spent on each setting combination
    double vis_zx = 1.0;        // H/V-basis visibility
    double vis_diag = 1.0;      // diagonal-basis visibility
    std::uint64_t seed = 0;
    std::vector<double> thetas;  // radians
};

// Throws std::invalid_argument naming the offending field.
void validate_config(const ExperimentConfig& cfg);

// Outcome tallies per setting block; outcome index o = 4*ia + 2*ib1 + ib2
// where each index bit is 0 for outcome +1 and 1 for outcome -1.
struct CountRecord {
    std::array<std::array<std::array<std::array<std::int64_t, 8>, 2>, 2>, 2>
        tallies{};

    std::int64_t total(int x, int y1, int y2) const {
        std::int64_t n = 0;
        for (std::int64_t v : tallies[x][y1][y2]) n += v;
        return n;
    }
};

struct SEstimate {
    double s;
    double sigma;
    double sigmas_above_2;  // (s - 2) / sigma
};

struct SEstimatePair {
    SEstimate ab1;
    SEstimate ab2;
};

struct ExperimentPoint {
    double theta;  // radians
    SEstimatePair estimates;
    CountRecord counts;
};

// Two-parameter noisy source for the given visibility pair.
qcore::DensityMatrix noisy_state(double vis_zx, double vis_diag);

// Anticorrelation contrast [P(anti) - P(corr)] / [P(anti) + P(corr)] of a
// two-qubit state measured in Z(x)Z and X(x)X respectively.
double visibility_zx(const qcore::DensityMatrix& rho);
double visibility_diag(const qcore::DensityMatrix& rho);

// One Poisson-window count record; substream `s = 4x + 2y1 + y2` of `rng`
// drives setting block (x, y1, y2), so results do not depend on evaluation
// order.
CountRecord sample_counts(const bell::JointDistribution& jd,
                          const ExperimentConfig& cfg,
                          const rng::SubstreamRng& rng);

// Empirical CHSH values with delta-method standard errors. Throws if any
// setting block has zero counts.
SEstimatePair estimate_svalues(const CountRecord& counts);

// Full pipeline: noisy state, exact distribution per theta, counts from
// per-theta substreams of cfg.seed, estimates. Deterministic given cfg.
std::vector<ExperimentPoint> run_experiment(const ExperimentConfig& cfg);

}  // namespace seqbell::montecarlo

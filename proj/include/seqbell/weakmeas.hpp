#pragma once

// Tunable-strength (weak) measurement of a single qubit, modeled by a
// two-state pointer. The pointer pair carries the four overlap amplitudes
// between the measured system's conditioned pointer states and the readout
// basis; from those follow the measurement quality factor F (how intact the
// state is left), the precision G (how much outcome information is gained),
// and the Kraus pair implementing the selective update.
//
// For the optimal single-parameter family used throughout,
//   |phi_up>   = cos(theta)|0> + sin(theta)|1>
//   |phi_down> = sin(theta)|0> + cos(theta)|1>
// with theta in [0, pi/2]: theta = 0 is a strong (projective) measurement,
// theta = pi/4 is no measurement at all, and F = sin(2 theta),
// G = cos(2 theta) saturate F^2 + G^2 = 1.
//
// The Kraus operators are taken with nonnegative coefficients,
//   M_+1 = cos(theta) P_up + sin(theta) P_down
//   M_-1 = sin(theta) P_up + cos(theta) P_down
// (P_up/P_down project onto the measured axis). This sign choice is the one
// consistent with the non-selective decoherence channel
//   rho -> F rho + (1 - F)(P_up rho P_up + P_down rho P_down);
// flipping the sign of either sin term scales coherences by -F instead.
//
// Angles are radians everywhere in this API.

#include "seqbell/qcore.hpp"

namespace seqbell::weakmeas {

// Overlap amplitudes <phi_outcome | phi_spin> between readout states and the
// two conditioned pointer states. Each pointer state is normalized:
// |a_up_plus|^2 + |a_up_minus|^2 = 1, and likewise for the down row.
struct PointerPair {
    qcore::Complex a_up_plus;
    qcore::Complex a_up_minus;
    qcore::Complex a_down_plus;
    qcore::Complex a_down_minus;

    PointerPair(qcore::Complex up_plus, qcore::Complex up_minus,
                qcore::Complex down_plus, qcore::Complex down_minus);
};

// A measurement of the spin component along `axis` with coupling angle
// `theta` (radians, [0, pi/2]) in the optimal pointer family above.
struct WeakMeasurement {
    double theta;
    qcore::BlochDirection axis;

    WeakMeasurement(double theta_, qcore::BlochDirection axis_);
};

// Selective update operators for the two outcomes; M+^dag M+ + M-^dag M- = I.
struct KrausPair {
    qcore::ComplexMatrix m_plus;
    qcore::ComplexMatrix m_minus;

    KrausPair(qcore::ComplexMatrix plus, qcore::ComplexMatrix minus);
};

struct Optimality {
    double f2_plus_g2;
    bool optimal;  // |F^2 + G^2 - 1| <= qcore::equivalence_tol
};

struct OutcomeProbabilities {
    double p_plus;
    double p_minus;
};

// Pointer overlaps for the optimal family at coupling angle theta.
PointerPair pointer_states(double theta);

// F = Re <phi_down | phi_up>, the surviving coherence fraction.
double quality_factor(const PointerPair& pp);

// G = 1 - |<phi_-1|phi_up>|^2 - |<phi_+1|phi_down>|^2, the readout contrast.
double precision(const PointerPair& pp);

// Evaluates the trade-off F^2 + G^2 (throws if it exceeds 1 beyond
// tolerance, which no valid pointer model can do).
Optimality optimality_check(const PointerPair& pp);

KrausPair kraus_pair(const WeakMeasurement& wm);

// Non-selective channel sum(M rho M^dag); input must be a single qubit.
qcore::DensityMatrix nonselective_channel(const qcore::DensityMatrix& rho,
                                          const WeakMeasurement& wm);

// Outcome probabilities tr(M_+- rho M_+-^dag); equals
// G * tr(P_+- rho) + (1 - G)/2 for the optimal family.
OutcomeProbabilities outcome_probabilities(const qcore::DensityMatrix& rho,
                                           const WeakMeasurement& wm);

}  // namespace seqbell::weakmeas

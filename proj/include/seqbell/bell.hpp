#pragma once

// The sequential CHSH scenario: Alice measures one qubit of an entangled
// pair projectively, Bob1 measures the other qubit with tunable strength
// theta, and Bob2 then measures the same qubit projectively. Each party
// picks one of two axes per run.
//
// From the exact joint outcome distribution two CHSH values are formed:
//   S_A-B1 from the (Alice, Bob1) correlations, marginalizing Bob2, and
//   S_A-B2 from the (Alice, Bob2) correlations, marginalizing Bob1's
//   outcome and averaging uniformly over Bob1's two settings (Bob1 chooses
//   his axis with a fair coin, so the state Bob2 receives is the equal
//   mixture of the two non-selective channels).
//
// For the singlet at the frozen default settings both reduce to closed
// forms in the strength parameters F = sin(2 theta), G = cos(2 theta):
//   S_A-B1 = 2 sqrt(2) G,   S_A-B2 = sqrt(2) (1 + F),
// which exceed 2 simultaneously exactly for theta in
// (asin(sqrt(2)-1)/2, pi/8), about (12.235 deg, 22.5 deg).

#include <array>
#include <vector>

#include "seqbell/qcore.hpp"

namespace seqbell::bell {

// Measurement axes: two per party, indexed by the setting bit.
struct ScenarioSettings {
    std::array<qcore::BlochDirection, 2> alice;
    std::array<qcore::BlochDirection, 2> bob1;
    std::array<qcore::BlochDirection, 2> bob2;
};

// Exact outcome distribution p(a, b1, b2 | x, y1, y2) over the 8 setting
// combinations and 8 outcome combinations. Outcome index 0 encodes +1 and
// index 1 encodes -1. Construction validates cell range, per-setting
// normalization (structural_tol) and both no-signaling marginals
// (equivalence_tol): Alice's marginal must not depend on (y1, y2) and the
// Bobs' joint marginal must not depend on x.
class JointDistribution {
  public:
    explicit JointDistribution(const std::array<double, 64>& cells);

    double p(int x, int y1, int y2, int a, int b1, int b2) const {
        return cells_[index(x, y1, y2, a, b1, b2)];
    }

    static int index(int x, int y1, int y2, int a, int b1, int b2) {
        return (((((x * 2 + y1) * 2 + y2) * 2 + a) * 2 + b1) * 2 + b2);
    }

    static double outcome_value(int bit) { return bit == 0 ? 1.0 : -1.0; }

  private:
    std::array<double, 64> cells_;
};

// c[x][y]: correlation table feeding a CHSH combination.
struct CorrelationTable {
    std::array<std::array<double, 2>, 2> c;
};

struct SValues {
    double s_ab1;
    double s_ab2;
};

// theta-window (radians) where both S values exceed 2.
struct AngleWindow {
    double lo;
    double hi;
};

struct SweepPoint {
    double theta;  // radians
    double f;
    double g;
    SValues analytic;
    SValues simulated;
};

// Exact distribution for the given two-qubit state: Alice projects along
// alice[x], Bob1 applies the strength-theta Kraus update along bob1[y1],
// Bob2 projects along bob2[y2].
JointDistribution joint_distribution(const qcore::DensityMatrix& state,
                                     const ScenarioSettings& settings,
                                     double theta);

// <a * b1 | x, y1>, Bob2's outcome marginalized (and his setting averaged,
// which no-signaling makes immaterial).
CorrelationTable correlation_ab1(const JointDistribution& jd);

// <a * b2 | x, y2>, Bob1's outcome marginalized and his setting averaged
// uniformly.
CorrelationTable correlation_ab2(const JointDistribution& jd);

// |c00 + c01 + c10 - c11|.
double chsh(const CorrelationTable& table);

// Closed forms S_A-B1 = 2 sqrt(2) cos(2 theta), S_A-B2 = sqrt(2)(1 + sin(2 theta)).
SValues predicted_svalues(double theta);

// Frozen axes reproducing the closed forms above with the singlet:
// Alice {Z, X}; Bob1 = Bob2 = {-(Z+X)/sqrt2, (-Z+X)/sqrt2}. With this index
// order the signed combination C00 + C01 + C10 - C11 is +2 sqrt(2) at
// theta = 0 (the swapped order collapses it to 0).
ScenarioSettings default_settings();

// (asin(sqrt(2)-1)/2, pi/8) in radians.
AngleWindow double_violation_window();

// Analytic and exact-simulation S values per theta (radians).
std::vector<SweepPoint> sweep(const std::vector<double>& thetas,
                              const ScenarioSettings& settings,
                              const qcore::DensityMatrix& state);

}  // namespace seqbell::bell

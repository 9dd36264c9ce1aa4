#pragma once

// Independent reference for the sequential scenario: instead of Kraus
// updates, dilate Bob1's measurement to a unitary interaction with an
// explicit qubit pointer prepared in |0>, evolve the full three-qubit state,
// and read out all parties projectively (pointer outcome +1 = |0>). Shares
// only the primitive linear algebra with the implementation under test.

#include <array>
#include <cmath>

#include "seqbell/bell.hpp"
#include "seqbell/qcore.hpp"

namespace seqbell::testoracle {

inline bell::JointDistribution three_qubit_joint_distribution(
    const qcore::DensityMatrix& state, const bell::ScenarioSettings& settings,
    double theta) {
    using qcore::ComplexMatrix;

    const ComplexMatrix eye2 = qcore::identity(2);
    ComplexMatrix ptr0 = ComplexMatrix::Zero(2, 2);
    ptr0(0, 0) = 1.0;
    // Factor order: A (x) B (x) pointer.
    const ComplexMatrix rho3 = qcore::tensor(state.mat, ptr0);

    const double c = std::cos(theta);
    const double s = std::sin(theta);
    // Controlled pointer rotations: |e+>|0> -> |e+>(c|0> + s|1>),
    // |e->|0> -> |e->(s|0> + c|1>), completed unitarily.
    ComplexMatrix u_plus(2, 2), u_minus(2, 2);
    u_plus << c, -s, s, c;
    u_minus << s, c, c, -s;

    std::array<ComplexMatrix, 2> ptr_readout = {ptr0, eye2 - ptr0};

    std::array<double, 64> cells{};
    for (int y1 = 0; y1 < 2; ++y1) {
        const ComplexMatrix interaction =
            qcore::tensor(qcore::projector(settings.bob1[y1], +1), u_plus) +
            qcore::tensor(qcore::projector(settings.bob1[y1], -1), u_minus);
        const ComplexMatrix u3 = qcore::tensor(eye2, interaction);
        const ComplexMatrix evolved = u3 * rho3 * u3.adjoint();
        for (int x = 0; x < 2; ++x) {
            for (int y2 = 0; y2 < 2; ++y2) {
                for (int a = 0; a < 2; ++a) {
                    const ComplexMatrix pa =
                        qcore::projector(settings.alice[x], a == 0 ? +1 : -1);
                    for (int b2 = 0; b2 < 2; ++b2) {
                        const ComplexMatrix pb2 = qcore::projector(
                            settings.bob2[y2], b2 == 0 ? +1 : -1);
                        for (int b1 = 0; b1 < 2; ++b1) {
                            const ComplexMatrix p3 = qcore::tensor(
                                pa, qcore::tensor(pb2, ptr_readout[b1]));
                            cells[bell::JointDistribution::index(
                                x, y1, y2, a, b1, b2)] =
                                (p3 * evolved).trace().real();
                        }
                    }
                }
            }
        }
    }
    return bell::JointDistribution(cells);
}

}  // namespace seqbell::testoracle

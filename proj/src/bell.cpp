#include "seqbell/bell.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "seqbell/weakmeas.hpp"

namespace seqbell::bell {

using qcore::ComplexMatrix;
using qcore::DensityMatrix;

JointDistribution::JointDistribution(const std::array<double, 64>& cells)
    : cells_(cells) {
    for (double v : cells_) {
        if (!(v >= -qcore::structural_tol && v <= 1.0 + qcore::structural_tol)) {
            throw std::invalid_argument(
                "JointDistribution: cell outside [0, 1]");
        }
    }
    for (int x = 0; x < 2; ++x) {
        for (int y1 = 0; y1 < 2; ++y1) {
            for (int y2 = 0; y2 < 2; ++y2) {
                double sum = 0.0;
                for (int o = 0; o < 8; ++o) {
                    sum += cells_[index(x, y1, y2, o >> 2, (o >> 1) & 1, o & 1)];
                }
                if (std::abs(sum - 1.0) > qcore::structural_tol) {
                    throw std::invalid_argument(
                        "JointDistribution: setting not normalized");
                }
            }
        }
    }

    // No-signaling to Alice: p(a | x, y1, y2) must not depend on (y1, y2).
    for (int x = 0; x < 2; ++x) {
        for (int a = 0; a < 2; ++a) {
            double ref = 0.0;
            for (int y1 = 0; y1 < 2; ++y1) {
                for (int y2 = 0; y2 < 2; ++y2) {
                    double m = 0.0;
                    for (int b1 = 0; b1 < 2; ++b1)
                        for (int b2 = 0; b2 < 2; ++b2)
                            m += p(x, y1, y2, a, b1, b2);
                    if (y1 == 0 && y2 == 0) {
                        ref = m;
                    } else if (std::abs(m - ref) > qcore::equivalence_tol) {
                        throw std::invalid_argument(
                            "JointDistribution: Alice marginal signals");
                    }
                }
            }
        }
    }
    // No-signaling to the Bobs: p(b1, b2 | x, y1, y2) must not depend on x.
    for (int y1 = 0; y1 < 2; ++y1) {
        for (int y2 = 0; y2 < 2; ++y2) {
            for (int b1 = 0; b1 < 2; ++b1) {
                for (int b2 = 0; b2 < 2; ++b2) {
                    double m0 = 0.0, m1 = 0.0;
                    for (int a = 0; a < 2; ++a) {
                        m0 += p(0, y1, y2, a, b1, b2);
                        m1 += p(1, y1, y2, a, b1, b2);
                    }
                    if (std::abs(m0 - m1) > qcore::equivalence_tol) {
                        throw std::invalid_argument(
                            "JointDistribution: Bob marginal signals");
                    }
                }
            }
        }
    }
}

JointDistribution joint_distribution(const DensityMatrix& state,
                                     const ScenarioSettings& settings,
                                     double theta) {
    if (state.dim() != 4) {
        throw std::invalid_argument("joint_distribution: expects a qubit pair");
    }
    if (state.sub_normalized) {
        throw std::invalid_argument(
            "joint_distribution: state must be normalized");
    }
    const ComplexMatrix eye2 = qcore::identity(2);

    std::array<double, 64> cells{};
    for (int x = 0; x < 2; ++x) {
        std::array<ComplexMatrix, 2> pa = {
            qcore::tensor(qcore::projector(settings.alice[x], +1), eye2),
            qcore::tensor(qcore::projector(settings.alice[x], -1), eye2)};
        for (int y1 = 0; y1 < 2; ++y1) {
            const weakmeas::KrausPair k = weakmeas::kraus_pair(
                weakmeas::WeakMeasurement(theta, settings.bob1[y1]));
            std::array<ComplexMatrix, 2> mb = {qcore::tensor(eye2, k.m_plus),
                                               qcore::tensor(eye2, k.m_minus)};
            for (int y2 = 0; y2 < 2; ++y2) {
                std::array<ComplexMatrix, 2> pb2 = {
                    qcore::tensor(eye2, qcore::projector(settings.bob2[y2], +1)),
                    qcore::tensor(eye2,
                                  qcore::projector(settings.bob2[y2], -1))};
                for (int a = 0; a < 2; ++a) {
                    const qcore::KrausApplication after_alice =
                        qcore::apply_kraus(state, pa[a]);
                    for (int b1 = 0; b1 < 2; ++b1) {
                        const qcore::KrausApplication after_bob1 =
                            qcore::apply_kraus(after_alice.state, mb[b1]);
                        for (int b2 = 0; b2 < 2; ++b2) {
                            const double p =
                                qcore::apply_kraus(after_bob1.state, pb2[b2])
                                    .probability;
                            cells[JointDistribution::index(x, y1, y2, a, b1,
                                                           b2)] = p;
                        }
                    }
                }
            }
        }
    }
    return JointDistribution(cells);
}

CorrelationTable correlation_ab1(const JointDistribution& jd) {
    CorrelationTable t{};
    for (int x = 0; x < 2; ++x) {
        for (int y1 = 0; y1 < 2; ++y1) {
            double c = 0.0;
            for (int y2 = 0; y2 < 2; ++y2) {
                for (int a = 0; a < 2; ++a) {
                    for (int b1 = 0; b1 < 2; ++b1) {
                        double m = 0.0;
                        for (int b2 = 0; b2 < 2; ++b2)
                            m += jd.p(x, y1, y2, a, b1, b2);
                        c += 0.5 * JointDistribution::outcome_value(a) *
                             JointDistribution::outcome_value(b1) * m;
                    }
                }
            }
            t.c[x][y1] = c;
        }
    }
    return t;
}

CorrelationTable correlation_ab2(const JointDistribution& jd) {
    CorrelationTable t{};
    for (int x = 0; x < 2; ++x) {
        for (int y2 = 0; y2 < 2; ++y2) {
            double c = 0.0;
            for (int y1 = 0; y1 < 2; ++y1) {
                for (int a = 0; a < 2; ++a) {
                    for (int b2 = 0; b2 < 2; ++b2) {
                        double m = 0.0;
                        for (int b1 = 0; b1 < 2; ++b1)
                            m += jd.p(x, y1, y2, a, b1, b2);
                        c += 0.5 * JointDistribution::outcome_value(a) *
                             JointDistribution::outcome_value(b2) * m;
                    }
                }
            }
            t.c[x][y2] = c;
        }
    }
    return t;
}

double chsh(const CorrelationTable& t) {
    return std::abs(t.c[0][0] + t.c[0][1] + t.c[1][0] - t.c[1][1]);
}

SValues predicted_svalues(double theta) {
    const double root2 = std::sqrt(2.0);
    return SValues{2.0 * root2 * std::cos(2.0 * theta),
                   root2 * (1.0 + std::sin(2.0 * theta))};
}

ScenarioSettings default_settings() {
    const double r = 1.0 / std::sqrt(2.0);
    const qcore::BlochDirection z(1.0, 0.0);
    const qcore::BlochDirection x(0.0, 1.0);
    const qcore::BlochDirection diag_minus(-r, -r);  // -(Z+X)/sqrt2
    const qcore::BlochDirection diag_plus(-r, r);    // (-Z+X)/sqrt2
    return ScenarioSettings{{z, x}, {diag_minus, diag_plus},
                            {diag_minus, diag_plus}};
}

AngleWindow double_violation_window() {
    // S_A-B2 = sqrt(2)(1 + sin 2theta) > 2 above asin(sqrt(2)-1)/2;
    // S_A-B1 = 2 sqrt(2) cos 2theta > 2 below pi/8.
    return AngleWindow{0.5 * std::asin(std::sqrt(2.0) - 1.0),
                       std::numbers::pi / 8.0};
}

std::vector<SweepPoint> sweep(const std::vector<double>& thetas,
                              const ScenarioSettings& settings,
                              const qcore::DensityMatrix& state) {
    std::vector<SweepPoint> out;
    out.reserve(thetas.size());
    for (double theta : thetas) {
        const JointDistribution jd = joint_distribution(state, settings, theta);
        SweepPoint pt;
        pt.theta = theta;
        pt.f = std::sin(2.0 * theta);
        pt.g = std::cos(2.0 * theta);
        pt.analytic = predicted_svalues(theta);
        pt.simulated = SValues{chsh(correlation_ab1(jd)),
                               chsh(correlation_ab2(jd))};
        out.push_back(pt);
    }
    return out;
}

}  // namespace seqbell::bell

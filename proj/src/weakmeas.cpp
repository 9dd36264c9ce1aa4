#include "seqbell/weakmeas.hpp"

#include <cmath>
#include <stdexcept>

namespace seqbell::weakmeas {

using qcore::ComplexMatrix;
using qcore::DensityMatrix;

namespace {

void require_row_normalized(const qcore::Complex& a, const qcore::Complex& b,
                            const char* row) {
    const double n2 = std::norm(a) + std::norm(b);
    if (std::abs(n2 - 1.0) > qcore::structural_tol) {
        throw std::invalid_argument(std::string("PointerPair: ") + row +
                                    " pointer state not normalized");
    }
}

}  // namespace

PointerPair::PointerPair(qcore::Complex up_plus, qcore::Complex up_minus,
                         qcore::Complex down_plus, qcore::Complex down_minus)
    : a_up_plus(up_plus),
      a_up_minus(up_minus),
      a_down_plus(down_plus),
      a_down_minus(down_minus) {
    require_row_normalized(a_up_plus, a_up_minus, "up");
    require_row_normalized(a_down_plus, a_down_minus, "down");
}

WeakMeasurement::WeakMeasurement(double theta_, qcore::BlochDirection axis_)
    : theta(theta_), axis(axis_) {
    constexpr double half_pi = 1.57079632679489662;
    if (!(theta >= 0.0 && theta <= half_pi + qcore::structural_tol)) {
        throw std::invalid_argument(
            "WeakMeasurement: theta outside [0, pi/2] radians");
    }
}

KrausPair::KrausPair(ComplexMatrix plus, ComplexMatrix minus)
    : m_plus(std::move(plus)), m_minus(std::move(minus)) {
    if (m_plus.rows() != 2 || m_plus.cols() != 2 || m_minus.rows() != 2 ||
        m_minus.cols() != 2) {
        throw std::invalid_argument("KrausPair: operators must be 2x2");
    }
    const ComplexMatrix sum =
        m_plus.adjoint() * m_plus + m_minus.adjoint() * m_minus;
    if (qcore::max_abs_diff(sum, qcore::identity(2)) > qcore::equivalence_tol) {
        throw std::invalid_argument("KrausPair: completeness violated");
    }
}

PointerPair pointer_states(double theta) {
    constexpr double half_pi = 1.57079632679489662;
    if (!(theta >= 0.0 && theta <= half_pi + qcore::structural_tol)) {
        throw std::invalid_argument(
            "pointer_states: theta outside [0, pi/2] radians");
    }
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    // |phi_up> = c|0> + s|1>, |phi_down> = s|0> + c|1>, readout basis {|0>,|1>}.
    return PointerPair(c, s, s, c);
}

double quality_factor(const PointerPair& pp) {
    const qcore::Complex overlap = std::conj(pp.a_down_plus) * pp.a_up_plus +
                                   std::conj(pp.a_down_minus) * pp.a_up_minus;
    return overlap.real();
}

double precision(const PointerPair& pp) {
    return 1.0 - std::norm(pp.a_up_minus) - std::norm(pp.a_down_plus);
}

Optimality optimality_check(const PointerPair& pp) {
    const double f = quality_factor(pp);
    const double g = precision(pp);
    const double t = f * f + g * g;
    if (t > 1.0 + qcore::structural_tol) {
        throw std::invalid_argument(
            "optimality_check: F^2 + G^2 exceeds 1; inconsistent pointer pair");
    }
    return Optimality{t, std::abs(t - 1.0) <= qcore::equivalence_tol};
}

KrausPair kraus_pair(const WeakMeasurement& wm) {
    const ComplexMatrix p_up = qcore::projector(wm.axis, +1);
    const ComplexMatrix p_down = qcore::projector(wm.axis, -1);
    const double c = std::cos(wm.theta);
    const double s = std::sin(wm.theta);
    return KrausPair(c * p_up + s * p_down, s * p_up + c * p_down);
}

DensityMatrix nonselective_channel(const DensityMatrix& rho,
                                   const WeakMeasurement& wm) {
    if (rho.dim() != 2) {
        throw std::invalid_argument("nonselective_channel: expects a qubit");
    }
    const KrausPair k = kraus_pair(wm);
    ComplexMatrix out = k.m_plus * rho.mat * k.m_plus.adjoint() +
                        k.m_minus * rho.mat * k.m_minus.adjoint();
    return DensityMatrix(std::move(out), rho.sub_normalized);
}

OutcomeProbabilities outcome_probabilities(const DensityMatrix& rho,
                                           const WeakMeasurement& wm) {
    if (rho.dim() != 2) {
        throw std::invalid_argument("outcome_probabilities: expects a qubit");
    }
    if (rho.sub_normalized) {
        throw std::invalid_argument(
            "outcome_probabilities: state must be normalized");
    }
    const KrausPair k = kraus_pair(wm);
    const double p_plus = qcore::apply_kraus(rho, k.m_plus).probability;
    const double p_minus = qcore::apply_kraus(rho, k.m_minus).probability;
    return OutcomeProbabilities{p_plus, p_minus};
}

}  // namespace seqbell::weakmeas

#pragma once

// Dense complex linear algebra for few-qubit states: density matrices,
// tensor products, partial traces, Bloch-axis observables and projectors,
// and Kraus application. Everything is a value; functions are pure.
//
// Conventions:
//   - |0> is the +1 eigenstate of sigma_Z ("up", horizontal polarization).
//   - Composite indices are row-major over the factor list, so for a pair
//     index = 2*a + b with qubit A the left factor.
//   - Dimensions are small by design (2, 4, or 8); no sparse paths.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace seqbell::qcore {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Tolerance for structural checks (hermiticity, trace, positivity, norms).
inline constexpr double structural_tol = 1e-10;
// Tolerance for cross-route equivalence checks (two computations of the
// same quantity through different algebra must agree this tightly).
inline constexpr double equivalence_tol = 1e-12;

// Unit vector on the Bloch sphere, stored as (z, x, y) components.
struct BlochDirection {
    double z = 1.0;
    double x = 0.0;
    double y = 0.0;

    BlochDirection() = default;
    // Throws std::invalid_argument unless the components form a unit vector
    // within structural_tol.
    BlochDirection(double z_, double x_, double y_ = 0.0);

    double dot(const BlochDirection& other) const noexcept {
        return z * other.z + x * other.x + y * other.y;
    }
};

// Pure state amplitudes. Dimension must be 2, 4, or 8.
struct Ket {
    ComplexVector amp;

    explicit Ket(ComplexVector amplitudes);
    int dim() const { return static_cast<int>(amp.size()); }
    double norm_sq() const { return amp.squaredNorm(); }
};

// Hermitian, positive semidefinite matrix with unit trace, or an explicitly
// tagged sub-normalized branch (trace in [0, 1]) produced by selection.
// Construction validates; states are never silently renormalized.
struct DensityMatrix {
    ComplexMatrix mat;
    bool sub_normalized = false;

    DensityMatrix(ComplexMatrix m, bool sub_normalized_ = false);
    int dim() const { return static_cast<int>(mat.rows()); }
    double trace_real() const { return mat.trace().real(); }
};

// Result of applying a single Kraus operator: the (sub-normalized) branch
// state M rho M^dagger and its probability tr(M rho M^dagger).
struct KrausApplication {
    DensityMatrix state;
    double probability;
};

// |psi><psi|. Kets with |norm^2 - 1| > structural_tol produce a state
// tagged sub_normalized (norm^2 must not exceed 1).
DensityMatrix dm_from_ket(const Ket& ket);

// Kronecker products, left factor varying slowest.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
Ket tensor(const Ket& a, const Ket& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// Traces out every factor not listed in `keep`. `dims` gives the factor
// dimensions (product must equal rho's dimension); `keep` lists factor
// indices to retain, in increasing order.
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep,
                            const std::vector<int>& dims);

// sigma . n for a unit Bloch vector n: Hermitian, traceless, eigenvalues +-1.
ComplexMatrix observable_from_direction(const BlochDirection& n);

// Rank-1 projector (I + outcome * sigma.n) / 2; outcome must be +1 or -1.
ComplexMatrix projector(const BlochDirection& n, int outcome);

// Branch update rho -> M rho M^dagger with its probability. The branch is
// tagged sub_normalized and not rescaled.
KrausApplication apply_kraus(const DensityMatrix& rho, const ComplexMatrix& m);

// Re tr(rho * observable); the observable must be Hermitian.
double expectation(const DensityMatrix& rho, const ComplexMatrix& observable);

// Two-qubit singlet (|01> - |10>)/sqrt(2).
DensityMatrix singlet();

// Entrywise comparison helpers.
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix identity(int dim);

}  // namespace seqbell::qcore

#include "seqbell/qcore.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace seqbell::qcore {

namespace {

bool is_supported_dim(Eigen::Index n) { return n == 2 || n == 4 || n == 8; }

void require_finite(const ComplexMatrix& m, const char* what) {
    if (!m.allFinite()) {
        throw std::invalid_argument(std::string(what) + ": non-finite entries");
    }
}

}  // namespace

BlochDirection::BlochDirection(double z_, double x_, double y_)
    : z(z_), x(x_), y(y_) {
    const double norm = std::sqrt(z * z + x * x + y * y);
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > structural_tol) {
        throw std::invalid_argument("BlochDirection: not a unit vector");
    }
}

Ket::Ket(ComplexVector amplitudes) : amp(std::move(amplitudes)) {
    if (!is_supported_dim(amp.size())) {
        throw std::invalid_argument("Ket: dimension must be 2, 4, or 8");
    }
    if (!amp.allFinite()) {
        throw std::invalid_argument("Ket: non-finite amplitudes");
    }
}

DensityMatrix::DensityMatrix(ComplexMatrix m, bool sub_normalized_)
    : mat(std::move(m)), sub_normalized(sub_normalized_) {
    if (mat.rows() != mat.cols() || !is_supported_dim(mat.rows())) {
        throw std::invalid_argument("DensityMatrix: dimension must be 2, 4, or 8");
    }
    require_finite(mat, "DensityMatrix");
    if (max_abs_diff(mat, mat.adjoint()) > structural_tol) {
        throw std::invalid_argument("DensityMatrix: not Hermitian");
    }
    const double tr = mat.trace().real();
    if (sub_normalized) {
        if (tr < -structural_tol || tr > 1.0 + structural_tol) {
            throw std::invalid_argument(
                "DensityMatrix: sub-normalized trace outside [0, 1]");
        }
    } else if (std::abs(tr - 1.0) > structural_tol) {
        throw std::invalid_argument("DensityMatrix: trace != 1 (tag the state "
                                    "sub_normalized if selection occurred)");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(mat, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -structural_tol) {
        throw std::invalid_argument("DensityMatrix: negative eigenvalue");
    }
}

DensityMatrix dm_from_ket(const Ket& ket) {
    const double n2 = ket.norm_sq();
    if (n2 > 1.0 + structural_tol) {
        throw std::invalid_argument("dm_from_ket: norm^2 exceeds 1");
    }
    const bool sub = std::abs(n2 - 1.0) > structural_tol;
    ComplexMatrix m = ket.amp * ket.amp.adjoint();
    return DensityMatrix(std::move(m), sub);
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
        }
    }
    return out;
}

Ket tensor(const Ket& a, const Ket& b) {
    ComplexVector out(a.dim() * b.dim());
    for (int i = 0; i < a.dim(); ++i) {
        out.segment(i * b.dim(), b.dim()) = a.amp(i) * b.amp;
    }
    return Ket(std::move(out));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix(tensor(a.mat, b.mat),
                         a.sub_normalized || b.sub_normalized);
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep,
                            const std::vector<int>& dims) {
    Eigen::Index total = 1;
    for (int d : dims) {
        if (d < 2) throw std::invalid_argument("partial_trace: factor dim < 2");
        total *= d;
    }
    if (total != rho.dim()) {
        throw std::invalid_argument("partial_trace: dims do not match state");
    }
    const int nf = static_cast<int>(dims.size());
    std::vector<bool> kept(nf, false);
    for (std::size_t k = 0; k < keep.size(); ++k) {
        const int f = keep[k];
        if (f < 0 || f >= nf) {
            throw std::invalid_argument("partial_trace: keep index out of range");
        }
        if (k > 0 && keep[k] <= keep[k - 1]) {
            throw std::invalid_argument("partial_trace: keep must be increasing");
        }
        kept[f] = true;
    }

    int keep_dim = 1;
    int trace_dim = 1;
    for (int f = 0; f < nf; ++f) (kept[f] ? keep_dim : trace_dim) *= dims[f];

    // Row-major strides over the factor list.
    std::vector<Eigen::Index> stride(nf, 1);
    for (int f = nf - 2; f >= 0; --f) stride[f] = stride[f + 1] * dims[f + 1];

    // Maps a (kept multi-index, traced multi-index) pair back to a full
    // index, walking factors in order and consuming digits from the right
    // counter.
    auto full_index = [&](int kidx, int tidx) {
        Eigen::Index idx = 0;
        // Decompose each packed index most-significant factor first.
        int kdiv = keep_dim;
        int tdiv = trace_dim;
        for (int f = 0; f < nf; ++f) {
            int digit;
            if (kept[f]) {
                kdiv /= dims[f];
                digit = (kidx / kdiv) % dims[f];
            } else {
                tdiv /= dims[f];
                digit = (tidx / tdiv) % dims[f];
            }
            idx += digit * stride[f];
        }
        return idx;
    };

    ComplexMatrix out = ComplexMatrix::Zero(keep_dim, keep_dim);
    for (int r = 0; r < keep_dim; ++r) {
        for (int c = 0; c < keep_dim; ++c) {
            Complex sum = 0.0;
            for (int t = 0; t < trace_dim; ++t) {
                sum += rho.mat(full_index(r, t), full_index(c, t));
            }
            out(r, c) = sum;
        }
    }
    return DensityMatrix(std::move(out), rho.sub_normalized);
}

ComplexMatrix observable_from_direction(const BlochDirection& n) {
    ComplexMatrix m(2, 2);
    m(0, 0) = Complex(n.z, 0.0);
    m(0, 1) = Complex(n.x, -n.y);
    m(1, 0) = Complex(n.x, n.y);
    m(1, 1) = Complex(-n.z, 0.0);
    return m;
}

ComplexMatrix projector(const BlochDirection& n, int outcome) {
    if (outcome != 1 && outcome != -1) {
        throw std::invalid_argument("projector: outcome must be +1 or -1");
    }
    return 0.5 * (identity(2) + double(outcome) * observable_from_direction(n));
}

KrausApplication apply_kraus(const DensityMatrix& rho, const ComplexMatrix& m) {
    if (m.rows() != rho.dim() || m.cols() != rho.dim()) {
        throw std::invalid_argument("apply_kraus: operator dimension mismatch");
    }
    require_finite(m, "apply_kraus");
    ComplexMatrix branch = m * rho.mat * m.adjoint();
    const double p = branch.trace().real();
    return KrausApplication{DensityMatrix(std::move(branch), true), p};
}

double expectation(const DensityMatrix& rho, const ComplexMatrix& observable) {
    if (observable.rows() != rho.dim() || observable.cols() != rho.dim()) {
        throw std::invalid_argument("expectation: observable dimension mismatch");
    }
    if (max_abs_diff(observable, observable.adjoint()) > structural_tol) {
        throw std::invalid_argument("expectation: observable not Hermitian");
    }
    return (rho.mat * observable).trace().real();
}

DensityMatrix singlet() {
    ComplexVector v = ComplexVector::Zero(4);
    const double s = 1.0 / std::sqrt(2.0);
    v(1) = Complex(s, 0.0);
    v(2) = Complex(-s, 0.0);
    return dm_from_ket(Ket(std::move(v)));
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    }
    return (a - b).cwiseAbs().maxCoeff();
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           max_abs_diff(a, b) <= tol;
}

ComplexMatrix identity(int dim) { return ComplexMatrix::Identity(dim, dim); }

}  // namespace seqbell::qcore

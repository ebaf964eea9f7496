#include "slp/qcore.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace slp {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonHermitian: return "NonHermitian";
        case ErrorCode::NonSquare: return "NonSquare";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::BadParameter: return "BadParameter";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::BadTemperature: return "BadTemperature";
        case ErrorCode::CoherenceTooLarge: return "CoherenceTooLarge";
        case ErrorCode::NotIsometry: return "NotIsometry";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::NotApplicable: return "NotApplicable";
        case ErrorCode::BranchSingularity: return "BranchSingularity";
    }
    return "Unknown";
}

double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return max_abs(a - b) <= tol;
}

double hermiticity_violation(const ComplexMatrix& m) {
    return max_abs(m - m.adjoint());
}

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kClusterRelTol = 1e-9;

void fix_phase(Eigen::Ref<ComplexVector> v) {
    const double peak = v.cwiseAbs().maxCoeff();
    if (peak == 0.0) return;
    // first entry within rounding of the peak, so ties resolve by index
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) >= peak * (1.0 - 1e-12)) {
            idx = i;
            break;
        }
    }
    const cplx phase = std::conj(v(idx)) / std::abs(v(idx));
    v *= phase;
    v(idx) = cplx(v(idx).real(), 0.0);
}

void orthonormalize_columns(ComplexMatrix& u, const std::vector<int>& cols) {
    for (std::size_t a = 0; a < cols.size(); ++a) {
        auto va = u.col(cols[a]);
        for (std::size_t b = 0; b < a; ++b) {
            const auto vb = u.col(cols[b]);
            va -= vb * vb.dot(va);
        }
        va /= va.norm();
    }
}

}  // namespace

ComplexVector HermitianOperator::eigenvector(int k) const {
    if (k < 0 || k >= dim()) {
        throw Error(ErrorCode::IndexOutOfRange, "eigenvector index " + std::to_string(k));
    }
    return vectors_.col(k);
}

HermitianOperator HermitianOperator::negated() const {
    HermitianOperator out;
    const int d = dim();
    out.matrix_ = -matrix_;
    out.energies_.resize(d);
    out.vectors_.resize(d, d);
    for (int k = 0; k < d; ++k) {
        out.energies_(k) = -energies_(d - 1 - k);
        out.vectors_.col(k) = vectors_.col(d - 1 - k);
    }
    out.cluster_tol_ = cluster_tol_;
    for (auto it = clusters_.rbegin(); it != clusters_.rend(); ++it) {
        std::vector<int> c;
        for (auto j = it->rbegin(); j != it->rend(); ++j) c.push_back(d - 1 - *j);
        out.clusters_.push_back(std::move(c));
    }
    return out;
}

double HermitianOperator::orthonormality_error() const {
    const ComplexMatrix g = vectors_.adjoint() * vectors_;
    return max_abs(g - ComplexMatrix::Identity(dim(), dim()));
}

double HermitianOperator::reconstruction_error() const {
    const ComplexMatrix r = vectors_ * energies_.cast<cplx>().asDiagonal() * vectors_.adjoint();
    return max_abs(r - matrix_);
}

HermitianOperator eig_hermitian(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        std::ostringstream os;
        os << m.rows() << "x" << m.cols();
        throw Error(ErrorCode::NonSquare, os.str());
    }
    if (m.rows() == 0) throw Error(ErrorCode::NonSquare, "empty matrix");
    const double asym = hermiticity_violation(m);
    if (asym > kHermitianTol * std::max(1.0, max_abs(m))) {
        std::ostringstream os;
        os << "max |M - M^dagger| = " << asym;
        throw Error(ErrorCode::NonHermitian, os.str());
    }

    HermitianOperator h;
    h.matrix_ = m;
    const ComplexMatrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::NonHermitian, "eigensolver did not converge");
    }
    h.energies_ = solver.eigenvalues();
    h.vectors_ = solver.eigenvectors();

    const int d = static_cast<int>(h.energies_.size());
    h.cluster_tol_ = kClusterRelTol * std::max(1.0, h.energies_.cwiseAbs().maxCoeff());
    std::vector<int> current{0};
    for (int k = 1; k < d; ++k) {
        if (h.energies_(k) - h.energies_(k - 1) <= h.cluster_tol_) {
            current.push_back(k);
        } else {
            h.clusters_.push_back(current);
            current = {k};
        }
    }
    h.clusters_.push_back(current);

    for (const auto& c : h.clusters_) {
        if (c.size() > 1) orthonormalize_columns(h.vectors_, c);
    }
    for (int k = 0; k < d; ++k) fix_phase(h.vectors_.col(k));
    return h;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Bipartition dims, Factor keep) {
    const int c = dims.sub;
    const int r = dims.rest;
    if (c < 1 || r < 1 || m.rows() != c * r || m.cols() != c * r) {
        throw Error(ErrorCode::DimensionMismatch, "partial_trace expects a (d_c*d_r)^2 matrix");
    }
    if (keep == Factor::subsystem) {
        ComplexMatrix out = ComplexMatrix::Zero(c, c);
        for (int a = 0; a < c; ++a)
            for (int b = 0; b < c; ++b) out(a, b) = m.block(a * r, b * r, r, r).trace();
        return out;
    }
    ComplexMatrix out = ComplexMatrix::Zero(r, r);
    for (int a = 0; a < c; ++a) out += m.block(a * r, a * r, r, r);
    return out;
}

ComplexVector SchmidtForm::reconstruct() const {
    ComplexVector out = ComplexVector::Zero(left.rows() * right.rows());
    for (Eigen::Index s = 0; s < coefficients.size(); ++s) {
        const ComplexMatrix term = kron(ComplexMatrix(left.col(s)), ComplexMatrix(right.col(s)));
        out += std::sqrt(coefficients(s)) * term.col(0);
    }
    return out;
}

SchmidtForm schmidt(const ComplexVector& state, Bipartition dims) {
    if (state.size() != dims.total()) {
        throw Error(ErrorCode::DimensionMismatch, "state length does not match d_c*d_r");
    }
    const double norm = state.norm();
    if (std::abs(norm - 1.0) > 1e-10) {
        std::ostringstream os;
        os << "norm " << norm;
        throw Error(ErrorCode::NotNormalized, os.str());
    }
    ComplexMatrix psi(dims.sub, dims.rest);
    for (int c = 0; c < dims.sub; ++c)
        for (int r = 0; r < dims.rest; ++r) psi(c, r) = state(c * dims.rest + r);

    // psi = Σ σ_s u_s v_s†, so |r_s⟩ = conj(v_s)
    Eigen::JacobiSVD<ComplexMatrix> svd(psi, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SchmidtForm out;
    const RealVector sv = svd.singularValues();
    out.coefficients = sv.cwiseAbs2();
    out.left = svd.matrixU();
    out.right = svd.matrixV().conjugate();
    out.rank = static_cast<int>((out.coefficients.array() > kSchmidtZero).count());
    return out;
}

EigenstateClass classify_eigenstate(const HermitianOperator& h, Bipartition dims, int k) {
    if (h.dim() != dims.total()) {
        throw Error(ErrorCode::DimensionMismatch, "operator dimension does not match d_c*d_r");
    }
    if (k < 0 || k >= h.dim()) throw Error(ErrorCode::IndexOutOfRange, "eigenstate index");
    EigenstateClass out;
    const auto& e = h.energies();
    double gap = std::numeric_limits<double>::infinity();
    if (k > 0) gap = std::min(gap, e(k) - e(k - 1));
    if (k + 1 < h.dim()) gap = std::min(gap, e(k + 1) - e(k));
    out.gap = gap;
    out.nondegenerate = gap > 1e-9 * std::max(1.0, std::abs(e(k)));
    const SchmidtForm form = schmidt(h.eigenvector(k), dims);
    out.schmidt_rank = form.rank;
    out.fully_entangled = form.rank == std::min(dims.sub, dims.rest);
    return out;
}

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

ComplexMatrix pauli_y() {
    ComplexMatrix m(2, 2);
    m << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

ComplexMatrix embed_site(const ComplexMatrix& op, int site, int n) {
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    const ComplexMatrix id = ComplexMatrix::Identity(op.rows(), op.cols());
    for (int j = 0; j < n; ++j) out = kron(out, j == site ? op : id);
    return out;
}

}  // namespace slp

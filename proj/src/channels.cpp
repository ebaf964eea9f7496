#include "slp/channels.hpp"

#include <Eigen/QR>

#include <cmath>
#include <random>
#include <sstream>

namespace slp {

KrausSet KrausSet::identity(int d) {
    return KrausSet{{ComplexMatrix::Identity(d, d)}};
}

QubitElements qubit_elements(const KrausSet& ks) {
    if (ks.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "element vectors need qubit operators");
    const int n = ks.size();
    QubitElements e{ComplexVector(n), ComplexVector(n), ComplexVector(n), ComplexVector(n)};
    for (int mu = 0; mu < n; ++mu) {
        e.s(mu) = ks.ops[mu](0, 0);
        e.t(mu) = ks.ops[mu](0, 1);
        e.u(mu) = ks.ops[mu](1, 0);
        e.v(mu) = ks.ops[mu](1, 1);
    }
    return e;
}

ChannelReport validate(const KrausSet& ks) {
    ChannelReport rep;
    const int d = ks.dim();
    if (d == 0) return rep;
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    rep.trivial = true;
    for (const auto& k : ks.ops) {
        if (k.rows() != d || k.cols() != d) {
            throw Error(ErrorCode::DimensionMismatch, "Kraus operators differ in shape");
        }
        sum += k.adjoint() * k;
        const cplx lambda = k.trace() / static_cast<double>(d);
        if (max_abs(k - lambda * ComplexMatrix::Identity(d, d)) > kCompletenessTol) rep.trivial = false;
    }
    rep.completeness_violation = max_abs(sum - ComplexMatrix::Identity(d, d));
    if (d == 2) {
        const QubitElements e = qubit_elements(ks);
        const double a = std::abs(e.s.squaredNorm() + e.u.squaredNorm() - 1.0);
        const double b = std::abs(e.t.squaredNorm() + e.v.squaredNorm() - 1.0);
        const double c = std::abs(e.s.dot(e.t) + e.u.dot(e.v));
        rep.element_violation = std::max({a, b, c});
    }
    rep.valid = rep.completeness_violation <= kCompletenessTol;
    return rep;
}

ComplexMatrix apply_local(const KrausSet& ks, const ComplexMatrix& rho, Bipartition dims) {
    const int c = dims.sub;
    const int r = dims.rest;
    if (rho.rows() != c * r || rho.cols() != c * r) {
        throw Error(ErrorCode::DimensionMismatch, "state does not match d_c*d_r");
    }
    if (ks.dim() != c) throw Error(ErrorCode::DimensionMismatch, "channel acts on the wrong subsystem size");

    ComplexMatrix out = ComplexMatrix::Zero(c * r, c * r);
    ComplexMatrix left(c * r, c * r);
    for (const auto& k : ks.ops) {
        // left = (K ⊗ I) ρ, then out += left (K ⊗ I)†, block by block
        for (int i = 0; i < c; ++i) {
            auto row = left.middleRows(i * r, r);
            row.setZero();
            for (int a = 0; a < c; ++a) {
                if (k(i, a) != cplx(0.0)) row += k(i, a) * rho.middleRows(a * r, r);
            }
        }
        for (int j = 0; j < c; ++j) {
            auto col = out.middleCols(j * r, r);
            for (int b = 0; b < c; ++b) {
                if (k(j, b) != cplx(0.0)) col += std::conj(k(j, b)) * left.middleCols(b * r, r);
            }
        }
    }
    return out;
}

double StiefelPoint::isometry_error() const {
    return max_abs(v.adjoint() * v - ComplexMatrix::Identity(v.cols(), v.cols()));
}

KrausSet from_stiefel(const StiefelPoint& point) {
    const int d = point.sub_dim();
    if (d == 0 || point.v.rows() % d != 0) {
        throw Error(ErrorCode::DimensionMismatch, "Stiefel matrix rows must be a multiple of its columns");
    }
    const double err = point.isometry_error();
    if (err > kCompletenessTol) {
        std::ostringstream os;
        os << "V^dagger V deviates from identity by " << err;
        throw Error(ErrorCode::NotIsometry, os.str());
    }
    KrausSet ks;
    for (int mu = 0; mu < point.n_ops(); ++mu) ks.ops.push_back(point.v.middleRows(mu * d, d));
    return ks;
}

StiefelPoint to_stiefel(const KrausSet& ks) {
    const int d = ks.dim();
    StiefelPoint p;
    p.v.resize(static_cast<Eigen::Index>(d) * ks.size(), d);
    for (int mu = 0; mu < ks.size(); ++mu) p.v.middleRows(mu * d, d) = ks.ops[mu];
    const double err = p.isometry_error();
    if (err > kCompletenessTol) {
        std::ostringstream os;
        os << "Kraus set is not complete (error " << err << ")";
        throw Error(ErrorCode::NotIsometry, os.str());
    }
    return p;
}

ComplexMatrix orthonormal_factor(const ComplexMatrix& a) {
    Eigen::HouseholderQR<ComplexMatrix> qr(a);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(a.rows(), a.cols());
    const ComplexMatrix& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        const cplx diag = r(j, j);
        const double mag = std::abs(diag);
        if (mag > 0.0) q.col(j) *= diag / mag;
    }
    return q;
}

KrausSet random_channel(int sub_dim, int n_ops, std::uint64_t seed) {
    if (sub_dim < 1 || n_ops < 1 || n_ops > sub_dim * sub_dim) {
        throw Error(ErrorCode::BadParameter, "random_channel needs 1 <= n_k <= d_c^2");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix g(static_cast<Eigen::Index>(sub_dim) * n_ops, sub_dim);
    for (Eigen::Index j = 0; j < g.cols(); ++j)
        for (Eigen::Index i = 0; i < g.rows(); ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = cplx(re, im);
        }
    return from_stiefel(StiefelPoint{orthonormal_factor(g)});
}

KrausSet unitary_y(double phi) {
    ComplexMatrix k(2, 2);
    k << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    return KrausSet{{k}};
}

KrausSet reset_to_zero() {
    ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
    ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
    k0(0, 0) = 1.0;
    k1(0, 1) = 1.0;
    return KrausSet{{k0, k1}};
}

}  // namespace slp

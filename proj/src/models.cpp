#include "slp/models.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>

namespace slp {

std::string_view to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::pair: return "pair";
        case ModelKind::chain: return "chain";
        case ModelKind::xxx: return "xxx";
        case ModelKind::custom: return "custom";
    }
    return "unknown";
}

namespace {

void require_kappa(double kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        std::ostringstream os;
        os << "kappa must be positive and finite, got " << kappa;
        throw Error(ErrorCode::BadParameter, os.str());
    }
}

ComplexMatrix pair_matrix(double kappa, double gamma, double sign) {
    const ComplexMatrix x = pauli_x();
    const ComplexMatrix y = pauli_y();
    const ComplexMatrix z = pauli_z();
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    return sign * kappa * (0.5 * (1.0 + gamma) * kron(x, x) + 0.5 * (1.0 - gamma) * kron(y, y)) +
           kron(z, id) + kron(id, z);
}

// κ Σ σ^x_i σ^x_{i+1} + Σ σ^z_i on a ring, written straight into the
// computational basis; site 0 is the most significant bit.
ComplexMatrix ring_matrix(int n, double bond) {
    const int d = 1 << n;
    ComplexMatrix h = ComplexMatrix::Zero(d, d);
    auto bit = [n](int i) { return 1 << (n - 1 - i); };
    for (int s = 0; s < d; ++s) {
        double field = 0.0;
        for (int i = 0; i < n; ++i) field += (s & bit(i)) ? -1.0 : 1.0;
        h(s, s) += field;
        for (int i = 0; i < n; ++i) {
            const int t = s ^ bit(i) ^ bit((i + 1) % n);
            h(t, s) += bond;
        }
    }
    return h;
}

}  // namespace

double SystemModel::pair_m() const {
    return std::sqrt(params.gamma * params.gamma * params.kappa * params.kappa + 4.0);
}

SystemModel build_pair(double kappa, double gamma) {
    require_kappa(kappa);
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        std::ostringstream os;
        os << "gamma must lie in [0, 1], got " << gamma;
        throw Error(ErrorCode::BadParameter, os.str());
    }
    SystemModel m;
    m.kind = ModelKind::pair;
    m.params.kappa = kappa;
    m.params.gamma = gamma;
    m.params.n = 2;
    m.hamiltonian = eig_hermitian(pair_matrix(kappa, gamma, 1.0));
    m.dims = {2, 2};
    return m;
}

SystemModel build_chain(int n, double kappa, Coupling coupling) {
    if (n < 2) throw Error(ErrorCode::BadParameter, "chain needs at least two sites");
    if (n > 12) throw Error(ErrorCode::TooLarge, "chain length " + std::to_string(n) + " exceeds 12");
    require_kappa(kappa);
    const double sign = coupling == Coupling::ferro ? -1.0 : 1.0;
    SystemModel m;
    m.kind = ModelKind::chain;
    m.params.kappa = kappa;
    m.params.gamma = 1.0;
    m.params.n = n;
    m.params.coupling = coupling;
    // A two-site ring would count its only bond twice; use the single bond.
    m.hamiltonian = eig_hermitian(n == 2 ? pair_matrix(kappa, 1.0, sign) : ring_matrix(n, sign * kappa));
    m.dims = {2, 1 << (n - 1)};
    return m;
}

SystemModel build_xxx() {
    const ComplexMatrix x = pauli_x();
    const ComplexMatrix y = pauli_y();
    const ComplexMatrix z = pauli_z();
    SystemModel m;
    m.kind = ModelKind::xxx;
    m.params.kappa = 1.0;
    m.params.gamma = 0.0;
    m.params.n = 2;
    m.hamiltonian = eig_hermitian(kron(x, x) + kron(y, y) + kron(z, z));
    m.dims = {2, 2};
    return m;
}

SystemModel build_custom(const RealVector& energies, const ComplexMatrix& basis, Bipartition dims) {
    const Eigen::Index d = energies.size();
    if (basis.rows() != d || basis.cols() != d || d != dims.total()) {
        throw Error(ErrorCode::DimensionMismatch, "custom model: energies, basis and dims disagree");
    }
    if (d > kMaxDim) throw Error(ErrorCode::TooLarge, "custom model dimension exceeds 4096");
    const double unitarity = max_abs(basis.adjoint() * basis - ComplexMatrix::Identity(d, d));
    if (unitarity > 1e-10) {
        std::ostringstream os;
        os << "custom basis is not unitary (error " << unitarity << ")";
        throw Error(ErrorCode::BadParameter, os.str());
    }
    ComplexMatrix h = basis * energies.cast<cplx>().asDiagonal() * basis.adjoint();
    h = 0.5 * (h + h.adjoint()).eval();
    SystemModel m;
    m.kind = ModelKind::custom;
    m.hamiltonian = eig_hermitian(h);
    m.dims = dims;
    return m;
}

SystemModel negate(const SystemModel& model) {
    SystemModel out = model;
    out.hamiltonian = model.hamiltonian.negated();
    out.negated = !model.negated;
    return out;
}

Temperature Temperature::finite(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        std::ostringstream os;
        os << "temperature must be positive, got " << t;
        throw Error(ErrorCode::BadTemperature, os.str());
    }
    Temperature out;
    out.t_ = t;
    out.infinite_ = false;
    return out;
}

double Temperature::value() const noexcept {
    return infinite_ ? std::numeric_limits<double>::infinity() : t_;
}

Eigenmixture Eigenmixture::from_populations(const RealVector& p) {
    if (p.size() == 0) throw Error(ErrorCode::BadParameter, "empty population list");
    if ((p.array() < 0.0).any()) throw Error(ErrorCode::BadParameter, "negative population");
    if (std::abs(p.sum() - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "populations sum to " << p.sum();
        throw Error(ErrorCode::BadParameter, os.str());
    }
    Eigenmixture out;
    out.populations = p;
    return out;
}

namespace {

bool pair_like(const SystemModel& model) {
    return !model.negated &&
           (model.kind == ModelKind::pair || (model.kind == ModelKind::chain && model.params.n == 2));
}

}  // namespace

std::array<int, 4> pair_level_order(const SystemModel& model) {
    if (!pair_like(model)) {
        throw Error(ErrorCode::NotApplicable, "pair level labels need a (non-negated) pair model");
    }
    const double m = model.pair_m();
    const double k = model.params.kappa;
    const std::array<double, 4> targets{-m, -k, k, m};
    std::array<int, 4> order{};
    std::array<bool, 4> used{};
    const auto& e = model.hamiltonian.energies();
    for (int t = 0; t < 4; ++t) {
        int best = -1;
        for (int i = 0; i < 4; ++i) {
            if (used[i]) continue;
            if (best < 0 || std::abs(e(i) - targets[t]) < std::abs(e(best) - targets[t])) best = i;
        }
        used[best] = true;
        order[t] = best;
    }
    return order;
}

PairDeltas pair_deltas(const SystemModel& model, const Eigenmixture& mix) {
    const auto o = pair_level_order(model);
    return {mix.p(o[0]) - mix.p(o[3]), mix.p(o[1]) - mix.p(o[2])};
}

Eigenmixture pair_mixture(const SystemModel& model, PairDeltas d) {
    const double a0 = std::abs(d.delta0), a1 = std::abs(d.delta1);
    if (a0 + a1 > 1.0 + 1e-12) throw Error(ErrorCode::BadParameter, "deltas lie outside |d0|+|d1| <= 1");
    const auto o = pair_level_order(model);
    // spare weight split evenly between the two level pairs
    const double spare = std::max(0.0, 0.5 * (1.0 - a0 - a1));
    RealVector p(4);
    p(o[0]) = std::max(0.0, 0.5 * (a0 + spare + d.delta0));
    p(o[3]) = std::max(0.0, 0.5 * (a0 + spare - d.delta0));
    p(o[1]) = std::max(0.0, 0.5 * (a1 + spare + d.delta1));
    p(o[2]) = std::max(0.0, 0.5 * (a1 + spare - d.delta1));
    p /= p.sum();
    Eigenmixture mix = Eigenmixture::from_populations(p);
    mix.deltas = pair_deltas(model, mix);
    return mix;
}

PairDeltas gibbs_pair_deltas(double kappa, double m, Temperature t) {
    if (t.is_infinite()) return {0.0, 0.0};
    // 2 sinh(x/T)/Z with every exponential rescaled by e^{-max(m,κ)/T}
    const double top = std::max(m, kappa);
    const double b = t.beta();
    const double em_p = std::exp((m - top) * b);
    const double em_n = std::exp((-m - top) * b);
    const double ek_p = std::exp((kappa - top) * b);
    const double ek_n = std::exp((-kappa - top) * b);
    const double z = em_p + em_n + ek_p + ek_n;
    return {(em_p - em_n) / z, (ek_p - ek_n) / z};
}

Eigenmixture gibbs(const SystemModel& model, Temperature t) {
    const auto& e = model.hamiltonian.energies();
    const int d = model.dim();
    RealVector p(d);
    if (t.is_infinite()) {
        p.setConstant(1.0 / d);
    } else {
        for (int k = 0; k < d; ++k) p(k) = std::exp(-(e(k) - e(0)) * t.beta());
        p /= p.sum();
    }
    Eigenmixture out;
    out.populations = p;
    if (pair_like(model)) {
        const PairDeltas closed = gibbs_pair_deltas(model.params.kappa, model.pair_m(), t);
        const PairDeltas direct = pair_deltas(model, out);
        // Populations move by about β·δE when the eigenvalues carry rounding δE,
        // which matters near level crossings at very low temperature.
        const double tol = 1e-12 + 64.0 * std::numeric_limits<double>::epsilon() *
                                       std::max(1.0, e.cwiseAbs().maxCoeff()) * t.beta();
        if (std::abs(closed.delta0 - direct.delta0) > tol || std::abs(closed.delta1 - direct.delta1) > tol) {
            throw std::logic_error("gibbs: closed-form pair deltas disagree with Boltzmann weights");
        }
        out.deltas = closed;
    }
    return out;
}

ComplexMatrix density(const SystemModel& model, const Eigenmixture& mix) {
    if (mix.populations.size() != model.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "population count does not match model dimension");
    }
    const ComplexMatrix& u = model.hamiltonian.eigenvectors();
    return u * mix.populations.cast<cplx>().asDiagonal() * u.adjoint();
}

CoherentState coherent_perturb(const SystemModel& model, const Eigenmixture& base, double r) {
    if (model.dim() < 3) throw Error(ErrorCode::DimensionMismatch, "coherence needs at least three levels");
    const double bound = std::sqrt(base.p(0) * base.p(2));
    if (std::abs(r) > bound * (1.0 + 1e-12) + 1e-15) {
        std::ostringstream os;
        os << "|r| = " << std::abs(r) << " exceeds sqrt(p0 p2) = " << bound;
        throw Error(ErrorCode::CoherenceTooLarge, os.str());
    }
    CoherentState out;
    out.base = base;
    out.r = r;
    const ComplexVector e0 = model.hamiltonian.eigenvector(0);
    const ComplexVector e2 = model.hamiltonian.eigenvector(2);
    out.rho = density(model, base) + r * (e2 * e0.adjoint() + e0 * e2.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(out.rho, Eigen::EigenvaluesOnly);
    const double lowest = solver.eigenvalues()(0);
    if (lowest < -1e-12) {
        std::ostringstream os;
        os << "perturbed state has eigenvalue " << lowest;
        throw Error(ErrorCode::CoherenceTooLarge, os.str());
    }
    return out;
}

}  // namespace slp

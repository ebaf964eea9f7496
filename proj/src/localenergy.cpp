#include "slp/localenergy.hpp"

#include "pattern_fit.hpp"

#include <Eigen/QR>
#include <omp.h>

#include <cmath>
#include <numbers>
#include <sstream>

namespace slp {

namespace {

double trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a.cwiseProduct(b.transpose()).sum().real();
}

void require_channel(const KrausSet& ks) {
    const ChannelReport rep = validate(ks);
    if (!rep.valid) {
        std::ostringstream os;
        os << "channel violates completeness by " << rep.completeness_violation;
        throw Error(ErrorCode::BadParameter, os.str());
    }
}

ComplexVector vec_row_major(const ComplexMatrix& k) {
    ComplexVector out(k.size());
    for (Eigen::Index a = 0; a < k.rows(); ++a)
        for (Eigen::Index b = 0; b < k.cols(); ++b) out(a * k.cols() + b) = k(a, b);
    return out;
}

}  // namespace

double delta_e(const SystemModel& model, const ComplexMatrix& rho, const KrausSet& ks) {
    require_channel(ks);
    const ComplexMatrix& h = model.hamiltonian.matrix();
    const ComplexMatrix after = apply_local(ks, rho, model.dims);
    return trace_product(h, rho) - trace_product(h, after);
}

double delta_e_k(const SystemModel& model, int k, const KrausSet& ks) {
    if (k < 0 || k >= model.dim()) {
        throw Error(ErrorCode::IndexOutOfRange, "eigenstate index " + std::to_string(k));
    }
    require_channel(ks);
    const int c = model.dims.sub;
    const int r = model.dims.rest;
    if (ks.dim() != c) throw Error(ErrorCode::DimensionMismatch, "channel acts on the wrong subsystem size");
    const auto& e = model.hamiltonian.energies();
    const ComplexMatrix& u = model.hamiltonian.eigenvectors();
    const ComplexVector psi = u.col(k);
    double total = 0.0;
    ComplexVector moved(c * r);
    for (const auto& op : ks.ops) {
        for (int i = 0; i < c; ++i) {
            auto seg = moved.segment(i * r, r);
            seg.setZero();
            for (int a = 0; a < c; ++a) seg += op(i, a) * psi.segment(a * r, r);
        }
        const ComplexVector amp = u.adjoint() * moved;  // ⟨E_k'|K_μ|E_k⟩
        for (int kp = 0; kp < model.dim(); ++kp) {
            if (kp == k) continue;
            total += (e(k) - e(kp)) * std::norm(amp(kp));
        }
    }
    return total;
}

namespace detail {

PatternFit fit_qubit_pattern(const ComplexMatrix& w, double c0, const ComplexMatrix& offset,
                             const std::vector<ComplexMatrix>& pattern, const std::vector<double>& const_weight) {
    if (w.rows() != 4 || w.cols() != 4) {
        throw Error(ErrorCode::DimensionMismatch, "qubit pattern needs a 4x4 response matrix");
    }
    const ComplexMatrix c1 = slot_matrix({{S, S}, {U, U}}, 1.0);
    const ComplexMatrix c2 = slot_matrix({{T, T}, {V, V}}, 1.0);
    const ComplexMatrix c3 = slot_matrix({{S, T}, {U, V}}, 1.0);  // k† c3 k = s̄t + ūv
    std::vector<ComplexMatrix> cols = pattern;
    cols.push_back(-c1);
    cols.push_back(-c2);
    cols.push_back(-(c3 + c3.adjoint()));
    cols.push_back(-cplx(0.0, 1.0) * (c3 - c3.adjoint()));
    const ComplexMatrix target = -w - offset;

    const int n = static_cast<int>(cols.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(33, n);
    Eigen::VectorXd rhs(33);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < 16; ++i) {
            a(i, j) = cols[j](i / 4, i % 4).real();
            a(16 + i, j) = cols[j](i / 4, i % 4).imag();
        }
    for (int i = 0; i < 16; ++i) {
        rhs(i) = target(i / 4, i % 4).real();
        rhs(16 + i) = target(i / 4, i % 4).imag();
    }
    for (std::size_t j = 0; j < const_weight.size(); ++j) a(32, static_cast<int>(j)) = const_weight[j];
    const int np = static_cast<int>(pattern.size());
    a(32, np) = 1.0;
    a(32, np + 1) = 1.0;
    rhs(32) = c0;

    PatternFit fit;
    fit.coef = a.colPivHouseholderQr().solve(rhs);
    fit.residual = (a * fit.coef - rhs).cwiseAbs().maxCoeff();
    return fit;
}

}  // namespace detail

PairCoefficients fit_pair_pattern(const ComplexMatrix& w, double c0) {
    using namespace detail;
    // ΔE = (1−η)u†u − (1+η)t†t + ξ(s̄v + v̄s)/2 + μ(ūt + t̄u)/2 − ξ
    const ComplexMatrix p0 = slot_matrix({{U, U}}, 1.0) + slot_matrix({{T, T}}, -1.0);
    const ComplexMatrix pe = slot_matrix({{T, T}, {U, U}}, -1.0);
    const ComplexMatrix px = slot_matrix({{S, V}, {V, S}}, 0.5);
    const ComplexMatrix pm = slot_matrix({{U, T}, {T, U}}, 0.5);

    PairCoefficients out;
    const PatternFit free = fit_qubit_pattern(w, c0, p0, {pe, px, pm}, {0.0, -1.0, 0.0});
    out.eta = free.coef(0);
    out.xi = free.coef(1);
    out.mu = free.coef(2);
    out.residual = free.residual;
    const PatternFit tied = fit_qubit_pattern(w, c0, p0, {pe, px + pm}, {0.0, -1.0});
    out.tied_eta = tied.coef(0);
    out.tied_xi = tied.coef(1);
    out.tied_residual = tied.residual;
    return out;
}

PairCoefficients pair_coefficients(double kappa, double gamma, PairDeltas d) {
    const double m = std::sqrt(gamma * gamma * kappa * kappa + 4.0);
    PairCoefficients out;
    out.eta = 2.0 * d.delta0 / m;
    out.xi = gamma * gamma * kappa * kappa * d.delta0 / m + kappa * d.delta1;
    out.mu = gamma * kappa * kappa * d.delta0 / m + gamma * kappa * d.delta1;
    out.tied_eta = out.eta;
    out.tied_xi = out.xi;
    return out;
}

double BilinearEnergyForm::delta_e(const KrausSet& ks) const {
    double after = 0.0;
    for (const auto& k : ks.ops) {
        const ComplexVector v = vec_row_major(k);
        after += v.dot(w * v).real();
    }
    return c0 - after;
}

BilinearEnergyForm form_from_response(ComplexMatrix w, double c0, Bipartition dims) {
    BilinearEnergyForm form;
    form.w = std::move(w);
    form.c0 = c0;
    form.dims = dims;
    if (dims.sub == 2) form.pair = fit_pair_pattern(form.w, c0);
    return form;
}

BilinearEnergyForm bilinear_form(const SystemModel& model, const ComplexMatrix& rho) {
    const int c = model.dims.sub;
    const ComplexMatrix& h = model.hamiltonian.matrix();
    auto energy_after = [&](const ComplexMatrix& k) {
        return trace_product(h, apply_local(KrausSet{{k}}, rho, model.dims));
    };
    auto unit = [c](int idx) {
        ComplexMatrix e = ComplexMatrix::Zero(c, c);
        e(idx / c, idx % c) = 1.0;
        return e;
    };
    // x†Wy = ¼[Q(x+y) − Q(x−y) − iQ(x+iy) + iQ(x−iy)], Q(z) = energy after {z}
    const int n = c * c;
    const cplx i1(0.0, 1.0);
    ComplexMatrix w(n, n);
    for (int row = 0; row < n; ++row) {
        const ComplexMatrix x = unit(row);
        w(row, row) = energy_after(x);
        for (int col = row + 1; col < n; ++col) {
            const ComplexMatrix y = unit(col);
            const cplx val = 0.25 * (energy_after(x + y) - energy_after(x - y) - i1 * energy_after(x + i1 * y) +
                                     i1 * energy_after(x - i1 * y));
            w(row, col) = val;
            w(col, row) = std::conj(val);
        }
    }
    return form_from_response(std::move(w), trace_product(h, rho), model.dims);
}

BilinearEnergyForm bilinear_form(const SystemModel& model, const Eigenmixture& mix) {
    return bilinear_form(model, density(model, mix));
}

OmegaBranch omega_branch(double eta, double xi) {
    return std::abs(eta * xi) < 1.0 - eta * eta ? OmegaBranch::interior : OmegaBranch::boundary;
}

double omega_interior(double eta, double xi) {
    const double g = 1.0 - eta * eta;
    if (!(g > 0.0)) {
        std::ostringstream os;
        os << "interior branch needs |eta| < 1, got eta = " << eta;
        throw Error(ErrorCode::BranchSingularity, os.str());
    }
    return std::sqrt((g + xi * xi) / g) - xi - eta;
}

double omega_closed(double eta, double xi) {
    const double raw = omega_branch(eta, xi) == OmegaBranch::interior
                           ? omega_interior(eta, xi)
                           : (std::abs(xi) - xi) + (std::abs(eta) - eta);
    return std::max(0.0, raw);
}

double omega_angles(double eta, double xi, double mu, double alpha, double beta) {
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    const double sb = std::sin(beta), cb = std::cos(beta);
    return (1.0 - eta) * sa * sa - (1.0 + eta) * sb * sb + std::abs(xi) * ca * cb + std::abs(mu) * sa * sb - xi;
}

AnisoMaximum omega_aniso(double eta, double xi, double mu) {
    constexpr int kGrid = 513;
    const double ax = std::abs(xi);
    const double am = std::abs(mu);
    std::vector<double> s(kGrid), co(kGrid);
    for (int i = 0; i < kGrid; ++i) {
        const double t = 2.0 * std::numbers::pi * i / kGrid;
        s[i] = std::sin(t);
        co[i] = std::cos(t);
    }
    double best = -std::numeric_limits<double>::infinity();
    int bi = 0, bj = 0;
    for (int i = 0; i < kGrid; ++i) {
        const double ra = (1.0 - eta) * s[i] * s[i];
        for (int j = 0; j < kGrid; ++j) {
            const double val = ra - (1.0 + eta) * s[j] * s[j] + ax * co[i] * co[j] + am * s[i] * s[j];
            if (val > best) {
                best = val;
                bi = i;
                bj = j;
            }
        }
    }

    double a = 2.0 * std::numbers::pi * bi / kGrid;
    double b = 2.0 * std::numbers::pi * bj / kGrid;
    auto grad = [&](double x, double y) {
        const double sa = std::sin(x), ca = std::cos(x), sb = std::sin(y), cb = std::cos(y);
        return Eigen::Vector2d((1.0 - eta) * 2.0 * sa * ca - ax * sa * cb + am * ca * sb,
                               -(1.0 + eta) * 2.0 * sb * cb - ax * ca * sb + am * sa * cb);
    };
    auto hess = [&](double x, double y) {
        const double sa = std::sin(x), ca = std::cos(x), sb = std::sin(y), cb = std::cos(y);
        Eigen::Matrix2d h;
        h(0, 0) = 2.0 * (1.0 - eta) * (ca * ca - sa * sa) - ax * ca * cb - am * sa * sb;
        h(1, 1) = -2.0 * (1.0 + eta) * (cb * cb - sb * sb) - ax * ca * cb - am * sa * sb;
        h(0, 1) = h(1, 0) = ax * sa * sb + am * ca * cb;
        return h;
    };
    auto f = [&](double x, double y) { return omega_angles(eta, xi, mu, x, y); };

    double fx = f(a, b);
    Eigen::Vector2d g = grad(a, b);
    auto polish = [&] {
        g = grad(a, b);
        for (int it = 0; it < 200 && g.norm() > 1e-10; ++it) {
            const Eigen::Matrix2d h = hess(a, b);
            Eigen::Vector2d step;
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
            if (es.eigenvalues().maxCoeff() < -1e-12) {
                step = -h.ldlt().solve(g);
            } else {
                step = g;  // not locally concave: plain ascent
            }
            double t = 1.0;
            bool moved = false;
            for (int k = 0; k < 60; ++k) {
                const double fn = f(a + t * step(0), b + t * step(1));
                if (fn >= fx) {
                    a += t * step(0);
                    b += t * step(1);
                    fx = fn;
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
            g = grad(a, b);
            if (!moved) break;
        }
    };
    polish();
    // The grid can miss a narrow positive region next to a saddle (the
    // identity channel at α = β = 0 is always stationary). Escape along
    // directions of positive curvature until the point is a local maximum.
    for (int escape = 0; escape < 8; ++escape) {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(hess(a, b));
        if (es.eigenvalues()(1) <= 1e-12) break;
        const Eigen::Vector2d dir = es.eigenvectors().col(1);
        const double a0 = a, b0 = b, f0 = fx;
        double best_a = a0, best_b = b0, best_f = f0;
        for (double sign : {1.0, -1.0}) {
            for (double eps = 1e-2; eps >= 1e-6; eps *= 0.1) {
                a = a0 + sign * eps * dir(0);
                b = b0 + sign * eps * dir(1);
                fx = f(a, b);
                polish();
                if (fx > best_f) {
                    best_a = a;
                    best_b = b;
                    best_f = fx;
                }
            }
        }
        a = best_a;
        b = best_b;
        fx = best_f;
        g = grad(a, b);
        if (best_f <= f0) break;
    }
    AnisoMaximum out;
    out.raw = fx;
    out.value = std::max(0.0, fx);
    out.alpha = a;
    out.beta = b;
    out.grad_norm = g.norm();
    return out;
}

namespace {

struct AscentOutcome {
    double value;
    ComplexMatrix v;
    long iterations;
    bool converged;
};

// ΔE(V) = c0 − Σ_μ vec(K_μ)† W vec(K_μ) with K_μ the μ-th d×d block of V.
// Trial points are compared through the difference
//   ΔE(V') − ΔE(V) = −Re Σ_μ (k'_μ − k_μ)† W (k'_μ + k_μ),
// which stays accurate when the two values agree to many digits.
class StackedObjective {
public:
    StackedObjective(const ComplexMatrix& w, double c0, int d, int n_ops)
        : w_(w), c0_(c0), d_(d), n_(n_ops), cur_(d * d, n_ops), wcur_(d * d, n_ops), trial_(d * d, n_ops),
          scratch_(d * d, n_ops) {}

    void set_point(const ComplexMatrix& v) {
        load(v, cur_);
        wcur_.noalias() = w_ * cur_;
    }

    double value() const { return c0_ - cur_.cwiseProduct(wcur_.conjugate()).sum().real(); }

    double trial_gain(const ComplexMatrix& v) {
        load(v, trial_);
        scratch_.noalias() = w_ * (trial_ + cur_);
        return -(trial_ - cur_).cwiseProduct(scratch_.conjugate()).sum().real();
    }

    void accept_trial() {
        cur_.swap(trial_);
        wcur_.noalias() = w_ * cur_;
    }

    // Euclidean gradient with respect to V at the current point.
    void gradient(ComplexMatrix& g) const {
        for (int mu = 0; mu < n_; ++mu)
            for (int a = 0; a < d_; ++a)
                for (int b = 0; b < d_; ++b) g(mu * d_ + a, b) = -2.0 * wcur_(a * d_ + b, mu);
    }

private:
    void load(const ComplexMatrix& v, ComplexMatrix& kv) const {
        for (int mu = 0; mu < n_; ++mu)
            for (int a = 0; a < d_; ++a)
                for (int b = 0; b < d_; ++b) kv(a * d_ + b, mu) = v(mu * d_ + a, b);
    }

    const ComplexMatrix& w_;
    double c0_;
    int d_;
    int n_;
    ComplexMatrix cur_;
    ComplexMatrix wcur_;
    ComplexMatrix trial_;
    ComplexMatrix scratch_;
};

// Q factor of a thin full-rank matrix with positive diagonal R, by classical
// Gram-Schmidt applied twice. Retraction inputs V + tξ (ξ tangent at V) have
// all singular values ≥ 1, so two passes are enough.
void thin_q(ComplexMatrix& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        auto col = a.col(j);
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index i = 0; i < j; ++i) col -= a.col(i).dot(col) * a.col(i);
        }
        col /= col.norm();
    }
}

AscentOutcome riemannian_ascent(const ComplexMatrix& w, double c0, int d, int n_ops, ComplexMatrix v,
                                const OracleOptions& opts) {
    constexpr double kArmijo = 1e-4;
    StackedObjective obj(w, c0, d, n_ops);
    ComplexMatrix g(v.rows(), v.cols());
    ComplexMatrix rg(v.rows(), v.cols());
    ComplexMatrix trial(v.rows(), v.cols());
    ComplexMatrix sym(d, d);
    obj.set_point(v);
    const double start = obj.value();
    double climbed = 0.0;
    long it = 0;
    bool converged = false;
    for (; it < opts.max_iterations; ++it) {
        obj.gradient(g);
        sym.noalias() = v.adjoint() * g;
        sym = 0.5 * (sym + sym.adjoint()).eval();
        rg = g;
        rg.noalias() -= v * sym;
        const double gn2 = rg.squaredNorm();
        if (std::sqrt(gn2) <= opts.grad_tol) {
            converged = true;
            break;
        }
        if (start + climbed > opts.stop_above) break;
        // Steps below 1e-10 only move V by retraction rounding; failing to find
        // a larger one means the ascent sits at the noise floor of the gain.
        double t = 0.5;
        bool accepted = false;
        double gain = 0.0;
        while (t > 1e-10) {
            trial = v + t * rg;
            thin_q(trial);
            gain = obj.trial_gain(trial);
            if (gain >= kArmijo * t * gn2) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            converged = std::sqrt(gn2) <= 1e3 * opts.grad_tol;
            break;
        }
        obj.accept_trial();
        v.swap(trial);
        climbed += gain;
    }
    const double value = obj.value();
    if (climbed < 0.0 || value < start - 1e-12) throw std::logic_error("oracle ascent decreased the objective");
    return {value, std::move(v), it, converged};
}

}  // namespace

OracleResult oracle_maximize(const ComplexMatrix& w, double c0, int sub_dim, const OracleOptions& opts) {
    if (opts.restarts < 1) throw Error(ErrorCode::BadParameter, "oracle needs at least one restart");
    if (w.rows() != sub_dim * sub_dim || w.cols() != sub_dim * sub_dim) {
        throw Error(ErrorCode::DimensionMismatch, "response matrix does not match subsystem dimension");
    }
    const int n_ops = opts.n_ops > 0 ? opts.n_ops : sub_dim * sub_dim;
    std::vector<AscentOutcome> runs(static_cast<std::size_t>(opts.restarts));
    std::vector<char> done(runs.size(), 0);
    bool stop = false;

#pragma omp parallel for schedule(dynamic) num_threads(worker_count()) if (!omp_in_parallel())
    for (int r = 0; r < opts.restarts; ++r) {
        bool skip;
#pragma omp atomic read
        skip = stop;
        if (skip) continue;
        const KrausSet start = random_channel(sub_dim, n_ops, opts.seed + static_cast<std::uint64_t>(r));
        auto& run = runs[static_cast<std::size_t>(r)];
        run = riemannian_ascent(w, c0, sub_dim, n_ops, to_stiefel(start).v, opts);
        done[static_cast<std::size_t>(r)] = 1;
        if (run.value > opts.stop_above) {
#pragma omp atomic write
            stop = true;
        }
    }

    OracleResult out;
    out.stopped_early = stop;
    std::size_t winner = runs.size();
    for (std::size_t r = 0; r < runs.size(); ++r) {
        if (!done[r]) continue;
        ++out.restarts;
        out.per_restart.push_back(runs[r].value);
        out.iterations += runs[r].iterations;
        if (winner == runs.size() || runs[r].value > runs[winner].value) winner = r;
    }
    out.best = runs[winner].value;
    out.converged = runs[winner].converged;
    out.channel = from_stiefel(StiefelPoint{runs[winner].v});
    return out;
}

OracleResult oracle_maximize(const SystemModel& model, const ComplexMatrix& rho, const OracleOptions& opts) {
    const ComplexMatrix w = response_matrix(model.hamiltonian.matrix(), rho, model.dims);
    const double c0 = trace_product(model.hamiltonian.matrix(), rho);
    return oracle_maximize(w, c0, model.dims.sub, opts);
}

namespace {

double coherent_gain(double kappa) {
    const double m = std::sqrt(kappa * kappa + 4.0);
    return (kappa * kappa - kappa + (m + 2.0) * (1.0 + kappa)) / std::sqrt(m * (m + 2.0));
}

}  // namespace

CoherenceEvaluation coherence_delta_e(double kappa, const Eigenmixture& base, double r, double phi) {
    const SystemModel model = build_pair(kappa, 1.0);
    const CoherentState state = coherent_perturb(model, base, r);
    const double m = model.pair_m();
    const PairCoefficients pc = pair_coefficients(kappa, 1.0, pair_deltas(model, base));

    CoherenceEvaluation out;
    out.eta = pc.eta;
    out.xi = pc.xi;
    out.a = (2.0 / kappa) * std::sqrt((m - 2.0) / m) * (2.0 + (m + kappa) * (kappa + 1.0));
    const double s2 = std::sin(phi) * std::sin(phi);
    const double cot = std::cos(phi) / std::sin(phi);
    out.printed = (2.0 * s2 / (m * kappa)) * (r * out.a * cot - pc.eta - 2.0 * pc.xi);
    // r-term written as 2 sinφ cosφ · r·C to stay finite at φ = 0
    out.corrected = -2.0 * s2 * (pc.eta + pc.xi) + 2.0 * std::sin(phi) * std::cos(phi) * r * coherent_gain(kappa);
    out.direct = delta_e(model, state.rho, unitary_y(phi));
    return out;
}

double coherence_witness_limit(double kappa, const Eigenmixture& base, double r) {
    const SystemModel model = build_pair(kappa, 1.0);
    const PairCoefficients pc = pair_coefficients(kappa, 1.0, pair_deltas(model, base));
    const double loss = pc.eta + pc.xi;
    if (r <= 0.0 || loss <= 0.0) {
        throw Error(ErrorCode::NotApplicable, "witness limit needs r > 0 and a passive-side base state");
    }
    return std::atan(r * coherent_gain(kappa) / loss);
}

}  // namespace slp

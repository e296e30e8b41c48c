#include "rrbeam/rcb_mjio.hpp"

#include <cmath>

namespace rrbeam {

RcbMjioState make_rcb_mjio_state(const SteeringBank& bank, double forgetting, double delta,
                                 double mu_w, double mu_s, double mu_a, double epsilon,
                                 bool gram_schmidt) {
    if (!(epsilon > 0.0)) throw InvalidArgument("rcb-mjio: epsilon must be positive");
    RcbMjioState state{
        .base = make_mjio_state(bank, forgetting, delta, mu_w, mu_s),
        .bank = bank,
        .a_tilde = {},
        .lambda_rcb = 0.0,
        .epsilon = epsilon,
        .alpha_diff = {},
        .mu_a = mu_a,
        .gram_schmidt = gram_schmidt,
    };
    for (const auto& a_d : bank.candidates) state.alpha_diff.push_back(a_d - bank.assumed);
    if (gram_schmidt) state.base.s_matrix = rrbeam::gram_schmidt(state.base.s_matrix);
    state.a_tilde = bank_reduced_steering(state.base.s_matrix, bank);
    state.base.weights = state.a_tilde / state.a_tilde.squaredNorm();
    return state;
}

CVector bank_reduced_steering(const CMatrix& s_matrix, const SteeringBank& bank,
                              std::optional<Eigen::Index> skip) {
    CVector out(s_matrix.cols());
    for (Eigen::Index d = 0; d < s_matrix.cols(); ++d) {
        out(d) = (skip && *skip == d)
                     ? Complex(0.0)
                     : s_matrix.col(d).dot(bank.candidates[static_cast<std::size_t>(d)]);
    }
    return out;
}

std::optional<double> lagrange_multiplier_rcb(const RcbMjioState& state, Eigen::Index d,
                                              const CMatrix& reduced_inv) {
    const CMatrix& s = state.base.s_matrix;
    const CVector& alpha = state.alpha_diff[static_cast<std::size_t>(d)];
    const CVector& a_d = state.bank.candidates[static_cast<std::size_t>(d)];
    const Complex alpha_s = alpha.dot(s.col(d));
    const CVector u = (s.adjoint() * alpha) * alpha_s;
    const double u2 = u.squaredNorm();
    if (!(u2 > 1e-300)) return std::nullopt;
    const CVector v = reduced_inv * state.a_tilde * a_d.dot(s.col(d));
    // pinv(u) v = u^H v / u^H u; a real multiplier keeps the real least-squares part.
    return -(u.dot(v)).real() / u2;
}

std::optional<double> lagrange_multiplier_rcb(const RcbMjioState& state, Eigen::Index d) {
    return lagrange_multiplier_rcb(state, d, state.base.reduced_inv());
}

double combined_multiplier(const RcbMjioState& state, const CMatrix& reduced_inv) {
    double sum = 0.0;
    int count = 0;
    for (Eigen::Index d = 0; d < state.base.s_matrix.cols(); ++d) {
        if (auto lambda = lagrange_multiplier_rcb(state, d, reduced_inv)) {
            sum += *lambda;
            ++count;
        }
    }
    return count > 0 ? sum / count : 0.0;
}

double rcb_lagrangian(const CMatrix& s_matrix, const SteeringBank& bank, const CMatrix& reduced_inv,
                      double lambda, double epsilon) {
    const CVector a_tilde = bank_reduced_steering(s_matrix, bank);
    const CVector a_bar = reduced_steering(s_matrix, bank.assumed);
    const double quad = a_tilde.dot(reduced_inv * a_tilde).real();
    return quad + lambda * ((a_tilde - a_bar).squaredNorm() - epsilon);
}

CVector rcb_column_gradient(const CMatrix& s_matrix, const SteeringBank& bank,
                            const CMatrix& reduced_inv, double lambda, Eigen::Index d) {
    const auto idx = static_cast<std::size_t>(d);
    const CVector& a_d = bank.candidates[idx];
    const CVector alpha = a_d - bank.assumed;
    const CVector a_check = bank_reduced_steering(s_matrix, bank, d);
    const double tau = reduced_inv(d, d).real();
    const auto s_d = s_matrix.col(d);
    return a_d * a_check.dot(reduced_inv.col(d)) + tau * a_d * a_d.dot(s_d) +
           lambda * alpha * alpha.dot(s_d);
}

CVector rcb_steering_gradient(const CMatrix& reduced_inv, double lambda, const CVector& a_tilde) {
    if (lambda == 0.0) return CVector::Zero(a_tilde.size());
    const auto n = reduced_inv.rows();
    const CMatrix system = hermitian_part(reduced_inv) + lambda * CMatrix::Identity(n, n);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(system);
    const Eigen::VectorXd ev = eig.eigenvalues().cwiseAbs();
    if (!(ev.minCoeff() > 0.0) || ev.maxCoeff() / ev.minCoeff() > 1e12) {
        throw NumericalError("rcb steering update: ill-conditioned system");
    }
    const CVector coeff = eig.eigenvectors().adjoint() * a_tilde;
    return lambda * eig.eigenvectors() *
           (coeff.array() / eig.eigenvalues().array().cast<Complex>()).matrix();
}

CVector rank_two_solve(double tau, const CVector& a, double lambda, const CVector& alpha,
                       const CVector& rhs) {
    // Orthonormal basis of span{a, alpha}.
    CMatrix basis(a.size(), 2);
    Eigen::Index k = 0;
    for (const CVector* v : {&a, &alpha}) {
        CVector q = *v;
        for (Eigen::Index j = 0; j < k; ++j) q -= basis.col(j) * basis.col(j).dot(q);
        const double n = q.norm();
        if (n > 1e-12 * std::max(1.0, v->norm())) basis.col(k++) = q / n;
    }
    if (k == 0) return CVector::Zero(a.size());
    const auto q = basis.leftCols(k);

    const CVector qa = q.adjoint() * a;
    const CVector qalpha = q.adjoint() * alpha;
    CMatrix reduced = tau * qa * qa.adjoint() + lambda * qalpha * qalpha.adjoint();
    reduced += 1e-8 * CMatrix::Identity(k, k);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian_part(reduced));
    const Eigen::VectorXd& ev = eig.eigenvalues();
    const double cutoff = 1e-10 * ev.cwiseAbs().maxCoeff();
    CVector coeff = eig.eigenvectors().adjoint() * (q.adjoint() * rhs);
    for (Eigen::Index i = 0; i < k; ++i) {
        coeff(i) = std::abs(ev(i)) > cutoff ? coeff(i) / ev(i) : Complex(0.0);
    }
    return q * (eig.eigenvectors() * coeff);
}

CMatrix gram_schmidt(const CMatrix& s_matrix) {
    CMatrix q = s_matrix;
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
        const double original = s_matrix.col(j).norm();
        for (Eigen::Index i = 0; i < j; ++i) q.col(j) -= q.col(i) * q.col(i).dot(q.col(j));
        const double n = q.col(j).norm();
        if (!(n > 1e-12 * original) || !(original > 0.0)) {
            throw NumericalError("gram_schmidt: rank-deficient input");
        }
        q.col(j) /= n;
    }
    return q;
}

void rcb_mjio_sg_step(RcbMjioState& state, const CVector& x) {
    MjioState& base = state.base;
    base.power.update(x);
    const CMatrix& s = base.s_matrix;
    const CMatrix projected_inv = hermitian_part(s.adjoint() * base.tracker.r_inv() * s);

    state.lambda_rcb = combined_multiplier(state, projected_inv);
    if (state.mu_a != 0.0) {
        state.a_tilde -= state.mu_a * rcb_steering_gradient(projected_inv, state.lambda_rcb, state.a_tilde);
    }

    if (base.mu_s != 0.0) {
        const double scale = state.bank.assumed.squaredNorm() * projected_inv.trace().real();
        const double mu_s = scale > 0.0 ? base.mu_s / scale : 0.0;
        CMatrix next = s;
        for (Eigen::Index d = 0; d < s.cols(); ++d) {
            const double lambda_d = lagrange_multiplier_rcb(state, d, projected_inv).value_or(0.0);
            next.col(d) -= mu_s * rcb_column_gradient(s, state.bank, projected_inv, lambda_d, d);
        }
        base.s_matrix = state.gram_schmidt ? gram_schmidt(next) : std::move(next);
    }

    base.tracker.update(x);
    base.reduced.update(CVector(base.s_matrix.adjoint() * x));
    base.weights = reduced_mvdr_weights(base.reduced_inv(), state.a_tilde);
}

namespace {

void update_reduced_steering(RcbMjioState& state, const CMatrix& inv) {
    const auto cols = inv.rows();
    state.lambda_rcb = combined_multiplier(state, inv);
    if (std::abs(state.lambda_rcb) < 1e-14) return;
    const CMatrix system = CMatrix::Identity(cols, cols) + state.lambda_rcb * inv;
    state.a_tilde -= system.partialPivLu().solve(state.a_tilde);
}

// The column recursion can drive S and a_tilde toward zero; when the reduced
// MVDR denominator underflows the previous weights are kept.
void finish_reduced_rls(RcbMjioState& state, const CVector& x) {
    MjioState& base = state.base;
    base.reduced.update(CVector(base.s_matrix.adjoint() * x));
    try {
        base.weights = reduced_mvdr_weights(base.reduced_inv(), state.a_tilde);
    } catch (const NumericalError&) {
        ++state.held_weights;
    }
}

}  // namespace

void rcb_mjio_rls_step(RcbMjioState& state, const CVector& x) {
    MjioState& base = state.base;
    const CMatrix inv = base.reduced_inv();
    const auto cols = base.s_matrix.cols();

    update_reduced_steering(state, inv);

    const CMatrix& s = base.s_matrix;
    CMatrix next = s;
    for (Eigen::Index d = 0; d < cols; ++d) {
        const auto idx = static_cast<std::size_t>(d);
        const CVector& a_d = state.bank.candidates[idx];
        const double tau = inv(d, d).real();
        const double lambda_d = lagrange_multiplier_rcb(state, d, inv).value_or(0.0);
        const CVector a_check = bank_reduced_steering(s, state.bank, d);
        const CVector rhs = a_d * a_check.dot(inv.col(d));
        const CVector col = -rank_two_solve(tau, a_d, lambda_d, state.alpha_diff[idx], rhs);
        if (col.allFinite() && col.squaredNorm() > 0.0) next.col(d) = col;
    }
    base.s_matrix = state.gram_schmidt ? gram_schmidt(next) : std::move(next);

    finish_reduced_rls(state, x);
}

void rcb_fixed_projection_rls_step(RcbMjioState& state, const CMatrix& s_matrix, const CVector& x) {
    state.base.s_matrix = s_matrix;
    update_reduced_steering(state, state.base.reduced_inv());
    finish_reduced_rls(state, x);
}

}  // namespace rrbeam

#include "stiffmod/modal.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace stiffmod {

namespace {

bool is_symmetric(const Eigen::MatrixXd& A) {
    const double scale = std::max(1.0, A.norm());
    return (A - A.transpose()).norm() <= 1e-12 * scale;
}

// Sign convention: first component with non-negligible magnitude is positive.
void fix_shape_signs(Eigen::MatrixXd& shapes) {
    for (int j = 0; j < shapes.cols(); ++j) {
        const double scale = shapes.col(j).cwiseAbs().maxCoeff();
        for (int i = 0; i < shapes.rows(); ++i) {
            if (std::abs(shapes(i, j)) > 1e-9 * scale) {
                if (shapes(i, j) < 0.0) shapes.col(j) *= -1.0;
                break;
            }
        }
    }
}

// Recover alpha, beta from c_i = alpha + beta lambda_i. Exact under Rayleigh
// damping with at least two distinct eigenvalues; degenerate cases attribute
// everything to alpha.
void fit_rayleigh(ModalBasis& basis) {
    const int r = basis.mode_count();
    if (r >= 2 &&
        std::abs(basis.eigenvalues(r - 1) - basis.eigenvalues(0)) >
            1e-12 * std::abs(basis.eigenvalues(r - 1))) {
        const double l0 = basis.eigenvalues(0), l1 = basis.eigenvalues(r - 1);
        const double c0 = basis.modal_damping(0, 0), c1 = basis.modal_damping(r - 1, r - 1);
        basis.rayleigh_beta = (c1 - c0) / (l1 - l0);
        basis.rayleigh_alpha = c0 - basis.rayleigh_beta * l0;
    } else {
        basis.rayleigh_alpha = basis.modal_damping(0, 0);
        basis.rayleigh_beta = 0.0;
    }
}

} // namespace

double ModalBasis::frequency_hz(int i) const {
    return std::sqrt(eigenvalues(i)) / (2.0 * M_PI);
}

ModalBasis solve_basis(const Eigen::MatrixXd& M, const Eigen::MatrixXd& K,
                       const Eigen::MatrixXd& C) {
    if (!is_symmetric(M) || !is_symmetric(K) || !is_symmetric(C))
        throw std::invalid_argument("solve_basis: matrices must be symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("solve_basis: mass matrix must be positive definite");

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        K, M, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("solve_basis: eigensolver failed");

    ModalBasis basis;
    basis.eigenvalues = solver.eigenvalues();
    basis.mode_shapes = solver.eigenvectors();  // already Phi^T M Phi = I, ascending
    fix_shape_signs(basis.mode_shapes);
    basis.full_mass = M;
    basis.modal_mass = basis.mode_shapes.transpose() * M * basis.mode_shapes;
    basis.modal_damping = basis.mode_shapes.transpose() * C * basis.mode_shapes;
    basis.modal_stiffness = basis.mode_shapes.transpose() * K * basis.mode_shapes;
    fit_rayleigh(basis);
    return basis;
}

ModalBasis solve_basis(const SystemModel& model, StiffnessPhase phase) {
    const auto red = reduce_system(model, phase);
    ModalBasis basis = solve_basis(red.M, red.K, red.C);
    basis.phase = phase;
    basis.mode_shapes = (red.B * basis.mode_shapes).eval();  // embed
    basis.full_mass = model.mass_matrix();
    basis.rayleigh_alpha = model.rayleigh_alpha();
    basis.rayleigh_beta = model.rayleigh_beta();
    return basis;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd>
to_modal(const ModalBasis& basis, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    if (u.size() != basis.full_dofs() || v.size() != basis.full_dofs())
        throw std::invalid_argument("to_modal: dimension mismatch");
    const Eigen::MatrixXd PtM = basis.mode_shapes.transpose() * basis.full_mass;
    return {PtM * u, PtM * v};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd>
from_modal(const ModalBasis& basis, const Eigen::VectorXd& q, const Eigen::VectorXd& q_dot) {
    if (q.size() != basis.mode_count() || q_dot.size() != basis.mode_count())
        throw std::invalid_argument("from_modal: dimension mismatch");
    return {basis.mode_shapes * q, basis.mode_shapes * q_dot};
}

Eigen::VectorXd change_basis(const Eigen::VectorXd& q_from,
                             const ModalBasis& basis_from, const ModalBasis& basis_to) {
    if (basis_from.full_dofs() != basis_to.full_dofs())
        throw std::invalid_argument("change_basis: bases over different node sets");
    if (q_from.size() != basis_from.mode_count())
        throw std::invalid_argument("change_basis: dimension mismatch");
    const Eigen::VectorXd u = basis_from.mode_shapes * q_from;
    return basis_to.mode_shapes.transpose() * basis_to.full_mass * u;
}

ModalBasis global_scaling_predicts(const ModalBasis& basis_low, double gamma) {
    if (!(gamma > 0.0))
        throw std::invalid_argument("global_scaling_predicts: gamma must be positive");
    ModalBasis scaled = basis_low;
    scaled.phase = StiffnessPhase::High;
    scaled.eigenvalues *= gamma;
    scaled.modal_stiffness *= gamma;
    const int r = scaled.mode_count();
    scaled.modal_damping = Eigen::MatrixXd::Zero(r, r);
    for (int i = 0; i < r; ++i)
        scaled.modal_damping(i, i) =
            basis_low.rayleigh_alpha + basis_low.rayleigh_beta * scaled.eigenvalues(i);
    return scaled;
}

} // namespace stiffmod

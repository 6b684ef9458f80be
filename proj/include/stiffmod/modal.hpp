#pragma once

#include "stiffmod/model.hpp"

#include <utility>

namespace stiffmod {

/// Mass-normalized modal basis of one stiffness phase.
///
/// For constrained phases the eigenproblem is solved on the reduced
/// coordinate set and the shapes are embedded back into full coordinates
/// (zeros at locked nodes, equal entries at merged nodes), so q = Phi^T M u
/// and u = Phi q hold verbatim with the full-size mass matrix for any
/// constraint-consistent state.
struct ModalBasis {
    StiffnessPhase phase = StiffnessPhase::Low;
    Eigen::VectorXd eigenvalues;      ///< ascending, lambda_i = omega_i^2 [rad^2/s^2]
    Eigen::MatrixXd mode_shapes;      ///< n x r, embedded, Phi^T M Phi = I
    Eigen::MatrixXd modal_mass;       ///< r x r, identity to solver precision
    Eigen::MatrixXd modal_damping;    ///< r x r, diagonal under Rayleigh damping
    Eigen::MatrixXd modal_stiffness;  ///< r x r, diag(lambda)
    Eigen::MatrixXd full_mass;        ///< n x n M used for projections
    double rayleigh_alpha = 0.0;      ///< recovered from the modal damping diagonal
    double rayleigh_beta = 0.0;

    int full_dofs() const { return static_cast<int>(mode_shapes.rows()); }
    int mode_count() const { return static_cast<int>(eigenvalues.size()); }

    /// Natural frequency of mode i (0-based) in Hz.
    double frequency_hz(int i) const;

    /// Modal damping diagonal entry alpha + beta lambda_i.
    double modal_damping_coeff(int i) const { return modal_damping(i, i); }
};

/// Solve K phi = lambda M phi for symmetric K and s.p.d. M; shapes are
/// mass-normalized, eigenvalues ascending, the first nonzero component of
/// each shape is positive. Throws std::invalid_argument on non-symmetric
/// input or an indefinite mass matrix.
ModalBasis solve_basis(const Eigen::MatrixXd& M, const Eigen::MatrixXd& K,
                       const Eigen::MatrixXd& C);

/// Basis of a model phase, with constraint reduction and embedding applied
/// and the exact Rayleigh coefficients carried over.
ModalBasis solve_basis(const SystemModel& model, StiffnessPhase phase);

/// Physical -> modal: q = Phi^T M u, q_dot = Phi^T M v.
std::pair<Eigen::VectorXd, Eigen::VectorXd>
to_modal(const ModalBasis& basis, const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Modal -> physical: u = Phi q, v = Phi q_dot.
std::pair<Eigen::VectorXd, Eigen::VectorXd>
from_modal(const ModalBasis& basis, const Eigen::VectorXd& q, const Eigen::VectorXd& q_dot);

/// Convert modal coordinates between bases of the same node set via physical
/// space. Applies to displacements and velocities alike.
Eigen::VectorXd change_basis(const Eigen::VectorXd& q_from,
                             const ModalBasis& basis_from, const ModalBasis& basis_to);

/// Predicted basis after a proportional (global) stiffness scaling: same
/// shapes, eigenvalues scaled by gamma, damping diagonal alpha + beta gamma
/// lambda_i. Must coincide with solve_basis of the scaled matrices.
ModalBasis global_scaling_predicts(const ModalBasis& basis_low, double gamma);

} // namespace stiffmod

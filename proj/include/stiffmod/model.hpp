#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace stiffmod {

/// The two stiffness states of the switched control logic.
enum class StiffnessPhase { Low, High };

inline const char* to_string(StiffnessPhase p) {
    return p == StiffnessPhase::Low ? "low" : "high";
}

/// Sentinel for a spring that becomes rigid in the high-stiffness phase.
/// Rigid springs are realized as node constraints, never as large numbers.
constexpr double kInfiniteStiffness = std::numeric_limits<double>::infinity();

/// Linear spring between two nodes (node 0 is ground). In the low phase the
/// spring acts with base_stiffness; in the high phase with
/// scale_high * base_stiffness.
struct SpringElement {
    int id = 0;               ///< 1-based element id
    int node_a = 0;           ///< first endpoint, 0 = ground
    int node_b = 0;           ///< second endpoint, 0 = ground
    double base_stiffness = 0.0;  ///< k0 [N/m], > 0
    double scale_high = 1.0;      ///< gamma >= 1, or kInfiniteStiffness

    bool rigid_in_high() const { return std::isinf(scale_high); }
};

/// Phase-conditional kinematic constraint.
struct Constraint {
    enum class Kind { LockNode, MergeNodes };
    Kind kind = Kind::LockNode;
    StiffnessPhase phase = StiffnessPhase::High;
    int node_a = 0;           ///< locked node, or first merged node (1-based)
    int node_b = 0;           ///< second merged node (MergeNodes only)
};

/// Assembled second-order system matrices M u'' + C u' + K u = f.
struct SystemMatrices {
    Eigen::MatrixXd M, K, C;
};

/// Reduction of a constrained phase to independent coordinates w, u = B w.
/// project_state = (B^T M B)^{-1} B^T M maps full states to reduced ones;
/// for a node lock it drops the locked coordinate, for a merge it yields the
/// momentum-conserving mass-weighted mean.
struct ReducedSystem {
    Eigen::MatrixXd B;             ///< n x r embedding, u = B w
    Eigen::MatrixXd M, K, C;       ///< r x r reduced matrices
    Eigen::MatrixXd project_state; ///< r x n
    std::vector<int> locked_nodes; ///< 1-based, empty when unconstrained

    int full_dofs() const { return static_cast<int>(B.rows()); }
    int reduced_dofs() const { return static_cast<int>(B.cols()); }
};

/// Lumped-parameter spring-mass system with Rayleigh damping and switched
/// stiffness. Immutable after construction; assembly is a pure function of
/// the phase, so one model can be shared across concurrent simulations.
class SystemModel {
public:
    SystemModel(std::vector<double> masses,
                std::vector<SpringElement> springs,
                double rayleigh_alpha, double rayleigh_beta,
                std::vector<Constraint> constraints = {});

    int dof_count() const { return static_cast<int>(masses_.size()); }
    const std::vector<double>& masses() const { return masses_; }
    const std::vector<SpringElement>& springs() const { return springs_; }
    double rayleigh_alpha() const { return alpha_; }
    double rayleigh_beta() const { return beta_; }
    const std::vector<Constraint>& declared_constraints() const { return constraints_; }

    Eigen::MatrixXd mass_matrix() const;
    Eigen::MatrixXd stiffness_matrix(StiffnessPhase phase) const;
    Eigen::MatrixXd damping_matrix(StiffnessPhase phase) const;

    /// Effective stiffness of one spring in the given phase. Rigid springs
    /// (gamma = inf) contribute via constraints, not via the matrix, so this
    /// returns 0 for them in the high phase.
    double spring_stiffness(const SpringElement& s, StiffnessPhase phase) const;

    /// Signed elongation u_a - u_b of a spring (ground displacement = 0).
    double spring_elongation(const SpringElement& s, const Eigen::VectorXd& u) const;

    /// Declared constraints for the phase plus node locks implied by rigid
    /// springs. Deterministic order.
    std::vector<Constraint> active_constraints(StiffnessPhase phase) const;

    bool has_constraints(StiffnessPhase phase) const {
        return !active_constraints(phase).empty();
    }

private:
    std::vector<double> masses_;
    std::vector<SpringElement> springs_;
    double alpha_ = 0.0;
    double beta_ = 0.0;
    std::vector<Constraint> constraints_;
};

/// Assemble M, K(phase), C(phase) with C = alpha M + beta K(phase); the
/// damping tracks the active stiffness matrix.
SystemMatrices assemble_matrices(const SystemModel& model, StiffnessPhase phase);

/// Reduce the phase's system to independent coordinates (identity reduction
/// when the phase has no constraints).
ReducedSystem reduce_system(const SystemModel& model, StiffnessPhase phase);

/// Stiffness of two springs in series, k1 k2 / (k1 + k2). Either argument may
/// be kInfiniteStiffness, in which case the other value is returned.
double serial_stiffness(double k1, double k2);

/// Duration (pi/2) sqrt(m/k) of one switching quarter cycle of an undamped
/// oscillator.
double quarter_cycle_period(double mass, double stiffness);

/// The serial two-DoF model used throughout: k01 = 825 N/m (ground-node 1),
/// k02 = 300 N/m (node 1-node 2), m = {0.01, 1.5} kg, alpha = 0.1 1/s,
/// beta = 0.001 s. Scaling factors default to 1; scenario presets override
/// them per case.
SystemModel reference_model(double gamma1 = 1.0, double gamma2 = 1.0);

} // namespace stiffmod

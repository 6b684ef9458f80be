#include "stiffmod/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace stiffmod {

SystemModel::SystemModel(std::vector<double> masses,
                         std::vector<SpringElement> springs,
                         double rayleigh_alpha, double rayleigh_beta,
                         std::vector<Constraint> constraints)
    : masses_(std::move(masses)),
      springs_(std::move(springs)),
      alpha_(rayleigh_alpha),
      beta_(rayleigh_beta),
      constraints_(std::move(constraints)) {
    const int n = dof_count();
    if (n == 0) throw std::invalid_argument("model: needs at least one node");
    for (double m : masses_) {
        if (!(m > 0.0)) throw std::invalid_argument("model: all masses must be positive");
    }
    if (alpha_ < 0.0 || beta_ < 0.0)
        throw std::invalid_argument("model: Rayleigh coefficients must be nonnegative");
    for (const auto& s : springs_) {
        if (s.node_a < 0 || s.node_a > n || s.node_b < 0 || s.node_b > n)
            throw std::invalid_argument("model: spring endpoint out of range");
        if (s.node_a == s.node_b)
            throw std::invalid_argument("model: spring endpoints coincide");
        if (!(s.base_stiffness > 0.0))
            throw std::invalid_argument("model: spring base stiffness must be positive");
        if (!(s.scale_high >= 1.0))  // also rejects NaN; inf passes
            throw std::invalid_argument("model: spring scale factor must be >= 1 or infinite");
        if (s.rigid_in_high() && s.node_a != 0 && s.node_b != 0)
            throw std::invalid_argument(
                "model: rigid spring " + std::to_string(s.id) +
                " has no ground endpoint; its lock target is ambiguous");
    }
    for (const auto& c : constraints_) {
        if (c.node_a < 1 || c.node_a > n)
            throw std::invalid_argument("model: constraint node out of range");
        if (c.kind == Constraint::Kind::MergeNodes &&
            (c.node_b < 1 || c.node_b > n || c.node_b == c.node_a))
            throw std::invalid_argument("model: merge constraint needs two distinct nodes");
    }
}

Eigen::MatrixXd SystemModel::mass_matrix() const {
    const int n = dof_count();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) M(i, i) = masses_[static_cast<size_t>(i)];
    return M;
}

double SystemModel::spring_stiffness(const SpringElement& s, StiffnessPhase phase) const {
    if (phase == StiffnessPhase::Low) return s.base_stiffness;
    if (s.rigid_in_high()) return 0.0;  // realized as a node lock instead
    return s.scale_high * s.base_stiffness;
}

double SystemModel::spring_elongation(const SpringElement& s, const Eigen::VectorXd& u) const {
    const double ua = s.node_a == 0 ? 0.0 : u(s.node_a - 1);
    const double ub = s.node_b == 0 ? 0.0 : u(s.node_b - 1);
    return ua - ub;
}

Eigen::MatrixXd SystemModel::stiffness_matrix(StiffnessPhase phase) const {
    const int n = dof_count();
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
    for (const auto& s : springs_) {
        const double k = spring_stiffness(s, phase);
        if (k == 0.0) continue;
        const int a = s.node_a - 1;  // -1 = ground
        const int b = s.node_b - 1;
        if (a >= 0) K(a, a) += k;
        if (b >= 0) K(b, b) += k;
        if (a >= 0 && b >= 0) {
            K(a, b) -= k;
            K(b, a) -= k;
        }
    }
    return K;
}

Eigen::MatrixXd SystemModel::damping_matrix(StiffnessPhase phase) const {
    return alpha_ * mass_matrix() + beta_ * stiffness_matrix(phase);
}

std::vector<Constraint> SystemModel::active_constraints(StiffnessPhase phase) const {
    std::vector<Constraint> out;
    for (const auto& c : constraints_) {
        if (c.phase == phase) out.push_back(c);
    }
    if (phase == StiffnessPhase::High) {
        for (const auto& s : springs_) {
            if (!s.rigid_in_high()) continue;
            Constraint lock;
            lock.kind = Constraint::Kind::LockNode;
            lock.phase = StiffnessPhase::High;
            lock.node_a = s.node_a == 0 ? s.node_b : s.node_a;
            out.push_back(lock);
        }
    }
    return out;
}

SystemMatrices assemble_matrices(const SystemModel& model, StiffnessPhase phase) {
    SystemMatrices sm;
    sm.M = model.mass_matrix();
    sm.K = model.stiffness_matrix(phase);
    sm.C = model.rayleigh_alpha() * sm.M + model.rayleigh_beta() * sm.K;
    return sm;
}

ReducedSystem reduce_system(const SystemModel& model, StiffnessPhase phase) {
    const int n = model.dof_count();
    const auto constraints = model.active_constraints(phase);

    // Group index per node: locked nodes get -1, merged nodes share a group.
    std::vector<int> group(static_cast<size_t>(n));
    std::iota(group.begin(), group.end(), 0);
    std::set<int> locked;
    for (const auto& c : constraints) {
        if (c.kind == Constraint::Kind::LockNode) {
            locked.insert(c.node_a - 1);
        } else {
            const int a = c.node_a - 1, b = c.node_b - 1;
            const int target = std::min(group[static_cast<size_t>(a)], group[static_cast<size_t>(b)]);
            const int from = std::max(group[static_cast<size_t>(a)], group[static_cast<size_t>(b)]);
            for (auto& g : group)
                if (g == from) g = target;
        }
    }
    for (int i : locked) group[static_cast<size_t>(i)] = -1;

    // Compress group ids to 0..r-1 in first-appearance order.
    std::vector<int> order;
    for (int g : group) {
        if (g < 0) continue;
        if (std::find(order.begin(), order.end(), g) == order.end()) order.push_back(g);
    }
    const int r = static_cast<int>(order.size());
    if (r == 0) throw std::invalid_argument("reduce_system: all nodes constrained away");

    ReducedSystem red;
    red.B = Eigen::MatrixXd::Zero(n, r);
    for (int i = 0; i < n; ++i) {
        const int g = group[static_cast<size_t>(i)];
        if (g < 0) continue;
        const auto it = std::find(order.begin(), order.end(), g);
        red.B(i, static_cast<int>(it - order.begin())) = 1.0;
    }
    for (int i : locked) red.locked_nodes.push_back(i + 1);

    const auto sm = assemble_matrices(model, phase);
    red.M = red.B.transpose() * sm.M * red.B;
    red.K = red.B.transpose() * sm.K * red.B;
    red.C = red.B.transpose() * sm.C * red.B;
    red.project_state = red.M.llt().solve(red.B.transpose() * sm.M);
    return red;
}

double serial_stiffness(double k1, double k2) {
    if (std::isinf(k1) && std::isinf(k2))
        throw std::domain_error("serial_stiffness: both springs rigid");
    if (std::isinf(k1)) {
        if (!(k2 > 0.0)) throw std::domain_error("serial_stiffness: stiffness must be positive");
        return k2;
    }
    if (std::isinf(k2)) {
        if (!(k1 > 0.0)) throw std::domain_error("serial_stiffness: stiffness must be positive");
        return k1;
    }
    if (!(k1 > 0.0) || !(k2 > 0.0))
        throw std::domain_error("serial_stiffness: stiffness must be positive");
    return k1 * k2 / (k1 + k2);
}

double quarter_cycle_period(double mass, double stiffness) {
    if (!(mass > 0.0) || !(stiffness > 0.0))
        throw std::domain_error("quarter_cycle_period: mass and stiffness must be positive");
    return 0.5 * M_PI * std::sqrt(mass / stiffness);
}

SystemModel reference_model(double gamma1, double gamma2) {
    std::vector<SpringElement> springs{
        {1, 0, 1, 825.0, gamma1},
        {2, 1, 2, 300.0, gamma2},
    };
    return SystemModel({0.01, 1.5}, std::move(springs), 0.1, 0.001);
}

} // namespace stiffmod

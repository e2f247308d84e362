#pragma once

#include <array>
#include <vector>

#include "bellgame/game.hpp"

namespace bellgame {

// Joint probability of every move profile in every type sector,
// values[sector][move] with the index conventions of GameSpec.
struct JointProbTensor {
    int n_players = 0;
    std::vector<std::vector<double>> sectors;

    std::size_t n_sectors() const { return sectors.size(); }
    std::size_t n_moves() const { return sectors.empty() ? 0 : sectors[0].size(); }
    double at(std::size_t sector, std::size_t move) const { return sectors[sector][move]; }
};

// Per-(player, type) single-player move distribution (p0, p1).
struct SinglePlayerProbs {
    std::vector<std::vector<std::array<double, 2>>> p;  // [player][type]
};

// Split of the entangled joint probability into the part expressible with
// factorized single-player probabilities (a convex mixture of two product
// tensors, hence classically simulable) and the interference cross term,
// which carries sign (-1)^(A+B+...) and magnitude cos(phi) sin(gamma)
// prod_k (sin(theta_k)/2). The two tensors sum to quantum_joint entrywise.
struct ProbDecomposition {
    JointProbTensor pseudo_classical;
    JointProbTensor interference;  // signed; each sector sums to 0
};

// p0 = cos^2(theta/2), p1 = sin^2(theta/2) for every (player, type).
SinglePlayerProbs single_player_probs(const StrategyProfile& profile);

// Factorized tensor: P[sector][moves] = prod_k p^{[type_k]}_{move_k}.
JointProbTensor classical_joint(const StrategyProfile& profile);

// Two-player entangled tensor |<AB| U_a V_b |Phi_{gamma,phi}>|^2, computed by
// explicit complex amplitude arithmetic on the 4-dimensional state.
JointProbTensor quantum_joint(const StrategyProfile& profile, const CoordinatorParams& coord);

// N-player generalization with shared state
// cos(gamma/2)|0..0> + e^{i phi} sin(gamma/2)|1..1> and per-player rotations.
// Equals quantum_joint when n == 2 and classical_joint when gamma == 0.
JointProbTensor quantum_joint_nparty(const StrategyProfile& profile, const CoordinatorParams& coord, int n);

// Two players only.
ProbDecomposition decompose(const StrategyProfile& profile, const CoordinatorParams& coord);

// Entrywise derivative of quantum_joint_nparty with respect to the rotation
// angle of (player, type); sectors not involving that type are zero. Each
// sector of the result sums to 0.
JointProbTensor joint_prob_derivative(const StrategyProfile& profile, const CoordinatorParams& coord,
                                      int player, int type);

}  // namespace bellgame

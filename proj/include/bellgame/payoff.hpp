#pragma once

#include <vector>

#include "bellgame/probability.hpp"

namespace bellgame {

// Sector payoffs plus type-averaged totals, one entry per player.
struct PayoffVector {
    std::vector<double> total;                 // [player]
    std::vector<std::vector<double>> sector;   // [player][sector]
};

// Delta functionals of the extended game. At the maximally entangled
// Bayesian Nash point both equal (sqrt(2)-1)/2: the raw difference
// cos^2(pi/8) - 3 sin^2(pi/8) = sqrt(2)-1 picks up a factor 1/2 from the
// cos^2(gamma/2) = sin^2(gamma/2) = 1/2 weights at gamma = pi/2, which keeps
// the value consistent with both the Cereceda/Cirel'son ceiling and the
// equilibrium payoffs.
struct DeltaPair {
    double delta00 = 0.0;
    double delta11 = 0.0;
};

// Per-player split of the total payoff into the classically simulable
// mixed-matrix part and the interference part.
struct PayoffDecomposition {
    std::vector<double> pseudo_classical;  // [player]
    std::vector<double> interference;      // [player]
    std::vector<double> total;             // sum of the two
};

// Signed selection of tensor entries; evaluates sum coeff * P[sector][move].
// One code path serves the Delta functionals and every Bell-type inequality.
struct SignedTerm {
    std::size_t sector = 0;
    std::size_t move = 0;
    double coeff = 1.0;
};
double eval_selection(const JointProbTensor& probs, const std::vector<SignedTerm>& terms);

// Sector part only (totals left empty).
PayoffVector sector_payoffs(const JointProbTensor& probs, const GameSpec& spec);

// Fills totals from the sector part: total_k = sum_s weight(s) * sector_k[s].
PayoffVector total_payoffs(PayoffVector with_sectors, const GameSpec& spec);

// Convenience: quantum tensor -> sector payoffs -> totals.
PayoffVector payoffs_for(const StrategyProfile& profile, const CoordinatorParams& coord, const GameSpec& spec);

DeltaPair delta_pair(const JointProbTensor& probs);

PayoffDecomposition payoff_decomposition(const StrategyProfile& profile, const CoordinatorParams& coord,
                                         const GameSpec& spec);

// Analytic d(total payoff of player)/d(angle of (player_angle, type)),
// via amplitude differentiation of the joint probability tensor.
double payoff_gradient(const StrategyProfile& profile, const CoordinatorParams& coord, const GameSpec& spec,
                       int player, int type);

// The total payoff of `player` as a function of a single angle is exactly
// a*cos(theta) + b*sin(theta) + c. Recovered from three exact evaluations;
// used for best responses, deviation certificates and the violation search.
struct TrigForm {
    double a = 0.0, b = 0.0, c = 0.0;
    double eval(double theta) const { return a * std::cos(theta) + b * std::sin(theta) + c; }
    double amplitude() const { return std::hypot(a, b); }
    double max_value() const { return c + amplitude(); }
    double argmax_circle() const;  // in [0, 2*pi)
};

// Form of payoff_of(player) in the angle of (angle_player, angle_type), all
// other angles held at `profile`.
TrigForm payoff_angle_form(const StrategyProfile& profile, const CoordinatorParams& coord, const GameSpec& spec,
                           int player, int angle_player, int angle_type);

}  // namespace bellgame

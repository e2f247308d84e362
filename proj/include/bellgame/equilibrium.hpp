#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bellgame/payoff.hpp"

namespace bellgame {

struct SolverConfig {
    int n_starts = 200;
    int br_max_iters = 300;
    double tol_stat = 1e-8;         // stationarity gate for interior points
    double tol_dev = 1e-7;          // deviation-margin gate
    int deviation_grid_size = 1441; // quarter-degree spacing over [0, 2*pi)
    double dedup_radius = 1e-4;     // circular L-inf radius in angle space
    std::uint64_t seed = kDefaultSeed;
};

struct BestResponse {
    double angle = 0.0;   // argmax of the responder's payoff over the circle
    bool flat = false;    // payoff independent of this angle; angle set to 0
    double payoff = 0.0;  // responder's total payoff at `angle`
};

// Exact single-angle maximization: the responder's payoff in one own angle is
// a*cos(theta) + b*sin(theta) + c, so the optimum is closed-form.
BestResponse best_response(const GameSpec& spec, const CoordinatorParams& coord, const StrategyProfile& profile,
                           int player, int type);

enum class EqClass { Interior, Edge, FamilyMember };

struct EquilibriumReport {
    StrategyProfile profile;
    CoordinatorParams coord;
    PayoffVector payoffs;
    // Closed-form equilibrium-condition residuals per (player, type), flat
    // index player*2+type. For 2-player 2-type games these are the four
    // trigonometric conditions; they are pure functions of the angles and
    // cos(phi)*sin(gamma).
    std::vector<double> stationarity_residuals;
    // |d total payoff / d angle| per (player, type): the true stationarity
    // measure for arbitrary payoff tensors.
    std::vector<double> gradient_residuals;
    // max over unilateral deviations of (deviating payoff - payoff here).
    std::vector<double> deviation_margins;
    EqClass classification = EqClass::Interior;
    std::vector<std::string> family_constraints;
    // Ids (1..8) of every classical family pattern the point lies on. The
    // families intersect at corner profiles, so a point can belong to two;
    // the solver puts the family a report represents first.
    std::vector<int> classical_families;
    bool quantum_family = false;
    bool quantum_mirror = false;
    std::vector<std::pair<int, int>> flat_directions;  // (player, type)
    bool accepted = false;

    double max_deviation_margin() const;
    double max_gradient_residual() const;
};

// Deviation and stationarity certificate for a candidate profile.
EquilibriumReport verify_equilibrium(const GameSpec& spec, const CoordinatorParams& coord,
                                     const StrategyProfile& profile, const SolverConfig& cfg = {});

struct SolveResult {
    std::vector<EquilibriumReport> equilibria;
    int starts = 0;
    int converged = 0;
    int rejected = 0;
    int non_converged = 0;
};

// Multi-start damped simultaneous best-response iteration (2-player games),
// every converged point re-verified by the deviation certificate, family
// members merged. Deterministic for a fixed config.
SolveResult find_equilibria(const GameSpec& spec, const CoordinatorParams& coord, const SolverConfig& cfg = {});

// One of the eight continuous classical equilibrium families: three angles
// pinned to 0 or pi, one angle free.
struct ClassicalFamily {
    int id = 0;                       // 1..8
    std::array<double, 4> fixed{};    // slots (a0, a1, b0, b1); NaN = free
    int free_slot = 0;
    std::string description;

    StrategyProfile member(double free_angle) const;
    bool matches(const StrategyProfile& profile, double radius) const;
};

// The eight families of the extended Battle of Sexes. Throws on other games.
std::vector<ClassicalFamily> enumerate_classical_families(const GameSpec& spec);

// The three linear angle relations of the maximally entangled equilibrium
// set (offsets pi/4, 3*pi/4, 5*pi/4, mod 2*pi); one free direction remains.
struct QuantumFamilyConstraints {
    std::array<double, 3> offsets{};
    std::vector<std::string> descriptions;

    std::array<double, 3> residuals(const StrategyProfile& profile) const;
    int constraint_count() const { return 3; }
    int free_dimensions() const { return 1; }
    // Member with alpha[0] = seed, remaining angles from the relations.
    StrategyProfile member(double seed_alpha0) const;
};

// Requires cos(phi)*sin(gamma) = 1 (i.e. gamma = pi/2, phi = 0); throws
// std::invalid_argument("unsupported coordinator point ...") otherwise.
QuantumFamilyConstraints quantum_family_constraints(const CoordinatorParams& coord);

// The four closed-form equilibrium conditions for 2-player 2-type games,
// in the general-entanglement form (coefficient cos(phi)*sin(gamma)).
std::array<double, 4> eq_condition_residuals(const StrategyProfile& profile, const CoordinatorParams& coord);

// The same conditions specialized to maximal entanglement, written as sine
// differences of angle offsets. Used as a cross-check of the general form.
std::array<double, 4> max_entangled_residuals(const StrategyProfile& profile);

}  // namespace bellgame

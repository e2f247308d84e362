#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellgame/common.hpp"

namespace bellgame {

// Incomplete-information game: each player privately draws one of two types,
// then picks one of two moves. Payoffs are real tensors indexed by the joint
// type profile (sector) and the joint move profile.
//
// Index conventions (used by every module):
//   * sector index: type profile read as a binary number, player 0 most
//     significant ("01" -> 1 for two players);
//   * move index: move profile read the same way ("10" -> 2).
struct GameSpec {
    std::string name;
    std::vector<std::string> player_names;
    // type_dist[player][type]: probability of the player drawing that type.
    std::vector<std::vector<double>> type_dist;
    // payoffs[player][sector][move].
    std::vector<std::vector<std::vector<double>>> payoffs;

    int n_players() const { return static_cast<int>(player_names.size()); }
    int types_of(int player) const { return static_cast<int>(type_dist[player].size()); }
    std::size_t n_sectors() const;
    std::size_t n_moves() const { return std::size_t{1} << n_players(); }

    // Probability of the given type profile under the product of type_dist.
    double sector_weight(std::size_t sector) const;
};

struct ValidationIssue {
    std::string message;
};

struct ValidationResult {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
};

// Structural validation: type distributions normalized, payoff tensor shapes,
// finite entries. Violations are returned, never thrown.
ValidationResult validate(const GameSpec& spec);

// One rotation angle per (player, type), radians on [0, 2*pi]. The classical
// single-player mixture is cos^2(theta/2) for move 0, so [0, pi] already spans
// all mixtures; the full circle is needed so that the entangled equilibrium
// relations (offsets up to 5*pi/4) are representable.
struct StrategyProfile {
    std::vector<std::vector<double>> angles;  // [player][type]

    int n_players() const { return static_cast<int>(angles.size()); }
};

// Entanglement parameters of the shared initial state held by the game
// coordinator: cos(gamma/2)|00...0> + e^{i phi} sin(gamma/2)|11...1>.
struct CoordinatorParams {
    double gamma = 0.0;  // [0, pi]
    double phi = 0.0;    // [0, pi] after canonical reduction
};

// Validates gamma in [0, pi]; phi is accepted in [0, 2*pi) and reduced to
// [0, pi] via phi -> 2*pi - phi (only cos(phi) ever enters a probability).
CoordinatorParams make_coordinator(double gamma, double phi);

// Throws std::invalid_argument if the profile shape does not match the spec
// or any angle is outside [0, 2*pi].
void check_profile(const StrategyProfile& profile, int n_players);
void check_profile(const StrategyProfile& profile, const GameSpec& spec);
void check_coordinator(const CoordinatorParams& coord);

// Two-player extension of Battle of Sexes: the main sector [00] is a Battle
// of Sexes with weights (3, 1), the shadow sectors are Chicken-type blocks
// with mirrored negative weights. Bob's tensor is Alice's with both move
// labels flipped in every sector.
GameSpec builtin_extended_bos();

// Three-player built-in with the same sparse +/-(3,1) structure on the
// all-zeros / all-ones move diagonal. The third player's tensor is not part
// of the published game definition; the default uses weight pair (+2, +2) on
// the same support with mirrored negatives and can be overridden by loading
// an edited game file.
GameSpec builtin_three_player();

// True when the spec matches builtin_extended_bos() entrywise (1e-12).
bool is_extended_bos(const GameSpec& spec);

// Resolves "builtin:<name>" or reads a game definition file from disk.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses the JSON game-definition document. Throws ParseError on malformed
// documents (message names the offending key or locus) and ValidationError
// when the parsed spec fails validate().
GameSpec load_game(const std::string& text);
std::string save_game(const GameSpec& spec);

// Strategy document: {"angles": {"<player>": [t0, t1]}, "gamma": g, "phi": p}.
struct StrategyDoc {
    StrategyProfile profile;
    CoordinatorParams coord;
};
StrategyDoc load_strategy(const std::string& text, const GameSpec& spec);
std::string save_strategy(const StrategyDoc& doc, const GameSpec& spec);

}  // namespace bellgame

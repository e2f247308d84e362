#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bellgame/payoff.hpp"

namespace bellgame {

// One elementary Bell-type inequality on sector probabilities:
//   positive term - sum(negative terms) <= 0 under factorizability,
//   and <= (sqrt(2)-1)/2 for any entangled tensor.
// Every variant touches all four type sectors; for two players there are
// exactly 64 of them, grouped into 16 quartets by correlator sign vector.
struct CerecedaVariant {
    SignedTerm positive;                 // coeff +1
    std::vector<SignedTerm> negatives;   // coeff -1 each, N+1 terms
    int quartet_id = -1;

    std::vector<SignedTerm> terms() const;
};

// Generated catalog for two players: the orbit of the base inequality under
// per-player type relabelings and per-(player, type) move relabelings,
// deduplicated. The published counts (64 variants, 16 quartets of 4) are
// asserted by the test suite rather than transcribed from a list.
struct VariantCatalog {
    std::vector<CerecedaVariant> variants;           // 64, canonically ordered
    std::vector<std::array<int, 4>> quartet_signs;   // [quartet][sector] = +-1
    int base_index = -1;      // index of the inequality with positive term ([00], 00)
    int mirror_base_index = -1;  // positive term ([00], 11)
};

const VariantCatalog& variant_catalog();

// For n == 2, the full 64-variant catalog. For n >= 3 only the two
// generalized forms are enumerated (all-zeros moves and all-ones moves).
std::vector<CerecedaVariant> enumerate_variants(int n_players);

double cereceda_lhs(const JointProbTensor& probs, const CerecedaVariant& variant);

// S = sum_t sign[t] * E[t] with E the sector correlator
// sum_m (-1)^(A+B) P[sector][m] and sign the quartet's own vector.
// For every tensor, the quartet's four LHS values sum to S - 2.
double chsh_value(const JointProbTensor& probs, int quartet_id);

struct BellReport {
    std::vector<double> lhs;              // per variant
    double max_lhs = 0.0;
    std::vector<int> classical_bound_violations;  // variants with LHS > 1e-12
    double cirelson_margin = 0.0;         // (sqrt(2)-1)/2 - max_lhs
    std::vector<double> chsh;             // per quartet
};

BellReport bell_report(const JointProbTensor& probs);

// N-party inequality: P^[0..0]_{0..0} - sum_k P^[single flip k]_{0..0}
// - P^[1..1]_{1..1} <= 0; `mirror` swaps all move labels.
double nparty_cereceda_lhs(const JointProbTensor& probs, int n, bool mirror);

struct SearchConfig {
    int n_starts = 100;
    int max_passes = 300;
    double tol = 1e-10;
    std::uint64_t seed = kDefaultSeed;
    std::optional<double> fixed_gamma;
    std::optional<double> fixed_phi;
};

struct SearchResult {
    double best_lhs = 0.0;
    StrategyProfile profile;
    CoordinatorParams coord;
};

// Multi-start exact coordinate ascent on the base inequality LHS over all
// strategy angles plus (gamma, phi). Every coordinate enters the objective
// as a*cos + b*sin + c, so each line maximization is closed-form.
SearchResult max_violation_search(int n, const SearchConfig& cfg = {});

}  // namespace bellgame

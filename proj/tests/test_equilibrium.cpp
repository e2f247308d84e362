#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <set>

#include "bellgame/bell.hpp"
#include "bellgame/equilibrium.hpp"
#include "oracles.hpp"

using namespace bellgame;

namespace {

StrategyProfile two_player(double a0, double a1, double b0, double b1) {
    StrategyProfile p;
    p.angles = {{a0, a1}, {b0, b1}};
    return p;
}

const double kQuantumPayoff = (std::sqrt(2.0) - 1.0) / 2.0;

SolverConfig fast_config() {
    SolverConfig cfg;
    cfg.n_starts = 60;
    return cfg;
}

}  // namespace

TEST_CASE("best response against a committed opponent (no entanglement)") {
    const GameSpec spec = builtin_extended_bos();
    const CoordinatorParams coord = make_coordinator(0.0, 0.0);
    const StrategyProfile p = two_player(1.0, 1.0, 0.0, kPi);  // Bob at (0, pi)
    const BestResponse br = best_response(spec, coord, p, 0, 0);
    CHECK_FALSE(br.flat);
    CHECK(br.angle == doctest::Approx(0.0));
}

TEST_CASE("best response flags flat directions and tie-breaks to zero") {
    const GameSpec spec = builtin_extended_bos();
    const CoordinatorParams coord = make_coordinator(0.0, 0.0);
    // Family with Bob's type-0 angle free: against Alice at (0, 0) and his
    // own type-1 angle at pi, Bob's type-0 payoff is constant.
    const StrategyProfile p = two_player(0.0, 0.0, 1.234, kPi);
    const BestResponse br = best_response(spec, coord, p, 1, 0);
    CHECK(br.flat);
    CHECK(br.angle == 0.0);
}

TEST_CASE("best response at maximal entanglement against offset opponent") {
    const GameSpec spec = builtin_extended_bos();
    const CoordinatorParams coord = make_coordinator(0.5 * kPi, 0.0);
    const StrategyProfile p = two_player(2.0, 1.0, 0.25 * kPi, 0.75 * kPi);
    const BestResponse br = best_response(spec, coord, p, 0, 0);
    CHECK_FALSE(br.flat);
    CHECK(circle_dist(br.angle, 0.0) <= 1e-12);
}

TEST_CASE("best response payoff dominates every grid point") {
    const GameSpec spec = builtin_extended_bos();
    oracles::RandomInputs rnd(13);
    for (int i = 0; i < 50; ++i) {
        const StrategyProfile p = rnd.profile_full_circle(2);
        const CoordinatorParams coord = rnd.coordinator();
        const int pl = static_cast<int>(rnd.rng() % 2);
        const int t = static_cast<int>(rnd.rng() % 2);
        const BestResponse br = best_response(spec, coord, p, pl, t);
        StrategyProfile probe = p;
        for (int g = 0; g < 721; ++g) {
            probe.angles[pl][t] = kTwoPi * g / 721.0;
            const double v = payoffs_for(probe, coord, spec).total[pl];
            CHECK(br.payoff >= v - 1e-12);
        }
    }
}

TEST_CASE("verification of a classical family member") {
    const GameSpec spec = builtin_extended_bos();
    const EquilibriumReport rep =
        verify_equilibrium(spec, make_coordinator(0.0, 0.0), two_player(0.0, kPi, 0.0, kPi / 3.0));
    for (double r : rep.stationarity_residuals) CHECK(r <= 1e-12);
    for (double m : rep.deviation_margins) CHECK(m <= 1e-12);
    CHECK(rep.accepted);
    CHECK(rep.classification == EqClass::FamilyMember);
    REQUIRE_FALSE(rep.classical_families.empty());
    CHECK(rep.classical_families.front() == 3);
    CHECK(rep.payoffs.total[0] == doctest::Approx(0.0));
}

TEST_CASE("verification of the maximally entangled equilibrium point") {
    const GameSpec spec = builtin_extended_bos();
    const StrategyProfile p = two_player(0.0, 1.5 * kPi, 0.25 * kPi, 0.75 * kPi);
    const EquilibriumReport rep = verify_equilibrium(spec, make_coordinator(0.5 * kPi, 0.0), p);
    const auto residuals = max_entangled_residuals(p);
    for (double r : residuals) CHECK(std::abs(r) <= 1e-9);
    for (double m : rep.deviation_margins) CHECK(m <= 1e-9);
    CHECK(rep.accepted);
    CHECK(rep.quantum_family);
    CHECK(std::abs(rep.payoffs.total[0] - kQuantumPayoff) <= 1e-12);
}

TEST_CASE("the uniform profile is a flat weak equilibrium without entanglement") {
    // Against a uniformly mixing opponent every own angle is payoff-neutral,
    // so all unilateral deviation margins vanish; the point pays (-1/2, -1/2).
    const GameSpec spec = builtin_extended_bos();
    const StrategyProfile p = two_player(0.5 * kPi, 0.5 * kPi, 0.5 * kPi, 0.5 * kPi);
    const EquilibriumReport rep = verify_equilibrium(spec, make_coordinator(0.0, 0.0), p);
    CHECK(rep.flat_directions.size() == 4);
    for (double m : rep.deviation_margins) CHECK(m <= 1e-12);
    CHECK(rep.payoffs.total[0] == doctest::Approx(-0.5));
    CHECK(rep.payoffs.total[1] == doctest::Approx(-0.5));
}

TEST_CASE("a genuinely non-equilibrium point shows a large deviation margin") {
    const GameSpec spec = builtin_extended_bos();
    // Alice uniform, Bob slightly off-uniform: Alice gains by re-aiming.
    const EquilibriumReport rep = verify_equilibrium(spec, make_coordinator(0.0, 0.0),
                                                     two_player(0.5 * kPi, 0.5 * kPi, 0.3, 2.0));
    CHECK(rep.max_deviation_margin() > 0.1);
    CHECK_FALSE(rep.accepted);
}

TEST_CASE("classical family enumeration: eight families, all verified") {
    const GameSpec spec = builtin_extended_bos();
    const auto families = enumerate_classical_families(spec);
    REQUIRE(families.size() == 8);
    const CoordinatorParams coord = make_coordinator(0.0, 0.0);
    for (const auto& fam : families) {
        for (int i = 0; i < 11; ++i) {
            const StrategyProfile member = fam.member(kPi * i / 10.0);
            const EquilibriumReport rep = verify_equilibrium(spec, coord, member);
            CHECK(rep.accepted);
            const auto& ids = rep.classical_families;
            CHECK(std::find(ids.begin(), ids.end(), fam.id) != ids.end());
            // Away from the corners the family containing the point is unique.
            if (i != 0 && i != 10) CHECK(ids.size() == 1);
            CHECK(std::abs(rep.payoffs.total[0]) <= 1e-12);
            CHECK(std::abs(rep.payoffs.total[1]) <= 1e-12);
        }
    }
    // Spot values: families 1 and 8 as published.
    CHECK(families[0].member(0.0).angles[1][1] == doctest::Approx(kPi));
    const EquilibriumReport f8 = verify_equilibrium(spec, coord, families[7].member(0.25 * kPi));
    CHECK(f8.accepted);

    GameSpec other = builtin_three_player();
    CHECK_THROWS_AS(enumerate_classical_families(other), std::invalid_argument);
}

TEST_CASE("entangled family constraints: precondition, seeds and sensitivity") {
    CHECK_THROWS_WITH_AS(quantum_family_constraints(make_coordinator(0.0, 0.0)),
                         doctest::Contains("unsupported coordinator point"), std::invalid_argument);

    const QuantumFamilyConstraints qc = quantum_family_constraints(make_coordinator(0.5 * kPi, 0.0));
    CHECK(qc.constraint_count() == 3);
    CHECK(qc.free_dimensions() == 1);

    const StrategyProfile seeded = qc.member(0.0);
    CHECK(seeded.angles[1][0] == doctest::Approx(0.25 * kPi));
    CHECK(seeded.angles[1][1] == doctest::Approx(0.75 * kPi));
    CHECK(seeded.angles[0][1] == doctest::Approx(1.5 * kPi));
    for (double r : qc.residuals(seeded)) CHECK(std::abs(r) <= 1e-12);
    for (double r : max_entangled_residuals(seeded)) CHECK(std::abs(r) <= 1e-12);

    // Violating the first relation by 0.1 shows up in the sine conditions.
    StrategyProfile off = seeded;
    off.angles[1][0] = wrap_angle(off.angles[1][0] + 0.1);
    double worst = 0.0;
    for (double r : max_entangled_residuals(off)) worst = std::max(worst, std::abs(r));
    CHECK(worst > 1e-3);
}

TEST_CASE("general equilibrium conditions reduce to the sine differences at maximal entanglement") {
    oracles::RandomInputs rnd(31);
    const CoordinatorParams coord = make_coordinator(0.5 * kPi, 0.0);
    for (int i = 0; i < 300; ++i) {
        const StrategyProfile p = rnd.profile_full_circle(2);
        const auto general = eq_condition_residuals(p, coord);
        const auto special = max_entangled_residuals(p);
        CHECK(std::abs(general[0] + special[0]) <= 1e-12);
        CHECK(std::abs(general[1] - special[1]) <= 1e-12);
        CHECK(std::abs(general[2] - special[2]) <= 1e-12);
        CHECK(std::abs(general[3] + special[3]) <= 1e-12);
    }
}

TEST_CASE("classical solve: break-even payoffs and all eight families") {
    const GameSpec spec = builtin_extended_bos();
    const SolveResult result = find_equilibria(spec, make_coordinator(0.0, 0.0), fast_config());
    REQUIRE_FALSE(result.equilibria.empty());

    std::set<int> family_ids;
    for (const auto& rep : result.equilibria) {
        CHECK(std::abs(rep.payoffs.total[0]) <= 1e-9);
        CHECK(std::abs(rep.payoffs.total[1]) <= 1e-9);
        CHECK(rep.max_deviation_margin() <= 1e-7);
        if (!rep.classical_families.empty()) family_ids.insert(rep.classical_families.front());
    }
    CHECK(family_ids == std::set<int>{1, 2, 3, 4, 5, 6, 7, 8});
}

TEST_CASE("solver soundness: every returned report re-verifies") {
    const GameSpec spec = builtin_extended_bos();
    for (double gamma : {0.0, 0.3, 0.5 * kPi}) {
        const CoordinatorParams coord = make_coordinator(gamma, 0.0);
        SolverConfig cfg = fast_config();
        cfg.n_starts = 40;
        const SolveResult result = find_equilibria(spec, coord, cfg);
        for (const auto& rep : result.equilibria) {
            const EquilibriumReport again = verify_equilibrium(spec, coord, rep.profile, cfg);
            CHECK(again.accepted);
        }
    }
}

TEST_CASE("entangled solve finds the saturating family with its relations") {
    const GameSpec spec = builtin_extended_bos();
    const SolveResult result = find_equilibria(spec, make_coordinator(0.5 * kPi, 0.0), fast_config());
    const QuantumFamilyConstraints qc = quantum_family_constraints(make_coordinator(0.5 * kPi, 0.0));

    bool found = false;
    for (const auto& rep : result.equilibria) {
        double worst = 0.0;
        for (double r : qc.residuals(rep.profile)) worst = std::max(worst, std::abs(r));
        if (worst <= 1e-6 && std::abs(rep.payoffs.total[0] - kQuantumPayoff) <= 1e-9 &&
            std::abs(rep.payoffs.total[1] - kQuantumPayoff) <= 1e-9) {
            found = true;
        }
        // No equilibrium beats the quantum ceiling.
        CHECK(rep.payoffs.total[0] <= kQuantumPayoff + 1e-9);
        CHECK(rep.payoffs.total[1] <= kQuantumPayoff + 1e-9);
    }
    CHECK(found);
}

TEST_CASE("solver rejects games it does not support") {
    CHECK_THROWS_AS(find_equilibria(builtin_three_player(), make_coordinator(0.0, 0.0), fast_config()),
                    std::invalid_argument);
}

TEST_CASE("suppressed interference: entangled but phase-orthogonal play stays classical") {
    // cos(phi) = 0 kills the interference term, so equilibria are break-even
    // and no inequality is violated at any of them.
    const GameSpec spec = builtin_extended_bos();
    const CoordinatorParams coord = make_coordinator(0.5 * kPi, 0.5 * kPi);
    const SolveResult result = find_equilibria(spec, coord, fast_config());
    REQUIRE_FALSE(result.equilibria.empty());
    std::set<int> family_ids;
    for (const auto& rep : result.equilibria) {
        CHECK(std::abs(rep.payoffs.total[0]) <= 1e-9);
        CHECK(std::abs(rep.payoffs.total[1]) <= 1e-9);
        const BellReport bell = bell_report(quantum_joint(rep.profile, coord));
        CHECK(bell.max_lhs <= 1e-9);
        if (!rep.classical_families.empty()) family_ids.insert(rep.classical_families.front());
    }
    CHECK(family_ids.size() == 8);
}

TEST_CASE("three-player deviation certificate matches a brute-force scan") {
    const GameSpec spec = builtin_three_player();
    oracles::RandomInputs rnd(97);
    for (int i = 0; i < 10; ++i) {
        const StrategyProfile p = rnd.profile_full_circle(3);
        const CoordinatorParams coord = rnd.coordinator();
        const EquilibriumReport rep = verify_equilibrium(spec, coord, p);
        REQUIRE(rep.deviation_margins.size() == 6);
        for (int pl = 0; pl < 3; ++pl) {
            for (int t = 0; t < 2; ++t) {
                const double here = payoffs_for(p, coord, spec).total[pl];
                double best = here;
                StrategyProfile probe = p;
                for (int g = 0; g < 720; ++g) {
                    probe.angles[pl][t] = kTwoPi * g / 720.0;
                    best = std::max(best, payoffs_for(probe, coord, spec).total[pl]);
                }
                const double margin = rep.deviation_margins[static_cast<std::size_t>(pl * 2 + t)];
                CHECK(margin >= best - here - 1e-12);  // certificate dominates the scan
                CHECK(margin <= best - here + 1e-4);   // and is tight up to grid spacing
            }
        }
    }
}

TEST_CASE("solver handles generic games behind the same contract") {
    // Double all payoffs: same equilibrium structure, but no family labels
    // (the built-in patterns are specific to the canonical game).
    GameSpec doubled = builtin_extended_bos();
    doubled.name = "doubled";
    for (auto& tensor : doubled.payoffs)
        for (auto& sector : tensor)
            for (auto& v : sector) v *= 2.0;

    const CoordinatorParams coord = make_coordinator(0.0, 0.0);
    SolverConfig cfg = fast_config();
    cfg.n_starts = 40;
    const SolveResult result = find_equilibria(doubled, coord, cfg);
    REQUIRE_FALSE(result.equilibria.empty());
    for (const auto& rep : result.equilibria) {
        CHECK(rep.classical_families.empty());
        CHECK(std::abs(rep.payoffs.total[0]) <= 1e-9);
        const EquilibriumReport again = verify_equilibrium(doubled, coord, rep.profile, cfg);
        CHECK(again.accepted);
    }
}

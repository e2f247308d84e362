#include "bellgame/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace bellgame {
namespace {

constexpr double kFlatTol = 1e-12;

double slot_angle(const StrategyProfile& p, int slot) {
    return p.angles[static_cast<std::size_t>(slot / 2)][static_cast<std::size_t>(slot % 2)];
}

bool near_axis(double angle) {
    return circle_dist(angle, 0.0) <= 1e-6 || circle_dist(angle, kPi) <= 1e-6;
}

double entanglement_coefficient(const CoordinatorParams& coord) {
    return std::cos(coord.phi) * std::sin(coord.gamma);
}

const char* slot_name(int slot) {
    static const char* names[4] = {"alpha[0]", "alpha[1]", "beta[0]", "beta[1]"};
    return names[slot];
}

}  // namespace

BestResponse best_response(const GameSpec& spec, const CoordinatorParams& coord, const StrategyProfile& profile,
                           int player, int type) {
    check_profile(profile, spec);
    const TrigForm form = payoff_angle_form(profile, coord, spec, player, player, type);
    BestResponse br;
    const double scale = 1.0 + std::abs(form.c);
    if (form.amplitude() <= kFlatTol * scale) {
        br.flat = true;
        br.angle = 0.0;
        br.payoff = form.eval(0.0);
        return br;
    }
    br.angle = form.argmax_circle();
    br.payoff = form.eval(br.angle);
    return br;
}

double EquilibriumReport::max_deviation_margin() const {
    double m = 0.0;
    for (double d : deviation_margins) m = std::max(m, d);
    return m;
}

double EquilibriumReport::max_gradient_residual() const {
    double m = 0.0;
    for (double g : gradient_residuals) m = std::max(m, g);
    return m;
}

std::array<double, 4> eq_condition_residuals(const StrategyProfile& profile, const CoordinatorParams& coord) {
    if (profile.n_players() != 2)
        throw std::invalid_argument("equilibrium-condition residuals are two-player only");
    const double a0 = profile.angles[0][0], a1 = profile.angles[0][1];
    const double b0 = profile.angles[1][0], b1 = profile.angles[1][1];
    const double k = entanglement_coefficient(coord);
    return {
        std::sin(a0) * (std::cos(b0) - std::cos(b1)) - std::cos(a0) * (std::sin(b0) - std::sin(b1)) * k,
        std::sin(a1) * (std::cos(b0) + std::cos(b1)) - std::cos(a1) * (std::sin(b0) + std::sin(b1)) * k,
        std::sin(b0) * (std::cos(a0) - std::cos(a1)) - std::cos(b0) * (std::sin(a0) - std::sin(a1)) * k,
        std::sin(b1) * (std::cos(a0) + std::cos(a1)) - std::cos(b1) * (std::sin(a0) + std::sin(a1)) * k,
    };
}

std::array<double, 4> max_entangled_residuals(const StrategyProfile& profile) {
    if (profile.n_players() != 2)
        throw std::invalid_argument("equilibrium-condition residuals are two-player only");
    const double a0 = profile.angles[0][0], a1 = profile.angles[0][1];
    const double b0 = profile.angles[1][0], b1 = profile.angles[1][1];
    return {
        std::sin(a0 - b1) - std::sin(a0 - b0),
        std::sin(a1 - b1) + std::sin(a1 - b0),
        std::sin(a1 - b0) - std::sin(a0 - b0),
        std::sin(a1 - b1) + std::sin(a0 - b1),
    };
}

StrategyProfile ClassicalFamily::member(double free_angle) const {
    StrategyProfile p;
    p.angles = {{fixed[0], fixed[1]}, {fixed[2], fixed[3]}};
    p.angles[static_cast<std::size_t>(free_slot / 2)][static_cast<std::size_t>(free_slot % 2)] =
        wrap_angle(free_angle);
    return p;
}

bool ClassicalFamily::matches(const StrategyProfile& profile, double radius) const {
    for (int slot = 0; slot < 4; ++slot) {
        if (slot == free_slot) continue;
        if (circle_dist(slot_angle(profile, slot), fixed[static_cast<std::size_t>(slot)]) > radius) return false;
    }
    return true;
}

std::vector<ClassicalFamily> enumerate_classical_families(const GameSpec& spec) {
    if (!is_extended_bos(spec))
        throw std::invalid_argument("classical family enumeration is defined for the extended BoS built-in");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<ClassicalFamily> out = {
        {1, {0.0, 0.0, nan, kPi}, 2, ""},  {2, {kPi, kPi, nan, 0.0}, 2, ""},
        {3, {0.0, kPi, 0.0, nan}, 3, ""},  {4, {kPi, 0.0, kPi, nan}, 3, ""},
        {5, {nan, kPi, 0.0, 0.0}, 0, ""},  {6, {nan, 0.0, kPi, kPi}, 0, ""},
        {7, {0.0, nan, 0.0, kPi}, 1, ""},  {8, {kPi, nan, kPi, 0.0}, 1, ""},
    };
    for (auto& fam : out) {
        std::string desc;
        for (int slot = 0; slot < 4; ++slot) {
            if (!desc.empty()) desc += ", ";
            desc += slot_name(slot);
            if (slot == fam.free_slot)
                desc += " free";
            else
                desc += fam.fixed[static_cast<std::size_t>(slot)] == 0.0 ? " = 0" : " = pi";
        }
        fam.description = desc;
    }
    return out;
}

QuantumFamilyConstraints quantum_family_constraints(const CoordinatorParams& coord) {
    if (std::abs(entanglement_coefficient(coord) - 1.0) > 1e-9)
        throw std::invalid_argument(
            "unsupported coordinator point: the entangled equilibrium relations need cos(phi)*sin(gamma) = 1");
    QuantumFamilyConstraints qc;
    qc.offsets = {0.25 * kPi, 0.75 * kPi, 1.25 * kPi};
    qc.descriptions = {
        "beta[0] - alpha[0] = pi/4 (mod 2*pi)",
        "beta[1] - alpha[0] = 3*pi/4 (mod 2*pi)",
        "alpha[1] - beta[0] = 5*pi/4 (mod 2*pi)",
    };
    return qc;
}

std::array<double, 3> QuantumFamilyConstraints::residuals(const StrategyProfile& profile) const {
    const double a0 = profile.angles[0][0], a1 = profile.angles[0][1];
    const double b0 = profile.angles[1][0], b1 = profile.angles[1][1];
    return {
        angle_diff(b0, a0 + offsets[0]),
        angle_diff(b1, a0 + offsets[1]),
        angle_diff(a1, b0 + offsets[2]),
    };
}

StrategyProfile QuantumFamilyConstraints::member(double seed_alpha0) const {
    StrategyProfile p;
    const double a0 = wrap_angle(seed_alpha0);
    const double b0 = wrap_angle(a0 + offsets[0]);
    const double b1 = wrap_angle(a0 + offsets[1]);
    const double a1 = wrap_angle(b0 + offsets[2]);
    p.angles = {{a0, a1}, {b0, b1}};
    return p;
}

EquilibriumReport verify_equilibrium(const GameSpec& spec, const CoordinatorParams& coord,
                                     const StrategyProfile& profile, const SolverConfig& cfg) {
    check_profile(profile, spec);
    check_coordinator(coord);

    EquilibriumReport rep;
    rep.profile = profile;
    rep.coord = coord;
    rep.payoffs = payoffs_for(profile, coord, spec);

    const int n = spec.n_players();
    for (int pl = 0; pl < n; ++pl) {
        for (int t = 0; t < 2; ++t) {
            const TrigForm form = payoff_angle_form(profile, coord, spec, pl, pl, t);
            const double here = form.eval(profile.angles[static_cast<std::size_t>(pl)][static_cast<std::size_t>(t)]);
            double best = form.max_value();
            // The closed form already bounds every deviation; the grid is the
            // literal certificate and guards the form reconstruction.
            for (int i = 0; i < cfg.deviation_grid_size; ++i) {
                best = std::max(best, form.eval(kTwoPi * i / cfg.deviation_grid_size));
            }
            rep.deviation_margins.push_back(best - here);
            rep.gradient_residuals.push_back(std::abs(payoff_gradient(profile, coord, spec, pl, t)));
            if (form.amplitude() <= kFlatTol * (1.0 + std::abs(form.c))) rep.flat_directions.emplace_back(pl, t);
        }
    }

    if (n == 2) {
        const auto res = eq_condition_residuals(profile, coord);
        for (double r : res) rep.stationarity_residuals.push_back(std::abs(r));
    } else {
        rep.stationarity_residuals = rep.gradient_residuals;
    }

    // Classification: named family, else edge (an angle on the 0/pi axis),
    // else interior. The classical families are continuous equilibrium sets
    // exactly when the interference coefficient vanishes; at other
    // coordinator points only isolated members survive, so the family label
    // would be misleading there.
    if (n == 2 && is_extended_bos(spec) && std::abs(entanglement_coefficient(coord)) <= 1e-9) {
        for (const auto& fam : enumerate_classical_families(spec)) {
            if (fam.matches(profile, cfg.dedup_radius)) {
                rep.classical_families.push_back(fam.id);
                rep.classification = EqClass::FamilyMember;
                rep.family_constraints.push_back("classical family " + std::to_string(fam.id) + ": " +
                                                 fam.description);
            }
        }
    }
    if (rep.classical_families.empty() && n == 2 &&
        std::abs(entanglement_coefficient(coord) - 1.0) <= 1e-9) {
        const QuantumFamilyConstraints qc = quantum_family_constraints(coord);
        const auto res = qc.residuals(profile);
        const auto max_abs = [](const std::array<double, 3>& r) {
            return std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
        };
        if (max_abs(res) <= 1e-5) {
            rep.quantum_family = true;
            rep.classification = EqClass::FamilyMember;
            rep.family_constraints = qc.descriptions;
            rep.family_constraints.push_back("one free direction: common shift of all four angles");
        } else {
            // All-angle negation preserves every joint probability, so the
            // negated relation set is an equally valid equilibrium family.
            StrategyProfile neg;
            neg.angles = {{wrap_angle(-profile.angles[0][0]), wrap_angle(-profile.angles[0][1])},
                          {wrap_angle(-profile.angles[1][0]), wrap_angle(-profile.angles[1][1])}};
            if (max_abs(qc.residuals(neg)) <= 1e-5) {
                rep.quantum_mirror = true;
                rep.classification = EqClass::FamilyMember;
                for (const auto& d : qc.descriptions) rep.family_constraints.push_back("mirror of: " + d);
                rep.family_constraints.push_back("one free direction: common shift of all four angles");
            }
        }
    }
    if (rep.classification != EqClass::FamilyMember) {
        bool edge = false;
        for (const auto& per_player : profile.angles)
            for (double a : per_player) edge = edge || near_axis(a);
        rep.classification = edge ? EqClass::Edge : EqClass::Interior;
    }

    rep.accepted = rep.max_deviation_margin() <= cfg.tol_dev &&
                   (rep.classification != EqClass::Interior || rep.max_gradient_residual() <= cfg.tol_stat);
    return rep;
}

namespace {

std::vector<StrategyProfile> solver_starts(const SolverConfig& cfg) {
    std::vector<StrategyProfile> starts;
    // Corner profiles: every angle at 0 or pi.
    for (int mask = 0; mask < 16; ++mask) {
        StrategyProfile p;
        p.angles = {{(mask & 1) ? kPi : 0.0, (mask & 2) ? kPi : 0.0},
                    {(mask & 4) ? kPi : 0.0, (mask & 8) ? kPi : 0.0}};
        starts.push_back(p);
    }
    // Seeds along the entangled equilibrium relations and their mirror;
    // at other coordinator points these are ordinary starting points.
    QuantumFamilyConstraints qc;
    qc.offsets = {0.25 * kPi, 0.75 * kPi, 1.25 * kPi};
    for (int i = 0; i < 8; ++i) {
        const StrategyProfile m = qc.member(kTwoPi * i / 8.0);
        starts.push_back(m);
        StrategyProfile neg;
        neg.angles = {{wrap_angle(-m.angles[0][0]), wrap_angle(-m.angles[0][1])},
                      {wrap_angle(-m.angles[1][0]), wrap_angle(-m.angles[1][1])}};
        starts.push_back(neg);
    }
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
    for (int i = 0; i < cfg.n_starts; ++i) {
        StrategyProfile p;
        p.angles = {{uniform(rng), uniform(rng)}, {uniform(rng), uniform(rng)}};
        starts.push_back(p);
    }
    return starts;
}

struct IterationOutcome {
    StrategyProfile profile;
    bool converged = false;
};

IterationOutcome iterate_best_response(const GameSpec& spec, const CoordinatorParams& coord,
                                       StrategyProfile profile, const SolverConfig& cfg) {
    // Phase 1: damped simultaneous updates; damping 0.5 suppresses the
    // two-cycle typical of coordination games.
    for (int iter = 0; iter < cfg.br_max_iters; ++iter) {
        double targets[2][2];
        double max_step = 0.0;
        for (int pl = 0; pl < 2; ++pl) {
            for (int t = 0; t < 2; ++t) {
                const BestResponse br = best_response(spec, coord, profile, pl, t);
                const double current = profile.angles[static_cast<std::size_t>(pl)][static_cast<std::size_t>(t)];
                targets[pl][t] = br.flat ? current : br.angle;
                max_step = std::max(max_step, circle_dist(targets[pl][t], current));
            }
        }
        if (max_step < 2e-12) return {profile, true};
        for (int pl = 0; pl < 2; ++pl) {
            for (int t = 0; t < 2; ++t) {
                auto& a = profile.angles[static_cast<std::size_t>(pl)][static_cast<std::size_t>(t)];
                a = wrap_angle(a + 0.5 * angle_diff(targets[pl][t], a));
            }
        }
    }
    // Phase 2: sequential sweeps. Simultaneous updates can orbit a
    // continuous equilibrium set along its free direction; one-at-a-time
    // best responses cannot cycle there because each move is a weak payoff
    // improvement for the mover.
    for (int iter = 0; iter < cfg.br_max_iters; ++iter) {
        double max_step = 0.0;
        for (int pl = 0; pl < 2; ++pl) {
            for (int t = 0; t < 2; ++t) {
                const BestResponse br = best_response(spec, coord, profile, pl, t);
                auto& a = profile.angles[static_cast<std::size_t>(pl)][static_cast<std::size_t>(t)];
                if (!br.flat) {
                    max_step = std::max(max_step, circle_dist(br.angle, a));
                    a = wrap_angle(br.angle);
                }
            }
        }
        if (max_step < 2e-12) return {profile, true};
    }
    return {profile, false};
}

double profile_distance(const StrategyProfile& a, const StrategyProfile& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.angles.size(); ++k)
        for (std::size_t t = 0; t < a.angles[k].size(); ++t)
            d = std::max(d, circle_dist(a.angles[k][t], b.angles[k][t]));
    return d;
}

int report_rank(const EquilibriumReport& r) {
    if (!r.classical_families.empty()) return 0;
    if (r.quantum_family) return 1;
    if (r.quantum_mirror) return 2;
    return 3;
}

bool report_order(const EquilibriumReport& lhs, const EquilibriumReport& rhs) {
    const int lr = report_rank(lhs), rr = report_rank(rhs);
    if (lr != rr) return lr < rr;
    const int lf = lhs.classical_families.empty() ? 0 : lhs.classical_families.front();
    const int rf = rhs.classical_families.empty() ? 0 : rhs.classical_families.front();
    if (lf != rf) return lf < rf;
    for (int slot = 0; slot < 4; ++slot) {
        const double la = slot_angle(lhs.profile, slot), ra = slot_angle(rhs.profile, slot);
        if (std::abs(la - ra) > 1e-12) return la < ra;
    }
    return false;
}

// How far the family's free coordinate sits from the 0/pi axis; higher means
// a more informative representative of the continuum.
double family_interiorness(const EquilibriumReport& rep, const ClassicalFamily& fam) {
    const double a = slot_angle(rep.profile, fam.free_slot);
    return std::min(circle_dist(a, 0.0), circle_dist(a, kPi));
}

}  // namespace

SolveResult find_equilibria(const GameSpec& spec, const CoordinatorParams& coord, const SolverConfig& cfg) {
    if (spec.n_players() != 2)
        throw std::invalid_argument("equilibrium search supports 2-player games; use verify_equilibrium for more");
    const ValidationResult v = validate(spec);
    if (!v.ok()) throw std::invalid_argument("game failed validation: " + v.issues.front().message);

    SolveResult result;
    std::vector<EquilibriumReport> found;
    for (const StrategyProfile& start : solver_starts(cfg)) {
        ++result.starts;
        const IterationOutcome outcome = iterate_best_response(spec, coord, start, cfg);
        if (!outcome.converged) {
            ++result.non_converged;
            continue;
        }
        ++result.converged;
        EquilibriumReport rep = verify_equilibrium(spec, coord, outcome.profile, cfg);
        if (!rep.accepted) {
            ++result.rejected;
            continue;
        }
        found.push_back(std::move(rep));
    }

    // Merge: one report per classical family id (the families intersect at
    // corners, so a converged point may stand for several), one per entangled
    // family orientation, angle-radius clusters for everything else.
    std::vector<EquilibriumReport> merged;
    if (is_extended_bos(spec)) {
        for (const auto& fam : enumerate_classical_families(spec)) {
            const EquilibriumReport* best = nullptr;
            for (const auto& rep : found) {
                if (std::find(rep.classical_families.begin(), rep.classical_families.end(), fam.id) ==
                    rep.classical_families.end())
                    continue;
                if (best == nullptr || family_interiorness(rep, fam) > family_interiorness(*best, fam) + 1e-15)
                    best = &rep;
            }
            if (best != nullptr) {
                EquilibriumReport rep = *best;
                // The emitted report represents this family: list it first.
                rep.classical_families.erase(
                    std::remove(rep.classical_families.begin(), rep.classical_families.end(), fam.id),
                    rep.classical_families.end());
                rep.classical_families.insert(rep.classical_families.begin(), fam.id);
                merged.push_back(std::move(rep));
            }
        }
    }
    bool have_quantum = false, have_mirror = false;
    for (auto& rep : found) {
        if (!rep.classical_families.empty()) continue;  // represented above
        if (rep.quantum_family) {
            if (!have_quantum) merged.push_back(std::move(rep));
            have_quantum = true;
            continue;
        }
        if (rep.quantum_mirror) {
            if (!have_mirror) merged.push_back(std::move(rep));
            have_mirror = true;
            continue;
        }
        bool absorbed = false;
        for (const auto& kept : merged) {
            if (kept.classical_families.empty() && !kept.quantum_family && !kept.quantum_mirror &&
                profile_distance(kept.profile, rep.profile) <= cfg.dedup_radius) {
                absorbed = true;
                break;
            }
        }
        if (!absorbed) merged.push_back(std::move(rep));
    }

    std::sort(merged.begin(), merged.end(), report_order);
    result.equilibria = std::move(merged);
    return result;
}

}  // namespace bellgame

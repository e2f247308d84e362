#include "bellgame/bell.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace bellgame {
namespace {

int move_parity(std::size_t move, int n_players) {
    int parity = 0;
    for (int k = 0; k < n_players; ++k) parity ^= static_cast<int>((move >> k) & 1u);
    return parity;
}

// Term list in a canonical order for deduplication and stable output.
using TermKey = std::vector<std::array<long, 3>>;

TermKey key_of(const CerecedaVariant& v) {
    TermKey key;
    key.push_back({static_cast<long>(v.positive.sector), static_cast<long>(v.positive.move), 1});
    TermKey negs;
    for (const auto& t : v.negatives)
        negs.push_back({static_cast<long>(t.sector), static_cast<long>(t.move), -1});
    std::sort(negs.begin(), negs.end());
    key.insert(key.end(), negs.begin(), negs.end());
    return key;
}

CerecedaVariant base_inequality() {
    // +P^[00]_00 - P^[10]_00 - P^[01]_00 - P^[11]_11
    CerecedaVariant v;
    v.positive = {0, 0, 1.0};
    v.negatives = {{2, 0, -1.0}, {1, 0, -1.0}, {3, 3, -1.0}};
    return v;
}

// Relabeling: per-player type flips (ta, tb) and per-(player, type) move
// flips fa[2], fb[2], applied with the flips keyed on the relabeled types.
CerecedaVariant relabel(const CerecedaVariant& v, int ta, int tb, const std::array<int, 2>& fa,
                        const std::array<int, 2>& fb) {
    const auto map_term = [&](const SignedTerm& t) {
        const int a = static_cast<int>((t.sector >> 1) & 1u) ^ ta;
        const int b = static_cast<int>(t.sector & 1u) ^ tb;
        const int A = static_cast<int>((t.move >> 1) & 1u) ^ fa[static_cast<std::size_t>(a)];
        const int B = static_cast<int>(t.move & 1u) ^ fb[static_cast<std::size_t>(b)];
        return SignedTerm{static_cast<std::size_t>(a * 2 + b), static_cast<std::size_t>(A * 2 + B), t.coeff};
    };
    CerecedaVariant out;
    out.positive = map_term(v.positive);
    for (const auto& t : v.negatives) out.negatives.push_back(map_term(t));
    return out;
}

// Sign vector: the coefficient each sector correlator E^[t] would carry when
// the variant is written in correlator-plus-marginal form. A term at move
// parity p contributes coeff * (-1)^p to its sector's correlator weight.
std::array<int, 4> sign_vector(const CerecedaVariant& v) {
    std::array<int, 4> signs{};
    const auto apply = [&signs](const SignedTerm& t) {
        const int s = (move_parity(t.move, 2) == 0) ? 1 : -1;
        signs[t.sector] = t.coeff > 0 ? s : -s;
    };
    apply(v.positive);
    for (const auto& t : v.negatives) apply(t);
    return signs;
}

VariantCatalog build_catalog() {
    const CerecedaVariant base = base_inequality();
    std::map<TermKey, CerecedaVariant> unique;
    for (int ta = 0; ta < 2; ++ta)
        for (int tb = 0; tb < 2; ++tb)
            for (int fa0 = 0; fa0 < 2; ++fa0)
                for (int fa1 = 0; fa1 < 2; ++fa1)
                    for (int fb0 = 0; fb0 < 2; ++fb0)
                        for (int fb1 = 0; fb1 < 2; ++fb1) {
                            CerecedaVariant v = relabel(base, ta, tb, {fa0, fa1}, {fb0, fb1});
                            unique.emplace(key_of(v), std::move(v));
                        }

    // Every variant's sign vector has product -1, so the 64 variants fall on
    // 8 sign vectors. Splitting each sign class by the type parity of the
    // positive term yields 16 quartets of 4 = two move-mirror pairs each;
    // marginal contributions cancel within a mirror pair, which is what makes
    // the quartet sum a pure correlator expression on any normalized tensor.
    VariantCatalog catalog;
    std::map<std::pair<std::array<int, 4>, int>, int> quartet_of;
    for (auto& [key, variant] : unique) {
        const auto signs = sign_vector(variant);
        const int parity = move_parity(variant.positive.sector, 2);
        auto [it, inserted] =
            quartet_of.emplace(std::make_pair(signs, parity), static_cast<int>(catalog.quartet_signs.size()));
        if (inserted) catalog.quartet_signs.push_back(signs);
        variant.quartet_id = it->second;
        catalog.variants.push_back(std::move(variant));
    }
    const TermKey base_key = key_of(base_inequality());
    CerecedaVariant mirror = base_inequality();
    mirror.positive.move = 3;
    mirror.negatives = {{2, 3, -1.0}, {1, 3, -1.0}, {3, 0, -1.0}};
    const TermKey mirror_key = key_of(mirror);
    for (std::size_t i = 0; i < catalog.variants.size(); ++i) {
        if (key_of(catalog.variants[i]) == base_key) catalog.base_index = static_cast<int>(i);
        if (key_of(catalog.variants[i]) == mirror_key) catalog.mirror_base_index = static_cast<int>(i);
    }
    return catalog;
}

}  // namespace

std::vector<SignedTerm> CerecedaVariant::terms() const {
    std::vector<SignedTerm> out;
    out.push_back(positive);
    out.insert(out.end(), negatives.begin(), negatives.end());
    return out;
}

const VariantCatalog& variant_catalog() {
    static const VariantCatalog catalog = build_catalog();
    return catalog;
}

std::vector<CerecedaVariant> enumerate_variants(int n_players) {
    if (n_players == 2) return variant_catalog().variants;
    if (n_players < 2) throw std::invalid_argument("need at least 2 players");
    // For N >= 3 only the two generalized forms are enumerated; the full
    // relabeling orbit is out of scope.
    const std::size_t sectors = std::size_t{1} << n_players;
    const std::size_t all_ones = sectors - 1;
    std::vector<CerecedaVariant> out;
    for (int mirror = 0; mirror < 2; ++mirror) {
        const std::size_t m0 = mirror ? all_ones : 0;
        const std::size_t m1 = mirror ? 0 : all_ones;
        CerecedaVariant v;
        v.positive = {0, m0, 1.0};
        for (int k = 0; k < n_players; ++k)
            v.negatives.push_back({std::size_t{1} << (n_players - 1 - k), m0, -1.0});
        v.negatives.push_back({all_ones, m1, -1.0});
        out.push_back(std::move(v));
    }
    return out;
}

double cereceda_lhs(const JointProbTensor& probs, const CerecedaVariant& variant) {
    return eval_selection(probs, variant.terms());
}

double chsh_value(const JointProbTensor& probs, int quartet_id) {
    const VariantCatalog& catalog = variant_catalog();
    if (quartet_id < 0 || quartet_id >= static_cast<int>(catalog.quartet_signs.size()))
        throw std::out_of_range("unknown quartet id");
    if (probs.n_players != 2) throw std::invalid_argument("CHSH values are two-player only");
    const auto& signs = catalog.quartet_signs[static_cast<std::size_t>(quartet_id)];
    double s = 0.0;
    for (std::size_t sector = 0; sector < 4; ++sector) {
        double corr = 0.0;
        for (std::size_t m = 0; m < 4; ++m)
            corr += (move_parity(m, 2) == 0 ? 1.0 : -1.0) * probs.sectors[sector][m];
        s += signs[sector] * corr;
    }
    return s;
}

BellReport bell_report(const JointProbTensor& probs) {
    if (probs.n_players != 2) throw std::invalid_argument("bell_report is two-player only");
    const VariantCatalog& catalog = variant_catalog();
    BellReport report;
    report.max_lhs = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < catalog.variants.size(); ++i) {
        const double v = cereceda_lhs(probs, catalog.variants[i]);
        report.lhs.push_back(v);
        report.max_lhs = std::max(report.max_lhs, v);
        if (v > 1e-12) report.classical_bound_violations.push_back(static_cast<int>(i));
    }
    report.cirelson_margin = kCirelsonBound - report.max_lhs;
    for (int q = 0; q < static_cast<int>(catalog.quartet_signs.size()); ++q)
        report.chsh.push_back(chsh_value(probs, q));
    return report;
}

double nparty_cereceda_lhs(const JointProbTensor& probs, int n, bool mirror) {
    if (probs.n_players != n) throw std::invalid_argument("tensor has a different player count");
    if (probs.n_sectors() != (std::size_t{1} << n) || probs.n_moves() != (std::size_t{1} << n))
        throw std::invalid_argument("tensor shape does not match a 2-type, 2-move game");
    const auto variants = enumerate_variants(n);
    const CerecedaVariant& v = n == 2 ? variant_catalog().variants[static_cast<std::size_t>(
                                             mirror ? variant_catalog().mirror_base_index
                                                    : variant_catalog().base_index)]
                                      : variants[mirror ? 1 : 0];
    return cereceda_lhs(probs, v);
}

namespace {

struct SearchPoint {
    StrategyProfile profile;
    CoordinatorParams coord;
};

double search_objective(const SearchPoint& p, int n) {
    const JointProbTensor probs = quantum_joint_nparty(p.profile, p.coord, n);
    return nparty_cereceda_lhs(probs, n, false);
}

// Exact maximization of f over one coordinate. f is a*cos + b*sin + c in
// every coordinate (angles over the full circle, gamma and phi over [0, pi]).
// Returns `current` when the coordinate is flat or no candidate improves it.
template <typename Eval>
double maximize_coordinate(Eval&& f, double current, double lo, double hi, bool full_circle) {
    const double f0 = f(0.0);
    const double fh = f(0.5 * kPi);
    const double fp = f(kPi);
    const double a = 0.5 * (f0 - fp);
    const double c = 0.5 * (f0 + fp);
    const double b = fh - c;
    if (std::hypot(a, b) < 1e-15 * (1.0 + std::abs(c))) return current;
    const auto value = [&](double t) { return a * std::cos(t) + b * std::sin(t) + c; };
    double best_t = current;
    double best_v = value(current);
    const auto consider = [&](double t) {
        const double v = value(t);
        if (v > best_v) {
            best_v = v;
            best_t = t;
        }
    };
    if (full_circle) {
        consider(wrap_angle(std::atan2(b, a)));
    } else {
        consider(lo);
        consider(hi);
        const double t = std::atan2(b, a);
        if (t >= lo && t <= hi) consider(t);
    }
    return best_t;
}

}  // namespace

SearchResult max_violation_search(int n, const SearchConfig& cfg) {
    if (n < 2 || n > 3) throw std::invalid_argument("violation search supports n in {2, 3}");

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> angle_dist(0.0, kTwoPi);
    std::uniform_real_distribution<double> axis_dist(0.0, kPi);

    std::vector<SearchPoint> starts;
    {
        // Deterministic seed at the two-player saturating configuration;
        // for n = 3 it is simply one more start.
        SearchPoint seed;
        seed.profile.angles.assign(static_cast<std::size_t>(n), {0.0, 0.0});
        if (n == 2) seed.profile.angles = {{0.0, 1.5 * kPi}, {0.25 * kPi, 0.75 * kPi}};
        seed.coord.gamma = cfg.fixed_gamma.value_or(0.5 * kPi);
        seed.coord.phi = cfg.fixed_phi.value_or(0.0);
        starts.push_back(seed);
    }
    for (int i = 1; i < cfg.n_starts; ++i) {
        SearchPoint p;
        p.profile.angles.resize(static_cast<std::size_t>(n));
        for (auto& per_player : p.profile.angles) per_player = {angle_dist(rng), angle_dist(rng)};
        p.coord.gamma = cfg.fixed_gamma.value_or(axis_dist(rng));
        p.coord.phi = cfg.fixed_phi.value_or(axis_dist(rng));
        starts.push_back(p);
    }

    SearchResult best;
    best.best_lhs = -std::numeric_limits<double>::infinity();
    for (SearchPoint point : starts) {
        double value = search_objective(point, n);
        for (int pass = 0; pass < cfg.max_passes; ++pass) {
            const double before = value;
            for (int pl = 0; pl < n; ++pl) {
                for (int t = 0; t < 2; ++t) {
                    auto& slot = point.profile.angles[static_cast<std::size_t>(pl)][static_cast<std::size_t>(t)];
                    slot = maximize_coordinate(
                        [&](double v) {
                            slot = v;
                            return search_objective(point, n);
                        },
                        slot, 0.0, kTwoPi, true);
                }
            }
            if (!cfg.fixed_gamma) {
                point.coord.gamma = maximize_coordinate(
                    [&](double v) {
                        point.coord.gamma = v;
                        return search_objective(point, n);
                    },
                    point.coord.gamma, 0.0, kPi, false);
            }
            if (!cfg.fixed_phi) {
                point.coord.phi = maximize_coordinate(
                    [&](double v) {
                        point.coord.phi = v;
                        return search_objective(point, n);
                    },
                    point.coord.phi, 0.0, kPi, false);
            }
            value = search_objective(point, n);
            if (value - before < cfg.tol) break;
        }
        if (value > best.best_lhs) {
            best.best_lhs = value;
            best.profile = point.profile;
            best.coord = point.coord;
        }
    }
    return best;
}

}  // namespace bellgame

#include "bellgame/game.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

namespace bellgame {
namespace {

using nlohmann::json;

std::string type_profile_key(std::size_t sector, int n_players) {
    std::string key(static_cast<std::size_t>(n_players), '0');
    for (int k = 0; k < n_players; ++k) {
        if (sector & (std::size_t{1} << (n_players - 1 - k))) key[static_cast<std::size_t>(k)] = '1';
    }
    return key;
}

std::string fmt_index(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%zu", i);
    return buf;
}

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

std::size_t GameSpec::n_sectors() const {
    std::size_t s = 1;
    for (int k = 0; k < n_players(); ++k) s *= static_cast<std::size_t>(types_of(k));
    return s;
}

double GameSpec::sector_weight(std::size_t sector) const {
    double w = 1.0;
    for (int k = 0; k < n_players(); ++k) {
        const int t = static_cast<int>((sector >> (n_players() - 1 - k)) & 1u);
        w *= type_dist[static_cast<std::size_t>(k)][static_cast<std::size_t>(t)];
    }
    return w;
}

ValidationResult validate(const GameSpec& spec) {
    ValidationResult result;
    auto add = [&result](std::string msg) { result.issues.push_back({std::move(msg)}); };

    const auto n = spec.player_names.size();
    if (n < 2) add("game must have at least 2 players, got " + fmt_index(n));
    if (spec.type_dist.size() != n)
        add("type_dist has " + fmt_index(spec.type_dist.size()) + " entries for " + fmt_index(n) + " players");
    if (spec.payoffs.size() != n)
        add("payoffs has " + fmt_index(spec.payoffs.size()) + " entries for " + fmt_index(n) + " players");
    if (!result.ok()) return result;

    for (std::size_t k = 0; k < n; ++k) {
        if (spec.type_dist[k].size() != 2) {
            add("player " + fmt_index(k) + " has " + fmt_index(spec.type_dist[k].size()) +
                " types; only 2 types per player are supported");
            continue;
        }
        double sum = 0.0;
        for (std::size_t t = 0; t < spec.type_dist[k].size(); ++t) {
            const double p = spec.type_dist[k][t];
            if (!std::isfinite(p) || p < 0.0)
                add("type_dist of player " + fmt_index(k) + " entry " + fmt_index(t) + " is " + fmt_num(p));
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            add("type_dist of player " + fmt_index(k) + " sums to " + fmt_num(sum));
    }
    if (!result.ok()) return result;

    const std::size_t sectors = spec.n_sectors();
    const std::size_t moves = spec.n_moves();
    for (std::size_t k = 0; k < n; ++k) {
        if (spec.payoffs[k].size() != sectors) {
            add("payoff tensor of player " + fmt_index(k) + " has " + fmt_index(spec.payoffs[k].size()) +
                " type sectors, expected " + fmt_index(sectors) + " type sectors");
            continue;
        }
        for (std::size_t s = 0; s < sectors; ++s) {
            if (spec.payoffs[k][s].size() != moves) {
                add("payoff sector " + type_profile_key(s, spec.n_players()) + " of player " + fmt_index(k) +
                    " has " + fmt_index(spec.payoffs[k][s].size()) + " move entries, expected " + fmt_index(moves));
                continue;
            }
            for (std::size_t m = 0; m < moves; ++m) {
                if (!std::isfinite(spec.payoffs[k][s][m]))
                    add("payoff of player " + fmt_index(k) + " at sector " + type_profile_key(s, spec.n_players()) +
                        " move " + type_profile_key(m, spec.n_players()) + " is not finite");
            }
        }
    }
    return result;
}

CoordinatorParams make_coordinator(double gamma, double phi) {
    if (!std::isfinite(gamma) || gamma < 0.0 || gamma > kPi + 1e-12)
        throw std::invalid_argument("gamma must lie in [0, pi], got " + fmt_num(gamma));
    if (!std::isfinite(phi) || phi < 0.0 || phi >= kTwoPi + 1e-12)
        throw std::invalid_argument("phi must lie in [0, 2*pi), got " + fmt_num(phi));
    CoordinatorParams c;
    c.gamma = std::min(gamma, kPi);
    c.phi = phi > kPi ? kTwoPi - phi : phi;  // cos(phi) periodicity
    return c;
}

void check_coordinator(const CoordinatorParams& coord) {
    if (!(coord.gamma >= 0.0 && coord.gamma <= kPi))
        throw std::invalid_argument("gamma out of range [0, pi]: " + fmt_num(coord.gamma));
    if (!(coord.phi >= 0.0 && coord.phi <= kPi))
        throw std::invalid_argument("phi out of range [0, pi]: " + fmt_num(coord.phi));
}

void check_profile(const StrategyProfile& profile, int n_players) {
    if (profile.n_players() != n_players)
        throw std::invalid_argument("strategy profile has " + fmt_index(profile.angles.size()) +
                                    " players, expected " + fmt_index(static_cast<std::size_t>(n_players)));
    for (std::size_t k = 0; k < profile.angles.size(); ++k) {
        if (profile.angles[k].size() != 2)
            throw std::invalid_argument("player " + fmt_index(k) + " must have one angle per type (2)");
        for (double a : profile.angles[k]) {
            if (!std::isfinite(a) || a < 0.0 || a > kTwoPi + 1e-12)
                throw std::invalid_argument("angle out of range [0, 2*pi]: " + fmt_num(a));
        }
    }
}

void check_profile(const StrategyProfile& profile, const GameSpec& spec) {
    check_profile(profile, spec.n_players());
}

GameSpec builtin_extended_bos() {
    GameSpec spec;
    spec.name = "extended-bos";
    spec.player_names = {"Alice", "Bob"};
    spec.type_dist = {{0.5, 0.5}, {0.5, 0.5}};

    // Alice, sectors [00], [01], [10], [11]; moves 00, 01, 10, 11.
    std::vector<std::vector<double>> alice = {
        {3.0, 0.0, 0.0, 1.0},
        {-3.0, 0.0, 0.0, -1.0},
        {-3.0, 0.0, 0.0, -1.0},
        {-1.0, 0.0, 0.0, -3.0},
    };
    // Bob's entries are Alice's with both move labels flipped: L_{AB} = M_{~A ~B}.
    std::vector<std::vector<double>> bob(4, std::vector<double>(4, 0.0));
    for (std::size_t s = 0; s < 4; ++s)
        for (std::size_t m = 0; m < 4; ++m) bob[s][m] = alice[s][m ^ 3u];
    spec.payoffs = {alice, bob};
    return spec;
}

GameSpec builtin_three_player() {
    GameSpec spec;
    spec.name = "three-player";
    spec.player_names = {"Alice", "Bob", "Chris"};
    spec.type_dist = {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}};

    const std::size_t sectors = 8, moves = 8;
    auto zeros = std::vector<std::vector<double>>(sectors, std::vector<double>(moves, 0.0));
    auto alice = zeros, bob = zeros, chris = zeros;

    // Nonzero support: all-zeros and all-ones move profiles, in the all-zeros
    // sector (+), the three single-type-flip sectors (-), and the all-ones
    // sector (-). Weight pairs: Alice (3,1), Bob (1,3), Chris (2,2); the
    // all-ones sector swaps each player's pair.
    auto fill = [](std::vector<std::vector<double>>& t, double w0, double w1) {
        t[0][0] = w0;
        t[0][7] = w1;
        for (std::size_t s : {std::size_t{4}, std::size_t{2}, std::size_t{1}}) {
            t[s][0] = -w0;
            t[s][7] = -w1;
        }
        t[7][0] = -w1;
        t[7][7] = -w0;
    };
    fill(alice, 3.0, 1.0);
    fill(bob, 1.0, 3.0);
    fill(chris, 2.0, 2.0);

    spec.payoffs = {alice, bob, chris};
    return spec;
}

bool is_extended_bos(const GameSpec& spec) {
    const GameSpec ref = builtin_extended_bos();
    if (spec.n_players() != 2 || spec.type_dist.size() != 2 || spec.payoffs.size() != 2) return false;
    for (std::size_t k = 0; k < 2; ++k) {
        if (spec.type_dist[k].size() != 2) return false;
        for (std::size_t t = 0; t < 2; ++t)
            if (std::abs(spec.type_dist[k][t] - ref.type_dist[k][t]) > 1e-12) return false;
        if (spec.payoffs[k].size() != 4) return false;
        for (std::size_t s = 0; s < 4; ++s) {
            if (spec.payoffs[k][s].size() != 4) return false;
            for (std::size_t m = 0; m < 4; ++m)
                if (std::abs(spec.payoffs[k][s][m] - ref.payoffs[k][s][m]) > 1e-12) return false;
        }
    }
    return true;
}

GameSpec load_game(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("game document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("game document must be a JSON object");
    for (const char* key : {"name", "players", "payoffs"}) {
        if (!doc.contains(key)) throw ParseError(std::string("game document is missing key \"") + key + "\"");
    }

    GameSpec spec;
    try {
        spec.name = doc.at("name").get<std::string>();
        const auto& players = doc.at("players");
        if (!players.is_array() || players.size() < 2)
            throw ParseError("\"players\" must be an array of at least 2 entries");
        for (const auto& p : players) {
            if (!p.contains("name") || !p.contains("type_dist"))
                throw ParseError("each player entry needs \"name\" and \"type_dist\"");
            spec.player_names.push_back(p.at("name").get<std::string>());
            spec.type_dist.push_back(p.at("type_dist").get<std::vector<double>>());
        }
        const auto& payoffs = doc.at("payoffs");
        if (!payoffs.is_object()) throw ParseError("\"payoffs\" must map player names to sector tables");
        const std::size_t sectors = spec.n_sectors();
        const std::size_t moves = spec.n_moves();
        for (const auto& pname : spec.player_names) {
            if (!payoffs.contains(pname))
                throw ParseError("\"payoffs\" is missing player \"" + pname + "\"");
            const auto& table = payoffs.at(pname);
            if (!table.is_object())
                throw ParseError("payoffs of \"" + pname + "\" must map type-profile strings to move arrays");
            std::vector<std::vector<double>> tensor(sectors);
            for (std::size_t s = 0; s < sectors; ++s) {
                const std::string key = type_profile_key(s, spec.n_players());
                if (!table.contains(key))
                    throw ParseError("payoffs of \"" + pname + "\" is missing type profile \"" + key + "\"");
                tensor[s] = table.at(key).get<std::vector<double>>();
                if (tensor[s].size() != moves)
                    throw ParseError("payoffs of \"" + pname + "\" at \"" + key + "\" has " +
                                     fmt_index(tensor[s].size()) + " entries, expected " + fmt_index(moves));
            }
            spec.payoffs.push_back(std::move(tensor));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("game document field has wrong type: ") + e.what());
    }

    const ValidationResult v = validate(spec);
    if (!v.ok()) {
        std::string msg = "game definition is invalid:";
        for (const auto& issue : v.issues) msg += "\n  - " + issue.message;
        throw ValidationError(msg);
    }
    return spec;
}

std::string save_game(const GameSpec& spec) {
    json doc;
    doc["name"] = spec.name;
    doc["players"] = json::array();
    for (std::size_t k = 0; k < spec.player_names.size(); ++k) {
        doc["players"].push_back({{"name", spec.player_names[k]}, {"type_dist", spec.type_dist[k]}});
    }
    json payoffs = json::object();
    for (std::size_t k = 0; k < spec.player_names.size(); ++k) {
        json table = json::object();
        for (std::size_t s = 0; s < spec.n_sectors(); ++s)
            table[type_profile_key(s, spec.n_players())] = spec.payoffs[k][s];
        payoffs[spec.player_names[k]] = std::move(table);
    }
    doc["payoffs"] = std::move(payoffs);
    return doc.dump(2) + "\n";
}

StrategyDoc load_strategy(const std::string& text, const GameSpec& spec) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("strategy document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("angles"))
        throw ParseError("strategy document is missing key \"angles\"");

    StrategyDoc out;
    try {
        const auto& angles = doc.at("angles");
        for (const auto& pname : spec.player_names) {
            if (!angles.contains(pname))
                throw ParseError("strategy \"angles\" is missing player \"" + pname + "\"");
            out.profile.angles.push_back(angles.at(pname).get<std::vector<double>>());
        }
        const double gamma = doc.value("gamma", 0.0);
        const double phi = doc.value("phi", 0.0);
        out.coord = make_coordinator(gamma, phi);
    } catch (const json::exception& e) {
        throw ParseError(std::string("strategy document field has wrong type: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    try {
        check_profile(out.profile, spec);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    return out;
}

std::string save_strategy(const StrategyDoc& doc, const GameSpec& spec) {
    json out;
    json angles = json::object();
    for (std::size_t k = 0; k < spec.player_names.size(); ++k)
        angles[spec.player_names[k]] = doc.profile.angles[k];
    out["angles"] = std::move(angles);
    out["gamma"] = doc.coord.gamma;
    out["phi"] = doc.coord.phi;
    return out.dump(2) + "\n";
}

}  // namespace bellgame

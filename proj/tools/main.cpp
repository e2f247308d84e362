#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bellgame/bell.hpp"
#include "bellgame/equilibrium.hpp"

using namespace bellgame;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitNoResult = 3;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoResultError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt7(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.7g", v);
    return buf;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("file not found: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write output path: " + path);
    out << content;
    if (!out) throw InputError("cannot write output path: " + path);
}

GameSpec resolve_game(const std::string& arg) {
    if (arg == "builtin:extended-bos") return builtin_extended_bos();
    if (arg == "builtin:three-player") return builtin_three_player();
    if (arg.rfind("builtin:", 0) == 0)
        throw InputError("unknown builtin game \"" + arg + "\"; available: builtin:extended-bos, builtin:three-player");
    return load_game(read_file(arg));
}

double to_radians(double value, bool degrees) { return degrees ? value * kPi / 180.0 : value; }

// Grid syntax: comma list "0,0.7853" or linspace "lo:hi:count".
std::vector<double> parse_grid(const std::string& text, bool degrees) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double lo = 0.0, hi = 0.0;
        long count = 0;
        if (std::sscanf(text.c_str(), "%lf:%lf:%ld", &lo, &hi, &count) != 3 || count < 1)
            throw InputError("bad grid \"" + text + "\"; expected lo:hi:count");
        for (long i = 0; i < count; ++i) {
            const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
            out.push_back(to_radians(lo + t * (hi - lo), degrees));
        }
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(to_radians(std::stod(item), degrees));
        } catch (const std::exception&) {
            throw InputError("bad grid value \"" + item + "\"");
        }
    }
    if (out.empty()) throw InputError("empty grid \"" + text + "\"");
    return out;
}

std::string classification_name(const EquilibriumReport& rep) {
    switch (rep.classification) {
        case EqClass::Interior: return "interior";
        case EqClass::Edge: return "edge";
        case EqClass::FamilyMember:
            if (!rep.classical_families.empty()) {
                std::string name = "family " + std::to_string(rep.classical_families.front());
                for (std::size_t i = 1; i < rep.classical_families.size(); ++i)
                    name += ", also on family " + std::to_string(rep.classical_families[i]);
                return name;
            }
            if (rep.quantum_family) return "entangled family";
            if (rep.quantum_mirror) return "entangled family (mirror)";
            return "family";
    }
    return "?";
}

json report_to_json(const GameSpec& spec, const EquilibriumReport& rep) {
    json j;
    json angles = json::object();
    for (std::size_t k = 0; k < spec.player_names.size(); ++k)
        angles[spec.player_names[k]] = rep.profile.angles[k];
    j["angles"] = std::move(angles);
    j["gamma"] = rep.coord.gamma;
    j["phi"] = rep.coord.phi;
    j["payoffs"] = rep.payoffs.total;
    j["sector_payoffs"] = rep.payoffs.sector;
    j["stationarity_residuals"] = rep.stationarity_residuals;
    j["gradient_residuals"] = rep.gradient_residuals;
    j["deviation_margins"] = rep.deviation_margins;
    j["classification"] = classification_name(rep);
    j["family_constraints"] = rep.family_constraints;
    if (!rep.flat_directions.empty()) {
        json flats = json::array();
        for (const auto& [pl, t] : rep.flat_directions)
            flats.push_back(spec.player_names[static_cast<std::size_t>(pl)] + "[" + std::to_string(t) + "]");
        j["flat_directions"] = std::move(flats);
    }
    return j;
}

void print_report(const GameSpec& spec, const EquilibriumReport& rep) {
    std::cout << "  " << classification_name(rep) << "\n";
    for (std::size_t k = 0; k < spec.player_names.size(); ++k) {
        std::cout << "    " << spec.player_names[k] << ": angles (" << fmt7(rep.profile.angles[k][0]) << ", "
                  << fmt7(rep.profile.angles[k][1]) << ")  payoff " << fmt7(rep.payoffs.total[k]) << "\n";
    }
    double max_res = 0.0;
    for (double r : rep.stationarity_residuals) max_res = std::max(max_res, std::abs(r));
    std::cout << "    max |condition residual| " << fmt7(max_res) << ", max deviation margin "
              << fmt7(rep.max_deviation_margin()) << "\n";
    for (const auto& c : rep.family_constraints) std::cout << "    " << c << "\n";
}

struct CommonOptions {
    std::string game;
    double gamma = 0.0;
    double phi = 0.0;
    bool degrees = false;
    int starts = SolverConfig{}.n_starts;
    double tol = SolverConfig{}.tol_dev;
    std::uint64_t seed = kDefaultSeed;
    std::string out;
};

SolverConfig solver_config(const CommonOptions& opt) {
    SolverConfig cfg;
    cfg.n_starts = opt.starts;
    cfg.tol_dev = opt.tol;
    cfg.seed = opt.seed;
    return cfg;
}

int cmd_validate(const CommonOptions& opt) {
    const GameSpec spec = resolve_game(opt.game);
    const ValidationResult result = validate(spec);
    if (result.ok()) {
        std::cout << "ok: game \"" << spec.name << "\" (" << spec.n_players() << " players, "
                  << spec.n_sectors() << " type sectors)\n";
        return kExitOk;
    }
    std::cout << "invalid: game \"" << spec.name << "\"\n";
    for (const auto& issue : result.issues) std::cout << "  - " << issue.message << "\n";
    return kExitInvalidInput;
}

int cmd_solve(const CommonOptions& opt) {
    const GameSpec spec = resolve_game(opt.game);
    const CoordinatorParams coord =
        make_coordinator(to_radians(opt.gamma, opt.degrees), to_radians(opt.phi, opt.degrees));
    const SolverConfig cfg = solver_config(opt);
    const SolveResult result = find_equilibria(spec, coord, cfg);

    std::cout << "game \"" << spec.name << "\", gamma " << fmt7(coord.gamma) << ", phi " << fmt7(coord.phi)
              << ", seed " << cfg.seed << "\n";
    std::cout << result.starts << " starts, " << result.converged << " converged, " << result.non_converged
              << " not converged, " << result.equilibria.size() << " distinct equilibria\n";
    for (const auto& rep : result.equilibria) print_report(spec, rep);

    if (!opt.out.empty()) {
        json doc;
        doc["game"] = spec.name;
        doc["gamma"] = coord.gamma;
        doc["phi"] = coord.phi;
        doc["seed"] = cfg.seed;
        doc["starts"] = result.starts;
        doc["converged"] = result.converged;
        doc["non_converged"] = result.non_converged;
        doc["equilibria"] = json::array();
        for (const auto& rep : result.equilibria) doc["equilibria"].push_back(report_to_json(spec, rep));
        write_file(opt.out, doc.dump(2) + "\n");
    }
    if (result.equilibria.empty()) throw NoResultError("no converged equilibria");
    return kExitOk;
}

// One sweep grid point. family_flags summarizes the equilibrium families
// found there; it is part of the human-readable summary, not the CSV (the
// CSV column set is a stable interface).
struct SweepRow {
    double gamma = 0.0;
    double phi = 0.0;
    std::array<double, 2> best_payoffs{};
    double max_cereceda_lhs = 0.0;
    std::size_t equilibrium_count = 0;
    std::string family_flags;
};

SweepRow sweep_point(const GameSpec& spec, const CoordinatorParams& coord, const SolverConfig& cfg) {
    SweepRow row;
    row.gamma = coord.gamma;
    row.phi = coord.phi;
    const SolveResult result = find_equilibria(spec, coord, cfg);
    row.equilibrium_count = result.equilibria.size();
    if (result.equilibria.empty()) return row;

    row.best_payoffs = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    row.max_cereceda_lhs = -std::numeric_limits<double>::infinity();
    std::set<int> families;
    for (const auto& rep : result.equilibria) {
        row.best_payoffs[0] = std::max(row.best_payoffs[0], rep.payoffs.total[0]);
        row.best_payoffs[1] = std::max(row.best_payoffs[1], rep.payoffs.total[1]);
        const BellReport bell = bell_report(quantum_joint(rep.profile, coord));
        row.max_cereceda_lhs = std::max(row.max_cereceda_lhs, bell.max_lhs);
        for (int id : rep.classical_families) families.insert(id);
        if (rep.quantum_family) row.family_flags += row.family_flags.empty() ? "entangled" : "+entangled";
        if (rep.quantum_mirror) row.family_flags += row.family_flags.empty() ? "mirror" : "+mirror";
    }
    for (int id : families)
        row.family_flags += (row.family_flags.empty() ? "f" : "+f") + std::to_string(id);
    return row;
}

int cmd_sweep(const CommonOptions& opt, const std::string& gammas, const std::string& phis) {
    const GameSpec spec = resolve_game(opt.game);
    const std::vector<double> gamma_grid = parse_grid(gammas, opt.degrees);
    const std::vector<double> phi_grid = parse_grid(phis, opt.degrees);
    const SolverConfig cfg = solver_config(opt);
    if (opt.out.empty()) throw InputError("sweep needs --out for the CSV file");

    std::string csv = "gamma,phi,payoff_p1_best,payoff_p2_best,max_cereceda_lhs,equilibrium_count\n";
    for (double gamma : gamma_grid) {
        for (double phi : phi_grid) {
            const SweepRow row = sweep_point(spec, make_coordinator(gamma, phi), cfg);
            csv += fmt17(row.gamma) + "," + fmt17(row.phi) + "," + fmt17(row.best_payoffs[0]) + "," +
                   fmt17(row.best_payoffs[1]) + "," + fmt17(row.max_cereceda_lhs) + "," +
                   std::to_string(row.equilibrium_count) + "\n";
            std::cout << "gamma " << fmt7(row.gamma) << " phi " << fmt7(row.phi) << ": best payoffs ("
                      << fmt7(row.best_payoffs[0]) << ", " << fmt7(row.best_payoffs[1]) << "), "
                      << row.equilibrium_count << " equilibria"
                      << (row.family_flags.empty() ? "" : ", families " + row.family_flags) << "\n";
        }
    }
    write_file(opt.out, csv);
    std::cout << "wrote " << gamma_grid.size() * phi_grid.size() << " rows to " << opt.out << "\n";
    return kExitOk;
}

std::string variant_signature(const CerecedaVariant& v) {
    const auto term_str = [](const SignedTerm& t, bool positive) {
        const auto bits = [](std::size_t x) {
            std::string s;
            s += static_cast<char>('0' + ((x >> 1) & 1u));
            s += static_cast<char>('0' + (x & 1u));
            return s;
        };
        return std::string(positive ? "+" : "-") + "P[" + bits(t.sector) + "]" + bits(t.move);
    };
    std::string out = term_str(v.positive, true);
    for (const auto& t : v.negatives) out += " " + term_str(t, false);
    return out;
}

int cmd_bell(const CommonOptions& opt, const std::string& strategy_path, const std::string& tensor_path) {
    JointProbTensor probs;
    if (!tensor_path.empty()) {
        json doc;
        try {
            doc = json::parse(read_file(tensor_path));
            probs.n_players = doc.at("n_players").get<int>();
            const auto& sectors = doc.at("sectors");
            const std::size_t dim = std::size_t{1} << probs.n_players;
            for (std::size_t s = 0; s < dim; ++s) {
                std::string key;
                for (int k = probs.n_players - 1; k >= 0; --k) key += static_cast<char>('0' + ((s >> k) & 1u));
                probs.sectors.push_back(sectors.at(key).get<std::vector<double>>());
                if (probs.sectors.back().size() != dim)
                    throw InputError("tensor sector \"" + key + "\" has wrong size");
            }
        } catch (const json::exception& e) {
            throw InputError(std::string("bad tensor file: ") + e.what());
        }
    } else if (!strategy_path.empty()) {
        const GameSpec spec = resolve_game(opt.game);
        const StrategyDoc doc = load_strategy(read_file(strategy_path), spec);
        probs = quantum_joint_nparty(doc.profile, doc.coord, spec.n_players());
        std::cout << "strategy from " << strategy_path << " at gamma " << fmt7(doc.coord.gamma) << ", phi "
                  << fmt7(doc.coord.phi) << "\n";
    } else {
        throw InputError("bell needs --strategy or --tensor");
    }
    if (probs.n_players != 2) throw InputError("bell analysis is two-player; got a different tensor");

    const BellReport report = bell_report(probs);
    const VariantCatalog& catalog = variant_catalog();
    std::cout << "inequality values (classical bound 0, quantum bound " << fmt7(kCirelsonBound) << "):\n";
    for (std::size_t i = 0; i < catalog.variants.size(); ++i) {
        std::cout << "  [" << (i < 10 ? " " : "") << i << "] quartet " << catalog.variants[i].quartet_id << "  "
                  << variant_signature(catalog.variants[i]) << "  lhs " << fmt7(report.lhs[i]) << "\n";
    }
    std::cout << "CHSH per quartet:\n";
    for (std::size_t q = 0; q < report.chsh.size(); ++q)
        std::cout << "  quartet " << q << ": S = " << fmt7(report.chsh[q]) << "\n";
    if (report.max_lhs > 1e-12) {
        std::cout << "violation " << fmt7(report.max_lhs);
        if (report.cirelson_margin <= 1e-6) std::cout << " (Cirel'son-saturating)";
        std::cout << "\n";
    } else {
        std::cout << "no violation (max lhs " << fmt7(report.max_lhs) << ")\n";
    }

    if (!opt.out.empty()) {
        json doc;
        doc["lhs"] = report.lhs;
        doc["max_lhs"] = report.max_lhs;
        doc["violations"] = report.classical_bound_violations;
        doc["cirelson_margin"] = report.cirelson_margin;
        doc["chsh"] = report.chsh;
        write_file(opt.out, doc.dump(2) + "\n");
    }
    return kExitOk;
}

int demo_extended_bos(const CommonOptions& opt) {
    const GameSpec spec = builtin_extended_bos();
    SolverConfig cfg = solver_config(opt);

    std::cout << "== classical play (gamma = 0) ==\n";
    const SolveResult classical = find_equilibria(spec, make_coordinator(0.0, 0.0), cfg);
    int families = 0;
    double worst_payoff = 0.0;
    for (const auto& rep : classical.equilibria) {
        if (!rep.classical_families.empty()) ++families;
        worst_payoff = std::max({worst_payoff, std::abs(rep.payoffs.total[0]), std::abs(rep.payoffs.total[1])});
    }
    std::cout << classical.equilibria.size() << " equilibria (" << families
              << " continuous families); classical payoff " << fmt7(worst_payoff) << " (break-even)\n";

    std::cout << "== entangled play (gamma = pi/2, phi = 0) ==\n";
    const CoordinatorParams coord = make_coordinator(0.5 * kPi, 0.0);
    const SolveResult quantum = find_equilibria(spec, coord, cfg);
    const EquilibriumReport* best = nullptr;
    for (const auto& rep : quantum.equilibria)
        if (rep.quantum_family) best = &rep;
    if (best == nullptr) throw NoResultError("entangled equilibrium not found");
    std::cout << "quantum payoff " << fmt7(best->payoffs.total[0]) << " per player (ceiling "
              << fmt7(kCirelsonBound) << ")\n";
    print_report(spec, *best);

    std::cout << "== inequality analysis at the entangled equilibrium ==\n";
    const BellReport bell = bell_report(quantum_joint(best->profile, coord));
    std::cout << "max inequality lhs " << fmt7(bell.max_lhs) << ", margin to the quantum bound "
              << fmt7(bell.cirelson_margin) << "\n";

    std::cout << "== payoff decomposition at the entangled equilibrium ==\n";
    const PayoffDecomposition parts = payoff_decomposition(best->profile, coord, spec);
    for (std::size_t k = 0; k < 2; ++k) {
        std::cout << "  " << spec.player_names[k] << ": pseudo-classical " << fmt7(parts.pseudo_classical[k])
                  << " + interference " << fmt7(parts.interference[k]) << " = " << fmt7(parts.total[k]) << "\n";
    }
    std::cout << "the positive payoff comes entirely from the interference term\n";
    return kExitOk;
}

int demo_three_player(const CommonOptions& opt) {
    const GameSpec spec = builtin_three_player();
    std::cout << "== three-player game ==\n";
    std::cout << (validate(spec).ok() ? "built-in validates ok" : "built-in INVALID") << "\n";

    std::cout << "== three-party inequality, factorized strategies ==\n";
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 1000; ++i) {
        StrategyProfile p;
        p.angles = {{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
        worst = std::max(worst, nparty_cereceda_lhs(classical_joint(p), 3, false));
    }
    std::cout << "max lhs over 1000 random factorized profiles: " << fmt7(worst) << " (bound 0)\n";

    std::cout << "== three-party violation search ==\n";
    SearchConfig cfg;
    cfg.seed = opt.seed;
    const SearchResult result = max_violation_search(3, cfg);
    std::cout << "best violation " << fmt7(result.best_lhs) << " at gamma " << fmt7(result.coord.gamma)
              << ", phi " << fmt7(result.coord.phi) << "\n";
    const PayoffVector pv = total_payoffs(
        sector_payoffs(quantum_joint_nparty(result.profile, result.coord, 3), spec), spec);
    std::cout << "payoffs at the violating profile: " << fmt7(pv.total[0]) << ", " << fmt7(pv.total[1]) << ", "
              << fmt7(pv.total[2]) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bellgame: Bayesian games with classical and entangled strategy spaces"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string gammas = "0";
    std::string phis = "0";
    std::string strategy_path;
    std::string tensor_path;
    std::string demo_name;

    const std::string seed_help = "RNG seed (default " + std::to_string(kDefaultSeed) + ")";

    auto add_common = [&](CLI::App* cmd, bool with_game) {
        if (with_game)
            cmd->add_option("--game", opt.game, "game file path or builtin:<extended-bos|three-player>")
                ->required();
        cmd->add_option("--seed", opt.seed, seed_help);
        cmd->add_flag("--degrees", opt.degrees, "interpret angle inputs in degrees");
        cmd->add_option("--starts", opt.starts, "random solver starts");
        cmd->add_option("--tol", opt.tol, "deviation-margin tolerance for accepting equilibria");
        cmd->add_option("--out", opt.out, "write a machine-readable report to this path");
    };

    CLI::App* validate_cmd = app.add_subcommand("validate", "check a game definition");
    add_common(validate_cmd, true);

    CLI::App* solve_cmd = app.add_subcommand("solve", "find Bayesian Nash equilibria at fixed (gamma, phi)");
    add_common(solve_cmd, true);
    solve_cmd->add_option("--gamma", opt.gamma, "entanglement angle (radians unless --degrees)");
    solve_cmd->add_option("--phi", opt.phi, "entanglement phase (radians unless --degrees)");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "solve over a coordinator grid, write CSV");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--gammas", gammas, "gamma grid: comma list or lo:hi:count");
    sweep_cmd->add_option("--phis", phis, "phi grid: comma list or lo:hi:count");

    CLI::App* bell_cmd = app.add_subcommand("bell", "evaluate all Bell-type inequalities");
    bell_cmd->add_option("--game", opt.game, "game file path or builtin:<name>")
        ->default_val("builtin:extended-bos");
    bell_cmd->add_option("--strategy", strategy_path, "strategy JSON file (angles + gamma + phi)");
    bell_cmd->add_option("--tensor", tensor_path, "raw joint-probability tensor JSON file");
    bell_cmd->add_option("--seed", opt.seed, seed_help);
    bell_cmd->add_option("--out", opt.out, "write the report as JSON");

    CLI::App* demo_cmd = app.add_subcommand("demo", "run the full pipeline for a named scenario");
    demo_cmd->add_option("name", demo_name, "extended-bos or three-player")->required();
    demo_cmd->add_option("--seed", opt.seed, seed_help);
    demo_cmd->add_option("--starts", opt.starts, "random solver starts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitInvalidInput;
    }

    try {
        if (app.got_subcommand(validate_cmd)) return cmd_validate(opt);
        if (app.got_subcommand(solve_cmd)) return cmd_solve(opt);
        if (app.got_subcommand(sweep_cmd)) return cmd_sweep(opt, gammas, phis);
        if (app.got_subcommand(bell_cmd)) return cmd_bell(opt, strategy_path, tensor_path);
        if (app.got_subcommand(demo_cmd)) {
            if (demo_name == "extended-bos") return demo_extended_bos(opt);
            if (demo_name == "three-player") return demo_three_player(opt);
            throw InputError("unknown demo \"" + demo_name + "\"; valid names: extended-bos, three-player");
        }
        return kExitInternal;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const NoResultError& e) {
        std::cerr << "no result: " << e.what() << "\n";
        return kExitNoResult;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

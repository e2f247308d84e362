#include "bellgame/probability.hpp"

#include <cmath>
#include <complex>

namespace bellgame {
namespace {

using cplx = std::complex<double>;

// Real half-angle rotation; column k is the image of |k>.
struct Rotation {
    double c, s;  // cos(theta/2), sin(theta/2)
    // entry(row, col): [[c, -s], [s, c]]
    double entry(int row, int col) const {
        if (row == 0) return col == 0 ? c : -s;
        return col == 0 ? s : c;
    }
};

Rotation rotation(double theta) { return {std::cos(0.5 * theta), std::sin(0.5 * theta)}; }

// d/dtheta of rotation(theta).
Rotation rotation_derivative(double theta) {
    return {-0.5 * std::sin(0.5 * theta), 0.5 * std::cos(0.5 * theta)};
}

// Applies a one-qubit gate to the statevector; player k owns bit (n-1-k) so
// that basis index == move profile index.
void apply_gate(std::vector<cplx>& state, int n, int player, const Rotation& u) {
    const std::size_t bit = std::size_t{1} << (n - 1 - player);
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (i & bit) continue;
        const cplx a0 = state[i];
        const cplx a1 = state[i | bit];
        state[i] = u.entry(0, 0) * a0 + u.entry(0, 1) * a1;
        state[i | bit] = u.entry(1, 0) * a0 + u.entry(1, 1) * a1;
    }
}

double clamp_probability(double p) {
    if (p < 0.0) {
        if (p < -1e-15) throw std::logic_error("internal error: probability entry below -1e-15");
        return 0.0;
    }
    return p;
}

int player_bit(std::size_t index, int n, int player) {
    return static_cast<int>((index >> (n - 1 - player)) & 1u);
}

std::vector<cplx> initial_state(const CoordinatorParams& coord, int n) {
    std::vector<cplx> state(std::size_t{1} << n, cplx{0.0, 0.0});
    state.front() = cplx{std::cos(0.5 * coord.gamma), 0.0};
    state.back() = std::polar(std::sin(0.5 * coord.gamma), coord.phi);
    return state;
}

}  // namespace

SinglePlayerProbs single_player_probs(const StrategyProfile& profile) {
    check_profile(profile, profile.n_players());
    SinglePlayerProbs out;
    out.p.resize(profile.angles.size());
    for (std::size_t k = 0; k < profile.angles.size(); ++k) {
        for (double theta : profile.angles[k]) {
            const double c = std::cos(0.5 * theta);
            const double s = std::sin(0.5 * theta);
            out.p[k].push_back({c * c, s * s});
        }
    }
    return out;
}

JointProbTensor classical_joint(const StrategyProfile& profile) {
    const int n = profile.n_players();
    const SinglePlayerProbs singles = single_player_probs(profile);

    JointProbTensor out;
    out.n_players = n;
    const std::size_t sectors = std::size_t{1} << n;
    const std::size_t moves = std::size_t{1} << n;
    out.sectors.assign(sectors, std::vector<double>(moves, 0.0));
    for (std::size_t s = 0; s < sectors; ++s) {
        for (std::size_t m = 0; m < moves; ++m) {
            double p = 1.0;
            for (int k = 0; k < n; ++k) {
                const int t = player_bit(s, n, k);
                const int mv = player_bit(m, n, k);
                p *= singles.p[static_cast<std::size_t>(k)][static_cast<std::size_t>(t)]
                              [static_cast<std::size_t>(mv)];
            }
            out.sectors[s][m] = clamp_probability(p);
        }
    }
    return out;
}

JointProbTensor quantum_joint_nparty(const StrategyProfile& profile, const CoordinatorParams& coord, int n) {
    if (n < 2) throw std::invalid_argument("quantum joint probabilities need at least 2 players");
    check_profile(profile, n);
    check_coordinator(coord);

    JointProbTensor out;
    out.n_players = n;
    const std::size_t sectors = std::size_t{1} << n;
    const std::size_t dim = std::size_t{1} << n;
    out.sectors.assign(sectors, std::vector<double>(dim, 0.0));

    for (std::size_t s = 0; s < sectors; ++s) {
        std::vector<cplx> state = initial_state(coord, n);
        for (int k = 0; k < n; ++k) {
            const int t = player_bit(s, n, k);
            apply_gate(state, n, k,
                       rotation(profile.angles[static_cast<std::size_t>(k)][static_cast<std::size_t>(t)]));
        }
        for (std::size_t m = 0; m < dim; ++m) out.sectors[s][m] = clamp_probability(std::norm(state[m]));
    }
    return out;
}

JointProbTensor quantum_joint(const StrategyProfile& profile, const CoordinatorParams& coord) {
    if (profile.n_players() != 2)
        throw std::invalid_argument("quantum_joint is two-player; use quantum_joint_nparty");
    return quantum_joint_nparty(profile, coord, 2);
}

ProbDecomposition decompose(const StrategyProfile& profile, const CoordinatorParams& coord) {
    if (profile.n_players() != 2) throw std::invalid_argument("decompose is two-player only");
    check_profile(profile, 2);
    check_coordinator(coord);

    const SinglePlayerProbs singles = single_player_probs(profile);
    const double cg2 = std::cos(0.5 * coord.gamma) * std::cos(0.5 * coord.gamma);
    const double sg2 = std::sin(0.5 * coord.gamma) * std::sin(0.5 * coord.gamma);
    const double cross_coeff = std::cos(coord.phi) * std::sin(coord.gamma);

    ProbDecomposition out;
    out.pseudo_classical.n_players = 2;
    out.interference.n_players = 2;
    out.pseudo_classical.sectors.assign(4, std::vector<double>(4, 0.0));
    out.interference.sectors.assign(4, std::vector<double>(4, 0.0));

    for (std::size_t s = 0; s < 4; ++s) {
        const int a = player_bit(s, 2, 0);
        const int b = player_bit(s, 2, 1);
        const auto& pa = singles.p[0][static_cast<std::size_t>(a)];
        const auto& qb = singles.p[1][static_cast<std::size_t>(b)];
        // Signed half-sines: equals sqrt(p0 p1) on [0, pi], continues the
        // amplitude cross term on the full circle.
        const double ra = 0.5 * std::sin(profile.angles[0][static_cast<std::size_t>(a)]);
        const double rb = 0.5 * std::sin(profile.angles[1][static_cast<std::size_t>(b)]);
        for (std::size_t m = 0; m < 4; ++m) {
            const int A = player_bit(m, 2, 0);
            const int B = player_bit(m, 2, 1);
            out.pseudo_classical.sectors[s][m] = clamp_probability(
                cg2 * pa[static_cast<std::size_t>(A)] * qb[static_cast<std::size_t>(B)] +
                sg2 * pa[static_cast<std::size_t>(1 - A)] * qb[static_cast<std::size_t>(1 - B)]);
            const double sign = ((A + B) % 2 == 0) ? 1.0 : -1.0;
            out.interference.sectors[s][m] = sign * cross_coeff * ra * rb;
        }
    }
    return out;
}

JointProbTensor joint_prob_derivative(const StrategyProfile& profile, const CoordinatorParams& coord,
                                      int player, int type) {
    const int n = profile.n_players();
    check_profile(profile, n);
    check_coordinator(coord);
    if (player < 0 || player >= n) throw std::invalid_argument("player index out of range");
    if (type < 0 || type >= 2) throw std::invalid_argument("type index out of range");

    JointProbTensor out;
    out.n_players = n;
    const std::size_t sectors = std::size_t{1} << n;
    const std::size_t dim = std::size_t{1} << n;
    out.sectors.assign(sectors, std::vector<double>(dim, 0.0));

    for (std::size_t s = 0; s < sectors; ++s) {
        if (player_bit(s, n, player) != type) continue;
        std::vector<cplx> state = initial_state(coord, n);
        std::vector<cplx> dstate = state;
        for (int k = 0; k < n; ++k) {
            const double theta =
                profile.angles[static_cast<std::size_t>(k)][static_cast<std::size_t>(player_bit(s, n, k))];
            apply_gate(state, n, k, rotation(theta));
            apply_gate(dstate, n, k, k == player ? rotation_derivative(theta) : rotation(theta));
        }
        for (std::size_t m = 0; m < dim; ++m)
            out.sectors[s][m] = 2.0 * (std::conj(state[m]) * dstate[m]).real();
    }
    return out;
}

}  // namespace bellgame

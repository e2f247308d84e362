#pragma once

// Test-only reference implementations, independent of the library's
// amplitude engine: explicit Kronecker-product matrix arithmetic and
// central finite differences.

#include <complex>
#include <random>
#include <vector>

#include "bellgame/equilibrium.hpp"

namespace oracles {

using cplx = std::complex<double>;
using Matrix = std::vector<std::vector<cplx>>;

inline Matrix rotation_matrix(double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    return {{cplx{c, 0}, cplx{-s, 0}}, {cplx{s, 0}, cplx{c, 0}}};
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    const std::size_t ra = a.size(), ca = a[0].size(), rb = b.size(), cb = b[0].size();
    Matrix out(ra * rb, std::vector<cplx>(ca * cb));
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t j = 0; j < ca; ++j)
            for (std::size_t k = 0; k < rb; ++k)
                for (std::size_t l = 0; l < cb; ++l) out[i * rb + k][j * cb + l] = a[i][j] * b[k][l];
    return out;
}

inline std::vector<cplx> mat_vec(const Matrix& m, const std::vector<cplx>& v) {
    std::vector<cplx> out(m.size(), cplx{0, 0});
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
    return out;
}

// |<m| U_1 x ... x U_n |Phi>|^2 for the type profile `sector`, via a dense
// 2^n x 2^n matrix build.
inline std::vector<double> sector_probs_bruteforce(const bellgame::StrategyProfile& profile,
                                                   const bellgame::CoordinatorParams& coord, int n,
                                                   std::size_t sector) {
    Matrix full = rotation_matrix(
        profile.angles[0][static_cast<std::size_t>((sector >> (n - 1)) & 1u)]);
    for (int k = 1; k < n; ++k) {
        const std::size_t t = (sector >> (n - 1 - k)) & 1u;
        full = kron(full, rotation_matrix(profile.angles[static_cast<std::size_t>(k)][t]));
    }
    std::vector<cplx> state(std::size_t{1} << n, cplx{0, 0});
    state.front() = cplx{std::cos(0.5 * coord.gamma), 0.0};
    state.back() = std::polar(std::sin(0.5 * coord.gamma), coord.phi);
    const auto rotated = mat_vec(full, state);
    std::vector<double> probs;
    probs.reserve(rotated.size());
    for (const auto& amp : rotated) probs.push_back(std::norm(amp));
    return probs;
}

inline bellgame::JointProbTensor joint_bruteforce(const bellgame::StrategyProfile& profile,
                                                  const bellgame::CoordinatorParams& coord, int n) {
    bellgame::JointProbTensor out;
    out.n_players = n;
    for (std::size_t s = 0; s < (std::size_t{1} << n); ++s)
        out.sectors.push_back(sector_probs_bruteforce(profile, coord, n, s));
    return out;
}

inline double fd_gradient(const bellgame::StrategyProfile& profile, const bellgame::CoordinatorParams& coord,
                          const bellgame::GameSpec& spec, int player, int type, double step = 1e-5) {
    auto shifted = [&](double delta) {
        bellgame::StrategyProfile p = profile;
        p.angles[static_cast<std::size_t>(player)][static_cast<std::size_t>(type)] =
            bellgame::wrap_angle(p.angles[static_cast<std::size_t>(player)][static_cast<std::size_t>(type)] + delta);
        return bellgame::payoffs_for(p, coord, spec).total[static_cast<std::size_t>(player)];
    };
    return (shifted(step) - shifted(-step)) / (2.0 * step);
}

struct RandomInputs {
    std::mt19937_64 rng;
    explicit RandomInputs(std::uint64_t seed) : rng(seed) {}

    // Sampling convention of the test plan: angles, gamma and phi all
    // uniform on [0, pi].
    bellgame::StrategyProfile profile(int n_players) {
        std::uniform_real_distribution<double> u(0.0, bellgame::kPi);
        bellgame::StrategyProfile p;
        p.angles.resize(static_cast<std::size_t>(n_players));
        for (auto& per_player : p.angles) per_player = {u(rng), u(rng)};
        return p;
    }

    bellgame::StrategyProfile profile_full_circle(int n_players) {
        std::uniform_real_distribution<double> u(0.0, bellgame::kTwoPi);
        bellgame::StrategyProfile p;
        p.angles.resize(static_cast<std::size_t>(n_players));
        for (auto& per_player : p.angles) per_player = {u(rng), u(rng)};
        return p;
    }

    bellgame::CoordinatorParams coordinator() {
        std::uniform_real_distribution<double> u(0.0, bellgame::kPi);
        bellgame::CoordinatorParams c;
        c.gamma = u(rng);
        c.phi = u(rng);
        return c;
    }

    // Sector-normalized random tensor (not necessarily quantum-realizable).
    bellgame::JointProbTensor normalized_tensor(int n_players) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        bellgame::JointProbTensor t;
        t.n_players = n_players;
        const std::size_t dim = std::size_t{1} << n_players;
        t.sectors.assign(dim, std::vector<double>(dim, 0.0));
        for (auto& sector : t.sectors) {
            double sum = 0.0;
            for (auto& p : sector) {
                p = u(rng);
                sum += p;
            }
            for (auto& p : sector) p /= sum;
        }
        return t;
    }
};

}  // namespace oracles

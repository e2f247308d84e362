#include "bellgame/payoff.hpp"

#include <cmath>

namespace bellgame {

double eval_selection(const JointProbTensor& probs, const std::vector<SignedTerm>& terms) {
    double sum = 0.0;
    for (const auto& t : terms) {
        if (t.sector >= probs.n_sectors() || t.move >= probs.n_moves())
            throw std::out_of_range("selection term index out of range");
        sum += t.coeff * probs.sectors[t.sector][t.move];
    }
    return sum;
}

PayoffVector sector_payoffs(const JointProbTensor& probs, const GameSpec& spec) {
    if (probs.n_sectors() != spec.n_sectors() || probs.n_moves() != spec.n_moves())
        throw std::invalid_argument("probability tensor shape does not match game");
    PayoffVector out;
    out.sector.assign(spec.payoffs.size(), std::vector<double>(probs.n_sectors(), 0.0));
    for (std::size_t k = 0; k < spec.payoffs.size(); ++k) {
        for (std::size_t s = 0; s < probs.n_sectors(); ++s) {
            double v = 0.0;
            for (std::size_t m = 0; m < probs.n_moves(); ++m)
                v += spec.payoffs[k][s][m] * probs.sectors[s][m];
            out.sector[k][s] = v;
        }
    }
    return out;
}

PayoffVector total_payoffs(PayoffVector with_sectors, const GameSpec& spec) {
    with_sectors.total.assign(with_sectors.sector.size(), 0.0);
    for (std::size_t k = 0; k < with_sectors.sector.size(); ++k) {
        double v = 0.0;
        for (std::size_t s = 0; s < with_sectors.sector[k].size(); ++s)
            v += spec.sector_weight(s) * with_sectors.sector[k][s];
        with_sectors.total[k] = v;
    }
    return with_sectors;
}

PayoffVector payoffs_for(const StrategyProfile& profile, const CoordinatorParams& coord, const GameSpec& spec) {
    const JointProbTensor probs = quantum_joint_nparty(profile, coord, spec.n_players());
    return total_payoffs(sector_payoffs(probs, spec), spec);
}

DeltaPair delta_pair(const JointProbTensor& probs) {
    if (probs.n_players != 2 || probs.n_sectors() != 4 || probs.n_moves() != 4)
        throw std::invalid_argument("delta_pair needs a 2-player, 2-type tensor");
    // Sectors: [00]=0, [01]=1, [10]=2, [11]=3; moves: 00=0, 11=3.
    static const std::vector<SignedTerm> d00 = {{0, 0, 1.0}, {2, 0, -1.0}, {1, 0, -1.0}, {3, 3, -1.0}};
    static const std::vector<SignedTerm> d11 = {{0, 3, 1.0}, {2, 3, -1.0}, {1, 3, -1.0}, {3, 0, -1.0}};
    return {eval_selection(probs, d00), eval_selection(probs, d11)};
}

PayoffDecomposition payoff_decomposition(const StrategyProfile& profile, const CoordinatorParams& coord,
                                         const GameSpec& spec) {
    if (spec.n_players() != 2) throw std::invalid_argument("payoff_decomposition is two-player only");
    const ProbDecomposition parts = decompose(profile, coord);
    const PayoffVector pseudo = total_payoffs(sector_payoffs(parts.pseudo_classical, spec), spec);
    const PayoffVector interf = total_payoffs(sector_payoffs(parts.interference, spec), spec);

    PayoffDecomposition out;
    out.pseudo_classical = pseudo.total;
    out.interference = interf.total;
    out.total.resize(pseudo.total.size());
    for (std::size_t k = 0; k < out.total.size(); ++k)
        out.total[k] = out.pseudo_classical[k] + out.interference[k];
    return out;
}

double payoff_gradient(const StrategyProfile& profile, const CoordinatorParams& coord, const GameSpec& spec,
                       int player, int type) {
    const JointProbTensor dprobs = joint_prob_derivative(profile, coord, player, type);
    double grad = 0.0;
    for (std::size_t s = 0; s < dprobs.n_sectors(); ++s) {
        const double w = spec.sector_weight(s);
        if (w == 0.0) continue;
        double v = 0.0;
        for (std::size_t m = 0; m < dprobs.n_moves(); ++m)
            v += spec.payoffs[static_cast<std::size_t>(player)][s][m] * dprobs.sectors[s][m];
        grad += w * v;
    }
    return grad;
}

double TrigForm::argmax_circle() const {
    if (amplitude() == 0.0) return 0.0;
    return wrap_angle(std::atan2(b, a));
}

TrigForm payoff_angle_form(const StrategyProfile& profile, const CoordinatorParams& coord, const GameSpec& spec,
                           int player, int angle_player, int angle_type) {
    StrategyProfile probe = profile;
    auto& slot = probe.angles[static_cast<std::size_t>(angle_player)][static_cast<std::size_t>(angle_type)];
    const auto payoff_at = [&](double theta) {
        slot = theta;
        return payoffs_for(probe, coord, spec).total[static_cast<std::size_t>(player)];
    };
    const double f0 = payoff_at(0.0);
    const double fh = payoff_at(0.5 * kPi);
    const double fp = payoff_at(kPi);
    TrigForm form;
    form.a = 0.5 * (f0 - fp);
    form.c = 0.5 * (f0 + fp);
    form.b = fh - form.c;
    return form;
}

}  // namespace bellgame

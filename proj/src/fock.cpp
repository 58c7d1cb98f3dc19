#include "mdiqkd/fock.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace mdiqkd {

namespace {

// Mode images of the four input modes under the beam-splitter network,
// unitary 1/sqrt(2) convention so probabilities normalize:
//   a_H -> (d1 + d2)/sqrt2    a_V -> (d3 - d4)/sqrt2
//   b_H -> (d3 + d4)/sqrt2    b_V -> (d1 - d2)/sqrt2
using ModeVec = std::array<double, 4>;
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr ModeVec kAliceH{kInvSqrt2, kInvSqrt2, 0.0, 0.0};
constexpr ModeVec kAliceV{0.0, 0.0, kInvSqrt2, -kInvSqrt2};
constexpr ModeVec kBobH{0.0, 0.0, kInvSqrt2, kInvSqrt2};
constexpr ModeVec kBobV{kInvSqrt2, -kInvSqrt2, 0.0, 0.0};

using AmpMap = std::map<ModeOccupation, double>;

// Occupation amplitudes of prod_k (sum_i c_k[i] d_i^dag)^{n_k} |0>, with
// the 1/sqrt(n_k!) input normalization folded in.
AmpMap expand_state(const std::vector<std::pair<ModeVec, int>>& factors) {
    AmpMap poly;
    poly[{0, 0, 0, 0}] = 1.0;
    double norm = 1.0;
    for (const auto& [coeffs, n] : factors) {
        for (int rep = 0; rep < n; ++rep) {
            AmpMap next;
            for (const auto& [occ, c] : poly) {
                for (int i = 0; i < 4; ++i) {
                    if (coeffs[i] == 0.0) continue;
                    ModeOccupation o2 = occ;
                    ++o2[i];
                    next[o2] += c * coeffs[i];
                }
            }
            poly = std::move(next);
        }
        norm *= std::tgamma(n + 1.0);
    }
    // monomial coefficient -> amplitude: multiply by sqrt(prod m_i!)
    for (auto& [occ, c] : poly) {
        double f = 1.0;
        for (int m : occ) f *= std::tgamma(m + 1.0);
        c *= std::sqrt(f) / std::sqrt(norm);
    }
    return poly;
}

std::vector<std::pair<ModeVec, int>> input_factors(int n_a, int n_b, InputCombo combo) {
    switch (combo) {
        case InputCombo::HH: return {{kAliceH, n_a}, {kBobH, n_b}};
        case InputCombo::VV: return {{kAliceV, n_a}, {kBobV, n_b}};
        case InputCombo::HV: return {{kAliceH, n_a}, {kBobV, n_b}};
        case InputCombo::VH: return {{kAliceV, n_a}, {kBobH, n_b}};
    }
    throw std::logic_error("input_factors: bad combo");
}

double no_click_prob(int n, double eta, double p_d) {
    return (1.0 - p_d) * std::pow(1.0 - eta, n);
}

// The four two-fold coincidences that herald a successful swap: exactly
// one detector of {d1, d2} fires together with exactly one of {d3, d4}.
constexpr std::array<std::array<bool, 4>, 4> kSuccessPatterns{{
    {true, false, true, false},
    {true, false, false, true},
    {false, true, true, false},
    {false, true, false, true},
}};

double pattern_weight(const ModeOccupation& occ, const std::array<bool, 4>& pattern,
                      double eta, double p_d) {
    double w = 1.0;
    for (int i = 0; i < 4; ++i) {
        const double nc = no_click_prob(occ[i], eta, p_d);
        w *= pattern[i] ? 1.0 - nc : nc;
    }
    return w;
}

void check_photon_args(int n_a, int n_b, double eta, double p_d, int cap) {
    if (n_a < 1 || n_b < 1)
        throw std::domain_error("fock oracle: photon numbers must be >= 1");
    if (n_a > cap || n_b > cap)
        throw std::domain_error("fock oracle: photon number exceeds the configured cap");
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::domain_error("fock oracle: eta must lie in [0, 1]");
    if (!(p_d >= 0.0 && p_d < 1.0))
        throw std::domain_error("fock oracle: p_d must lie in [0, 1)");
}

}  // namespace

std::vector<double> split_binomial(int n) {
    if (n < 0) throw std::domain_error("split_binomial: n must be >= 0");
    std::vector<double> dist(n + 1, 0.0);
    dist[0] = 1.0;
    for (int k = 1; k <= n; ++k) {  // Pascal row, then scale by 2^-n
        for (int i = k; i > 0; --i) dist[i] += dist[i - 1];
    }
    const double scale = std::pow(0.5, n);
    for (double& d : dist) d *= scale;
    return dist;
}

double threshold_click_prob(int n, double eta, double p_d) {
    if (n < 0) throw std::domain_error("threshold_click_prob: n must be >= 0");
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::domain_error("threshold_click_prob: eta must lie in [0, 1]");
    if (!(p_d >= 0.0 && p_d < 1.0))
        throw std::domain_error("threshold_click_prob: p_d must lie in [0, 1)");
    return 1.0 - no_click_prob(n, eta, p_d);
}

std::array<double, 16> click_pattern_distribution(int n_a, int n_b, double eta,
                                                  double p_d, InputCombo combo) {
    check_photon_args(n_a, n_b, eta, p_d, 64);
    const AmpMap amps = expand_state(input_factors(n_a, n_b, combo));
    std::array<double, 16> dist{};
    for (const auto& [occ, amp] : amps) {
        const double p = amp * amp;
        for (int pat = 0; pat < 16; ++pat) {
            const std::array<bool, 4> clicks{(pat & 1) != 0, (pat & 2) != 0,
                                             (pat & 4) != 0, (pat & 8) != 0};
            dist[pat] += p * pattern_weight(occ, clicks, eta, p_d);
        }
    }
    return dist;
}

double bsm_success_oracle(int n_a, int n_b, double eta_md, double p_d, int photon_cap) {
    check_photon_args(n_a, n_b, eta_md, p_d, photon_cap);
    double total = 0.0;
    for (const InputCombo combo :
         {InputCombo::HH, InputCombo::VV, InputCombo::HV, InputCombo::VH}) {
        const AmpMap amps = expand_state(input_factors(n_a, n_b, combo));
        for (const auto& [occ, amp] : amps) {
            const double p = amp * amp;
            for (const auto& pattern : kSuccessPatterns) {
                total += p * pattern_weight(occ, pattern, eta_md, p_d);
            }
        }
    }
    return total / 4.0;  // the four input combinations are equally likely
}

double cross_term_weight(int n_a, int n_b, double eta) {
    check_photon_args(n_a, n_b, eta, 0.0, 12);
    const AmpMap ket = expand_state({{kAliceH, n_a}, {kBobH, n_b}});
    const AmpMap bra = expand_state({{kAliceV, n_a}, {kBobV, n_b}});
    double total = 0.0;
    for (const auto& [occ, kamp] : ket) {
        const auto it = bra.find(occ);
        if (it == bra.end()) continue;
        for (const auto& pattern : kSuccessPatterns) {
            total += kamp * it->second * pattern_weight(occ, pattern, eta, 0.0);
        }
    }
    return total;
}

bool cross_term_vanishes(int n_a, int n_b) {
    if (n_a < 1 || n_b < 1 || n_a > 4 || n_b > 4)
        throw std::domain_error("cross_term_vanishes: supported for 1 <= n <= 4");
    for (const double eta : {0.17, 0.37, 0.63, 1.0}) {
        if (std::abs(cross_term_weight(n_a, n_b, eta)) > 1e-14) return false;
    }
    return true;
}

}  // namespace mdiqkd

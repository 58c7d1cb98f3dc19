#pragma once

#include <array>
#include <vector>

namespace mdiqkd {

/// Photon counts at the four detector modes d1..d4.
using ModeOccupation = std::array<int, 4>;

/// Which polarizations the two sources emitted. H photons from Alice share
/// the d1/d2 detector pair with V photons from Bob (and vice versa on
/// d3/d4), so the mixed combinations interfere and bunch.
enum class InputCombo { HH, VV, HV, VH };

/// A balanced splitter sends each of n photons independently to either
/// output: returns the binomial(n, 1/2) distribution, indexed by the count
/// in the first output mode (size n + 1).
std::vector<double> split_binomial(int n);

/// Click probability of a threshold detector receiving n photons:
/// 1 - (1 - p_d)(1 - eta)^n.
double threshold_click_prob(int n, double eta, double p_d = 0.0);

/// Joint probability of each of the 16 click/no-click patterns of d1..d4
/// for Fock inputs of n_a and n_b photons in the given polarization combo,
/// with per-photon efficiency eta and dark counts p_d folded into the
/// threshold POVMs. Index = d1 + 2 d2 + 4 d3 + 8 d4 (bit set = click).
/// The 16 entries sum to 1.
std::array<double, 16> click_pattern_distribution(int n_a, int n_b, double eta,
                                                  double p_d, InputCombo combo);

/// Brute-force BSM success probability: propagates the photons through the
/// beam-splitter network amplitude by amplitude, applies the threshold
/// POVMs, and averages the four heralding coincidence patterns over the
/// four computational-basis input combinations. Independent of the closed
/// form it validates.
/// Throws std::domain_error above photon_cap photons per side.
double bsm_success_oracle(int n_a, int n_b, double eta_md, double p_d = 0.0,
                          int photon_cap = 12);

/// Evaluates whether the mismatched-polarization coherence
/// |H^na H^nb><V^na V^nb| contributes zero to the heralding probability.
/// True when n_a != n_b (the ket and bra occupy disjoint detector pairs)
/// and when n_a = n_b is odd (pairwise parity cancellation across the
/// coincidence set). For equal even photon numbers the contribution is
/// genuinely nonzero and this returns false.
bool cross_term_vanishes(int n_a, int n_b);

/// Heralding-probability contribution of the coherence above (summed over
/// the four success patterns), evaluated numerically at efficiency eta.
double cross_term_weight(int n_a, int n_b, double eta);

}  // namespace mdiqkd

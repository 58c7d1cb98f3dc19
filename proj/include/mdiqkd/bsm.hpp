#pragma once

namespace mdiqkd {

/// One operating point of the linear-optics Bell-state measurement.
/// For the repeater eta is eta_m * eta_d; for the memoryless relay it is
/// the full path efficiency P0 * eta_d.
struct BsmPoint {
    double eta = 0.0;  // effective efficiency seen by the detectors, in [0,1]
    double p_d = 0.0;  // dark count probability per detector per gate

    void validate() const;
};

/// Success probability of the partial BSM on one photon per arm, with
/// threshold detectors of efficiency eta and dark count probability p_d.
/// Equals eta^2 / 2 when p_d = 0; maximum 1/2.
double bsm_success_single(const BsmPoint& point);

/// QBER of accepted events when the memories never decohere: errors come
/// only from dark-count-assisted false heralds. Zero when p_d = 0.
/// Throws std::domain_error at the degenerate point eta = p_d = 0.
double qber_floor(const BsmPoint& point);

/// Success probability of the partial BSM when the memories hold n_a and
/// n_b same-polarization photons, at combined efficiency eta_md and no
/// dark counts. Product form: each arm needs one detector of its pair to
/// fire with the partner silent, and two of the four Bell states herald.
/// bsm_success_fock(1, 1, eta) == bsm_success_single({eta, 0}).
double bsm_success_fock(int n_a, int n_b, double eta_md);

}  // namespace mdiqkd

#pragma once

#include "mdiqkd/params.hpp"

namespace mdiqkd {

/// Single-photon-source scenario. The storage probability per attempt is
/// the fiber transmittance of one arm.
struct SpsScenario {
    DeviceParams device;
    LinkConfig link;
    MemoryModel memory;

    double p0() const { return link.transmittance(); }
    void validate() const;
};

/// Rate bundle for one parameter point. skr_per_pulse is clamped at zero;
/// the signed secret fraction is kept for root finding and diagnostics.
struct RateReport {
    double avg_attempts = 0.0;           // expected source attempts per raw bit
    double avg_time_s = 0.0;             // avg_attempts / nu_s
    double qber_x = 0.0;
    double qber_z = 0.0;
    double skr_per_pulse = 0.0;          // max(0, signed secret fraction / <K>)
    double skr_per_pulse_signed = 0.0;
    double skr_per_second = 0.0;
    bool feasible = false;               // signed rate > 0
};

/// Truncated-series evaluation. `converged` is false when the neglected
/// tail bound exceeds 1e-10 of the computed value.
struct SeriesEval {
    double value = 0.0;
    double tail_bound = 0.0;
    bool converged = true;
};

/// P(k_a, k_b): both memories load for the first time in bins k_a and k_b,
/// each arm an independent geometric with success probability p0.
double joint_storage_prob(int k_a, int k_b, double p0);

/// Expected source attempts per raw bit, closed form:
/// E[max of two geometrics] / p_bsm = (3-2p0)/((2-p0) p0 p_bsm).
/// Throws std::domain_error when p0 = 0 or p_bsm = 0.
double avg_attempts_closed(double p0, double p_bsm);

/// Same expectation as an explicit double sum over loading bins and BSM
/// retries: each reload-and-measure round costs one draw of max(k_a, k_b)
/// bins and succeeds with probability p_bsm. The bin sums are truncated at
/// `truncation`; the geometric retry factor is summed to numerical
/// convergence. Used as a transcription check of the closed form.
SeriesEval avg_attempts_series(double p0, double p_bsm, int truncation);

/// Average QBER under the cutoff decoherence model, closed form:
/// e = e_inf + (1 - 2 e_inf) (1-p0)^(1+tau) / (2-p0).
/// tau = infinity returns e_inf exactly. Exact for integer tau; continuous
/// interpolation otherwise.
double qber_cutoff_closed(double e_inf, double p0, double tau);

/// Same average as the explicit sum over (k_a, k_b) of the per-event QBER,
/// which is e_inf when |k_a - k_b| <= tau and 1/2 otherwise (the later
/// photon is measured immediately, so only the bin gap decoheres).
/// Matches the closed form exactly at integer tau.
SeriesEval qber_cutoff_series(double e_inf, double p0, double tau, int truncation);

/// Smallest coherence time (in bins, real-valued) at which the cutoff-model
/// QBER equals e_max:
/// tau = log((p0-2)(e_inf-e_max) / ((p0-1)(2 e_inf-1))) / log(1-p0).
/// May be negative when even tau = 0 stays below e_max. p0 = 1 returns 0.
/// Throws std::domain_error when e_inf >= e_max (no solution).
double tau_min_sps(double e_inf, double p0, double e_max = 0.11);

/// Repeater secret key rate: memories at the middle station, BSM at
/// efficiency eta_m * eta_d, waiting-time statistics from p0 = eta_T.
/// The analytic path evaluates the cutoff model only.
RateReport repeater_rate_sps(const SpsScenario& scenario);

/// Memoryless relay: both photons must survive the same bin, so the BSM
/// sees path efficiency p0 * eta_d and there is no decoherence term.
RateReport relay_rate_sps(const DeviceParams& device, const LinkConfig& link);

}  // namespace mdiqkd

#pragma once

#include "mdiqkd/params.hpp"

namespace mdiqkd {

/// Weak-coherent-pulse scenario with decoy-state estimation assumed
/// perfect (asymptotic, infinitely many intensities). The closed forms
/// require dark-count-free detectors, so p_d must be 0.
struct WcpScenario {
    DeviceParams device;
    LinkConfig link;
    MemoryModel memory;
    double mu = 0.5;  // signal intensity (mean photon number), > 0

    void validate() const;  // throws when device.p_d != 0
};

/// Search specification for the one-dimensional intensity optimization:
/// logarithmic coarse grid, then golden-section refinement.
struct IntensitySearchSpec {
    double mu_lo = 1e-3;
    double mu_hi = 10.0;
    int grid_points = 64;
    double rel_tol = 1e-9;  // relative width at which refinement stops
};

struct WcpRateReport {
    double mu = 0.0;        // intensity of this report (the optimum for optimize_mu)
    double p0 = 0.0;        // storage probability 1 - exp(-mu eta_T)
    double f11 = 0.0;       // single-photon fraction of the raw key
    double qber_x11 = 0.0;
    double qber_z = 0.0;
    double p_bsm = 0.0;
    double avg_attempts = 0.0;
    double skr_per_pulse = 0.0;
    double skr_per_pulse_signed = 0.0;
    double skr_per_second = 0.0;
    bool feasible = false;
    bool hit_boundary = false;  // optimum landed on a search bound
};

struct WcpQber {
    double x11 = 0.0;  // single-photon X-basis QBER, driven by P0^11
    double z = 0.0;    // Z-basis QBER over all data, driven by P0
};

/// Storage probability of a phase-randomized pulse: 1 - exp(-mu eta_t).
double storage_prob_wcp(double mu, double eta_t);

/// Photon-number distribution inside the memory: Poissonian with mean
/// mu * eta_t (thinning of the source Poissonian by the channel).
double stored_photon_dist(int n, double mu, double eta_t);

/// Same quantity as the explicit thinned-source sum over emitted photon
/// numbers m = n .. n + extra_terms. Transcription check.
double stored_photon_dist_series(int n, double mu, double eta_t, int extra_terms = 60);

/// BSM success probability given that both memories stored at least one
/// photon (the conditioning denominator is P0^2):
/// 2 exp(-2 mu eta_t (eta_md - 1)) (exp(mu eta_md eta_t / 2) - 1)^2
///   / (exp(mu eta_t) - 1)^2.
/// Tends to eta_md^2 / 2 as mu eta_t -> 0. Throws at mu = 0.
double p_bsm_wcp(double mu, double eta_t, double eta_md);

/// The same success probability as the photon-number double sum weighted
/// by bsm_success_fock, truncated at n_max photons per side.
double p_bsm_wcp_series(double mu, double eta_t, double eta_md, int n_max = 80);

/// Fraction of raw-key events in which both sources emitted exactly one
/// photon:
/// mu^2 eta_md^2 eta_t^2 exp(mu eta_md eta_t - 2 mu)
///   / (4 (exp(mu eta_md eta_t / 2) - 1)^2).
/// Tends to 1 as mu -> 0. Throws at mu = 0.
double f11(double mu, double eta_t, double eta_md);

/// Series counterpart of f11. The numerator is the single-photon-emission
/// success weight (P0^11)^2 * bsm_success_fock(1,1); the closed form above
/// corresponds to a denominator with per-side acceptance weight
/// 1 - (1 - eta_md/2)^n, i.e. 2 (sum_n P(n) (1 - (1-eta_md/2)^n))^2.
/// Weighting the denominator by the full per-pattern success term instead
/// would rescale f11 by exp(-mu eta_t eta_md); the closed form is the
/// normative definition here and this sum reproduces it exactly.
double f11_series(double mu, double eta_t, double eta_md, int n_max = 80);

/// Decoherence-driven QBERs (dark counts are zero by precondition).
/// The X-basis single-photon QBER uses the single-photon storage
/// probability P0^11 = mu exp(-mu) eta_t; e_Z uses all data via P0.
WcpQber qber_wcp(const WcpScenario& scenario);

/// Rate at a fixed intensity: waiting-time statistics as in the SPS case
/// with the WCP storage probability, secret fraction
/// f11 (1 - h(e_X^11)) - h(e_Z).
WcpRateReport wcp_rate_at_mu(const WcpScenario& scenario);

/// Maximizes the signed secret key rate over the intensity. Deterministic:
/// coarse logarithmic grid then golden-section refinement. When the rate
/// is zero everywhere the report is flagged infeasible.
WcpRateReport optimize_mu(const DeviceParams& device, const LinkConfig& link,
                          const MemoryModel& memory,
                          const IntensitySearchSpec& search = {});

/// Smallest coherence time with positive optimized rate, by bisection on
/// tau with the intensity re-optimized at every probe.
/// Throws std::domain_error when even tau = infinity gives zero rate.
double tau_min_wcp(const DeviceParams& device, const LinkConfig& link,
                   const IntensitySearchSpec& search = {});

}  // namespace mdiqkd

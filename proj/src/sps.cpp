#include "mdiqkd/sps.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mdiqkd/bsm.hpp"

namespace mdiqkd {

namespace {

void check_prob(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error(std::string(name) + " must lie in [0, 1]");
    }
}

// Assembles a RateReport from <K> and the two QBERs.
RateReport make_report(double avg_attempts, double qber_x, double qber_z, double nu_s) {
    RateReport r;
    r.avg_attempts = avg_attempts;
    r.avg_time_s = avg_attempts / nu_s;
    r.qber_x = qber_x;
    r.qber_z = qber_z;
    r.skr_per_pulse_signed =
        (1.0 - binary_entropy(qber_z) - binary_entropy(qber_x)) / avg_attempts;
    r.skr_per_pulse = r.skr_per_pulse_signed > 0.0 ? r.skr_per_pulse_signed : 0.0;
    r.skr_per_second = r.skr_per_pulse * nu_s;
    r.feasible = r.skr_per_pulse_signed > 0.0;
    return r;
}

}  // namespace

void SpsScenario::validate() const {
    device.validate();
    link.validate();
    memory.validate();
}

double joint_storage_prob(int k_a, int k_b, double p0) {
    if (k_a < 1 || k_b < 1)
        throw std::domain_error("joint_storage_prob: bins must be >= 1");
    check_prob(p0, "joint_storage_prob: p0");
    return p0 * p0 * std::pow(1.0 - p0, k_a - 1) * std::pow(1.0 - p0, k_b - 1);
}

double avg_attempts_closed(double p0, double p_bsm) {
    check_prob(p0, "avg_attempts_closed: p0");
    check_prob(p_bsm, "avg_attempts_closed: p_bsm");
    if (p0 == 0.0 || p_bsm == 0.0)
        throw std::domain_error("avg_attempts_closed: infinite expectation at p0 = 0 or p_bsm = 0");
    return (3.0 - 2.0 * p0) / ((2.0 - p0) * p0) / p_bsm;
}

SeriesEval avg_attempts_series(double p0, double p_bsm, int truncation) {
    check_prob(p0, "avg_attempts_series: p0");
    check_prob(p_bsm, "avg_attempts_series: p_bsm");
    if (p0 == 0.0 || p_bsm == 0.0)
        throw std::domain_error("avg_attempts_series: infinite expectation at p0 = 0 or p_bsm = 0");
    if (truncation < 1)
        throw std::domain_error("avg_attempts_series: truncation must be >= 1");

    const double q = 1.0 - p0;

    // E[max(k_a, k_b)], split into the diagonal term and the two ordered
    // off-diagonal terms, truncated at `truncation` bins.
    double e_max = 0.0;
    double qk = 1.0;  // (1-p0)^(k-1)
    for (int k = 1; k <= truncation; ++k) {
        double pmax = p0 * p0 * qk * qk;  // P(k, k)
        double qi = 1.0;                  // (1-p0)^(i-1)
        for (int i = 1; i < k; ++i) {
            pmax += 2.0 * p0 * p0 * qk * qi;  // P(k, i) + P(i, k)
            qi *= q;
        }
        e_max += static_cast<double>(k) * pmax;
        qk *= q;
    }

    // Geometric BSM retries: round r costs r draws of max(k_a, k_b) and
    // succeeds with probability p_bsm. Summed until terms vanish.
    const double f = 1.0 - p_bsm;
    double retry = 0.0;
    double w = p_bsm;  // p_bsm (1-p_bsm)^(r-1)
    bool retry_converged = false;
    for (long r = 1; r <= 64 + static_cast<long>(64.0 / p_bsm); ++r) {
        const double term = static_cast<double>(r) * w;
        retry += term;
        w *= f;
        if (term < retry * 1e-17) {
            retry_converged = true;
            break;
        }
    }

    SeriesEval out;
    out.value = retry * e_max;
    // Tail of the bin sum, bounded via P(max = k) <= 2 p0 (1-p0)^(k-1):
    // sum_{k>K} k p0 (1-p0)^(k-1) = (1-p0)^K (K p0 + 1) / p0.
    const double bin_tail =
        2.0 * std::pow(q, truncation) * (truncation * p0 + 1.0) / p0 * retry;
    out.tail_bound = bin_tail;
    out.converged = retry_converged && bin_tail <= 1e-10 * out.value;
    return out;
}

double qber_cutoff_closed(double e_inf, double p0, double tau) {
    if (!(e_inf >= 0.0 && e_inf <= 0.5))
        throw std::domain_error("qber_cutoff_closed: e_inf must lie in [0, 1/2]");
    if (!(p0 > 0.0 && p0 <= 1.0))
        throw std::domain_error("qber_cutoff_closed: p0 must lie in (0, 1]");
    if (std::isnan(tau) || tau < 0.0)
        throw std::domain_error("qber_cutoff_closed: tau must be non-negative");
    if (tau == kInfiniteTau) return e_inf;
    return e_inf + (1.0 - 2.0 * e_inf) * std::pow(1.0 - p0, 1.0 + tau) / (2.0 - p0);
}

SeriesEval qber_cutoff_series(double e_inf, double p0, double tau, int truncation) {
    if (!(e_inf >= 0.0 && e_inf <= 0.5))
        throw std::domain_error("qber_cutoff_series: e_inf must lie in [0, 1/2]");
    if (!(p0 > 0.0 && p0 <= 1.0))
        throw std::domain_error("qber_cutoff_series: p0 must lie in (0, 1]");
    if (truncation < 1)
        throw std::domain_error("qber_cutoff_series: truncation must be >= 1");

    const double q = 1.0 - p0;
    double total = 0.0;
    double qk = 1.0;
    for (int k = 1; k <= truncation; ++k) {
        // Both photons in bin k: no gap, never decohered.
        total += e_inf * p0 * p0 * qk * qk;
        double qi = 1.0;
        for (int i = 1; i < k; ++i) {
            const double gap = static_cast<double>(k - i);
            const double e = gap <= tau ? e_inf : 0.5;
            total += 2.0 * e * p0 * p0 * qk * qi;  // P(k, i) and P(i, k)
            qi *= q;
        }
        qk *= q;
    }

    SeriesEval out;
    out.value = total;
    // P(either bin beyond the truncation) <= 2 (1-p0)^K, each event
    // contributing at most 1/2.
    out.tail_bound = std::pow(q, truncation);
    out.converged = out.tail_bound <= 1e-10 * (out.value > 0.0 ? out.value : 1.0);
    return out;
}

double tau_min_sps(double e_inf, double p0, double e_max) {
    if (!(e_inf >= 0.0 && e_inf <= 0.5))
        throw std::domain_error("tau_min_sps: e_inf must lie in [0, 1/2]");
    if (!(e_max > 0.0 && e_max < 0.5))
        throw std::domain_error("tau_min_sps: e_max must lie in (0, 1/2)");
    if (!(p0 > 0.0 && p0 <= 1.0))
        throw std::domain_error("tau_min_sps: p0 must lie in (0, 1]");
    if (e_inf >= e_max)
        throw std::domain_error("tau_min_sps: no solution, e_inf >= e_max");
    if (p0 == 1.0) return 0.0;  // no waiting, QBER is e_inf at any tau
    const double arg =
        (p0 - 2.0) * (e_inf - e_max) / ((p0 - 1.0) * (2.0 * e_inf - 1.0));
    return std::log(arg) / std::log(1.0 - p0);
}

RateReport repeater_rate_sps(const SpsScenario& scenario) {
    scenario.validate();
    if (scenario.memory.model != DecoherenceModel::Cutoff)
        throw std::invalid_argument(
            "repeater_rate_sps: analytic rates cover the cutoff model only; "
            "use the Monte Carlo module for the depolarizing model");
    const double p0 = scenario.p0();
    const BsmPoint point{scenario.device.eta_md(), scenario.device.p_d};
    const double p_bsm = bsm_success_single(point);
    const double k = avg_attempts_closed(p0, p_bsm);
    const double e_inf = qber_floor(point);
    const double e = qber_cutoff_closed(e_inf, p0, scenario.memory.tau);
    return make_report(k, e, e, scenario.device.nu_s);
}

RateReport relay_rate_sps(const DeviceParams& device, const LinkConfig& link) {
    device.validate();
    link.validate();
    const double p0 = link.transmittance();
    const BsmPoint point{p0 * device.eta_d, device.p_d};
    const double p_bsm = bsm_success_single(point);
    if (p_bsm == 0.0)
        throw std::domain_error("relay_rate_sps: no detection events");
    const double e = device.p_d == 0.0 ? 0.0 : qber_floor(point);
    return make_report(1.0 / p_bsm, e, e, device.nu_s);
}

}  // namespace mdiqkd

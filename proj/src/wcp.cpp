#include "mdiqkd/wcp.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mdiqkd/bsm.hpp"
#include "mdiqkd/sps.hpp"

namespace mdiqkd {

namespace {

double p0_single_photon(double mu, double eta_t) {
    return mu * std::exp(-mu) * eta_t;  // source emits exactly 1 and it survives
}

}  // namespace

void WcpScenario::validate() const {
    device.validate();
    link.validate();
    memory.validate();
    if (device.p_d != 0.0)
        throw std::invalid_argument("WcpScenario: the WCP path requires p_d = 0");
    if (!(mu > 0.0))
        throw std::invalid_argument("WcpScenario: mu must be positive");
}

double storage_prob_wcp(double mu, double eta_t) {
    if (!(mu >= 0.0))
        throw std::domain_error("storage_prob_wcp: mu must be non-negative");
    if (!(eta_t > 0.0 && eta_t <= 1.0))
        throw std::domain_error("storage_prob_wcp: eta_t must lie in (0, 1]");
    return -std::expm1(-mu * eta_t);
}

double stored_photon_dist(int n, double mu, double eta_t) {
    if (n < 0) throw std::domain_error("stored_photon_dist: n must be >= 0");
    const double lam = mu * eta_t;
    if (lam == 0.0) return n == 0 ? 1.0 : 0.0;
    return std::exp(n * std::log(lam) - lam - std::lgamma(n + 1.0));
}

double stored_photon_dist_series(int n, double mu, double eta_t, int extra_terms) {
    if (n < 0) throw std::domain_error("stored_photon_dist_series: n must be >= 0");
    double total = 0.0;
    for (int m = n; m <= n + extra_terms; ++m) {
        // source emits m, exactly n survive the channel
        const double emit = std::exp(m * std::log(mu) - mu - std::lgamma(m + 1.0));
        const double choose = std::exp(std::lgamma(m + 1.0) - std::lgamma(n + 1.0) -
                                       std::lgamma(m - n + 1.0));
        total += emit * choose * std::pow(eta_t, n) * std::pow(1.0 - eta_t, m - n);
    }
    return total;
}

double p_bsm_wcp(double mu, double eta_t, double eta_md) {
    if (!(mu > 0.0)) throw std::domain_error("p_bsm_wcp: mu must be positive");
    if (!(eta_t > 0.0 && eta_t <= 1.0))
        throw std::domain_error("p_bsm_wcp: eta_t must lie in (0, 1]");
    if (!(eta_md >= 0.0 && eta_md <= 1.0))
        throw std::domain_error("p_bsm_wcp: eta_md must lie in [0, 1]");
    const double lam = mu * eta_t;
    const double num = std::expm1(0.5 * lam * eta_md);
    const double den = std::expm1(lam);
    return 2.0 * std::exp(-2.0 * lam * (eta_md - 1.0)) * num * num / (den * den);
}

double p_bsm_wcp_series(double mu, double eta_t, double eta_md, int n_max) {
    if (!(mu > 0.0)) throw std::domain_error("p_bsm_wcp_series: mu must be positive");
    double total = 0.0;
    for (int na = 1; na <= n_max; ++na) {
        const double pa = stored_photon_dist(na, mu, eta_t);
        for (int nb = 1; nb <= n_max; ++nb) {
            total += pa * stored_photon_dist(nb, mu, eta_t) *
                     bsm_success_fock(na, nb, eta_md);
        }
    }
    const double p0 = storage_prob_wcp(mu, eta_t);
    return total / (p0 * p0);
}

double f11(double mu, double eta_t, double eta_md) {
    if (!(mu > 0.0)) throw std::domain_error("f11: mu must be positive");
    if (!(eta_t > 0.0 && eta_t <= 1.0))
        throw std::domain_error("f11: eta_t must lie in (0, 1]");
    if (!(eta_md > 0.0 && eta_md <= 1.0))
        throw std::domain_error("f11: eta_md must lie in (0, 1]");
    const double lam = mu * eta_t;
    const double den = std::expm1(0.5 * lam * eta_md);
    return mu * mu * eta_md * eta_md * eta_t * eta_t *
           std::exp(mu * eta_md * eta_t - 2.0 * mu) / (4.0 * den * den);
}

double f11_series(double mu, double eta_t, double eta_md, int n_max) {
    if (!(mu > 0.0)) throw std::domain_error("f11_series: mu must be positive");
    const double p011 = p0_single_photon(mu, eta_t);
    const double num = p011 * p011 * bsm_success_fock(1, 1, eta_md);
    double side = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        side += stored_photon_dist(n, mu, eta_t) *
                (1.0 - std::pow(1.0 - eta_md / 2.0, n));
    }
    return num / (2.0 * side * side);
}

WcpQber qber_wcp(const WcpScenario& scenario) {
    scenario.validate();
    const double eta_t = scenario.link.transmittance();
    const double p0 = storage_prob_wcp(scenario.mu, eta_t);
    const double p011 = p0_single_photon(scenario.mu, eta_t);
    WcpQber q;
    q.x11 = qber_cutoff_closed(0.0, p011, scenario.memory.tau);
    q.z = qber_cutoff_closed(0.0, p0, scenario.memory.tau);
    return q;
}

WcpRateReport wcp_rate_at_mu(const WcpScenario& scenario) {
    scenario.validate();
    if (scenario.memory.model != DecoherenceModel::Cutoff)
        throw std::invalid_argument(
            "wcp_rate_at_mu: analytic rates cover the cutoff model only");
    const double eta_t = scenario.link.transmittance();
    const double eta_md = scenario.device.eta_md();

    WcpRateReport r;
    r.mu = scenario.mu;
    r.p0 = storage_prob_wcp(scenario.mu, eta_t);
    if (eta_md == 0.0) {
        r.avg_attempts = std::numeric_limits<double>::infinity();
        return r;  // no retrieval, zero rate, infeasible
    }
    r.p_bsm = p_bsm_wcp(scenario.mu, eta_t, eta_md);
    r.f11 = f11(scenario.mu, eta_t, eta_md);
    const WcpQber q = qber_wcp(scenario);
    r.qber_x11 = q.x11;
    r.qber_z = q.z;
    r.avg_attempts = avg_attempts_closed(r.p0, r.p_bsm);
    r.skr_per_pulse_signed =
        (r.f11 * (1.0 - binary_entropy(r.qber_x11)) - binary_entropy(r.qber_z)) /
        r.avg_attempts;
    r.skr_per_pulse = r.skr_per_pulse_signed > 0.0 ? r.skr_per_pulse_signed : 0.0;
    r.skr_per_second = r.skr_per_pulse * scenario.device.nu_s;
    r.feasible = r.skr_per_pulse_signed > 0.0;
    return r;
}

WcpRateReport optimize_mu(const DeviceParams& device, const LinkConfig& link,
                          const MemoryModel& memory,
                          const IntensitySearchSpec& search) {
    if (!(search.mu_lo > 0.0 && search.mu_lo < search.mu_hi))
        throw std::invalid_argument("optimize_mu: need 0 < mu_lo < mu_hi");
    if (search.grid_points < 4)
        throw std::invalid_argument("optimize_mu: need at least 4 grid points");

    const auto rate_at = [&](double mu) {
        WcpScenario s{device, link, memory, mu};
        return wcp_rate_at_mu(s);
    };
    const auto signed_rate = [&](double mu) { return rate_at(mu).skr_per_pulse_signed; };

    // Coarse logarithmic grid.
    const int n = search.grid_points;
    const double ratio = search.mu_hi / search.mu_lo;
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i)
        grid[i] = search.mu_lo * std::pow(ratio, static_cast<double>(i) / (n - 1));
    int best = 0;
    double best_val = signed_rate(grid[0]);
    for (int i = 1; i < n; ++i) {
        const double v = signed_rate(grid[i]);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }

    // Golden-section refinement on the bracket around the best grid point.
    double a = grid[best > 0 ? best - 1 : 0];
    double b = grid[best < n - 1 ? best + 1 : n - 1];
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - (b - a) * gr;
    double d = a + (b - a) * gr;
    double fc = signed_rate(c);
    double fd = signed_rate(d);
    for (int it = 0; it < 400 && (b - a) > search.rel_tol * b; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * gr;
            fc = signed_rate(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * gr;
            fd = signed_rate(d);
        }
    }
    const double mu_opt = 0.5 * (a + b);

    WcpRateReport r = rate_at(mu_opt);
    r.hit_boundary = best == 0 || best == n - 1;
    if (!r.feasible) r.mu = grid[best];  // flat-zero objective: report the grid point
    return r;
}

double tau_min_wcp(const DeviceParams& device, const LinkConfig& link,
                   const IntensitySearchSpec& search) {
    MemoryModel mem{kInfiniteTau, DecoherenceModel::Cutoff};
    const auto best_signed = [&](double tau) {
        mem.tau = tau;
        return optimize_mu(device, link, mem, search).skr_per_pulse_signed;
    };
    if (!(best_signed(kInfiniteTau) > 0.0))
        throw std::domain_error("tau_min_wcp: zero rate even at infinite coherence time");

    double hi = 1.0;
    while (!(best_signed(hi) > 0.0)) {
        hi *= 2.0;
        if (hi > 1e12)
            throw std::domain_error("tau_min_wcp: positive-rate bracket not found");
    }
    double lo = hi > 1.0 ? hi / 2.0 : 0.0;
    if (lo == 0.0 && best_signed(0.0) > 0.0) return 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-9 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (best_signed(mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace mdiqkd

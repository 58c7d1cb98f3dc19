#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mdiqkd/bsm.hpp"
#include "mdiqkd/params.hpp"
#include "mdiqkd/sps.hpp"
#include "mdiqkd/wcp.hpp"

using namespace mdiqkd;

namespace {

const DeviceParams kWcpDevice{0.2, 0.0, 0.6, 1.0};

WcpScenario wcp_at(double distance_km, double tau, double mu) {
    return WcpScenario{kWcpDevice, LinkConfig{distance_km, 0.17},
                       MemoryModel{tau, DecoherenceModel::Cutoff}, mu};
}

}  // namespace

TEST_CASE("wcp storage probability") {
    CHECK(storage_prob_wcp(0.0, 0.3) == 0.0);
    CHECK(storage_prob_wcp(1.0, 0.1) == doctest::Approx(0.095162581964040427).epsilon(1e-14));
    // mu eta_t << 1 reduces to mu eta_t
    CHECK(storage_prob_wcp(1e-5, 1e-3) == doctest::Approx(1e-8).epsilon(1e-6));
}

TEST_CASE("stored photon number is Poissonian with mean mu eta_t") {
    CHECK(stored_photon_dist(0, 2.0, 0.3) == doctest::Approx(std::exp(-0.6)).epsilon(1e-14));
    CHECK(stored_photon_dist(0, 2.0, 0.3) ==
          doctest::Approx(1.0 - storage_prob_wcp(2.0, 0.3)).epsilon(1e-14));
    CHECK(stored_photon_dist(1, 1.0, 0.1) ==
          doctest::Approx(0.1 * std::exp(-0.1)).epsilon(1e-14));

    for (double mu : {0.2, 1.0, 5.0, 20.0}) {
        for (double eta_t : {1e-2, 0.1, 0.25}) {
            if (mu * eta_t > 5.0) continue;
            for (int n : {0, 1, 2, 5, 9}) {
                CHECK(stored_photon_dist_series(n, mu, eta_t) ==
                      doctest::Approx(stored_photon_dist(n, mu, eta_t)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("wcp bsm success: closed form vs photon-number sum") {
    CHECK(p_bsm_wcp(1.0, 0.1, 0.12) ==
          doctest::Approx(0.0078087957773346128).epsilon(1e-13));
    for (double mu : {0.05, 0.5, 1.0, 2.0}) {
        for (double eta_t : {1e-3, 1e-2, 0.1}) {
            for (double emd : {0.12, 0.5, 1.0}) {
                CHECK(p_bsm_wcp_series(mu, eta_t, emd) ==
                      doctest::Approx(p_bsm_wcp(mu, eta_t, emd)).epsilon(1e-10));
            }
        }
    }
    // vanishing intensity: single-photon limit eta^2/2
    CHECK(p_bsm_wcp(1e-6, 0.1, 0.12) ==
          doctest::Approx(0.12 * 0.12 / 2.0).epsilon(1e-4));
    CHECK(p_bsm_wcp(1.0, 0.1, 0.0) == 0.0);
    CHECK_THROWS_AS(p_bsm_wcp(0.0, 0.1, 0.12), std::domain_error);
}

TEST_CASE("single-photon fraction: closed form vs weighted sum") {
    CHECK(f11(1.0, 0.1, 0.12) == doctest::Approx(0.13614932740204536).epsilon(1e-13));
    for (double mu : {0.05, 0.5, 1.0, 2.0}) {
        for (double eta_t : {1e-3, 1e-2, 0.1}) {
            for (double emd : {0.12, 0.5, 1.0}) {
                const double v = f11(mu, eta_t, emd);
                CHECK(f11_series(mu, eta_t, emd) == doctest::Approx(v).epsilon(1e-10));
                CHECK(v > 0.0);
                CHECK(v <= 1.0 + 1e-12);
            }
        }
    }
    CHECK(f11(1e-6, 0.1, 0.12) == doctest::Approx(1.0).epsilon(1e-4));
    // strictly decreasing in the intensity
    double prev = 2.0;
    for (double mu : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0}) {
        const double v = f11(mu, 0.05, 0.12);
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS_AS(f11(0.0, 0.1, 0.12), std::domain_error);
}

TEST_CASE("wcp qber: decoherence only") {
    const WcpQber inf = qber_wcp(wcp_at(200.0, kInfiniteTau, 0.5));
    CHECK(inf.x11 == 0.0);
    CHECK(inf.z == 0.0);

    // mu = 1, eta_T = 0.1, tau = 0: P0 = 0.0951626, P0_11 = 0.0367879;
    // any nonzero bin gap decoheres, so e = (1-P0)/(2-P0)
    LinkConfig link{0.0, 0.17};
    WcpScenario s{kWcpDevice, link, MemoryModel{0.0, DecoherenceModel::Cutoff}, 1.0};
    s.link.alpha_db_per_km = 0.17;
    s.link.distance_km = 20.0 / 0.17;  // eta_T = 0.1
    const WcpQber q = qber_wcp(s);
    CHECK(q.z == doctest::Approx(0.47502081252106001).epsilon(1e-12));
    CHECK(q.x11 == doctest::Approx(0.49063067486599131).epsilon(1e-12));

    // vanishing storage probability: both tend to 1/2
    WcpScenario far = wcp_at(2000.0, 5.0, 0.5);
    const WcpQber qf = qber_wcp(far);
    CHECK(qf.x11 == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(qf.z == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("wcp path requires dark-count-free detectors") {
    WcpScenario s = wcp_at(100.0, kInfiniteTau, 0.5);
    s.device.p_d = 1e-6;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    CHECK_THROWS_AS(qber_wcp(s), std::invalid_argument);
    CHECK_THROWS_AS(wcp_rate_at_mu(s), std::invalid_argument);
}

TEST_CASE("wcp rate at fixed intensity") {
    // no decoherence, no dark counts: skr = f11 / <K>
    const WcpRateReport r = wcp_rate_at_mu(wcp_at(100.0, kInfiniteTau, 0.8));
    CHECK(r.skr_per_pulse ==
          doctest::Approx(r.f11 * r.p_bsm * (2.0 - r.p0) * r.p0 / (3.0 - 2.0 * r.p0))
              .epsilon(1e-12));
    CHECK(r.feasible);

    // tiny intensity approaches the single-photon repeater at the same P0
    const WcpRateReport w = wcp_rate_at_mu(wcp_at(100.0, kInfiniteTau, 1e-3));
    const double sps_rate_same_p0 =
        bsm_success_fock(1, 1, 0.12) * (2.0 - w.p0) * w.p0 / (3.0 - 2.0 * w.p0);
    CHECK(w.skr_per_pulse == doctest::Approx(sps_rate_same_p0).epsilon(5e-3));

    // no retrieval, no key
    WcpScenario dead = wcp_at(100.0, kInfiniteTau, 0.5);
    dead.device.eta_m = 0.0;
    const WcpRateReport rd = wcp_rate_at_mu(dead);
    CHECK(rd.skr_per_pulse == 0.0);
    CHECK_FALSE(rd.feasible);
}

TEST_CASE("intensity optimization") {
    const LinkConfig link{100.0, 0.17};
    const MemoryModel mem{kInfiniteTau, DecoherenceModel::Cutoff};
    const WcpRateReport best = optimize_mu(kWcpDevice, link, mem);
    CHECK(best.feasible);
    CHECK_FALSE(best.hit_boundary);

    // local optimality at mu_opt (1 +- 1e-3)
    for (double shift : {1.0 - 1e-3, 1.0 + 1e-3}) {
        WcpScenario probe{kWcpDevice, link, mem, best.mu * shift};
        CHECK(wcp_rate_at_mu(probe).skr_per_pulse <= best.skr_per_pulse * (1.0 + 1e-12));
    }

    // doubling the coarse grid leaves the optimum in place
    IntensitySearchSpec dense;
    dense.grid_points = 128;
    const WcpRateReport best2 = optimize_mu(kWcpDevice, link, mem, dense);
    CHECK(best2.mu == doctest::Approx(best.mu).epsilon(1e-3));

    // infeasible everywhere: zero coherence time and huge loss
    const WcpRateReport none = optimize_mu(
        kWcpDevice, LinkConfig{1500.0, 0.17}, MemoryModel{0.0, DecoherenceModel::Cutoff});
    CHECK_FALSE(none.feasible);
    CHECK(none.skr_per_pulse == 0.0);

    // a search window that excludes the optimum flags the boundary
    IntensitySearchSpec narrow;
    narrow.mu_lo = 2.0;
    narrow.mu_hi = 10.0;
    const WcpRateReport edge = optimize_mu(kWcpDevice, link, mem, narrow);
    CHECK(edge.hit_boundary);
}

TEST_CASE("minimal coherence time for wcp") {
    const LinkConfig link{100.0, 0.17};
    const double tw = tau_min_wcp(kWcpDevice, link);
    const double ts = tau_min_sps(0.0, link.transmittance());
    CHECK(tw > ts);
    CHECK(tw / ts < 10.0);

    // just above the threshold the optimized rate is positive, just below zero
    const MemoryModel above{tw * 1.001, DecoherenceModel::Cutoff};
    const MemoryModel below{tw * 0.999, DecoherenceModel::Cutoff};
    CHECK(optimize_mu(kWcpDevice, link, above).feasible);
    CHECK_FALSE(optimize_mu(kWcpDevice, link, below).feasible);

    // flat region: five times the minimum recovers most of the tau = inf rate
    const MemoryModel flat{5.0 * tw, DecoherenceModel::Cutoff};
    const MemoryModel inf{kInfiniteTau, DecoherenceModel::Cutoff};
    CHECK(optimize_mu(kWcpDevice, link, flat).skr_per_pulse >=
          0.95 * optimize_mu(kWcpDevice, link, inf).skr_per_pulse);
}

TEST_CASE("optimized wcp never beats ideal single photons") {
    const MemoryModel inf{kInfiniteTau, DecoherenceModel::Cutoff};
    for (double l : {20.0, 100.0, 200.0, 300.0, 400.0}) {
        const LinkConfig link{l, 0.17};
        const WcpRateReport w = optimize_mu(kWcpDevice, link, inf);
        const RateReport s = repeater_rate_sps(SpsScenario{kWcpDevice, link, inf});
        CHECK(w.skr_per_pulse <= s.skr_per_pulse * (1.0 + 1e-12));
    }
}

TEST_CASE("wcp repeater overtakes the single-photon relay at long distance") {
    const MemoryModel inf{kInfiniteTau, DecoherenceModel::Cutoff};
    for (double l : {250.0, 300.0, 400.0}) {
        const LinkConfig link{l, 0.17};
        const WcpRateReport w = optimize_mu(kWcpDevice, link, inf);
        const RateReport relay = relay_rate_sps(kWcpDevice, link);
        CHECK(w.skr_per_pulse > relay.skr_per_pulse);
    }
}

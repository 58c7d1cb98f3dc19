#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mdiqkd/bsm.hpp"
#include "mdiqkd/fock.hpp"
#include "mdiqkd/mc.hpp"
#include "mdiqkd/params.hpp"
#include "mdiqkd/sps.hpp"
#include "mdiqkd/wcp.hpp"

namespace py = pybind11;
using namespace mdiqkd;

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "Secret key rates for measurement-device-independent QKD with heralded "
        "quantum memories: analytic formulas, a Fock-space linear-optics oracle, "
        "and a seeded Monte Carlo simulation.";

    // ---- shared parameter records ----
    py::class_<DeviceParams>(m, "DeviceParams")
        .def(py::init([](double eta_d, double p_d, double eta_m, double nu_s) {
                 DeviceParams d{eta_d, p_d, eta_m, nu_s};
                 d.validate();
                 return d;
             }),
             py::arg("eta_d") = 1.0, py::arg("p_d") = 0.0, py::arg("eta_m") = 1.0,
             py::arg("nu_s") = 1.0)
        .def_readwrite("eta_d", &DeviceParams::eta_d)
        .def_readwrite("p_d", &DeviceParams::p_d)
        .def_readwrite("eta_m", &DeviceParams::eta_m)
        .def_readwrite("nu_s", &DeviceParams::nu_s)
        .def("eta_md", &DeviceParams::eta_md)
        .def("dt", &DeviceParams::dt);

    py::class_<LinkConfig>(m, "LinkConfig")
        .def(py::init([](double distance_km, double alpha_db_per_km) {
                 LinkConfig l{distance_km, alpha_db_per_km};
                 l.validate();
                 return l;
             }),
             py::arg("distance_km") = 0.0, py::arg("alpha_db_per_km") = 0.17)
        .def_readwrite("distance_km", &LinkConfig::distance_km)
        .def_readwrite("alpha_db_per_km", &LinkConfig::alpha_db_per_km)
        .def("transmittance", &LinkConfig::transmittance);

    py::enum_<DecoherenceModel>(m, "DecoherenceModel")
        .value("Cutoff", DecoherenceModel::Cutoff)
        .value("Depolarizing", DecoherenceModel::Depolarizing);

    py::class_<MemoryModel>(m, "MemoryModel")
        .def(py::init([](double tau, DecoherenceModel model) {
                 MemoryModel mm{tau, model};
                 mm.validate();
                 return mm;
             }),
             py::arg("tau") = kInfiniteTau, py::arg("model") = DecoherenceModel::Cutoff)
        .def_readwrite("tau", &MemoryModel::tau)
        .def_readwrite("model", &MemoryModel::model)
        .def("infinite", &MemoryModel::infinite);

    m.def("binary_entropy", &binary_entropy, py::arg("p"));

    // ---- Bell-state measurement closed forms ----
    py::class_<BsmPoint>(m, "BsmPoint")
        .def(py::init<double, double>(), py::arg("eta"), py::arg("p_d") = 0.0)
        .def_readwrite("eta", &BsmPoint::eta)
        .def_readwrite("p_d", &BsmPoint::p_d);

    m.def("bsm_success_single", &bsm_success_single, py::arg("point"));
    m.def(
        "bsm_success_single",
        [](double eta, double p_d) { return bsm_success_single({eta, p_d}); },
        py::arg("eta"), py::arg("p_d") = 0.0);
    m.def("qber_floor", &qber_floor, py::arg("point"));
    m.def(
        "qber_floor", [](double eta, double p_d) { return qber_floor({eta, p_d}); },
        py::arg("eta"), py::arg("p_d"));
    m.def("bsm_success_fock", &bsm_success_fock, py::arg("n_a"), py::arg("n_b"),
          py::arg("eta_md"));

    // ---- single-photon-source rates ----
    py::class_<SpsScenario>(m, "SpsScenario")
        .def(py::init<DeviceParams, LinkConfig, MemoryModel>(), py::arg("device"),
             py::arg("link"), py::arg("memory"))
        .def_readwrite("device", &SpsScenario::device)
        .def_readwrite("link", &SpsScenario::link)
        .def_readwrite("memory", &SpsScenario::memory)
        .def("p0", &SpsScenario::p0);

    py::class_<RateReport>(m, "RateReport")
        .def_readonly("avg_attempts", &RateReport::avg_attempts)
        .def_readonly("avg_time_s", &RateReport::avg_time_s)
        .def_readonly("qber_x", &RateReport::qber_x)
        .def_readonly("qber_z", &RateReport::qber_z)
        .def_readonly("skr_per_pulse", &RateReport::skr_per_pulse)
        .def_readonly("skr_per_pulse_signed", &RateReport::skr_per_pulse_signed)
        .def_readonly("skr_per_second", &RateReport::skr_per_second)
        .def_readonly("feasible", &RateReport::feasible);

    py::class_<SeriesEval>(m, "SeriesEval")
        .def_readonly("value", &SeriesEval::value)
        .def_readonly("tail_bound", &SeriesEval::tail_bound)
        .def_readonly("converged", &SeriesEval::converged);

    m.def("joint_storage_prob", &joint_storage_prob, py::arg("k_a"), py::arg("k_b"),
          py::arg("p0"));
    m.def("avg_attempts_closed", &avg_attempts_closed, py::arg("p0"), py::arg("p_bsm"));
    m.def("avg_attempts_series", &avg_attempts_series, py::arg("p0"), py::arg("p_bsm"),
          py::arg("truncation"));
    m.def("qber_cutoff_closed", &qber_cutoff_closed, py::arg("e_inf"), py::arg("p0"),
          py::arg("tau"));
    m.def("qber_cutoff_series", &qber_cutoff_series, py::arg("e_inf"), py::arg("p0"),
          py::arg("tau"), py::arg("truncation"));
    m.def("tau_min_sps", &tau_min_sps, py::arg("e_inf"), py::arg("p0"),
          py::arg("e_max") = 0.11);
    m.def("repeater_rate_sps", &repeater_rate_sps, py::arg("scenario"));
    m.def("relay_rate_sps", &relay_rate_sps, py::arg("device"), py::arg("link"));

    // ---- weak-coherent-pulse rates ----
    py::class_<WcpScenario>(m, "WcpScenario")
        .def(py::init<DeviceParams, LinkConfig, MemoryModel, double>(),
             py::arg("device"), py::arg("link"), py::arg("memory"), py::arg("mu"))
        .def_readwrite("device", &WcpScenario::device)
        .def_readwrite("link", &WcpScenario::link)
        .def_readwrite("memory", &WcpScenario::memory)
        .def_readwrite("mu", &WcpScenario::mu);

    py::class_<IntensitySearchSpec>(m, "IntensitySearchSpec")
        .def(py::init([](double mu_lo, double mu_hi, int grid_points, double rel_tol) {
                 return IntensitySearchSpec{mu_lo, mu_hi, grid_points, rel_tol};
             }),
             py::arg("mu_lo") = 1e-3, py::arg("mu_hi") = 10.0,
             py::arg("grid_points") = 64, py::arg("rel_tol") = 1e-9)
        .def_readwrite("mu_lo", &IntensitySearchSpec::mu_lo)
        .def_readwrite("mu_hi", &IntensitySearchSpec::mu_hi)
        .def_readwrite("grid_points", &IntensitySearchSpec::grid_points)
        .def_readwrite("rel_tol", &IntensitySearchSpec::rel_tol);

    py::class_<WcpQber>(m, "WcpQber")
        .def_readonly("x11", &WcpQber::x11)
        .def_readonly("z", &WcpQber::z);

    py::class_<WcpRateReport>(m, "WcpRateReport")
        .def_readonly("mu", &WcpRateReport::mu)
        .def_readonly("p0", &WcpRateReport::p0)
        .def_readonly("f11", &WcpRateReport::f11)
        .def_readonly("qber_x11", &WcpRateReport::qber_x11)
        .def_readonly("qber_z", &WcpRateReport::qber_z)
        .def_readonly("p_bsm", &WcpRateReport::p_bsm)
        .def_readonly("avg_attempts", &WcpRateReport::avg_attempts)
        .def_readonly("skr_per_pulse", &WcpRateReport::skr_per_pulse)
        .def_readonly("skr_per_pulse_signed", &WcpRateReport::skr_per_pulse_signed)
        .def_readonly("skr_per_second", &WcpRateReport::skr_per_second)
        .def_readonly("feasible", &WcpRateReport::feasible)
        .def_readonly("hit_boundary", &WcpRateReport::hit_boundary);

    m.def("storage_prob_wcp", &storage_prob_wcp, py::arg("mu"), py::arg("eta_t"));
    m.def("stored_photon_dist", &stored_photon_dist, py::arg("n"), py::arg("mu"),
          py::arg("eta_t"));
    m.def("stored_photon_dist_series", &stored_photon_dist_series, py::arg("n"),
          py::arg("mu"), py::arg("eta_t"), py::arg("extra_terms") = 60);
    m.def("p_bsm_wcp", &p_bsm_wcp, py::arg("mu"), py::arg("eta_t"), py::arg("eta_md"));
    m.def("p_bsm_wcp_series", &p_bsm_wcp_series, py::arg("mu"), py::arg("eta_t"),
          py::arg("eta_md"), py::arg("n_max") = 80);
    m.def("f11", &f11, py::arg("mu"), py::arg("eta_t"), py::arg("eta_md"));
    m.def("f11_series", &f11_series, py::arg("mu"), py::arg("eta_t"),
          py::arg("eta_md"), py::arg("n_max") = 80);
    m.def("qber_wcp", &qber_wcp, py::arg("scenario"));
    m.def("wcp_rate_at_mu", &wcp_rate_at_mu, py::arg("scenario"));
    m.def("optimize_mu", &optimize_mu, py::arg("device"), py::arg("link"),
          py::arg("memory"), py::arg("search") = IntensitySearchSpec{});
    m.def("tau_min_wcp", &tau_min_wcp, py::arg("device"), py::arg("link"),
          py::arg("search") = IntensitySearchSpec{});

    // ---- Fock-space oracle ----
    py::enum_<InputCombo>(m, "InputCombo")
        .value("HH", InputCombo::HH)
        .value("VV", InputCombo::VV)
        .value("HV", InputCombo::HV)
        .value("VH", InputCombo::VH);

    m.def("split_binomial", &split_binomial, py::arg("n"));
    m.def("threshold_click_prob", &threshold_click_prob, py::arg("n"), py::arg("eta"),
          py::arg("p_d") = 0.0);
    m.def("click_pattern_distribution", &click_pattern_distribution, py::arg("n_a"),
          py::arg("n_b"), py::arg("eta"), py::arg("p_d"), py::arg("combo"));
    m.def("bsm_success_oracle", &bsm_success_oracle, py::arg("n_a"), py::arg("n_b"),
          py::arg("eta_md"), py::arg("p_d") = 0.0, py::arg("photon_cap") = 12);
    m.def("cross_term_vanishes", &cross_term_vanishes, py::arg("n_a"), py::arg("n_b"));
    m.def("cross_term_weight", &cross_term_weight, py::arg("n_a"), py::arg("n_b"),
          py::arg("eta"));

    // ---- Monte Carlo ----
    py::class_<McConfig>(m, "McConfig")
        .def(py::init([](double p0, double p_bsm, double e_inf, MemoryModel memory,
                         std::uint64_t rounds, std::uint64_t seed, int shards) {
                 McConfig c{p0, p_bsm, e_inf, memory, rounds, seed, shards};
                 c.validate();
                 return c;
             }),
             py::arg("p0"), py::arg("p_bsm"), py::arg("e_inf") = 0.0,
             py::arg("memory") = MemoryModel{}, py::arg("rounds") = 1000000,
             py::arg("seed") = 0, py::arg("shards") = 1)
        .def_readwrite("p0", &McConfig::p0)
        .def_readwrite("p_bsm", &McConfig::p_bsm)
        .def_readwrite("e_inf", &McConfig::e_inf)
        .def_readwrite("memory", &McConfig::memory)
        .def_readwrite("rounds", &McConfig::rounds)
        .def_readwrite("seed", &McConfig::seed)
        .def_readwrite("shards", &McConfig::shards);

    py::class_<McEstimate>(m, "McEstimate")
        .def_readonly("mean", &McEstimate::mean)
        .def_readonly("std_error", &McEstimate::std_error)
        .def_readonly("n_samples", &McEstimate::n_samples);

    m.def(
        "simulate_round",
        [](const McConfig& config, std::uint64_t round_index) {
            McRng rng = McRng::for_round(config.seed, round_index);
            const RoundResult r = simulate_round(config, rng);
            return py::make_tuple(r.attempts, r.bit_error);
        },
        py::arg("config"), py::arg("round_index"),
        "Runs one protocol round on its derived substream; returns "
        "(attempts, bit_error).");
    m.def("estimate_avg_attempts", &estimate_avg_attempts, py::arg("config"));
    m.def("estimate_qber", &estimate_qber, py::arg("config"));
    m.def("depolarizing_qber_reference", &depolarizing_qber_reference,
          py::arg("e_inf"), py::arg("p0"), py::arg("tau"));

    m.attr("INFINITE_TAU") = kInfiniteTau;
#ifdef VERSION_INFO
#define STR2(x) #x
#define STR(x) STR2(x)
    m.attr("__version__") = STR(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}

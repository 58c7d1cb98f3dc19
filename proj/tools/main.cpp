// Command-line front end: single-point rate evaluation, figure-style CSV
// sweeps, minimal coherence times, and the oracle / series / Monte Carlo
// verification suites.
//
// Exit codes: 0 ok, 1 invalid input, 2 infeasible (zero rate),
// 3 verification failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "mdiqkd/bsm.hpp"
#include "mdiqkd/fock.hpp"
#include "mdiqkd/mc.hpp"
#include "mdiqkd/params.hpp"
#include "mdiqkd/sps.hpp"
#include "mdiqkd/wcp.hpp"

namespace {

using namespace mdiqkd;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitVerifyFailed = 3;

// All numbers are serialized with 9 significant digits.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

double parse_tau(const std::string& text) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw CLI::ValidationError("--tau", "expected a number or 'inf'");
    }
    if (pos != text.size())
        throw CLI::ValidationError("--tau", "expected a number or 'inf'");
    if (std::isnan(v) || v < 0.0)
        throw CLI::ValidationError("--tau", "must be non-negative");
    return v;
}

struct CommonFlags {
    double eta_d = 0.2;
    double eta_m = 0.6;
    double p_d = 0.0;
    double nu_s = 1.0;
    double distance_km = 0.0;
    double alpha = 0.17;
    std::string tau_text = "inf";

    void add_device(CLI::App* cmd) {
        cmd->add_option("--eta-d", eta_d, "Detector efficiency");
        cmd->add_option("--eta-m", eta_m, "Memory retrieval efficiency");
        cmd->add_option("--p-d", p_d, "Dark count probability per detector per gate");
        cmd->add_option("--nu-s", nu_s, "Source repetition frequency in Hz");
    }
    void add_link(CLI::App* cmd) {
        cmd->add_option("--L", distance_km, "Total Alice-Bob distance in km");
        cmd->add_option("--alpha", alpha, "Fiber attenuation in dB/km");
    }
    void add_tau(CLI::App* cmd) {
        cmd->add_option("--tau", tau_text,
                        "Memory coherence time in time-bin units ('inf' accepted)");
    }

    DeviceParams device() const { return DeviceParams{eta_d, p_d, eta_m, nu_s}; }
    LinkConfig link() const { return LinkConfig{distance_km, alpha}; }
    MemoryModel memory() const {
        return MemoryModel{parse_tau(tau_text), DecoherenceModel::Cutoff};
    }
};

struct MuFlags {
    std::optional<double> mu;
    IntensitySearchSpec search;

    void add(CLI::App* cmd) {
        cmd->add_option("--mu", mu, "Fixed intensity (skips optimization)");
        cmd->add_option("--mu-lo", search.mu_lo, "Lower intensity search bound");
        cmd->add_option("--mu-hi", search.mu_hi, "Upper intensity search bound");
        cmd->add_option("--mu-grid", search.grid_points, "Coarse search grid size");
        cmd->add_option("--mu-tol", search.rel_tol, "Relative refinement tolerance");
    }
};

void print_kv(const char* key, double value) {
    std::printf("%s=%s\n", key, fmt(value).c_str());
}

// ---------------------------------------------------------------- rate ----

int run_rate(const std::string& source, const CommonFlags& flags, const MuFlags& mu,
             bool csv) {
    double skr = 0.0;
    if (source == "sps") {
        const SpsScenario scenario{flags.device(), flags.link(), flags.memory()};
        const RateReport r = repeater_rate_sps(scenario);
        print_kv("p0", scenario.p0());
        print_kv("avg_attempts", r.avg_attempts);
        print_kv("avg_time_s", r.avg_time_s);
        print_kv("qber_x", r.qber_x);
        print_kv("qber_z", r.qber_z);
        print_kv("skr_per_pulse", r.skr_per_pulse);
        print_kv("skr_per_second", r.skr_per_second);
        if (csv)
            std::printf("csv,sps,%s,%s,%s,%s\n", fmt(flags.distance_km).c_str(),
                        fmt(r.skr_per_pulse).c_str(), fmt(r.qber_x).c_str(),
                        fmt(r.qber_z).c_str());
        skr = r.skr_per_pulse;
    } else if (source == "sps-relay") {
        const RateReport r = relay_rate_sps(flags.device(), flags.link());
        print_kv("avg_attempts", r.avg_attempts);
        print_kv("avg_time_s", r.avg_time_s);
        print_kv("qber_x", r.qber_x);
        print_kv("qber_z", r.qber_z);
        print_kv("skr_per_pulse", r.skr_per_pulse);
        print_kv("skr_per_second", r.skr_per_second);
        if (csv)
            std::printf("csv,sps-relay,%s,%s,%s,%s\n", fmt(flags.distance_km).c_str(),
                        fmt(r.skr_per_pulse).c_str(), fmt(r.qber_x).c_str(),
                        fmt(r.qber_z).c_str());
        skr = r.skr_per_pulse;
    } else if (source == "wcp") {
        WcpRateReport r;
        if (mu.mu) {
            const WcpScenario scenario{flags.device(), flags.link(), flags.memory(),
                                       *mu.mu};
            r = wcp_rate_at_mu(scenario);
        } else {
            r = optimize_mu(flags.device(), flags.link(), flags.memory(), mu.search);
            if (r.hit_boundary)
                std::fprintf(stderr,
                             "warning: intensity optimum at a search boundary\n");
        }
        print_kv("mu", r.mu);
        print_kv("p0", r.p0);
        print_kv("f11", r.f11);
        print_kv("qber_x11", r.qber_x11);
        print_kv("qber_z", r.qber_z);
        print_kv("p_bsm", r.p_bsm);
        print_kv("avg_attempts", r.avg_attempts);
        print_kv("skr_per_pulse", r.skr_per_pulse);
        print_kv("skr_per_second", r.skr_per_second);
        if (csv)
            std::printf("csv,wcp,%s,%s,%s,%s\n", fmt(flags.distance_km).c_str(),
                        fmt(r.skr_per_pulse).c_str(), fmt(r.qber_x11).c_str(),
                        fmt(r.qber_z).c_str());
        skr = r.skr_per_pulse;
    } else {
        std::fprintf(stderr, "error: unknown source '%s'\n", source.c_str());
        return kExitInvalid;
    }
    return skr > 0.0 ? kExitOk : kExitInfeasible;
}

// --------------------------------------------------------------- sweep ----

std::vector<double> sweep_grid(double lo, double hi, int steps, bool log_scale) {
    std::vector<double> xs(steps);
    for (int i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) / (steps - 1);
        xs[i] = log_scale ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
    }
    return xs;
}

int run_sweep(const std::string& variable, double lo, double hi, int steps,
              const std::string& scale, const std::string& tau_units,
              const CommonFlags& flags, const MuFlags& mu) {
    if (!(lo < hi)) {
        std::fprintf(stderr, "error: sweep needs lo < hi\n");
        return kExitInvalid;
    }
    if (steps < 2) {
        std::fprintf(stderr, "error: sweep needs at least 2 steps\n");
        return kExitInvalid;
    }
    const bool log_scale = scale == "log";
    if (log_scale && !(lo > 0.0)) {
        std::fprintf(stderr, "error: log scale requires lo > 0\n");
        return kExitInvalid;
    }
    const bool wcp_enabled = flags.p_d == 0.0;

    std::printf("# schema=1\n");
    std::printf(
        "x,skr_sps_repeater,skr_sps_relay,skr_wcp_repeater,tau_min_sps,"
        "tau_min_wcp,qber_x,qber_z,mu_opt\n");

    const DeviceParams device = flags.device();
    for (const double x : sweep_grid(lo, hi, steps, log_scale)) {
        LinkConfig link = flags.link();
        double tau = parse_tau(flags.tau_text);
        double mu_fixed = mu.mu.value_or(0.0);
        if (variable == "distance_km") {
            link.distance_km = x;
        } else if (variable == "tau") {
            tau = x;
        } else {  // mu
            mu_fixed = x;
        }

        std::string tau_min_sps_cell, tau_min_wcp_cell;
        const BsmPoint bsm_point{device.eta_md(), device.p_d};
        const double e_inf = qber_floor(bsm_point);
        try {
            const double tms = tau_min_sps(e_inf, link.transmittance());
            tau_min_sps_cell = fmt(tms);
            if (variable == "tau" && tau_units == "tau-min") tau = x * tms;
        } catch (const std::domain_error&) {
            // no finite coherence time yields a key here; leave the cell empty
        }

        const MemoryModel memory{tau, DecoherenceModel::Cutoff};
        const RateReport rep = repeater_rate_sps(SpsScenario{device, link, memory});
        const RateReport rel = relay_rate_sps(device, link);

        std::string wcp_cell, mu_cell;
        if (wcp_enabled && variable == "mu") {
            const WcpRateReport w =
                wcp_rate_at_mu(WcpScenario{device, link, memory, mu_fixed});
            wcp_cell = fmt(w.skr_per_pulse);
        } else if (wcp_enabled) {
            const WcpRateReport w = optimize_mu(device, link, memory, mu.search);
            wcp_cell = fmt(w.skr_per_pulse);
            if (w.feasible) mu_cell = fmt(w.mu);
            try {
                tau_min_wcp_cell = fmt(tau_min_wcp(device, link, mu.search));
            } catch (const std::domain_error&) {
            }
        }

        std::printf("%s,%s,%s,%s,%s,%s,%s,%s,%s\n", fmt(x).c_str(),
                    fmt(rep.skr_per_pulse).c_str(), fmt(rel.skr_per_pulse).c_str(),
                    wcp_cell.c_str(), tau_min_sps_cell.c_str(),
                    tau_min_wcp_cell.c_str(), fmt(rep.qber_x).c_str(),
                    fmt(rep.qber_z).c_str(), mu_cell.c_str());
    }
    return kExitOk;
}

// ------------------------------------------------------------- tau-min ----

int run_tau_min(const CommonFlags& flags, const MuFlags& mu) {
    const DeviceParams device = flags.device();
    const LinkConfig link = flags.link();
    const double e_inf = qber_floor({device.eta_md(), device.p_d});
    int rc = kExitOk;
    try {
        print_kv("tau_min_sps", tau_min_sps(e_inf, link.transmittance()));
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "tau_min_sps: %s\n", e.what());
        rc = kExitInfeasible;
    }
    if (flags.p_d == 0.0) {
        try {
            print_kv("tau_min_wcp", tau_min_wcp(device, link, mu.search));
        } catch (const std::domain_error& e) {
            std::fprintf(stderr, "tau_min_wcp: %s\n", e.what());
            rc = kExitInfeasible;
        }
    }
    return rc;
}

// -------------------------------------------------------------- verify ----

struct VerifyPrinter {
    bool all_pass = true;

    void row(const std::string& check, double expected, double actual, double tol,
             bool pass) {
        all_pass = all_pass && pass;
        std::printf("%s,%s,%s,%s,%s\n", check.c_str(), fmt(expected).c_str(),
                    fmt(actual).c_str(), fmt(tol).c_str(), pass ? "pass" : "FAIL");
    }
};

int run_verify_oracle() {
    std::printf("# schema=1\n");
    std::printf("check,expected,actual,tolerance,status\n");
    VerifyPrinter out;
    for (int na = 1; na <= 5; ++na) {
        for (int nb = 1; nb <= 5; ++nb) {
            for (const double eta : {0.1, 0.3, 0.6, 0.9, 1.0}) {
                const double formula = bsm_success_fock(na, nb, eta);
                const double oracle = bsm_success_oracle(na, nb, eta);
                const bool pass = std::abs(oracle - formula) <= 1e-12;
                out.row("oracle_eq_formula(" + std::to_string(na) + "," +
                            std::to_string(nb) + "," + fmt(eta) + ")",
                        formula, oracle, 1e-12, pass);
            }
        }
    }
    for (const double eta : {0.1, 0.3, 0.6, 0.9, 1.0}) {
        for (const double pd : {1e-6, 1e-4, 1e-3, 1e-2, 0.05}) {
            const double formula = bsm_success_single({eta, pd});
            const double oracle = bsm_success_oracle(1, 1, eta, pd);
            const bool pass = std::abs(oracle - formula) <= 1e-12;
            out.row("oracle_dark_counts(1,1," + fmt(eta) + "," + fmt(pd) + ")",
                    formula, oracle, 1e-12, pass);
        }
    }
    return out.all_pass ? kExitOk : kExitVerifyFailed;
}

int run_verify_series() {
    std::printf("# schema=1\n");
    std::printf("check,expected,actual,tolerance,status\n");
    VerifyPrinter out;

    for (const double p0 : {0.1, 0.5, 0.9}) {
        for (const double pb : {0.0072, 0.1, 0.5}) {
            const double closed = avg_attempts_closed(p0, pb);
            const SeriesEval s = avg_attempts_series(p0, pb, 2500);
            const bool pass =
                s.converged && std::abs(s.value - closed) <= 1e-6 * closed;
            out.row("avg_attempts(" + fmt(p0) + "," + fmt(pb) + ")", closed, s.value,
                    1e-6, pass);
        }
    }
    for (const double e_inf : {0.0, 0.01, 0.1}) {
        for (const double p0 : {0.1, 0.5, 0.9}) {
            for (const double tau : {0.0, 2.0, 10.0}) {
                const double closed = qber_cutoff_closed(e_inf, p0, tau);
                const SeriesEval s = qber_cutoff_series(e_inf, p0, tau, 2500);
                const bool pass = s.converged && std::abs(s.value - closed) <= 1e-8;
                out.row("qber_cutoff(" + fmt(e_inf) + "," + fmt(p0) + "," + fmt(tau) +
                            ")",
                        closed, s.value, 1e-8, pass);
            }
        }
    }
    for (const double mu : {0.2, 1.0, 5.0}) {
        for (const double eta_t : {0.01, 0.1, 0.25}) {
            for (const int n : {0, 1, 3, 7}) {
                const double closed = stored_photon_dist(n, mu, eta_t);
                const double series = stored_photon_dist_series(n, mu, eta_t);
                const bool pass = std::abs(series - closed) <= 1e-12 * closed;
                out.row("stored_photons(" + std::to_string(n) + "," + fmt(mu) + "," +
                            fmt(eta_t) + ")",
                        closed, series, 1e-12, pass);
            }
        }
    }
    for (const double mu : {0.05, 0.5, 1.0, 2.0}) {
        for (const double eta_t : {1e-3, 1e-2, 0.1}) {
            for (const double emd : {0.12, 0.5, 1.0}) {
                const double closed = p_bsm_wcp(mu, eta_t, emd);
                const double series = p_bsm_wcp_series(mu, eta_t, emd);
                bool pass = std::abs(series - closed) <= 1e-10 * closed;
                out.row("p_bsm_wcp(" + fmt(mu) + "," + fmt(eta_t) + "," + fmt(emd) +
                            ")",
                        closed, series, 1e-10, pass);
                const double f_closed = f11(mu, eta_t, emd);
                const double f_series = f11_series(mu, eta_t, emd);
                pass = std::abs(f_series - f_closed) <= 1e-10 * f_closed;
                out.row("f11(" + fmt(mu) + "," + fmt(eta_t) + "," + fmt(emd) + ")",
                        f_closed, f_series, 1e-10, pass);
            }
        }
    }
    return out.all_pass ? kExitOk : kExitVerifyFailed;
}

int run_verify_mc(std::uint64_t seed, std::uint64_t rounds) {
    std::printf("# schema=1\n");
    std::printf("statistic,analytic_value,mc_mean,mc_stderr,n,seed,status\n");
    bool all_pass = true;
    const auto row = [&](const std::string& name, double analytic,
                         const McEstimate& est) {
        const bool pass = std::abs(est.mean - analytic) <= 3.0 * est.std_error;
        all_pass = all_pass && pass;
        std::printf("%s,%s,%s,%s,%llu,%llu,%s\n", name.c_str(), fmt(analytic).c_str(),
                    fmt(est.mean).c_str(), fmt(est.std_error).c_str(),
                    static_cast<unsigned long long>(est.n_samples),
                    static_cast<unsigned long long>(seed), pass ? "pass" : "FAIL");
    };

    for (const double p0 : {0.1, 0.5}) {
        for (const double pb : {0.05, 0.5}) {
            for (const double tau : {2.0, 10.0}) {
                for (const double e_inf : {0.0, 0.05}) {
                    const std::string cell = "(" + fmt(p0) + "," + fmt(pb) + "," +
                                             fmt(tau) + "," + fmt(e_inf) + ")";
                    McConfig c;
                    c.p0 = p0;
                    c.p_bsm = pb;
                    c.e_inf = e_inf;
                    c.rounds = rounds;
                    c.seed = seed;
                    c.memory = MemoryModel{tau, DecoherenceModel::Cutoff};
                    row("avg_attempts" + cell, avg_attempts_closed(p0, pb),
                        estimate_avg_attempts(c));
                    row("qber_cutoff" + cell, qber_cutoff_closed(e_inf, p0, tau),
                        estimate_qber(c));
                    c.memory = MemoryModel{tau, DecoherenceModel::Depolarizing};
                    row("qber_depolarizing" + cell,
                        depolarizing_qber_reference(e_inf, p0, tau), estimate_qber(c));
                }
            }
        }
    }
    return all_pass ? kExitOk : kExitVerifyFailed;
}

// -------------------------------------------------------------- oracle ----

int run_oracle_table(int n_max, std::vector<double> etas, double p_d) {
    if (etas.empty()) etas = {0.1, 0.3, 0.6, 0.9, 1.0};
    std::printf("# schema=1\n");
    std::printf("n_a,n_b,eta,p_oracle,p_formula,abs_diff\n");
    for (int na = 1; na <= n_max; ++na) {
        for (int nb = 1; nb <= n_max; ++nb) {
            for (const double eta : etas) {
                const double oracle = bsm_success_oracle(na, nb, eta, p_d);
                std::string formula_cell, diff_cell;
                if (p_d == 0.0) {
                    const double formula = bsm_success_fock(na, nb, eta);
                    formula_cell = fmt(formula);
                    diff_cell = fmt(std::abs(oracle - formula));
                } else if (na == 1 && nb == 1) {
                    const double formula = bsm_success_single({eta, p_d});
                    formula_cell = fmt(formula);
                    diff_cell = fmt(std::abs(oracle - formula));
                }
                std::printf("%d,%d,%s,%s,%s,%s\n", na, nb, fmt(eta).c_str(),
                            fmt(oracle).c_str(), formula_cell.c_str(),
                            diff_cell.c_str());
            }
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Secret key rates for measurement-device-independent QKD with heralded "
        "quantum memories: analytic formulas cross-validated against a Fock-space "
        "linear-optics oracle and a discrete-event Monte Carlo simulation."};
    app.require_subcommand(1);

    // rate
    auto* rate = app.add_subcommand("rate", "Evaluate one parameter point");
    std::string source = "sps";
    rate->add_option("--source", source, "sps | sps-relay | wcp")->required();
    CommonFlags rate_flags;
    rate_flags.add_device(rate);
    rate_flags.add_link(rate);
    rate_flags.add_tau(rate);
    MuFlags rate_mu;
    rate_mu.add(rate);
    bool rate_csv = false;
    rate->add_flag("--csv", rate_csv, "Also emit a CSV row");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "CSV sweep over one variable");
    std::string variable;
    sweep->add_option("--variable", variable, "distance_km | tau | mu")
        ->required()
        ->check(CLI::IsMember({"distance_km", "tau", "mu"}));
    double lo = 0.0, hi = 0.0;
    int steps = 2;
    std::string scale = "linear";
    std::string tau_units = "dt";
    sweep->add_option("--lo", lo, "Lower bound")->required();
    sweep->add_option("--hi", hi, "Upper bound")->required();
    sweep->add_option("--steps", steps, "Grid size")->required();
    sweep->add_option("--scale", scale, "linear | log")
        ->check(CLI::IsMember({"linear", "log"}));
    sweep->add_option("--tau-units", tau_units,
                      "For tau sweeps: dt (absolute bins) or tau-min "
                      "(multiples of the minimal coherence time)")
        ->check(CLI::IsMember({"dt", "tau-min"}));
    CommonFlags sweep_flags;
    sweep_flags.add_device(sweep);
    sweep_flags.add_link(sweep);
    sweep_flags.add_tau(sweep);
    MuFlags sweep_mu;
    sweep_mu.add(sweep);

    // tau-min
    auto* taumin = app.add_subcommand("tau-min", "Minimal coherence times");
    CommonFlags taumin_flags;
    taumin_flags.add_device(taumin);
    taumin_flags.add_link(taumin);
    MuFlags taumin_mu;
    taumin_mu.add(taumin);

    // verify
    auto* verify = app.add_subcommand("verify", "Cross-validation suites");
    std::string suite;
    verify->add_option("suite", suite, "oracle | series | mc")
        ->required()
        ->check(CLI::IsMember({"oracle", "series", "mc"}));
    std::uint64_t seed = 42;
    std::uint64_t rounds = 1000000;
    verify->add_option("--seed", seed, "Monte Carlo master seed");
    verify->add_option("--rounds", rounds, "Monte Carlo rounds per grid cell");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Oracle-vs-formula CSV table");
    int n_max = 5;
    std::vector<double> etas;
    double oracle_pd = 0.0;
    oracle->add_option("--n-max", n_max, "Largest photon number per side");
    oracle->add_option("--eta", etas, "Efficiencies (repeatable)");
    oracle->add_option("--p-d", oracle_pd, "Dark count probability");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (rate->parsed()) return run_rate(source, rate_flags, rate_mu, rate_csv);
        if (sweep->parsed())
            return run_sweep(variable, lo, hi, steps, scale, tau_units, sweep_flags,
                             sweep_mu);
        if (taumin->parsed()) return run_tau_min(taumin_flags, taumin_mu);
        if (verify->parsed()) {
            if (suite == "oracle") return run_verify_oracle();
            if (suite == "series") return run_verify_series();
            return run_verify_mc(seed, rounds);
        }
        if (oracle->parsed()) return run_oracle_table(n_max, etas, oracle_pd);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInvalid;
    }
    return kExitInvalid;
}

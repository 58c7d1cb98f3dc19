#pragma once

#include <limits>

namespace mdiqkd {

/// Binary Shannon entropy h(p) = -p log2 p - (1-p) log2 (1-p).
/// Endpoints p = 0 and p = 1 return 0 (the limit value).
/// Throws std::domain_error outside [0, 1].
double binary_entropy(double p);

constexpr double kInfiniteTau = std::numeric_limits<double>::infinity();

/// Detector / memory / source parameters shared by every rate model.
struct DeviceParams {
    double eta_d = 1.0;   // detector efficiency, in [0,1]
    double p_d = 0.0;     // dark count probability per detector per gate, in [0,1)
    double eta_m = 1.0;   // memory retrieval efficiency, in [0,1]
    double nu_s = 1.0;    // source repetition frequency in Hz, > 0

    // Combined retrieval-and-detection efficiency.
    double eta_md() const { return eta_m * eta_d; }
    // Duration of one time bin in seconds.
    double dt() const { return 1.0 / nu_s; }

    void validate() const;  // throws std::invalid_argument
};

/// Fiber link between Alice and Bob with the measurement station halfway.
struct LinkConfig {
    double distance_km = 0.0;       // total Alice-Bob distance L, >= 0
    double alpha_db_per_km = 0.17;  // fiber attenuation, > 0

    // Per-arm transmittance 10^(-alpha L / 20): survival over L/2.
    double transmittance() const;

    void validate() const;
};

enum class DecoherenceModel {
    Cutoff,        // perfect storage for tau bins, fully depolarized after
    Depolarizing,  // exponential depolarization exp(-t/tau)
};

/// Memory coherence time in units of one time bin. tau may be infinite.
struct MemoryModel {
    double tau = kInfiniteTau;
    DecoherenceModel model = DecoherenceModel::Cutoff;

    bool infinite() const { return tau == kInfiniteTau; }

    void validate() const;
};

}  // namespace mdiqkd

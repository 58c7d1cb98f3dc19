#include "mdiqkd/params.hpp"

#include <cmath>
#include <stdexcept>

namespace mdiqkd {

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("binary_entropy: p must lie in [0, 1]");
    }
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

void DeviceParams::validate() const {
    if (!(eta_d >= 0.0 && eta_d <= 1.0))
        throw std::invalid_argument("DeviceParams: eta_d must lie in [0, 1]");
    if (!(p_d >= 0.0 && p_d < 1.0))
        throw std::invalid_argument("DeviceParams: p_d must lie in [0, 1)");
    if (!(eta_m >= 0.0 && eta_m <= 1.0))
        throw std::invalid_argument("DeviceParams: eta_m must lie in [0, 1]");
    if (!(nu_s > 0.0))
        throw std::invalid_argument("DeviceParams: nu_s must be positive");
}

double LinkConfig::transmittance() const {
    return std::pow(10.0, -alpha_db_per_km * distance_km / 20.0);
}

void LinkConfig::validate() const {
    if (!(distance_km >= 0.0))
        throw std::invalid_argument("LinkConfig: distance_km must be non-negative");
    if (!(alpha_db_per_km > 0.0))
        throw std::invalid_argument("LinkConfig: alpha_db_per_km must be positive");
}

void MemoryModel::validate() const {
    if (std::isnan(tau) || tau < 0.0)
        throw std::invalid_argument("MemoryModel: tau must be non-negative (infinity allowed)");
}

}  // namespace mdiqkd

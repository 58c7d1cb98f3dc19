#include "mdiqkd/bsm.hpp"

#include <cmath>
#include <stdexcept>

namespace mdiqkd {

void BsmPoint::validate() const {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("BsmPoint: eta must lie in [0, 1]");
    if (!(p_d >= 0.0 && p_d < 1.0))
        throw std::invalid_argument("BsmPoint: p_d must lie in [0, 1)");
}

double bsm_success_single(const BsmPoint& point) {
    point.validate();
    const double eta = point.eta;
    const double pd = point.p_d;
    const double q = 1.0 - pd;
    return 0.5 * q * q *
           (eta * eta + 2.0 * (4.0 - 3.0 * eta) * eta * pd +
            8.0 * (1.0 - eta) * (1.0 - eta) * pd * pd);
}

double qber_floor(const BsmPoint& point) {
    point.validate();
    const double eta = point.eta;
    const double pd = point.p_d;
    if (eta == 0.0 && pd == 0.0)
        throw std::domain_error("qber_floor: no detection events at eta = 0, p_d = 0");
    const double num =
        2.0 * pd * (2.0 * (eta - 1.0) * (eta - 1.0) * pd - (eta - 2.0) * eta);
    const double den = eta * eta + 8.0 * (eta - 1.0) * (eta - 1.0) * pd * pd +
                       2.0 * (4.0 - 3.0 * eta) * eta * pd;
    return num / den;
}

double bsm_success_fock(int n_a, int n_b, double eta_md) {
    if (n_a < 1 || n_b < 1)
        throw std::domain_error("bsm_success_fock: photon numbers must be >= 1");
    if (!(eta_md >= 0.0 && eta_md <= 1.0))
        throw std::domain_error("bsm_success_fock: eta_md must lie in [0, 1]");
    const auto side = [eta_md](int n) {
        return std::pow(1.0 - eta_md / 2.0, n) - std::pow(1.0 - eta_md, n);
    };
    return 2.0 * side(n_a) * side(n_b);
}

}  // namespace mdiqkd

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "mdiqkd/bsm.hpp"

using namespace mdiqkd;

TEST_CASE("bsm success, single photons: pinned values") {
    CHECK(bsm_success_single({1.0, 0.0}) == 0.5);
    CHECK(bsm_success_single({0.12, 0.0}) == doctest::Approx(0.0072).epsilon(1e-15));
    // independently evaluated at high precision
    CHECK(bsm_success_single({0.12, 1e-6}) ==
          doctest::Approx(7.2004224022311942e-3).epsilon(1e-13));
}

TEST_CASE("bsm success reduces to eta^2/2 without dark counts") {
    for (int i = 0; i <= 100; ++i) {
        const double eta = i / 100.0;
        CHECK(bsm_success_single({eta, 0.0}) ==
              doctest::Approx(eta * eta / 2.0).epsilon(1e-15));
        CHECK(bsm_success_single({eta, 0.0}) ==
              doctest::Approx(bsm_success_fock(1, 1, eta)).epsilon(1e-15));
    }
}

TEST_CASE("qber floor: pinned values") {
    CHECK(qber_floor({0.12, 0.0}) == 0.0);
    CHECK(qber_floor({0.12, 1e-6}) ==
          doctest::Approx(3.1331647644341117e-5).epsilon(1e-12));
    // at eta = 1 the expression reduces to 2 p_d / (1 + 2 p_d)
    CHECK(qber_floor({1.0, 1e-6}) == doctest::Approx(1.999996000008e-6).epsilon(1e-12));
    CHECK(std::abs(qber_floor({1.0, 1e-6}) - 2.0e-6) < 1e-9);
}

TEST_CASE("qber floor: degenerate point and range") {
    CHECK_THROWS_AS(qber_floor({0.0, 0.0}), std::domain_error);
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> eta_dist(0.0, 1.0);
    std::uniform_real_distribution<double> pd_dist(0.0, 0.5);
    for (int i = 0; i < 2000; ++i) {
        const double eta = eta_dist(gen);
        const double pd = pd_dist(gen);
        if (eta == 0.0 && pd == 0.0) continue;
        const double e = qber_floor({eta, pd});
        CHECK(e >= 0.0);
        CHECK(e <= 0.5 + 1e-12);
    }
}

TEST_CASE("bsm success, fock inputs: pinned values") {
    for (double eta : {0.1, 0.12, 0.5, 0.9, 1.0}) {
        CHECK(bsm_success_fock(1, 1, eta) ==
              doctest::Approx(eta * eta / 2.0).epsilon(1e-15));
    }
    // two photons against one at eta_md = 0.12: both Bell-state patterns
    // counted, so twice the bare product of the per-arm terms
    CHECK(bsm_success_fock(2, 1, 0.12) == doctest::Approx(0.0131040).epsilon(1e-12));
    CHECK(bsm_success_fock(1, 1, 0.0) == 0.0);
}

TEST_CASE("bsm success, fock inputs: domain") {
    CHECK_THROWS_AS(bsm_success_fock(0, 1, 0.5), std::domain_error);
    CHECK_THROWS_AS(bsm_success_fock(1, 0, 0.5), std::domain_error);
    CHECK_THROWS_AS(bsm_success_fock(1, 1, 1.5), std::domain_error);
}

TEST_CASE("bsm success, fock inputs: shape in eta and factorization") {
    // single photons: strictly increasing in the efficiency
    double prev = 0.0;
    for (int i = 1; i <= 40; ++i) {
        const double eta = i / 40.0;
        const double v = bsm_success_fock(1, 1, eta);
        CHECK(v > prev);
        prev = v;
    }
    // multiphoton arms peak at an interior efficiency: beyond it both
    // photons of a pair register and split, spoiling the one-click herald
    CHECK(bsm_success_fock(2, 2, 2.0 / 3.0) > bsm_success_fock(2, 2, 1.0));
    for (int na = 1; na <= 4; ++na) {
        for (int nb = 1; nb <= 4; ++nb) {
            for (int i = 0; i <= 40; ++i) {
                const double v = bsm_success_fock(na, nb, i / 40.0);
                CHECK(v >= 0.0);
                CHECK(v <= 0.5 + 1e-12);
            }
        }
    }
    // P(na, nb) P(ma, mb) = P(na, mb) P(ma, nb)
    std::mt19937 gen(5);
    std::uniform_real_distribution<double> eta_dist(0.01, 1.0);
    std::uniform_int_distribution<int> n_dist(1, 6);
    for (int i = 0; i < 500; ++i) {
        const double eta = eta_dist(gen);
        const int na = n_dist(gen), nb = n_dist(gen);
        const int ma = n_dist(gen), mb = n_dist(gen);
        const double lhs = bsm_success_fock(na, nb, eta) * bsm_success_fock(ma, mb, eta);
        const double rhs = bsm_success_fock(na, mb, eta) * bsm_success_fock(ma, nb, eta);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mdiqkd/mc.hpp"
#include "mdiqkd/sps.hpp"

using namespace mdiqkd;

namespace {

McConfig cutoff_config(double p0, double p_bsm, double e_inf, double tau,
                       std::uint64_t rounds, std::uint64_t seed = 42) {
    McConfig c;
    c.p0 = p0;
    c.p_bsm = p_bsm;
    c.e_inf = e_inf;
    c.memory = MemoryModel{tau, DecoherenceModel::Cutoff};
    c.rounds = rounds;
    c.seed = seed;
    return c;
}

double zscore(const McEstimate& est, double expected) {
    return (est.mean - expected) / est.std_error;
}

}  // namespace

TEST_CASE("deterministic round: everything succeeds immediately") {
    McConfig c = cutoff_config(1.0, 1.0, 0.0, 0.0, 1);
    for (std::uint64_t r = 0; r < 50; ++r) {
        McRng rng = McRng::for_round(c.seed, r);
        const RoundResult res = simulate_round(c, rng);
        CHECK(res.attempts == 1);
        CHECK_FALSE(res.bit_error);
    }
}

TEST_CASE("attempt count matches the closed form within three sigma") {
    McConfig c = cutoff_config(0.5, 0.5, 0.0, 2.0, 200000);
    const McEstimate est = estimate_avg_attempts(c);
    CHECK(std::abs(zscore(est, avg_attempts_closed(0.5, 0.5))) < 3.0);

    McConfig c2 = cutoff_config(0.1, 0.05, 0.0, 2.0, 100000);
    const McEstimate est2 = estimate_avg_attempts(c2);
    CHECK(std::abs(zscore(est2, avg_attempts_closed(0.1, 0.05))) < 3.0);
}

TEST_CASE("cutoff error frequency matches the closed form within three sigma") {
    McConfig c = cutoff_config(0.5, 0.5, 0.0, 2.0, 1000000);
    const McEstimate est = estimate_qber(c);
    CHECK(std::abs(zscore(est, qber_cutoff_closed(0.0, 0.5, 2.0))) < 3.0);

    McConfig c2 = cutoff_config(0.3, 0.2, 0.05, 4.0, 400000);
    const McEstimate est2 = estimate_qber(c2);
    CHECK(std::abs(zscore(est2, qber_cutoff_closed(0.05, 0.3, 4.0))) < 3.0);
}

TEST_CASE("infinite coherence time leaves only the floor error") {
    for (const DecoherenceModel model :
         {DecoherenceModel::Cutoff, DecoherenceModel::Depolarizing}) {
        McConfig c = cutoff_config(0.4, 0.3, 0.03, 0.0, 300000);
        c.memory = MemoryModel{kInfiniteTau, model};
        const McEstimate est = estimate_qber(c);
        CHECK(std::abs(zscore(est, 0.03)) < 3.0);
    }
}

TEST_CASE("depolarizing error frequency matches the direct summation") {
    // reference values evaluated independently at high precision
    CHECK(depolarizing_qber_reference(0.0, 0.3, 5.0) ==
          doctest::Approx(0.17484725611550907).epsilon(1e-9));
    CHECK(depolarizing_qber_reference(0.05, 0.5, 2.0) ==
          doctest::Approx(0.21942002048192484).epsilon(1e-9));
    CHECK(depolarizing_qber_reference(0.0, 0.1, 10.0) ==
          doctest::Approx(0.24281123156364143).epsilon(1e-9));
    CHECK(depolarizing_qber_reference(0.07, 0.5, kInfiniteTau) == 0.07);

    McConfig c = cutoff_config(0.3, 0.2, 0.0, 0.0, 400000);
    c.memory = MemoryModel{5.0, DecoherenceModel::Depolarizing};
    const McEstimate est = estimate_qber(c);
    CHECK(std::abs(zscore(est, depolarizing_qber_reference(0.0, 0.3, 5.0))) < 3.0);

    McConfig c2 = cutoff_config(0.5, 0.5, 0.05, 0.0, 400000);
    c2.memory = MemoryModel{2.0, DecoherenceModel::Depolarizing};
    const McEstimate est2 = estimate_qber(c2);
    CHECK(std::abs(zscore(est2, depolarizing_qber_reference(0.05, 0.5, 2.0))) < 3.0);
}

TEST_CASE("identical seeds reproduce bit-identical estimates") {
    McConfig c = cutoff_config(0.3, 0.3, 0.02, 3.0, 50000, 1234);
    const McEstimate a = estimate_avg_attempts(c);
    const McEstimate b = estimate_avg_attempts(c);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    const McEstimate qa = estimate_qber(c);
    const McEstimate qb = estimate_qber(c);
    CHECK(qa.mean == qb.mean);
}

TEST_CASE("disjoint seeds agree statistically") {
    McConfig c1 = cutoff_config(0.4, 0.4, 0.01, 2.0, 200000, 7);
    McConfig c2 = cutoff_config(0.4, 0.4, 0.01, 2.0, 200000, 901);
    const McEstimate a = estimate_avg_attempts(c1);
    const McEstimate b = estimate_avg_attempts(c2);
    const double combined = std::hypot(a.std_error, b.std_error);
    CHECK(std::abs(a.mean - b.mean) < 6.0 * combined);
    CHECK(a.mean != b.mean);  // different streams
}

TEST_CASE("aggregates are independent of the shard count") {
    for (int shards : {1, 2, 7, 32}) {
        McConfig c = cutoff_config(0.3, 0.2, 0.05, 4.0, 30000, 99);
        c.shards = shards;
        const McEstimate est = estimate_avg_attempts(c);
        const McEstimate q = estimate_qber(c);
        McConfig base = c;
        base.shards = 1;
        CHECK(est.mean == estimate_avg_attempts(base).mean);
        CHECK(est.std_error == estimate_avg_attempts(base).std_error);
        CHECK(q.mean == estimate_qber(base).mean);
    }
}

TEST_CASE("second moment is finite and stable across seeds") {
    // sanity check on the attempt-count spread: the sample standard
    // deviation should agree across independent streams to ~10%
    McConfig c1 = cutoff_config(0.5, 0.5, 0.0, 2.0, 200000, 5);
    McConfig c2 = cutoff_config(0.5, 0.5, 0.0, 2.0, 200000, 6);
    const double sd1 = estimate_avg_attempts(c1).std_error * std::sqrt(200000.0);
    const double sd2 = estimate_avg_attempts(c2).std_error * std::sqrt(200000.0);
    CHECK(std::abs(sd1 - sd2) / sd1 < 0.1);
}

TEST_CASE("config validation") {
    McConfig c = cutoff_config(0.0, 0.5, 0.0, 1.0, 10);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = cutoff_config(0.5, 0.5, 0.7, 1.0, 10);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = cutoff_config(0.5, 0.5, 0.1, 1.0, 10);
    c.shards = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

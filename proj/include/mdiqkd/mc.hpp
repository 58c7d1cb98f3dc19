#pragma once

#include <cstdint>

#include "mdiqkd/params.hpp"

namespace mdiqkd {

/// Deterministic per-round random stream: xoshiro256++ state derived from
/// (master seed, round index) through SplitMix64, so every round has its
/// own substream and aggregates are independent of how rounds are sharded.
/// Bit-reproducible for a fixed seed and library version.
class McRng {
  public:
    static McRng for_round(std::uint64_t seed, std::uint64_t round_index);

    std::uint64_t next_u64();
    // Uniform double in [0, 1), 53 random bits.
    double uniform();
    bool bernoulli(double p) { return uniform() < p; }
    // Geometric on {1, 2, ...} with success probability p in (0, 1].
    std::uint64_t geometric(double p);

  private:
    std::uint64_t s_[4];
};

/// One Monte Carlo experiment: protocol rounds are repeated until a BSM
/// succeeds, with the stated storage and success probabilities.
struct McConfig {
    double p0 = 0.5;     // storage probability per attempt, (0, 1]
    double p_bsm = 0.5;  // BSM success probability per loaded round, (0, 1]
    double e_inf = 0.0;  // decoherence-free QBER, [0, 1/2]
    MemoryModel memory;
    std::uint64_t rounds = 1000000;  // successful raw bits to generate
    std::uint64_t seed = 0;
    int shards = 1;  // round-range partitions; does not change any result

    void validate() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
};

struct RoundResult {
    std::uint64_t attempts = 0;
    bool bit_error = false;
};

/// One protocol round: reload both memories (geometric waiting, memories
/// flushed after every failed BSM) until the BSM succeeds, then draw the
/// raw-bit error from the decoherence model applied to the loading-bin gap.
RoundResult simulate_round(const McConfig& config, McRng& rng);

/// Sample mean and standard error of the attempts per raw bit.
McEstimate estimate_avg_attempts(const McConfig& config);

/// Error frequency over successful rounds, with binomial standard error.
McEstimate estimate_qber(const McConfig& config);

/// Independent reference for the depolarizing model: direct truncated
/// summation of e_inf + (1/2 - e_inf) E[1 - exp(-|k_a - k_b| / tau)] over
/// the joint geometric loading distribution. Tail below 1e-10.
double depolarizing_qber_reference(double e_inf, double p0, double tau);

}  // namespace mdiqkd

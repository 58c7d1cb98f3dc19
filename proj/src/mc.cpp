#include "mdiqkd/mc.hpp"

#include <cmath>
#include <stdexcept>

namespace mdiqkd {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

double decohered_fraction(const MemoryModel& memory, std::uint64_t gap) {
    if (gap == 0 || memory.infinite()) return 0.0;
    if (memory.model == DecoherenceModel::Cutoff) {
        return static_cast<double>(gap) <= memory.tau ? 0.0 : 1.0;
    }
    if (memory.tau == 0.0) return 1.0;
    return -std::expm1(-static_cast<double>(gap) / memory.tau);
}

}  // namespace

McRng McRng::for_round(std::uint64_t seed, std::uint64_t round_index) {
    McRng rng;
    std::uint64_t state = seed ^ (0x9E3779B97F4A7C15ULL * (round_index + 1));
    for (auto& s : rng.s_) s = splitmix64(state);
    if ((rng.s_[0] | rng.s_[1] | rng.s_[2] | rng.s_[3]) == 0) rng.s_[0] = 1;
    return rng;
}

std::uint64_t McRng::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double McRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t McRng::geometric(double p) {
    if (p >= 1.0) return 1;
    const double draws = std::floor(std::log1p(-uniform()) / std::log1p(-p));
    return 1 + static_cast<std::uint64_t>(std::min(draws, 9.0e15));
}

void McConfig::validate() const {
    if (!(p0 > 0.0 && p0 <= 1.0))
        throw std::invalid_argument("McConfig: p0 must lie in (0, 1]");
    if (!(p_bsm > 0.0 && p_bsm <= 1.0))
        throw std::invalid_argument("McConfig: p_bsm must lie in (0, 1]");
    if (!(e_inf >= 0.0 && e_inf <= 0.5))
        throw std::invalid_argument("McConfig: e_inf must lie in [0, 1/2]");
    memory.validate();
    if (rounds < 1) throw std::invalid_argument("McConfig: rounds must be >= 1");
    if (shards < 1) throw std::invalid_argument("McConfig: shards must be >= 1");
}

RoundResult simulate_round(const McConfig& config, McRng& rng) {
    RoundResult result;
    std::uint64_t gap = 0;
    for (;;) {
        const std::uint64_t k_a = rng.geometric(config.p0);
        const std::uint64_t k_b = rng.geometric(config.p0);
        result.attempts += k_a > k_b ? k_a : k_b;
        if (rng.bernoulli(config.p_bsm)) {
            gap = k_a > k_b ? k_a - k_b : k_b - k_a;
            break;
        }
        // failed swap: both memories are flushed and reloaded
    }
    const double lost = decohered_fraction(config.memory, gap);
    const double p_err = (1.0 - lost) * config.e_inf + lost * 0.5;
    result.bit_error = rng.bernoulli(p_err);
    return result;
}

namespace {

struct Tallies {
    std::uint64_t sum_attempts = 0;
    unsigned __int128 sum_attempts_sq = 0;
    std::uint64_t errors = 0;
};

// Integer tallies over [first, last); exact, so any partition of the round
// range aggregates to identical totals.
Tallies run_range(const McConfig& config, std::uint64_t first, std::uint64_t last) {
    Tallies t;
    for (std::uint64_t r = first; r < last; ++r) {
        McRng rng = McRng::for_round(config.seed, r);
        const RoundResult res = simulate_round(config, rng);
        t.sum_attempts += res.attempts;
        t.sum_attempts_sq +=
            static_cast<unsigned __int128>(res.attempts) * res.attempts;
        t.errors += res.bit_error ? 1 : 0;
    }
    return t;
}

Tallies run_sharded(const McConfig& config) {
    config.validate();
    Tallies total;
    const std::uint64_t n = config.rounds;
    const std::uint64_t shards = static_cast<std::uint64_t>(config.shards);
    for (std::uint64_t s = 0; s < shards; ++s) {
        const std::uint64_t first = n * s / shards;
        const std::uint64_t last = n * (s + 1) / shards;
        const Tallies t = run_range(config, first, last);
        total.sum_attempts += t.sum_attempts;
        total.sum_attempts_sq += t.sum_attempts_sq;
        total.errors += t.errors;
    }
    return total;
}

}  // namespace

McEstimate estimate_avg_attempts(const McConfig& config) {
    const Tallies t = run_sharded(config);
    const double n = static_cast<double>(config.rounds);
    McEstimate est;
    est.n_samples = config.rounds;
    est.mean = static_cast<double>(t.sum_attempts) / n;
    if (config.rounds > 1) {
        const double sumsq = static_cast<double>(t.sum_attempts_sq);
        const double var =
            (sumsq - static_cast<double>(t.sum_attempts) * est.mean) / (n - 1.0);
        est.std_error = std::sqrt(var > 0.0 ? var / n : 0.0);
    }
    return est;
}

McEstimate estimate_qber(const McConfig& config) {
    const Tallies t = run_sharded(config);
    const double n = static_cast<double>(config.rounds);
    McEstimate est;
    est.n_samples = config.rounds;
    est.mean = static_cast<double>(t.errors) / n;
    est.std_error = std::sqrt(est.mean * (1.0 - est.mean) / n);
    return est;
}

double depolarizing_qber_reference(double e_inf, double p0, double tau) {
    if (!(e_inf >= 0.0 && e_inf <= 0.5))
        throw std::domain_error("depolarizing_qber_reference: e_inf must lie in [0, 1/2]");
    if (!(p0 > 0.0 && p0 <= 1.0))
        throw std::domain_error("depolarizing_qber_reference: p0 must lie in (0, 1]");
    if (std::isnan(tau) || tau < 0.0)
        throw std::domain_error("depolarizing_qber_reference: tau must be non-negative");
    if (tau == kInfiniteTau) return e_inf;

    // Truncate when the remaining joint mass drops below 1e-10 of 1.
    const double q = 1.0 - p0;
    int truncation = 1;
    if (q > 0.0) {
        truncation = static_cast<int>(std::ceil(std::log(1e-11) / std::log(q))) + 2;
        if (truncation < 8) truncation = 8;
    }
    double expect = 0.0;  // E[1 - exp(-gap / tau)]
    double wa = p0;       // p0 (1-p0)^(k_a - 1)
    for (int ka = 1; ka <= truncation; ++ka) {
        double wb = p0;
        for (int kb = 1; kb <= truncation; ++kb) {
            const int gap = ka > kb ? ka - kb : kb - ka;
            double lost = 0.0;
            if (gap > 0) lost = tau == 0.0 ? 1.0 : -std::expm1(-gap / tau);
            expect += wa * wb * lost;
            wb *= q;
        }
        wa *= q;
    }
    return e_inf + (0.5 - e_inf) * expect;
}

}  // namespace mdiqkd

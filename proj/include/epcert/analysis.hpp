#ifndef EPCERT_ANALYSIS_HPP
#define EPCERT_ANALYSIS_HPP

#include <cstdint>

#include "epcert/sim.hpp"

namespace epcert::analysis {

struct SecurityParams {
    std::uint64_t population = 0;  // N
    std::uint64_t committee = 0;   // k
    std::uint64_t threshold = 0;   // k_bar
    std::uint64_t corrupted = 0;   // m

    double alpha() const { return static_cast<double>(threshold) / static_cast<double>(committee); }
    void validate() const;  // throws std::invalid_argument on violated invariants
};

struct TimingParams {
    sim::Time block_interval = 10;     // b
    sim::Time propagation_delay = 1;   // p
    sim::Time request_wait = 5;        // b_bar, measured or assumed, < b
    sim::Time endpoint_delay = 2;      // e
    sim::Time per_message_time = 1;    // W
    std::uint64_t verifier_count = 1;  // v

    void validate() const;
};

// Exact hypergeometric upper tail: probability that a committee of k drawn
// without replacement from N subjects (m corrupted) contains at least
// k_bar corrupted members. Integer arithmetic throughout, converted to
// double only at the end.
double p_exact(const SecurityParams& params);

// Probability that the adversary can block certification: corrupted
// committee members leave fewer than k_bar honest ones.
double p_dos(const SecurityParams& params);

struct MonteCarloEstimate {
    double estimate = 0;
    double standard_error = 0;
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
};

// Seeded committee sampling without replacement; validation oracle for
// p_exact and for full protocol attack runs.
MonteCarloEstimate p_montecarlo(const SecurityParams& params, std::uint64_t trials,
                                std::uint64_t seed);

// Ceiling with the 0 -> 0 convention used by the latency formulas.
sim::Time ceil_blocks(sim::Time duration, sim::Time block_interval);

sim::Time latency_p3(const TimingParams& t, std::uint64_t k);
sim::Time latency_p4(const TimingParams& t, std::uint64_t k);
sim::Time latency_basic(const TimingParams& t);

struct Comparison {
    std::uint64_t messages_basic = 0;          // v
    std::uint64_t messages_decentralized = 0;  // k
    sim::Time latency_basic = 0;
    sim::Time latency_p3 = 0;
    sim::Time latency_p4 = 0;
    std::uint64_t break_even_verifiers = 0;  // v* = k for endpoint messages
};

Comparison compare(const TimingParams& t, const SecurityParams& params, std::uint64_t verifiers);

}  // namespace epcert::analysis

#endif

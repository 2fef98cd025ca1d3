#include "epcert/analysis.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace epcert::analysis {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

void SecurityParams::validate() const {
    if (committee < 1 || threshold < 1 || threshold > committee || committee > population)
        throw std::invalid_argument("SecurityParams: need 1 <= k_bar <= k <= N");
    if (corrupted > population) throw std::invalid_argument("SecurityParams: need m <= N");
}

void TimingParams::validate() const {
    if (block_interval <= 0) throw std::invalid_argument("TimingParams: block_interval must be > 0");
    if (propagation_delay < 0 || request_wait < 0 || endpoint_delay < 0 || per_message_time < 0)
        throw std::invalid_argument("TimingParams: times must be nonnegative");
    if (request_wait >= block_interval)
        throw std::invalid_argument("TimingParams: request_wait must be < block_interval");
}

namespace {

cpp_int binomial(std::uint64_t n, std::uint64_t r) {
    if (r > n) return 0;
    if (r > n - r) r = n - r;
    cpp_int result = 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
        result *= n - r + i;
        result /= i;
    }
    return result;
}

}  // namespace

double p_exact(const SecurityParams& params) {
    params.validate();
    const auto [n, k, k_bar, m] = params;
    cpp_int numerator = 0;
    for (std::uint64_t i = k_bar; i <= k; ++i) {
        if (i > m || k - i > n - m) continue;  // out-of-range binomials are 0
        numerator += binomial(m, i) * binomial(n - m, k - i);
    }
    cpp_rational ratio(numerator, binomial(n, k));
    return ratio.convert_to<double>();
}

double p_dos(const SecurityParams& params) {
    params.validate();
    // Strict reading: certification is blocked when honest responders < k_bar,
    // i.e. corrupted committee members >= k - k_bar + 1.
    SecurityParams flipped = params;
    flipped.threshold = params.committee - params.threshold + 1;
    return p_exact(flipped);
}

MonteCarloEstimate p_montecarlo(const SecurityParams& params, std::uint64_t trials,
                                std::uint64_t seed) {
    params.validate();
    if (trials < 1) throw std::invalid_argument("p_montecarlo: trials must be >= 1");

    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> ids(params.population);
    std::iota(ids.begin(), ids.end(), 0);

    MonteCarloEstimate out;
    out.trials = trials;
    for (std::uint64_t t = 0; t < trials; ++t) {
        // Partial Fisher-Yates: the first k entries are a uniform committee
        // drawn without replacement. Ids below m are the corrupted ones.
        std::uint64_t corrupted_in_committee = 0;
        for (std::uint64_t i = 0; i < params.committee; ++i) {
            std::uniform_int_distribution<std::uint64_t> pick(i, params.population - 1);
            std::swap(ids[i], ids[pick(rng)]);
            if (ids[i] < params.corrupted) ++corrupted_in_committee;
        }
        if (corrupted_in_committee >= params.threshold) ++out.successes;
    }
    out.estimate = static_cast<double>(out.successes) / static_cast<double>(trials);
    out.standard_error =
        std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(trials));
    return out;
}

sim::Time ceil_blocks(sim::Time duration, sim::Time block_interval) {
    if (duration <= 0) return 0;
    return std::ceil(duration / block_interval);
}

sim::Time latency_p3(const TimingParams& t, std::uint64_t k) {
    t.validate();
    sim::Time span = 2 * t.propagation_delay + t.endpoint_delay +
                     static_cast<sim::Time>(k) * t.per_message_time;
    return ceil_blocks(span, t.block_interval) * t.block_interval + 2 * t.propagation_delay +
           t.request_wait;
}

sim::Time latency_p4(const TimingParams& t, std::uint64_t k) {
    t.validate();
    sim::Time span = 2 * t.propagation_delay + t.endpoint_delay +
                     static_cast<sim::Time>(k) * t.per_message_time;
    return (ceil_blocks(span, t.block_interval) + 1) * t.block_interval +
           2 * t.propagation_delay + t.request_wait;
}

sim::Time latency_basic(const TimingParams& t) {
    t.validate();
    return t.endpoint_delay + static_cast<sim::Time>(t.verifier_count) * t.per_message_time;
}

Comparison compare(const TimingParams& t, const SecurityParams& params, std::uint64_t verifiers) {
    TimingParams basic = t;
    basic.verifier_count = verifiers;
    Comparison c;
    c.messages_basic = verifiers;
    c.messages_decentralized = params.committee;
    c.latency_basic = latency_basic(basic);
    c.latency_p3 = latency_p3(t, params.committee);
    c.latency_p4 = latency_p4(t, params.committee);
    c.break_even_verifiers = params.committee;
    return c;
}

}  // namespace epcert::analysis

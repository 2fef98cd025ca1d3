#include "epcert/adversary.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace epcert::adversary {

Strategy strategy_from_name(const std::string& name) {
    if (name == "none") return Strategy::none;
    if (name == "miscertify_accept") return Strategy::miscertify_accept;
    if (name == "miscertify_disclose") return Strategy::miscertify_disclose;
    if (name == "dos_silence") return Strategy::dos_silence;
    if (name == "spoof") return Strategy::spoof;
    if (name == "eavesdrop") return Strategy::eavesdrop;
    throw std::invalid_argument("unknown adversary strategy: " + name);
}

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::none: return "none";
        case Strategy::miscertify_accept: return "miscertify_accept";
        case Strategy::miscertify_disclose: return "miscertify_disclose";
        case Strategy::dos_silence: return "dos_silence";
        case Strategy::spoof: return "spoof";
        case Strategy::eavesdrop: return "eavesdrop";
    }
    return "unknown";
}

void corrupt(registry::Registry& reg, SelectionRule rule, std::uint64_t m, std::uint64_t seed) {
    if (m > reg.population())
        throw std::invalid_argument("adversary::corrupt: m exceeds population");
    std::vector<std::uint64_t> ids(reg.population());
    std::iota(ids.begin(), ids.end(), 0);
    if (rule == SelectionRule::random) {
        std::mt19937_64 rng(seed);
        std::shuffle(ids.begin(), ids.end(), rng);
    }
    ids.resize(m);
    corrupt_exact(reg, ids);
}

void corrupt_exact(registry::Registry& reg, const std::vector<std::uint64_t>& ids) {
    for (std::uint64_t id = 0; id < reg.population(); ++id) reg.subject(id).corrupted = false;
    for (std::uint64_t id : ids) reg.subject(id).corrupted = true;
}

double attack_cost(const AdversaryConfig& config, std::uint64_t periods) {
    return config.cost_per_subject * static_cast<double>(config.corrupted_count) *
           static_cast<double>(periods);
}

protocols::RunResult execute_strategy(protocols::Simulation& sim, const AdversaryConfig& config,
                                      const protocols::Actor& target,
                                      protocols::RunOptions options) {
    using protocols::AttackMode;
    switch (config.strategy) {
        case Strategy::none:
            options.attack = AttackMode::none;
            return sim.run_p3(target, options);
        case Strategy::miscertify_accept:
            options.attack = AttackMode::miscertify_accept;
            return sim.run_p3(target, options);
        case Strategy::spoof:
            options.attack = AttackMode::spoof_p3;
            return sim.run_p3(target, options);
        case Strategy::miscertify_disclose:
            options.attack = AttackMode::miscertify_disclose;
            return sim.run_p4(target, options);
        case Strategy::eavesdrop:
            options.attack = AttackMode::eavesdrop_p4;
            return sim.run_p4(target, options);
        case Strategy::dos_silence:
            options.attack = AttackMode::dos_silence;
            // Protocol choice belongs to the honest subject; default to P3.
            return sim.run_p3(target, options);
    }
    throw std::invalid_argument("unknown strategy");
}

}  // namespace epcert::adversary

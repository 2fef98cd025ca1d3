#ifndef EPCERT_ADVERSARY_HPP
#define EPCERT_ADVERSARY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "epcert/protocols.hpp"
#include "epcert/registry.hpp"

namespace epcert::adversary {

enum class Strategy {
    none,
    miscertify_accept,
    miscertify_disclose,
    dos_silence,
    spoof,
    eavesdrop,
};

Strategy strategy_from_name(const std::string& name);  // throws on unknown
const char* strategy_name(Strategy s);

enum class SelectionRule { first, random };

struct AdversaryConfig {
    std::uint64_t corrupted_count = 0;  // m
    double cost_per_subject = 1.0;      // c, per period
    Strategy strategy = Strategy::none;
    SelectionRule selection = SelectionRule::first;
    std::uint64_t selection_seed = 0;
};

// Flags exactly m certified subjects as corrupted (Sybil bootstrap is
// compressed into this step). Throws std::invalid_argument when m > N.
void corrupt(registry::Registry& reg, SelectionRule rule, std::uint64_t m, std::uint64_t seed = 0);

// Flags exactly the given subjects, clearing all other flags.
void corrupt_exact(registry::Registry& reg, const std::vector<std::uint64_t>& ids);

double attack_cost(const AdversaryConfig& config, std::uint64_t periods);

// Runs one certification attempt under the configured strategy. The target
// actor is the association the adversary tries to (mis)certify, or the honest
// subject under dos_silence.
protocols::RunResult execute_strategy(protocols::Simulation& sim, const AdversaryConfig& config,
                                      const protocols::Actor& target,
                                      protocols::RunOptions options = {});

}  // namespace epcert::adversary

#endif

#ifndef EPCERT_SCENARIO_HPP
#define EPCERT_SCENARIO_HPP

#include <cstdint>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "epcert/adversary.hpp"
#include "epcert/analysis.hpp"
#include "epcert/protocols.hpp"

namespace epcert::scenario {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error("config field '" + field + "': " + what), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class Protocol { basic1, basic2, p3, p4 };

const char* protocol_name(Protocol p);

struct ScenarioConfig {
    Protocol protocol = Protocol::p3;
    std::uint64_t population = 10;  // N
    std::uint64_t committee = 3;    // k
    std::uint64_t threshold = 3;    // k_bar
    sim::Time block_interval = 10;
    sim::Time propagation_delay = 1;
    std::string channel_preset;  // empty when the profile is inline
    channels::ChannelProfile channel;
    adversary::AdversaryConfig adversary;
    std::uint64_t verifiers = 1;  // v, basic protocols
    std::uint64_t seed = 1;
    std::uint64_t trials = 1;
    std::uint64_t deadline_blocks = 10;
    std::uint64_t proof_wait_blocks = 3;
    std::set<std::uint64_t> offline_members;

    static ScenarioConfig parse(const std::string& json_text);  // throws ConfigError
    std::string serialize() const;
};

struct RunRow {
    std::uint64_t trial = 0;
    bool certified = false;
    bool attack_success = false;
    sim::Time latency = 0;
    std::size_t endpoint_messages = 0;
    double endpoint_cost = 0;
    std::size_t acceptances = 0;
    std::size_t disclosures = 0;
    std::size_t corrupted_slots = 0;
    std::string failure_reason;
};

struct MetricsReport {
    ScenarioConfig config;
    std::vector<RunRow> rows;

    double success_rate = 0;
    double attack_success_rate = 0;
    double success_se = 0;
    double attack_success_se = 0;
    double mean_latency = 0;  // over certified runs
    double mean_messages = 0;
    double total_endpoint_cost = 0;
    double adversary_cost = 0;  // one period

    void render(std::ostream& os) const;
};

MetricsReport run_scenario(const ScenarioConfig& config);

// Sweep specification -> CSV. Invalid grid points become warning rows.
std::string run_analysis(const std::string& sweep_json);

}  // namespace epcert::scenario

#endif

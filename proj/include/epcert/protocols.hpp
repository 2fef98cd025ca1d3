#ifndef EPCERT_PROTOCOLS_HPP
#define EPCERT_PROTOCOLS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "epcert/channels.hpp"
#include "epcert/committee.hpp"
#include "epcert/ledger.hpp"
#include "epcert/registry.hpp"
#include "epcert/sim.hpp"
#include "epcert/wire.hpp"

namespace epcert::protocols {

// Who is asking for certification: a key pair plus the endpoint named in R.
// controls_endpoint is false for an adversary claiming an endpoint it cannot
// actually send from / receive at.
struct Actor {
    crypto::KeyPair keys;
    channels::EndpointAddress endpoint;
    bool controls_endpoint = true;
};

enum class AttackMode {
    none,
    miscertify_accept,    // P3: corrupted members accept a side-channel proof
    spoof_p3,             // P3: adversary spoofs the from-address of P
    dos_silence,          // corrupted committee members never respond
    miscertify_disclose,  // P4: corrupted members leak Q_i and disclose on cue
    eavesdrop_p4,         // P4: adversary reads challenges sent to E
};

struct SimParams {
    sim::Time block_interval = 10;    // b
    sim::Time propagation_delay = 1;  // p
    channels::ChannelProfile channel;
    std::uint64_t committee_size = 3;  // k
    std::uint64_t threshold = 3;       // k_bar
    std::uint64_t seed = 1;
};

struct RunOptions {
    sim::Time submit_offset = 0;  // request submission delay from current sim time
    std::uint64_t deadline_blocks = 10;
    std::uint64_t proof_wait_blocks = 3;  // P4: accept >= k_bar after this many blocks
    AttackMode attack = AttackMode::none;
    std::set<std::uint64_t> offline_members;
    std::set<std::uint64_t> early_disclosers;  // P4 misbehavior: disclose before P
    bool summarize = true;
};

struct RunResult {
    bool certified = false;
    std::string failure_reason;
    sim::Time latency = 0;       // request broadcast to certification known to all
    sim::Time request_wait = 0;  // measured b_bar
    std::uint64_t request_tx = 0;
    std::size_t endpoint_messages = 0;
    double endpoint_cost = 0;
    std::size_t acceptance_count = 0;
    std::size_t disclosure_count = 0;
    std::vector<std::uint64_t> committee_members;
    std::size_t committee_duplicates = 0;
    std::size_t corrupted_slots = 0;
    bool attack_success = false;
    std::optional<registry::Certificate> certificate;
};

struct BasicOptions {
    std::uint64_t verifiers = 1;  // v
    bool subject_online = true;
    bool adversary_spoof = false;  // P2 only: adversary answers from a spoofed E
};

struct BasicResult {
    std::size_t successes = 0;
    std::size_t false_successes = 0;  // accepted although spoofed
    sim::Time latency = 0;            // last successful verification
    std::size_t endpoint_messages = 0;
    double endpoint_cost = 0;
    std::string failure_reason;
};

// Deterministic single-driver world: ledger, channel, registry and the
// certified subject actors, advanced by one event queue.
class Simulation {
public:
    explicit Simulation(SimParams params);

    // Certifies the initial population of n subjects (genesis summarizations
    // in block 1) and advances past their commit.
    void bootstrap(std::uint64_t n);

    Actor make_actor(const std::string& tag,
                     channels::EndpointKind kind = channels::EndpointKind::email);

    RunResult run_p3(const Actor& subject, const RunOptions& options);
    RunResult run_p4(const Actor& subject, const RunOptions& options);

    BasicResult run_basic_p1(const Actor& subject, const BasicOptions& options);
    BasicResult run_basic_p2(const Actor& subject, const BasicOptions& options);

    const SimParams& params() const { return params_; }
    ledger::Ledger& chain() { return ledger_; }
    channels::Channel& channel() { return channel_; }
    registry::Registry& subjects() { return registry_; }
    const Actor& subject_actor(std::uint64_t id) const { return actors_.at(id); }
    std::mt19937_64& rng() { return rng_; }
    sim::Time now() const { return ledger_.current_time(); }

    Bytes random_challenge();  // fresh Q_i, never repeats within a simulation

private:
    struct RunState;

    RunResult run_decentralized(const Actor& subject, const RunOptions& options,
                                std::uint8_t protocol);
    void drive(const std::shared_ptr<RunState>& st);
    void observe_block_p3(const std::shared_ptr<RunState>& st, std::uint64_t height, sim::Time t);
    void observe_block_p4(const std::shared_ptr<RunState>& st, std::uint64_t height, sim::Time t);
    void start_p3_sends(const std::shared_ptr<RunState>& st, sim::Time t);
    void start_p4_challenges(const std::shared_ptr<RunState>& st, sim::Time t);
    void publish_p4_proof(const std::shared_ptr<RunState>& st, sim::Time t);
    void check_certification(const std::shared_ptr<RunState>& st, std::uint64_t height,
                             sim::Time t);
    void finish(const std::shared_ptr<RunState>& st, sim::Time t);

    SimParams params_;
    ledger::Ledger ledger_;
    channels::Channel channel_;
    registry::Registry registry_;
    std::vector<Actor> actors_;  // indexed by subject id
    sim::EventQueue events_;
    std::mt19937_64 rng_;
    std::uint64_t challenge_counter_ = 0;
};

}  // namespace epcert::protocols

#endif

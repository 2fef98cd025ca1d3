#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>
#include <string>

#include "epcert/analysis.hpp"
#include "epcert/protocols.hpp"

using namespace epcert;
using namespace epcert::protocols;

namespace {

channels::ChannelProfile ideal() { return channels::preset("ideal"); }

SimParams make_params(std::uint64_t k, std::uint64_t k_bar, std::uint64_t seed = 1) {
    SimParams p;
    p.block_interval = 10;
    p.propagation_delay = 1;
    p.channel = ideal();
    p.committee_size = k;
    p.threshold = k_bar;
    p.seed = seed;
    return p;
}

// Committees depend only on chain bytes, so a fresh simulation with the same
// parameters and the same call sequence reproduces the committee of a probe
// run exactly. Returns a tag whose committee has no duplicate members.
std::string distinct_committee_tag(const SimParams& params, std::uint64_t n, std::uint8_t protocol,
                                   std::vector<std::uint64_t>* members_out = nullptr) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::string tag = "candidate-" + std::to_string(attempt);
        Simulation probe(params);
        probe.bootstrap(n);
        RunOptions opt;
        opt.summarize = false;
        Actor a = probe.make_actor(tag);
        RunResult r = protocol == 3 ? probe.run_p3(a, opt) : probe.run_p4(a, opt);
        if (r.committee_duplicates == 0) {
            if (members_out) *members_out = r.committee_members;
            return tag;
        }
    }
    REQUIRE(false);
    return "";
}

}  // namespace

TEST_CASE("construction validates committee parameters") {
    CHECK_THROWS_AS(Simulation(make_params(3, 4)), std::invalid_argument);
    CHECK_THROWS_AS(Simulation(make_params(3, 0)), std::invalid_argument);
}

TEST_CASE("honest subjects certify over the decentralized protocols") {
    for (std::uint8_t protocol : {3, 4}) {
        CAPTURE(protocol);
        Simulation sim(make_params(3, 2));
        sim.bootstrap(12);
        Actor alice = sim.make_actor("alice");
        RunResult r = protocol == 3 ? sim.run_p3(alice, {}) : sim.run_p4(alice, {});

        CHECK(r.certified);
        CHECK(r.failure_reason.empty());
        CHECK(r.committee_members.size() == 3);
        CHECK(r.endpoint_messages == 3);
        CHECK(r.request_wait > 0);
        CHECK(r.request_wait <= 10);
        CHECK(r.latency > 0);
        REQUIRE(r.certificate);
        CHECK(r.certificate->assigned_id == 12);

        CHECK(sim.subjects().population() == 13);
        CHECK(sim.subjects().find(alice.keys.public_key, alice.endpoint) == 12);
        CHECK(sim.subject_actor(12).keys.public_key == alice.keys.public_key);
        auto replayed = registry::Registry::rebuild(sim.chain(), 3, 2);
        CHECK(replayed.same_subjects(sim.subjects()));

        if (protocol == 3) {
            CHECK(r.acceptance_count >= 2);
            CHECK(r.disclosure_count == 0);
        } else {
            CHECK(r.disclosure_count == 3);
            CHECK(r.acceptance_count == 0);
        }
    }
}

TEST_CASE("certification fails without a certified population") {
    Simulation sim(make_params(3, 2));
    RunResult r = sim.run_p3(sim.make_actor("alice"), {});
    CHECK_FALSE(r.certified);
    CHECK(r.failure_reason == "no certified population");
}

TEST_CASE("bootstrap is limited to the genesis window") {
    Simulation sim(make_params(3, 2));
    sim.bootstrap(4);
    CHECK_THROWS_AS(sim.bootstrap(1), std::logic_error);
}

TEST_CASE("attack modes are tied to their protocol") {
    Simulation sim(make_params(3, 2));
    sim.bootstrap(6);
    RunOptions opt;
    opt.attack = AttackMode::eavesdrop_p4;
    CHECK_THROWS_AS(sim.run_p3(sim.make_actor("x"), opt), std::invalid_argument);
    opt.attack = AttackMode::spoof_p3;
    CHECK_THROWS_AS(sim.run_p4(sim.make_actor("x"), opt), std::invalid_argument);
    opt.attack = AttackMode::miscertify_accept;
    CHECK_THROWS_AS(sim.run_p4(sim.make_actor("x"), opt), std::invalid_argument);
    opt.attack = AttackMode::miscertify_disclose;
    CHECK_THROWS_AS(sim.run_p3(sim.make_actor("x"), opt), std::invalid_argument);
}

TEST_CASE("p3 offline members shift coverage across the threshold") {
    SimParams params = make_params(3, 2);
    std::vector<std::uint64_t> members;
    std::string tag = distinct_committee_tag(params, 50, 3, &members);
    REQUIRE(members.size() == 3);

    SUBCASE("one silent member leaves enough acceptances") {
        Simulation sim(params);
        sim.bootstrap(50);
        RunOptions opt;
        opt.summarize = false;
        opt.offline_members = {members[0]};
        RunResult r = sim.run_p3(sim.make_actor(tag), opt);
        REQUIRE(r.committee_members == members);
        CHECK(r.certified);
        CHECK(r.acceptance_count == 2);
    }
    SUBCASE("two silent members block certification") {
        Simulation sim(params);
        sim.bootstrap(50);
        RunOptions opt;
        opt.summarize = false;
        opt.offline_members = {members[0], members[1]};
        RunResult r = sim.run_p3(sim.make_actor(tag), opt);
        REQUIRE(r.committee_members == members);
        CHECK_FALSE(r.certified);
        CHECK(r.failure_reason == "insufficient acceptances");
    }
}

TEST_CASE("p4 falls back to a threshold proof when challenges are missing") {
    SimParams params = make_params(3, 2);
    std::vector<std::uint64_t> members;
    std::string tag = distinct_committee_tag(params, 50, 4, &members);

    SUBCASE("one missing challenge delays but still certifies") {
        Simulation full(params);
        full.bootstrap(50);
        RunOptions honest;
        honest.summarize = false;
        RunResult baseline = full.run_p4(full.make_actor(tag), honest);
        REQUIRE(baseline.certified);

        Simulation sim(params);
        sim.bootstrap(50);
        RunOptions opt;
        opt.summarize = false;
        opt.offline_members = {members[0]};
        RunResult r = sim.run_p4(sim.make_actor(tag), opt);
        REQUIRE(r.committee_members == members);
        CHECK(r.certified);
        CHECK(r.disclosure_count == 2);
        CHECK(r.latency > baseline.latency);  // waited out proof_wait_blocks
    }
    SUBCASE("below the threshold no proof is ever published") {
        Simulation sim(params);
        sim.bootstrap(50);
        RunOptions opt;
        opt.summarize = false;
        opt.offline_members = {members[0], members[1]};
        RunResult r = sim.run_p4(sim.make_actor(tag), opt);
        CHECK_FALSE(r.certified);
        CHECK(r.failure_reason == "insufficient partial challenges");
    }
}

TEST_CASE("a member disclosing early drops out of the proof") {
    SimParams params = make_params(3, 2);
    std::vector<std::uint64_t> members;
    std::string tag = distinct_committee_tag(params, 50, 4, &members);

    Simulation sim(params);
    sim.bootstrap(50);
    RunOptions opt;
    opt.summarize = false;
    opt.early_disclosers = {members[0]};
    RunResult r = sim.run_p4(sim.make_actor(tag), opt);
    CHECK(r.certified);
    CHECK(r.disclosure_count == 2);  // the early disclosure backs no proof entry

    SimParams strict = make_params(3, 3);
    Simulation sim2(strict);
    sim2.bootstrap(50);
    RunResult r2 = sim2.run_p4(sim2.make_actor(tag), opt);
    CHECK_FALSE(r2.certified);
}

TEST_CASE("simulated latencies match the closed-form model") {
    for (std::uint8_t protocol : {3, 4}) {
        CAPTURE(protocol);
        SimParams params = make_params(4, 4);
        std::string tag = distinct_committee_tag(params, 100, protocol);
        Simulation sim(params);
        sim.bootstrap(100);
        RunOptions opt;
        opt.summarize = false;
        Actor a = sim.make_actor(tag);
        RunResult r = protocol == 3 ? sim.run_p3(a, opt) : sim.run_p4(a, opt);
        REQUIRE(r.certified);
        REQUIRE(r.committee_duplicates == 0);

        analysis::TimingParams t;
        t.block_interval = params.block_interval;
        t.propagation_delay = params.propagation_delay;
        t.request_wait = r.request_wait;
        t.endpoint_delay = params.channel.delivery_delay;
        t.per_message_time = params.channel.per_message_time;
        sim::Time expected = protocol == 3 ? analysis::latency_p3(t, 4) : analysis::latency_p4(t, 4);
        CHECK(r.latency == expected);
    }
}

TEST_CASE("runs are bit-identical across simulations with one seed") {
    auto execute = [] {
        Simulation sim(make_params(3, 2, 42));
        sim.bootstrap(20);
        RunResult r = sim.run_p4(sim.make_actor("alice"), {});
        std::ostringstream chain_dump;
        sim.chain().dump(chain_dump);
        return std::pair{r, chain_dump.str()};
    };
    auto [r1, d1] = execute();
    auto [r2, d2] = execute();
    CHECK(r1.certified == r2.certified);
    CHECK(r1.latency == r2.latency);
    CHECK(r1.committee_members == r2.committee_members);
    CHECK(d1 == d2);

    Simulation other(make_params(3, 2, 43));
    other.bootstrap(20);
    RunResult r3 = other.run_p4(other.make_actor("alice"), {});
    std::ostringstream d3;
    other.chain().dump(d3);
    CHECK(d3.str() != d1);  // seed feeds the actor keys and challenges
}

TEST_CASE("challenges never repeat within a simulation") {
    Simulation sim(make_params(3, 2));
    std::set<Bytes> seen;
    for (int i = 0; i < 10000; ++i) seen.insert(sim.random_challenge());
    CHECK(seen.size() == 10000);
}

TEST_CASE("basic protocol 1 reaches the subject through its endpoint") {
    Simulation sim(make_params(3, 2));
    Actor alice = sim.make_actor("alice");
    BasicOptions opt;
    opt.verifiers = 4;
    BasicResult r = sim.run_basic_p1(alice, opt);
    CHECK(r.successes == 4);
    CHECK(r.false_successes == 0);
    CHECK(r.endpoint_messages == 4);
    CHECK(r.latency == 2.5 + 4 * 1.0);  // e + vW: the codes serialize at E

    BasicOptions offline;
    offline.verifiers = 2;
    offline.subject_online = false;
    BasicResult r2 = sim.run_basic_p1(sim.make_actor("bob"), offline);
    CHECK(r2.successes == 0);
    CHECK(r2.failure_reason == "timeout: subject cannot read E");
    CHECK(r2.endpoint_messages == 2);  // codes still arrive at E
}

TEST_CASE("basic protocol 2 replies from the claimed endpoint") {
    Simulation sim(make_params(3, 2));
    Actor alice = sim.make_actor("alice");
    BasicOptions opt;
    opt.verifiers = 2;
    BasicResult r = sim.run_basic_p2(alice, opt);
    CHECK(r.successes == 2);
    CHECK(r.false_successes == 0);
    CHECK(r.endpoint_messages == 2);

    SUBCASE("spoofing succeeds only on a spoofable technology") {
        SimParams weak = make_params(3, 2);
        weak.channel = channels::preset("email");
        Simulation weak_sim(weak);
        Actor mallory = weak_sim.make_actor("mallory");
        mallory.controls_endpoint = false;
        BasicOptions attack;
        attack.verifiers = 3;
        attack.adversary_spoof = true;
        BasicResult a = weak_sim.run_basic_p2(mallory, attack);
        CHECK(a.successes == 3);
        CHECK(a.false_successes == 3);
        CHECK(a.endpoint_messages == 0);  // the claimed endpoint never sent a byte
    }
    SUBCASE("spoofing is refused elsewhere") {
        Actor mallory = sim.make_actor("mallory");
        mallory.controls_endpoint = false;
        BasicOptions attack;
        attack.verifiers = 1;
        attack.adversary_spoof = true;
        BasicResult a = sim.run_basic_p2(mallory, attack);
        CHECK(a.successes == 0);
        CHECK(a.failure_reason == "spoof refused");
    }
    SUBCASE("an offline subject fails honestly") {
        BasicOptions off;
        off.verifiers = 1;
        off.subject_online = false;
        BasicResult a = sim.run_basic_p2(sim.make_actor("carol"), off);
        CHECK(a.successes == 0);
        CHECK(a.failure_reason == "timeout: subject cannot send from E");
    }
}

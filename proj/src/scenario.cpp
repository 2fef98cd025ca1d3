#include "epcert/scenario.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <iomanip>
#include <sstream>

namespace epcert::scenario {

using nlohmann::json;

const char* protocol_name(Protocol p) {
    switch (p) {
        case Protocol::basic1: return "basic1";
        case Protocol::basic2: return "basic2";
        case Protocol::p3: return "p3";
        case Protocol::p4: return "p4";
    }
    return "unknown";
}

namespace {

Protocol protocol_from_name(const std::string& name) {
    if (name == "basic1") return Protocol::basic1;
    if (name == "basic2") return Protocol::basic2;
    if (name == "p3") return Protocol::p3;
    if (name == "p4") return Protocol::p4;
    throw ConfigError("protocol", "unknown protocol '" + name + "'");
}

template <typename T>
T field(const json& j, const std::string& name, T fallback) {
    if (!j.contains(name)) return fallback;
    try {
        return j.at(name).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(name, e.what());
    }
}

template <typename T>
T required(const json& j, const std::string& name) {
    if (!j.contains(name)) throw ConfigError(name, "missing");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(name, e.what());
    }
}

channels::ChannelProfile parse_profile(const json& j) {
    channels::ChannelProfile p;
    p.per_message_time = field<double>(j, "per_message_time", p.per_message_time);
    p.delivery_delay = field<double>(j, "delivery_delay", p.delivery_delay);
    p.spoofable = field<bool>(j, "spoofable", p.spoofable);
    p.eavesdroppable = field<bool>(j, "eavesdroppable", p.eavesdroppable);
    p.cost_per_message = field<double>(j, "cost_per_message", p.cost_per_message);
    return p;
}

}  // namespace

ScenarioConfig ScenarioConfig::parse(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError("(document)", e.what());
    }
    ScenarioConfig c;
    c.protocol = protocol_from_name(required<std::string>(j, "protocol"));
    c.population = required<std::uint64_t>(j, "population");
    c.committee = field<std::uint64_t>(j, "committee", c.committee);
    c.threshold = field<std::uint64_t>(j, "threshold", c.committee);

    if (j.contains("timing")) {
        const json& t = j.at("timing");
        c.block_interval = field<double>(t, "block_interval", c.block_interval);
        c.propagation_delay = field<double>(t, "propagation_delay", c.propagation_delay);
    }

    if (j.contains("channel")) {
        const json& ch = j.at("channel");
        if (ch.is_string()) {
            c.channel_preset = ch.get<std::string>();
            try {
                c.channel = channels::preset(c.channel_preset);
            } catch (const std::exception& e) {
                throw ConfigError("channel", e.what());
            }
        } else if (ch.is_object()) {
            c.channel = parse_profile(ch);
        } else {
            throw ConfigError("channel", "expected preset name or profile object");
        }
    } else {
        c.channel_preset = "ideal";
        c.channel = channels::preset("ideal");
    }
    if (j.contains("timing")) {
        // Explicit timing values override the preset's W and e.
        const json& t = j.at("timing");
        c.channel.delivery_delay = field<double>(t, "endpoint_delay", c.channel.delivery_delay);
        c.channel.per_message_time =
            field<double>(t, "per_message_time", c.channel.per_message_time);
    }

    if (j.contains("adversary")) {
        const json& a = j.at("adversary");
        c.adversary.corrupted_count = field<std::uint64_t>(a, "corrupted", 0);
        c.adversary.cost_per_subject = field<double>(a, "cost_per_subject", 1.0);
        try {
            c.adversary.strategy =
                adversary::strategy_from_name(field<std::string>(a, "strategy", "none"));
        } catch (const std::exception& e) {
            throw ConfigError("adversary.strategy", e.what());
        }
        std::string selection = field<std::string>(a, "selection", "first");
        if (selection == "first")
            c.adversary.selection = adversary::SelectionRule::first;
        else if (selection == "random")
            c.adversary.selection = adversary::SelectionRule::random;
        else
            throw ConfigError("adversary.selection", "expected 'first' or 'random'");
        c.adversary.selection_seed = field<std::uint64_t>(a, "selection_seed", 0);
    }

    c.verifiers = field<std::uint64_t>(j, "verifiers", c.verifiers);
    c.seed = field<std::uint64_t>(j, "seed", c.seed);
    c.trials = field<std::uint64_t>(j, "trials", c.trials);
    c.deadline_blocks = field<std::uint64_t>(j, "deadline_blocks", c.deadline_blocks);
    c.proof_wait_blocks = field<std::uint64_t>(j, "proof_wait_blocks", c.proof_wait_blocks);
    for (auto id : field<std::vector<std::uint64_t>>(j, "offline_members", {}))
        c.offline_members.insert(id);

    // Cross-field invariants.
    if (c.population < 1) throw ConfigError("population", "must be >= 1");
    if (c.committee < 1) throw ConfigError("committee", "must be >= 1");
    if (c.threshold < 1 || c.threshold > c.committee)
        throw ConfigError("threshold", "need 1 <= threshold <= committee");
    if (c.block_interval <= 0) throw ConfigError("timing.block_interval", "must be > 0");
    if (c.propagation_delay < 0 || 2 * c.propagation_delay >= c.block_interval)
        throw ConfigError("timing.propagation_delay", "need 0 <= 2p < block_interval");
    if (c.channel.per_message_time <= 0)
        throw ConfigError("channel.per_message_time", "must be > 0");
    if (c.channel.delivery_delay < 0) throw ConfigError("channel.delivery_delay", "must be >= 0");
    if (c.adversary.corrupted_count > c.population)
        throw ConfigError("adversary.corrupted", "exceeds population");
    if (c.trials < 1) throw ConfigError("trials", "must be >= 1");
    for (auto id : c.offline_members)
        if (id >= c.population) throw ConfigError("offline_members", "unknown subject id");
    return c;
}

std::string ScenarioConfig::serialize() const {
    json j;
    j["protocol"] = protocol_name(protocol);
    j["population"] = population;
    j["committee"] = committee;
    j["threshold"] = threshold;
    j["timing"] = {{"block_interval", block_interval},
                   {"propagation_delay", propagation_delay},
                   {"endpoint_delay", channel.delivery_delay},
                   {"per_message_time", channel.per_message_time}};
    if (!channel_preset.empty())
        j["channel"] = channel_preset;
    else
        j["channel"] = {{"per_message_time", channel.per_message_time},
                        {"delivery_delay", channel.delivery_delay},
                        {"spoofable", channel.spoofable},
                        {"eavesdroppable", channel.eavesdroppable},
                        {"cost_per_message", channel.cost_per_message}};
    j["adversary"] = {{"corrupted", adversary.corrupted_count},
                      {"cost_per_subject", adversary.cost_per_subject},
                      {"strategy", adversary::strategy_name(adversary.strategy)},
                      {"selection",
                       adversary.selection == adversary::SelectionRule::first ? "first" : "random"},
                      {"selection_seed", adversary.selection_seed}};
    j["verifiers"] = verifiers;
    j["seed"] = seed;
    j["trials"] = trials;
    j["deadline_blocks"] = deadline_blocks;
    j["proof_wait_blocks"] = proof_wait_blocks;
    j["offline_members"] = offline_members;
    return j.dump(2);
}

MetricsReport run_scenario(const ScenarioConfig& config) {
    MetricsReport report;
    report.config = config;

    protocols::SimParams params;
    params.block_interval = config.block_interval;
    params.propagation_delay = config.propagation_delay;
    params.channel = config.channel;
    params.committee_size = config.committee;
    params.threshold = config.threshold;
    params.seed = config.seed;

    protocols::Simulation sim(params);
    bool decentralized = config.protocol == Protocol::p3 || config.protocol == Protocol::p4;
    if (decentralized) {
        sim.bootstrap(config.population);
        if (config.adversary.corrupted_count > 0)
            adversary::corrupt(sim.subjects(),
                               config.adversary.selection == adversary::SelectionRule::first
                                   ? adversary::SelectionRule::first
                                   : adversary::SelectionRule::random,
                               config.adversary.corrupted_count, config.adversary.selection_seed);
    }

    bool attacking = config.adversary.strategy != adversary::Strategy::none;
    for (std::uint64_t trial = 0; trial < config.trials; ++trial) {
        RunRow row;
        row.trial = trial;
        std::string tag = "trial-" + std::to_string(trial);
        if (decentralized) {
            protocols::RunOptions opt;
            opt.deadline_blocks = config.deadline_blocks;
            opt.proof_wait_blocks = config.proof_wait_blocks;
            opt.offline_members = config.offline_members;
            // Certificates feed the population only in honest scenarios;
            // attack trials measure success against a fixed N.
            opt.summarize = !attacking;

            protocols::RunResult r;
            if (attacking) {
                protocols::Actor target = sim.make_actor(tag);
                // Under dos_silence the honest requester controls E; the
                // miscertification strategies claim an endpoint they do not.
                if (config.adversary.strategy != adversary::Strategy::dos_silence)
                    target.controls_endpoint = false;
                r = adversary::execute_strategy(sim, config.adversary, target, opt);
            } else if (config.protocol == Protocol::p3) {
                r = sim.run_p3(sim.make_actor(tag), opt);
            } else {
                r = sim.run_p4(sim.make_actor(tag), opt);
            }
            row.certified = r.certified;
            row.attack_success = r.attack_success;
            row.latency = r.latency;
            row.endpoint_messages = r.endpoint_messages;
            row.endpoint_cost = r.endpoint_cost;
            row.acceptances = r.acceptance_count;
            row.disclosures = r.disclosure_count;
            row.corrupted_slots = r.corrupted_slots;
            row.failure_reason = r.failure_reason;
        } else {
            protocols::BasicOptions opt;
            opt.verifiers = config.verifiers;
            opt.adversary_spoof = config.adversary.strategy == adversary::Strategy::spoof;
            protocols::Actor subject = sim.make_actor(tag);
            if (opt.adversary_spoof) subject.controls_endpoint = false;
            auto r = config.protocol == Protocol::basic1 ? sim.run_basic_p1(subject, opt)
                                                         : sim.run_basic_p2(subject, opt);
            row.certified = r.successes == config.verifiers;
            row.attack_success = r.false_successes > 0;
            row.latency = r.latency;
            row.endpoint_messages = r.endpoint_messages;
            row.endpoint_cost = r.endpoint_cost;
            row.failure_reason = r.failure_reason;
        }
        report.rows.push_back(std::move(row));
    }

    std::size_t certified = 0, attacks = 0;
    double latency_sum = 0, messages_sum = 0;
    for (const auto& row : report.rows) {
        certified += row.certified ? 1 : 0;
        attacks += row.attack_success ? 1 : 0;
        if (row.certified) latency_sum += row.latency;
        messages_sum += static_cast<double>(row.endpoint_messages);
        report.total_endpoint_cost += row.endpoint_cost;
    }
    double n = static_cast<double>(report.rows.size());
    report.success_rate = static_cast<double>(certified) / n;
    report.attack_success_rate = static_cast<double>(attacks) / n;
    report.success_se = std::sqrt(report.success_rate * (1 - report.success_rate) / n);
    report.attack_success_se =
        std::sqrt(report.attack_success_rate * (1 - report.attack_success_rate) / n);
    report.mean_latency = certified > 0 ? latency_sum / static_cast<double>(certified) : 0;
    report.mean_messages = messages_sum / n;
    report.adversary_cost = adversary::attack_cost(config.adversary, 1);
    return report;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

}  // namespace

void MetricsReport::render(std::ostream& os) const {
    os << "scenario " << protocol_name(config.protocol) << " N=" << config.population
       << " k=" << config.committee << " k_bar=" << config.threshold
       << " m=" << config.adversary.corrupted_count << " strategy="
       << adversary::strategy_name(config.adversary.strategy) << " seed=" << config.seed
       << " trials=" << config.trials << "\n";
    os << "trial certified attack_success latency endpoint_messages endpoint_cost "
          "acceptances disclosures corrupted_slots reason\n";
    for (const auto& r : rows)
        os << r.trial << ' ' << (r.certified ? 1 : 0) << ' ' << (r.attack_success ? 1 : 0) << ' '
           << fmt(r.latency) << ' ' << r.endpoint_messages << ' ' << fmt(r.endpoint_cost) << ' '
           << r.acceptances << ' ' << r.disclosures << ' ' << r.corrupted_slots << ' '
           << (r.failure_reason.empty() ? "-" : r.failure_reason) << "\n";
    os << "aggregate success_rate=" << fmt(success_rate) << " se=" << fmt(success_se)
       << " attack_success_rate=" << fmt(attack_success_rate) << " se=" << fmt(attack_success_se)
       << " mean_latency=" << fmt(mean_latency) << " mean_messages=" << fmt(mean_messages)
       << " endpoint_cost=" << fmt(total_endpoint_cost)
       << " adversary_cost_per_period=" << fmt(adversary_cost) << "\n";
}

namespace {

std::vector<std::uint64_t> grid_u64(const json& j, const std::string& name,
                                    std::vector<std::uint64_t> fallback) {
    if (!j.contains(name)) return fallback;
    const json& g = j.at(name);
    try {
        if (g.is_array()) return g.get<std::vector<std::uint64_t>>();
        if (g.is_number()) return {g.get<std::uint64_t>()};
        if (g.is_object()) {
            std::uint64_t from = g.at("from").get<std::uint64_t>();
            std::uint64_t to = g.at("to").get<std::uint64_t>();
            std::uint64_t step = g.value("step", std::uint64_t{1});
            if (step == 0) throw ConfigError(name + ".step", "must be >= 1");
            std::vector<std::uint64_t> out;
            for (std::uint64_t v = from; v <= to; v += step) out.push_back(v);
            return out;
        }
    } catch (const json::exception& e) {
        throw ConfigError(name, e.what());
    }
    throw ConfigError(name, "expected number, array, or {from,to,step}");
}

std::vector<double> grid_f64(const json& j, const std::string& name,
                             std::vector<double> fallback) {
    if (!j.contains(name)) return fallback;
    const json& g = j.at(name);
    try {
        if (g.is_array()) return g.get<std::vector<double>>();
        if (g.is_number()) return {g.get<double>()};
    } catch (const json::exception& e) {
        throw ConfigError(name, e.what());
    }
    throw ConfigError(name, "expected number or array");
}

}  // namespace

std::string run_analysis(const std::string& sweep_json) {
    json j;
    try {
        j = json::parse(sweep_json);
    } catch (const json::exception& e) {
        throw ConfigError("(document)", e.what());
    }
    std::string mode = required<std::string>(j, "mode");
    std::ostringstream out;

    if (mode == "security") {
        auto ns = grid_u64(j, "population", {});
        auto ks = grid_u64(j, "committee", {});
        auto kbars = grid_u64(j, "threshold", {});
        auto ms = grid_u64(j, "corrupted", {});
        if (ns.empty()) throw ConfigError("population", "grid must be non-empty");
        if (ks.empty()) throw ConfigError("committee", "grid must be non-empty");
        if (kbars.empty()) throw ConfigError("threshold", "grid must be non-empty");
        if (ms.empty()) throw ConfigError("corrupted", "grid must be non-empty");
        std::uint64_t mc_trials = field<std::uint64_t>(j, "montecarlo_trials", 0);
        std::uint64_t seed = field<std::uint64_t>(j, "seed", 1);

        out << "N,k,k_bar,m,p_exact,p_dos,mc_estimate,mc_se,status\n";
        for (auto n : ns)
            for (auto k : ks)
                for (auto kbar : kbars)
                    for (auto m : ms) {
                        analysis::SecurityParams p{n, k, kbar, m};
                        out << n << ',' << k << ',' << kbar << ',' << m << ',';
                        try {
                            p.validate();
                        } catch (const std::exception& e) {
                            out << ",,,,skipped: " << e.what() << "\n";
                            continue;
                        }
                        out << fmt(analysis::p_exact(p)) << ',' << fmt(analysis::p_dos(p)) << ',';
                        if (mc_trials > 0) {
                            auto mc = analysis::p_montecarlo(p, mc_trials, seed);
                            out << fmt(mc.estimate) << ',' << fmt(mc.standard_error);
                        } else {
                            out << ',';
                        }
                        out << ",ok\n";
                    }
        return out.str();
    }

    if (mode == "timing") {
        auto bs = grid_f64(j, "block_interval", {10});
        auto ps = grid_f64(j, "propagation_delay", {1});
        auto bbars = grid_f64(j, "request_wait", {5});
        auto es = grid_f64(j, "endpoint_delay", {2});
        auto ws = grid_f64(j, "per_message_time", {1});
        auto ks = grid_u64(j, "committee", {3});
        auto vs = grid_u64(j, "verifiers", {1});

        out << "b,p,b_bar,e,W,k,v,latency_p3,latency_p4,latency_basic,messages_decentralized,"
               "messages_basic,status\n";
        for (auto b : bs)
            for (auto p : ps)
                for (auto bbar : bbars)
                    for (auto e : es)
                        for (auto w : ws)
                            for (auto k : ks)
                                for (auto v : vs) {
                                    analysis::TimingParams t{b, p, bbar, e, w, v};
                                    out << fmt(b) << ',' << fmt(p) << ',' << fmt(bbar) << ','
                                        << fmt(e) << ',' << fmt(w) << ',' << k << ',' << v << ',';
                                    try {
                                        t.validate();
                                    } catch (const std::exception& ex) {
                                        out << ",,,,,skipped: " << ex.what() << "\n";
                                        continue;
                                    }
                                    out << fmt(analysis::latency_p3(t, k)) << ','
                                        << fmt(analysis::latency_p4(t, k)) << ','
                                        << fmt(analysis::latency_basic(t)) << ',' << k << ',' << v
                                        << ",ok\n";
                                }
        return out.str();
    }

    throw ConfigError("mode", "expected 'security' or 'timing'");
}

}  // namespace epcert::scenario

#include "epcert/protocols.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace epcert::protocols {

using channels::EndpointAddress;
using ledger::TxKind;

struct Simulation::RunState {
    RunOptions opt;
    Actor subject;
    std::uint8_t protocol = 3;
    sim::Time t_submit = 0;
    std::size_t trace_start = 0;

    std::uint64_t request_tx = 0;
    Bytes request_payload;
    bool request_seen = false;
    std::uint64_t request_height = 0;
    sim::Time request_wait = 0;
    committee::Committee comm;
    std::size_t corrupted_slots = 0;

    // P3
    crypto::Digest q;
    crypto::Signature p3_proof;
    std::set<std::uint64_t> accepted_members;

    // P4
    std::vector<std::optional<wire::ProofEntry>> sent_by_slot;  // 1-based
    std::vector<wire::ProofEntry> received;
    bool proof_published = false;
    bool proof_seen_committed = false;
    std::vector<wire::ProofEntry> committed_proof_entries;

    bool certified = false;
    sim::Time cert_time = 0;
    std::size_t evidence_count = 0;
    std::optional<registry::Certificate> certificate;
    bool done = false;
    std::string failure_reason;
};

Simulation::Simulation(SimParams params)
    : params_(params),
      ledger_(params.block_interval, params.propagation_delay),
      channel_(params.channel),
      registry_(params.committee_size, params.threshold),
      rng_(params.seed) {
    if (params_.committee_size < 1 || params_.threshold < 1 ||
        params_.threshold > params_.committee_size)
        throw std::invalid_argument("Simulation: need 1 <= threshold <= committee_size");
}

Actor Simulation::make_actor(const std::string& tag, channels::EndpointKind kind) {
    Actor a;
    a.keys = crypto::generate_keypair(encode_parts({to_bytes(tag), be64(params_.seed)}));
    a.endpoint = EndpointAddress{kind, tag};
    return a;
}

Bytes Simulation::random_challenge() {
    Bytes out = be64(challenge_counter_++);
    for (int i = 0; i < 2; ++i) {
        Bytes word = be64(rng_());
        out.insert(out.end(), word.begin(), word.end());
    }
    return out;
}

void Simulation::bootstrap(std::uint64_t n) {
    if (ledger_.current_time() >= params_.block_interval)
        throw std::logic_error("Simulation::bootstrap: genesis window already closed");
    for (std::uint64_t i = 0; i < n; ++i) {
        Actor a = make_actor("subject-" + std::to_string(i));
        auto payload = wire::BootstrapSummarization{a.keys.public_key, a.endpoint}.encode();
        auto tx = ledger::make_transaction(a.keys, TxKind::Summarization, std::move(payload));
        if (!ledger_.submit(std::move(tx), ledger_.current_time()))
            throw std::runtime_error("bootstrap submission rejected");
        actors_.push_back(std::move(a));
    }
    while (registry_.population() < n) {
        for (const auto& b : ledger_.advance_to(ledger_.next_commit_time()))
            registry_.apply_block(ledger_, b);
    }
}

void Simulation::drive(const std::shared_ptr<RunState>& st) {
    while (!st->done) {
        sim::Time te = events_.next_time();
        sim::Time tb = ledger_.next_commit_time();
        if (tb <= te) {
            for (const auto& block : ledger_.advance_to(tb)) {
                registry_.apply_block(ledger_, block);
                std::uint64_t height = block.height;
                events_.schedule(tb + params_.propagation_delay, [this, st, height](sim::Time t) {
                    if (st->done) return;
                    if (st->protocol == 3)
                        observe_block_p3(st, height, t);
                    else
                        observe_block_p4(st, height, t);
                });
            }
        } else {
            events_.pop_and_run();
        }
    }
}

namespace {

bool block_touches_request(const ledger::Block& block, std::uint64_t request_id) {
    for (const auto& tx : block.transactions) {
        if (tx.kind == TxKind::CertificationRequest) continue;
        if (tx.payload.size() >= 16 && read_be64(tx.payload, 0) == 8 &&
            read_be64(tx.payload, 8) == request_id)
            return true;
    }
    return false;
}

}  // namespace

void Simulation::observe_block_p3(const std::shared_ptr<RunState>& st, std::uint64_t height,
                                  sim::Time t) {
    const ledger::Block& block = ledger_.blocks()[height];
    if (!st->request_seen && ledger_.is_committed(st->request_tx) &&
        ledger_.position_of(st->request_tx).height == height) {
        st->request_seen = true;
        st->request_height = height;
        st->request_wait = block.commit_time - st->t_submit - params_.propagation_delay;
        std::uint64_t n = registry_.population_at(height);
        if (n == 0) {
            st->failure_reason = "no certified population";
            finish(st, t);
            return;
        }
        st->comm = committee::select(st->request_payload, block.hash, n, params_.committee_size);
        for (std::uint64_t member : st->comm.members)
            if (registry_.subject(member).corrupted) ++st->corrupted_slots;
        st->q = crypto::digest({st->request_payload, block.hash.as_bytes()});
        start_p3_sends(st, t);
    }
    if (!st->request_seen) return;
    if (st->certified || block_touches_request(block, st->request_tx))
        check_certification(st, height, t);
    if (!st->done && !st->certified && height >= st->request_height + st->opt.deadline_blocks) {
        if (st->failure_reason.empty()) st->failure_reason = "insufficient acceptances";
        finish(st, t);
    }
}

void Simulation::start_p3_sends(const std::shared_ptr<RunState>& st, sim::Time t) {
    st->p3_proof = crypto::sign(st->subject.keys.secret_key, st->q.as_bytes());
    Bytes payload = wire::P3ProofMessage{st->request_tx, st->p3_proof}.encode();

    auto member_receive = [this, st](std::uint64_t member_id, const EndpointAddress& from,
                                     sim::Time when) {
        if (st->opt.offline_members.count(member_id)) return;
        const auto& member = registry_.subject(member_id);
        if (member.corrupted && st->opt.attack == AttackMode::dos_silence) return;
        // Member checks: the message really came from E, and P is S's
        // signature over the Q this member computed itself.
        if (from != st->subject.endpoint) return;
        auto req = wire::CertificationRequest::decode(st->request_payload);
        if (!crypto::verify(req->public_key, st->q.as_bytes(), st->p3_proof)) return;
        if (!st->accepted_members.insert(member_id).second) return;
        auto tx = ledger::make_transaction(actors_[member_id].keys, TxKind::Acceptance,
                                           wire::Acceptance{st->request_tx, st->p3_proof}.encode());
        ledger_.submit(std::move(tx), when);
    };

    switch (st->opt.attack) {
        case AttackMode::none:
        case AttackMode::dos_silence: {
            if (!st->subject.controls_endpoint) break;  // cannot send from E
            for (std::uint64_t member : st->comm.members) {
                sim::Time delivered = channel_.send(st->subject.endpoint,
                                                    actors_[member].endpoint, payload, t);
                EndpointAddress from = st->subject.endpoint;
                events_.schedule(delivered, [member_receive, member, from](sim::Time when) {
                    member_receive(member, from, when);
                });
            }
            break;
        }
        case AttackMode::spoof_p3: {
            for (std::uint64_t member : st->comm.members) {
                auto delivered =
                    channel_.attempt_spoof(st->subject.endpoint, actors_[member].endpoint,
                                           payload, t);
                if (!delivered) {
                    st->failure_reason = "spoof refused";
                    continue;
                }
                EndpointAddress from = st->subject.endpoint;
                events_.schedule(*delivered, [member_receive, member, from](sim::Time when) {
                    member_receive(member, from, when);
                });
            }
            break;
        }
        case AttackMode::miscertify_accept: {
            // P travels over the adversary's side channel, never through E;
            // corrupted members attest anyway.
            for (std::uint64_t member : st->comm.members) {
                if (!registry_.subject(member).corrupted) continue;
                if (!st->accepted_members.insert(member).second) continue;
                auto tx = ledger::make_transaction(
                    actors_[member].keys, TxKind::Acceptance,
                    wire::Acceptance{st->request_tx, st->p3_proof}.encode());
                ledger_.submit(std::move(tx), t);
            }
            break;
        }
        default:
            throw std::invalid_argument("attack mode incompatible with protocol 3");
    }
}

void Simulation::observe_block_p4(const std::shared_ptr<RunState>& st, std::uint64_t height,
                                  sim::Time t) {
    const ledger::Block& block = ledger_.blocks()[height];
    if (!st->request_seen && ledger_.is_committed(st->request_tx) &&
        ledger_.position_of(st->request_tx).height == height) {
        st->request_seen = true;
        st->request_height = height;
        st->request_wait = block.commit_time - st->t_submit - params_.propagation_delay;
        std::uint64_t n = registry_.population_at(height);
        if (n == 0) {
            st->failure_reason = "no certified population";
            finish(st, t);
            return;
        }
        st->comm = committee::select(st->request_payload, block.hash, n, params_.committee_size);
        for (std::uint64_t member : st->comm.members)
            if (registry_.subject(member).corrupted) ++st->corrupted_slots;
        start_p4_challenges(st, t);
    }
    if (!st->request_seen) return;

    // Committee members watch for P; disclosures follow its block broadcast.
    if (!st->proof_seen_committed) {
        for (const auto& tx : block.transactions) {
            if (tx.kind != TxKind::ProofPublication) continue;
            auto proof = wire::Proof::decode(tx.payload);
            if (!proof || proof->request_id != st->request_tx) continue;
            st->proof_seen_committed = true;
            st->committed_proof_entries = proof->entries;
            for (const auto& entry : st->committed_proof_entries) {
                if (entry.slot == 0 || entry.slot > st->sent_by_slot.size()) continue;
                const auto& mine = st->sent_by_slot[entry.slot - 1];
                if (!mine || mine->challenge != entry.challenge ||
                    mine->member_id != entry.member_id)
                    continue;
                if (st->opt.early_disclosers.count(entry.member_id)) continue;  // already did
                auto tx2 = ledger::make_transaction(
                    actors_[entry.member_id].keys, TxKind::ChallengeDisclosure,
                    wire::Disclosure{st->request_tx, entry.slot, entry.challenge}.encode());
                ledger_.submit(std::move(tx2), t);
            }
            break;
        }
    }

    // S falls back to a threshold proof when not all challenges arrived.
    if (!st->proof_published && height >= st->request_height + st->opt.proof_wait_blocks &&
        st->received.size() >= params_.threshold)
        publish_p4_proof(st, t);

    if (st->certified || block_touches_request(block, st->request_tx))
        check_certification(st, height, t);
    if (!st->done && !st->certified && height >= st->request_height + st->opt.deadline_blocks) {
        if (st->failure_reason.empty())
            st->failure_reason =
                st->proof_published ? "not certified" : "insufficient partial challenges";
        finish(st, t);
    }
}

void Simulation::start_p4_challenges(const std::shared_ptr<RunState>& st, sim::Time t) {
    st->sent_by_slot.assign(params_.committee_size, std::nullopt);

    auto receive_at_subject = [this, st](const wire::ProofEntry& entry, sim::Time when) {
        st->received.push_back(entry);
        if (!st->proof_published && st->received.size() == params_.committee_size)
            publish_p4_proof(st, when);
    };

    for (std::uint64_t slot = 1; slot <= params_.committee_size; ++slot) {
        std::uint64_t member = st->comm.members[slot - 1];
        if (st->opt.offline_members.count(member)) continue;
        bool corrupted = registry_.subject(member).corrupted;
        if (corrupted && st->opt.attack == AttackMode::dos_silence) continue;

        wire::ProofEntry entry{slot, member, random_challenge()};
        st->sent_by_slot[slot - 1] = entry;

        if (st->opt.early_disclosers.count(member)) {
            // Buggy member: discloses on chain instead of messaging E.
            auto tx = ledger::make_transaction(
                actors_[member].keys, TxKind::ChallengeDisclosure,
                wire::Disclosure{st->request_tx, slot, entry.challenge}.encode());
            ledger_.submit(std::move(tx), t);
            continue;
        }
        if (corrupted && st->opt.attack == AttackMode::miscertify_disclose) {
            // Leaked over the adversary's instant side channel.
            receive_at_subject(entry, t);
            continue;
        }
        Bytes payload =
            wire::P4ChallengeMessage{st->request_tx, slot, member, entry.challenge}.encode();
        sim::Time delivered =
            channel_.send(actors_[member].endpoint, st->subject.endpoint, payload, t);
        if (st->subject.controls_endpoint)
            events_.schedule(delivered, [receive_at_subject, entry](sim::Time when) {
                receive_at_subject(entry, when);
            });
        // Otherwise nobody is listening at E; an eavesdropper may still copy
        // the payload (wired up in run_decentralized).
    }

    if (st->opt.attack == AttackMode::miscertify_disclose && !st->proof_published) {
        if (st->received.size() >= params_.threshold)
            publish_p4_proof(st, t);
        else
            st->failure_reason = "insufficient corrupted challenges";
    }
}

void Simulation::publish_p4_proof(const std::shared_ptr<RunState>& st, sim::Time t) {
    st->proof_published = true;
    std::vector<wire::ProofEntry> entries = st->received;
    std::sort(entries.begin(), entries.end(),
              [](const wire::ProofEntry& a, const wire::ProofEntry& b) { return a.slot < b.slot; });
    wire::Proof proof;
    proof.request_id = st->request_tx;
    proof.entries = std::move(entries);
    proof.signature = crypto::sign(st->subject.keys.secret_key,
                                   wire::Proof::signing_bytes(proof.entries, st->request_payload));
    auto tx = ledger::make_transaction(st->subject.keys, TxKind::ProofPublication, proof.encode());
    ledger_.submit(std::move(tx), t);
}

void Simulation::check_certification(const std::shared_ptr<RunState>& st, std::uint64_t height,
                                     sim::Time t) {
    if (!st->certified) {
        if (st->protocol == 3) {
            auto v = registry_.verify_p3(ledger_, st->request_tx);
            if (!v.certified) return;
            st->evidence_count = v.acceptance_txs.size();
        } else {
            auto v = registry_.verify_p4(ledger_, st->request_tx);
            if (!v.certified) return;
            st->evidence_count = v.disclosure_txs.size();
        }
        st->certified = true;
        st->cert_time = t;
        if (st->opt.summarize)
            st->certificate = registry_.summarize(ledger_, st->request_tx, st->protocol, t);
        else
            finish(st, t);
        return;
    }
    // Certified already: wait for the summarization to commit so the registry
    // reflects it before the run ends.
    if (!st->opt.summarize || !st->certificate ||
        ledger_.is_committed(st->certificate->summarization_tx))
        finish(st, t);
}

void Simulation::finish(const std::shared_ptr<RunState>& st, sim::Time) {
    st->done = true;
}

RunResult Simulation::run_decentralized(const Actor& subject, const RunOptions& options,
                                        std::uint8_t protocol) {
    auto st = std::make_shared<RunState>();
    st->opt = options;
    st->subject = subject;
    st->protocol = protocol;
    st->trace_start = channel_.trace().size();

    sim::Time t_submit = ledger_.current_time() + options.submit_offset;
    for (const auto& b : ledger_.advance_to(t_submit)) registry_.apply_block(ledger_, b);
    st->t_submit = t_submit;

    bool eavesdrop_active = false;
    if (options.attack == AttackMode::eavesdrop_p4) {
        if (protocol != 4)
            throw std::invalid_argument("eavesdrop strategy applies to protocol 4 only");
        eavesdrop_active = channel_.attempt_eavesdrop(
            subject.endpoint, [this, st](const channels::ChannelMessage& msg) {
                auto challenge = wire::P4ChallengeMessage::decode(msg.payload);
                if (!challenge || challenge->request_id != st->request_tx) return;
                wire::ProofEntry entry{challenge->slot, challenge->member_id,
                                       challenge->challenge};
                events_.schedule(msg.delivered_at, [this, st, entry](sim::Time when) {
                    if (st->done || st->proof_published) return;
                    st->received.push_back(entry);
                    if (st->received.size() == params_.committee_size)
                        publish_p4_proof(st, when);
                });
            });
        if (!eavesdrop_active) st->failure_reason = "eavesdrop refused";
    }
    if (options.attack == AttackMode::spoof_p3 && protocol != 3)
        throw std::invalid_argument("spoof strategy applies to protocol 3 only");
    if (options.attack == AttackMode::miscertify_accept && protocol != 3)
        throw std::invalid_argument("corrupted-acceptance strategy applies to protocol 3 only");
    if (options.attack == AttackMode::miscertify_disclose && protocol != 4)
        throw std::invalid_argument("corrupted-disclosure strategy applies to protocol 4 only");

    wire::CertificationRequest request{subject.keys.public_key, subject.endpoint};
    st->request_payload = request.encode();
    auto tx = ledger::make_transaction(subject.keys, TxKind::CertificationRequest,
                                       st->request_payload);
    auto request_id = ledger_.submit(std::move(tx), t_submit);
    if (!request_id) throw std::runtime_error("request submission rejected");
    st->request_tx = *request_id;

    drive(st);

    RunResult out;
    out.certified = st->certified;
    out.failure_reason = st->failure_reason;
    out.latency = st->certified ? st->cert_time - st->t_submit : 0;
    out.request_wait = st->request_wait;
    out.request_tx = st->request_tx;
    for (std::size_t i = st->trace_start; i < channel_.trace().size(); ++i) {
        const auto& m = channel_.trace()[i];
        if (m.to == subject.endpoint || (m.from == subject.endpoint && !m.spoofed))
            ++out.endpoint_messages;
    }
    out.endpoint_cost =
        static_cast<double>(out.endpoint_messages) * channel_.cost_per_message();
    if (protocol == 3)
        out.acceptance_count = st->evidence_count;
    else
        out.disclosure_count = st->evidence_count;
    out.committee_members = st->comm.members;
    out.committee_duplicates = st->comm.duplicate_count();
    out.corrupted_slots = st->corrupted_slots;
    out.certificate = st->certificate;
    switch (options.attack) {
        case AttackMode::miscertify_accept:
        case AttackMode::miscertify_disclose:
        case AttackMode::spoof_p3:
        case AttackMode::eavesdrop_p4:
            out.attack_success = out.certified;
            break;
        case AttackMode::dos_silence:
            out.attack_success = !out.certified;
            break;
        case AttackMode::none:
            break;
    }

    // Keep the actor table aligned with newly assigned ids.
    while (actors_.size() < registry_.population()) actors_.push_back(subject);
    return out;
}

RunResult Simulation::run_p3(const Actor& subject, const RunOptions& options) {
    return run_decentralized(subject, options, 3);
}

RunResult Simulation::run_p4(const Actor& subject, const RunOptions& options) {
    return run_decentralized(subject, options, 4);
}

BasicResult Simulation::run_basic_p1(const Actor& subject, const BasicOptions& options) {
    BasicResult out;
    std::size_t trace_start = channel_.trace().size();
    sim::Time start = ledger_.current_time();
    for (std::uint64_t v = 0; v < options.verifiers; ++v) {
        Bytes code = random_challenge();
        EndpointAddress verifier{subject.endpoint.kind,
                                 "verifier-" + std::to_string(challenge_counter_)};
        sim::Time delivered = channel_.send(verifier, subject.endpoint, code, start);
        if (!options.subject_online || !subject.controls_endpoint) continue;
        // S signs the code received at E and answers over the zero-delay mean M.
        auto sig = crypto::sign(subject.keys.secret_key, code);
        if (crypto::verify(subject.keys.public_key, code, sig)) {
            ++out.successes;
            out.latency = std::max(out.latency, delivered - start);
        }
    }
    if (out.successes == 0 && options.verifiers > 0)
        out.failure_reason = "timeout: subject cannot read E";
    for (std::size_t i = trace_start; i < channel_.trace().size(); ++i)
        if (channel_.trace()[i].to == subject.endpoint) ++out.endpoint_messages;
    out.endpoint_cost = static_cast<double>(out.endpoint_messages) * channel_.cost_per_message();
    return out;
}

BasicResult Simulation::run_basic_p2(const Actor& subject, const BasicOptions& options) {
    BasicResult out;
    std::size_t trace_start = channel_.trace().size();
    sim::Time start = ledger_.current_time();
    for (std::uint64_t v = 0; v < options.verifiers; ++v) {
        // The verifier hands the challenge over M; the reply must come from E.
        Bytes code = random_challenge();
        EndpointAddress verifier{subject.endpoint.kind,
                                 "verifier-" + std::to_string(challenge_counter_)};
        auto sig = crypto::sign(subject.keys.secret_key, code);
        Bytes payload = encode_parts({code, sig.bytes});

        std::optional<sim::Time> delivered;
        bool spoofed = false;
        if (subject.controls_endpoint && options.subject_online) {
            delivered = channel_.send(subject.endpoint, verifier, payload, start);
        } else if (options.adversary_spoof) {
            delivered = channel_.attempt_spoof(subject.endpoint, verifier, payload, start);
            spoofed = true;
            if (!delivered) out.failure_reason = "spoof refused";
        } else {
            out.failure_reason = "timeout: subject cannot send from E";
        }
        if (!delivered) continue;
        // Verifier sees a message whose from-address is E and checks [c]_s.
        if (crypto::verify(subject.keys.public_key, code, sig)) {
            ++out.successes;
            if (spoofed) ++out.false_successes;
            out.latency = std::max(out.latency, *delivered - start);
        }
    }
    for (std::size_t i = trace_start; i < channel_.trace().size(); ++i)
        if (channel_.trace()[i].from == subject.endpoint && !channel_.trace()[i].spoofed)
            ++out.endpoint_messages;
    out.endpoint_cost = static_cast<double>(out.endpoint_messages) * channel_.cost_per_message();
    return out;
}

}  // namespace epcert::protocols

#ifndef EPCERT_REGISTRY_HPP
#define EPCERT_REGISTRY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "epcert/channels.hpp"
#include "epcert/committee.hpp"
#include "epcert/ledger.hpp"
#include "epcert/wire.hpp"

namespace epcert::registry {

struct CertifiedSubject {
    std::uint64_t id = 0;  // sequential, gap-free
    Bytes public_key;
    channels::EndpointAddress endpoint;
    std::uint64_t certified_at = 0;  // block height of the summarization
    bool corrupted = false;          // simulation-only adversary flag
    bool active = true;              // expiry flag, flipped by scenario config
};

struct Certificate {
    std::uint64_t request_id = 0;
    std::uint8_t protocol = 3;
    std::uint64_t proof_tx = 0;  // P3: the request itself carries no proof tx; 0 then
    std::vector<std::uint64_t> supporting_txs;  // acceptances or disclosures
    std::uint64_t summarization_tx = 0;
    std::uint64_t assigned_id = 0;
};

struct P3Verification {
    bool certified = false;
    std::size_t slots_covered = 0;  // committee slots backed by a valid acceptance
    std::vector<std::uint64_t> acceptance_txs;
    std::optional<std::string> error;  // set only when the request itself is unusable
};

struct P4Verification {
    bool certified = false;
    std::string failing_step;  // empty when certified
    std::uint64_t proof_tx = 0;
    std::vector<std::uint64_t> disclosure_txs;
    std::size_t slots_covered = 0;
};

// Derived state: the set of certified subjects is a pure function of the
// chain. The incremental instance the simulation maintains must always equal
// rebuild() over the same ledger.
class Registry {
public:
    Registry(std::uint64_t committee_size, std::uint64_t threshold)
        : k_(committee_size), k_bar_(threshold) {}

    std::uint64_t committee_size() const { return k_; }
    std::uint64_t threshold() const { return k_bar_; }

    std::uint64_t population() const { return subjects_.size(); }
    // N frozen at a request's block: subjects certified strictly before it.
    std::uint64_t population_at(std::uint64_t height) const;

    const std::vector<CertifiedSubject>& subjects() const { return subjects_; }
    const CertifiedSubject& subject(std::uint64_t id) const;
    CertifiedSubject& subject(std::uint64_t id);
    std::optional<std::uint64_t> find(const Bytes& public_key,
                                      const channels::EndpointAddress& endpoint) const;

    // Verifier-side certificate checks, read-only over the chain.
    P3Verification verify_p3(const ledger::Ledger& chain, std::uint64_t request_id) const;
    P4Verification verify_p4(const ledger::Ledger& chain, std::uint64_t request_id) const;

    // Consensus-rule summarization: verifies the evidence and, on success,
    // submits a Summarization transaction signed by the consensus keypair and
    // returns the certificate with the next sequential id. Throws
    // std::invalid_argument for an already-certified request.
    std::optional<Certificate> summarize(ledger::Ledger& chain, std::uint64_t request_id,
                                         std::uint8_t protocol, sim::Time now);

    // Applies the effects of newly committed blocks (bootstrap and derived
    // summarizations) to the incremental state.
    void apply_block(const ledger::Ledger& chain, const ledger::Block& block);

    // Recomputes the registry from the raw chain alone.
    static Registry rebuild(const ledger::Ledger& chain, std::uint64_t committee_size,
                            std::uint64_t threshold);

    bool same_subjects(const Registry& other) const;

    // id, public key hex, endpoint, certified_at
    void export_table(std::ostream& os) const;

    static crypto::KeyPair consensus_keypair();

private:
    void add_subject(const Bytes& public_key, const channels::EndpointAddress& endpoint,
                     std::uint64_t height);

    std::uint64_t k_;
    std::uint64_t k_bar_;
    std::vector<CertifiedSubject> subjects_;
    std::map<std::pair<Bytes, channels::EndpointAddress>, std::uint64_t> by_binding_;
    std::map<std::uint64_t, std::uint64_t> summarized_requests_;  // request id -> subject id
};

}  // namespace epcert::registry

#endif

#ifndef EPCERT_LEDGER_HPP
#define EPCERT_LEDGER_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <unordered_map>
#include <vector>

#include "epcert/bytes.hpp"
#include "epcert/crypto.hpp"
#include "epcert/sim.hpp"

namespace epcert::ledger {

enum class TxKind : std::uint8_t {
    CertificationRequest = 1,
    Acceptance = 2,
    ProofPublication = 3,
    ChallengeDisclosure = 4,
    Summarization = 5,
};

const char* kind_name(TxKind k);

struct Transaction {
    std::uint64_t id = 0;
    TxKind kind = TxKind::CertificationRequest;
    Bytes payload;
    Bytes submitter;  // public key
    crypto::Signature signature;
    sim::Time submit_time = 0;

    // Byte string the submitter signs and the block hash covers.
    Bytes signed_bytes() const;
    Bytes wire_bytes() const;
};

// Builds and signs a transaction; id is assigned by the ledger on submit.
Transaction make_transaction(const crypto::KeyPair& submitter, TxKind kind, Bytes payload);

struct Block {
    std::uint64_t height = 0;
    crypto::Digest hash;
    crypto::Digest parent_hash;
    sim::Time commit_time = 0;
    std::vector<Transaction> transactions;
};

struct TxPosition {
    std::uint64_t height = 0;
    std::size_t index = 0;  // position within the block
};

// Idealized chain: fixed block schedule, unbounded capacity, no forks.
// A pending transaction commits in the first block whose commit_time is
// strictly greater than submit_time + propagation_delay.
class Ledger {
public:
    Ledger(sim::Time block_interval, sim::Time propagation_delay);

    sim::Time block_interval() const { return block_interval_; }
    sim::Time propagation_delay() const { return propagation_delay_; }

    // Rejects (returns false) when the transaction signature is invalid;
    // the chain and pending set are untouched in that case.
    // On success assigns tx.id and returns the id.
    std::optional<std::uint64_t> submit(Transaction tx, sim::Time now);

    // Commits every block with commit_time <= t; returns the new blocks.
    // Throws std::invalid_argument on time regression.
    std::vector<Block> advance_to(sim::Time t);

    sim::Time next_commit_time() const { return static_cast<sim::Time>(next_height_) * block_interval_; }
    sim::Time current_time() const { return current_time_; }

    const std::vector<Block>& blocks() const { return blocks_; }
    const std::vector<Transaction>& pending() const { return pending_; }

    bool is_committed(std::uint64_t tx_id) const { return positions_.count(tx_id) > 0; }
    TxPosition position_of(std::uint64_t tx_id) const;  // throws if uncommitted
    const Transaction& transaction(std::uint64_t tx_id) const;
    const Block& block_of(std::uint64_t tx_id) const;

    // Strict total order over committed transactions.
    bool happens_after(std::uint64_t a, std::uint64_t b) const;

    // Committed evidence transactions whose payload opens with be64(request_id).
    const std::vector<std::uint64_t>& evidence_for(std::uint64_t request_id) const;

    // Debug / golden-test chain dump: one line per committed transaction.
    void dump(std::ostream& os) const;

private:
    void commit_block();

    sim::Time block_interval_;
    sim::Time propagation_delay_;
    sim::Time current_time_ = 0;
    std::uint64_t next_height_ = 0;
    std::uint64_t next_tx_id_ = 1;
    std::vector<Block> blocks_;
    std::vector<Transaction> pending_;
    std::unordered_map<std::uint64_t, TxPosition> positions_;
    std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> by_request_;
};

}  // namespace epcert::ledger

#endif

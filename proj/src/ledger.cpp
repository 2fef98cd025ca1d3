#include "epcert/ledger.hpp"

#include <stdexcept>

namespace epcert::ledger {

const char* kind_name(TxKind k) {
    switch (k) {
        case TxKind::CertificationRequest: return "request";
        case TxKind::Acceptance: return "acceptance";
        case TxKind::ProofPublication: return "proof";
        case TxKind::ChallengeDisclosure: return "disclosure";
        case TxKind::Summarization: return "summarization";
    }
    return "unknown";
}

Bytes Transaction::signed_bytes() const {
    return encode_parts({Bytes{static_cast<std::uint8_t>(kind)}, payload});
}

Bytes Transaction::wire_bytes() const {
    return encode_parts(
        {be64(id), Bytes{static_cast<std::uint8_t>(kind)}, payload, submitter, signature.bytes});
}

Transaction make_transaction(const crypto::KeyPair& submitter, TxKind kind, Bytes payload) {
    Transaction tx;
    tx.kind = kind;
    tx.payload = std::move(payload);
    tx.submitter = submitter.public_key;
    tx.signature = crypto::sign(submitter.secret_key, tx.signed_bytes());
    return tx;
}

Ledger::Ledger(sim::Time block_interval, sim::Time propagation_delay)
    : block_interval_(block_interval), propagation_delay_(propagation_delay) {
    if (block_interval <= 0) throw std::invalid_argument("Ledger: block_interval must be > 0");
    if (propagation_delay < 0) throw std::invalid_argument("Ledger: propagation_delay must be >= 0");
}

std::optional<std::uint64_t> Ledger::submit(Transaction tx, sim::Time now) {
    if (!crypto::verify(tx.submitter, tx.signed_bytes(), tx.signature)) return std::nullopt;
    tx.id = next_tx_id_++;
    tx.submit_time = now;
    std::uint64_t id = tx.id;
    pending_.push_back(std::move(tx));
    return id;
}

std::vector<Block> Ledger::advance_to(sim::Time t) {
    if (t < current_time_) throw std::invalid_argument("Ledger::advance_to: time regression");
    std::vector<Block> fresh;
    while (next_commit_time() <= t) {
        commit_block();
        fresh.push_back(blocks_.back());
    }
    current_time_ = t;
    return fresh;
}

void Ledger::commit_block() {
    Block b;
    b.height = next_height_++;
    b.commit_time = static_cast<sim::Time>(b.height) * block_interval_;
    b.parent_hash = blocks_.empty() ? crypto::Digest{} : blocks_.back().hash;

    // Eligible: propagated strictly before this block is formed.
    std::vector<Transaction> keep;
    for (auto& tx : pending_) {
        if (tx.submit_time + propagation_delay_ < b.commit_time)
            b.transactions.push_back(std::move(tx));
        else
            keep.push_back(std::move(tx));
    }
    pending_ = std::move(keep);

    std::vector<Bytes> hash_parts{b.parent_hash.as_bytes(), be64(b.height)};
    for (std::size_t i = 0; i < b.transactions.size(); ++i) {
        const Transaction& tx = b.transactions[i];
        hash_parts.push_back(tx.wire_bytes());
        positions_[tx.id] = TxPosition{b.height, i};
        if (tx.kind != TxKind::CertificationRequest && tx.payload.size() >= 16) {
            // Evidence payloads open with a framed be64 request id.
            if (read_be64(tx.payload, 0) == 8) by_request_[read_be64(tx.payload, 8)].push_back(tx.id);
        }
    }
    b.hash = crypto::digest(hash_parts);
    blocks_.push_back(std::move(b));
}

TxPosition Ledger::position_of(std::uint64_t tx_id) const {
    auto it = positions_.find(tx_id);
    if (it == positions_.end()) throw std::out_of_range("Ledger: transaction not committed");
    return it->second;
}

const Transaction& Ledger::transaction(std::uint64_t tx_id) const {
    TxPosition pos = position_of(tx_id);
    return blocks_[pos.height].transactions[pos.index];
}

const Block& Ledger::block_of(std::uint64_t tx_id) const {
    return blocks_[position_of(tx_id).height];
}

bool Ledger::happens_after(std::uint64_t a, std::uint64_t b) const {
    TxPosition pa = position_of(a);
    TxPosition pb = position_of(b);
    if (pa.height != pb.height) return pa.height > pb.height;
    return pa.index > pb.index;
}

const std::vector<std::uint64_t>& Ledger::evidence_for(std::uint64_t request_id) const {
    static const std::vector<std::uint64_t> empty;
    auto it = by_request_.find(request_id);
    return it == by_request_.end() ? empty : it->second;
}

void Ledger::dump(std::ostream& os) const {
    for (const auto& b : blocks_)
        for (std::size_t i = 0; i < b.transactions.size(); ++i) {
            const Transaction& tx = b.transactions[i];
            os << b.height << ' ' << i << ' ' << kind_name(tx.kind) << ' '
               << hex_encode(tx.submitter) << ' ' << hex_encode(tx.payload) << '\n';
        }
}

}  // namespace epcert::ledger

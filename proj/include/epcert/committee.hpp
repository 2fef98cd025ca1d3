#ifndef EPCERT_COMMITTEE_HPP
#define EPCERT_COMMITTEE_HPP

#include <cstdint>
#include <set>
#include <vector>

#include "epcert/bytes.hpp"
#include "epcert/crypto.hpp"

namespace epcert::committee {

// The k sortition slots for one certification request. Slot i (1-based)
// holds subject id hash(i|R|b) mod N; duplicates are kept, so one subject
// may hold several slots.
struct Committee {
    std::vector<std::uint64_t> members;  // members[j] is the subject at slot j+1

    std::set<std::uint64_t> distinct_members() const {
        return {members.begin(), members.end()};
    }
    std::size_t duplicate_count() const { return members.size() - distinct_members().size(); }
};

// Deterministic sortition from public chain data: R is the request payload,
// b the hash of the block that committed it, N the certified population.
Committee select(const Bytes& request, const crypto::Digest& block_hash, std::uint64_t n,
                 std::uint64_t k);

// Slots (1-based) at which subject_id was drawn; empty when not a member.
std::vector<std::uint64_t> member_slots(const Bytes& request, const crypto::Digest& block_hash,
                                        std::uint64_t n, std::uint64_t k,
                                        std::uint64_t subject_id);

}  // namespace epcert::committee

#endif

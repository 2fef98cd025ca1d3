#include "epcert/committee.hpp"

#include <stdexcept>

namespace epcert::committee {

static std::uint64_t slot_member(const Bytes& request, const crypto::Digest& block_hash,
                                 std::uint64_t n, std::uint64_t slot) {
    crypto::Digest d = crypto::digest({be64(slot), request, block_hash.as_bytes()});
    return crypto::index_from_digest(d, n);
}

Committee select(const Bytes& request, const crypto::Digest& block_hash, std::uint64_t n,
                 std::uint64_t k) {
    if (n == 0) throw std::invalid_argument("committee::select: N must be >= 1");
    if (k == 0) throw std::invalid_argument("committee::select: k must be >= 1");
    Committee c;
    c.members.reserve(k);
    for (std::uint64_t i = 1; i <= k; ++i)
        c.members.push_back(slot_member(request, block_hash, n, i));
    return c;
}

std::vector<std::uint64_t> member_slots(const Bytes& request, const crypto::Digest& block_hash,
                                        std::uint64_t n, std::uint64_t k,
                                        std::uint64_t subject_id) {
    if (n == 0) throw std::invalid_argument("committee::member_slots: N must be >= 1");
    std::vector<std::uint64_t> slots;
    for (std::uint64_t i = 1; i <= k; ++i)
        if (slot_member(request, block_hash, n, i) == subject_id) slots.push_back(i);
    return slots;
}

}  // namespace epcert::committee

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>

#include "epcert/committee.hpp"

using namespace epcert;
using namespace epcert::committee;

namespace {

crypto::Digest fixture_block_hash() {
    return crypto::digest({to_bytes("block-fixture")});
}

}  // namespace

TEST_CASE("selection matches frozen vectors") {
    Bytes request = to_bytes("request-fixture");
    crypto::Digest bh = fixture_block_hash();
    CHECK(bh.hex() == "9236d000035c37eb9ae9aae5199d4c91cdc1627742fe49f7bebd952c749a757f");

    Committee c = select(request, bh, 1000, 10);
    CHECK(c.members ==
          std::vector<std::uint64_t>{135, 489, 0, 391, 363, 322, 367, 872, 334, 69});
    CHECK(c.duplicate_count() == 0);

    Committee small = select(request, bh, 7, 12);
    CHECK(small.members == std::vector<std::uint64_t>{2, 1, 5, 0, 0, 1, 2, 2, 1, 2, 4, 1});
    CHECK(small.distinct_members() == std::set<std::uint64_t>{0, 1, 2, 4, 5});
    CHECK(small.duplicate_count() == 7);
}

TEST_CASE("selection is deterministic and input-sensitive") {
    Bytes request = to_bytes("request-fixture");
    crypto::Digest bh = fixture_block_hash();
    CHECK(select(request, bh, 100, 5).members == select(request, bh, 100, 5).members);
    CHECK(select(to_bytes("other"), bh, 100, 5).members != select(request, bh, 100, 5).members);
    crypto::Digest other = crypto::digest({to_bytes("other-block")});
    CHECK(select(request, other, 100, 5).members != select(request, bh, 100, 5).members);
}

TEST_CASE("population of one always fills every slot") {
    Committee c = select(to_bytes("r"), fixture_block_hash(), 1, 8);
    for (auto m : c.members) CHECK(m == 0);
    CHECK(c.distinct_members().size() == 1);
    CHECK(c.duplicate_count() == 7);
}

TEST_CASE("invalid arguments throw") {
    CHECK_THROWS_AS(select(to_bytes("r"), fixture_block_hash(), 0, 3), std::invalid_argument);
    CHECK_THROWS_AS(select(to_bytes("r"), fixture_block_hash(), 3, 0), std::invalid_argument);
    CHECK_THROWS_AS(member_slots(to_bytes("r"), fixture_block_hash(), 0, 3, 0),
                    std::invalid_argument);
}

TEST_CASE("member_slots agrees with select") {
    crypto::Digest bh = fixture_block_hash();
    for (std::uint64_t n : {1ull, 2ull, 7ull, 19ull, 50ull}) {
        for (std::uint64_t k : {1ull, 3ull, 10ull}) {
            Bytes request = to_bytes("req-" + std::to_string(n) + "-" + std::to_string(k));
            Committee c = select(request, bh, n, k);
            std::size_t covered = 0;
            for (std::uint64_t subject = 0; subject < n; ++subject) {
                auto slots = member_slots(request, bh, n, k, subject);
                covered += slots.size();
                for (auto slot : slots) {
                    REQUIRE(slot >= 1);
                    REQUIRE(slot <= k);
                    CHECK(c.members[slot - 1] == subject);
                }
            }
            CHECK(covered == k);  // every slot belongs to exactly one subject
            CHECK(member_slots(request, bh, n, k, n + 5).empty());
        }
    }
}

TEST_CASE("slot draws are uniform across the population") {
    const std::uint64_t n = 97;
    const int samples = 20000;
    crypto::Digest bh = fixture_block_hash();
    std::vector<std::uint64_t> counts(n, 0);
    for (int i = 0; i < samples; ++i) {
        Committee c = select(be64(static_cast<std::uint64_t>(i)), bh, n, 1);
        ++counts[c.members[0]];
    }
    double expected = static_cast<double>(samples) / static_cast<double>(n);
    double chi2 = 0;
    for (auto c : counts) {
        double diff = static_cast<double>(c) - expected;
        chi2 += diff * diff / expected;
    }
    boost::math::chi_squared dist(static_cast<double>(n - 1));
    CHECK(chi2 < boost::math::quantile(dist, 0.999));
}

TEST_CASE("duplicate frequency follows the birthday bound") {
    // With k = 10 slots over N = 1000 the expected number of colliding pairs
    // is C(k,2)/N = 0.045, so duplicates per committee average about 0.045.
    const std::uint64_t n = 1000, k = 10;
    const int samples = 5000;
    crypto::Digest bh = fixture_block_hash();
    double dup_total = 0;
    for (int i = 0; i < samples; ++i)
        dup_total +=
            static_cast<double>(select(be64(static_cast<std::uint64_t>(i)), bh, n, k)
                                    .duplicate_count());
    double mean = dup_total / samples;
    double expected = static_cast<double>(k * (k - 1) / 2) / static_cast<double>(n);
    double sigma = std::sqrt(expected / samples);  // near-Poisson pair counts
    CHECK(std::abs(mean - expected) < 4 * sigma);
}

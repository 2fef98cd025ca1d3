#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "epcert/channels.hpp"

using namespace epcert;
using namespace epcert::channels;

namespace {

EndpointAddress ep(const std::string& name, EndpointKind kind = EndpointKind::email) {
    return EndpointAddress{kind, name};
}

}  // namespace

TEST_CASE("presets cover the supported technologies") {
    for (const char* name :
         {"phone_sms", "phone_ivr", "postal", "email", "ip", "web", "dns", "bank", "ideal"})
        CHECK_NOTHROW(preset(name));
    CHECK_THROWS_AS(preset("carrier-pigeon"), std::invalid_argument);
    CHECK(preset("ideal").per_message_time == 1.0);
    CHECK(preset("ideal").delivery_delay == 2.5);
    CHECK_FALSE(preset("ideal").spoofable);
    CHECK_FALSE(preset("ideal").eavesdroppable);
    CHECK(preset("email").spoofable);
    CHECK(preset("email").eavesdroppable);
    CHECK(preset("dns").spoofable == false);
    CHECK(preset("phone_sms").cost_per_message == 0.05);
}

TEST_CASE("endpoint address codec round trips") {
    EndpointAddress a = ep("alice@example.org");
    Bytes enc = a.encode();
    auto parts = decode_parts(enc);
    REQUIRE(parts.size() == 2);
    CHECK(EndpointAddress::decode(parts[0][0], parts[1]) == a);
    CHECK_THROWS_AS(EndpointAddress::decode(0, to_bytes("x")), std::invalid_argument);
    CHECK_THROWS_AS(EndpointAddress::decode(99, to_bytes("x")), std::invalid_argument);
}

TEST_CASE("messages to one endpoint serialize") {
    Channel ch(ChannelProfile{1, 2, false, false, 0});
    EndpointAddress e = ep("target");
    CHECK(ch.send(ep("a"), e, to_bytes("1"), 0) == 3);
    CHECK(ch.send(ep("b"), e, to_bytes("2"), 0) == 4);
    CHECK(ch.send(ep("c"), e, to_bytes("3"), 0) == 5);
    CHECK(ch.trace().size() == 3);
    CHECK(ch.messages_through(e) == 3);
    CHECK(ch.messages_through(ep("a")) == 1);
}

TEST_CASE("the sender endpoint is occupied too") {
    Channel ch(ChannelProfile{2, 0.5, false, false, 0});
    EndpointAddress s = ep("sender");
    CHECK(ch.send(s, ep("x"), to_bytes("1"), 0) == 2.5);
    CHECK(ch.send(s, ep("y"), to_bytes("2"), 0) == 4.5);  // waits for the first transmission
    CHECK(ch.send(ep("z"), ep("w"), to_bytes("3"), 0) == 2.5);  // unrelated endpoints don't
}

TEST_CASE("transmission starts no earlier than now") {
    Channel ch(ChannelProfile{1, 0, false, false, 0});
    EndpointAddress e = ep("target");
    ch.send(ep("a"), e, to_bytes("1"), 0);
    CHECK(ch.send(ep("b"), e, to_bytes("2"), 10) == 11);
}

TEST_CASE("spoofing requires a spoofable profile") {
    Channel honest(ChannelProfile{1, 1, false, false, 0});
    CHECK_FALSE(honest.attempt_spoof(ep("claimed"), ep("victim"), to_bytes("x"), 0));
    CHECK(honest.trace().empty());

    Channel weak(ChannelProfile{1, 1, true, false, 0});
    auto delivered = weak.attempt_spoof(ep("claimed"), ep("victim"), to_bytes("x"), 0);
    REQUIRE(delivered);
    CHECK(*delivered == 2);
    REQUIRE(weak.trace().size() == 1);
    CHECK(weak.trace()[0].spoofed);
    CHECK(weak.trace()[0].from == ep("claimed"));
    // The claimed source endpoint was never actually used.
    CHECK(weak.send(ep("claimed"), ep("elsewhere"), to_bytes("y"), 0) == 2);
    CHECK(weak.messages_through(ep("claimed")) == 1);
    CHECK(weak.messages_through(ep("victim")) == 1);
}

TEST_CASE("eavesdropping is gated and passive") {
    Channel closed(ChannelProfile{1, 1, false, false, 0});
    CHECK_FALSE(closed.attempt_eavesdrop(ep("victim"), [](const ChannelMessage&) {}));

    Channel open(ChannelProfile{1, 1, false, true, 0});
    std::vector<ChannelMessage> captured;
    REQUIRE(open.attempt_eavesdrop(ep("victim"),
                                   [&](const ChannelMessage& m) { captured.push_back(m); }));
    sim::Time without_tap = Channel(ChannelProfile{1, 1, false, true, 0})
                                .send(ep("a"), ep("victim"), to_bytes("x"), 0);
    CHECK(open.send(ep("a"), ep("victim"), to_bytes("x"), 0) == without_tap);
    open.send(ep("a"), ep("other"), to_bytes("y"), 0);
    REQUIRE(captured.size() == 1);  // only traffic to the tapped endpoint
    CHECK(captured[0].payload == to_bytes("x"));
    CHECK(captured[0].delivered_at == without_tap);
    CHECK(open.trace().size() == 2);
}

TEST_CASE("cost accounting is per message") {
    Channel ch(ChannelProfile{1, 1, false, false, 0.25});
    ch.send(ep("a"), ep("b"), to_bytes("1"), 0);
    ch.send(ep("a"), ep("b"), to_bytes("2"), 0);
    ch.send(ep("b"), ep("a"), to_bytes("3"), 0);
    CHECK(ch.total_cost() == doctest::Approx(0.75));
    CHECK(ch.cost_per_message() == 0.25);
}

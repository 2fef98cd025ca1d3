#ifndef EPCERT_CHANNELS_HPP
#define EPCERT_CHANNELS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "epcert/bytes.hpp"
#include "epcert/sim.hpp"

namespace epcert::channels {

enum class EndpointKind : std::uint8_t {
    phone_sms = 1,
    phone_ivr,
    postal,
    email,
    ip,
    web,
    dns,
    bank,
};

struct EndpointAddress {
    EndpointKind kind = EndpointKind::email;
    std::string address;

    auto operator<=>(const EndpointAddress&) const = default;
    Bytes encode() const;
    static EndpointAddress decode(std::uint8_t kind_byte, const Bytes& address);
};

struct ChannelProfile {
    sim::Time per_message_time = 1;  // W: endpoint occupancy per message
    sim::Time delivery_delay = 0;    // e: in-flight time after transmission
    bool spoofable = false;
    bool eavesdroppable = false;
    double cost_per_message = 0;
};

// Illustrative presets for the supported endpoint technologies. The
// spoof/eavesdrop flags follow the qualitative attack-difficulty ratings
// (difficulty High maps to not-possible in simulation); timings and costs
// are config defaults only.
const std::map<std::string, ChannelProfile>& presets();
ChannelProfile preset(const std::string& name);  // throws on unknown name

struct ChannelMessage {
    EndpointAddress from;
    EndpointAddress to;
    Bytes payload;
    sim::Time sent_at = 0;
    sim::Time delivered_at = 0;
    bool spoofed = false;
};

// Simulated endpoint technology. A message occupies both its source and
// destination endpoints for W; messages sharing an endpoint serialize, so
// k back-to-back messages through one endpoint finish at e + kW after the
// first transmission start.
class Channel {
public:
    explicit Channel(ChannelProfile profile) : profile_(profile) {}

    const ChannelProfile& profile() const { return profile_; }

    // Returns the delivery time; the caller schedules the delivery event.
    // Eavesdroppers subscribed to `to` receive a copy of the record.
    sim::Time send(const EndpointAddress& from, const EndpointAddress& to, Bytes payload,
                   sim::Time now);

    // Succeeds only on a spoofable profile. The spoofed message occupies the
    // destination endpoint but never the claimed source, and is delivered
    // with from == claimed_from and spoofed == true.
    std::optional<sim::Time> attempt_spoof(const EndpointAddress& claimed_from,
                                           const EndpointAddress& to, Bytes payload,
                                           sim::Time now);

    using EavesdropHandler = std::function<void(const ChannelMessage&)>;

    // Succeeds only on an eavesdroppable profile; the handler then sees a
    // copy of every later message addressed to target. Purely passive.
    bool attempt_eavesdrop(const EndpointAddress& target, EavesdropHandler handler);

    const std::vector<ChannelMessage>& trace() const { return trace_; }
    double total_cost() const { return cost_per_message() * static_cast<double>(trace_.size()); }
    double cost_per_message() const { return profile_.cost_per_message; }

    std::size_t messages_through(const EndpointAddress& endpoint) const;

    void dump_trace(std::ostream& os) const;

private:
    sim::Time deliver(ChannelMessage msg, const std::vector<const EndpointAddress*>& occupied,
                      sim::Time now);

    ChannelProfile profile_;
    std::map<EndpointAddress, sim::Time> busy_until_;
    std::vector<ChannelMessage> trace_;
    std::multimap<EndpointAddress, EavesdropHandler> taps_;
};

}  // namespace epcert::channels

#endif

#include "epcert/channels.hpp"

#include <algorithm>
#include <stdexcept>

namespace epcert::channels {

Bytes EndpointAddress::encode() const {
    return encode_parts({Bytes{static_cast<std::uint8_t>(kind)}, to_bytes(address)});
}

EndpointAddress EndpointAddress::decode(std::uint8_t kind_byte, const Bytes& address) {
    if (kind_byte < 1 || kind_byte > static_cast<std::uint8_t>(EndpointKind::bank))
        throw std::invalid_argument("EndpointAddress: unknown kind");
    return EndpointAddress{static_cast<EndpointKind>(kind_byte), to_string(address)};
}

const std::map<std::string, ChannelProfile>& presets() {
    static const std::map<std::string, ChannelProfile> table = {
        // {W, e, spoofable, eavesdroppable, cost}
        {"phone_sms", {1.0, 2.0, false, true, 0.05}},
        {"phone_ivr", {30.0, 5.0, false, true, 0.10}},
        {"postal", {60.0, 250000.0, true, true, 1.20}},
        {"email", {0.5, 1.0, true, true, 0.0}},
        {"ip", {0.5, 0.5, true, true, 0.0}},
        {"web", {0.5, 0.5, false, true, 0.0}},
        {"dns", {0.5, 0.5, false, false, 0.0}},
        {"bank", {30.0, 7200.0, false, false, 0.50}},
        {"ideal", {1.0, 2.5, false, false, 0.0}},
    };
    return table;
}

ChannelProfile preset(const std::string& name) {
    auto it = presets().find(name);
    if (it == presets().end()) throw std::invalid_argument("unknown channel preset: " + name);
    return it->second;
}

sim::Time Channel::deliver(ChannelMessage msg, const std::vector<const EndpointAddress*>& occupied,
                           sim::Time now) {
    sim::Time start = now;
    for (const auto* ep : occupied) {
        auto it = busy_until_.find(*ep);
        if (it != busy_until_.end()) start = std::max(start, it->second);
    }
    sim::Time busy_end = start + profile_.per_message_time;
    for (const auto* ep : occupied) busy_until_[*ep] = busy_end;

    msg.sent_at = now;
    msg.delivered_at = busy_end + profile_.delivery_delay;
    trace_.push_back(msg);

    auto [lo, hi] = taps_.equal_range(msg.to);
    for (auto it = lo; it != hi; ++it) it->second(trace_.back());
    return msg.delivered_at;
}

sim::Time Channel::send(const EndpointAddress& from, const EndpointAddress& to, Bytes payload,
                        sim::Time now) {
    ChannelMessage msg{from, to, std::move(payload)};
    return deliver(std::move(msg), {&from, &to}, now);
}

std::optional<sim::Time> Channel::attempt_spoof(const EndpointAddress& claimed_from,
                                                const EndpointAddress& to, Bytes payload,
                                                sim::Time now) {
    if (!profile_.spoofable) return std::nullopt;
    ChannelMessage msg{claimed_from, to, std::move(payload)};
    msg.spoofed = true;
    return deliver(std::move(msg), {&to}, now);
}

bool Channel::attempt_eavesdrop(const EndpointAddress& target, EavesdropHandler handler) {
    if (!profile_.eavesdroppable) return false;
    taps_.emplace(target, std::move(handler));
    return true;
}

std::size_t Channel::messages_through(const EndpointAddress& endpoint) const {
    return static_cast<std::size_t>(
        std::count_if(trace_.begin(), trace_.end(), [&](const ChannelMessage& m) {
            // A spoofed message never actually traverses the claimed source.
            return m.to == endpoint || (m.from == endpoint && !m.spoofed);
        }));
}

void Channel::dump_trace(std::ostream& os) const {
    for (const auto& m : trace_)
        os << m.sent_at << ' ' << m.delivered_at << ' ' << m.from.address << ' ' << m.to.address
           << ' ' << m.payload.size() << ' ' << (m.spoofed ? 1 : 0) << '\n';
}

}  // namespace epcert::channels

#ifndef EPCERT_SIM_HPP
#define EPCERT_SIM_HPP

#include <functional>
#include <limits>
#include <queue>
#include <vector>

namespace epcert::sim {

using Time = double;
inline constexpr Time kNever = std::numeric_limits<Time>::infinity();

// Deterministic event queue: events fire in (time, insertion order).
class EventQueue {
public:
    void schedule(Time t, std::function<void(Time)> fn) {
        heap_.push(Entry{t, next_seq_++, std::move(fn)});
    }

    bool empty() const { return heap_.empty(); }
    Time next_time() const { return heap_.empty() ? kNever : heap_.top().time; }

    // Fires the earliest event. Precondition: !empty().
    void pop_and_run() {
        Entry e = heap_.top();
        heap_.pop();
        e.fn(e.time);
    }

    void clear() { heap_ = {}; }

private:
    struct Entry {
        Time time;
        std::uint64_t seq;
        std::function<void(Time)> fn;
        bool operator>(const Entry& o) const {
            if (time != o.time) return time > o.time;
            return seq > o.seq;
        }
    };
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap_;
    std::uint64_t next_seq_ = 0;
};

}  // namespace epcert::sim

#endif

/**
 * @file entities.hpp
 * @brief Vertex state machines: caller regions, PSAPs and responders.
 *
 * A step handler sees only its own state, the inbox snapshot gathered in the
 * communication phase, and its own random stream. Everything it wants other
 * vertices to see goes to the Outbox and becomes visible one step later.
 */
#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "escs/arrivals.hpp"
#include "escs/config.hpp"
#include "escs/graph.hpp"
#include "escs/records.hpp"
#include "escs/rng.hpp"

namespace escs {

enum class MessageKind : std::uint8_t {
    Call,           ///< caller region -> PSAP
    BusySignal,     ///< PSAP -> caller region (reverse channel): call dropped
    AbandonNotice,  ///< PSAP -> caller region (reverse channel): caller hung up
    Dispatch,       ///< PSAP -> responder
    UnitAvailable,  ///< responder -> PSAP
};

struct Message {
    MessageKind kind = MessageKind::Call;
    VertexId src = 0;
    VertexId dst = 0;
    std::int64_t sent_step = 0;
    std::size_t edge = 0;  ///< edge travelled; stamped on delivery
    CallEvent call;        ///< the call concerned (for UnitAvailable: the call just cleared)

    friend bool operator==(const Message&, const Message&) = default;
};

/// Direction on an edge: along it, or back from its destination to its source.
enum class Lane : std::uint8_t { Forward, Reverse };

struct Outgoing {
    std::size_t edge = 0;
    Lane lane = Lane::Forward;
    Message message;
};

using Outbox = std::vector<Outgoing>;

struct StepContext {
    std::int64_t step = 0;
    const SimulationConfig* config = nullptr;

    [[nodiscard]] double now() const { return static_cast<double>(step) * config->step_duration; }
};

/// First step whose start time is at or after `time`.
std::int64_t due_step(std::int64_t time, double step_duration);

// ---------------------------------------------------------------------------

struct CallerRegionState {
    struct Pending {
        std::int64_t due_step = 0;
        CallEvent call;
    };

    VertexId id = 0;
    std::size_t call_edge = 0;
    VertexId psap = 0;
    std::vector<Pending> pending;  ///< min-heap on (due_step, call id)
    std::vector<CallId> redialed;  ///< attempts that triggered a redial

    void enqueue(const CallEvent& call, std::int64_t due);
    [[nodiscard]] const Pending* next() const { return pending.empty() ? nullptr : &pending.front(); }
};

/// Handles busy-signal notices (Bernoulli redial into the next step), then
/// routes at most one due call to the PSAP.
void caller_region_step(CallerRegionState& state, std::span<const Message> inbox,
                        const StepContext& ctx, Rng& rng, Outbox& out);

// ---------------------------------------------------------------------------

struct DispatchTarget {
    VertexId responder = 0;
    GeoPoint location;
    CapabilitySet capabilities;
    std::size_t edge = 0;
};

struct PsapState {
    struct Queued {
        CallEvent call;
        std::int64_t arrival_step = 0;
        std::size_t edge = 0;  ///< CALL edge it came in on
    };
    struct Server {
        bool busy = false;
        double busy_until = 0.0;
        CallEvent call;
        CallRecord record;  ///< completed when the call finishes
    };

    VertexId id = 0;
    int trunks = 0;
    std::vector<Server> servers;
    std::deque<Queued> queue;
    std::vector<DispatchTarget> targets;  ///< sorted by responder id
    std::vector<CallRecord> records;
    std::uint64_t status_messages = 0;

    [[nodiscard]] int busy_servers() const;
    [[nodiscard]] int in_system() const { return busy_servers() + static_cast<int>(queue.size()); }

    /// Busy signal for a call that found no free trunk (or no inbox room).
    void reject(const Message& call, std::size_t edge, const StepContext& ctx, Outbox& out);

    /// Nearest capable target; lowest responder id on ties.
    [[nodiscard]] const DispatchTarget& select_target(GeoPoint incident, CallType type) const;
};

/// (a) finish calls and dispatch, (b) admit arrivals while trunks remain,
/// (c) drop callers whose patience ran out, (d) hand queued calls to free servers.
void psap_step(PsapState& state, std::span<const Message> inbox, const StepContext& ctx,
               Outbox& out);

// ---------------------------------------------------------------------------

struct ResponderState {
    struct Unit {
        bool busy = false;
        double busy_until = 0.0;
        VertexId psap = 0;
        CallEvent call;
    };
    struct Waiting {
        Message dispatch;
        std::int64_t received_step = 0;
    };

    VertexId id = 0;
    GeoPoint location;
    std::vector<Unit> units;
    std::deque<Waiting> queue;
    std::vector<DispatchRecord> records;
    std::vector<std::pair<VertexId, std::size_t>> status_edges;  ///< PSAP id -> STATUS edge

    [[nodiscard]] int busy_units() const;
};

/// Releases finished units (reporting availability), queues new dispatches,
/// and assigns queued dispatches FIFO to free units for travel + on-scene time.
void responder_step(ResponderState& state, std::span<const Message> inbox, const StepContext& ctx,
                    Outbox& out);

}  // namespace escs

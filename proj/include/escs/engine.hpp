/**
 * @file engine.hpp
 * @brief Discrete-time kernel running the two-phase vertex loop.
 *
 * Every step is a communication phase (each vertex pulls the messages that
 * were put on its channels during the previous step) followed by a
 * transition phase (each vertex runs its handler once on its own state and
 * inbox). Every channel lane has a single writer and a single reader and is
 * double-buffered, so the end-of-step state does not depend on the order in
 * which vertices are visited.
 *
 * Caller regions receive their calls one epoch at a time, at epoch boundaries.
 */
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "escs/arrivals.hpp"
#include "escs/config.hpp"
#include "escs/entities.hpp"
#include "escs/graph.hpp"
#include "escs/records.hpp"
#include "escs/rng.hpp"

namespace escs {

class Engine {
public:
    /// Throws escs::Error if an event names a vertex that is not a caller region.
    Engine(const EscsGraph& graph, std::span<const CallEvent> events, SimulationConfig config);

    /// Visit vertices in `order` (a permutation of dense indices) in both phases.
    void set_processing_order(std::vector<std::size_t> order);

    /// One full step: epoch load, lane flip, communication, transition, utilization sample.
    void step();
    void run();
    [[nodiscard]] bool done() const { return step_ >= config_.duration_steps; }
    [[nodiscard]] std::int64_t current_step() const { return step_; }

    // The phases are exposed for tests; step() calls them in order.
    void begin_step();
    void communication_phase();
    void transition_phase();
    void end_step();

    /// Canonical dump of every vertex state, lane and record.
    [[nodiscard]] std::string state_digest() const;

    [[nodiscard]] SimulationResult result() const;

    [[nodiscard]] const CallerRegionState& caller_region(VertexId id) const;
    [[nodiscard]] const PsapState& psap(VertexId id) const;
    [[nodiscard]] const ResponderState& responder(VertexId id) const;
    [[nodiscard]] std::span<const Message> inbox(VertexId id) const;
    /// Messages written during the current step, not yet visible to readers.
    [[nodiscard]] std::span<const Message> staged(std::size_t edge, Lane lane) const;

private:
    struct Channel {
        std::vector<Message> visible;
        std::vector<Message> staged;
    };
    struct Slot {
        VertexKind kind;
        std::size_t state;  ///< index into the per-kind state vector
    };

    Channel& channel(std::size_t edge, Lane lane) {
        return lane == Lane::Forward ? forward_[edge] : reverse_[edge];
    }
    void load_epoch();
    void route(Outbox& out);
    void pull(std::size_t v);
    std::uint64_t in_system() const;

    const EscsGraph* graph_;
    SimulationConfig config_;
    std::int64_t step_ = 0;

    std::vector<Slot> slots_;
    std::vector<CallerRegionState> regions_;
    std::vector<PsapState> psaps_;
    std::vector<ResponderState> responders_;
    std::vector<Rng> rngs_;  ///< per dense vertex index
    std::vector<std::vector<Message>> inbox_;
    std::vector<char> mail_;  ///< vertex has something to pull this step
    std::vector<Channel> forward_;
    std::vector<Channel> reverse_;
    std::vector<std::pair<std::size_t, Lane>> dirty_;
    std::vector<std::size_t> order_;
    Outbox scratch_;

    std::vector<std::vector<CallEvent>> epoch_source_;  ///< per region state, sorted by due step
    std::vector<std::size_t> epoch_cursor_;
    std::uint64_t injected_ = 0;

    std::vector<UtilizationSeries> utilization_;
    std::vector<std::size_t> utilization_vertex_;  ///< dense index per series
};

/// Runs the whole horizon and returns the records.
SimulationResult run(const EscsGraph& graph, std::span<const CallEvent> events,
                     const SimulationConfig& config);

}  // namespace escs

#include <gtest/gtest.h>

#include "escs/entities.hpp"
#include "escs/models.hpp"
#include "fixtures.hpp"

using namespace escs;
using namespace escs::testing;

namespace {

Message call_message(const CallEvent& c, VertexId src, VertexId dst, std::size_t edge, std::int64_t step) {
    return Message{MessageKind::Call, src, dst, step, edge, c};
}

PsapState make_psap(int servers, int trunks) {
    PsapState p;
    p.id = 1;
    p.trunks = trunks;
    p.servers.resize(static_cast<std::size_t>(servers));
    p.targets = {{2, {0, 0}, {CallType::Law}, 1},
                 {3, {100, 0}, {CallType::Fire, CallType::Ems}, 2},
                 {4, {50, 0}, {CallType::Law}, 3}};
    return p;
}

}  // namespace

TEST(CallerRegionTest, EmitsAtMostOneDueCallPerStep) {
    SimulationConfig cfg;
    CallerRegionState s;
    s.id = 0;
    s.call_edge = 7;
    s.psap = 1;
    for (CallId i : {3, 1, 2}) s.enqueue(make_call(i, 0, 4, 10, 10), 4);
    s.enqueue(make_call(9, 0, 2, 10, 10), 2);
    Rng rng = make_stream(1, 0);
    std::vector<CallId> sent;
    for (std::int64_t step = 0; step < 10; ++step) {
        Outbox out;
        caller_region_step(s, {}, {step, &cfg}, rng, out);
        ASSERT_LE(out.size(), 1u);
        if (!out.empty()) {
            EXPECT_EQ(out[0].edge, 7u);
            EXPECT_EQ(out[0].lane, Lane::Forward);
            EXPECT_EQ(out[0].message.dst, 1);
            EXPECT_EQ(out[0].message.sent_step, step);
            sent.push_back(out[0].message.call.id);
        } else {
            EXPECT_TRUE(step < 2 || step == 3 || step > 6) << step;
        }
    }
    EXPECT_EQ(sent, (std::vector<CallId>{9, 1, 2, 3}));
}

TEST(CallerRegionTest, BusySignalRedialsNextStepKeepingOriginalId) {
    SimulationConfig cfg;
    cfg.redial_probability = 1.0;
    CallerRegionState s;
    s.id = 0;
    s.psap = 1;
    Rng rng = make_stream(1, 0);
    const CallEvent c = make_call(5, 0, 3, 10, 10);
    const Message busy{MessageKind::BusySignal, 1, 0, 4, 0, c};
    Outbox out;
    caller_region_step(s, std::span(&busy, 1), {5, &cfg}, rng, out);
    EXPECT_TRUE(out.empty());
    ASSERT_EQ(s.redialed, (std::vector<CallId>{5}));
    caller_region_step(s, {}, {6, &cfg}, rng, out);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].message.call.id, 5 + kRedialIdStride);
    EXPECT_EQ(out[0].message.call.original_id, 5u);
    EXPECT_EQ(out[0].message.call.time, 6);
}

TEST(CallerRegionTest, ZeroProbabilityNeverRedials) {
    SimulationConfig cfg;
    cfg.redial_probability = 0.0;
    CallerRegionState s;
    Rng rng = make_stream(1, 0);
    const Message busy{MessageKind::BusySignal, 1, 0, 4, 0, make_call(5, 0, 3, 10, 10)};
    for (int i = 0; i < 1000; ++i) {
        Outbox out;
        caller_region_step(s, std::span(&busy, 1), {i, &cfg}, rng, out);
    }
    EXPECT_TRUE(s.redialed.empty());
    EXPECT_TRUE(s.pending.empty());
}

TEST(PsapTest, AdmitsUpToTrunksAndBlocksTheRest) {
    SimulationConfig cfg;
    PsapState p = make_psap(1, 2);
    std::vector<Message> inbox;
    for (CallId i = 0; i < 4; ++i) inbox.push_back(call_message(make_call(i, 0, 0, 100, 100), 0, 1, 0, 0));
    Outbox out;
    psap_step(p, inbox, {1, &cfg}, out);
    EXPECT_EQ(p.busy_servers(), 1);
    EXPECT_EQ(p.queue.size(), 1u);
    ASSERT_EQ(out.size(), 2u);
    for (const auto& o : out) {
        EXPECT_EQ(o.lane, Lane::Reverse);
        EXPECT_EQ(o.message.kind, MessageKind::BusySignal);
        EXPECT_EQ(o.message.dst, 0);
    }
    ASSERT_EQ(p.records.size(), 2u);
    EXPECT_EQ(p.records[0].disposition, Disposition::Blocked);
    EXPECT_EQ(p.records[0].id, 2u);
    EXPECT_EQ(p.records[1].id, 3u);
}

TEST(PsapTest, ImpatientCallerAbandonsWithinOneStepOfPatience) {
    SimulationConfig cfg;
    PsapState p = make_psap(1, 3);
    std::vector<Message> inbox = {call_message(make_call(0, 0, 0, 1000, 1000), 0, 1, 0, 0),
                                  call_message(make_call(1, 0, 0, 50, 5.0), 0, 1, 0, 0)};
    Outbox out;
    psap_step(p, inbox, {0, &cfg}, out);
    for (std::int64_t step = 1; step <= 5; ++step) {
        psap_step(p, {}, {step, &cfg}, out);
        if (step < 5) {
            EXPECT_TRUE(p.records.empty());
        }
    }
    ASSERT_EQ(p.records.size(), 1u);
    const CallRecord& r = p.records[0];
    EXPECT_EQ(r.disposition, Disposition::Abandoned);
    EXPECT_GE(r.wait, 5.0);
    EXPECT_LT(r.wait, 6.0);
    EXPECT_TRUE(p.queue.empty());
    EXPECT_TRUE(out.empty());  // no notice unless abandoners redial
}

TEST(PsapTest, AbandonmentCheckedBeforeAssignment) {
    SimulationConfig cfg;
    PsapState p = make_psap(1, 3);
    Outbox out;
    std::vector<Message> inbox = {call_message(make_call(0, 0, 0, 3, 1000), 0, 1, 0, 0),
                                  call_message(make_call(1, 0, 0, 50, 3.0), 0, 1, 0, 0)};
    psap_step(p, inbox, {0, &cfg}, out);
    for (std::int64_t step = 1; step <= 3; ++step) psap_step(p, {}, {step, &cfg}, out);
    // server frees at step 3, the same step the waiting caller's patience runs out
    ASSERT_EQ(p.records.size(), 2u);
    EXPECT_EQ(p.records[0].disposition, Disposition::Served);
    EXPECT_EQ(p.records[1].disposition, Disposition::Abandoned);
    EXPECT_EQ(p.busy_servers(), 0);
}

TEST(PsapTest, RedialAfterAbandonSendsNotice) {
    SimulationConfig cfg;
    cfg.redial_after_abandon = true;
    PsapState p = make_psap(1, 3);
    Outbox out;
    std::vector<Message> inbox = {call_message(make_call(0, 0, 0, 1000, 1000), 0, 1, 4, 0),
                                  call_message(make_call(1, 0, 0, 50, 1.0), 0, 1, 4, 0)};
    psap_step(p, inbox, {0, &cfg}, out);
    psap_step(p, {}, {1, &cfg}, out);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].message.kind, MessageKind::AbandonNotice);
    EXPECT_EQ(out[0].edge, 4u);
    EXPECT_EQ(out[0].lane, Lane::Reverse);
}

TEST(PsapTest, DisabledAbandonmentKeepsEveryone) {
    SimulationConfig cfg;
    cfg.abandonment = false;
    PsapState p = make_psap(1, 3);
    Outbox out;
    std::vector<Message> inbox = {call_message(make_call(0, 0, 0, 20, 1000), 0, 1, 0, 0),
                                  call_message(make_call(1, 0, 0, 50, 1.0), 0, 1, 0, 0)};
    psap_step(p, inbox, {0, &cfg}, out);
    for (std::int64_t step = 1; step <= 20; ++step) psap_step(p, {}, {step, &cfg}, out);
    ASSERT_EQ(p.records.size(), 1u);
    EXPECT_EQ(p.records[0].disposition, Disposition::Served);
    EXPECT_EQ(p.busy_servers(), 1);
    EXPECT_EQ(p.servers[0].record.wait, 20.0);
}

TEST(PsapTest, FifoServiceAndDispatchToNearestCapable) {
    SimulationConfig cfg;
    PsapState p = make_psap(1, 5);
    Outbox out;
    std::vector<Message> inbox;
    inbox.push_back(call_message(make_call(10, 0, 0, 2, 100, CallType::Law, {40, 0}), 0, 1, 0, 0));
    inbox.push_back(call_message(make_call(11, 0, 0, 2, 100, CallType::Ems, {0, 0}), 0, 1, 0, 0));
    psap_step(p, inbox, {0, &cfg}, out);
    EXPECT_EQ(p.servers[0].call.id, 10u);
    for (std::int64_t step = 1; step <= 4; ++step) psap_step(p, {}, {step, &cfg}, out);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].message.kind, MessageKind::Dispatch);
    EXPECT_EQ(out[0].message.dst, 4);  // LAW at x=40: responder 4 (x=50) beats 2 (x=0)
    EXPECT_EQ(out[0].edge, 3u);
    EXPECT_EQ(out[1].message.dst, 3);  // EMS only handled by 3
    ASSERT_EQ(p.records.size(), 2u);
    EXPECT_EQ(p.records[0].answer_step, 0);
    EXPECT_EQ(p.records[0].completion_step, 2);
    EXPECT_EQ(p.records[1].answer_step, 2);
    EXPECT_EQ(p.records[1].wait, 2.0);
    EXPECT_EQ(p.records[1].completion_step, 4);
    EXPECT_EQ(p.records[1].responder, 3);
}

TEST(ResponderTest, BusyForTravelPlusOnScene) {
    SimulationConfig cfg;
    cfg.responder_speed = 10.0;
    ResponderState r;
    r.id = 2;
    r.location = {0, 0};
    r.units.resize(1);
    r.status_edges = {{1, 6}};
    CallEvent c = make_call(3, 0, 0, 5, 5, CallType::Law, {300, 400});
    c.on_scene_duration = 100.0;
    const Message dispatch{MessageKind::Dispatch, 1, 2, 10, 5, c};
    Outbox out;
    responder_step(r, std::span(&dispatch, 1), {11, &cfg}, out);
    ASSERT_EQ(r.records.size(), 1u);
    const DispatchRecord& d = r.records[0];
    EXPECT_DOUBLE_EQ(d.travel_time, driving_time({0, 0}, {300, 400}, 10.0));
    EXPECT_DOUBLE_EQ(d.busy_time(), 50.0 + 100.0);
    EXPECT_DOUBLE_EQ(d.on_scene_time, 11.0 + 50.0);
    EXPECT_EQ(r.busy_units(), 1);

    // a second dispatch waits for the unit
    const Message second{MessageKind::Dispatch, 1, 2, 12, 5, make_call(4, 0, 0, 5, 5)};
    responder_step(r, std::span(&second, 1), {13, &cfg}, out);
    EXPECT_EQ(r.queue.size(), 1u);
    for (std::int64_t step = 14; step <= 161; ++step) responder_step(r, {}, {step, &cfg}, out);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].message.kind, MessageKind::UnitAvailable);
    EXPECT_EQ(out[0].edge, 6u);
    EXPECT_EQ(out[0].message.dst, 1);
    ASSERT_EQ(r.records.size(), 2u);
    EXPECT_EQ(r.records[1].start_step, 161);
    EXPECT_EQ(r.records[1].received_step, 13);
}

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "asbuilt/assembly.hpp"
#include "scene_fixtures.hpp"

namespace {

using namespace asbuilt;
using namespace asbuilt::testing;

SessionErrc error_code(auto&& fn) {
  try {
    fn();
  } catch (const SessionError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no SessionError thrown";
  return SessionErrc::InvalidScene;
}

TEST(PoseMetrics, DistanceAndAngle) {
  const Pose a = at(0, 0, 0);
  EXPECT_EQ(translation_distance(a, a), 0.0);
  EXPECT_EQ(rotation_angle(a, a), 0.0);
  const Quat q = axis_angle({1, 2, 3}, 70.0);
  EXPECT_NEAR(rotation_angle(at(0, 0, 0, q), at(0, 0, 0, {-q.w, -q.x, -q.y, -q.z})), 0.0, 1e-12);
  const Pose b = at(0, 0, 0, axis_angle({0, 0, 1}, 90.0));
  EXPECT_EQ(translation_distance(a, b), 0.0);
  EXPECT_NEAR(rotation_angle(a, b), 90.0, 1e-12);
  EXPECT_NEAR(translation_distance(at(1, 2, 3), at(4, 6, 3)), 5.0, 1e-15);
  EXPECT_NEAR(rotation_angle(a, at(0, 0, 0, axis_angle({0, 1, 0}, 180.0))), 180.0, 1e-12);
  // 270 degrees one way is 90 the other.
  EXPECT_NEAR(rotation_angle(a, at(0, 0, 0, axis_angle({0, 1, 0}, 270.0))), 90.0, 1e-12);
}

TEST(PoseMetrics, AngleMatchesArccosForm) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 1000; ++i) {
    const Quat p = random_rotation(rng), q = random_rotation(rng);
    const double d = std::abs(p.w * q.w + p.x * q.x + p.y * q.y + p.z * q.z);
    const double expected = 2.0 * std::acos(std::min(1.0, d)) * 180.0 / std::numbers::pi;
    EXPECT_NEAR(rotation_angle(at(0, 0, 0, p), at(0, 0, 0, q)), expected, 1e-6);
  }
}

TEST(CreateSession, OnePartOneSlot) {
  const AssemblySession s = create_session(make_scene({true}), SnapConfig{});
  ASSERT_EQ(s.parts().size(), 1u);
  EXPECT_EQ(s.parts()[0].state, PartState::Free);
  EXPECT_EQ(s.parts()[0].pose, at(500, 0, 0));
  EXPECT_EQ(s.clock_ms(), 0);
  EXPECT_TRUE(s.log().empty());
}

TEST(CreateSession, ThreeParts) {
  const AssemblySession s = create_session(make_scene({true, true, false}), SnapConfig{});
  EXPECT_EQ(s.parts().size(), 3u);
  for (const Part& p : s.parts()) EXPECT_EQ(p.state, PartState::Free);
}

TEST(CreateSession, InvalidScenes) {
  Scene dangling = make_scene({true});
  dangling.slots[0].expected_part = "ghost";
  EXPECT_EQ(error_code([&] { create_session(dangling, {}); }), SessionErrc::InvalidScene);

  Scene missing = make_scene({true});
  missing.parts[0].metrics = MacroMetrics{};
  EXPECT_EQ(error_code([&] { create_session(missing, {}); }), SessionErrc::InvalidScene);

  Scene twice = make_scene({true, true});
  twice.slots[1].expected_part = "part0";
  EXPECT_EQ(error_code([&] { create_session(twice, {}); }), SessionErrc::InvalidScene);

  SnapConfig bad;
  bad.max_angle_deg = 0.0;
  EXPECT_EQ(error_code([&] { create_session(make_scene({true}), bad); }), SessionErrc::InvalidConfig);
  bad = {};
  bad.snap_radius_mm = -1.0;
  EXPECT_EQ(error_code([&] { create_session(make_scene({true}), bad); }), SessionErrc::InvalidConfig);
}

TEST(TrySnap, Outcomes) {
  const Slot slot{"s", at(0, 0, 0), cube_metrics(100.0), "p"};
  Part good{"p", cube_metrics(100.0), at(0, 0, 0), PartState::Grabbed, std::nullopt};
  EXPECT_TRUE(std::holds_alternative<Snapped>(try_snap(good, slot, {})));

  Part bad = good;
  bad.metrics = cube_metrics(150.0);
  const SnapOutcome rejected = try_snap(bad, slot, {});
  ASSERT_TRUE(std::holds_alternative<RejectedQuality>(rejected));
  EXPECT_NEAR(std::get<RejectedQuality>(rejected).report.per_parameter[0].relative_difference, 0.5556, 1e-4);

  // Quality is evaluated before range.
  bad.pose = at(1e6, 0, 0);
  EXPECT_TRUE(std::holds_alternative<RejectedQuality>(try_snap(bad, slot, {})));

  good.pose = at(1e6, 0, 0);
  const SnapOutcome far = try_snap(good, slot, {});
  ASSERT_TRUE(std::holds_alternative<OutOfRange>(far));
  EXPECT_EQ(std::get<OutOfRange>(far).distance_mm, 1e6);
}

TEST(TrySnap, LimitsAreInclusive) {
  const Slot slot{"s", at(0, 0, 0), cube_metrics(100.0), "p"};
  SnapConfig c;
  c.snap_radius_mm = 12.5;
  c.max_angle_deg = 0.0;
  Part p{"p", cube_metrics(100.0), at(12.5, 0, 0), PartState::Grabbed, std::nullopt};
  EXPECT_TRUE(std::holds_alternative<Snapped>(try_snap(p, slot, c)));
  p.pose = at(0, 0, 12.5, axis_angle({0, 0, 1}, 1e-3));
  EXPECT_TRUE(std::holds_alternative<OutOfRange>(try_snap(p, slot, c)));
}

TEST(TrySnap, ExperimentRowsSnapAtSlot) {
  const MacroMetrics bim{28404.4, {90.0, 89.5, 47.0}, {0.52, 0.53, 0.18}};
  const MacroMetrics scan{27911.9, {90.9, 92.3, 55.1}, {0.57, 0.57, 0.24}};
  const Slot slot{"s", at(10, 20, 30), bim, "p"};
  const Part part{"p", scan, at(10, 20, 30), PartState::Grabbed, std::nullopt};
  EXPECT_TRUE(std::holds_alternative<Snapped>(try_snap(part, slot, {})));
}

TEST(TrySnap, DefaultRadiusScalesWithBimDiagonal) {
  const Slot slot{"s", at(0, 0, 0), cube_metrics(100.0), "p"};
  const double r = effective_snap_radius(slot, {});
  EXPECT_NEAR(r, 0.15 * std::sqrt(3.0) * 100.0, 1e-9);
  Part p{"p", cube_metrics(100.0), at(r * 0.999, 0, 0), PartState::Grabbed, std::nullopt};
  EXPECT_TRUE(std::holds_alternative<Snapped>(try_snap(p, slot, {})));
  p.pose = at(r * 1.001, 0, 0);
  EXPECT_TRUE(std::holds_alternative<OutOfRange>(try_snap(p, slot, {})));
  SnapConfig c;
  c.snap_radius_mm = 1000.0;
  EXPECT_TRUE(std::holds_alternative<Snapped>(try_snap(p, slot, c)));
}

TEST(TrySnap, GridMatchesConjunctionOracle) {
  std::mt19937_64 rng(4);
  SnapConfig cfg;
  cfg.snap_radius_mm = 12.5;
  cfg.max_angle_deg = 30.0;
  const Quat base = random_rotation(rng);
  const Slot slot{"s", at(3, -4, 5, base), cube_metrics(100.0), "p"};
  for (bool quality : {true, false}) {
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) {
        const double d = 2.0 * *cfg.snap_radius_mm * i / 19.0;
        const double theta = 180.0 * j / 19.0;
        const Vec3 dir = (i + j) % 2 ? Vec3{0.6, 0.0, 0.8} : Vec3{0.0, -1.0, 0.0};
        Part p{"p", quality ? cube_metrics(100.0) : cube_metrics(150.0),
               Pose{slot.target_pose.translation + dir * d, multiply(base, axis_angle({1, 1, 0}, theta))},
               PartState::Grabbed, std::nullopt};
        const bool expected = quality && d <= *cfg.snap_radius_mm && theta <= cfg.max_angle_deg;
        EXPECT_EQ(std::holds_alternative<Snapped>(try_snap(p, slot, cfg)), expected) << d << " " << theta;
      }
    }
  }
}

TEST(ApplyEvent, GrabReleaseFarReturnsToFree) {
  AssemblySession s = create_session(make_scene({true}), {});
  s.apply(grab(0, "part0"));
  EXPECT_EQ(s.parts()[0].state, PartState::Grabbed);
  const EventResult r = s.apply(release(100, "part0"));
  ASSERT_TRUE(r.snap);
  EXPECT_TRUE(std::holds_alternative<OutOfRange>(*r.snap));
  EXPECT_EQ(s.parts()[0].state, PartState::Free);
  EXPECT_EQ(s.parts()[0].pose, at(500, 0, 0));
  EXPECT_EQ(s.log().size(), 2u);
}

TEST(ApplyEvent, ConformingPartSnapsToTargetPose) {
  AssemblySession s = create_session(make_scene({true}), {});
  s.apply(grab(0, "part0"));
  s.apply(move(50, "part0", at(2, 1, 0, axis_angle({0, 0, 1}, 5.0))));
  const EventResult r = s.apply(release(60, "part0"));
  ASSERT_TRUE(r.snap);
  EXPECT_TRUE(std::holds_alternative<Snapped>(*r.snap));
  EXPECT_EQ(s.parts()[0].state, PartState::Snapped);
  EXPECT_EQ(s.parts()[0].pose, s.slots()[0].target_pose);
  // Snapped is terminal.
  EXPECT_TRUE(s.apply(grab(70, "part0")).warning);
  EXPECT_TRUE(s.apply(flag(80, "part0")).warning);
  EXPECT_EQ(s.parts()[0].state, PartState::Snapped);
}

TEST(ApplyEvent, NonConformingPartIsRejectedAndFreed) {
  AssemblySession s = create_session(make_scene({false}), {});
  s.apply(grab(0, "part0"));
  s.apply(move(1, "part0", at(0, 0, 0)));
  const EventResult r = s.apply(release(2, "part0"));
  ASSERT_TRUE(r.snap);
  EXPECT_TRUE(std::holds_alternative<RejectedQuality>(*r.snap));
  EXPECT_EQ(s.parts()[0].state, PartState::Free);
  EXPECT_EQ(s.parts()[0].pose, at(0, 0, 0));
}

TEST(ApplyEvent, MoveWithoutGrabIsRecordedAndIgnored) {
  AssemblySession s = create_session(make_scene({true}), {});
  const EventResult r = s.apply(move(5, "part0", at(0, 0, 0)));
  ASSERT_TRUE(r.warning);
  EXPECT_EQ(s.parts()[0].pose, at(500, 0, 0));
  EXPECT_EQ(s.parts()[0].state, PartState::Free);
  EXPECT_EQ(s.log().size(), 1u);
}

TEST(ApplyEvent, HardErrorsLeaveStateUnchanged) {
  AssemblySession s = create_session(make_scene({true}), {});
  s.apply(grab(100, "part0"));
  EXPECT_EQ(error_code([&] { s.apply(release(99, "part0")); }), SessionErrc::OutOfOrderEvent);
  EXPECT_EQ(error_code([&] { s.apply(grab(100, "nope")); }), SessionErrc::UnknownPart);
  EXPECT_EQ(error_code([&] { s.apply(SessionEvent{100, EventKind::Move, "part0", std::nullopt}); }),
            SessionErrc::InvalidEvent);
  EXPECT_EQ(s.log().size(), 1u);
  EXPECT_EQ(s.parts()[0].state, PartState::Grabbed);
  s.apply(end_session(200));
  EXPECT_EQ(error_code([&] { s.apply(grab(300, "part0")); }), SessionErrc::SessionEnded);
  EXPECT_EQ(error_code([&] { s.apply(end_session(300)); }), SessionErrc::SessionEnded);
}

TEST(ApplyEvent, ValueFormDoesNotMutateInput) {
  const AssemblySession s = create_session(make_scene({true}), {});
  const AssemblySession t = apply_event(s, grab(0, "part0"));
  EXPECT_EQ(s.parts()[0].state, PartState::Free);
  EXPECT_EQ(t.parts()[0].state, PartState::Grabbed);
}

TEST(ApplyEvent, PerPartThresholdOverride) {
  Scene scene = make_scene({false});
  // 1.5x cube differs by 0.5556 in surface; a 0.6 threshold lets it through.
  scene.parts[0].threshold = 0.6;
  AssemblySession s = create_session(scene, {});
  EXPECT_TRUE(s.conforming(s.parts()[0]));
  s.apply(grab(0, "part0"));
  s.apply(move(1, "part0", at(0, 0, 0)));
  s.apply(release(2, "part0"));
  EXPECT_EQ(s.parts()[0].state, PartState::Snapped);
}

TEST(GradeSession, Formula) {
  EXPECT_DOUBLE_EQ(grade_formula(1.0, 1000, 1000), 100.0);
  EXPECT_DOUBLE_EQ(grade_formula(1.0, 2000, 1000), 85.0);
  EXPECT_DOUBLE_EQ(grade_formula(1.0, 500, 1000), 100.0);
  EXPECT_DOUBLE_EQ(grade_formula(1.0, 0, 1000), 100.0);
  EXPECT_LE(grade_formula(0.0, 1000, 1000), 30.0);
  EXPECT_LT(grade_formula(0.0, std::int64_t(1) << 50, 1000), 1e-6);
  EXPECT_DOUBLE_EQ(grade_formula(0.5, 1000, 1000, {0.5, 0.5}), 75.0);
}

TEST(GradeSession, BoundsAndMonotonicity) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> acc(0.0, 1.0);
  std::uniform_int_distribution<std::int64_t> ms(0, 1'000'000);
  for (int i = 0; i < 10000; ++i) {
    const double a = acc(rng), b = acc(rng);
    const std::int64_t e1 = ms(rng), e2 = ms(rng), par = ms(rng) + 1;
    const double g = grade_formula(a, e1, par);
    ASSERT_GE(g, 0.0);
    ASSERT_LE(g, 100.0);
    ASSERT_LE(grade_formula(std::min(a, b), e1, par), grade_formula(std::max(a, b), e1, par));
    ASSERT_GE(grade_formula(a, std::min(e1, e2), par), grade_formula(a, std::max(e1, e2), par));
  }
}

TEST(GradeSession, RequiresEnd) {
  const AssemblySession s = create_session(make_scene({true}), {});
  EXPECT_EQ(error_code([&] { grade_session(s); }), SessionErrc::SessionNotEnded);
}

TEST(GradeSession, CorrectResolutionCounting) {
  const Scene scene = make_scene({true, false}, 10000);
  AssemblySession s = create_session(scene, {});
  s.apply(grab(1000, "part0"));
  s.apply(move(2000, "part0", at(0, 0, 0)));
  s.apply(release(3000, "part0"));
  s.apply(flag(4000, "part1"));
  s.apply(end_session(10000));
  SessionScore score = grade_session(s);
  EXPECT_EQ(score.correct_parts, 2u);
  EXPECT_DOUBLE_EQ(score.accuracy, 1.0);
  EXPECT_DOUBLE_EQ(score.grade, 100.0);

  // Flagging the good part and ignoring the bad one scores nothing, twice as slow.
  AssemblySession wrong = create_session(scene, {});
  wrong.apply(flag(0, "part0"));
  wrong.apply(end_session(20000));
  score = grade_session(wrong);
  EXPECT_EQ(score.correct_parts, 0u);
  EXPECT_DOUBLE_EQ(score.grade, 15.0);
}

TEST(Replay, EmptyLogThenEnd) {
  const SessionEvent log[] = {end_session(0)};
  const AssemblySession s = replay(make_scene({true, true}), {}, log);
  EXPECT_EQ(grade_session(s).accuracy, 0.0);
}

TEST(Replay, DecreasingTimestampsRejected) {
  const SessionEvent log[] = {grab(10, "part0"), release(5, "part0")};
  EXPECT_EQ(error_code([&] { replay(make_scene({true}), {}, log); }), SessionErrc::OutOfOrderEvent);
}

// Random event sequences: Snapped only ever follows a Release whose outcome
// was Snapped, and nothing leaves Snapped.
TEST(StateMachine, FuzzSafety) {
  std::mt19937_64 rng(555);
  const Scene scene = make_scene({true, false, true});
  std::uniform_int_distribution<int> kind(0, 3), part(0, 2), step(0, 50);
  std::uniform_real_distribution<double> off(-40.0, 40.0);
  for (int trial = 0; trial < 300; ++trial) {
    AssemblySession s = create_session(scene, {});
    std::int64_t t = 0;
    for (int n = 0; n < 60; ++n) {
      t += step(rng);
      const int pi = part(rng);
      const std::string id = "part" + std::to_string(pi);
      const PartState before = s.parts()[std::size_t(pi)].state;
      EventResult r;
      switch (kind(rng)) {
        case 0: r = s.apply(grab(t, id)); break;
        case 1: r = s.apply(move(t, id, at(1000.0 * pi + off(rng), off(rng), off(rng)))); break;
        case 2: r = s.apply(release(t, id)); break;
        default: r = s.apply(flag(t, id)); break;
      }
      const PartState after = s.parts()[std::size_t(pi)].state;
      if (before == PartState::Snapped) ASSERT_EQ(after, PartState::Snapped);
      if (after == PartState::Snapped && before != PartState::Snapped) {
        ASSERT_EQ(r.event.kind, EventKind::Release);
        ASSERT_TRUE(r.snap && std::holds_alternative<Snapped>(*r.snap));
      }
      if (after == PartState::Snapped) ASSERT_EQ(s.parts()[std::size_t(pi)].pose, s.slots()[std::size_t(pi)].target_pose);
    }
    // Log audit: replaying the log reproduces the same states.
    const AssemblySession again = replay(scene, {}, s.log());
    for (std::size_t i = 0; i < 3; ++i) {
      ASSERT_EQ(again.parts()[i].state, s.parts()[i].state);
      ASSERT_EQ(again.parts()[i].pose, s.parts()[i].pose);
    }
  }
}

}  // namespace

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "goalforge/error.hpp"
#include "goalforge/evalmetrics.hpp"

#include <cmath>

using namespace gf;

TEST_CASE("jsd is a bounded symmetric divergence in base 2") {
    PMF u5 = PMF::uniform(5);
    CHECK(jsd(u5, u5) == doctest::Approx(0.0));

    PMF dirac;
    dirac.p = {1.0, 0.0, 0.0, 0.0, 0.0};
    double d = jsd(dirac, u5);
    CHECK(d == doctest::Approx(jsd(u5, dirac)));
    CHECK(d > 0.0);
    CHECK(d <= 1.0);
    CHECK(d == doctest::Approx(0.6100).epsilon(5e-4));

    // disjoint supports hit the upper bound exactly
    PMF a, b;
    a.p = {1.0, 0.0};
    b.p = {0.0, 1.0};
    CHECK(jsd(a, b) == doctest::Approx(1.0));

    PMF u4 = PMF::uniform(4);
    CHECK_THROWS_AS(jsd(u5, u4), Error);
    PMF bad;
    bad.p = {0.5, 0.4}; // does not sum to one
    CHECK_THROWS_AS(jsd(bad, PMF::uniform(2)), Error);
}

TEST_CASE("diversity score reproduces the five reference rows") {
    // partial uniform distributions over a support of five initiators
    CHECK(diversity_score({1, 1, 1, 1, 1}) == doctest::Approx(1.0000).epsilon(5e-4));
    CHECK(diversity_score({1, 1, 1, 1, 0}) == doctest::Approx(0.8920).epsilon(5e-4));
    CHECK(diversity_score({1, 1, 1, 0, 0}) == doctest::Approx(0.7635).epsilon(5e-4));
    CHECK(diversity_score({1, 1, 0, 0, 0}) == doctest::Approx(0.6042).epsilon(5e-4));
    CHECK(diversity_score({1, 0, 0, 0, 0}) == doctest::Approx(0.3900).epsilon(5e-4));

    // scale invariance: proportions matter, absolute counts do not
    CHECK(diversity_score({400, 400, 400, 400, 400}) == doctest::Approx(1.0));
    CHECK(diversity_score({5000, 0, 0, 0, 0}) == doctest::Approx(0.3900).epsilon(5e-4));

    CHECK_THROWS_AS(diversity_score({}), Error);
    CHECK_THROWS_AS(diversity_score({0, 0, 0}), Error);
}

TEST_CASE("planning accuracy counts only valid trials") {
    std::vector<TrialLog> logs;
    for (int i = 0; i < 49; ++i) logs.push_back({"s", "a", "a", true});
    logs.push_back({"s", "a", "b", true});
    AccuracyReport r = planning_accuracy(logs);
    CHECK(r.valid == 50);
    CHECK(r.success == 49);
    CHECK(r.accuracy_percent == doctest::Approx(98.0));

    logs.clear();
    logs.push_back({"s", "a", std::nullopt, true}); // no observation = failure
    logs.push_back({"s", "a", "a", false});         // invalid = excluded
    logs.push_back({"s", "a", "a", true});
    r = planning_accuracy(logs);
    CHECK(r.valid == 2);
    CHECK(r.success == 1);
    CHECK(r.accuracy_percent == doctest::Approx(50.0));

    CHECK_THROWS_AS(planning_accuracy({}), Error);
    CHECK_THROWS_AS(planning_accuracy({{"s", "a", "a", false}}), Error);
}

TEST_CASE("collision detection finds the first target motion") {
    // projectile advances 1 m/s at 16 fps; target jolts at frame 48
    std::vector<Vec2> projectile, target;
    const double dt = 1.0 / 16.0;
    for (int k = 0; k < 81; ++k) {
        projectile.push_back({k * dt, 0.0});
        target.push_back(k < 48 ? Vec2{5.0, 0.0} : Vec2{5.0 + (k - 47) * 0.5 * dt, 0.0});
    }
    CollisionDetection d = detect_collision_and_speed(projectile, target, 16.0);
    CHECK(d.collision_frame == 48);
    CHECK(d.projectile_speed == doctest::Approx(1.0).epsilon(1e-6));

    // a static target never triggers
    std::vector<Vec2> still(81, Vec2{5.0, 0.0});
    CHECK_THROWS_AS(detect_collision_and_speed(projectile, still, 16.0), Error);
    // first-interval motion leaves no pre-collision window to average
    std::vector<Vec2> instant = still;
    instant[1] = {5.5, 0.0};
    CHECK_THROWS_AS(detect_collision_and_speed(projectile, instant, 16.0), Error);
    CHECK_THROWS_AS(detect_collision_and_speed(projectile, {{0, 0}}, 16.0), Error);
}

TEST_CASE("speed ordering checks all four mass relationships") {
    std::vector<SpeedTrial> trials;
    auto add = [&](double mp, double mt, double speed) {
        for (int i = 0; i < 5; ++i) trials.push_back({mp, mt, speed + 0.01 * i, 10});
    };
    add(1.0, 1.0, 2.0);
    add(1.0, 3.0, 4.0);
    add(3.0, 1.0, 4.0 / 3.0);
    add(3.0, 3.0, 2.0);

    SpeedOrderingReport r = speed_ordering_check(trials);
    CHECK(r.groups.size() == 4);
    CHECK(r.relationships.size() == 4);
    CHECK(r.all_satisfied);

    // equal means violate the strict ordering
    trials.clear();
    add(1.0, 1.0, 2.0);
    add(1.0, 3.0, 2.0);
    SpeedOrderingReport flat = speed_ordering_check(trials);
    CHECK_FALSE(flat.all_satisfied);
}

TEST_CASE("pmf construction guards") {
    CHECK_THROWS_AS(PMF::uniform(0), Error);
    CHECK_THROWS_AS(PMF::from_counts({}), Error);
    PMF p = PMF::from_counts({3, 1});
    CHECK(p.p[0] == doctest::Approx(0.75));
    CHECK(p.p[1] == doctest::Approx(0.25));
}

#include "spinstat/ensemble.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_util.h"

using namespace spinstat;

TEST(EnsembleA, two_particles) {
    auto a = make_ensemble_A(2);
    EXPECT_EQ(a.name(), "A");
    ASSERT_EQ(a.components().size(), 2u);
    EXPECT_EQ(a.components()[0].state, eigenstate(Axis::X(), SpinOutcome::Plus));
    EXPECT_EQ(a.components()[1].state, eigenstate(Axis::X(), SpinOutcome::Minus));
    EXPECT_EQ(a.components()[0].count, 1u);
    EXPECT_EQ(a.components()[1].count, 1u);
    EXPECT_EQ(a.total(), 2u);
}

TEST(EnsembleA, scaled) {
    auto a = make_ensemble_A(1000);
    EXPECT_EQ(a.components()[0].count, 500u);
    EXPECT_EQ(a.components()[1].count, 500u);
    EXPECT_EQ(a.weight(0), 0.5);
}

TEST(EnsembleA, odd_rejected) { EXPECT_THROW(make_ensemble_A(3), std::invalid_argument); }

TEST(EnsembleB, two_particles) {
    auto b = make_ensemble_B(2);
    EXPECT_EQ(b.components()[0].state, eigenstate(Axis::Z(), SpinOutcome::Plus));
    EXPECT_EQ(b.components()[1].state, eigenstate(Axis::Z(), SpinOutcome::Minus));
    EXPECT_EQ(b.components()[0].count, 1u);
    EXPECT_EQ(make_ensemble_B(1000).components()[1].count, 500u);
}

TEST(EnsembleB, empty_and_odd_rejected) {
    EXPECT_THROW(make_ensemble_B(0), std::invalid_argument);
    EXPECT_THROW(make_ensemble_B(7), std::invalid_argument);
}

TEST(PairEnsemble, reduces_to_presets) {
    EXPECT_TRUE(same_preparation(make_pair_ensemble(Axis::X(), 4), make_ensemble_A(4), 0.0));
    EXPECT_TRUE(same_preparation(make_pair_ensemble(Axis::Z(), 4), make_ensemble_B(4), 0.0));
    EXPECT_FALSE(same_preparation(make_ensemble_A(4), make_ensemble_B(4)));
    EXPECT_FALSE(same_preparation(make_ensemble_A(4), make_ensemble_A(6)));
}

TEST(PairEnsemble, tilted_axis) {
    const double t = std::numbers::pi / 4;
    auto e = make_pair_ensemble(Axis(t, 0.0), 10);
    ASSERT_EQ(e.components().size(), 2u);
    EXPECT_EQ(e.components()[0].count, 5u);
    EXPECT_EQ(e.components()[1].count, 5u);
    // (cos t/2, sin t/2) and (sin t/2, -cos t/2)
    const auto &up = e.components()[0].state;
    const auto &down = e.components()[1].state;
    EXPECT_NEAR(std::abs(up.a0() - std::cos(t / 2)), 0.0, kExactTol);
    EXPECT_NEAR(std::abs(up.a1() - std::sin(t / 2)), 0.0, kExactTol);
    EXPECT_NEAR(std::abs(down.a0() - std::sin(t / 2)), 0.0, kExactTol);
    EXPECT_NEAR(std::abs(down.a1() + std::cos(t / 2)), 0.0, kExactTol);
    EXPECT_THROW(make_pair_ensemble(Axis(t, 0.0), 9), std::invalid_argument);
}

TEST(PairEnsemble, components_orthogonal) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 500; ++i) {
        auto e = make_pair_ensemble(spinstat::testing::random_axis(rng), 2);
        EXPECT_LE(std::abs(inner_product(e.components()[0].state, e.components()[1].state)), kExactTol);
    }
}

TEST(EnsembleSpec, zero_total_rejected_but_zero_components_allowed) {
    EXPECT_THROW(EnsembleSpec("none", {}), std::invalid_argument);
    EXPECT_THROW(EnsembleSpec("zeros", {{Spinor::up(), 0}}), std::invalid_argument);
    EnsembleSpec e("mixed", {{Spinor::up(), 0}, {Spinor::down(), 3}});
    EXPECT_EQ(e.total(), 3u);
    EXPECT_EQ(e.weight(0), 0.0);
    EXPECT_EQ(e.weight(1), 1.0);
}

TEST(EnsembleJson, preset) {
    auto d = ensemble_from_json(nlohmann::json::parse(R"({"preset": "B", "n": 10})"));
    EXPECT_EQ(std::get<PresetEnsemble>(d), (PresetEnsemble{'B', 10}));
    EXPECT_TRUE(same_preparation(build_ensemble(d), make_ensemble_B(10)));
    EXPECT_EQ(ensemble_to_json(d), nlohmann::json::parse(R"({"preset": "B", "n": 10})"));
}

TEST(EnsembleJson, explicit_components) {
    auto j = nlohmann::json::parse(R"({
        "name": "tilted",
        "components": [
            {"axis": "x", "sign": 1, "count": 3},
            {"axis": {"theta": 0.5, "phi": 0.25}, "sign": -1, "count": 4}
        ]})");
    auto d = ensemble_from_json(j);
    const auto &ex = std::get<ExplicitEnsemble>(d);
    EXPECT_EQ(ex.name, "tilted");
    ASSERT_EQ(ex.components.size(), 2u);
    EXPECT_EQ(ex.components[1].axis, Axis(0.5, 0.25));
    EXPECT_EQ(ex.components[1].sign, SpinOutcome::Minus);

    auto e = build_ensemble(d);
    EXPECT_EQ(e.total(), 7u);
    EXPECT_EQ(e.components()[1].state, eigenstate(Axis(0.5, 0.25), SpinOutcome::Minus));

    EXPECT_EQ(ensemble_from_json(ensemble_to_json(d)), d);
}

TEST(EnsembleJson, errors) {
    using nlohmann::json;
    EXPECT_THROW(ensemble_from_json(json::parse(R"({"preset": "A", "n": 3})")), std::invalid_argument);
    EXPECT_THROW(ensemble_from_json(json::parse(R"({"preset": "C", "n": 4})")), std::invalid_argument);
    EXPECT_THROW(ensemble_from_json(json::parse(R"({"preset": "A", "n": -4})")), std::invalid_argument);
    EXPECT_THROW(ensemble_from_json(json::parse(R"({"preset": "A"})")), std::invalid_argument);
    EXPECT_THROW(ensemble_from_json(json::parse(R"({"components": [{"axis": "x", "sign": 0, "count": 1}]})")),
                 std::invalid_argument);
    EXPECT_THROW(ensemble_from_json(json::parse(R"({"components": [{"sign": 1, "count": 1}]})")),
                 std::invalid_argument);
    EXPECT_THROW(ensemble_from_json(json::parse(R"({"components": [{"axis": "x", "sign": 1, "count": 0}]})")),
                 std::invalid_argument);
    EXPECT_THROW(ensemble_from_json(json::parse(R"([1, 2])")), std::invalid_argument);
}

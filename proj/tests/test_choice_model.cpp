#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "transim/choice_model.hpp"
#include "transim/random_stream.hpp"

#include <cmath>

using namespace transim;

namespace {

Path synthetic_path(double ivt, double walk, double transfers, double commonality, std::size_t legs = 1) {
    Path p;
    p.attributes = {ivt, walk, transfers};
    p.commonality = commonality;
    for (std::size_t i = 0; i < legs; ++i) p.legs.push_back({StationIndex(i), StationIndex(i + 1), LineIndex(i)});
    return p;
}

/// Plain evaluation: exp(V_i) / sum_j exp(V_j), no stabilisation.
std::vector<double> direct_logit(const ChoiceSet& cs, const ChoiceParams& b) {
    std::vector<double> e;
    double sum = 0.0;
    for (const auto& p : cs.paths) {
        const double v = b.in_vehicle_time * p.attributes.in_vehicle_min + b.relative_walk_time * p.attributes.relative_walk +
                         b.transfers * p.attributes.transfers + b.commonality * p.commonality;
        e.push_back(std::exp(v));
        sum += e.back();
    }
    for (auto& x : e) x /= sum;
    return e;
}

Network dummy_network() {
    return Network(fixtures::make_spec({{"A", 0, 0}, {"B", 1, 0}, {"C", 2, 0}, {"D", 3, 0}},
                                       {{"L0", {"A", "B"}, {60}}, {"L1", {"B", "C"}, {60}}, {"L2", {"C", "D"}, {60}}}));
}

}  // namespace

TEST_CASE("zero coefficients give uniform probabilities") {
    ChoiceSet cs;
    for (int i = 0; i < 3; ++i) cs.paths.push_back(synthetic_path(10 + i, 1, i, -1));
    const auto probs = choice_probabilities(cs, ChoiceParams{});
    for (double p : probs.probs) CHECK(p == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("singleton set has probability one") {
    ChoiceSet cs;
    cs.paths.push_back(synthetic_path(12, 2, 1, -3));
    CHECK(choice_probabilities(cs, kReferenceParams).probs == std::vector<double>{1.0});
}

TEST_CASE("identical paths split evenly") {
    ChoiceSet cs;
    cs.paths.push_back(synthetic_path(12, 2, 1, -3));
    cs.paths.push_back(synthetic_path(12, 2, 1, -3));
    const auto probs = choice_probabilities(cs, ChoiceParams{-0.4, -2, -1, -5});
    CHECK(probs.probs[0] == doctest::Approx(0.5));
    CHECK(probs.probs[1] == doctest::Approx(0.5));
}

TEST_CASE("reference coefficients on a two-path set") {
    ChoiceSet cs;
    cs.paths.push_back(synthetic_path(14.0, 1.2, 0, -4.1));
    cs.paths.push_back(synthetic_path(11.5, 2.3, 1, -3.9));
    const auto probs = choice_probabilities(cs, kReferenceParams);
    const auto direct = direct_logit(cs, kReferenceParams);
    for (std::size_t i = 0; i < 2; ++i) CHECK(probs.probs[i] == doctest::Approx(direct[i]).epsilon(1e-12));
    // V0 - V1 = -0.147*2.5 - 1.271*(-1.1) - 0.573*(-1) - 3.679*(-0.2)
    const double dv = -0.147 * 2.5 + 1.271 * 1.1 + 0.573 + 3.679 * 0.2;
    CHECK(probs.probs[0] == doctest::Approx(1.0 / (1.0 + std::exp(-dv))).epsilon(1e-12));
}

TEST_CASE("probabilities match direct evaluation on random sets") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ivt(5, 40), walk(0, 5), coef(-3, 0), common(-8, 0);
    for (int trial = 0; trial < 200; ++trial) {
        ChoiceSet cs;
        const int n = 1 + trial % 6;
        for (int i = 0; i < n; ++i) cs.paths.push_back(synthetic_path(ivt(rng), walk(rng), double(rng() % 3), common(rng)));
        const ChoiceParams b{coef(rng) / 3, coef(rng), coef(rng), coef(rng)};
        const auto probs = choice_probabilities(cs, b);
        const auto direct = direct_logit(cs, b);
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            CHECK(probs.probs[i] == doctest::Approx(direct[i]).epsilon(1e-9));
            total += probs.probs[i];
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("large utilities do not overflow") {
    ChoiceSet cs;
    cs.paths.push_back(synthetic_path(1000, 0, 0, 0));
    cs.paths.push_back(synthetic_path(1001, 0, 0, 0));
    const auto probs = choice_probabilities(cs, ChoiceParams{-1e3, 0, 0, 0});
    CHECK(probs.probs[0] == doctest::Approx(1.0));
    CHECK(std::isfinite(probs.probs[1]));
    CHECK_THROWS_AS(choice_probabilities(cs, ChoiceParams{std::nan(""), 0, 0, 0}), NonFiniteUtilityError);
    cs.paths[0].attributes.in_vehicle_min = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(choice_probabilities(cs, ChoiceParams{-1, 0, 0, 0}), NonFiniteUtilityError);
}

TEST_CASE("softmax properties") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ivt(5, 40), walk(0, 5), coef(-2, 0), common(-8, 0), gap(0.1, 5);
    for (int trial = 0; trial < 100; ++trial) {
        ChoiceSet cs;
        const int n = 2 + trial % 4;
        for (int i = 0; i < n; ++i) cs.paths.push_back(synthetic_path(ivt(rng), walk(rng), double(rng() % 3), common(rng)));
        const ChoiceParams b{coef(rng), coef(rng), coef(rng), coef(rng)};
        const auto base = choice_probabilities(cs, b).probs;

        // a constant added to every utility through the commonality term
        ChoiceSet shifted = cs;
        for (auto& p : shifted.paths) p.commonality += 0.0 == b.commonality ? 0.0 : 7.0 / b.commonality;
        const auto shifted_probs = choice_probabilities(shifted, b).probs;
        for (int i = 0; i < n; ++i) CHECK(shifted_probs[i] == doctest::Approx(base[i]).epsilon(1e-9));

        // a faster path is never less likely
        ChoiceSet faster = cs;
        faster.paths[0].attributes.in_vehicle_min -= 1.0;
        CHECK(choice_probabilities(faster, b).probs[0] >= base[0]);

        // near-deterministic limit picks the minimum in-vehicle path
        ChoiceSet separated = cs;
        for (int i = 0; i < n; ++i) separated.paths[i].attributes.in_vehicle_min = 10.0 + i * gap(rng) + (i > 0 ? 0.1 : 0.0);
        const auto limit = choice_probabilities(separated, ChoiceParams{-1e3, 0, 0, 0}).probs;
        CHECK(limit[0] >= 0.999);
    }
}

TEST_CASE("path sampling") {
    SUBCASE("certain choice") {
        RandomStream s = RandomStream::derive(1, 2);
        const std::vector<double> probs{1.0};
        for (int i = 0; i < 100; ++i) CHECK(sample_path(probs, s) == 0);
    }
    SUBCASE("fair coin stays within three standard deviations") {
        RandomStream s = RandomStream::derive(12345, 0);
        const std::vector<double> probs{0.5, 0.5};
        int zeros = 0;
        for (int i = 0; i < 10000; ++i) zeros += sample_path(probs, s) == 0 ? 1 : 0;
        CHECK(std::abs(zeros / 10000.0 - 0.5) <= 0.015);
    }
    SUBCASE("same seed gives the same sequence") {
        const std::vector<double> probs{0.9, 0.1};
        RandomStream a = RandomStream::derive(99, 7);
        RandomStream b = RandomStream::derive(99, 7);
        for (int i = 0; i < 1000; ++i) CHECK(sample_path(probs, a) == sample_path(probs, b));
    }
    SUBCASE("one draw per call") {
        RandomStream a = RandomStream::derive(4, 4);
        RandomStream b = RandomStream::derive(4, 4);
        const std::vector<double> probs{0.2, 0.3, 0.5};
        sample_path(probs, a);
        b.uniform();
        CHECK(a.uniform() == b.uniform());
    }
}

TEST_CASE("random streams") {
    RandomStream a = RandomStream::derive(1, 1);
    RandomStream b = RandomStream::derive(1, 2);
    RandomStream c = RandomStream::derive(2, 1);
    CHECK(a() != b());
    CHECK(RandomStream::derive(1, 1)() != c());
    for (int i = 0; i < 10000; ++i) {
        const double u = a.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("benchmark rules") {
    const Network net = dummy_network();
    SUBCASE("uniform over four paths") {
        ChoiceSet cs;
        for (int i = 0; i < 4; ++i) cs.paths.push_back(synthetic_path(10 + i, i, i % 2, -i));
        const auto probs = rule_probabilities(net, cs, benchmark_params(BenchmarkKind::uniform));
        for (double p : probs.probs) CHECK(p == doctest::Approx(0.25));
    }
    SUBCASE("shortest path takes the minimum in-vehicle time") {
        ChoiceSet cs;
        cs.paths.push_back(synthetic_path(10, 3, 0, -1));
        cs.paths.push_back(synthetic_path(12, 0, 0, -1));
        const auto probs = rule_probabilities(net, cs, benchmark_params(BenchmarkKind::shortest_path));
        CHECK(probs.probs == std::vector<double>{1.0, 0.0});
    }
    SUBCASE("ties go to fewer transfers") {
        ChoiceSet cs;
        cs.paths.push_back(synthetic_path(10, 0, 1, -1, 2));
        cs.paths.push_back(synthetic_path(10, 0, 0, -1, 1));
        CHECK(shortest_path_index(net, cs) == 1);
        const auto probs = rule_probabilities(net, cs, benchmark_params(BenchmarkKind::shortest_path));
        CHECK(probs.probs == std::vector<double>{0.0, 1.0});
    }
}

TEST_CASE("parameter files") {
    fixtures::TempDir dir("params");
    write_params(dir.path() / "b.json", kReferenceParams);
    CHECK(read_params(dir.path() / "b.json") == kReferenceParams);
    CHECK(ChoiceParams::from_array(kReferenceParams.as_array()) == kReferenceParams);
    CHECK_THROWS_AS(read_params(dir.path() / "none.json"), ValidationError);
}

#include <catch2/catch_amalgamated.hpp>

#include "grsse/bounds.hpp"
#include "grsse/planner.hpp"

#include <random>

using namespace grsse;

TEST_CASE("eta constant") {
    // independent evaluation of the defining expression (1 + e^-1) log2 e
    const double expect = (1.0 + std::exp(-1.0)) * std::log2(std::exp(1.0));
    CHECK_THAT(eta_bits(), Catch::Matchers::WithinAbs(expect, 1e-12));
    CHECK_THAT(eta_bits(), Catch::Matchers::WithinAbs(1.9734328863120065, 1e-12));
    CHECK_THAT(eta_bits(), Catch::Matchers::WithinAbs(1.973, 5e-4));
}

TEST_CASE("lemma bound values") {
    CHECK_THAT(lemma2_bound(0.0, 1.0), Catch::Matchers::WithinAbs(eta_bits(), 1e-12));
    CHECK_THAT(lemma2_bound(0.0, 0.5), Catch::Matchers::WithinAbs(1.0 + eta_bits(), 1e-12));
    CHECK_THAT(lemma2_bound(3.0, 1.0), Catch::Matchers::WithinAbs(3.0 + eta_bits(), 1e-12));
    CHECK_THROWS_AS(lemma2_bound(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(lemma2_bound(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("theorem bounds for golay on the ball w=3 channel") {
    auto noise = type_distribution<double>(NoiseModel::ball(2, 24, 3));
    auto r = theorem1_bounds(noise, *LinearCode::golay24());
    CHECK(r.tail == 0.0);  // wt(Z) <= 3 < d/2 = 4 almost surely
    const double c = 24.0 - std::log2(2325.0);
    CHECK_THAT(r.capacity, Catch::Matchers::WithinAbs(c, 1e-9));
    const double expect_comm = c + std::log2(c - 12 + eta_bits() + 2) + eta_bits() + 3;
    CHECK_THAT(r.comm_bound, Catch::Matchers::WithinAbs(expect_comm, 1e-9));
    CHECK_THAT(r.comm_bound, Catch::Matchers::WithinAbs(20.05, 0.01));
    CHECK_THAT(r.elogl_bound, Catch::Matchers::WithinAbs(c - 12 + eta_bits() + 1, 1e-9));
    CHECK(r.comm_bound >= r.capacity);
}

TEST_CASE("trivial code bound reduces to the GRS expression") {
    auto noise = type_distribution<double>(NoiseModel::symmetric(2, 10, Rational(1, 10)));
    auto r = theorem1_bounds(noise, *LinearCode::trivial(2, 10));
    CHECK(r.k == 0);
    CHECK(r.tail == 0.0);
    CHECK_THAT(r.comm_bound,
               Catch::Matchers::WithinAbs(
                   r.capacity + std::log2(r.capacity + eta_bits() + 2) + eta_bits() + 3, 1e-12));
    // zero-capacity corner: C = 0 at alpha = 1/2
    auto flat = type_distribution<double>(NoiseModel::symmetric(2, 10, Rational(1, 2)));
    auto r0 = theorem1_bounds(flat, *LinearCode::trivial(2, 10));
    CHECK_THAT(r0.comm_bound,
               Catch::Matchers::WithinAbs(std::log2(eta_bits() + 2) + eta_bits() + 3, 1e-9));
}

TEST_CASE("larger distance never worsens the communication bound") {
    // three 6-bit codes with k = 3 and distances 1, 2, 3
    std::vector<FieldVector> rows1, rows2, rows3;
    auto row = [](std::initializer_list<int> bits) {
        std::vector<uint8_t> v;
        for (int b : bits) v.push_back(static_cast<uint8_t>(b));
        return FieldVector(2, v);
    };
    // d = 3: appended pairwise parities
    rows3 = {row({0, 1, 1, 1, 0, 0}), row({1, 0, 1, 0, 1, 0}), row({1, 1, 0, 0, 0, 1})};
    // d = 2: three independent parity pairs
    rows2 = {row({1, 1, 0, 0, 0, 0}), row({0, 0, 1, 1, 0, 0}), row({0, 0, 0, 0, 1, 1})};
    // d = 1: a free coordinate
    rows1 = {row({1, 1, 0, 0, 0, 0}), row({0, 0, 1, 1, 0, 0}), row({0, 0, 0, 0, 0, 1})};
    auto c3 = LinearCode::from_matrix("d3", ParityCheckMatrix(2, 6, rows3));
    auto c2 = LinearCode::from_matrix("d2", ParityCheckMatrix(2, 6, rows2));
    auto c1 = LinearCode::from_matrix("d1", ParityCheckMatrix(2, 6, rows1));
    REQUIRE(c3->distance() == 3);
    REQUIRE(c2->distance() == 2);
    REQUIRE(c1->distance() == 1);
    auto noise = type_distribution<double>(NoiseModel::symmetric(2, 6, Rational(1, 10)));
    const double b3 = theorem1_bounds(noise, *c3).comm_bound;
    const double b2 = theorem1_bounds(noise, *c2).comm_bound;
    const double b1 = theorem1_bounds(noise, *c1).comm_bound;
    CHECK(b3 <= b2 + 1e-12);
    CHECK(b2 <= b1 + 1e-12);
}

TEST_CASE("planner expected log-iterations meets the theorem bound") {
    for (uint32_t w : {0u, 3u}) {
        auto channel = NoiseModel::ball(2, 24, w);
        auto plan = plan_grsse<double>(
            channel, CodeSchedule({LinearCode::golay24()}, Rational(1, 1000000000), 20000));
        auto r = theorem1_bounds(type_distribution<double>(channel), *LinearCode::golay24());
        CHECK(plan->expected_log2_L() <= r.elogl_bound + 1e-9);
    }
}

TEST_CASE("grs reference sampler") {
    SECTION("target equals proposal: immediate acceptance") {
        LocalRng rng(1);
        std::vector<double> p = {0.25, 0.25, 0.5};
        for (int i = 0; i < 200; ++i) CHECK(grs_reference(p, p, rng).iterations == 1);
    }
    SECTION("point mass target over a uniform proposal") {
        LocalRng rng(2);
        const int m = 8;
        std::vector<double> target(m, 0.0), proposal(m, 1.0 / m);
        target[3] = 1.0;
        double sum_l = 0, sum_log = 0;
        int first = 0;
        const int trials = 20000;
        for (int t = 0; t < trials; ++t) {
            auto res = grs_reference(target, proposal, rng);
            CHECK(res.sample == 3);
            sum_l += static_cast<double>(res.iterations);
            sum_log += std::log2(static_cast<double>(res.iterations));
            first += res.iterations == 1;
        }
        CHECK_THAT(first / double(trials), Catch::Matchers::WithinAbs(1.0 / m, 0.01));
        CHECK_THAT(sum_l / trials, Catch::Matchers::WithinAbs(double(m), 0.25));
        CHECK(sum_log / trials <= std::log2(double(m)) + eta_bits());
    }
    SECTION("sample law matches the target (chi-square)") {
        LocalRng rng(3);
        std::vector<double> target = {0.1, 0.05, 0.3, 0.15, 0.05, 0.05, 0.2, 0.1};
        std::vector<double> proposal = {0.2, 0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1};
        std::vector<int> counts(8, 0);
        const int trials = 100000;
        for (int t = 0; t < trials; ++t) ++counts[grs_reference(target, proposal, rng).sample];
        double chi2 = 0;
        for (int i = 0; i < 8; ++i) {
            const double e = trials * target[i];
            chi2 += (counts[i] - e) * (counts[i] - e) / e;
        }
        CHECK(chi2 < 24.3);  // 99.9th percentile of chi2 with 7 dof
    }
    SECTION("support violations are rejected") {
        LocalRng rng(4);
        CHECK_THROWS_AS(grs_reference({1.0, 0.0}, {0.0, 1.0}, rng), std::invalid_argument);
    }
}

TEST_CASE("kl divergence helper") {
    CHECK_THAT(discrete_kl_bits({0.5, 0.5}, {0.25, 0.75}),
               Catch::Matchers::WithinAbs(0.5 * std::log2(2.0) + 0.5 * std::log2(2.0 / 3.0), 1e-12));
    CHECK(discrete_kl_bits({1.0, 0.0}, {0.5, 0.5}) == 1.0);
    CHECK_THROWS_AS(discrete_kl_bits({0.5, 0.5}, {1.0, 0.0}), std::invalid_argument);
}

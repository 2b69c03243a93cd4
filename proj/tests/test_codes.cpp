#include <catch2/catch_amalgamated.hpp>

#include "grsse/codes.hpp"

#include <random>
#include <set>

using namespace grsse;

namespace {

// block-diagonal I_r (x) H_base built by hand, for cross-checking juxtapose()
ParityCheckMatrix block_diagonal(const ParityCheckMatrix& base, uint32_t r) {
    const uint32_t q = base.q(), nb = static_cast<uint32_t>(base.n());
    const uint32_t mb = static_cast<uint32_t>(base.num_rows());
    std::vector<FieldVector> rows;
    for (uint32_t b = 0; b < r; ++b)
        for (uint32_t i = 0; i < mb; ++i) {
            FieldVector row(q, r * nb);
            for (uint32_t j = 0; j < nb; ++j) row.set(b * nb + j, base.rows()[i][j]);
            rows.push_back(row);
        }
    return ParityCheckMatrix(q, r * nb, std::move(rows));
}

}  // namespace

TEST_CASE("golay24 structure") {
    auto golay = LinearCode::golay24();
    CHECK(golay->n() == 24);
    CHECK(golay->k() == 12);
    CHECK(golay->distance() == 8);

    // weight enumerator at 8, by brute force over all 4096 codewords
    uint64_t weight8 = 0, total = 0;
    FieldVector zero_syndrome(2, 12);
    golay->for_each_in_coset(zero_syndrome.raw(), [&](const FieldVector& c) {
        ++total;
        if (c.weight() == 8) ++weight8;
        CHECK(golay->syndrome(c).weight() == 0);
    });
    CHECK(total == 4096);
    CHECK(weight8 == 759);

    const auto& table = golay->typesets();
    CHECK(table.size() == 5);  // 2^12 syndromes collapse to 5 type sets
    CHECK(golay->type_set(zero_syndrome) == TypeSet{0, 8, 12, 16, 24});

    BigInt syndromes = 0;
    for (const auto& c : table.syndrome_count) syndromes += c;
    CHECK(syndromes == 4096);
}

TEST_CASE("code distances") {
    CHECK(LinearCode::repetition(2, 7)->distance() == 7);
    CHECK(LinearCode::repetition(3, 5)->distance() == 5);
    CHECK(LinearCode::trivial(2, 6)->distance() == LinearCode::kInfiniteDistance);
    CHECK(LinearCode::trivial(2, 6)->distance_is_infinite());
    CHECK(LinearCode::complete(2, 6)->distance() == 1);
    CHECK(LinearCode::juxtapose(LinearCode::golay24(), 2)->distance() == 8);
}

TEST_CASE("effective distance") {
    auto golay = LinearCode::golay24();
    CHECK(golay->effective_distance() == Rational(8));
    CHECK(LinearCode::juxtapose(golay, 4)->effective_distance() == Rational(32));
    CHECK(LinearCode::trivial(2, 4)->effective_distance_is_infinite());
    CHECK_FALSE(golay->effective_distance_is_infinite());
}

TEST_CASE("coset leaders") {
    auto golay = LinearCode::golay24();
    FieldVector zero_s(2, 12);
    CHECK(golay->coset_leader(zero_s).weight() == 0);

    auto trivial = LinearCode::trivial(2, 5);
    FieldVector s(2, 5);
    s.set(1, 1);
    s.set(3, 1);
    CHECK(trivial->coset_leader(s) == s);

    // syndrome of e_1 has the unique weight-1 leader e_1
    auto e1 = FieldVector::unit(2, 24, 0);
    auto syn = golay->syndrome(e1);
    CHECK(golay->coset_leader(syn) == e1);
    auto census = golay->coset_type_census(syn.raw());
    CHECK(census[1] == 1);  // unique minimum below d/2
}

TEST_CASE("coset leader uniqueness below half distance") {
    // every vector of weight <= 3 leads its own coset, exhaustively
    auto golay = LinearCode::golay24();
    uint64_t checked = 0;
    for (uint32_t mask = 0; mask < (1u << 24); ++mask) {
        if (std::popcount(mask) > 3) continue;
        auto z = FieldVector::from_packed(mask, 24);
        if (!(golay->coset_leader(golay->syndrome(z)) == z)) {
            CAPTURE(mask);
            FAIL("coset leader mismatch");
        }
        ++checked;
    }
    CHECK(checked == 1 + 24 + 276 + 2024);
}

TEST_CASE("type sets") {
    auto rep3 = LinearCode::repetition(2, 3);
    FieldVector s0(2, 2);
    CHECK(rep3->type_set(s0) == TypeSet{0, 3});

    auto trivial = LinearCode::trivial(2, 4);
    FieldVector s(2, 4);
    s.set(0, 1);
    CHECK(trivial->type_set(s) == TypeSet{1});  // singleton coset
}

TEST_CASE("type set distributions, closed forms") {
    SECTION("complete code: one set holding every type") {
        auto c = LinearCode::complete(2, 5);
        const auto& t = c->typesets();
        REQUIRE(t.size() == 1);
        CHECK(t.sets[0].size() == 6);
        CHECK(t.syndrome_count[0] == 1);
        CHECK(t.denom_exp == 0);
    }
    SECTION("trivial code n=2: binomial singleton masses") {
        auto c = LinearCode::trivial(2, 2);
        const auto& t = c->typesets();
        REQUIRE(t.size() == 3);
        auto probs = t.probs<Rational>();
        CHECK(probs[t.index_of({0})] == Rational(1, 4));
        CHECK(probs[t.index_of({1})] == Rational(1, 2));
        CHECK(probs[t.index_of({2})] == Rational(1, 4));
    }
    SECTION("repetition code pairs weights w and n-w") {
        auto c = LinearCode::repetition(2, 24);
        const auto& t = c->typesets();
        REQUIRE(t.size() == 13);
        auto probs = t.probs<Rational>();
        CHECK(probs[t.index_of({0, 24})] == Rational(2, 1 << 24) * Rational(binomial(24, 0)));
        CHECK(probs[t.index_of({11, 13})] == Rational(2 * binomial(24, 11), BigInt(1) << 24));
        CHECK(probs[t.index_of({12})] == Rational(binomial(24, 12), BigInt(1) << 24));
    }
}

TEST_CASE("type set distribution matches per-coset enumeration") {
    // repetition and trivial closed forms vs a generic rebuild of the same H
    for (auto code : {LinearCode::repetition(2, 6), LinearCode::trivial(2, 4),
                      LinearCode::repetition(3, 4)}) {
        auto generic = LinearCode::from_matrix("generic-copy", code->check_matrix());
        const auto& a = code->typesets();
        const auto& b = generic->typesets();
        REQUIRE(a.sets == b.sets);
        CHECK(a.syndrome_count == b.syndrome_count);
        CHECK(a.denom_exp == b.denom_exp);
        if (a.has_leader_count && b.has_leader_count) CHECK(a.leader_count == b.leader_count);
    }
}

TEST_CASE("juxtaposition type-set distribution via Minkowski convolution") {
    auto rep3 = LinearCode::repetition(2, 3);
    SECTION("r = 1 is the base") {
        auto t = juxtapose_type_set_distribution(rep3->typesets(), 1);
        CHECK(t.sets == rep3->typesets().sets);
        CHECK(t.syndrome_count == rep3->typesets().syndrome_count);
    }
    SECTION("two blocks of the trivial n=1 code") {
        auto t1 = LinearCode::trivial(2, 1);
        auto conv = juxtapose_type_set_distribution(t1->typesets(), 2);
        REQUIRE(conv.size() == 3);
        auto probs = conv.probs<Rational>();
        CHECK(probs[conv.index_of({0})] == Rational(1, 4));
        CHECK(probs[conv.index_of({1})] == Rational(1, 2));
        CHECK(probs[conv.index_of({2})] == Rational(1, 4));
    }
    SECTION("I_2 (x) rep3 equals brute-force enumeration") {
        auto conv = juxtapose_type_set_distribution(rep3->typesets(), 2);
        auto brute = LinearCode::from_matrix("i2rep3", block_diagonal(rep3->check_matrix(), 2));
        const auto& bt = brute->typesets();
        REQUIRE(conv.sets == bt.sets);
        CHECK(conv.syndrome_count == bt.syndrome_count);
        CHECK(conv.denom_exp == bt.denom_exp);
        CHECK(conv.leader_count == bt.leader_count);
    }
    SECTION("juxtapose() code exposes the convolved table") {
        auto jux = LinearCode::juxtapose(rep3, 2);
        CHECK(jux->typesets().sets == juxtapose_type_set_distribution(rep3->typesets(), 2).sets);
    }
    SECTION("I_2 of a [6,3] code with nontrivial type sets") {
        std::vector<FieldVector> rows;
        for (auto bits : {std::vector<uint8_t>{0, 1, 1, 1, 0, 0}, {1, 0, 1, 0, 1, 0},
                          {1, 1, 0, 0, 0, 1}})
            rows.emplace_back(2, bits);
        auto base = LinearCode::from_matrix("p63", ParityCheckMatrix(2, 6, rows));
        auto conv = juxtapose_type_set_distribution(base->typesets(), 2);
        auto brute = LinearCode::from_matrix("i2p63", block_diagonal(base->check_matrix(), 2));
        CHECK(conv.sets == brute->typesets().sets);
        CHECK(conv.syndrome_count == brute->typesets().syndrome_count);
        CHECK(conv.leader_count == brute->typesets().leader_count);
    }
}

TEST_CASE("all cosets account for q^n vectors") {
    std::mt19937_64 rng(3);
    auto golay = LinearCode::golay24();
    // via the type-set table: counts weighted by coset size q^k
    BigInt total = 0;
    for (const auto& c : golay->typesets().syndrome_count) total += c * int_pow(2, 12);
    CHECK(total == int_pow(2, 24));

    auto rep = LinearCode::repetition(3, 4);
    total = 0;
    for (const auto& c : rep->typesets().syndrome_count) total += c * 3;
    CHECK(total == int_pow(3, 4));
}

TEST_CASE("typeset_of agrees with type_set lookup") {
    std::mt19937_64 rng(17);
    auto jux = LinearCode::juxtapose(LinearCode::repetition(2, 3), 2);
    for (int rep = 0; rep < 64; ++rep) {
        std::vector<uint8_t> s(4);
        for (auto& x : s) x = static_cast<uint8_t>(rng() % 2);
        const uint32_t ts = jux->typeset_of(s);
        // cross-check against direct coset enumeration
        std::set<uint32_t> seen;
        jux->for_each_in_coset(s, [&](const FieldVector& z) {
            seen.insert(jux->typesets().space->id_of(z));
        });
        CHECK(TypeSet(seen.begin(), seen.end()) == jux->typesets().sets[ts]);
    }
}

TEST_CASE("sample_in_coset returns members of the right class") {
    LocalRng rng(4);
    auto golay = LinearCode::golay24();
    auto e1 = FieldVector::unit(2, 24, 0);
    auto syn = golay->syndrome(e1);
    CHECK(golay->sample_in_coset(syn.raw(), 1, rng) == e1);  // unique below d/2

    auto jux = LinearCode::juxtapose(LinearCode::repetition(2, 3), 2);
    std::vector<uint8_t> s = {1, 0, 0, 1};
    auto census = [&] {
        std::map<uint32_t, int> c;
        jux->for_each_in_coset(s, [&](const FieldVector& z) { ++c[static_cast<uint32_t>(z.weight())]; });
        return c;
    }();
    for (int rep = 0; rep < 100; ++rep) {
        const uint32_t target = rep % 2 ? 2 : 4;  // weights present in this coset
        if (!census.count(target)) continue;
        auto z = jux->sample_in_coset(s, target, rng);
        CHECK(z.weight() == target);
        CHECK(jux->syndrome(z).raw() == s);
    }
}

TEST_CASE("enumeration budget guards") {
    auto big = LinearCode::complete(2, 40);
    FieldVector s(2, 1);  // wrong length triggers argument check first
    CHECK_THROWS(big->for_each_in_coset(std::vector<uint8_t>{}, [](const FieldVector&) {}));
}

TEST_CASE("default catalog") {
    auto cat = default_catalog(2, 24);
    REQUIRE(cat.size() == 4);
    CHECK(cat[0]->name() == "trivial");
    CHECK(cat[1]->name() == "repetition");
    CHECK(cat[2]->name() == "golay24");
    CHECK(cat[3]->name() == "complete");
}

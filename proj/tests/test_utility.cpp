#include <doctest.h>

#include <chrono>
#include <cmath>
#include <thread>

#include "oracles.hpp"
#include "pasv/errors.hpp"
#include "pasv/rng.hpp"
#include "pasv/utility.hpp"

using namespace pasv;
using oracle::CountingUtility;

namespace {

// 8 training rows, 3 features, 2 classes: small enough to brute-force,
// irregular enough to exercise neighbor selection.
TabularDataset demo_train() {
    TabularDataset d;
    d.rows = {{0.0, 0.5, 1.0}, {1.0, 1.5, 0.0}, {2.0, 0.0, 0.5}, {0.5, 2.0, 1.5},
              {1.5, 1.0, 2.0}, {2.5, 2.5, 0.5}, {0.0, 1.0, 2.5}, {1.0, 0.0, 1.0}};
    d.labels = {0, 1, 0, 1, 0, 1, 0, 1};
    return d;
}

TabularDataset demo_eval() {
    TabularDataset d;
    d.rows = {{0.2, 0.4, 1.1}, {1.8, 1.2, 0.3}, {0.9, 1.9, 1.4}, {2.2, 0.1, 0.8},
              {1.1, 1.1, 1.9}};
    d.labels = {0, 1, 1, 0, 0};
    return d;
}

PredictorPtr demo_predictor() {
    return logistic_predictor({{0.8, -0.4, 0.3}, {-0.5, 0.6, -0.2}}, {0.1, -0.1});
}

} // namespace

TEST_CASE("table utility") {
    auto u = table_utility(3, {{"0", 0.0}, {"1", 1.0}}, std::nullopt);
    CHECK(u->evaluate(Bitset::of(3, {0})) == 1.0);
    CHECK(u->evaluate(Bitset(3)) == 0.0);
    CHECK_THROWS_AS(u->evaluate(Bitset::of(3, {1})), MissingSubset);

    auto with_default = table_utility(3, {{"1", 1.0}}, 0.25);
    CHECK(with_default->evaluate(Bitset::of(3, {2})) == 0.25);

    CHECK_THROWS_AS(table_utility(3, {}, std::nullopt), InvalidArgument);
}

TEST_CASE("elementary game") {
    auto u = elementary_game(Bitset::of(5, {1, 3}));
    CHECK(u->evaluate(Bitset::of(5, {1, 3, 4})) == 1.0);
    CHECK(u->evaluate(Bitset::of(5, {1})) == 0.0);

    auto vacuous = elementary_game(Bitset(5));
    CHECK(vacuous->evaluate(Bitset(5)) == 1.0);
    CHECK(vacuous->evaluate(Bitset::of(5, {2})) == 1.0);

    // Monotone in the subset.
    Rng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        Bitset s(5);
        Bitset t(5);
        for (int i = 0; i < 5; ++i) {
            if (rng.next_double() < 0.4) s.set(i);
            if (rng.next_double() < 0.4) t.set(i);
        }
        t |= s;
        CHECK(u->evaluate(s) <= u->evaluate(t));
    }
}

TEST_CASE("lineage utility") {
    // Players: 0,1 sources; 2 clean copy of 0; 3 poisoned copy of 1.
    LineageSpec spec;
    spec.sources = Bitset::of(4, {0, 1});
    spec.gains = {{0, 1.0}, {1, 0.8}};
    spec.copy_to_source = {{2, 0}, {3, 1}};
    spec.noise_penalty = {{3, 0.2}};
    auto u = lineage_utility(spec);

    CHECK(u->evaluate(Bitset::of(4, {0})) == doctest::Approx(1.0));
    // A lone copy substitutes for its source.
    CHECK(u->evaluate(Bitset::of(4, {2})) == doctest::Approx(1.0));
    CHECK(u->evaluate(Bitset::of(4, {3})) == doctest::Approx(0.8));
    // Source present: clean copy adds nothing, poisoned copy costs.
    CHECK(u->evaluate(Bitset::of(4, {0, 2})) == doctest::Approx(1.0));
    CHECK(u->evaluate(Bitset::of(4, {1, 3})) == doctest::Approx(0.6));
    CHECK(u->evaluate(Bitset::full(4)) == doctest::Approx(1.6));

    // Additivity across (source, copies) groups.
    const double g0 = u->evaluate(Bitset::of(4, {0, 2}));
    const double g1 = u->evaluate(Bitset::of(4, {1, 3}));
    CHECK(u->evaluate(Bitset::full(4)) == doctest::Approx(g0 + g1).epsilon(1e-14));

    LineageSpec self;
    self.sources = Bitset::of(2, {0});
    self.gains = {{0, 1.0}};
    self.copy_to_source = {{1, 1}};
    CHECK_THROWS_AS(lineage_utility(self), BadCopyMap);

    LineageSpec missing_gain;
    missing_gain.sources = Bitset::of(2, {0, 1});
    missing_gain.gains = {{0, 1.0}};
    CHECK_THROWS_AS(lineage_utility(missing_gain), BadCopyMap);
}

TEST_CASE("external utility speaks the line protocol") {
    auto u = external_utility(
        5,
        "python3 -u -c \"import sys,json\n"
        "for line in sys.stdin:\n"
        "    print(len(json.loads(line)['subset']), flush=True)\"",
        std::chrono::milliseconds(10'000));
    CHECK(u->evaluate(Bitset::of(5, {0, 2})) == 2.0);
    CHECK(u->evaluate(Bitset(5)) == 0.0);
    CHECK(u->evaluate(Bitset::full(5)) == 5.0);
}

TEST_CASE("external utility failure modes") {
    auto malformed = external_utility(3, "while read line; do echo abc; done",
                                      std::chrono::milliseconds(5'000));
    CHECK_THROWS_AS(malformed->evaluate(Bitset(3)), ProtocolViolation);

    auto dead = external_utility(3, "exit 0", std::chrono::milliseconds(5'000));
    CHECK_THROWS_AS(dead->evaluate(Bitset(3)), ProcessFailure);

    auto slow = external_utility(3, "read line; sleep 30",
                                 std::chrono::milliseconds(200));
    CHECK_THROWS_AS(slow->evaluate(Bitset(3)), Timeout);
}

TEST_CASE("knn imputation utility matches the brute-force re-implementation") {
    const auto train = demo_train();
    const auto eval = demo_eval();
    const auto f = demo_predictor();
    auto u = knn_imputation_utility(train, eval, f, 3, 5, 1234);

    for (std::uint32_t mask = 0; mask < 8; ++mask) {
        Bitset s(3);
        std::vector<int> members;
        for (int j = 0; j < 3; ++j) {
            if (mask & (1u << j)) {
                s.set(j);
                members.push_back(j);
            }
        }
        const double direct = oracle::direct_knn_utility(train, eval, *f, 3, 5, 1234, members);
        CHECK(u->evaluate(s) == doctest::Approx(direct).epsilon(1e-13));
    }
}

TEST_CASE("knn utility with every feature revealed is the plain mean probability") {
    const auto train = demo_train();
    const auto eval = demo_eval();
    const auto f = demo_predictor();
    for (int k : {1, 3, 8}) {
        auto u = knn_imputation_utility(train, eval, f, k, 5, 7);
        double mean = 0.0;
        for (int t = 0; t < eval.row_count(); ++t) {
            mean += f->predict_proba(eval.rows[t], eval.labels[t]);
        }
        mean /= eval.row_count();
        CHECK(u->evaluate(Bitset::full(3)) == doctest::Approx(mean).epsilon(1e-13));
    }
}

TEST_CASE("knn utility with a single training row is forced onto it") {
    TabularDataset train;
    train.rows = {{1.0, 2.0, 3.0}};
    train.labels = {0};
    const auto eval = demo_eval();
    const auto f = demo_predictor();
    auto u = knn_imputation_utility(train, eval, f, 1, 5, 3);
    double expect = 0.0;
    // Composite keeps x on S and the single row elsewhere; S={0}.
    for (int t = 0; t < eval.row_count(); ++t) {
        const std::vector<double> composite = {eval.rows[t][0], 2.0, 3.0};
        expect += f->predict_proba(composite, eval.labels[t]);
    }
    expect /= eval.row_count();
    CHECK(u->evaluate(Bitset::of(3, {0})) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("knn utility validation") {
    CHECK_THROWS_AS(
        knn_imputation_utility(demo_train(), demo_eval(), demo_predictor(), 9, 5, 0),
        KTooLarge);
    CHECK_THROWS_AS(
        knn_imputation_utility(demo_train(), demo_eval(), demo_predictor(), 3, 6, 0),
        InvalidArgument);
    TabularDataset wrong = demo_eval();
    for (auto& row : wrong.rows) row.push_back(0.0);
    CHECK_THROWS_AS(knn_imputation_utility(demo_train(), wrong, demo_predictor(), 3, 5, 0),
                    DimensionMismatch);
}

TEST_CASE("utilities are deterministic") {
    const auto train = demo_train();
    const auto eval = demo_eval();
    auto knn = knn_imputation_utility(train, eval, demo_predictor(), 2, 4, 99);
    LineageSpec spec;
    spec.sources = Bitset::of(3, {0});
    spec.gains = {{0, 2.0}};
    spec.copy_to_source = {{1, 0}, {2, 0}};
    spec.noise_penalty = {{2, 0.5}};
    auto lineage = lineage_utility(spec);

    Rng rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        Bitset s(3);
        for (int j = 0; j < 3; ++j) {
            if (rng.next_double() < 0.5) s.set(j);
        }
        const double a = knn->evaluate(s);
        const double b = knn->evaluate(s);
        CHECK(a == b);
        CHECK(lineage->evaluate(s) == lineage->evaluate(s));
    }
}

TEST_CASE("cache memoizes per canonical subset") {
    auto counter = std::make_shared<CountingUtility>(elementary_game(Bitset::of(4, {1})));
    auto u = cached(counter);
    CHECK(u->evaluate(Bitset::of(4, {1, 2})) == 1.0);
    CHECK(u->evaluate(Bitset::of(4, {1, 2})) == 1.0);
    CHECK(counter->calls_ == 1);
    CHECK(u->evaluate(Bitset::of(4, {2})) == 0.0);
    CHECK(counter->calls_ == 2);

    // Transparent on values.
    auto plain = elementary_game(Bitset::of(4, {0, 3}));
    auto wrapped = cached(plain);
    Rng rng(43);
    for (int trial = 0; trial < 1000; ++trial) {
        Bitset s(4);
        for (int j = 0; j < 4; ++j) {
            if (rng.next_double() < 0.5) s.set(j);
        }
        CHECK(plain->evaluate(s) == wrapped->evaluate(s));
    }

    // Re-wrapping is the identity.
    CHECK(cached(wrapped) == wrapped);
}

TEST_CASE("cache does not memoize errors") {
    auto missing = table_utility(3, {{"1", 1.0}}, std::nullopt);
    auto counter = std::make_shared<CountingUtility>(missing);
    auto u = cached(counter);
    CHECK_THROWS_AS(u->evaluate(Bitset::of(3, {1})), MissingSubset);
    CHECK_THROWS_AS(u->evaluate(Bitset::of(3, {1})), MissingSubset);
    CHECK(counter->calls_ == 2);
    CHECK(u->evaluate(Bitset::of(3, {0})) == 1.0);
}

TEST_CASE("concurrent cached evaluation computes each key once") {
    auto counter = std::make_shared<CountingUtility>(elementary_game(Bitset::of(8, {0})));
    auto u = cached(counter);
    std::vector<std::thread> workers;
    for (int w = 0; w < 8; ++w) {
        workers.emplace_back([&] {
            for (std::uint32_t mask = 0; mask < 256; ++mask) {
                Bitset s(8);
                for (int j = 0; j < 8; ++j) {
                    if (mask & (1u << j)) s.set(j);
                }
                u->evaluate(s);
            }
        });
    }
    for (auto& t : workers) t.join();
    CHECK(counter->calls_ == 256);
}

TEST_CASE("logistic predictor is a probability over classes") {
    auto f = logistic_predictor({{1.0, -1.0}, {0.5, 0.5}, {-1.0, 0.0}}, {0.0, 0.1, -0.2});
    const std::vector<double> x = {0.3, -0.7};
    double total = 0.0;
    for (int c = 0; c < 3; ++c) {
        const double p = f->predict_proba(x, c);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(f->predict_proba(x, 3), IndexOutOfRange);
    CHECK_THROWS_AS(f->predict_proba(std::vector<double>{1.0}, 0), DimensionMismatch);
}

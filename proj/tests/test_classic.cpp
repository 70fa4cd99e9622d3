#include <catch2/catch_amalgamated.hpp>

#include "autosmote/classic.hpp"
#include "test_support.hpp"

using namespace autosmote;

namespace {

Dataset two_class(std::size_t majority, std::size_t minority, std::uint64_t seed = 1) {
    Dataset d;
    Rng rng(seed);
    d.features = Matrix(majority + minority, 3);
    for (std::size_t i = 0; i < d.features.rows(); ++i) {
        const double base = i < majority ? 0.0 : 0.55;
        for (std::size_t j = 0; j < 3; ++j) {
            d.features.at(i, j) = base + 0.4 * rng.uniform01();
        }
        d.labels.push_back(i < majority ? 0 : 1);
    }
    d.class_counts = {majority, minority};
    d.feature_names = {"a", "b", "c"};
    d.label_names = {"maj", "min"};
    return d;
}

/// The 12-point line fixture whose danger set was derived by hand:
/// minority instances at 6.0 and 6.1 (rows 7, 8) sit between a majority
/// outpost at 5.9 and one at 8.0, so their 3-neighborhoods are 2/3
/// majority; 0.6 (row 5) is engulfed (noise); 10.0/10.1 (rows 10, 11)
/// pair up with mostly-minority neighborhoods (safe).
Dataset borderline_fixture() {
    Dataset d;
    const std::vector<double> xs = {0.0, 0.1, 0.2, 0.3, 0.4, 0.6,
                                    5.9, 6.0, 6.1, 8.0, 10.0, 10.1};
    const std::vector<int> ys = {0, 0, 0, 0, 0, 1, 0, 1, 1, 0, 1, 1};
    d.features = Matrix(12, 1);
    for (std::size_t i = 0; i < 12; ++i) d.features.at(i, 0) = xs[i];
    d.labels = ys;
    d.class_counts = {7, 5};
    d.feature_names = {"x"};
    d.label_names = {"maj", "min"};
    return d;
}

bool rows_equal(const Matrix& m, std::size_t r, const std::vector<double>& v) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (m.at(r, j) != v[j]) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("random oversampling duplicates existing minority rows to target") {
    auto d = two_class(100, 20);
    auto out = random_oversample(d, OversamplePlan::balance_to_majority(d, 3));
    CHECK(out.class_counts == std::vector<std::size_t>{100, 100});
    CHECK(out.n() == 200);
    // membership sweep: every synthetic row equals some original minority row
    for (std::size_t r = d.n(); r < out.n(); ++r) {
        CHECK(out.labels[r] == 1);
        bool found = false;
        for (std::size_t o = 100; o < 120 && !found; ++o) {
            found = rows_equal(out.features, r, d.features.row_values(o));
        }
        CHECK(found);
    }
}

TEST_CASE("an already balanced dataset passes through unchanged") {
    auto d = two_class(30, 30);
    auto out = random_oversample(d, OversamplePlan::balance_to_majority(d, 3));
    CHECK(out.n() == d.n());
    CHECK(out.features.data() == d.features.data());
    auto smoted = smote(d, OversamplePlan::balance_to_majority(d, 3), 5);
    CHECK(smoted.n() == d.n());
}

TEST_CASE("smote on a two-point minority stays on their segment") {
    Dataset d;
    d.features = Matrix::from_rows({{5.0, 5.0}, {5.2, 4.9}, {4.9, 5.1}, {5.1, 5.0},
                                    {0.0, 0.0}, {1.0, 1.0}});
    d.labels = {0, 0, 0, 0, 1, 1};
    d.class_counts = {4, 2};
    d.feature_names = {"x", "y"};
    d.label_names = {"maj", "min"};
    auto out = smote(d, OversamplePlan::balance_to_majority(d, 9), 5);
    CHECK(out.class_counts == std::vector<std::size_t>{4, 4});
    for (std::size_t r = 6; r < out.n(); ++r) {
        // on the segment x = y, inside [0,1]^2
        CHECK(out.features.at(r, 0) == Catch::Approx(out.features.at(r, 1)).margin(1e-12));
        CHECK(out.features.at(r, 0) >= 0.0);
        CHECK(out.features.at(r, 0) <= 1.0);
    }
}

TEST_CASE("smote balances counts and keeps synthetics inside the class box") {
    auto d = two_class(100, 20);
    auto out = smote(d, OversamplePlan::balance_to_majority(d, 7), 5);
    CHECK(out.class_counts == std::vector<std::size_t>{100, 100});
    double lo[3] = {1e9, 1e9, 1e9}, hi[3] = {-1e9, -1e9, -1e9};
    for (std::size_t r = 100; r < 120; ++r) {
        for (std::size_t j = 0; j < 3; ++j) {
            lo[j] = std::min(lo[j], d.features.at(r, j));
            hi[j] = std::max(hi[j], d.features.at(r, j));
        }
    }
    for (std::size_t r = d.n(); r < out.n(); ++r) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(out.features.at(r, j) >= lo[j] - 1e-12);
            CHECK(out.features.at(r, j) <= hi[j] + 1e-12);
        }
    }
    // originals appear unchanged, in order, as the prefix
    for (std::size_t r = 0; r < d.n(); ++r) {
        CHECK(rows_equal(out.features, r, d.features.row_values(r)));
    }
}

TEST_CASE("smote refuses a singleton minority class") {
    Dataset d = two_class(5, 2);
    d.labels[6] = 0;
    d.class_counts = {6, 1};
    CHECK_THROWS_AS(smote(d, OversamplePlan::balance_to_majority(d, 0), 3),
                    std::runtime_error);
}

TEST_CASE("borderline danger set matches the hand enumeration") {
    auto d = borderline_fixture();
    CHECK(borderline_danger_set(d, 1, 3) == std::vector<std::size_t>{7, 8});
}

TEST_CASE("borderline seeds only danger instances") {
    auto d = borderline_fixture();
    auto out = borderline_smote(d, OversamplePlan::balance_to_majority(d, 11), 3);
    CHECK(out.class_counts == std::vector<std::size_t>{7, 7});
    // seeds 6.0/6.1 interpolate toward same-class neighbors in [0.6, 10.1];
    // partners of the danger rows at k=3 are {6.1, 0.6(!), 10.0} etc., but
    // every synthetic must lie between a danger point and a minority point.
    for (std::size_t r = d.n(); r < out.n(); ++r) {
        const double v = out.features.at(r, 0);
        bool explained = false;
        for (double seed : {6.0, 6.1}) {
            for (double partner : {0.6, 6.0, 6.1, 10.0, 10.1}) {
                if (v >= std::min(seed, partner) - 1e-12 &&
                    v <= std::max(seed, partner) + 1e-12) {
                    explained = true;
                }
            }
        }
        CHECK(explained);
    }
}

TEST_CASE("borderline with no danger instances falls back to plain smote") {
    // minority is a tight far cluster: all-minority neighborhoods -> safe
    Dataset d;
    d.features = Matrix(10, 1);
    const std::vector<double> xs = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                    20.0, 20.1, 20.2, 20.3};
    for (std::size_t i = 0; i < 10; ++i) d.features.at(i, 0) = xs[i];
    d.labels = {0, 0, 0, 0, 0, 0, 1, 1, 1, 1};
    d.class_counts = {6, 4};
    d.feature_names = {"x"};
    d.label_names = {"maj", "min"};
    CHECK(borderline_danger_set(d, 1, 3).empty());
    auto out = borderline_smote(d, OversamplePlan::balance_to_majority(d, 2), 3);
    CHECK(out.class_counts == std::vector<std::size_t>{6, 6});
    for (std::size_t r = d.n(); r < out.n(); ++r) {
        CHECK(out.features.at(r, 0) >= 20.0 - 1e-12);
        CHECK(out.features.at(r, 0) <= 20.3 + 1e-12);
    }
}

TEST_CASE("adasyn allocation sums exactly to the required count") {
    Rng rng(55);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> weights(1 + rng.uniform_index(12));
        for (auto& w : weights) w = rng.uniform01();
        const std::size_t total = rng.uniform_index(200);
        auto alloc = detail::largest_remainder(weights, total);
        // oracle: recompute floors and hand out remainders by largest fraction
        const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
        std::size_t floor_total = 0;
        if (sum > 0.0) {
            for (double w : weights) {
                floor_total += static_cast<std::size_t>(total * w / sum);
            }
            CHECK(std::accumulate(alloc.begin(), alloc.end(), std::size_t{0}) == total);
            for (std::size_t i = 0; i < weights.size(); ++i) {
                const double exact = total * weights[i] / sum;
                CHECK(alloc[i] >= static_cast<std::size_t>(exact));
                CHECK(alloc[i] <= static_cast<std::size_t>(exact) + 1);
            }
        }
    }
}

TEST_CASE("adasyn routes every synthetic to the lone hard instance") {
    // minority: one instance deep inside majority (r=1), three far away (r=0)
    Dataset d;
    d.features = Matrix(9, 1);
    const std::vector<double> xs = {0.0, 0.1, 0.2, 0.3, 0.4,
                                    0.25, 30.0, 30.1, 30.2};
    for (std::size_t i = 0; i < 9; ++i) d.features.at(i, 0) = xs[i];
    d.labels = {0, 0, 0, 0, 0, 1, 1, 1, 1};
    d.class_counts = {5, 4};
    d.feature_names = {"x"};
    d.label_names = {"maj", "min"};
    auto out = adasyn(d, OversamplePlan::balance_to_majority(d, 4), 3);
    CHECK(out.class_counts == std::vector<std::size_t>{5, 5});
    // the single synthetic must be seeded at 0.25 toward a minority neighbor
    const double v = out.features.at(9, 0);
    CHECK(v >= 0.25 - 1e-12);
    CHECK(v <= 30.2 + 1e-12);
}

TEST_CASE("adasyn with uniform hardness allocates evenly") {
    // symmetric fixture: every minority instance has one majority neighbor
    // at distance 0.1 and minority fill further out
    auto d = two_class(40, 10, 9);
    auto out = adasyn(d, OversamplePlan::balance_to_majority(d, 12), 5);
    CHECK(out.class_counts == std::vector<std::size_t>{40, 40});
}

TEST_CASE("every sampler is deterministic under a fixed seed") {
    auto d = two_class(50, 12, 4);
    auto plan = OversamplePlan::balance_to_majority(d, 77);
    CHECK(random_oversample(d, plan).features.data() ==
          random_oversample(d, plan).features.data());
    CHECK(smote(d, plan, 4).features.data() == smote(d, plan, 4).features.data());
    CHECK(borderline_smote(d, plan, 4).features.data() ==
          borderline_smote(d, plan, 4).features.data());
    CHECK(adasyn(d, plan, 4).features.data() == adasyn(d, plan, 4).features.data());
}

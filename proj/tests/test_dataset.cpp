#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "autosmote/dataset.hpp"

using namespace autosmote;

namespace {

struct TempCsv {
    std::filesystem::path path;
    explicit TempCsv(const std::string& contents) {
        path = std::filesystem::temp_directory_path() /
               ("autosmote_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++) + ".csv");
        std::ofstream out(path);
        out << contents;
    }
    ~TempCsv() { std::filesystem::remove(path); }
    static inline int counter = 0;
};

Dataset synthetic_two_class(std::size_t a, std::size_t b) {
    Dataset d;
    d.features = Matrix(a + b, 2);
    Rng rng(1);
    for (std::size_t i = 0; i < a + b; ++i) {
        d.features.at(i, 0) = rng.uniform01();
        d.features.at(i, 1) = rng.uniform01();
        d.labels.push_back(i < a ? 0 : 1);
    }
    d.class_counts = {a, b};
    d.feature_names = {"x0", "x1"};
    d.label_names = {"neg", "pos"};
    return d;
}

}  // namespace

TEST_CASE("labels are indexed in first-appearance order") {
    TempCsv file("x,y\n1.0,a\n2.0,b\n3.0,a\n");
    auto d = load_csv(file.path.string(), "y");
    CHECK(d.labels == std::vector<int>{0, 1, 0});
    CHECK(d.num_classes() == 2);
    CHECK(d.label_names == std::vector<std::string>{"a", "b"});
    CHECK(d.class_counts == std::vector<std::size_t>{2, 1});
}

TEST_CASE("load_csv rejects bad inputs") {
    CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", "y"), std::runtime_error);
    TempCsv no_label("x,y\n1,2\n");
    CHECK_THROWS_AS(load_csv(no_label.path.string(), "z"), std::runtime_error);
    TempCsv non_numeric("x,y\nhello,a\n");
    CHECK_THROWS_AS(load_csv(non_numeric.path.string(), "y"), std::runtime_error);
}

TEST_CASE("wisconsin csv loads with the shape reported for it") {
    const std::string path = std::string(AUTOSMOTE_DATA_DIR) + "/wisconsin.csv";
    if (!std::filesystem::exists(path)) {
        SKIP("data/wisconsin.csv not present; run tools/fetch_datasets.py");
    }
    auto d = load_csv(path, "diagnosis");
    CHECK(d.n() == 569);
    CHECK(d.f() == 30);
    CHECK(d.num_classes() == 2);
}

TEST_CASE("diabetes csv loads with the shape reported for it") {
    const std::string path = std::string(AUTOSMOTE_DATA_DIR) + "/diabetes.csv";
    if (!std::filesystem::exists(path)) {
        SKIP("data/diabetes.csv not present; see tools/fetch_datasets.py");
    }
    auto d = load_csv(path, "class");
    CHECK(d.n() == 768);
    CHECK(d.f() == 8);
    CHECK(d.num_classes() == 2);
}

TEST_CASE("glass csv loads with the shape reported for it") {
    const std::string path = std::string(AUTOSMOTE_DATA_DIR) + "/glass.csv";
    if (!std::filesystem::exists(path)) {
        SKIP("data/glass.csv not present; see tools/fetch_datasets.py");
    }
    auto d = load_csv(path, "class");
    CHECK(d.n() == 214);
    CHECK(d.f() == 9);
}

TEST_CASE("min-max scaling maps endpoints to 0 and 1") {
    TempCsv file("x,y\n0,a\n5,a\n10,b\n");
    auto d = load_csv(file.path.string(), "y");
    auto [scaled, stats] = impute_and_normalize(d);
    CHECK(scaled.features.at(0, 0) == 0.0);
    CHECK(scaled.features.at(1, 0) == 0.5);
    CHECK(scaled.features.at(2, 0) == 1.0);
    CHECK(stats.min[0] == 0.0);
    CHECK(stats.max[0] == 10.0);
}

TEST_CASE("missing cells are filled with the training mean before scaling") {
    TempCsv file("x,y\n2,a\n,a\n4,b\n");
    auto d = load_csv(file.path.string(), "y");
    CHECK(std::isnan(d.features.at(1, 0)));
    auto [scaled, stats] = impute_and_normalize(d);
    CHECK(stats.mean[0] == 3.0);
    // imputed 3 inside range [2,4] -> scaled 0.5
    CHECK(scaled.features.at(1, 0) == 0.5);
}

TEST_CASE("constant feature maps to zero without error") {
    TempCsv file("x,y\n7,a\n7,b\n");
    auto d = load_csv(file.path.string(), "y");
    auto [scaled, stats] = impute_and_normalize(d);
    CHECK(scaled.features.at(0, 0) == 0.0);
    CHECK(scaled.features.at(1, 0) == 0.0);
}

TEST_CASE("test rows outside the training range are clamped") {
    TempCsv train_file("x,y\n0,a\n10,b\n");
    TempCsv test_file("x,y\n-5,a\n15,b\n5,a\n");
    auto train = load_csv(train_file.path.string(), "y");
    auto test = load_csv(test_file.path.string(), "y");
    auto [_, stats] = impute_and_normalize(train);
    auto [scaled_test, __] = impute_and_normalize(test, stats);
    CHECK(scaled_test.features.at(0, 0) == 0.0);
    CHECK(scaled_test.features.at(1, 0) == 1.0);
    CHECK(scaled_test.features.at(2, 0) == 0.5);
}

TEST_CASE("normalized training features stay in the unit interval") {
    auto d = synthetic_two_class(30, 10);
    for (std::size_t i = 0; i < d.n(); ++i) d.features.at(i, 0) = d.features.at(i, 0) * 100 - 50;
    auto [scaled, stats] = impute_and_normalize(d);
    for (std::size_t i = 0; i < scaled.features.size(); ++i) {
        CHECK(scaled.features[i] >= 0.0);
        CHECK(scaled.features[i] <= 1.0);
    }
}

TEST_CASE("stratified split keeps exact per-class proportions") {
    auto d = synthetic_two_class(100, 20);
    auto pair = stratified_split(d, 0.8, 17);
    CHECK(pair.train.class_counts == std::vector<std::size_t>{80, 16});
    CHECK(pair.test.class_counts == std::vector<std::size_t>{20, 4});
    pair.train.validate();
    pair.test.validate();
}

TEST_CASE("identical seeds give identical splits") {
    auto d = synthetic_two_class(40, 15);
    auto a = stratified_split(d, 0.8, 5);
    auto b = stratified_split(d, 0.8, 5);
    CHECK(a.train.features.data() == b.train.features.data());
    CHECK(a.test.labels == b.test.labels);
}

TEST_CASE("distinct seeds give distinct test sets with preserved proportions") {
    auto d = synthetic_two_class(40, 10);
    std::set<std::vector<double>> seen;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto pair = stratified_split(d, 0.8, seed);
        CHECK(pair.test.class_counts == std::vector<std::size_t>{8, 2});
        for (std::size_t c = 0; c < 2; ++c) {
            const double src = static_cast<double>(d.class_counts[c]) / d.n();
            const double tr =
                static_cast<double>(pair.train.class_counts[c]) / pair.train.n();
            CHECK(std::fabs(tr - src) <= 1.0 / static_cast<double>(pair.train.n()));
        }
        seen.insert(pair.test.features.data());
    }
    CHECK(seen.size() == 10);
}

TEST_CASE("splitting a class with fewer than two instances fails") {
    auto d = synthetic_two_class(5, 2);
    d.labels[6] = 0;
    d.class_counts = {6, 1};
    CHECK_THROWS_AS(stratified_split(d, 0.8, 0), std::runtime_error);
}

TEST_CASE("imbalance ratio follows max over min") {
    auto d = synthetic_two_class(90, 10);
    CHECK(imbalance_ratio(d) == 9.0);
    auto e = synthetic_two_class(50, 50);
    CHECK(imbalance_ratio(e) == 1.0);
    Dataset m = synthetic_two_class(105, 25);
    for (int i = 0; i < 5; ++i) m.labels[i] = 2;
    m.class_counts = {100, 25, 5};
    m.label_names.push_back("third");
    CHECK(imbalance_ratio(m) == 20.0);
}

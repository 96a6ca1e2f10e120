#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "mdlad/avc.hpp"
#include "mdlad/rng.hpp"

using namespace mdlad;

namespace {

// The four-process, three-address table used as a running example: two
// benign processes touching abc/xyz, one attacker touching only evil, one
// touching everything.
CategoricalDataset example_table() {
    return CategoricalDataset::from_cells(
        {"abc.com", "xyz.com", "evil.com"},
        {{"0", "1"}, {"0", "1"}, {"0", "1"}},
        {
            1, 1, 0,  // P17
            1, 1, 0,  // P42
            0, 0, 1,  // P1337
            1, 1, 1,  // P007
        });
}

CategoricalDataset binary_dataset(const std::vector<std::vector<std::int32_t>>& rows,
                                  std::size_t m) {
    std::vector<std::string> names;
    std::vector<std::vector<std::string>> domains;
    for (std::size_t j = 0; j < m; ++j) {
        names.push_back("c" + std::to_string(j));
        domains.push_back({"0", "1"});
    }
    std::vector<std::int32_t> cells;
    for (const auto& r : rows) {
        cells.insert(cells.end(), r.begin(), r.end());
    }
    return CategoricalDataset::from_cells(names, domains, std::move(cells));
}

}  // namespace

TEST_CASE("fit_avc counts each column independently") {
    const auto data = example_table();
    const auto model = fit_avc(data);
    REQUIRE(model.per_attribute().size() == 3);
    CHECK(model.per_attribute()[0].counts == std::vector<std::int64_t>{1, 3});
    CHECK(model.per_attribute()[1].counts == std::vector<std::int64_t>{1, 3});
    CHECK(model.per_attribute()[2].counts == std::vector<std::int64_t>{2, 2});
    CHECK(model.n_records() == 4);
}

TEST_CASE("single-row fit gives one-hot counts") {
    const auto data = binary_dataset({{1, 0, 1}}, 3);
    const auto model = fit_avc(data);
    CHECK(model.per_attribute()[0].counts == std::vector<std::int64_t>{0, 1});
    CHECK(model.per_attribute()[1].counts == std::vector<std::int64_t>{1, 0});
}

TEST_CASE("constant column contributes the same cost to every record") {
    std::vector<std::vector<std::int32_t>> rows(10, {0, 0});
    for (std::size_t i = 0; i < 10; ++i) {
        rows[i][1] = static_cast<std::int32_t>(i % 2);
    }
    const auto data = binary_dataset(rows, 2);
    const auto model = fit_avc(data);
    const double constant_bits = model.per_attribute()[0].item_cost(0);
    for (std::size_t i = 0; i < 10; ++i) {
        const double with = model.item_cost(data.row(i));
        const double without = model.per_attribute()[1].item_cost(
            static_cast<std::size_t>(data.at(i, 1)));
        CHECK(with == doctest::Approx(without + constant_bits).epsilon(1e-12));
    }
}

TEST_CASE("mle + mean reproduces the worked example scores") {
    const auto data = example_table();
    const auto model =
        fit_avc(data, {ProbabilityMode::mle, Aggregation::mean});
    const double p17 = model.score(data.row(0));
    const double p42 = model.score(data.row(1));
    const double p1337 = model.score(data.row(2));
    const double p007 = model.score(data.row(3));

    CHECK(p17 == doctest::Approx(0.61).epsilon(0.01));
    CHECK(p42 == p17);
    CHECK(p1337 == doctest::Approx(1.66).epsilon(0.01));
    CHECK(p007 == p17);

    const auto ranking = avc_score_all(model, data);
    CHECK(ranking.order[0] == 2);  // P1337 first
    // The three 0.61-scored records tie and keep index order.
    CHECK(ranking.order[1] == 0);
    CHECK(ranking.order[2] == 1);
    CHECK(ranking.order[3] == 3);
}

TEST_CASE("laplace + sum on the example table") {
    const auto data = example_table();
    const auto model = fit_avc(data);
    const double expected =
        -std::log2(4.0 / 6.0) - std::log2(4.0 / 6.0) - std::log2(3.0 / 6.0);
    CHECK(model.score(data.row(0)) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(model.item_cost(data.row(0)) == model.score(data.row(0)));
}

TEST_CASE("mle scoring rejects unseen values") {
    const auto data = binary_dataset({{0}, {0}}, 1);
    const auto model = fit_avc(data, {ProbabilityMode::mle, Aggregation::sum});
    const std::vector<std::int32_t> unseen{1};
    CHECK_THROWS_WITH_AS(model.score(unseen), "zero-probability value under MLE",
                         std::invalid_argument);
    // Laplace keeps it finite.
    const auto laplace = fit_avc(data);
    CHECK(std::isfinite(laplace.score(unseen)));
}

TEST_CASE("two-record one-column dataset scores 1 bit per record") {
    const auto data = binary_dataset({{0}, {1}}, 1);
    const auto model = fit_avc(data);
    const auto ranking = avc_score_all(model, data);
    CHECK(ranking.scores[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ranking.scores[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ranking.order == std::vector<std::size_t>{0, 1});
}

TEST_CASE("identical records rank in index order") {
    std::vector<std::vector<std::int32_t>> rows(6, {1, 0, 1});
    const auto data = binary_dataset(rows, 3);
    const auto ranking = avc_score_all(fit_avc(data), data);
    CHECK(ranking.order == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("column permutation leaves scores unchanged") {
    SplitRng rng(3);
    std::vector<std::vector<std::int32_t>> rows(40, std::vector<std::int32_t>(5));
    for (auto& r : rows) {
        for (auto& v : r) {
            v = rng.next_bernoulli(0.4) ? 1 : 0;
        }
    }
    const auto data = binary_dataset(rows, 5);
    const std::vector<std::size_t> perm{3, 0, 4, 1, 2};
    std::vector<std::vector<std::int32_t>> permuted(rows.size(),
                                                    std::vector<std::int32_t>(5));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            permuted[i][j] = rows[i][perm[j]];
        }
    }
    const auto pdata = binary_dataset(permuted, 5);
    const auto m1 = fit_avc(data);
    const auto m2 = fit_avc(pdata);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(m1.score(data.row(i)) ==
              doctest::Approx(m2.score(pdata.row(i))).epsilon(1e-9));
    }
}

TEST_CASE("doubling the dataset: mle scores fixed, laplace drifts O(1/n)") {
    SplitRng rng(9);
    const std::size_t n = 60, m = 4;
    std::vector<std::vector<std::int32_t>> rows(n, std::vector<std::int32_t>(m));
    for (auto& r : rows) {
        for (auto& v : r) {
            v = rng.next_bernoulli(0.5) ? 1 : 0;
        }
    }
    // Balanced-ish columns so every observed value has count >= ~n/10 and the
    // per-attribute Laplace drift is genuinely O(1/n).
    auto doubled = rows;
    doubled.insert(doubled.end(), rows.begin(), rows.end());
    const auto data = binary_dataset(rows, m);
    const auto data2 = binary_dataset(doubled, m);

    const auto mle1 = fit_avc(data, {ProbabilityMode::mle, Aggregation::sum});
    const auto mle2 = fit_avc(data2, {ProbabilityMode::mle, Aggregation::sum});
    const auto lap1 = fit_avc(data);
    const auto lap2 = fit_avc(data2);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(mle1.score(data.row(i)) == mle2.score(data.row(i)));
        const double drift =
            std::abs(lap1.score(data.row(i)) - lap2.score(data.row(i)));
        CHECK(drift <= static_cast<double>(m) * 10.0 / static_cast<double>(n));
    }
}

TEST_CASE("sum and mean aggregation induce the same ranking") {
    SplitRng rng(21);
    std::vector<std::vector<std::int32_t>> rows(50, std::vector<std::int32_t>(6));
    for (auto& r : rows) {
        for (auto& v : r) {
            v = rng.next_bernoulli(0.3) ? 1 : 0;
        }
    }
    const auto data = binary_dataset(rows, 6);
    const auto sum_model = fit_avc(data, {ProbabilityMode::laplace, Aggregation::sum});
    const auto mean_model =
        fit_avc(data, {ProbabilityMode::laplace, Aggregation::mean});
    CHECK(avc_score_all(sum_model, data).order ==
          avc_score_all(mean_model, data).order);
}

TEST_CASE("fit_avc rejects empty input") {
    const auto data = binary_dataset({{0, 1}}, 2);
    CHECK_THROWS_AS(fit_avc_rows(data, std::vector<std::size_t>{}),
                    std::invalid_argument);
}

TEST_CASE("avc codelengths satisfy Kraft with equality over the record space") {
    SplitRng rng(55);
    std::vector<std::vector<std::int32_t>> rows(30, std::vector<std::int32_t>(3));
    for (auto& r : rows) {
        for (auto& v : r) {
            v = rng.next_bernoulli(0.6) ? 1 : 0;
        }
    }
    const auto data = binary_dataset(rows, 3);
    const auto model = fit_avc(data);
    double sum = 0.0;
    for (std::int32_t a = 0; a < 2; ++a) {
        for (std::int32_t b = 0; b < 2; ++b) {
            for (std::int32_t c = 0; c < 2; ++c) {
                const std::vector<std::int32_t> tuple{a, b, c};
                sum += std::exp2(-model.item_cost(tuple));
            }
        }
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

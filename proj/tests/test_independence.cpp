#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "dialect/error.hpp"
#include "dialect/independence.hpp"
#include "dialect/simulate.hpp"

using namespace dialect;

TEST_CASE("chi-square reference tables") {
    const auto flat = chi_square_pair({50, 50, 50, 50});
    CHECK(flat.statistic == doctest::Approx(0.0));
    CHECK(flat.p_value == doctest::Approx(1.0));
    CHECK_FALSE(flat.degenerate);

    const auto diag = chi_square_pair({50, 0, 0, 50});
    CHECK(diag.statistic == doctest::Approx(100.0));
    CHECK(diag.p_value < 1e-20);

    const auto mild = chi_square_pair({30, 20, 20, 30});
    CHECK(mild.statistic == doctest::Approx(4.0));
    CHECK(mild.p_value == doctest::Approx(0.0455).epsilon(1e-3));

    // |O - E| = 5 per cell, corrected to 4.5: 4 * 4.5^2 / 25.
    CHECK(chi_square_pair({30, 20, 20, 30}, true).statistic == doctest::Approx(3.24));
}

TEST_CASE("degenerate tables") {
    for (const Contingency2x2 t : {Contingency2x2{0, 0, 10, 10}, Contingency2x2{10, 10, 0, 0},
                                   Contingency2x2{0, 0, 0, 0}, Contingency2x2{0, 0, 0, 100}}) {
        const auto r = chi_square_pair(t);
        CHECK(r.degenerate);
        CHECK(r.p_value == 1.0);
        CHECK(r.statistic == 0.0);
    }
}

TEST_CASE("chi-square symmetry and monotonicity") {
    const Contingency2x2 t{12, 31, 7, 50};
    CHECK(chi_square_pair(t).statistic == doctest::Approx(chi_square_pair(t.transposed()).statistic));
    CHECK(chi_square_pair({t.n00, t.n01, t.n10, t.n11}).statistic == doctest::Approx(chi_square_pair(t).statistic));

    double last_stat = -1, last_p = 2;
    for (std::uint64_t k = 25; k <= 50; ++k) {
        const auto r = chi_square_pair({k, 50 - k, 50 - k, k});
        CHECK(r.statistic > last_stat);
        CHECK(r.p_value <= last_p);
        last_stat = r.statistic;
        last_p = r.p_value;
    }
}

TEST_CASE("message sampling") {
    const auto s = sample_messages(100, 30, 9);
    CHECK(s.size() == 30);
    CHECK(std::set<MessageId>(s.begin(), s.end()).size() == 30);
    CHECK(std::all_of(s.begin(), s.end(), [](MessageId m) { return m < 100; }));
    CHECK(sample_messages(100, 30, 9) == s);
    CHECK(sample_messages(100, 30, 10) != s);

    auto all = sample_messages(12, 12, 1);
    std::sort(all.begin(), all.end());
    for (MessageId k = 0; k < 12; ++k) CHECK(all[k] == k);
    CHECK_THROWS_AS(sample_messages(5, 6, 1), Error);

    // Each id is roughly equally likely to be drawn.
    std::vector<int> hits(20, 0);
    for (std::uint64_t seed = 0; seed < 2000; ++seed)
        for (auto m : sample_messages(20, 5, seed)) ++hits[m];
    for (int h : hits) CHECK(std::abs(h - 500) < 100);
}

TEST_CASE("contingency counts") {
    Corpus c(3);
    c.add({"a", {0, 1}, std::nullopt});
    c.add({"b", {0}, std::nullopt});
    c.add({"c", {1, 2}, std::nullopt});
    c.add({"d", {}, std::nullopt});
    const auto t = contingency(c, 0, 1);
    CHECK(t.n11 == 1);
    CHECK(t.n10 == 1);
    CHECK(t.n01 == 1);
    CHECK(t.n00 == 1);
    const auto r = pairwise_matrix(c, {0, 1, 2});
    CHECK(std::isnan(r.statistic(0, 0)));
    CHECK(r.statistic(0, 1) == doctest::Approx(chi_square_pair(t).statistic));
    CHECK(r.p_value(1, 2) == r.p_value(2, 1));
    CHECK(r.p_value(0, 2) == doctest::Approx(chi_square_pair(contingency(c, 0, 2)).p_value));
}

TEST_CASE("null calibration and an exact duplicate") {
    const DialectModel model(50, {0, 1, 2, 3, 4}, 0.3, 0.05);
    const auto corpus = generate_corpus(model, 20000, 77);
    const auto sample = sample_messages(corpus, 30, 5);
    const auto report = pairwise_matrix(corpus, sample);
    const double rate = report.rejection_rate(0.05);
    CHECK(rate >= 0.02);
    CHECK(rate <= 0.08);

    Corpus dup(51);
    for (const auto& f : corpus.files()) {
        std::vector<MessageId> ids(f.pattern.members().begin(), f.pattern.members().end());
        if (f.pattern.contains(0)) ids.push_back(50);
        dup.add({f.id, MessagePattern(ids), f.label});
    }
    const auto r = pairwise_matrix(dup, {0, 50});
    CHECK(r.p_value(0, 1) < 1e-6);
}

TEST_CASE("independence CSV") {
    Corpus c(2);
    c.add({"a", {0, 1}, std::nullopt});
    c.add({"b", {}, std::nullopt});
    std::stringstream ss;
    write_independence_csv(pairwise_matrix(c, {0, 1}, true), ss);
    std::string line;
    std::getline(ss, line);
    CHECK(line.rfind("#", 0) == 0);
    CHECK(line.find("yates") != std::string::npos);
    std::getline(ss, line);
    CHECK(line.rfind("#", 0) == 0);
    std::getline(ss, line);
    CHECK(line == "msg_i,msg_j,statistic,p_value,degenerate");
    std::getline(ss, line);
    CHECK(line.rfind("0,1,", 0) == 0);
}

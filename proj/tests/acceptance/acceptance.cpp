// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "dialect/classify.hpp"
#include "dialect/corpus.hpp"
#include "dialect/dowker.hpp"
#include "dialect/independence.hpp"
#include "dialect/model.hpp"
#include "dialect/random.hpp"
#include "dialect/simulate.hpp"
#include "oracles.hpp"

using namespace dialect;

namespace {

// Pinned tolerances and budgets.
constexpr double kNormTol = 1e-9;
constexpr double kNormBudget = 10.0;
constexpr double kCountTol = 1e-12;
constexpr double kEmptyProbability = 0.0328050;
constexpr double kEmptyTol = 5e-8;
constexpr double kEnvelopeMinExpected = 5.0;
constexpr double kEnvelopeMeanTol = 0.10;
constexpr double kEnvelopeBudget = 60.0;
constexpr double kRatioRelTol = 1e-9;
constexpr double kExampleTol = 1e-4;
constexpr double kDominanceMargin = 0.05;
constexpr double kClassifierBudget = 300.0;
constexpr double kRejectLo = 0.02;
constexpr double kRejectHi = 0.08;
constexpr double kDuplicateP = 1e-6;
constexpr double kStructuralBudget = 10.0;
constexpr double kBayesTol = 1e-12;

const DialectModel reference_model(8, {3, 4, 5, 6, 7}, 0.4, 0.25);

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome ac1() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
        const auto model = oracle::random_model(rng, 1, 12);
        const std::size_t m = model.num_messages();
        double sum = 0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask)
            sum += pattern_probability(model, oracle::from_mask(mask, m));
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    const double t = seconds_since(t0);
    return {worst <= kNormTol && t < kNormBudget, fmt("200 models, max |sum-1| = %.3g (tol %.0e), %.2f s", worst, kNormTol, t)};
}

Outcome ac2() {
    const auto p = oracle::message_probabilities(8, reference_model.characteristic(), 0.4, 0.25);
    const auto brute = oracle::count_distribution(p);
    const auto dist = message_count_distribution(reference_model);
    double worst = 0;
    for (std::size_t n = 0; n <= 8; ++n) worst = std::max(worst, std::abs(dist[n] - brute[n]));
    const bool empty_ok = std::abs(dist[0] - kEmptyProbability) <= kEmptyTol;
    return {worst <= kCountTol && empty_ok && dist.size() == 9,
            fmt("max |P(n) - brute| = %.3g (tol %.0e), P(#K=0) = %.7f", worst, kCountTol, dist[0])};
}

Outcome ac3() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = replicate_histogram(reference_model, 1000, 300, 3, Alignment::Pattern);
    const double t = seconds_since(t0);
    std::size_t checked = 0, outside = 0, off = 0;
    double worst = 0;
    for (const auto& row : r.envelope) {
        if (row.expected < kEnvelopeMinExpected) continue;
        ++checked;
        if (row.expected < row.min || row.expected > row.max) ++outside;
        const double rel = std::abs(row.mean - row.expected) / row.expected;
        worst = std::max(worst, rel);
        if (rel > kEnvelopeMeanTol) ++off;
    }
    return {checked > 0 && outside == 0 && off == 0 && t < kEnvelopeBudget,
            fmt("%zu ranks with expected >= %.0f, %zu outside envelope, max mean deviation %.3f (tol %.2f), %.2f s",
                checked, kEnvelopeMinExpected, outside, worst, kEnvelopeMeanTol, t)};
}

// Rank-aligned view of the same replication, reported for reference only.
std::string ac3_rank_info() {
    const auto r = replicate_histogram(reference_model, 1000, 300, 3, Alignment::Rank);
    std::size_t checked = 0, outside = 0, off = 0;
    for (const auto& row : r.envelope) {
        if (row.expected < kEnvelopeMinExpected) continue;
        ++checked;
        outside += row.expected < row.min || row.expected > row.max;
        off += std::abs(row.mean - row.expected) / row.expected > kEnvelopeMeanTol;
    }
    return fmt("rank-aligned: %zu ranks, %zu outside envelope, %zu beyond mean tolerance", checked, outside, off);
}

TwoDialectConfig random_disjoint(std::mt19937_64& rng, bool equal_p) {
    std::uniform_int_distribution<std::size_t> size(1, 10);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    const std::size_t m = size(rng);
    std::vector<MessageId> a, b;
    for (std::size_t k = 0; k < m; ++k) {
        const auto r = rng() % 3;
        if (r == 0) a.push_back(static_cast<MessageId>(k));
        if (r == 1) b.push_back(static_cast<MessageId>(k));
    }
    const double p0 = u(rng), pa = u(rng), pb = equal_p ? pa : u(rng);
    return {DialectModel(m, a, pa, p0), DialectModel(m, b, pb, p0), 0.5};
}

Outcome ac4() {
    std::mt19937_64 rng(404);
    double worst_closed = 0, worst_equal_p = 0;
    std::size_t patterns = 0;
    for (int i = 0; i < 100; ++i) {
        const bool equal_p = i % 2 == 1;
        const auto c = random_disjoint(rng, equal_p);
        const std::size_t m = c.model_a.num_messages();
        const auto pa = oracle::message_probabilities(m, c.model_a.characteristic(), c.model_a.p_char(), c.model_a.p_background());
        const auto pb = oracle::message_probabilities(m, c.model_b.characteristic(), c.model_b.p_char(), c.model_b.p_background());
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
            const auto k = oracle::from_mask(mask, m);
            const double direct = oracle::product_probability(pb, mask) / oracle::product_probability(pa, mask);
            const double closed = conditional_ratio(c, k);
            worst_closed = std::max(worst_closed, std::abs(closed - direct) / direct);
            if (equal_p) worst_equal_p = std::max(worst_equal_p, std::abs(conditional_ratio_equal_p(c, k) - closed) / closed);
            ++patterns;
        }
    }
    const TwoDialectConfig ex2(DialectModel(3, {0}, 0.4, 0.2), DialectModel(3, {1}, 0.4, 0.2), 0.5);
    const double r_empty = conditional_ratio(ex2, {});
    const double r_b = conditional_ratio(ex2, {1});
    const double r_a = conditional_ratio(ex2, {0});
    const bool examples = std::abs(r_empty - 1.0) <= kExampleTol && std::abs(r_b - 2.6667) <= kExampleTol &&
                          std::abs(r_a - 0.375) <= kExampleTol;
    return {worst_closed <= kRatioRelTol && worst_equal_p <= kRatioRelTol && examples,
            fmt("%zu patterns, max rel err closed form %.3g, equal-p %.3g (tol %.0e); example ratios %.4f %.4f %.4f",
                patterns, worst_closed, worst_equal_p, kRatioRelTol, r_empty, r_b, r_a)};
}

Outcome ac5() {
    std::mt19937_64 rng(505);
    std::size_t strict = 0;
    const std::size_t total = 10000;
    for (std::size_t i = 0; i < total; ++i) {
        const auto model = oracle::random_model(rng, 1, 16, 0.001, 0.499);
        const std::size_t m = model.num_messages();
        std::vector<MessageId> small, large;
        for (std::size_t k = 0; k < m; ++k) {
            const auto r = rng() % 3;
            if (r == 0) small.push_back(static_cast<MessageId>(k));
            if (r <= 1) large.push_back(static_cast<MessageId>(k));
        }
        if (small.size() == large.size()) {
            // Force a proper superset.
            for (std::size_t k = 0; k < m; ++k)
                if (!MessagePattern(large).contains(static_cast<MessageId>(k))) {
                    large.push_back(static_cast<MessageId>(k));
                    break;
                }
            if (small.size() == large.size()) small.pop_back();
        }
        const MessagePattern k1(small), k2(large);
        strict += pattern_log_probability(model, k1) > pattern_log_probability(model, k2);
    }
    return {strict == total, fmt("%zu / %zu nested pairs strictly decreasing", strict, total)};
}

struct ClassifierRun {
    double empirical, theoretical, baseline;
};

ClassifierRun classifier_run(std::uint64_t seed) {
    std::vector<MessageId> ma{0, 1, 2, 3, 4, 5}, mb{6, 7, 8, 9, 10, 11};
    const DialectModel a(40, ma, 0.38, 0.05), b(40, mb, 0.38, 0.05), confuser(40, {}, 0.05, 0.05);
    const MixtureComponent parts[] = {{&a, 50000, "A", "a"}, {&b, 40000, "B", "b"}, {&confuser, 10000, "B", "c"}};
    const auto combined = generate_mixture(parts, seed);
    const auto train = generate_corpus(a, 100000, derive_key(seed, 0x7a11));

    auto truth = std::make_unique<bool[]>(combined.size());
    for (std::size_t i = 0; i < combined.size(); ++i) truth[i] = combined.files()[i].label == std::optional<std::string>("A");
    const std::span<const bool> t(truth.get(), combined.size());

    const auto complex = build_complex(train);
    const auto emp = score_corpus(combined, EmpiricalConditional{&complex}, 0.5).file_posteriors();
    const auto estimated = select_characteristic(message_frequencies(train), 0.25, train.size()).to_model();
    const auto theo = score_corpus(combined, TheoreticalConditional{&estimated}, 0.5).file_posteriors();
    const auto base = message_count_scores(combined);
    return {pr_curve(emp, t).area, pr_curve(theo, t).area, pr_curve(base, t).area};
}

Outcome ac6() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto r = classifier_run(seed);
        ok = ok && r.empirical >= r.baseline + kDominanceMargin && r.theoretical >= r.baseline;
        detail += fmt("seed %llu: emp %.3f theo %.3f base %.3f; ", static_cast<unsigned long long>(seed), r.empirical,
                      r.theoretical, r.baseline);
    }
    const double t = seconds_since(t0);
    return {ok && t < kClassifierBudget, detail + fmt("%.1f s", t)};
}

Outcome ac7() {
    std::vector<MessageId> chars{0, 1, 2, 3, 4};
    const DialectModel model(50, chars, 0.3, 0.05);
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto corpus = generate_corpus(model, 100000, seed);
        const auto report = pairwise_matrix(corpus, sample_messages(corpus, 30, seed));
        const double rate = report.rejection_rate(0.05);
        ok = ok && rate >= kRejectLo && rate <= kRejectHi;
        detail += fmt("seed %llu rejection %.3f; ", static_cast<unsigned long long>(seed), rate);

        Corpus dup(51);
        for (const auto& f : corpus.files()) {
            std::vector<MessageId> ids(f.pattern.members().begin(), f.pattern.members().end());
            if (f.pattern.contains(0)) ids.push_back(50);
            dup.add({f.id, MessagePattern(ids), f.label});
        }
        const double p = chi_square_pair(contingency(dup, 0, 50)).p_value;
        ok = ok && p < kDuplicateP;
        detail += fmt("duplicate p %.3g; ", p);
    }
    return {ok, detail + fmt("band [%.2f, %.2f], duplicate p < %.0e", kRejectLo, kRejectHi, kDuplicateP)};
}

Outcome ac8() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(808);
    std::size_t failures = 0, edges_checked = 0, swaps = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const auto model = oracle::random_model(rng, 2, 9, 0.05, 0.6);
        const auto corpus = generate_corpus(model, 200 + rng() % 2000, rng());
        const auto c = build_complex(corpus);

        std::uint64_t sum = 0;
        for (const auto& [p, n] : c.nodes()) sum += n.weight;
        failures += sum != corpus.size() || c.total_files() != corpus.size();
        failures += !(build_complex(shuffle(corpus, rng())) == c);
        failures += !(build_complex(corpus, 3) == c);

        const auto edges = lattice_edges(c);
        std::size_t brute = 0;
        const auto patterns = c.patterns();
        for (const auto& lo : patterns)
            for (const auto& hi : patterns)
                brute += hi.size() == lo.size() + 1 && lo.is_subset_of(hi);
        failures += brute != edges.size();
        for (const auto& e : edges) {
            ++edges_checked;
            failures += !(e.upper.size() == e.lower.size() + 1 && e.lower.is_subset_of(e.upper) &&
                          e.upper == e.lower.with(e.added) && c.contains(e.lower) && c.contains(e.upper));
            failures += e.violation != (c.weight(e.upper) > c.weight(e.lower));
        }

        // Swapping the endpoint weights of an untied edge flips its flag.
        for (const auto& e : edges) {
            if (c.weight(e.lower) == c.weight(e.upper)) continue;
            auto swapped = c;
            auto lo = *c.find(e.lower), hi = *c.find(e.upper);
            std::swap(lo.weight, hi.weight);
            swapped.set_node(e.lower, lo);
            swapped.set_node(e.upper, hi);
            bool flipped = false;
            for (const auto& f : lattice_edges(swapped))
                if (f.lower == e.lower && f.upper == e.upper) flipped = f.violation != e.violation;
            failures += !flipped;
            ++swaps;
            break;
        }
    }
    const double t = seconds_since(t0);
    return {failures == 0 && t < kStructuralBudget,
            fmt("60 corpora, %zu edges, %zu weight swaps, %zu failures, %.2f s", edges_checked, swaps, failures, t)};
}

Outcome ac9() {
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> prior(0.01, 0.99);
    double worst = 0;
    std::size_t patterns = 0;
    for (int i = 0; i < 100; ++i) {
        const auto a = oracle::random_model(rng, 1, 10, 0.01, 0.99);
        const auto m = a.num_messages();
        std::vector<MessageId> cb;
        for (std::size_t k = 0; k < m; ++k)
            if (rng() % 2) cb.push_back(static_cast<MessageId>(k));
        const DialectModel b(m, cb, prior(rng), prior(rng));
        const double pa_prior = prior(rng);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
            const auto k = oracle::from_mask(mask, m);
            const double pa = pattern_probability(a, k), pb = pattern_probability(b, k);
            const double pk = pa_prior * pa + (1 - pa_prior) * pb;
            worst = std::max(worst, std::abs(posterior(pa, pa_prior, pk) + posterior(pb, 1 - pa_prior, pk) - 1.0));
            ++patterns;
        }
    }
    return {worst <= kBayesTol, fmt("%zu patterns over 100 configs, max |sum-1| = %.3g (tol %.0e)", patterns, worst, kBayesTol)};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {"AC-1 normalization", ac1},        {"AC-2 count distribution", ac2}, {"AC-3 histogram envelope", ac3},
        {"AC-4 ratio identity", ac4},       {"AC-5 subset monotonicity", ac5}, {"AC-6 classifier dominance", ac6},
        {"AC-7 chi-square", ac7},           {"AC-8 dowker structure", ac8},   {"AC-9 bayes consistency", ac9},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
        std::fflush(stdout);
        if (std::string(c.name).rfind("AC-3", 0) == 0) std::printf("INFO AC-3 %s\n", ac3_rank_info().c_str());
    }
    std::printf("%d of 9 criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}

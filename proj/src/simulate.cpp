#include "dialect/simulate.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <ostream>
#include <thread>

#include "csv.hpp"
#include "dialect/dowker.hpp"
#include "dialect/error.hpp"
#include "dialect/random.hpp"

namespace dialect {

namespace {

MessagePattern draw_pattern(const DialectModel& model, CounterRng& rng, std::vector<MessageId>& scratch) {
    scratch.clear();
    for (std::size_t m = 0; m < model.num_messages(); ++m) {
        const auto id = static_cast<MessageId>(m);
        if (rng.bernoulli(model.message_probability(id))) scratch.push_back(id);
    }
    return MessagePattern(scratch);
}

void append_draws(Corpus& corpus, const DialectModel& model, std::size_t count, std::uint64_t seed, std::uint64_t stream,
                  const std::optional<std::string>& label, const std::string& prefix) {
    std::vector<MessageId> scratch;
    for (std::size_t i = 0; i < count; ++i) {
        CounterRng rng(derive_key(seed, stream, i));
        corpus.add({prefix + std::to_string(i), draw_pattern(model, rng, scratch), label});
    }
}

template <class F>
void parallel_for(std::size_t n, unsigned workers, F&& body) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) body(i);
        });
    }
    for (auto& t : threads) t.join();
}

// All 2^#M patterns in order of decreasing probability, ties canonical.
std::vector<MessagePattern> enumerate_by_probability(const DialectModel& model) {
    const std::size_t m = model.num_messages();
    std::vector<std::pair<double, MessagePattern>> all;
    all.reserve(std::size_t{1} << m);
    std::vector<MessageId> ids;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        ids.clear();
        for (std::size_t k = 0; k < m; ++k)
            if (mask >> k & 1) ids.push_back(static_cast<MessageId>(k));
        MessagePattern p(ids);
        all.emplace_back(pattern_log_probability(model, p), std::move(p));
    }
    CanonicalLess less;
    std::sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return less(a.second, b.second);
    });
    std::vector<MessagePattern> out;
    out.reserve(all.size());
    for (auto& [lp, p] : all) out.push_back(std::move(p));
    return out;
}

}  // namespace

Corpus generate_corpus(const DialectModel& model, std::size_t num_files, std::uint64_t seed,
                       std::optional<std::string> label, const std::string& id_prefix, std::uint64_t stream) {
    if (num_files == 0) throw Error("generate_corpus needs at least one file");
    Corpus corpus(model.num_messages());
    append_draws(corpus, model, num_files, seed, stream, label, id_prefix);
    return corpus;
}

Corpus shuffle(const Corpus& corpus, std::uint64_t seed) {
    std::vector<std::size_t> order(corpus.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    CounterRng rng(derive_key(seed, 0x5f1e));
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    Corpus out(corpus.num_messages());
    for (const auto& m : corpus.meta()) out.set_meta(m);
    for (std::size_t i : order) out.add(corpus.file(i));
    return out;
}

Corpus generate_mixture(std::span<const MixtureComponent> components, std::uint64_t seed) {
    if (components.empty()) throw Error("mixture needs at least one component");
    const std::size_t m = components.front().model->num_messages();
    Corpus corpus(m);
    for (std::size_t c = 0; c < components.size(); ++c) {
        const auto& comp = components[c];
        if (comp.model->num_messages() != m) throw Error("mixture components disagree on the number of messages");
        const std::string prefix = comp.id_prefix.empty() ? comp.label + "-" : comp.id_prefix;
        append_draws(corpus, *comp.model, comp.count, seed, c, comp.label, prefix);
    }
    return shuffle(corpus, seed);
}

Corpus generate_mixture(const TwoDialectConfig& config, std::size_t num_a, std::size_t num_b, std::uint64_t seed) {
    const MixtureComponent parts[] = {{&config.model_a, num_a, "A", "a"}, {&config.model_b, num_b, "B", "b"}};
    return generate_mixture(parts, seed);
}

Replication replicate_histogram(const DialectModel& model, std::size_t num_files, std::size_t trials, std::uint64_t seed,
                                Alignment alignment, unsigned workers) {
    if (trials == 0) throw Error("replication needs at least one trial");
    std::vector<WeightedDowkerComplex> complexes(trials);
    parallel_for(trials, workers, [&](std::size_t t) {
        complexes[t] = build_complex(generate_corpus(model, num_files, derive_key(seed, t)));
    });

    Replication rep;
    rep.alignment = alignment;
    std::vector<std::vector<double>> columns;  // per trial, aligned weights

    if (alignment == Alignment::Rank) {
        std::size_t ranks = 0;
        for (const auto& c : complexes) ranks = std::max(ranks, c.node_count());
        rep.expected = expected_dowker_histogram(model, num_files, ranks);
        ranks = std::max(ranks, rep.expected.size());
        rep.expected.resize(ranks, 0.0);
        for (const auto& c : complexes) {
            const auto hist = dowker_histogram(c);
            std::vector<double> col(ranks, 0.0);
            std::copy(hist.begin(), hist.end(), col.begin());
            columns.push_back(std::move(col));
        }
    } else {
        std::vector<MessagePattern> patterns;
        if (model.num_messages() <= 20) {
            patterns = enumerate_by_probability(model);
        } else {
            std::map<MessagePattern, double, CanonicalLess> seen;
            for (const auto& c : complexes)
                for (const auto& [p, n] : c.nodes()) seen.emplace(p, pattern_log_probability(model, p));
            std::vector<std::pair<double, MessagePattern>> tmp;
            for (auto& [p, lp] : seen) tmp.emplace_back(lp, p);
            std::stable_sort(tmp.begin(), tmp.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
            for (auto& [lp, p] : tmp) patterns.push_back(std::move(p));
        }
        for (const auto& p : patterns) rep.expected.push_back(static_cast<double>(num_files) * pattern_probability(model, p));
        for (const auto& c : complexes) {
            std::vector<double> col;
            col.reserve(patterns.size());
            for (const auto& p : patterns) col.push_back(static_cast<double>(c.weight(p)));
            columns.push_back(std::move(col));
        }
    }

    for (std::size_t r = 0; r < rep.expected.size(); ++r) {
        EnvelopeRow row;
        row.rank = r + 1;
        row.expected = rep.expected[r];
        row.min = std::numeric_limits<double>::infinity();
        row.max = -std::numeric_limits<double>::infinity();
        double sum = 0;
        for (const auto& col : columns) {
            row.min = std::min(row.min, col[r]);
            row.max = std::max(row.max, col[r]);
            sum += col[r];
        }
        row.mean = sum / static_cast<double>(columns.size());
        rep.envelope.push_back(row);
    }
    return rep;
}

void write_envelope_csv(const Replication& replication, std::ostream& out) {
    out << "rank,expected,min,mean,max\n";
    for (const auto& r : replication.envelope) {
        out << r.rank << ',' << detail::format_double(r.expected) << ',' << detail::format_double(r.min) << ','
            << detail::format_double(r.mean) << ',' << detail::format_double(r.max) << '\n';
    }
}

}  // namespace dialect

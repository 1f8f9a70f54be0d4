#include "dialect/independence.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "csv.hpp"
#include "dialect/error.hpp"
#include "dialect/random.hpp"

namespace dialect {

ChiSquareResult chi_square_pair(const Contingency2x2& t, bool yates) {
    ChiSquareResult r;
    const double n = static_cast<double>(t.total());
    const double row1 = static_cast<double>(t.n11 + t.n10), row0 = static_cast<double>(t.n01 + t.n00);
    const double col1 = static_cast<double>(t.n11 + t.n01), col0 = static_cast<double>(t.n10 + t.n00);
    if (n == 0 || row1 == 0 || row0 == 0 || col1 == 0 || col0 == 0) {
        r.degenerate = true;
        return r;
    }
    const double observed[4] = {static_cast<double>(t.n11), static_cast<double>(t.n10), static_cast<double>(t.n01),
                                static_cast<double>(t.n00)};
    const double expected[4] = {row1 * col1 / n, row1 * col0 / n, row0 * col1 / n, row0 * col0 / n};
    for (int c = 0; c < 4; ++c) {
        double d = std::abs(observed[c] - expected[c]);
        if (yates) d = std::max(0.0, d - 0.5);
        r.statistic += d * d / expected[c];
    }
    r.p_value = std::erfc(std::sqrt(r.statistic / 2.0));
    return r;
}

std::vector<MessageId> sample_messages(std::size_t num_messages, std::size_t n, std::uint64_t seed) {
    if (n > num_messages) {
        throw Error("cannot sample " + std::to_string(n) + " of " + std::to_string(num_messages) + " messages");
    }
    // Partial Fisher-Yates over a sparse swap table.
    std::unordered_map<std::size_t, std::size_t> swapped;
    auto at = [&](std::size_t i) {
        auto it = swapped.find(i);
        return it == swapped.end() ? i : it->second;
    };
    CounterRng rng(derive_key(seed, 0x5a3d1e));
    std::vector<MessageId> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(num_messages - i));
        const std::size_t vi = at(i), vj = at(j);
        swapped[i] = vj;
        swapped[j] = vi;
        out.push_back(static_cast<MessageId>(vj));
    }
    return out;
}

std::vector<MessageId> sample_messages(const Corpus& corpus, std::size_t n, std::uint64_t seed) {
    return sample_messages(corpus.num_messages(), n, seed);
}

Contingency2x2 contingency(const Corpus& corpus, MessageId i, MessageId j) {
    Contingency2x2 t;
    for (const auto& f : corpus.files()) {
        const bool a = f.pattern.contains(i), b = f.pattern.contains(j);
        if (a && b) ++t.n11;
        else if (a) ++t.n10;
        else if (b) ++t.n01;
        else ++t.n00;
    }
    return t;
}

double IndependenceReport::rejection_rate(double alpha) const {
    std::size_t pairs = 0, rejected = 0;
    for (std::size_t a = 0; a < size(); ++a) {
        for (std::size_t b = a + 1; b < size(); ++b) {
            ++pairs;
            if (p_value(a, b) < alpha) ++rejected;
        }
    }
    return pairs == 0 ? 0.0 : static_cast<double>(rejected) / static_cast<double>(pairs);
}

IndependenceReport pairwise_matrix(const Corpus& corpus, const std::vector<MessageId>& sample, bool yates) {
    const std::size_t n = sample.size();
    std::unordered_map<MessageId, std::size_t> slot;
    for (std::size_t s = 0; s < n; ++s) {
        if (sample[s] >= corpus.num_messages()) throw Error("sampled message outside corpus");
        if (!slot.emplace(sample[s], s).second) throw Error("duplicate message in sample");
    }

    std::vector<std::uint64_t> single(n, 0), joint(n * n, 0);
    std::vector<std::size_t> present;
    for (const auto& f : corpus.files()) {
        present.clear();
        for (MessageId m : f.pattern.members()) {
            if (auto it = slot.find(m); it != slot.end()) present.push_back(it->second);
        }
        for (std::size_t x = 0; x < present.size(); ++x) {
            ++single[present[x]];
            for (std::size_t y = x + 1; y < present.size(); ++y) {
                ++joint[present[x] * n + present[y]];
                ++joint[present[y] * n + present[x]];
            }
        }
    }

    IndependenceReport report;
    report.sampled = sample;
    report.yates = yates;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    report.statistics.assign(n * n, nan);
    report.p_values.assign(n * n, nan);
    report.degenerate.assign(n * n, false);
    const std::uint64_t files = corpus.size();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            const std::uint64_t both = joint[a * n + b];
            const Contingency2x2 t{both, single[a] - both, single[b] - both, files - single[a] - single[b] + both};
            const auto r = chi_square_pair(t, yates);
            for (auto idx : {a * n + b, b * n + a}) {
                report.statistics[idx] = r.statistic;
                report.p_values[idx] = r.p_value;
                report.degenerate[idx] = r.degenerate;
            }
        }
    }
    return report;
}

void write_independence_csv(const IndependenceReport& report, std::ostream& out) {
    out << "# continuity_correction=" << (report.yates ? "yates" : "none") << '\n';
    out << "# degenerate pairs (a message in no file or every file) are listed with statistic=0,p_value=1,degenerate=1\n";
    out << "msg_i,msg_j,statistic,p_value,degenerate\n";
    for (std::size_t a = 0; a < report.size(); ++a) {
        for (std::size_t b = a + 1; b < report.size(); ++b) {
            out << report.sampled[a] << ',' << report.sampled[b] << ',' << detail::format_double(report.statistic(a, b))
                << ',' << detail::format_double(report.p_value(a, b)) << ',' << (report.is_degenerate(a, b) ? 1 : 0)
                << '\n';
        }
    }
}

}  // namespace dialect

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dialect/corpus.hpp"

namespace dialect {

/// Co-occurrence counts for a message pair (i, j): n11 both, n10 only i,
/// n01 only j, n00 neither.
struct Contingency2x2 {
    std::uint64_t n11 = 0, n10 = 0, n01 = 0, n00 = 0;

    std::uint64_t total() const noexcept { return n11 + n10 + n01 + n00; }
    Contingency2x2 transposed() const noexcept { return {n11, n01, n10, n00}; }
};

struct ChiSquareResult {
    double statistic = 0;
    double p_value = 1;
    bool degenerate = false;  // some marginal is zero; p_value forced to 1
};

/// Pearson chi-square, one degree of freedom; p = erfc(sqrt(stat / 2)).
ChiSquareResult chi_square_pair(const Contingency2x2& table, bool yates = false);

/// n distinct ids drawn uniformly without replacement from [0, num_messages),
/// returned in draw order. Throws if n > num_messages.
std::vector<MessageId> sample_messages(std::size_t num_messages, std::size_t n, std::uint64_t seed);
std::vector<MessageId> sample_messages(const Corpus& corpus, std::size_t n, std::uint64_t seed);

Contingency2x2 contingency(const Corpus& corpus, MessageId i, MessageId j);

struct IndependenceReport {
    std::vector<MessageId> sampled;
    bool yates = false;
    // Row-major sampled.size() squared; diagonal holds NaN.
    std::vector<double> statistics;
    std::vector<double> p_values;
    std::vector<bool> degenerate;

    std::size_t size() const noexcept { return sampled.size(); }
    double p_value(std::size_t a, std::size_t b) const { return p_values.at(a * size() + b); }
    double statistic(std::size_t a, std::size_t b) const { return statistics.at(a * size() + b); }
    bool is_degenerate(std::size_t a, std::size_t b) const { return degenerate.at(a * size() + b); }

    /// Fraction of off-diagonal unordered pairs with p below alpha.
    double rejection_rate(double alpha) const;
};

IndependenceReport pairwise_matrix(const Corpus& corpus, const std::vector<MessageId>& sample, bool yates = false);

/// Two `#` header lines recording the correction and degenerate handling,
/// then `msg_i,msg_j,statistic,p_value,degenerate` for each pair i < j.
void write_independence_csv(const IndependenceReport& report, std::ostream& out);

}  // namespace dialect

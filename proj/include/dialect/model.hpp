#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dialect/pattern.hpp"

namespace dialect {

/// Two-level Bernoulli model of one dialect: messages in the characteristic
/// set fire with p_char, every other message with p_background, all
/// independently.
class DialectModel {
public:
    DialectModel(std::size_t num_messages, std::vector<MessageId> characteristic, double p_char, double p_background);

    std::size_t num_messages() const noexcept { return num_messages_; }
    const std::vector<MessageId>& characteristic() const noexcept { return characteristic_; }
    std::size_t characteristic_size() const noexcept { return characteristic_.size(); }
    bool is_characteristic(MessageId id) const { return is_char_.at(id); }
    double p_char() const noexcept { return p_char_; }
    double p_background() const noexcept { return p_background_; }

    /// Probability that message `id` fires.
    double message_probability(MessageId id) const { return is_characteristic(id) ? p_char_ : p_background_; }

    /// Soft problems with the parameterization (p_char <= p_background, p = 1).
    std::vector<std::string> warnings() const;

    friend bool operator==(const DialectModel& a, const DialectModel& b) {
        return a.num_messages_ == b.num_messages_ && a.characteristic_ == b.characteristic_ &&
               a.p_char_ == b.p_char_ && a.p_background_ == b.p_background_;
    }

private:
    std::size_t num_messages_;
    std::vector<MessageId> characteristic_;
    std::vector<bool> is_char_;
    double p_char_;
    double p_background_;
};

/// `{num_messages, characteristic[], p_char, p_background}`
std::string model_to_json(const DialectModel& model);
DialectModel model_from_json(std::string_view text);
DialectModel load_model(const std::filesystem::path& path);
void save_model(const DialectModel& model, const std::filesystem::path& path);

/// log P(exactly K | dialect). May be -inf when a factor is zero.
double pattern_log_probability(const DialectModel& model, const MessagePattern& pattern);
double pattern_probability(const DialectModel& model, const MessagePattern& pattern);

/// p0 from the fraction of files with no messages: 1 - f^(1/#M).
double estimate_background(double empty_fraction, std::size_t num_messages);

/// Proportion test of one message frequency against p0.
double t_statistic(double p_k, double p0, std::size_t num_files);

struct EstimationReport {
    std::vector<double> frequencies;      // after inversion
    std::vector<double> raw_frequencies;  // before inversion; empty if not supplied
    std::vector<MessageId> characteristic;
    std::optional<double> p_char;
    double p_background = 0;
    double threshold_used = 0;
    std::optional<std::vector<double>> t_statistics;

    /// Throws when p_char is absent.
    DialectModel to_model() const;
};

/// Characteristic = messages with frequency > threshold; p_char their mean;
/// p_background = threshold. t-statistics when num_files is given.
EstimationReport select_characteristic(std::span<const double> frequencies, double threshold,
                                       std::optional<std::size_t> num_files = std::nullopt);

double log_binomial(std::size_t n, std::size_t k);

/// P(#K = n).
double message_count_distribution(const DialectModel& model, std::size_t n);
std::vector<double> message_count_distribution(const DialectModel& model);

/// One (n, k) cell of the expected histogram: every pattern with n messages,
/// k of them characteristic, shares this probability.
struct ExpectedCell {
    std::size_t n = 0;
    std::size_t k = 0;
    double log_probability = 0;
    double log_multiplicity = 0;

    double probability() const;
    double multiplicity() const;
};

ExpectedCell expected_weight(const DialectModel& model, std::size_t n, std::size_t k);

/// Every feasible cell, sorted by decreasing probability.
std::vector<ExpectedCell> expected_cells(const DialectModel& model);

/// Expected Dowker histogram over all 2^#M patterns, truncated to the top
/// `max_ranks` entries.
std::vector<double> expected_dowker_histogram(const DialectModel& model, std::uint64_t num_files,
                                              std::size_t max_ranks = std::size_t{1} << 22);

/// Expected weights over exactly the given patterns, renormalized so they
/// sum to num_files. Throws on an empty set.
std::vector<double> expected_dowker_histogram(const DialectModel& model, std::uint64_t num_files,
                                              std::span<const MessagePattern> restrict_to);

}  // namespace dialect

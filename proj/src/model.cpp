#include "dialect/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "dialect/error.hpp"
#include "csv.hpp"

namespace dialect {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// count * log(p), with 0 * log(0) = 0.
double xlogy(std::size_t count, double p) {
    if (count == 0) return 0.0;
    return static_cast<double>(count) * std::log(p);
}

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(std::string(what) + " must lie in [0,1]");
}

double log_sum_exp(const std::vector<double>& xs) {
    double hi = neg_inf;
    for (double x : xs) hi = std::max(hi, x);
    if (hi == neg_inf) return neg_inf;
    double s = 0;
    for (double x : xs) s += std::exp(x - hi);
    return hi + std::log(s);
}

}  // namespace

DialectModel::DialectModel(std::size_t num_messages, std::vector<MessageId> characteristic, double p_char,
                           double p_background)
    : num_messages_(num_messages), characteristic_(std::move(characteristic)), is_char_(num_messages, false),
      p_char_(p_char), p_background_(p_background) {
    check_probability(p_char, "p_char");
    check_probability(p_background, "p_background");
    std::sort(characteristic_.begin(), characteristic_.end());
    characteristic_.erase(std::unique(characteristic_.begin(), characteristic_.end()), characteristic_.end());
    for (MessageId m : characteristic_) {
        if (m >= num_messages_) {
            throw Error("characteristic message " + std::to_string(m) + " outside [0," + std::to_string(num_messages_) + ")");
        }
        is_char_[m] = true;
    }
}

std::vector<std::string> DialectModel::warnings() const {
    std::vector<std::string> out;
    if (!characteristic_.empty() && p_char_ <= p_background_) {
        out.push_back("p_char <= p_background: characteristic messages are not elevated");
    }
    if (p_char_ >= 1.0 || p_background_ >= 1.0) out.push_back("message probability of 1 makes every other pattern impossible");
    if (p_char_ > 0.5 || p_background_ > 0.5) out.push_back("message probability above 0.5; consider inverting those messages");
    return out;
}

std::string model_to_json(const DialectModel& model) {
    nlohmann::json j;
    j["num_messages"] = model.num_messages();
    j["characteristic"] = model.characteristic();
    j["p_char"] = model.p_char();
    j["p_background"] = model.p_background();
    return j.dump(2);
}

DialectModel model_from_json(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        return DialectModel(j.at("num_messages").get<std::size_t>(), j.at("characteristic").get<std::vector<MessageId>>(),
                            j.at("p_char").get<double>(), j.at("p_background").get<double>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("bad model JSON: ") + e.what());
    }
}

DialectModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

void save_model(const DialectModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << model_to_json(model) << '\n';
}

double pattern_log_probability(const DialectModel& model, const MessagePattern& pattern) {
    if (pattern.min_universe() > model.num_messages()) throw Error("pattern member outside the model's messages");
    std::size_t in_char = 0;
    for (MessageId m : pattern.members())
        if (model.is_characteristic(m)) ++in_char;
    const std::size_t in_background = pattern.size() - in_char;
    const std::size_t n_char = model.characteristic_size();
    const std::size_t n_background = model.num_messages() - n_char;
    return xlogy(in_background, model.p_background()) + xlogy(n_background - in_background, 1.0 - model.p_background()) +
           xlogy(in_char, model.p_char()) + xlogy(n_char - in_char, 1.0 - model.p_char());
}

double pattern_probability(const DialectModel& model, const MessagePattern& pattern) {
    return std::exp(pattern_log_probability(model, pattern));
}

double estimate_background(double empty_fraction, std::size_t num_messages) {
    if (num_messages == 0) throw Error("estimate_background needs at least one message");
    if (!(empty_fraction <= 1.0) || empty_fraction < 0.0) throw Error("empty fraction must lie in (0,1]");
    if (empty_fraction == 0.0) {
        throw Error("no file has an empty message pattern; the background probability cannot be estimated from it");
    }
    return 1.0 - std::pow(empty_fraction, 1.0 / static_cast<double>(num_messages));
}

double t_statistic(double p_k, double p0, std::size_t num_files) {
    if (!(p0 > 0.0 && p0 < 1.0)) throw Error("t statistic needs 0 < p0 < 1");
    if (num_files == 0) throw Error("t statistic needs at least one file");
    return (p_k - p0) / std::sqrt(p0 * (1.0 - p0) / static_cast<double>(num_files));
}

DialectModel EstimationReport::to_model() const {
    if (!p_char) throw Error("no characteristic messages selected; p_char is undefined");
    return DialectModel(frequencies.size(), characteristic, *p_char, p_background);
}

EstimationReport select_characteristic(std::span<const double> frequencies, double threshold,
                                       std::optional<std::size_t> num_files) {
    EstimationReport report;
    report.frequencies.assign(frequencies.begin(), frequencies.end());
    report.threshold_used = threshold;
    report.p_background = threshold;
    double sum = 0;
    for (std::size_t k = 0; k < frequencies.size(); ++k) {
        if (frequencies[k] > threshold) {
            report.characteristic.push_back(static_cast<MessageId>(k));
            sum += frequencies[k];
        }
    }
    if (!report.characteristic.empty()) {
        report.p_char = sum / static_cast<double>(report.characteristic.size());
    } else {
        warn("no message frequency exceeds the threshold " + detail::format_double(threshold) +
             "; characteristic set is empty");
    }
    if (num_files && threshold > 0.0 && threshold < 1.0) {
        std::vector<double> t(frequencies.size());
        for (std::size_t k = 0; k < t.size(); ++k) t[k] = t_statistic(frequencies[k], threshold, *num_files);
        report.t_statistics = std::move(t);
    }
    return report;
}

double log_binomial(std::size_t n, std::size_t k) {
    if (k > n) return neg_inf;
    k = std::min(k, n - k);
    if (n <= 60) {
        // Exact in 64 bits: C(60,30) < 2^60.
        std::uint64_t c = 1;
        for (std::size_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
        return std::log(static_cast<double>(c));
    }
    return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
           std::lgamma(static_cast<double>(n - k) + 1);
}

double ExpectedCell::probability() const { return std::exp(log_probability); }

double ExpectedCell::multiplicity() const {
    const double m = std::exp(log_multiplicity);
    return log_multiplicity < 36.0 ? std::round(m) : m;
}

ExpectedCell expected_weight(const DialectModel& model, std::size_t n, std::size_t k) {
    const std::size_t n_char = model.characteristic_size();
    const std::size_t n_background = model.num_messages() - n_char;
    if (k > n || k > n_char || n - k > n_background) {
        throw Error("no pattern has " + std::to_string(n) + " messages with " + std::to_string(k) + " characteristic");
    }
    ExpectedCell cell;
    cell.n = n;
    cell.k = k;
    cell.log_probability = xlogy(n - k, model.p_background()) + xlogy(n_background - (n - k), 1.0 - model.p_background()) +
                           xlogy(k, model.p_char()) + xlogy(n_char - k, 1.0 - model.p_char());
    cell.log_multiplicity = log_binomial(n_char, k) + log_binomial(n_background, n - k);
    return cell;
}

std::vector<ExpectedCell> expected_cells(const DialectModel& model) {
    const std::size_t n_char = model.characteristic_size();
    const std::size_t n_background = model.num_messages() - n_char;
    std::vector<ExpectedCell> cells;
    cells.reserve((n_char + 1) * (n_background + 1));
    for (std::size_t k = 0; k <= n_char; ++k)
        for (std::size_t b = 0; b <= n_background; ++b) cells.push_back(expected_weight(model, k + b, k));
    std::stable_sort(cells.begin(), cells.end(),
                     [](const ExpectedCell& a, const ExpectedCell& b) { return a.log_probability > b.log_probability; });
    return cells;
}

double message_count_distribution(const DialectModel& model, std::size_t n) {
    const std::size_t n_char = model.characteristic_size();
    const std::size_t n_background = model.num_messages() - n_char;
    if (n > model.num_messages()) throw Error("message count out of range");
    std::vector<double> terms;
    for (std::size_t k = (n > n_background ? n - n_background : 0); k <= std::min(n, n_char); ++k) {
        const auto cell = expected_weight(model, n, k);
        terms.push_back(cell.log_probability + cell.log_multiplicity);
    }
    return std::exp(log_sum_exp(terms));
}

std::vector<double> message_count_distribution(const DialectModel& model) {
    std::vector<double> out(model.num_messages() + 1);
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = message_count_distribution(model, n);
    return out;
}

std::vector<double> expected_dowker_histogram(const DialectModel& model, std::uint64_t num_files, std::size_t max_ranks) {
    std::vector<double> out;
    const auto files = static_cast<double>(num_files);
    for (const auto& cell : expected_cells(model)) {
        if (out.size() >= max_ranks) break;
        const double remaining = static_cast<double>(max_ranks - out.size());
        const auto copies = static_cast<std::size_t>(std::min(cell.multiplicity(), remaining));
        out.insert(out.end(), copies, cell.probability() * files);
    }
    return out;
}

std::vector<double> expected_dowker_histogram(const DialectModel& model, std::uint64_t num_files,
                                              std::span<const MessagePattern> restrict_to) {
    if (restrict_to.empty()) throw Error("expected histogram over an empty pattern set");
    std::vector<double> logs;
    logs.reserve(restrict_to.size());
    for (const auto& p : restrict_to) logs.push_back(pattern_log_probability(model, p));
    const double total = log_sum_exp(logs);
    if (total == neg_inf) throw Error("every restricted pattern has probability zero under the model");
    std::vector<double> out;
    out.reserve(logs.size());
    for (double l : logs) out.push_back(static_cast<double>(num_files) * std::exp(l - total));
    std::sort(out.begin(), out.end(), std::greater<>{});
    return out;
}

}  // namespace dialect

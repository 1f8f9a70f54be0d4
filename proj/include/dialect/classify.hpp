#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dialect/corpus.hpp"
#include "dialect/dowker.hpp"
#include "dialect/model.hpp"

namespace dialect {

struct TwoDialectConfig {
    DialectModel model_a;
    DialectModel model_b;
    double prior_a;

    /// Throws if the models disagree on #M or prior_a is outside (0,1).
    TwoDialectConfig(DialectModel a, DialectModel b, double prior_a);

    bool disjoint() const;
};

/// Direct quotient P(K|B) / P(K|A) of the two pattern probabilities.
double direct_ratio(const TwoDialectConfig& config, const MessagePattern& pattern);

/// Closed form of P(K|B) / P(K|A) for disjoint characteristic sets sharing
/// one background probability. Overlapping sets or differing backgrounds
/// fall back to direct_ratio with a warning. Throws if any probability is
/// 0 or 1.
double conditional_ratio(const TwoDialectConfig& config, const MessagePattern& pattern);

/// Specialization for p_char equal in both dialects. Throws otherwise.
double conditional_ratio_equal_p(const TwoDialectConfig& config, const MessagePattern& pattern);

/// weight(K) / total files; 0 for unobserved patterns.
double empirical_conditional(const WeightedDowkerComplex& complex, const MessagePattern& pattern);

/// Bayes: P(A|K) = P(K|A) P(A) / P(K), clamped to [0,1]. Throws if p_k <= 0.
double posterior(double p_k_given_a, double prior_a, double p_k);

/// P(K|A) from the closed-form model.
struct TheoreticalConditional {
    const DialectModel* model;
};

/// P(K|A) by counting in a single-dialect training complex. With
/// smoothing = alpha > 0, (w + alpha) / (N + alpha * support), support being
/// the number of distinct patterns across training and scored data.
struct EmpiricalConditional {
    const WeightedDowkerComplex* complex;
    double smoothing = 0.0;
};

using Conditional = std::variant<TheoreticalConditional, EmpiricalConditional>;

struct PatternScore {
    MessagePattern pattern;
    double log_p_given_a = 0;
    double p_marginal = 0;
    double posterior_a = 0;
    std::optional<double> ratio_ba;
    std::uint64_t count = 0;  // files in the scored corpus
};

struct CorpusScores {
    std::vector<PatternScore> patterns;   // canonical order
    std::vector<std::size_t> file_score;  // per file, index into patterns

    std::vector<double> file_posteriors() const;
};

/// Scores every distinct pattern in `corpus`. P(K) is the pattern's
/// frequency in `corpus`; every file inherits its pattern's posterior.
/// ratio_ba is filled when a two-dialect config is supplied.
CorpusScores score_corpus(const Corpus& corpus, const Conditional& conditional, double prior_a,
                          const TwoDialectConfig* ratios = nullptr);

/// Baseline: minus the message count, so fewer messages rank as dialect A.
std::vector<double> message_count_scores(const Corpus& corpus);

struct PRPoint {
    double threshold = 0;
    double precision = 0;
    double recall = 0;
    std::size_t true_positives = 0;
    std::size_t predicted_positives = 0;
};

struct PRCurve {
    std::vector<PRPoint> points;  // increasing threshold
    double area = 0;
};

/// Predicted positive means score > threshold. Thresholds are -inf, the
/// midpoints between consecutive distinct scores, and +inf (where nothing is
/// predicted and precision is taken as 1). Area by the trapezoid rule over
/// recall. Throws without any positive.
PRCurve pr_curve(std::span<const double> scores, std::span<const bool> truth);

struct Confusion {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

Confusion confusion_at(std::span<const double> scores, std::span<const bool> truth, double threshold);

/// `file_id,pattern_hex,posterior_A`
void write_scores_csv(const Corpus& corpus, const CorpusScores& scores, std::ostream& out);

struct ScoreRow {
    std::string file_id;
    std::string pattern_hex;
    double score = 0;
};
std::vector<ScoreRow> read_scores_csv(std::istream& in, const std::string& source = "<scores>");

/// `threshold,precision,recall`
void write_pr_csv(const PRCurve& curve, std::ostream& out);

}  // namespace dialect

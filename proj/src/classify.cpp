#include "dialect/classify.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "csv.hpp"
#include "dialect/error.hpp"

namespace dialect {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

void check_open_unit(double p, const char* what) {
    if (!(p > 0.0 && p < 1.0)) throw Error(std::string(what) + " must lie strictly between 0 and 1 for the ratio");
}

std::size_t overlap(const MessagePattern& pattern, const DialectModel& model) {
    std::size_t n = 0;
    for (MessageId m : pattern.members())
        if (model.is_characteristic(m)) ++n;
    return n;
}

}  // namespace

TwoDialectConfig::TwoDialectConfig(DialectModel a, DialectModel b, double prior)
    : model_a(std::move(a)), model_b(std::move(b)), prior_a(prior) {
    if (model_a.num_messages() != model_b.num_messages()) throw Error("dialect models disagree on the number of messages");
    if (!(prior_a > 0.0 && prior_a < 1.0)) throw Error("prior_a must lie strictly between 0 and 1");
}

bool TwoDialectConfig::disjoint() const {
    const auto& a = model_a.characteristic();
    const auto& b = model_b.characteristic();
    std::vector<MessageId> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    return common.empty();
}

double direct_ratio(const TwoDialectConfig& config, const MessagePattern& pattern) {
    return std::exp(pattern_log_probability(config.model_b, pattern) - pattern_log_probability(config.model_a, pattern));
}

double conditional_ratio(const TwoDialectConfig& config, const MessagePattern& pattern) {
    const double p0 = config.model_a.p_background();
    const double pa = config.model_a.p_char();
    const double pb = config.model_b.p_char();
    check_open_unit(p0, "p_background");
    check_open_unit(pa, "p_char of dialect A");
    check_open_unit(pb, "p_char of dialect B");
    check_open_unit(config.model_b.p_background(), "p_background of dialect B");
    if (pattern.min_universe() > config.model_a.num_messages()) throw Error("pattern member outside the model's messages");

    if (!config.disjoint() || config.model_b.p_background() != p0) {
        warn("characteristic sets overlap or backgrounds differ; using the direct pseudolikelihood quotient");
        return direct_ratio(config, pattern);
    }
    const double in_a = static_cast<double>(overlap(pattern, config.model_a));
    const double in_b = static_cast<double>(overlap(pattern, config.model_b));
    const double size_a = static_cast<double>(config.model_a.characteristic_size());
    const double size_b = static_cast<double>(config.model_b.characteristic_size());
    const double l0 = std::log(p0), l0c = std::log1p(-p0);
    const double la = std::log(pa), lac = std::log1p(-pa);
    const double lb = std::log(pb), lbc = std::log1p(-pb);
    const double log_ratio = in_a * (l0 - la + lac - l0c) + in_b * (lb - l0 + l0c - lbc) + size_a * (l0c - lac) +
                             size_b * (lbc - l0c);
    return std::exp(log_ratio);
}

double conditional_ratio_equal_p(const TwoDialectConfig& config, const MessagePattern& pattern) {
    const double p0 = config.model_a.p_background();
    const double p = config.model_a.p_char();
    if (std::abs(config.model_b.p_char() - p) > 1e-12) throw Error("equal-p ratio needs p_char equal in both dialects");
    if (!config.disjoint()) throw Error("equal-p ratio needs disjoint characteristic sets");
    if (config.model_b.p_background() != p0) throw Error("equal-p ratio needs a shared background probability");
    check_open_unit(p0, "p_background");
    check_open_unit(p, "p_char");
    if (pattern.min_universe() > config.model_a.num_messages()) throw Error("pattern member outside the model's messages");

    const double diff = static_cast<double>(overlap(pattern, config.model_b)) - static_cast<double>(overlap(pattern, config.model_a));
    const double size_diff =
        static_cast<double>(config.model_b.characteristic_size()) - static_cast<double>(config.model_a.characteristic_size());
    const double log_factor = std::log(p) - std::log(p0) + std::log1p(-p0) - std::log1p(-p);
    return std::exp(diff * log_factor + size_diff * (std::log1p(-p) - std::log1p(-p0)));
}

double empirical_conditional(const WeightedDowkerComplex& complex, const MessagePattern& pattern) {
    if (complex.total_files() == 0) return 0.0;
    return static_cast<double>(complex.weight(pattern)) / static_cast<double>(complex.total_files());
}

double posterior(double p_k_given_a, double prior_a, double p_k) {
    if (!(p_k > 0.0)) throw Error("posterior undefined: pattern has zero marginal probability");
    return std::clamp(p_k_given_a * prior_a / p_k, 0.0, 1.0);
}

std::vector<double> CorpusScores::file_posteriors() const {
    std::vector<double> out(file_score.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = patterns[file_score[i]].posterior_a;
    return out;
}

CorpusScores score_corpus(const Corpus& corpus, const Conditional& conditional, double prior_a,
                          const TwoDialectConfig* ratios) {
    if (!(prior_a > 0.0 && prior_a <= 1.0)) throw Error("prior_a must lie in (0,1]");
    CorpusScores out;
    if (corpus.empty()) return out;

    std::unordered_map<MessagePattern, std::uint64_t, PatternHash> counts;
    for (const auto& f : corpus.files()) ++counts[f.pattern];
    std::vector<MessagePattern> order;
    order.reserve(counts.size());
    for (const auto& [p, c] : counts) order.push_back(p);
    std::sort(order.begin(), order.end(), CanonicalLess{});

    // Laplace support: distinct patterns across training and scored data.
    double support = 0;
    if (const auto* emp = std::get_if<EmpiricalConditional>(&conditional); emp && emp->smoothing > 0) {
        std::size_t extra = 0;
        for (const auto& p : order)
            if (!emp->complex->contains(p)) ++extra;
        support = static_cast<double>(emp->complex->node_count() + extra);
    }

    const double total = static_cast<double>(corpus.size());
    const double log_prior = std::log(prior_a);
    std::unordered_map<MessagePattern, std::size_t, PatternHash> index;
    for (const auto& p : order) {
        PatternScore s;
        s.pattern = p;
        s.count = counts[p];
        s.p_marginal = static_cast<double>(s.count) / total;
        if (const auto* th = std::get_if<TheoreticalConditional>(&conditional)) {
            s.log_p_given_a = pattern_log_probability(*th->model, p);
        } else {
            const auto& emp = std::get<EmpiricalConditional>(conditional);
            const double w = static_cast<double>(emp.complex->weight(p));
            const double n = static_cast<double>(emp.complex->total_files());
            const double num = w + emp.smoothing;
            const double den = n + emp.smoothing * support;
            s.log_p_given_a = num > 0 && den > 0 ? std::log(num / den) : neg_inf;
        }
        const double log_post = s.log_p_given_a + log_prior - std::log(s.p_marginal);
        s.posterior_a = s.log_p_given_a == neg_inf ? 0.0 : std::clamp(std::exp(log_post), 0.0, 1.0);
        if (ratios) s.ratio_ba = direct_ratio(*ratios, p);
        index.emplace(p, out.patterns.size());
        out.patterns.push_back(std::move(s));
    }
    out.file_score.reserve(corpus.size());
    for (const auto& f : corpus.files()) out.file_score.push_back(index.at(f.pattern));
    return out;
}

std::vector<double> message_count_scores(const Corpus& corpus) {
    std::vector<double> out;
    out.reserve(corpus.size());
    for (const auto& f : corpus.files()) out.push_back(-static_cast<double>(f.pattern.size()));
    return out;
}

PRCurve pr_curve(std::span<const double> scores, std::span<const bool> truth) {
    if (scores.size() != truth.size()) throw Error("scores and truth differ in length");
    const auto positives = static_cast<std::size_t>(std::count(truth.begin(), truth.end(), true));
    if (positives == 0) throw Error("precision-recall curve needs at least one positive");
    for (double s : scores)
        if (std::isnan(s)) throw Error("NaN score");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    // Walk groups of tied scores from the top; after each group the
    // threshold is the midpoint to the next lower score.
    struct Step {
        double threshold;
        std::size_t tp, pp;
    };
    std::vector<Step> steps{{std::numeric_limits<double>::infinity(), 0, 0}};
    std::size_t tp = 0, pp = 0;
    for (std::size_t i = 0; i < order.size();) {
        const double s = scores[order[i]];
        std::size_t j = i;
        for (; j < order.size() && scores[order[j]] == s; ++j) {
            ++pp;
            if (truth[order[j]]) ++tp;
        }
        const double threshold = j < order.size() ? 0.5 * (s + scores[order[j]]) : -std::numeric_limits<double>::infinity();
        steps.push_back({threshold, tp, pp});
        i = j;
    }

    PRCurve curve;
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        PRPoint p;
        p.threshold = it->threshold;
        p.true_positives = it->tp;
        p.predicted_positives = it->pp;
        p.precision = it->pp == 0 ? 1.0 : static_cast<double>(it->tp) / static_cast<double>(it->pp);
        p.recall = static_cast<double>(it->tp) / static_cast<double>(positives);
        curve.points.push_back(p);
    }
    for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
        const auto& a = curve.points[i];
        const auto& b = curve.points[i + 1];
        curve.area += (a.recall - b.recall) * 0.5 * (a.precision + b.precision);
    }
    return curve;
}

Confusion confusion_at(std::span<const double> scores, std::span<const bool> truth, double threshold) {
    if (scores.size() != truth.size()) throw Error("scores and truth differ in length");
    Confusion c;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool predicted = scores[i] > threshold;
        if (predicted && truth[i]) ++c.tp;
        else if (predicted) ++c.fp;
        else if (truth[i]) ++c.fn;
        else ++c.tn;
    }
    return c;
}

void write_scores_csv(const Corpus& corpus, const CorpusScores& scores, std::ostream& out) {
    out << "file_id,pattern_hex,posterior_A\n";
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& s = scores.patterns.at(scores.file_score.at(i));
        out << corpus.file(i).id << ',' << s.pattern.to_hex(corpus.num_messages()) << ','
            << detail::format_double(s.posterior_a) << '\n';
    }
}

std::vector<ScoreRow> read_scores_csv(std::istream& in, const std::string& source) {
    detail::LineReader reader(in);
    std::string line;
    std::vector<ScoreRow> rows;
    bool header = false;
    while (reader.next(line)) {
        if (detail::blank(line)) continue;
        const auto cells = detail::split(line, ',');
        if (!header) {
            if (cells.size() != 3 || detail::trim(cells[0]) != "file_id") {
                throw ParseError(source, reader.line_no(), "header must be 'file_id,pattern_hex,<score>'");
            }
            header = true;
            continue;
        }
        if (cells.size() != 3) throw ParseError(source, reader.line_no(), "expected 3 cells");
        const auto v = detail::parse_number<double>(cells[2]);
        if (!v) throw ParseError(source, reader.line_no(), "bad score");
        rows.push_back({std::string(detail::trim(cells[0])), std::string(detail::trim(cells[1])), *v});
    }
    return rows;
}

void write_pr_csv(const PRCurve& curve, std::ostream& out) {
    out << "threshold,precision,recall\n";
    for (const auto& p : curve.points) {
        out << detail::format_double(p.threshold) << ',' << detail::format_double(p.precision) << ','
            << detail::format_double(p.recall) << '\n';
    }
}

}  // namespace dialect

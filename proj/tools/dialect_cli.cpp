#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dialect/classify.hpp"
#include "dialect/corpus.hpp"
#include "dialect/dowker.hpp"
#include "dialect/error.hpp"
#include "dialect/independence.hpp"
#include "dialect/model.hpp"
#include "dialect/random.hpp"
#include "dialect/simulate.hpp"
#include "dialect/viz.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dialect;

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<bool> truth_of(const Corpus& corpus, const std::string& positive) {
    if (!corpus.has_labels()) throw Error("corpus has no labels; PR curves need labelled files");
    std::vector<bool> truth;
    bool any = false;
    for (const auto& f : corpus.files()) {
        truth.push_back(f.label == positive);
        any = any || truth.back();
    }
    if (!any) throw Error("no file carries the positive label '" + positive + "'");
    return truth;
}

PRCurve curve_for(std::span<const double> scores, const std::vector<bool>& truth) {
    auto flags = std::make_unique<bool[]>(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) flags[i] = truth[i];
    return pr_curve(scores, std::span<const bool>(flags.get(), truth.size()));
}

Confusion confusion_for(std::span<const double> scores, const std::vector<bool>& truth, double threshold) {
    auto flags = std::make_unique<bool[]>(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) flags[i] = truth[i];
    return confusion_at(scores, std::span<const bool>(flags.get(), truth.size()), threshold);
}

void write_pr(const PRCurve& curve, const fs::path& path) {
    auto out = open_out(path);
    write_pr_csv(curve, out);
}

// ---- ingest

struct IngestArgs {
    std::string pairs, dense, labels, meta, out;
    std::size_t num_messages = 0;
};

int run_ingest(const IngestArgs& a) {
    Corpus corpus(0);
    if (!a.pairs.empty()) {
        if (a.num_messages == 0) throw Error("--pairs needs --num-messages");
        corpus = load_pairs(a.pairs, a.num_messages);
    } else {
        corpus = load_corpus(a.dense);
    }
    if (!a.labels.empty()) load_labels_into(corpus, a.labels);
    if (!a.meta.empty()) load_message_meta_into(corpus, a.meta);
    save_archive(corpus, a.out);
    std::cout << "files " << corpus.size() << "\nmessages " << corpus.num_messages() << "\npairs "
              << corpus.total_pairs() << "\nlabelled " << (corpus.has_labels() ? "yes" : "no") << '\n';
    return 0;
}

// ---- estimate

struct EstimateArgs {
    std::string corpus, out, out_frequencies, out_model;
    double threshold = 0.25;
    double invert_cutoff = 0.5;
    bool no_invert = false;
};

int run_estimate(const EstimateArgs& a) {
    const auto original = load_corpus(a.corpus);
    const auto raw = message_frequencies(original);
    InversionResult inv{original, {}};
    if (!a.no_invert) inv = invert_frequent_messages(original, a.invert_cutoff);
    const auto freq = message_frequencies(inv.corpus);
    auto report = select_characteristic(freq, a.threshold, inv.corpus.size());
    report.raw_frequencies = raw;

    std::size_t empty = 0;
    for (const auto& f : inv.corpus.files()) empty += f.pattern.empty();
    const double empty_fraction = static_cast<double>(empty) / static_cast<double>(inv.corpus.size());

    json doc = {
        {"num_files", inv.corpus.size()},
        {"num_messages", inv.corpus.num_messages()},
        {"threshold", report.threshold_used},
        {"invert_cutoff", a.no_invert ? json(nullptr) : json(a.invert_cutoff)},
        {"inverted", inv.mask},
        {"characteristic", report.characteristic},
        {"p_char", report.p_char ? json(*report.p_char) : json(nullptr)},
        {"p_background", report.p_background},
        {"p_background_source", "threshold"},
        {"empty_fraction", empty_fraction},
        {"p_background_from_empty",
         empty > 0 ? json(estimate_background(empty_fraction, inv.corpus.num_messages())) : json(nullptr)},
        {"frequencies", report.frequencies},
        {"raw_frequencies", report.raw_frequencies},
    };
    if (report.t_statistics) doc["t_statistics"] = *report.t_statistics;
    if (report.p_char) {
        const auto model = report.to_model();
        json w = json::array();
        for (const auto& s : model.warnings()) {
            warn(s);
            w.push_back(s);
        }
        doc["warnings"] = w;
    }
    if (!a.out.empty()) open_out(a.out) << doc.dump(2) << '\n';
    if (!a.out_frequencies.empty()) {
        auto out = open_out(a.out_frequencies);
        out << "message_id,frequency,raw_frequency,inverted,characteristic,t_statistic\n";
        std::unordered_set<MessageId> chars(report.characteristic.begin(), report.characteristic.end());
        for (std::size_t k = 0; k < freq.size(); ++k) {
            const auto id = static_cast<MessageId>(k);
            const bool inverted = std::binary_search(inv.mask.begin(), inv.mask.end(), id);
            out << k << ',' << num(freq[k]) << ',' << num(raw[k]) << ',' << inverted << ',' << chars.contains(id)
                << ',' << (report.t_statistics ? num((*report.t_statistics)[k]) : "") << '\n';
        }
    }
    if (!a.out_model.empty()) {
        if (!report.p_char) throw Error("empty characteristic set; no model to write");
        save_model(report.to_model(), a.out_model);
    }
    std::cout << "characteristic " << report.characteristic.size() << "\np_char "
              << (report.p_char ? num(*report.p_char) : "none") << "\np_background " << num(report.p_background)
              << "\ninverted " << inv.mask.size() << '\n';
    return 0;
}

// ---- dowker

struct DowkerArgs {
    std::string corpus, out_nodes, out_edges;
    std::uint64_t min_weight = 1;
    unsigned workers = 1;
};

int run_dowker(const DowkerArgs& a) {
    const auto corpus = load_corpus(a.corpus);
    const auto complex = build_complex(corpus, a.workers);
    const auto kept = filter_by_weight(complex, a.min_weight);
    const auto edges = lattice_edges(kept);
    std::size_t violations = 0;
    for (const auto& e : edges) violations += e.violation;
    if (!a.out_nodes.empty()) {
        auto out = open_out(a.out_nodes);
        write_nodes_csv(kept, out);
    }
    if (!a.out_edges.empty()) {
        auto out = open_out(a.out_edges);
        write_edges_csv(edges, complex.num_messages(), out);
    }
    std::cout << "nodes " << kept.node_count() << "\nedges " << edges.size() << "\nviolations " << violations
              << '\n';
    return 0;
}

// ---- classify

struct ClassifyArgs {
    std::string combined, train, model, out_scores, out_pr, out_baseline_pr, positive = "A";
    double prior = 0;
    std::optional<double> threshold;
    double smoothing = 0;
    std::optional<double> invert_cutoff;
    bool baseline = false;
};

int run_classify(const ClassifyArgs& a) {
    if (!(a.prior > 0.0 && a.prior < 1.0)) throw Error("--prior must lie in (0,1)");
    auto combined = load_corpus(a.combined);

    std::optional<WeightedDowkerComplex> train_complex;
    std::optional<DialectModel> model;
    if (!a.train.empty()) {
        auto train = load_corpus(a.train);
        if (train.num_messages() != combined.num_messages()) throw Error("training and combined corpora differ in #M");
        if (a.invert_cutoff) {
            auto inv = invert_frequent_messages(train, *a.invert_cutoff);
            combined = apply_inversion(combined, inv.mask);
            train = std::move(inv.corpus);
            std::cout << "inverted " << inv.mask.size() << '\n';
        }
        train_complex = build_complex(train);
    } else {
        if (a.invert_cutoff) throw Error("--invert-cutoff applies to --train only");
        model = load_model(a.model);
        if (model->num_messages() != combined.num_messages()) throw Error("model and corpus differ in #M");
    }

    const Conditional conditional = train_complex ? Conditional(EmpiricalConditional{&*train_complex, a.smoothing})
                                                  : Conditional(TheoreticalConditional{&*model});
    const auto scores = score_corpus(combined, conditional, a.prior);
    const auto posteriors = scores.file_posteriors();
    if (!a.out_scores.empty()) {
        auto out = open_out(a.out_scores);
        write_scores_csv(combined, scores, out);
    }
    std::cout << "files " << combined.size() << "\npatterns " << scores.patterns.size() << '\n';

    if (!combined.has_labels()) {
        if (!a.out_pr.empty() || a.baseline || a.threshold) throw Error("combined corpus has no labels for evaluation");
        return 0;
    }
    const auto truth = truth_of(combined, a.positive);
    const auto curve = curve_for(posteriors, truth);
    std::cout << "pr_area " << num(curve.area) << '\n';
    if (!a.out_pr.empty()) write_pr(curve, a.out_pr);
    if (a.baseline || !a.out_baseline_pr.empty()) {
        const auto base = message_count_scores(combined);
        const auto bc = curve_for(base, truth);
        std::cout << "baseline_pr_area " << num(bc.area) << '\n';
        if (!a.out_baseline_pr.empty()) write_pr(bc, a.out_baseline_pr);
    }
    if (a.threshold) {
        const auto c = confusion_for(posteriors, truth, *a.threshold);
        std::cout << "threshold " << num(*a.threshold) << "\ntp " << c.tp << "\nfp " << c.fp << "\ntn " << c.tn
                  << "\nfn " << c.fn << '\n';
    }
    return 0;
}

// ---- export-viz

struct VizArgs {
    std::string corpus, nodes, edges, scores, color_by = "weight", out, reference_label;
    std::size_t num_messages = 0;
    std::uint64_t min_weight = 1;
    double radius_scale = 1.0;
};

int run_export_viz(const VizArgs& a) {
    VizOptions opt;
    opt.color_by = parse_color_by(a.color_by);
    opt.min_weight = a.min_weight;
    opt.radius_scale = a.radius_scale;
    if (!a.reference_label.empty()) opt.reference_label = a.reference_label;

    WeightedDowkerComplex complex(0);
    std::optional<std::vector<LatticeEdge>> edges;
    if (!a.corpus.empty()) {
        complex = build_complex(load_corpus(a.corpus));
    } else {
        std::ifstream in(a.nodes);
        if (!in) throw Error("cannot open " + a.nodes);
        complex = read_nodes_csv(in, a.num_messages, a.nodes);
        if (!a.edges.empty()) {
            std::ifstream ein(a.edges);
            if (!ein) throw Error("cannot open " + a.edges);
            edges = read_edges_csv(ein, a.edges);
        }
    }
    std::optional<PosteriorMap> posteriors;
    if (!a.scores.empty()) {
        std::ifstream in(a.scores);
        if (!in) throw Error("cannot open " + a.scores);
        posteriors.emplace();
        for (const auto& row : read_scores_csv(in, a.scores)) (*posteriors)[row.pattern_hex] = row.score;
    }
    const auto text = export_viz_graph(complex, opt, edges ? &*edges : nullptr, posteriors ? &*posteriors : nullptr);
    const auto doc = json::parse(text);
    open_out(a.out) << text << '\n';
    std::cout << "nodes " << doc["nodes"].size() << "\nedges " << doc["edges"].size() << '\n';
    return 0;
}

// ---- simulate

struct SimulateArgs {
    std::string model, model_b, label, out, out_envelope, align = "rank", characteristic;
    std::size_t files = 1000, files_b = 0, trials = 0, num_messages = 0;
    std::optional<double> p_char, p_background;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

DialectModel inline_model(const SimulateArgs& a) {
    if (!a.num_messages || !a.p_char || !a.p_background)
        throw Error("give --model or all of --num-messages, --p-char, --p-background");
    std::vector<MessageId> ids;
    std::stringstream ss(a.characteristic);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        MessageId id = 0;
        auto r = std::from_chars(tok.data(), tok.data() + tok.size(), id);
        if (r.ec != std::errc() || r.ptr != tok.data() + tok.size()) throw Error("bad message id '" + tok + "'");
        ids.push_back(id);
    }
    return DialectModel(a.num_messages, ids, *a.p_char, *a.p_background);
}

int run_simulate(const SimulateArgs& a) {
    const DialectModel model = a.model.empty() ? inline_model(a) : load_model(a.model);
    json meta = {{"generator", CounterRng::name}, {"seed", a.seed}, {"model", json::parse(model_to_json(model))}};

    if (a.trials > 0) {
        const Alignment al = a.align == "pattern" ? Alignment::Pattern
                             : a.align == "rank"  ? Alignment::Rank
                                                  : throw Error("unknown alignment '" + a.align + "'");
        const auto rep = replicate_histogram(model, a.files, a.trials, a.seed, al, a.workers);
        if (!a.out_envelope.empty()) {
            auto out = open_out(a.out_envelope);
            write_envelope_csv(rep, out);
        }
        std::size_t outside = 0, checked = 0;
        for (const auto& row : rep.envelope) {
            if (row.expected < 5) continue;
            ++checked;
            outside += row.expected < row.min || row.expected > row.max;
        }
        std::cout << "generator " << CounterRng::name << "\nalignment " << a.align << "\nranks " << rep.envelope.size()
                  << "\nranks_expected_ge_5 " << checked << "\noutside_envelope " << outside << '\n';
        if (a.out.empty()) return 0;
    }
    if (a.out.empty()) throw Error("--out is required unless --trials is given");

    Corpus corpus(0);
    if (!a.model_b.empty()) {
        const auto b = load_model(a.model_b);
        corpus = generate_mixture(TwoDialectConfig(model, b, 0.5), a.files, a.files_b, a.seed);
        meta["model_b"] = json::parse(model_to_json(b));
        meta["files_a"] = a.files;
        meta["files_b"] = a.files_b;
    } else {
        std::optional<std::string> label;
        if (!a.label.empty()) label = a.label;
        corpus = generate_corpus(model, a.files, a.seed, label);
        meta["files"] = a.files;
    }
    save_archive(corpus, a.out);
    open_out(fs::path(a.out) / "generator.json") << meta.dump(2) << '\n';
    std::cout << "generator " << CounterRng::name << "\nfiles " << corpus.size() << '\n';
    return 0;
}

// ---- independence

struct IndependenceArgs {
    std::string corpus, out;
    std::size_t sample = 30;
    std::uint64_t seed = 0;
    bool yates = false;
    double alpha = 0.05;
};

int run_independence(const IndependenceArgs& a) {
    const auto corpus = load_corpus(a.corpus);
    const auto sample = sample_messages(corpus, a.sample, a.seed);
    const auto report = pairwise_matrix(corpus, sample, a.yates);
    if (!a.out.empty()) {
        auto out = open_out(a.out);
        write_independence_csv(report, out);
    }
    std::size_t degenerate = 0;
    for (std::size_t i = 0; i < report.size(); ++i)
        for (std::size_t j = i + 1; j < report.size(); ++j) degenerate += report.is_degenerate(i, j);
    std::cout << "sampled " << sample.size() << "\npairs " << sample.size() * (sample.size() - 1) / 2
              << "\ndegenerate " << degenerate << "\nrejection_rate " << num(report.rejection_rate(a.alpha))
              << "\nalpha " << num(a.alpha) << '\n';
    return 0;
}

// ---- pr

struct PrArgs {
    std::string scores, labels, positive = "A", out;
};

int run_pr(const PrArgs& a) {
    std::ifstream sin(a.scores);
    if (!sin) throw Error("cannot open " + a.scores);
    const auto rows = read_scores_csv(sin, a.scores);
    std::ifstream lin(a.labels);
    if (!lin) throw Error("cannot open " + a.labels);
    std::unordered_map<std::string, std::string> label_of;
    for (auto& [id, label] : read_labels(lin, a.labels)) label_of[id] = label;

    std::vector<double> scores;
    std::vector<bool> truth;
    bool any = false;
    for (const auto& r : rows) {
        auto it = label_of.find(r.file_id);
        if (it == label_of.end()) throw Error("no label for file '" + r.file_id + "'");
        scores.push_back(r.score);
        truth.push_back(it->second == a.positive);
        any = any || truth.back();
    }
    if (!any) throw Error("no file carries the positive label '" + a.positive + "'");
    const auto curve = curve_for(scores, truth);
    if (!a.out.empty()) write_pr(curve, a.out);
    std::cout << "files " << rows.size() << "\npr_area " << num(curve.area) << '\n';
    return 0;
}

// ---- triage

struct TriageArgs {
    std::string selection, corpus, out;
};

int run_triage(const TriageArgs& a) {
    const auto corpus = load_corpus(a.corpus);
    const auto selected = read_selection(read_text(a.selection));
    std::unordered_set<MessagePattern, PatternHash> wanted;
    for (const auto& hex : selected) {
        auto p = MessagePattern::from_hex(hex);
        if (!p.empty() && p.min_universe() > corpus.num_messages())
            throw Error("selected pattern " + hex + " names messages outside the corpus");
        wanted.insert(std::move(p));
    }
    std::ostringstream body;
    std::size_t matched = 0;
    body << "file_id,pattern_hex,label\n";
    for (const auto& f : corpus.files()) {
        if (!wanted.contains(f.pattern)) continue;
        ++matched;
        body << f.id << ',' << f.pattern.to_hex(corpus.num_messages()) << ',' << f.label.value_or("") << '\n';
    }
    if (!a.out.empty()) open_out(a.out) << body.str();
    else std::cout << body.str();
    std::cerr << "selected " << selected.size() << " patterns, " << matched << " files\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Format dialect analysis: corpora, Dowker complexes, dialect models and classification."};
    app.require_subcommand(1);

    IngestArgs ingest;
    auto* ing = app.add_subcommand("ingest", "Normalize a corpus into an archive directory");
    auto* pairs = ing->add_option("--pairs", ingest.pairs, "file_id,message_id CSV");
    auto* dense = ing->add_option("--dense", ingest.dense, "Dense 0/1 CSV or an existing archive");
    pairs->excludes(dense);
    ing->add_option("--num-messages", ingest.num_messages, "Message universe size for --pairs");
    ing->add_option("--labels", ingest.labels, "file_id,label CSV");
    ing->add_option("--messages-meta", ingest.meta, "Message metadata TSV");
    ing->add_option("--out", ingest.out, "Output archive directory")->required();

    EstimateArgs est;
    auto* es = app.add_subcommand("estimate", "Estimate a one-dialect model from a corpus");
    es->add_option("--corpus", est.corpus, "Archive or dense CSV")->required();
    es->add_option("--threshold", est.threshold, "Frequency cutoff for characteristic messages")->capture_default_str();
    es->add_option("--invert-cutoff", est.invert_cutoff, "Complement messages more frequent than this")
        ->capture_default_str();
    es->add_flag("--no-invert", est.no_invert, "Skip the inversion step");
    es->add_option("--out", est.out, "Estimation report JSON");
    es->add_option("--out-frequencies", est.out_frequencies, "Per-message frequency CSV");
    es->add_option("--out-model", est.out_model, "Model JSON for classify/simulate");

    DowkerArgs dow;
    auto* dw = app.add_subcommand("dowker", "Build the weighted Dowker complex");
    dw->add_option("--corpus", dow.corpus, "Archive or dense CSV")->required();
    dw->add_option("--min-weight", dow.min_weight, "Drop nodes lighter than this")->capture_default_str();
    dw->add_option("--out-nodes", dow.out_nodes, "Nodes CSV");
    dw->add_option("--out-edges", dow.out_edges, "Lattice edges CSV");
    dw->add_option("--workers", dow.workers, "Build threads")->capture_default_str();

    ClassifyArgs cls;
    auto* cl = app.add_subcommand("classify", "Score a combined corpus by posterior P(A|K)");
    cl->add_option("--combined", cls.combined, "Corpus to score")->required();
    auto* train = cl->add_option("--train", cls.train, "Single-dialect training corpus (empirical conditional)");
    auto* model = cl->add_option("--model", cls.model, "Model JSON (theoretical conditional)");
    train->excludes(model);
    cl->add_option("--prior", cls.prior, "Prior P(A), in (0,1)")->required();
    cl->add_option("--threshold", cls.threshold, "Print confusion counts at this posterior");
    cl->add_option("--out-scores", cls.out_scores, "Per-file scores CSV");
    cl->add_option("--out-pr", cls.out_pr, "PR curve CSV");
    cl->add_flag("--baseline", cls.baseline, "Also report the message-count baseline");
    cl->add_option("--out-baseline-pr", cls.out_baseline_pr, "Baseline PR curve CSV");
    cl->add_option("--positive-label", cls.positive, "Label counted as dialect A")->capture_default_str();
    cl->add_option("--smoothing", cls.smoothing, "Additive smoothing for the empirical conditional")
        ->capture_default_str();
    cl->add_option("--invert-cutoff", cls.invert_cutoff, "Invert messages frequent in training, in both corpora");

    VizArgs viz;
    auto* vz = app.add_subcommand("export-viz", "Write the VizGraph JSON for the viewer");
    auto* vcorpus = vz->add_option("--corpus", viz.corpus, "Archive or dense CSV");
    auto* vnodes = vz->add_option("--nodes", viz.nodes, "Nodes CSV from dowker");
    vcorpus->excludes(vnodes);
    vz->add_option("--edges", viz.edges, "Edges CSV from dowker")->needs(vnodes);
    vz->add_option("--num-messages", viz.num_messages, "Message universe for --nodes (default: from hex width)");
    vz->add_option("--min-weight", viz.min_weight, "Drop nodes lighter than this")->capture_default_str();
    vz->add_option("--color-by", viz.color_by, "weight, label-fraction or posterior")->capture_default_str();
    vz->add_option("--reference-label", viz.reference_label, "Label whose fraction drives label-fraction color");
    vz->add_option("--scores", viz.scores, "Scores CSV from classify");
    vz->add_option("--radius-scale", viz.radius_scale, "Layer radius multiplier")->capture_default_str();
    vz->add_option("--out", viz.out, "VizGraph JSON")->required();

    SimulateArgs sim;
    auto* sm = app.add_subcommand("simulate", "Generate synthetic corpora or histogram envelopes");
    sm->add_option("--model", sim.model, "Model JSON");
    sm->add_option("--num-messages", sim.num_messages, "Inline model: #M");
    sm->add_option("--characteristic", sim.characteristic, "Inline model: comma-separated ids");
    sm->add_option("--p-char", sim.p_char, "Inline model: characteristic probability");
    sm->add_option("--p-background", sim.p_background, "Inline model: background probability");
    sm->add_option("--files", sim.files, "Files (dialect A when mixing)")->capture_default_str();
    sm->add_option("--seed", sim.seed, "Seed")->required();
    sm->add_option("--label", sim.label, "Label for every generated file");
    sm->add_option("--model-b", sim.model_b, "Second dialect model JSON for a labelled A/B mixture");
    sm->add_option("--files-b", sim.files_b, "Files from the second dialect")->capture_default_str();
    sm->add_option("--trials", sim.trials, "Replicate the Dowker histogram this many times");
    sm->add_option("--out-envelope", sim.out_envelope, "Envelope CSV");
    sm->add_option("--align", sim.align, "Envelope alignment: rank or pattern")->capture_default_str();
    sm->add_option("--workers", sim.workers, "Trial threads")->capture_default_str();
    sm->add_option("--out", sim.out, "Output archive directory");

    IndependenceArgs ind;
    auto* in = app.add_subcommand("independence", "Pairwise chi-square tests on sampled messages");
    in->add_option("--corpus", ind.corpus, "Archive or dense CSV")->required();
    in->add_option("--sample", ind.sample, "Messages to sample")->capture_default_str();
    in->add_option("--seed", ind.seed, "Sampling seed")->required();
    in->add_flag("--yates", ind.yates, "Apply the continuity correction");
    in->add_option("--alpha", ind.alpha, "Level for the reported rejection rate")->capture_default_str();
    in->add_option("--out", ind.out, "Pairwise CSV");

    PrArgs pr;
    auto* p = app.add_subcommand("pr", "PR curve from a scores CSV and labels");
    p->add_option("--scores", pr.scores, "Scores CSV")->required();
    p->add_option("--labels", pr.labels, "file_id,label CSV")->required();
    p->add_option("--positive-label", pr.positive, "Positive label")->capture_default_str();
    p->add_option("--out", pr.out, "PR curve CSV");

    TriageArgs tri;
    auto* tr = app.add_subcommand("triage", "List files matching a viewer selection");
    tr->add_option("--selection", tri.selection, "Selection JSON from the viewer")->required();
    tr->add_option("--corpus", tri.corpus, "Archive or dense CSV")->required();
    tr->add_option("--out", tri.out, "Output CSV (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ing) {
            if (ingest.pairs.empty() && ingest.dense.empty()) throw Error("give --pairs or --dense");
            return run_ingest(ingest);
        }
        if (*es) return run_estimate(est);
        if (*dw) return run_dowker(dow);
        if (*cl) {
            if (cls.train.empty() && cls.model.empty()) throw Error("give --train or --model");
            return run_classify(cls);
        }
        if (*vz) {
            if (viz.corpus.empty() && viz.nodes.empty()) throw Error("give --corpus or --nodes");
            return run_export_viz(viz);
        }
        if (*sm) return run_simulate(sim);
        if (*in) return run_independence(ind);
        if (*p) return run_pr(pr);
        if (*tr) return run_triage(tri);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

#include "dialect/dowker.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <thread>

#include "csv.hpp"
#include "dialect/error.hpp"

namespace dialect {

using detail::LineReader;
using detail::parse_number;
using detail::split;
using detail::trim;

WeightedDowkerComplex::WeightedDowkerComplex(std::size_t num_messages, std::vector<std::string> labels)
    : num_messages_(num_messages), labels_(std::move(labels)) {}

const WeightedDowkerComplex::Node* WeightedDowkerComplex::find(const MessagePattern& pattern) const {
    auto it = nodes_.find(pattern);
    return it == nodes_.end() ? nullptr : &it->second;
}

std::uint64_t WeightedDowkerComplex::weight(const MessagePattern& pattern) const {
    const Node* n = find(pattern);
    return n ? n->weight : 0;
}

void WeightedDowkerComplex::add(const MessagePattern& pattern, std::uint64_t count, std::optional<std::size_t> label) {
    if (count == 0) return;
    if (pattern.min_universe() > num_messages_) throw Error("pattern outside complex width");
    auto [it, inserted] = nodes_.try_emplace(pattern);
    Node& node = it->second;
    if (inserted) node.label_counts.assign(labels_.size(), 0);
    node.weight += count;
    if (label) node.label_counts.at(*label) += count;
    total_files_ += count;
}

void WeightedDowkerComplex::set_node(const MessagePattern& pattern, Node node) {
    if (node.weight == 0) throw Error("Dowker nodes must have positive weight");
    if (pattern.min_universe() > num_messages_) throw Error("pattern outside complex width");
    node.label_counts.resize(labels_.size(), 0);
    auto [it, inserted] = nodes_.try_emplace(pattern);
    if (!inserted) total_files_ -= it->second.weight;
    total_files_ += node.weight;
    it->second = std::move(node);
}

void WeightedDowkerComplex::merge(const WeightedDowkerComplex& other) {
    if (other.num_messages_ != num_messages_ || other.labels_ != labels_) {
        throw Error("cannot merge Dowker complexes over different messages or labels");
    }
    for (const auto& [pattern, node] : other.nodes_) {
        auto [it, inserted] = nodes_.try_emplace(pattern, node);
        if (!inserted) {
            it->second.weight += node.weight;
            for (std::size_t l = 0; l < labels_.size(); ++l) it->second.label_counts[l] += node.label_counts[l];
        }
    }
    total_files_ += other.total_files_;
}

std::vector<MessagePattern> WeightedDowkerComplex::patterns() const {
    std::vector<MessagePattern> out;
    out.reserve(nodes_.size());
    for (const auto& [p, n] : nodes_) out.push_back(p);
    std::sort(out.begin(), out.end(), CanonicalLess{});
    return out;
}

namespace {

WeightedDowkerComplex build_range(const Corpus& corpus, const std::vector<std::string>& labels, std::size_t begin,
                                  std::size_t end) {
    WeightedDowkerComplex complex(corpus.num_messages(), labels);
    for (std::size_t i = begin; i < end; ++i) {
        const auto& f = corpus.files()[i];
        std::optional<std::size_t> label;
        if (f.label) {
            label = static_cast<std::size_t>(std::lower_bound(labels.begin(), labels.end(), *f.label) - labels.begin());
        }
        complex.add(f.pattern, 1, label);
    }
    return complex;
}

}  // namespace

WeightedDowkerComplex build_complex(const Corpus& corpus, unsigned workers) {
    const auto labels = corpus.labels();
    const std::size_t n = corpus.size();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) return build_range(corpus, labels, 0, n);

    std::vector<WeightedDowkerComplex> parts(workers);
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] { parts[w] = build_range(corpus, labels, n * w / workers, n * (w + 1) / workers); });
    }
    for (auto& t : threads) t.join();
    WeightedDowkerComplex out(corpus.num_messages(), labels);
    for (const auto& p : parts) out.merge(p);
    return out;
}

std::vector<LatticeEdge> lattice_edges(const WeightedDowkerComplex& complex) {
    std::vector<LatticeEdge> edges;
    for (const auto& [upper, node] : complex.nodes()) {
        for (MessageId m : upper.members()) {
            MessagePattern lower = upper.without(m);
            const auto* below = complex.find(lower);
            if (!below) continue;
            edges.push_back({std::move(lower), upper, m, node.weight > below->weight});
        }
    }
    CanonicalLess less;
    std::sort(edges.begin(), edges.end(), [&](const LatticeEdge& a, const LatticeEdge& b) {
        if (a.upper != b.upper) return less(a.upper, b.upper);
        return less(a.lower, b.lower);
    });
    return edges;
}

std::vector<LatticeEdge> find_violations(const WeightedDowkerComplex& complex) {
    auto edges = lattice_edges(complex);
    std::erase_if(edges, [](const LatticeEdge& e) { return !e.violation; });
    return edges;
}

std::vector<std::uint64_t> dowker_histogram(const WeightedDowkerComplex& complex) {
    std::vector<std::uint64_t> w;
    w.reserve(complex.node_count());
    for (const auto& [p, n] : complex.nodes()) w.push_back(n.weight);
    std::sort(w.begin(), w.end(), std::greater<>{});
    return w;
}

Layout layered_layout(const WeightedDowkerComplex& complex, std::uint64_t min_weight, double radius_scale) {
    if (min_weight < 1) throw Error("min_weight must be at least 1");
    std::map<std::size_t, std::vector<MessagePattern>> layers;
    for (const auto& [p, n] : complex.nodes())
        if (n.weight >= min_weight) layers[p.size()].push_back(p);

    Layout layout;
    for (auto& [count, members] : layers) {
        std::sort(members.begin(), members.end());
        const double n = static_cast<double>(members.size());
        const double radius = radius_scale * std::sqrt(n);
        for (std::size_t j = 0; j < members.size(); ++j) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / n;
            layout.emplace(members[j], Point3{radius * std::cos(angle), radius * std::sin(angle), static_cast<double>(count)});
        }
    }
    return layout;
}

WeightedDowkerComplex filter_by_weight(const WeightedDowkerComplex& complex, std::uint64_t min_weight) {
    WeightedDowkerComplex out(complex.num_messages(), complex.labels());
    for (const auto& [p, n] : complex.nodes())
        if (n.weight >= min_weight) out.set_node(p, n);
    return out;
}

void write_nodes_csv(const WeightedDowkerComplex& complex, std::ostream& out, std::uint64_t min_weight) {
    out << "pattern_hex,weight,message_count";
    for (const auto& l : complex.labels()) out << ',' << l;
    out << '\n';
    for (const auto& p : complex.patterns()) {
        const auto* node = complex.find(p);
        if (node->weight < min_weight) continue;
        out << p.to_hex(complex.num_messages()) << ',' << node->weight << ',' << p.size();
        for (auto c : node->label_counts) out << ',' << c;
        out << '\n';
    }
}

WeightedDowkerComplex read_nodes_csv(std::istream& in, std::size_t num_messages, const std::string& source) {
    LineReader reader(in);
    std::string line;
    do {
        if (!reader.next(line)) throw ParseError(source, reader.line_no(), "missing header");
    } while (detail::blank(line));
    const auto header = split(line, ',');
    if (header.size() < 3 || trim(header[0]) != "pattern_hex" || trim(header[1]) != "weight" ||
        trim(header[2]) != "message_count") {
        throw ParseError(source, reader.line_no(), "header must be 'pattern_hex,weight,message_count[,labels...]'");
    }
    std::vector<std::string> labels;
    for (std::size_t i = 3; i < header.size(); ++i) labels.emplace_back(trim(header[i]));

    struct Row {
        MessagePattern pattern;
        WeightedDowkerComplex::Node node;
    };
    std::vector<Row> rows;
    std::size_t width = num_messages;
    while (reader.next(line)) {
        if (detail::blank(line)) continue;
        const auto cells = split(line, ',');
        if (cells.size() != header.size()) throw ParseError(source, reader.line_no(), "wrong number of cells");
        Row row;
        try {
            row.pattern = MessagePattern::from_hex(trim(cells[0]));
        } catch (const Error& e) {
            throw ParseError(source, reader.line_no(), e.what());
        }
        if (num_messages == 0) width = std::max(width, 4 * trim(cells[0]).size());
        const auto w = parse_number<std::uint64_t>(cells[1]);
        const auto mc = parse_number<std::size_t>(cells[2]);
        if (!w || *w == 0) throw ParseError(source, reader.line_no(), "weight must be a positive integer");
        if (!mc || *mc != row.pattern.size()) throw ParseError(source, reader.line_no(), "message_count does not match pattern");
        row.node.weight = *w;
        for (std::size_t i = 3; i < cells.size(); ++i) {
            const auto c = parse_number<std::uint64_t>(cells[i]);
            if (!c) throw ParseError(source, reader.line_no(), "bad label count");
            row.node.label_counts.push_back(*c);
        }
        rows.push_back(std::move(row));
    }
    WeightedDowkerComplex complex(width, labels);
    for (auto& r : rows) {
        if (complex.contains(r.pattern)) throw Error(source + ": duplicate pattern " + r.pattern.to_hex(width));
        complex.set_node(r.pattern, std::move(r.node));
    }
    return complex;
}

void write_edges_csv(const std::vector<LatticeEdge>& edges, std::size_t num_messages, std::ostream& out) {
    out << "lower_hex,upper_hex,added_message,violation\n";
    for (const auto& e : edges) {
        out << e.lower.to_hex(num_messages) << ',' << e.upper.to_hex(num_messages) << ',' << e.added << ','
            << (e.violation ? 1 : 0) << '\n';
    }
}

std::vector<LatticeEdge> read_edges_csv(std::istream& in, const std::string& source) {
    LineReader reader(in);
    std::string line;
    std::vector<LatticeEdge> edges;
    bool header = false;
    while (reader.next(line)) {
        if (detail::blank(line)) continue;
        if (!header) {
            if (trim(line) != "lower_hex,upper_hex,added_message,violation") {
                throw ParseError(source, reader.line_no(), "header must be 'lower_hex,upper_hex,added_message,violation'");
            }
            header = true;
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != 4) throw ParseError(source, reader.line_no(), "expected 4 cells");
        LatticeEdge e;
        try {
            e.lower = MessagePattern::from_hex(trim(cells[0]));
            e.upper = MessagePattern::from_hex(trim(cells[1]));
        } catch (const Error& err) {
            throw ParseError(source, reader.line_no(), err.what());
        }
        const auto added = parse_number<MessageId>(cells[2]);
        const auto v = trim(cells[3]);
        if (!added || (v != "0" && v != "1")) throw ParseError(source, reader.line_no(), "bad edge row");
        if (e.upper != e.lower.with(*added) || e.lower.contains(*added)) {
            throw ParseError(source, reader.line_no(), "upper is not lower plus the added message");
        }
        e.added = *added;
        e.violation = v == "1";
        edges.push_back(std::move(e));
    }
    return edges;
}

}  // namespace dialect

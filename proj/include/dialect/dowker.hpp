#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dialect/corpus.hpp"
#include "dialect/pattern.hpp"

namespace dialect {

/// Observed message patterns weighted by the number of files exhibiting
/// exactly that pattern (the differential weight).
class WeightedDowkerComplex {
public:
    struct Node {
        std::uint64_t weight = 0;
        std::vector<std::uint64_t> label_counts;  // parallel to labels()

        friend bool operator==(const Node&, const Node&) = default;
    };

    explicit WeightedDowkerComplex(std::size_t num_messages = 0, std::vector<std::string> labels = {});

    std::size_t num_messages() const noexcept { return num_messages_; }
    std::uint64_t total_files() const noexcept { return total_files_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    bool has_labels() const noexcept { return !labels_.empty(); }

    /// 0 for an unobserved pattern.
    std::uint64_t weight(const MessagePattern& pattern) const;
    const Node* find(const MessagePattern& pattern) const;
    bool contains(const MessagePattern& p) const { return find(p) != nullptr; }

    /// Adds `count` files with an optional label index into labels().
    void add(const MessagePattern& pattern, std::uint64_t count = 1, std::optional<std::size_t> label = std::nullopt);
    void set_node(const MessagePattern& pattern, Node node);

    /// Sums counts from another complex over the same messages and labels.
    void merge(const WeightedDowkerComplex& other);

    /// Patterns in canonical order (message count, then lexicographic).
    std::vector<MessagePattern> patterns() const;
    const std::unordered_map<MessagePattern, Node, PatternHash>& nodes() const noexcept { return nodes_; }

    friend bool operator==(const WeightedDowkerComplex& a, const WeightedDowkerComplex& b) {
        return a.num_messages_ == b.num_messages_ && a.total_files_ == b.total_files_ &&
               a.labels_ == b.labels_ && a.nodes_ == b.nodes_;
    }

private:
    std::size_t num_messages_;
    std::vector<std::string> labels_;
    std::unordered_map<MessagePattern, Node, PatternHash> nodes_;
    std::uint64_t total_files_ = 0;
};

/// `upper` = `lower` plus one message. Violation when the weight grows.
struct LatticeEdge {
    MessagePattern lower;
    MessagePattern upper;
    MessageId added = 0;
    bool violation = false;

    friend bool operator==(const LatticeEdge&, const LatticeEdge&) = default;
};

/// Groups identical patterns. With workers > 1 the files are partitioned and
/// the partial complexes merged; the result does not depend on worker count.
WeightedDowkerComplex build_complex(const Corpus& corpus, unsigned workers = 1);

/// All one-message edges between observed nodes, found by removing each
/// member of each node and looking the result up. Sorted by (upper, lower)
/// in canonical order.
std::vector<LatticeEdge> lattice_edges(const WeightedDowkerComplex& complex);
std::vector<LatticeEdge> find_violations(const WeightedDowkerComplex& complex);

/// Node weights sorted in decreasing order.
std::vector<std::uint64_t> dowker_histogram(const WeightedDowkerComplex& complex);

struct Point3 {
    double x = 0, y = 0, z = 0;
    friend bool operator==(const Point3&, const Point3&) = default;
};

using Layout = std::map<MessagePattern, Point3, CanonicalLess>;

/// Layers by message count (z), each layer of n nodes on a circle of radius
/// radius_scale * sqrt(n), node j of the layer at angle 2*pi*j/n.
Layout layered_layout(const WeightedDowkerComplex& complex, std::uint64_t min_weight = 1, double radius_scale = 1.0);

/// Keeps nodes with weight >= min_weight; total_files is preserved.
WeightedDowkerComplex filter_by_weight(const WeightedDowkerComplex& complex, std::uint64_t min_weight);

// `pattern_hex,weight,message_count[,<label>...]` with a header row.
void write_nodes_csv(const WeightedDowkerComplex& complex, std::ostream& out, std::uint64_t min_weight = 1);
/// num_messages = 0 infers the width from the hex strings (4 bits per digit).
WeightedDowkerComplex read_nodes_csv(std::istream& in, std::size_t num_messages = 0,
                                     const std::string& source = "<nodes>");

// `lower_hex,upper_hex,added_message,violation` with a header row.
void write_edges_csv(const std::vector<LatticeEdge>& edges, std::size_t num_messages, std::ostream& out);
std::vector<LatticeEdge> read_edges_csv(std::istream& in, const std::string& source = "<edges>");

}  // namespace dialect

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dialect/dowker.hpp"

namespace dialect {

enum class ColorBy { Weight, LabelFraction, Posterior };

ColorBy parse_color_by(std::string_view name);
std::string_view to_string(ColorBy mode);

struct VizOptions {
    std::uint64_t min_weight = 1;
    ColorBy color_by = ColorBy::Weight;
    double radius_scale = 1.0;
    /// Label whose fraction drives label-fraction coloring; defaults to the
    /// first label in sorted order.
    std::optional<std::string> reference_label;
};

/// Posterior per pattern_hex, for posterior coloring and node inspection.
using PosteriorMap = std::unordered_map<std::string, double>;

/// VizGraph JSON document:
///   { "meta": {num_messages, min_weight, color_by, total_files, ...},
///     "nodes": [{id, weight, message_count, x, y, z, color_value, label_fractions?, posterior?}],
///     "edges": [{source, target, violation}] }
/// Edges come from `edges` when given, otherwise from lattice_edges; only
/// edges with both endpoints kept are emitted. Throws when the color mode
/// needs data that is missing.
std::string export_viz_graph(const WeightedDowkerComplex& complex, const VizOptions& options,
                             const std::vector<LatticeEdge>* edges = nullptr,
                             const PosteriorMap* posteriors = nullptr);

/// Structural check against the VizGraph schema. Returns the problems found.
std::vector<std::string> validate_viz_graph(std::string_view json_text);

/// Reads the viewer's `{"selected": [pattern_hex...]}` export.
std::vector<std::string> read_selection(std::string_view json_text);

}  // namespace dialect

#include "dialect/viz.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "dialect/error.hpp"

namespace dialect {

using nlohmann::json;

ColorBy parse_color_by(std::string_view name) {
    if (name == "weight") return ColorBy::Weight;
    if (name == "label-fraction") return ColorBy::LabelFraction;
    if (name == "posterior") return ColorBy::Posterior;
    throw Error("unknown color mode '" + std::string(name) + "' (expected weight, label-fraction or posterior)");
}

std::string_view to_string(ColorBy mode) {
    switch (mode) {
        case ColorBy::Weight: return "weight";
        case ColorBy::LabelFraction: return "label-fraction";
        case ColorBy::Posterior: return "posterior";
    }
    return "weight";
}

std::string export_viz_graph(const WeightedDowkerComplex& complex, const VizOptions& options,
                             const std::vector<LatticeEdge>* edges, const PosteriorMap* posteriors) {
    const std::size_t width = complex.num_messages();
    std::size_t reference = 0;
    if (options.color_by == ColorBy::LabelFraction) {
        if (!complex.has_labels()) throw Error("label-fraction coloring needs a labelled corpus");
        if (options.reference_label) {
            const auto& labels = complex.labels();
            auto it = std::find(labels.begin(), labels.end(), *options.reference_label);
            if (it == labels.end()) throw Error("reference label '" + *options.reference_label + "' not in corpus");
            reference = static_cast<std::size_t>(it - labels.begin());
        }
    }
    if (options.color_by == ColorBy::Posterior && !posteriors) throw Error("posterior coloring needs scores");

    const auto layout = layered_layout(complex, options.min_weight, options.radius_scale);

    json doc;
    doc["meta"] = {
        {"num_messages", width},
        {"min_weight", options.min_weight},
        {"color_by", std::string(to_string(options.color_by))},
        {"total_files", complex.total_files()},
        {"radius_scale", options.radius_scale},
        {"layout", "layered-circle, radius = radius_scale * sqrt(layer size)"},
    };
    if (options.color_by == ColorBy::LabelFraction) doc["meta"]["reference_label"] = complex.labels()[reference];
    if (complex.has_labels()) doc["meta"]["labels"] = complex.labels();

    json nodes = json::array();
    for (const auto& [pattern, pos] : layout) {
        const auto* node = complex.find(pattern);
        const std::string id = pattern.to_hex(width);
        json n = {{"id", id},
                  {"weight", node->weight},
                  {"message_count", pattern.size()},
                  {"x", pos.x},
                  {"y", pos.y},
                  {"z", pos.z},
                  {"messages", std::vector<MessageId>(pattern.members().begin(), pattern.members().end())}};
        std::optional<double> post;
        if (posteriors) {
            if (auto it = posteriors->find(id); it != posteriors->end()) post = it->second;
        }
        if (post) n["posterior"] = *post;

        double labelled = 0;
        for (auto c : node->label_counts) labelled += static_cast<double>(c);
        if (complex.has_labels() && labelled > 0) {
            json fr = json::object();
            json counts = json::object();
            for (std::size_t l = 0; l < complex.labels().size(); ++l) {
                fr[complex.labels()[l]] = static_cast<double>(node->label_counts[l]) / labelled;
                counts[complex.labels()[l]] = node->label_counts[l];
            }
            n["label_fractions"] = std::move(fr);
            n["label_counts"] = std::move(counts);
        }

        switch (options.color_by) {
            case ColorBy::Weight: n["color_value"] = std::log(static_cast<double>(node->weight)); break;
            case ColorBy::LabelFraction:
                n["color_value"] =
                    labelled > 0 ? json(static_cast<double>(node->label_counts[reference]) / labelled) : json(nullptr);
                break;
            case ColorBy::Posterior: n["color_value"] = post ? json(*post) : json(nullptr); break;
        }
        nodes.push_back(std::move(n));
    }
    doc["nodes"] = std::move(nodes);

    std::vector<LatticeEdge> computed;
    if (!edges) {
        computed = lattice_edges(complex);
        edges = &computed;
    }
    json out_edges = json::array();
    for (const auto& e : *edges) {
        if (!layout.contains(e.lower) || !layout.contains(e.upper)) continue;
        out_edges.push_back({{"source", e.lower.to_hex(width)}, {"target", e.upper.to_hex(width)}, {"violation", e.violation}});
    }
    doc["edges"] = std::move(out_edges);
    return doc.dump();
}

std::vector<std::string> validate_viz_graph(std::string_view text) {
    std::vector<std::string> problems;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        return {std::string("not JSON: ") + e.what()};
    }
    auto require = [&](const json& obj, const char* key, auto pred, const char* type, const std::string& where) {
        if (!obj.is_object() || !obj.contains(key)) {
            problems.push_back(where + ": missing '" + key + "'");
            return false;
        }
        if (!pred(obj.at(key))) {
            problems.push_back(where + ": '" + key + "' must be " + type);
            return false;
        }
        return true;
    };
    const auto is_uint = [](const json& v) { return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0); };
    const auto is_num = [](const json& v) { return v.is_number(); };
    const auto is_str = [](const json& v) { return v.is_string(); };
    const auto is_bool = [](const json& v) { return v.is_boolean(); };
    const auto is_arr = [](const json& v) { return v.is_array(); };
    const auto is_obj = [](const json& v) { return v.is_object(); };
    const auto is_num_or_null = [](const json& v) { return v.is_number() || v.is_null(); };

    if (!doc.is_object()) return {"document must be an object"};
    if (require(doc, "meta", is_obj, "an object", "root")) {
        const auto& meta = doc["meta"];
        require(meta, "num_messages", is_uint, "a non-negative integer", "meta");
        require(meta, "min_weight", is_uint, "a non-negative integer", "meta");
        require(meta, "total_files", is_uint, "a non-negative integer", "meta");
        if (require(meta, "color_by", is_str, "a string", "meta")) {
            const auto mode = meta["color_by"].get<std::string>();
            if (mode != "weight" && mode != "label-fraction" && mode != "posterior") {
                problems.push_back("meta: unknown color_by '" + mode + "'");
            }
        }
    }
    std::set<std::string> ids;
    if (require(doc, "nodes", is_arr, "an array", "root")) {
        std::size_t i = 0;
        for (const auto& n : doc["nodes"]) {
            const std::string where = "nodes[" + std::to_string(i++) + "]";
            if (require(n, "id", is_str, "a string", where) && !ids.insert(n["id"].get<std::string>()).second) {
                problems.push_back(where + ": duplicate id");
            }
            if (require(n, "weight", is_uint, "a non-negative integer", where) && n["weight"].get<long long>() == 0) {
                problems.push_back(where + ": weight must be positive");
            }
            require(n, "message_count", is_uint, "a non-negative integer", where);
            require(n, "x", is_num, "a number", where);
            require(n, "y", is_num, "a number", where);
            require(n, "z", is_num, "a number", where);
            require(n, "color_value", is_num_or_null, "a number or null", where);
            if (n.contains("label_fractions")) {
                if (!n["label_fractions"].is_object()) {
                    problems.push_back(where + ": label_fractions must be an object");
                } else {
                    for (const auto& [label, f] : n["label_fractions"].items()) {
                        if (!f.is_number() || f.get<double>() < 0 || f.get<double>() > 1) {
                            problems.push_back(where + ": label fraction for '" + label + "' outside [0,1]");
                        }
                    }
                }
            }
        }
    }
    if (require(doc, "edges", is_arr, "an array", "root")) {
        std::size_t i = 0;
        for (const auto& e : doc["edges"]) {
            const std::string where = "edges[" + std::to_string(i++) + "]";
            for (const char* end : {"source", "target"}) {
                if (require(e, end, is_str, "a string", where) && !ids.contains(e[end].get<std::string>())) {
                    problems.push_back(where + ": " + end + " is not a node id");
                }
            }
            require(e, "violation", is_bool, "a boolean", where);
        }
    }
    return problems;
}

std::vector<std::string> read_selection(std::string_view text) {
    try {
        const auto doc = json::parse(text);
        return doc.at("selected").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw Error(std::string("bad selection JSON: ") + e.what());
    }
}

}  // namespace dialect

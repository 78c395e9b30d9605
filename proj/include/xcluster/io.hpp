#pragma once

// File formats: instance JSON/CSV, tree JSON, report CSV rows. Doubles
// round-trip bit-exactly through the JSON layer.

#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "xcluster/core.hpp"
#include "xcluster/instances.hpp"

namespace xcluster {

using nlohmann::json;

inline json instance_to_json(const Instance& inst) {
    json j;
    j["dim"] = inst.dim;
    j["points"] = inst.points;
    j["centers"] = inst.centers;
    j["meta"] = {{"generator", inst.generator}, {"params", inst.params}, {"seed", inst.seed}};
    return j;
}

inline Instance instance_from_json(const json& j) {
    Instance inst;
    inst.dim = j.at("dim").get<int>();
    inst.points = j.at("points").get<std::vector<Point>>();
    inst.centers = j.at("centers").get<std::vector<Point>>();
    if (j.contains("meta")) {
        const json& meta = j.at("meta");
        inst.generator = meta.value("generator", std::string{});
        if (meta.contains("params"))
            inst.params = meta.at("params").get<std::map<std::string, double>>();
        inst.seed = meta.value("seed", std::uint64_t{0});
    }
    for (const Point& x : inst.points)
        if (static_cast<int>(x.size()) != inst.dim)
            throw std::invalid_argument("instance: point dimension mismatch");
    for (const Point& c : inst.centers)
        if (static_cast<int>(c.size()) != inst.dim)
            throw std::invalid_argument("instance: center dimension mismatch");
    return inst;
}

inline void save_instance(const std::string& path, const Instance& inst) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << instance_to_json(inst).dump(2) << '\n';
}

inline Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    json j;
    in >> j;
    return instance_from_json(j);
}

// Tree files are the recursive node encoding: internal nodes carry
// {dim, theta, left, right}, leaves carry {cluster, center_index}.
inline json tree_node_to_json(const ThresholdTree& tree, int node) {
    const ThresholdTree::Node& n = tree.nodes[node];
    if (n.is_leaf()) return json{{"cluster", n.cluster}, {"center_index", n.center_index}};
    return json{{"dim", n.dim},
                {"theta", n.theta},
                {"left", tree_node_to_json(tree, n.left)},
                {"right", tree_node_to_json(tree, n.right)}};
}

inline json tree_to_json(const ThresholdTree& tree) { return tree_node_to_json(tree, tree.root); }

inline ThresholdTree tree_from_json(const json& j, int ambient_dim) {
    ThresholdTree tree;
    tree.dim = ambient_dim;
    std::function<int(const json&)> parse = [&](const json& node) -> int {
        const int id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        if (node.contains("cluster")) {
            tree.nodes[id].cluster = node.at("cluster").get<int>();
            tree.nodes[id].center_index = node.at("center_index").get<int>();
            ++tree.num_leaves;
            return id;
        }
        tree.nodes[id].dim = node.at("dim").get<int>();
        tree.nodes[id].theta = node.at("theta").get<double>();
        if (tree.nodes[id].dim < 0 || tree.nodes[id].dim >= ambient_dim)
            throw std::invalid_argument("tree: cut dimension out of range");
        const int left = parse(node.at("left"));
        tree.nodes[id].left = left;
        tree.nodes[id].right = parse(node.at("right"));
        return id;
    };
    parse(j);
    return tree;
}

inline void save_tree(const std::string& path, const ThresholdTree& tree) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << tree_to_json(tree).dump(2) << '\n';
}

inline ThresholdTree load_tree(const std::string& path, int ambient_dim) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tree file: " + path);
    json j;
    in >> j;
    return tree_from_json(j, ambient_dim);
}

// CSV alternative: one point per row; centers in a separate file of the
// same shape.
inline std::vector<Point> load_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open csv file: " + path);
    std::vector<Point> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Point row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && rows.front().size() != row.size())
            throw std::invalid_argument("csv: ragged rows in " + path);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void save_points_csv(const std::string& path, const std::vector<Point>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    char buf[64];
    for (const Point& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            out << (i ? "," : "") << buf;
        }
        out << '\n';
    }
}

inline Instance instance_from_csv(const std::string& points_path,
                                  const std::string& centers_path) {
    Instance inst;
    inst.points = load_points_csv(points_path);
    inst.centers = load_points_csv(centers_path);
    if (inst.points.empty()) throw std::invalid_argument("csv: no points in " + points_path);
    inst.dim = static_cast<int>(inst.points.front().size());
    inst.generator = "csv";
    for (const Point& c : inst.centers)
        if (static_cast<int>(c.size()) != inst.dim)
            throw std::invalid_argument("csv: center dimension mismatch");
    return inst;
}

}  // namespace xcluster

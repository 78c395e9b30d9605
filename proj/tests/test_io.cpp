#include "test_util.hpp"

#include <cstdio>
#include <filesystem>

#include "xcluster/builders.hpp"
#include "xcluster/instances.hpp"
#include "xcluster/io.hpp"

using namespace xcluster;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
    return fs::temp_directory_path() / (std::string("xcluster_io_") + name);
}

}  // namespace

TEST_CASE("instance JSON round trip is the identity") {
    RngStream rng(606);
    const Instance inst = gen_gaussian_mixture(4, 3, 15, 0.2, rng);
    const json j = instance_to_json(inst);
    const Instance back = instance_from_json(j);
    REQUIRE(back.dim == inst.dim);
    REQUIRE(back.points == inst.points);    // bit-exact doubles
    REQUIRE(back.centers == inst.centers);
    REQUIRE(back.generator == inst.generator);
    REQUIRE(back.seed == inst.seed);
    REQUIRE(instance_to_json(back) == j);

    const auto path = temp_file("instance.json");
    save_instance(path.string(), inst);
    const Instance loaded = load_instance(path.string());
    REQUIRE(loaded.points == inst.points);
    fs::remove(path);
}

TEST_CASE("tree JSON round trip is the identity") {
    RngStream meta(607);
    const CenterSet centers = xctest::random_centers(9, 3, meta);
    RngStream rng(5);
    const BuildResult built = build_lp(centers, 2.0, rng);
    const json j = tree_to_json(built.tree);
    const ThresholdTree back = tree_from_json(j, centers.dim);
    back.validate(centers);
    REQUIRE(tree_to_json(back) == j);

    std::vector<Point> pts;
    for (int i = 0; i < 30; ++i) pts.push_back(xctest::random_point(3, meta));
    REQUIRE(cost_of_tree(pts, back, centers, 2.0).cost_reference_centers ==
            cost_of_tree(pts, built.tree, centers, 2.0).cost_reference_centers);

    const auto path = temp_file("tree.json");
    save_tree(path.string(), built.tree);
    const ThresholdTree loaded = load_tree(path.string(), centers.dim);
    REQUIRE(tree_to_json(loaded) == j);
    fs::remove(path);
}

TEST_CASE("tree JSON validates cut dimensions") {
    const json bad = {{"dim", 5},
                      {"theta", 0.0},
                      {"left", {{"cluster", 0}, {"center_index", 0}}},
                      {"right", {{"cluster", 1}, {"center_index", 1}}}};
    CHECK_THROWS_AS(tree_from_json(bad, 2), std::invalid_argument);
}

TEST_CASE("points CSV round trip") {
    RngStream rng(608);
    std::vector<Point> pts;
    for (int i = 0; i < 25; ++i) pts.push_back(xctest::random_point(4, rng, -3.0, 3.0));
    const auto ppath = temp_file("points.csv");
    const auto cpath = temp_file("centers.csv");
    save_points_csv(ppath.string(), pts);
    REQUIRE(load_points_csv(ppath.string()) == pts);

    save_points_csv(cpath.string(), {pts[0], pts[1]});
    const Instance inst = instance_from_csv(ppath.string(), cpath.string());
    REQUIRE(inst.dim == 4);
    REQUIRE(inst.n() == 25);
    REQUIRE(inst.k() == 2);

    save_points_csv(cpath.string(), {{1.0, 2.0}});
    CHECK_THROWS_AS(instance_from_csv(ppath.string(), cpath.string()), std::invalid_argument);
    fs::remove(ppath);
    fs::remove(cpath);
}

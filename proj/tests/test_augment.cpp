#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "signet/augment.hpp"

using namespace signet;

namespace {

constexpr DistanceKind kEuclid = DistanceKind::Euclidean;

LinearSvm unit_svm() {
    LinearSvm svm;
    svm.weights = {1.0};
    svm.bias = 0.0;
    return svm;
}

Dataset small_annuli(std::size_t per_class = 40, std::uint64_t seed = 9) {
    return generate_two_annuli(per_class, 1.0, 1.3, 0.2, 0.05, seed);
}

AugmentConfig fast_cfg() {
    AugmentConfig cfg;
    cfg.budget_T = 60;
    cfg.svm_epochs = 30;
    return cfg;
}

DfoConfig fast_dfo() {
    DfoConfig dfo;
    dfo.budget = 60;
    return dfo;
}

}  // namespace

TEST_CASE("default radii follow the rho rule", "[augment]") {
    std::vector<Vec> pts{{0.0}, {0.2}, {1.0}};  // min pairwise gap 0.2
    Radii r = default_radii(pts, kEuclid);
    REQUIRE(r.r1 == Catch::Approx(0.2));
    REQUIRE(r.r2 == Catch::Approx(0.2));
    REQUIRE(r.r3 == Catch::Approx(0.6));

    std::vector<Vec> permuted{{1.0}, {0.0}, {0.2}};
    Radii rp = default_radii(permuted, kEuclid);
    REQUIRE(rp.r1 == Catch::Approx(r.r1));
    REQUIRE(rp.r3 == Catch::Approx(r.r3));
}

TEST_CASE("default radii fall back to the smallest nonzero gap", "[augment]") {
    std::vector<Vec> pts{{0.0}, {0.0}, {0.1}, {1.0}};
    Radii r = default_radii(pts, kEuclid);
    REQUIRE(r.r1 == Catch::Approx(0.1));
    REQUIRE(r.r3 == Catch::Approx(0.3));

    std::vector<Vec> coincident{{0.5}, {0.5}, {0.5}};
    REQUIRE_THROWS_AS(default_radii(coincident, kEuclid), std::invalid_argument);
}

TEST_CASE("positive objective hinge arithmetic", "[augment]") {
    LinearSvm svm = unit_svm();
    Vec x{0.4};
    double p = probability(svm, x);

    // Empty generated set: objective is the bare probability.
    REQUIRE(positive_objective(x, svm, {}, 1e-2, 0.2, kEuclid) == Catch::Approx(p));

    // Coinciding with an existing neighbor pays the full spacing penalty.
    REQUIRE(positive_objective(x, svm, {{0.4}}, 1e-2, 0.2, kEuclid) ==
            Catch::Approx(p - 1e-2 * 0.2));

    // Far-enough neighbors leave the hinge inactive.
    REQUIRE(positive_objective(x, svm, {{0.9}}, 1e-2, 0.2, kEuclid) == Catch::Approx(p));
}

TEST_CASE("negative objective hinge arithmetic", "[augment]") {
    LinearSvm svm = unit_svm();
    Vec x{0.5};
    double p = probability(svm, x);
    std::vector<Vec> originals{{0.45}, {0.62}};

    // No negatives yet, within r3 of the class: bare probability.
    REQUIRE(negative_objective(x, svm, originals, {}, 1e-2, 0.2, 0.3, kEuclid) ==
            Catch::Approx(p));

    // 0.1 beyond the allowed offset r3 adds gamma * 0.1.
    Vec far{0.45 + 0.3 + 0.1};
    double pf = probability(svm, far);
    REQUIRE(negative_objective(far, svm, {{0.45}}, {}, 1e-2, 0.2, 0.3, kEuclid) ==
            Catch::Approx(pf + 1e-2 * 0.1));

    // Duplicating an existing negative pays the full r2 spacing penalty.
    REQUIRE(negative_objective(x, svm, originals, {{0.5}}, 1e-2, 0.2, 0.3, kEuclid) ==
            Catch::Approx(p + 1e-2 * 0.2));
}

TEST_CASE("class search box expands the data range", "[augment]") {
    std::vector<Vec> pts{{0.0, -1.0}, {1.0, 3.0}};
    SearchBox box = class_search_box(pts, 0.2);
    REQUIRE(box.lower[0] == Catch::Approx(-0.2));
    REQUIRE(box.upper[0] == Catch::Approx(1.2));
    REQUIRE(box.lower[1] == Catch::Approx(-1.8));
    REQUIRE(box.upper[1] == Catch::Approx(3.8));
}

TEST_CASE("generate_neighbor appends, stays in the box, and is deterministic",
          "[augment]") {
    Dataset ds = small_annuli();
    AugmentConfig cfg = fast_cfg();
    ExpandedDataset a = expand_identity(ds);
    ExpandedClass& cls = a.classes[0];
    Radii radii = default_radii(cls.originals, cfg.distance);
    SearchBox box = class_search_box(cls.originals, cfg.box_expansion);

    NeighborTrace trace;
    Vec p1 = generate_neighbor(Provenance::PositiveNeighbor, cls, box, radii, cfg,
                               fast_dfo(), 1234, &trace);
    REQUIRE(cls.positives.size() == 1);
    REQUIRE(cls.positives[0] == p1);
    REQUIRE(box.contains(p1));
    REQUIRE(trace.point == p1);
    REQUIRE(trace.evaluated_values.size() == cfg.budget_T);
    REQUIRE(trace.objective_value ==
            *std::max_element(trace.evaluated_values.begin(),
                              trace.evaluated_values.end()));

    // Same state, same seed: identical outcome.
    ExpandedDataset b = expand_identity(ds);
    Vec p2 = generate_neighbor(Provenance::PositiveNeighbor, b.classes[0], box, radii,
                               cfg, fast_dfo(), 1234);
    REQUIRE(p2 == p1);

    Vec p3 = generate_neighbor(Provenance::PositiveNeighbor, cls, box, radii, cfg,
                               fast_dfo(), 1235);
    REQUIRE(cls.positives.size() == 2);
    REQUIRE(p3 != p1);
}

TEST_CASE("negative neighbors minimize their recorded objective", "[augment]") {
    Dataset ds = small_annuli();
    AugmentConfig cfg = fast_cfg();
    ExpandedDataset a = expand_identity(ds);
    ExpandedClass& cls = a.classes[1];
    Radii radii = default_radii(cls.originals, cfg.distance);
    SearchBox box = class_search_box(cls.originals, cfg.box_expansion);

    NeighborTrace trace;
    generate_neighbor(Provenance::NegativeNeighbor, cls, box, radii, cfg, fast_dfo(),
                      555, &trace);
    REQUIRE(cls.negatives.size() == 1);
    REQUIRE(trace.objective_value ==
            *std::min_element(trace.evaluated_values.begin(),
                              trace.evaluated_values.end()));
}

TEST_CASE("expand_dataset honors the fraction arithmetic", "[augment]") {
    Dataset ds = small_annuli(40);
    AugmentConfig cfg = fast_cfg();
    std::vector<NeighborTrace> traces;
    ExpandedDataset expanded = expand_dataset(ds, cfg, fast_dfo(), &traces);

    for (int c = 0; c < 2; ++c) {
        REQUIRE(expanded.classes[c].originals.size() == 40);
        REQUIRE(expanded.classes[c].positives.size() == 8);
        REQUIRE(expanded.classes[c].negatives.size() == 8);
    }
    REQUIRE(expanded.total_size() == 112);
    REQUIRE(traces.size() == 32);

    // Every accepted point is exactly the optimizer's pick for its slot: the
    // bootstrap side never leaks into the outputs.
    std::size_t checked = 0;
    for (const NeighborTrace& t : traces) {
        const ExpandedClass& cls = expanded.classes[t.class_index];
        const std::vector<Vec>& side = t.polarity == Provenance::PositiveNeighbor
                                           ? cls.positives
                                           : cls.negatives;
        REQUIRE(side[t.slot] == t.point);
        ++checked;
    }
    REQUIRE(checked == 32);
}

TEST_CASE("zero fractions reproduce the original partition", "[augment]") {
    Dataset ds = small_annuli(20);
    AugmentConfig cfg = fast_cfg();
    cfg.positive_fraction = 0.0;
    cfg.negative_fraction = 0.0;
    ExpandedDataset expanded = expand_dataset(ds, cfg, fast_dfo());
    ExpandedDataset identity = expand_identity(ds);
    REQUIRE(expanded.total_size() == ds.size());
    for (int c = 0; c < 2; ++c) {
        REQUIRE(expanded.classes[c].originals == identity.classes[c].originals);
        REQUIRE(expanded.classes[c].positives.empty());
        REQUIRE(expanded.classes[c].negatives.empty());
    }
}

TEST_CASE("expand_dataset is deterministic per seed", "[augment]") {
    Dataset ds = small_annuli(10);
    AugmentConfig cfg = fast_cfg();
    cfg.rng_seed = 77;
    ExpandedDataset a = expand_dataset(ds, cfg, fast_dfo());
    ExpandedDataset b = expand_dataset(ds, cfg, fast_dfo());
    REQUIRE(a.nodes() == b.nodes());

    cfg.rng_seed = 78;
    ExpandedDataset c = expand_dataset(ds, cfg, fast_dfo());
    REQUIRE(a.nodes() != c.nodes());
}

TEST_CASE("expanded CSV round-trips nodes and provenance", "[augment]") {
    Dataset ds = small_annuli(10);
    AugmentConfig cfg = fast_cfg();
    ExpandedDataset expanded = expand_dataset(ds, cfg, fast_dfo());

    std::string path =
        (std::filesystem::temp_directory_path() / "signet_expanded.csv").string();
    save_expanded_csv(expanded, path);
    ExpandedDataset back = load_expanded_csv(path);
    std::remove(path.c_str());

    REQUIRE(back.nodes() == expanded.nodes());
    std::vector<NodeMeta> ma = expanded.node_meta(), mb = back.node_meta();
    for (std::size_t i = 0; i < ma.size(); ++i) {
        REQUIRE(ma[i].class_index == mb[i].class_index);
        REQUIRE(ma[i].provenance == mb[i].provenance);
    }
}

TEST_CASE("plain CSVs load as all-original expanded datasets", "[augment]") {
    Dataset ds = small_annuli(6);
    std::string path =
        (std::filesystem::temp_directory_path() / "signet_plain.csv").string();
    save_csv(ds, path);
    ExpandedDataset back = load_expanded_csv(path);
    std::remove(path.c_str());
    REQUIRE(back.total_size() == ds.size());
    for (const ExpandedClass& cls : back.classes) {
        REQUIRE(cls.positives.empty());
        REQUIRE(cls.negatives.empty());
    }
}

TEST_CASE("config validation", "[augment]") {
    AugmentConfig cfg;
    cfg.gamma = -1.0;
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.r2 = 0.5;
    cfg.r3 = 0.2;
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.r1 = -0.1;
    REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
}

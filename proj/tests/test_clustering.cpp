#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "regimecast/clustering.hpp"

using namespace regimecast;

namespace {

std::vector<std::vector<double>> pairwise(const std::vector<std::vector<double>>& pts) {
    const std::size_t n = pts.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < pts[i].size(); ++k) {
                double diff = pts[i][k] - pts[j][k];
                s += diff * diff;
            }
            d[i][j] = std::sqrt(s);
        }
    return d;
}

// All labeled spanning trees on n nodes via Prüfer sequences. Oracle for the
// MST: the returned tree weight must equal the minimum over every tree.
double brute_force_mst_weight(const std::vector<std::vector<double>>& dist) {
    const std::size_t n = dist.size();
    REQUIRE(n >= 2);
    if (n == 2) return dist[0][1];
    std::vector<std::size_t> seq(n - 2, 0);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        // decode the Prüfer sequence into edges
        std::vector<int> degree(n, 1);
        for (auto v : seq) ++degree[v];
        double weight = 0.0;
        std::vector<int> deg = degree;
        std::vector<bool> used(n, false);
        for (auto v : seq) {
            for (std::size_t leaf = 0; leaf < n; ++leaf)
                if (deg[leaf] == 1 && !used[leaf]) {
                    weight += dist[leaf][v];
                    used[leaf] = true;
                    --deg[v];
                    break;
                }
        }
        std::vector<std::size_t> rest;
        for (std::size_t v = 0; v < n; ++v)
            if (deg[v] == 1 && !used[v]) rest.push_back(v);
        REQUIRE(rest.size() == 2);
        weight += dist[rest[0]][rest[1]];
        best = std::min(best, weight);

        // next sequence
        std::size_t i = 0;
        while (i < seq.size() && seq[i] == n - 1) seq[i++] = 0;
        if (i == seq.size()) break;
        ++seq[i];
    }
    return best;
}

std::vector<std::vector<double>> random_points(std::size_t n, std::size_t dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    for (auto& p : pts)
        for (auto& x : p) x = u(rng);
    return pts;
}

VectorTable blob_table(unsigned seed, std::map<std::string, int>* truth = nullptr) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.3);
    const std::vector<std::vector<double>> centers{{0.0, 0.0}, {10.0, 0.0}, {0.0, 10.0}};
    VectorTable t;
    t.dim = 2;
    int serial = 0;
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < 20; ++i) {
            std::string key = "p" + std::to_string(serial++);
            t.rows[key] = {centers[c][0] + noise(rng), centers[c][1] + noise(rng)};
            if (truth) (*truth)[key] = c;
        }
    return t;
}

}  // namespace

TEST_CASE("core_distances picks the min_samples-th nearest neighbor") {
    std::vector<std::vector<double>> pts{{0.0}, {1.0}, {3.0}, {7.0}};
    auto dist = pairwise(pts);
    auto core = core_distances(dist, 2);
    // point 0: neighbors at 1, 3, 7 -> 2nd nearest is 3
    CHECK(core[0] == doctest::Approx(3.0));
    CHECK(core[1] == doctest::Approx(2.0));
    CHECK(core[2] == doctest::Approx(3.0));
    CHECK(core[3] == doctest::Approx(6.0));
    CHECK_THROWS(core_distances(dist, 4));
}

TEST_CASE("mutual_reachability takes the max of cores and distance") {
    std::vector<std::vector<double>> dist{{0.0, 2.0}, {2.0, 0.0}};
    auto mr = mutual_reachability(dist, {5.0, 1.0});
    CHECK(mr[0][1] == doctest::Approx(5.0));
    CHECK(mr[1][0] == doctest::Approx(5.0));
    CHECK(mr[0][0] == 0.0);
}

TEST_CASE("minimum_spanning_tree matches brute force over all trees") {
    for (unsigned seed = 0; seed < 12; ++seed) {
        std::size_t n = 4 + seed % 4;  // 4..7 nodes
        auto dist = pairwise(random_points(n, 2, seed));
        auto edges = minimum_spanning_tree(dist);
        REQUIRE(edges.size() == n - 1);
        double total = 0.0;
        for (const auto& e : edges) total += e.weight;
        CHECK(total == doctest::Approx(brute_force_mst_weight(dist)).epsilon(1e-12));
    }
}

TEST_CASE("minimum_spanning_tree is deterministic under ties") {
    // all points equidistant: many optimal trees; tie-break must be stable
    std::vector<std::vector<double>> dist(4, std::vector<double>(4, 1.0));
    for (int i = 0; i < 4; ++i) dist[i][i] = 0.0;
    auto a = minimum_spanning_tree(dist);
    auto b = minimum_spanning_tree(dist);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].a == b[i].a);
        CHECK(a[i].b == b[i].b);
    }
}

TEST_CASE("hdbscan recovers three separated blobs") {
    std::map<std::string, int> truth;
    auto t = blob_table(7, &truth);
    auto result = hdbscan(t, HdbscanParams{5, 3});
    CHECK(result.cluster_count == 3);
    // every pair agrees with the ground truth partition
    for (const auto& [ka, ca] : result.labels) {
        CHECK(ca != kNoise);
        CHECK(result.probabilities.at(ka) > 0.0);
        for (const auto& [kb, cb] : result.labels)
            CHECK((ca == cb) == (truth.at(ka) == truth.at(kb)));
    }
}

TEST_CASE("hdbscan result does not depend on insertion order") {
    auto t = blob_table(8);
    auto base = hdbscan(t, HdbscanParams{5, 3});

    // rebuild the table with keys inserted in random orders
    std::vector<std::pair<std::string, std::vector<double>>> items(t.rows.begin(), t.rows.end());
    std::mt19937 rng(99);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(items.begin(), items.end(), rng);
        VectorTable shuffled;
        shuffled.dim = t.dim;
        for (const auto& [k, v] : items) shuffled.rows[k] = v;
        auto result = hdbscan(shuffled, HdbscanParams{5, 3});
        CHECK(result.labels == base.labels);
    }
}

TEST_CASE("hdbscan labels structureless data as noise") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    VectorTable t;
    t.dim = 3;
    for (int i = 0; i < 40; ++i) t.rows["u" + std::to_string(i)] = {u(rng), u(rng), u(rng)};
    auto result = hdbscan(t, HdbscanParams{30, 5});
    // no cluster can reach min_cluster_size with stability; everything is noise
    CHECK(result.cluster_count == 0);
    for (const auto& [k, c] : result.labels) CHECK(c == kNoise);
}

TEST_CASE("hdbscan rejects degenerate inputs") {
    VectorTable t;
    t.dim = 1;
    t.rows["only"] = {0.0};
    CHECK_THROWS(hdbscan(t, HdbscanParams{2, 1}));
    t.rows["second"] = {1.0};
    CHECK_THROWS(hdbscan(t, HdbscanParams{2, 5}));  // min_samples >= n
}

TEST_CASE("top_keywords ranks by corpus frequency with lexicographic ties") {
    ClusterResult clusters;
    clusters.cluster_count = 1;
    clusters.labels = {{"apple", 0}, {"pear", 0}, {"plum", 0}, {"kiwi", 0}};
    std::vector<Article> corpus{
        {Date(0), "a", {"pear", "plum"}, "s"},
        {Date(1), "b", {"pear", "apple"}, "s"},
        {Date(2), "c", {"plum"}, "s"},
    };
    auto top = top_keywords(clusters, corpus, 0, 3);
    REQUIRE(top.size() == 3);
    CHECK(top[0] == "pear");   // 2 occurrences
    CHECK(top[1] == "plum");   // 2 occurrences, later alphabetically
    CHECK(top[2] == "apple");  // 1 occurrence, beats kiwi (0) and ties break alphabetically
    CHECK_THROWS(top_keywords(clusters, corpus, 5, 3));
}

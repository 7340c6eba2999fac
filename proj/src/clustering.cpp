#include "regimecast/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace regimecast {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::vector<double>> pairwise_euclidean(const std::vector<std::vector<double>>& pts) {
    const std::size_t n = pts.size();
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < pts[i].size(); ++k) {
                double d = pts[i][k] - pts[j][k];
                s += d * d;
            }
            dist[i][j] = dist[j][i] = std::sqrt(s);
        }
    return dist;
}

// Single-linkage dendrogram node; leaves are 0..n-1, merges n..2n-2.
struct LinkNode {
    std::size_t left = 0, right = 0;
    double distance = 0.0;
    std::size_t size = 1;
};

// Row of the condensed tree. child < n refers to a point, otherwise to a
// condensed cluster id.
struct CondensedRow {
    std::size_t parent;
    std::size_t child;
    double lambda;  // 1 / merge distance at which the child leaves the parent
    std::size_t size;
};

double to_lambda(double distance) {
    return distance > 0.0 ? 1.0 / distance : kInf;
}

}  // namespace

std::vector<double> core_distances(const std::vector<std::vector<double>>& dist,
                                   std::size_t min_samples) {
    const std::size_t n = dist.size();
    if (min_samples < 1) throw std::invalid_argument("min_samples must be >= 1");
    if (n <= min_samples)
        throw std::invalid_argument("fewer points (" + std::to_string(n) +
                                    ") than min_samples (" + std::to_string(min_samples) + ")");
    std::vector<double> core(n);
    std::vector<double> row;
    for (std::size_t i = 0; i < n; ++i) {
        row.clear();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) row.push_back(dist[i][j]);
        std::nth_element(row.begin(), row.begin() + (min_samples - 1), row.end());
        core[i] = row[min_samples - 1];
    }
    return core;
}

std::vector<std::vector<double>> mutual_reachability(const std::vector<std::vector<double>>& dist,
                                                     const std::vector<double>& core) {
    const std::size_t n = dist.size();
    std::vector<std::vector<double>> mr(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            mr[i][j] = mr[j][i] = std::max({core[i], core[j], dist[i][j]});
    return mr;
}

std::vector<MstEdge> minimum_spanning_tree(const std::vector<std::vector<double>>& dist) {
    const std::size_t n = dist.size();
    if (n < 2) return {};
    std::vector<bool> in_tree(n, false);
    std::vector<double> key(n, kInf);
    std::vector<std::size_t> parent(n, 0);
    key[0] = 0.0;
    std::vector<MstEdge> edges;
    edges.reserve(n - 1);
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t v = n;
        for (std::size_t i = 0; i < n; ++i)
            if (!in_tree[i] && (v == n || key[i] < key[v])) v = i;  // ties keep lower index
        in_tree[v] = true;
        if (v != 0) edges.push_back({std::min(parent[v], v), std::max(parent[v], v), key[v]});
        for (std::size_t i = 0; i < n; ++i)
            if (!in_tree[i] && dist[v][i] < key[i]) {
                key[i] = dist[v][i];
                parent[i] = v;
            }
    }
    return edges;
}

namespace {

// Union-find agglomeration of sorted MST edges into a dendrogram.
std::vector<LinkNode> single_linkage(std::vector<MstEdge> edges, std::size_t n) {
    std::sort(edges.begin(), edges.end(), [](const MstEdge& x, const MstEdge& y) {
        if (x.weight != y.weight) return x.weight < y.weight;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    std::vector<std::size_t> find_up(2 * n - 1);
    std::iota(find_up.begin(), find_up.end(), 0);
    auto find = [&](std::size_t x) {
        while (find_up[x] != x) x = find_up[x] = find_up[find_up[x]];
        return x;
    };
    std::vector<LinkNode> nodes(2 * n - 1);
    std::size_t next = n;
    for (const auto& e : edges) {
        std::size_t ra = find(e.a), rb = find(e.b);
        nodes[next].left = ra;
        nodes[next].right = rb;
        nodes[next].distance = e.weight;
        nodes[next].size = nodes[ra].size + nodes[rb].size;
        find_up[ra] = find_up[rb] = next;
        ++next;
    }
    return nodes;
}

// Collapses the dendrogram into clusters that persist past min_cluster_size
// splits; smaller offshoots fall out as individual points.
std::vector<CondensedRow> condense_tree(const std::vector<LinkNode>& nodes, std::size_t n,
                                        std::size_t min_cluster_size, std::size_t& cluster_base) {
    std::vector<CondensedRow> rows;
    if (n < 2) return rows;
    const std::size_t root = 2 * n - 2;
    cluster_base = 2 * n - 1;  // condensed cluster ids start here
    std::size_t next_cluster = cluster_base;

    // leaves of a dendrogram subtree
    auto collect_leaves = [&](std::size_t node, std::vector<std::size_t>& out) {
        std::vector<std::size_t> stack{node};
        while (!stack.empty()) {
            std::size_t cur = stack.back();
            stack.pop_back();
            if (cur < n) {
                out.push_back(cur);
            } else {
                stack.push_back(nodes[cur].left);
                stack.push_back(nodes[cur].right);
            }
        }
    };

    struct Item {
        std::size_t node;     // dendrogram node
        std::size_t cluster;  // condensed cluster it belongs to
    };
    std::vector<Item> stack{{root, next_cluster++}};
    while (!stack.empty()) {
        auto [node, cluster] = stack.back();
        stack.pop_back();
        if (node < n) continue;
        const auto& ln = nodes[node];
        const double lambda = to_lambda(ln.distance);
        const std::size_t lsize = ln.left < n ? 1 : nodes[ln.left].size;
        const std::size_t rsize = ln.right < n ? 1 : nodes[ln.right].size;
        const bool lbig = lsize >= min_cluster_size;
        const bool rbig = rsize >= min_cluster_size;
        if (lbig && rbig) {
            std::size_t lc = next_cluster++;
            std::size_t rc = next_cluster++;
            rows.push_back({cluster, lc, lambda, lsize});
            rows.push_back({cluster, rc, lambda, rsize});
            stack.push_back({ln.left, lc});
            stack.push_back({ln.right, rc});
        } else if (!lbig && !rbig) {
            std::vector<std::size_t> leaves;
            collect_leaves(node, leaves);
            std::sort(leaves.begin(), leaves.end());
            for (auto p : leaves) rows.push_back({cluster, p, lambda, 1});
        } else {
            std::size_t small = lbig ? ln.right : ln.left;
            std::size_t big = lbig ? ln.left : ln.right;
            std::vector<std::size_t> leaves;
            collect_leaves(small, leaves);
            std::sort(leaves.begin(), leaves.end());
            for (auto p : leaves) rows.push_back({cluster, p, lambda, 1});
            stack.push_back({big, cluster});
        }
    }
    return rows;
}

}  // namespace

ClusterResult hdbscan(const VectorTable& points, const HdbscanParams& params) {
    const std::size_t n = points.size();
    if (n < 2) throw std::invalid_argument("hdbscan needs at least 2 points");
    const std::size_t mcs = std::max<std::size_t>(params.min_cluster_size, 2);

    std::vector<std::string> keys;
    std::vector<std::vector<double>> pts;
    keys.reserve(n);
    pts.reserve(n);
    for (const auto& [kw, vec] : points.rows) {
        keys.push_back(kw);
        pts.push_back(vec);
    }

    auto dist = pairwise_euclidean(pts);
    auto core = core_distances(dist, params.min_samples);
    auto mr = mutual_reachability(dist, core);
    auto mst = minimum_spanning_tree(mr);
    auto dendrogram = single_linkage(std::move(mst), n);

    std::size_t cluster_base = 0;
    auto condensed = condense_tree(dendrogram, n, mcs, cluster_base);

    // Cluster ids present in the condensed tree, root first.
    std::size_t max_cluster = cluster_base;
    for (const auto& row : condensed) max_cluster = std::max(max_cluster, std::max(row.parent, row.child));
    const std::size_t nc = max_cluster >= cluster_base ? max_cluster - cluster_base + 1 : 0;

    std::vector<double> birth(nc, 0.0);
    std::vector<std::size_t> parent_of(nc, 0);
    std::vector<std::vector<std::size_t>> child_clusters(nc);
    for (const auto& row : condensed) {
        if (row.child >= cluster_base) {
            std::size_t c = row.child - cluster_base;
            birth[c] = row.lambda;
            parent_of[c] = row.parent - cluster_base;
            child_clusters[row.parent - cluster_base].push_back(c);
        }
    }

    // Stability: sum over members of (lambda_leave - lambda_birth) * size.
    std::vector<double> stability(nc, 0.0);
    for (const auto& row : condensed) {
        std::size_t p = row.parent - cluster_base;
        double leave = row.lambda;
        double lo = birth[p];
        if (std::isinf(leave)) leave = lo;  // zero-distance merges contribute nothing
        stability[p] += (leave - lo) * static_cast<double>(row.size);
    }

    // Excess-of-mass selection, deepest clusters first; the root is never
    // selectable.
    std::vector<bool> selected(nc, false);
    std::vector<double> subtree(nc, 0.0);
    for (std::size_t c = nc; c-- > 1;) {
        double child_sum = 0.0;
        for (auto ch : child_clusters[c]) child_sum += subtree[ch];
        if (child_clusters[c].empty() || stability[c] >= child_sum) {
            selected[c] = true;
            subtree[c] = stability[c];
            // deselect descendants
            std::vector<std::size_t> stack(child_clusters[c]);
            while (!stack.empty()) {
                std::size_t d = stack.back();
                stack.pop_back();
                selected[d] = false;
                for (auto ch : child_clusters[d]) stack.push_back(ch);
            }
        } else {
            subtree[c] = child_sum;
        }
    }

    // Point assignment: nearest selected ancestor of the cluster the point
    // fell out of.
    std::vector<int> label(n, kNoise);
    std::vector<double> point_lambda(n, 0.0);
    std::vector<std::size_t> owner(n, 0);
    for (const auto& row : condensed) {
        if (row.child >= cluster_base) continue;
        std::size_t c = row.parent - cluster_base;
        std::size_t cur = c;
        bool found = false;
        while (true) {
            if (selected[cur]) {
                found = true;
                break;
            }
            if (cur == 0) break;
            cur = parent_of[cur];
        }
        if (found) {
            owner[row.child] = cur;
            label[row.child] = static_cast<int>(cur);  // provisional, relabeled below
            point_lambda[row.child] = row.lambda;
        }
    }

    // Dense ids ordered by smallest member index (stable under permutations
    // of the input because points are in sorted-keyword order).
    std::map<std::size_t, int> dense;
    for (std::size_t i = 0; i < n; ++i)
        if (label[i] != kNoise && !dense.count(owner[i]))
            dense.emplace(owner[i], static_cast<int>(dense.size()));

    // Membership strength: fall-out lambda relative to the cluster's max.
    std::map<std::size_t, double> max_lambda;
    for (std::size_t i = 0; i < n; ++i)
        if (label[i] != kNoise) {
            double lam = std::isinf(point_lambda[i]) ? 0.0 : point_lambda[i];
            auto [it, ins] = max_lambda.try_emplace(owner[i], lam);
            if (!ins) it->second = std::max(it->second, lam);
        }

    ClusterResult result;
    result.cluster_count = static_cast<int>(dense.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (label[i] == kNoise) {
            result.labels[keys[i]] = kNoise;
            result.probabilities[keys[i]] = 0.0;
        } else {
            result.labels[keys[i]] = dense.at(owner[i]);
            double mx = max_lambda.at(owner[i]);
            double lam = std::isinf(point_lambda[i]) ? mx : point_lambda[i];
            result.probabilities[keys[i]] = mx > 0.0 ? std::min(lam, mx) / mx : 1.0;
        }
    }
    return result;
}

std::vector<std::string> top_keywords(const ClusterResult& clusters,
                                      const std::vector<Article>& corpus, int cluster_id,
                                      std::size_t k) {
    std::map<std::string, std::size_t> freq;
    for (const auto& [kw, id] : clusters.labels)
        if (id == cluster_id) freq.emplace(kw, 0);
    if (freq.empty()) throw std::invalid_argument("cluster " + std::to_string(cluster_id) + " is empty");
    for (const auto& a : corpus)
        for (const auto& kw : a.keywords) {
            auto it = freq.find(kw);
            if (it != freq.end()) ++it->second;
        }
    std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > k) ranked.resize(k);
    std::vector<std::string> out;
    for (auto& [kw, c] : ranked) out.push_back(kw);
    return out;
}

void save_cluster_dump(const ClusterResult& clusters, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write cluster dump: " + path);
    out << "keyword\tcluster_id\tprobability\n";
    out.precision(6);
    for (const auto& [kw, id] : clusters.labels)
        out << kw << '\t' << id << '\t' << clusters.probabilities.at(kw) << '\n';
}

}  // namespace regimecast

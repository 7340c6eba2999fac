#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "regimecast/ingest.hpp"
#include "regimecast/vectors.hpp"

namespace regimecast {

inline constexpr int kNoise = -1;

struct HdbscanParams {
    std::size_t min_cluster_size = 200;
    std::size_t min_samples = 18;
};

struct ClusterResult {
    std::map<std::string, int> labels;  // keyword -> cluster id or kNoise
    int cluster_count = 0;
    std::map<std::string, double> probabilities;  // membership strength in [0,1]
};

struct MstEdge {
    std::size_t a;
    std::size_t b;
    double weight;
};

/// Distance to the min_samples-th nearest neighbor (self excluded).
std::vector<double> core_distances(const std::vector<std::vector<double>>& dist,
                                   std::size_t min_samples);

/// mr(i,j) = max(core_i, core_j, d(i,j)).
std::vector<std::vector<double>> mutual_reachability(const std::vector<std::vector<double>>& dist,
                                                     const std::vector<double>& core);

/// Prim's MST over a dense symmetric distance matrix; ties broken by
/// (weight, lower index pair) so the tree is reproducible.
std::vector<MstEdge> minimum_spanning_tree(const std::vector<std::vector<double>>& dist);

/// Density-based hierarchical clustering: core distances ->
/// mutual-reachability -> MST -> condensed cluster tree -> excess-of-mass
/// extraction. Points in no stable cluster are labeled kNoise. The number of
/// clusters is not preset. Rows are processed in sorted-keyword order, so the
/// partition does not depend on input file ordering.
ClusterResult hdbscan(const VectorTable& points, const HdbscanParams& params);

/// The k most frequent member keywords of a cluster by corpus occurrence,
/// ties broken lexicographically.
std::vector<std::string> top_keywords(const ClusterResult& clusters,
                                      const std::vector<Article>& corpus, int cluster_id,
                                      std::size_t k);

void save_cluster_dump(const ClusterResult& clusters, const std::string& path);

}  // namespace regimecast

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace regimecast {

/// keyword -> vector, all rows sharing one dimension. Used both for raw
/// embeddings and for reduced vectors; the map keeps keywords sorted so all
/// downstream iteration order is deterministic.
struct VectorTable {
    std::map<std::string, std::vector<double>> rows;
    std::size_t dim = 0;

    std::size_t size() const { return rows.size(); }
};

/// File format: header "dim=<d> count=<n>", then one row per line:
/// keyword<TAB>f1 f2 ... fd
VectorTable load_vectors(const std::string& path);
void save_vectors(const VectorTable& table, const std::string& path);

/// As load_vectors, but checks the file dimension against `expected_dim`.
/// Duplicate keyword rows are last-write-wins (a warning is appended to
/// `*warnings` when given).
VectorTable load_reduced(const std::string& path, std::size_t expected_dim,
                         std::vector<std::string>* warnings = nullptr);

/// Projects rows onto the top-m principal components of the mean-centered
/// data, components ordered by descending eigenvalue.
VectorTable pca_reduce(const VectorTable& table, std::size_t m);

}  // namespace regimecast

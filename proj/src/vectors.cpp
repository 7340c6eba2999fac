#include "regimecast/vectors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace regimecast {

namespace {

VectorTable read_vector_file(const std::string& path, bool allow_duplicates,
                             std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open vector file: " + path);
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("empty vector file: " + path);
    std::size_t dim = 0, count = 0;
    if (std::sscanf(header.c_str(), "dim=%zu count=%zu", &dim, &count) != 2)
        throw std::runtime_error("vector file header must be 'dim=<d> count=<n>': " + path);

    VectorTable table;
    table.dim = dim;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": missing tab separator");
        std::string keyword = line.substr(0, tab);
        std::vector<double> vec;
        vec.reserve(dim);
        std::istringstream vs(line.substr(tab + 1));
        double v;
        while (vs >> v) {
            if (!std::isfinite(v))
                throw std::runtime_error("non-finite component for keyword '" + keyword + "'");
            vec.push_back(v);
        }
        if (vec.size() != dim)
            throw std::runtime_error("dimension mismatch for keyword '" + keyword + "': got " +
                                     std::to_string(vec.size()) + ", expected " +
                                     std::to_string(dim));
        auto [it, inserted] = table.rows.insert_or_assign(std::move(keyword), std::move(vec));
        if (!inserted) {
            if (!allow_duplicates)
                throw std::runtime_error("duplicate keyword row '" + it->first + "'");
            if (warnings)
                warnings->push_back("duplicate keyword row '" + it->first +
                                    "', keeping the last occurrence");
        }
    }
    return table;
}

}  // namespace

VectorTable load_vectors(const std::string& path) { return read_vector_file(path, false, nullptr); }

void save_vectors(const VectorTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write vector file: " + path);
    out << "dim=" << table.dim << " count=" << table.rows.size() << "\n";
    out.precision(17);
    for (const auto& [kw, vec] : table.rows) {
        out << kw << '\t';
        for (std::size_t i = 0; i < vec.size(); ++i) out << (i ? " " : "") << vec[i];
        out << '\n';
    }
}

VectorTable load_reduced(const std::string& path, std::size_t expected_dim,
                         std::vector<std::string>* warnings) {
    VectorTable table = read_vector_file(path, true, warnings);
    if (table.dim != expected_dim)
        throw std::runtime_error("reduced vector file has dim " + std::to_string(table.dim) +
                                 " but configuration expects " + std::to_string(expected_dim));
    return table;
}

VectorTable pca_reduce(const VectorTable& table, std::size_t m) {
    const std::size_t n = table.size();
    const std::size_t d = table.dim;
    if (n < 2) throw std::invalid_argument("pca_reduce needs at least 2 rows");
    if (m < 1 || m > d) throw std::invalid_argument("pca_reduce: m must be in [1, dim]");

    Eigen::MatrixXd X(n, d);
    std::size_t r = 0;
    for (const auto& [kw, vec] : table.rows) {
        for (std::size_t c = 0; c < d; ++c) X(r, c) = vec[c];
        ++r;
    }
    Eigen::RowVectorXd mean = X.colwise().mean();
    X.rowwise() -= mean;

    Eigen::MatrixXd cov = (X.transpose() * X) / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) throw std::runtime_error("pca_reduce: eigensolver failed");

    // SelfAdjointEigenSolver sorts ascending; take the last m columns reversed.
    Eigen::MatrixXd components(d, m);
    for (std::size_t j = 0; j < m; ++j) components.col(j) = eig.eigenvectors().col(d - 1 - j);
    Eigen::MatrixXd Y = X * components;

    VectorTable out;
    out.dim = m;
    r = 0;
    for (const auto& [kw, vec] : table.rows) {
        std::vector<double> row(m);
        for (std::size_t c = 0; c < m; ++c) row[c] = Y(r, c);
        out.rows.emplace(kw, std::move(row));
        ++r;
    }
    return out;
}

}  // namespace regimecast

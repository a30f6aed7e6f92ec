#pragma once

#include <unistd.h>

#include <filesystem>
#include <string>
#include <vector>

#include "gspi/graph.hpp"
#include "gspi/rng.hpp"

namespace testutil {

using gspi::Edge;
using gspi::NodeId;
using gspi::WeightedGraph;

inline WeightedGraph path_graph(int n, double beta = 1.0, double distance = 1.0)
{
    std::vector<Edge> e;
    for (int i = 0; i + 1 < n; ++i)
        e.push_back({i, i + 1, distance});
    return {n, beta, e};
}

inline WeightedGraph star_graph(int leaves, double beta = 1.0, double distance = 1.0)
{
    std::vector<Edge> e;
    for (int i = 1; i <= leaves; ++i)
        e.push_back({0, i, distance});
    return {leaves + 1, beta, e};
}

inline WeightedGraph complete_graph(int n, double beta = 1.0, double distance = 1.0)
{
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            e.push_back({i, j, distance});
    return {n, beta, e};
}

// random spanning tree plus extra edges with probability p; distances U[1,100]
inline WeightedGraph random_connected(gspi::Rng& rng, int n, double p, double beta = 0.5)
{
    std::vector<Edge> e;
    std::vector<std::vector<char>> used(n, std::vector<char>(n, 0));
    for (int v = 1; v < n; ++v) {
        const int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(v)));
        e.push_back({u, v, rng.uniform(1.0, 100.0)});
        used[u][v] = used[v][u] = 1;
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!used[i][j] && rng.bernoulli(p))
                e.push_back({i, j, rng.uniform(1.0, 100.0)});
    return {n, beta, e};
}

inline std::vector<std::uint8_t> random_states(gspi::Rng& rng, int n, int infected)
{
    std::vector<std::uint8_t> s(static_cast<std::size_t>(n), 0);
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        idx[i] = i;
    for (int i = 0; i < infected; ++i) {
        std::swap(idx[i], idx[i + rng.below(static_cast<std::uint64_t>(n - i))]);
        s[idx[i]] = 1;
    }
    return s;
}

// per-test scratch directory, removed on destruction
struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag)
    {
        path = std::filesystem::temp_directory_path() / ("gspi_test_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace testutil

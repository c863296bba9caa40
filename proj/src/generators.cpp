#include "cscale/generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "cscale/errors.hpp"
#include "cscale/rng.hpp"

namespace cscale {
namespace {

constexpr std::array<std::pair<FamilyKind, std::string_view>, 8> kNames{{
    {FamilyKind::path, "path"},
    {FamilyKind::ring, "ring"},
    {FamilyKind::star, "star"},
    {FamilyKind::complete, "complete"},
    {FamilyKind::lattice2d_torus, "lattice2d_torus"},
    {FamilyKind::binary_tree, "binary_tree"},
    {FamilyKind::barbell, "barbell"},
    {FamilyKind::random_regular, "random_regular"},
}};

void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}

}  // namespace

std::string_view to_string(FamilyKind kind) {
    for (const auto& [k, name] : kNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

FamilyKind parse_family_kind(std::string_view name) {
    for (const auto& [k, n] : kNames) {
        if (n == name) return k;
    }
    throw ValidationError("unknown graph family '" + std::string(name) + "'");
}

Graph generate_path(int n, double weight) {
    require(n >= 2, "path needs N >= 2");
    std::vector<Graph::Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, weight});
    return Graph(n, std::move(edges));
}

Graph generate_ring(int n, double weight) {
    require(n >= 3, "ring needs N >= 3");
    std::vector<Graph::Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, weight});
    return Graph(n, std::move(edges));
}

Graph generate_star(int n, double weight) {
    require(n >= 2, "star needs N >= 2");
    std::vector<Graph::Edge> edges;
    for (int i = 1; i < n; ++i) edges.push_back({0, i, weight});
    return Graph(n, std::move(edges));
}

Graph generate_complete(int n, double weight) {
    require(n >= 2, "complete graph needs N >= 2");
    std::vector<Graph::Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j, weight});
    return Graph(n, std::move(edges));
}

Graph generate_torus(int rows, int cols, double weight) {
    // Below 3 the wrap-around edge duplicates the direct one.
    require(rows >= 3 && cols >= 3, "torus needs at least 3 rows and 3 columns");
    std::vector<Graph::Edge> edges;
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            edges.push_back({id(r, c), id(r, (c + 1) % cols), weight});
            edges.push_back({id(r, c), id((r + 1) % rows, c), weight});
        }
    }
    return Graph(rows * cols, std::move(edges));
}

Graph generate_binary_tree(int n, double weight) {
    require(n >= 2, "binary tree needs N >= 2");
    std::vector<Graph::Edge> edges;
    for (int i = 1; i < n; ++i) edges.push_back({(i - 1) / 2, i, weight});
    return Graph(n, std::move(edges));
}

Graph generate_barbell(int m, int b, double weight) {
    require(m >= 2, "barbell clique size must be >= 2");
    require(b >= 1, "barbell needs at least one bridge node");
    std::vector<Graph::Edge> edges;
    for (int offset : {0, m}) {
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) edges.push_back({offset + i, offset + j, weight});
    }
    for (int j = 0; j < b; ++j) {
        const int bridge = 2 * m + j;
        edges.push_back({j % m, bridge, weight});
        edges.push_back({m + j % m, bridge, weight});
    }
    return Graph(2 * m + b, std::move(edges));
}

Graph generate_random_regular(int n, int k, std::uint64_t seed, double weight, int max_attempts) {
    require(k >= 1, "random regular degree must be >= 1");
    require(k < n, "random regular graph needs k < N");
    require((static_cast<long long>(n) * k) % 2 == 0, "random regular graph needs N*k even");
    require(max_attempts >= 1, "max_attempts must be positive");

    Rng rng(seed);
    std::vector<int> stubs(static_cast<std::size_t>(n) * k);
    std::vector<Graph::Edge> edges;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        for (std::size_t s = 0; s < stubs.size(); ++s) stubs[s] = static_cast<int>(s) / k;
        for (std::size_t i = stubs.size() - 1; i > 0; --i) {
            std::swap(stubs[i], stubs[rng.below(i + 1)]);
        }

        edges.clear();
        for (auto& row : adj) row.clear();
        bool simple = true;
        for (std::size_t s = 0; s < stubs.size() && simple; s += 2) {
            const int u = stubs[s], v = stubs[s + 1];
            if (u == v || std::find(adj[u].begin(), adj[u].end(), v) != adj[u].end()) {
                simple = false;
                break;
            }
            adj[u].push_back(v);
            adj[v].push_back(u);
            edges.push_back({u, v, weight});
        }
        if (!simple) continue;

        Graph g(n, edges);
        if (g.is_connected()) return g;
    }
    throw RetryExhausted("no simple connected " + std::to_string(k) + "-regular graph on " + std::to_string(n) +
                         " nodes after " + std::to_string(max_attempts) + " attempts");
}

Graph generate(const FamilySpec& spec, int n) {
    require(spec.weight > 0.0 && std::isfinite(spec.weight), "family weight must be positive");
    switch (spec.kind) {
        case FamilyKind::path: return generate_path(n, spec.weight);
        case FamilyKind::ring: return generate_ring(n, spec.weight);
        case FamilyKind::star: return generate_star(n, spec.weight);
        case FamilyKind::complete: return generate_complete(n, spec.weight);
        case FamilyKind::binary_tree: return generate_binary_tree(n, spec.weight);
        case FamilyKind::lattice2d_torus: {
            int rows = spec.rows, cols = spec.cols;
            if (rows == 0 && cols == 0) {
                rows = cols = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
                require(rows * cols == n, "lattice2d_torus without rows/cols needs a perfect-square N");
            } else if (rows == 0) {
                require(cols > 0 && n % cols == 0, "N must be a multiple of cols");
                rows = n / cols;
            } else if (cols == 0) {
                require(rows > 0 && n % rows == 0, "N must be a multiple of rows");
                cols = n / rows;
            }
            require(rows * cols == n, "rows*cols must equal N");
            return generate_torus(rows, cols, spec.weight);
        }
        case FamilyKind::barbell: {
            int m = spec.clique_size;
            if (m == 0) {
                require((n - spec.bridge_nodes) % 2 == 0, "barbell needs N - bridge_nodes even");
                m = (n - spec.bridge_nodes) / 2;
            }
            require(2 * m + spec.bridge_nodes == n, "barbell needs N = 2*clique_size + bridge_nodes");
            return generate_barbell(m, spec.bridge_nodes, spec.weight);
        }
        case FamilyKind::random_regular:
            return generate_random_regular(n, spec.k, spec.seed, spec.weight, spec.max_attempts);
    }
    throw ValidationError("unhandled graph family");
}

}  // namespace cscale

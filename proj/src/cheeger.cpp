#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>

#include "cscale/errors.hpp"
#include "cscale/laplacian.hpp"
#include "cscale/partition.hpp"
#include "cscale/spectral.hpp"

namespace cscale {

double cheeger_ratio(const Graph& g, const std::vector<int>& set) {
    std::vector<char> inside(static_cast<std::size_t>(g.node_count()), 0);
    for (int v : set) {
        require_node(g, v);
        inside[v] = 1;
    }
    double vol_in = 0.0, vol_all = 0.0;
    for (int v = 0; v < g.node_count(); ++v) {
        const double d = g.weighted_degree(v);
        vol_all += d;
        if (inside[v]) vol_in += d;
    }
    double boundary = 0.0;
    for (int v : vertex_boundary(g, set)) boundary += g.weighted_degree(v);
    const double denom = std::min(vol_in, vol_all - vol_in);
    if (!(denom > 0.0)) throw ValidationError("Cheeger ratio needs a nonempty proper subset with edges on both sides");
    return boundary / denom;
}

CheegerResult cheeger_exact(const Graph& g, int cap) {
    const int n = g.node_count();
    if (n > cap) {
        throw ValidationError("exact Cheeger constant refused for N = " + std::to_string(n) + " above cap " +
                              std::to_string(cap) + "; use cheeger_sweep");
    }
    if (n < 2 || n > 62) throw ValidationError("exact Cheeger constant needs 2 <= N <= 62");
    require_connected(g);

    std::vector<std::uint64_t> nbr(static_cast<std::size_t>(n), 0);
    std::vector<double> deg(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        for (const auto& e : g.neighbors(v)) nbr[v] |= std::uint64_t{1} << e.node;
        deg[v] = g.weighted_degree(v);
    }
    const double vol_all = std::accumulate(deg.begin(), deg.end(), 0.0);
    auto volume = [&](std::uint64_t mask) {
        double s = 0.0;
        for (int v = 0; v < n; ++v)
            if (mask >> v & 1) s += deg[v];
        return s;
    };

    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t best_mask = 0;
    for (std::uint64_t mask = 1; mask < full; ++mask) {
        std::uint64_t reach = 0;
        for (int v = 0; v < n; ++v)
            if (mask >> v & 1) reach |= nbr[v];
        const double vol_in = volume(mask);
        const double ratio = volume(reach & ~mask) / std::min(vol_in, vol_all - vol_in);
        if (ratio < best) {
            best = ratio;
            best_mask = mask;
        }
    }
    CheegerResult r{best, {}};
    for (int v = 0; v < n; ++v)
        if (best_mask >> v & 1) r.witness.push_back(v);
    return r;
}

CheegerResult cheeger_sweep(const Graph& g) {
    const int n = g.node_count();
    if (n < 2) throw ValidationError("Cheeger sweep needs N >= 2");
    require_connected(g);

    const auto eig = eig_symmetric(normalized_laplacian(g));
    Eigen::VectorXd score = eig.vectors.col(1);
    for (int v = 0; v < n; ++v) score(v) /= std::sqrt(g.weighted_degree(v));
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return score(a) < score(b); });

    // The vertex-boundary ratio is not symmetric in X and its complement, so
    // both the prefix and the suffix of each split are scored.
    CheegerResult best{std::numeric_limits<double>::infinity(), {}};
    for (int cut = 1; cut < n; ++cut) {
        std::vector<int> head(order.begin(), order.begin() + cut);
        std::vector<int> tail(order.begin() + cut, order.end());
        for (auto* side : {&head, &tail}) {
            const double ratio = cheeger_ratio(g, *side);
            if (ratio < best.value) {
                best.value = ratio;
                best.witness = *side;
                std::sort(best.witness.begin(), best.witness.end());
            }
        }
    }
    return best;
}

}  // namespace cscale

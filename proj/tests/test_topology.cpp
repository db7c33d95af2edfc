#include <doctest.h>

#include <algorithm>
#include <set>

#include "mech/topology.hpp"

using namespace mech;

namespace {

/// All-pairs shortest paths by Floyd-Warshall, as an independent check of
/// the BFS distance map.
std::vector<std::vector<int>> floyd_warshall(const CouplingGraph& g,
                                             const std::set<NodeId>& forbidden) {
    const int n = g.num_nodes();
    const int inf = 1 << 20;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
    for (int i = 0; i < n; ++i)
        if (!forbidden.count(i)) d[i][i] = 0;
    for (int i = 0; i < n; ++i) {
        if (forbidden.count(i)) continue;
        for (const auto& [j, k] : g.neighbors(i))
            if (!forbidden.count(j)) d[i][j] = 1;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return d;
}

ChipletSpec square_spec(int chip, int rows, int cols, double sparsity = 1.0) {
    ChipletSpec s;
    s.structure = Structure::square;
    s.chiplet_rows = s.chiplet_cols = chip;
    s.array_rows = rows;
    s.array_cols = cols;
    s.cross_sparsity = sparsity;
    return s;
}

}  // namespace

TEST_CASE("square 6x6 chiplets in a 3x3 array has 324 nodes") {
    const auto g = build_chiplet_array(square_spec(6, 3, 3));
    CHECK(g.num_nodes() == 324);
}

TEST_CASE("square 6x6 / 3x3 edge counts split into on-chip and cross-chip") {
    const auto g = build_chiplet_array(square_spec(6, 3, 3));
    // counting oracle: 9 chiplets x 2 * 6 * 5 grid edges each
    CHECK(g.num_edges(EdgeKind::on_chip) == 540);
    // 12 adjacent chiplet pairs x 6 aligned boundary links
    CHECK(g.num_edges(EdgeKind::cross_chip) == 72);
}

TEST_CASE("single chiplet array has no cross-chip edges") {
    for (auto st : {Structure::square, Structure::hexagon, Structure::heavy_square,
                    Structure::heavy_hexagon}) {
        ChipletSpec s;
        s.structure = st;
        s.chiplet_rows = s.chiplet_cols = st == Structure::square || st == Structure::hexagon ? 5 : 6;
        s.array_rows = s.array_cols = 1;
        const auto g = build_chiplet_array(s);
        CHECK(g.num_edges(EdgeKind::cross_chip) == 0);
        CHECK(g.connected());
    }
}

TEST_CASE("heavy lattices match the published total qubit counts") {
    ChipletSpec hs;
    hs.structure = Structure::heavy_square;
    hs.chiplet_rows = hs.chiplet_cols = 8;
    hs.array_rows = hs.array_cols = 3;
    CHECK(build_chiplet_array(hs).num_nodes() == 432);

    ChipletSpec hh;
    hh.structure = Structure::heavy_hexagon;
    hh.chiplet_rows = hh.chiplet_cols = 8;
    hh.array_rows = 3;
    hh.array_cols = 4;
    CHECK(build_chiplet_array(hh).num_nodes() == 480);

    ChipletSpec hex;
    hex.structure = Structure::hexagon;
    hex.chiplet_rows = hex.chiplet_cols = 8;
    hex.array_rows = 2;
    hex.array_cols = 3;
    CHECK(build_chiplet_array(hex).num_nodes() == 384);
}

TEST_CASE("randomized spec sweep: connected, cross edges span distinct chiplets") {
    Rng rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        ChipletSpec s;
        const int pick = rng.next_below(4);
        s.structure = static_cast<Structure>(pick);
        const bool heavy = pick >= 2;
        s.chiplet_rows = heavy ? 4 + 2 * rng.next_below(3) : 2 + rng.next_below(5);
        s.chiplet_cols = heavy ? 4 + 2 * rng.next_below(3) : 2 + rng.next_below(5);
        s.array_rows = 1 + rng.next_below(3);
        s.array_cols = 1 + rng.next_below(3);
        s.cross_sparsity = 0.25 + 0.75 * rng.next_double();
        const auto g = build_chiplet_array(s);
        CHECK(g.connected());
        for (const auto& [a, b] : g.edges(EdgeKind::cross_chip))
            CHECK(g.chiplet_of(a) != g.chiplet_of(b));
        for (const auto& [a, b] : g.edges(EdgeKind::on_chip))
            CHECK(g.chiplet_of(a) == g.chiplet_of(b));
        // no self loops / duplicate edges
        for (NodeId n = 0; n < g.num_nodes(); ++n) {
            std::set<NodeId> seen;
            for (const auto& [m, k] : g.neighbors(n)) {
                CHECK(m != n);
                CHECK(seen.insert(m).second);
            }
        }
    }
}

TEST_CASE("sparsity keeps the even-spaced symmetric links on a 7-wide boundary") {
    const auto g = build_chiplet_array(square_spec(7, 1, 2));
    REQUIRE(g.boundaries().size() == 1);
    CHECK(g.boundaries()[0].full_width == 7);

    auto offsets = [&](const CouplingGraph& gg) {
        std::vector<int> rows;
        for (const auto& [a, b] : gg.edges(EdgeKind::cross_chip))
            rows.push_back(gg.node(a).grow);
        std::sort(rows.begin(), rows.end());
        return rows;
    };

    const auto g37 = apply_sparsity(g, 3.0 / 7.0);
    CHECK(offsets(g37) == std::vector<int>{1, 3, 5});

    const auto g17 = apply_sparsity(g, 1.0 / 7.0);
    CHECK(offsets(g17) == std::vector<int>{3});

    // keep = 1 is the identity
    const auto g77 = apply_sparsity(g, 1.0);
    CHECK(offsets(g77) == std::vector<int>{0, 1, 2, 3, 4, 5, 6});
}

TEST_CASE("apply_sparsity is idempotent and monotone") {
    const auto g = build_chiplet_array(square_spec(7, 2, 3));
    const std::vector<double> keeps{1.0 / 7, 2.0 / 7, 3.0 / 7, 4.0 / 7, 5.0 / 7, 1.0};

    auto edge_set = [](const CouplingGraph& gg) {
        auto e = gg.edges(EdgeKind::cross_chip);
        return std::set<std::pair<NodeId, NodeId>>(e.begin(), e.end());
    };

    std::vector<std::set<std::pair<NodeId, NodeId>>> sets;
    for (double k : keeps) {
        const auto gk = apply_sparsity(g, k);
        const auto once = edge_set(gk);
        const auto twice = edge_set(apply_sparsity(gk, k));
        CHECK(once == twice);
        sets.push_back(once);
    }
    for (size_t i = 0; i + 1 < sets.size(); ++i)
        CHECK(std::includes(sets[i + 1].begin(), sets[i + 1].end(), sets[i].begin(),
                            sets[i].end()));
}

TEST_CASE("sparsity never disconnects adjacent chiplets") {
    const auto g = build_chiplet_array(square_spec(5, 2, 2, 0.05));
    CHECK(g.connected());
    for (const auto& bd : g.boundaries()) CHECK(bd.links.size() >= 1);
}

TEST_CASE("distance_map basics") {
    const auto g = build_chiplet_array(square_spec(2, 1, 1));
    const auto d = distance_map(g, {0}, {});
    CHECK(d[0] == 0);
    CHECK(d[1] == 1);
}

TEST_CASE("distance_map matches Floyd-Warshall with a forbidden column") {
    const auto g = build_chiplet_array(square_spec(6, 1, 1));
    std::vector<NodeId> forbidden;
    for (NodeId n = 0; n < g.num_nodes(); ++n)
        if (g.node(n).gcol == 3) forbidden.push_back(n);
    const auto fw = floyd_warshall(g, {forbidden.begin(), forbidden.end()});
    for (NodeId src = 0; src < g.num_nodes(); ++src) {
        if (g.node(src).gcol == 3) continue;
        const auto d = distance_map(g, {src}, forbidden);
        for (NodeId n = 0; n < g.num_nodes(); ++n) {
            if (fw[src][n] >= (1 << 20))
                CHECK(d[n] == -1);
            else
                CHECK(d[n] == fw[src][n]);
        }
    }
}

TEST_CASE("distance_map equals the all-pairs oracle on graphs up to 100 nodes") {
    Rng rng(11);
    for (int trial = 0; trial < 6; ++trial) {
        ChipletSpec s = square_spec(2 + rng.next_below(4), 1 + rng.next_below(3),
                                    1 + rng.next_below(3));
        const auto g = build_chiplet_array(s);
        if (g.num_nodes() > 100) continue;
        const auto fw = floyd_warshall(g, {});
        for (NodeId src = 0; src < g.num_nodes(); ++src) {
            const auto d = distance_map(g, {src}, {});
            for (NodeId n = 0; n < g.num_nodes(); ++n) CHECK(d[n] == fw[src][n]);
        }
    }
}

TEST_CASE("invalid specs are rejected") {
    ChipletSpec s = square_spec(6, 3, 3);
    s.cross_sparsity = 0.0;
    CHECK_THROWS_AS(build_chiplet_array(s), MechError);
    s = square_spec(0, 3, 3);
    CHECK_THROWS_AS(build_chiplet_array(s), MechError);
    ChipletSpec h;
    h.structure = Structure::heavy_square;
    h.chiplet_rows = 7;  // heavy lattices need even dims
    h.chiplet_cols = 8;
    CHECK_THROWS_AS(build_chiplet_array(h), MechError);
}

#include <algorithm>
#include <vector>

#include "doctest.h"
#include "qd/errors.hpp"
#include "qd/fixtures.hpp"
#include "qd/flow.hpp"
#include "qd/rng.hpp"

using namespace qd;

namespace {

std::vector<int> superpose_decomposition(const Decomposition& dec, int n_qudits) {
    std::vector<int> acc(n_qudits, 0);
    for (const auto& c : dec.cycles) superpose_cycle(acc, c, dec.d);
    for (const auto& c : dec.harmonic) superpose_cycle(acc, c, dec.d);
    for (const auto& t : dec.trees) superpose_tree(acc, t, dec.d);
    return acc;
}

// full pipeline superposition with trees replaced by their pruned strings
std::vector<int> superpose_pruned(const Decomposition& dec, int n_qudits) {
    std::vector<int> acc(n_qudits, 0);
    for (const auto& c : dec.cycles) superpose_cycle(acc, c, dec.d);
    for (const auto& c : dec.harmonic) superpose_cycle(acc, c, dec.d);
    for (const auto& t : dec.trees)
        for (const auto& st : prune_tree(t, dec.d)) superpose_simple_tree(acc, st, dec.d);
    return acc;
}

std::vector<int> exponents(const DitVector& v) {
    std::vector<int> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    return out;
}

// terminal charges of a pruned forest: string charges plus nonzero roots
std::vector<int> pruned_charges(const std::vector<SimpleTree>& forest) {
    std::vector<int> out;
    for (const auto& st : forest) {
        if (st.root_charge != 0) out.push_back(st.root_charge);
        for (const auto& s : st.strings) out.push_back(s.charge);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("identity has empty flows") {
    TorusLattice lat = build_lattice(3, 3, 3);
    auto [fz, fx] = error_to_flows(lat.identity(), lat);
    CHECK(fz.edges.empty());
    CHECK(fx.edges.empty());
    for (int t : fz.terminal) CHECK(t == 0);
    CHECK(fz.sector == Sector::chargeon);
    CHECK(fx.sector == Sector::fluxon);
}

TEST_CASE("a single factor is one canonical flow edge") {
    TorusLattice lat = build_lattice(4, 4, 5);
    PauliError p = lat.identity();
    p.z.set(9, 3);
    auto [fz, fx] = error_to_flows(p, lat);
    REQUIRE(fz.edges.size() == 1);
    CHECK(fx.edges.empty());
    const FlowEdge& e = fz.edges[0];
    CHECK(e.qudit == 9);
    CHECK(e.weight == 3);
    CHECK(e.from == lat.site_minus(9, Sector::chargeon));
    CHECK(e.to == lat.site_plus(9, Sector::chargeon));
    CHECK(fz.terminal[e.to] == 3);
    CHECK(fz.terminal[e.from] == 2);
}

TEST_CASE("a stabilizer loop decomposes into one contractible cycle") {
    TorusLattice lat = build_lattice(4, 4, 5);
    for (int k : {1, 2, 4}) {
        PauliError p = lat.plaquette_op(5, k);
        auto [fz, fx] = error_to_flows(p, lat);
        Decomposition dec = decompose(fz, lat);
        REQUIRE(dec.cycles.size() == 1);
        CHECK(dec.harmonic.empty());
        CHECK(dec.trees.empty());
        // the walk may run either way around, carrying weight k or 5 - k
        CHECK((dec.cycles[0].weight == k || dec.cycles[0].weight == 5 - k));
        CHECK(dec.cycles[0].qudits.size() == 4);
        CHECK(dec.cycles[0].contractible());
        CHECK(superpose_decomposition(dec, lat.n_qudits()) == exponents(p.z));
    }
}

TEST_CASE("logical strings decompose into one harmonic cycle") {
    TorusLattice lat = build_lattice(4, 4, 5);
    PauliError s0 = logical_string(lat, 0, 2, 1);
    auto [fz0, fx0] = error_to_flows(s0, lat);
    Decomposition d0 = decompose(fz0, lat);
    CHECK(d0.cycles.empty());
    REQUIRE(d0.harmonic.size() == 1);
    CHECK(std::abs(d0.harmonic[0].wind_x) == 1);
    CHECK(d0.harmonic[0].wind_y == 0);
    CHECK_FALSE(d0.harmonic[0].contractible());
    CHECK(superpose_decomposition(d0, lat.n_qudits()) == exponents(s0.z));

    auto [fz1, fx1] = error_to_flows(logical_string(lat, 1, 1, 0), lat);
    Decomposition d1 = decompose(fz1, lat);
    REQUIRE(d1.harmonic.size() == 1);
    CHECK(d1.harmonic[0].wind_x == 0);
    CHECK(std::abs(d1.harmonic[0].wind_y) == 1);
}

TEST_CASE("merge fuses crossing cycles whose weights cancel") {
    TorusLattice lat = build_lattice(4, 4, 5);
    auto [fz, fx] = error_to_flows(lat.plaquette_op(5, 2), lat);
    Decomposition base = decompose(fz, lat);
    REQUIRE(base.cycles.size() == 1);

    // same walk at complementary weights: canonical weights sum to 0 mod 5
    // on every shared qudit, so the pair fuses and the superposition vanishes
    Decomposition dec;
    dec.sector = Sector::chargeon;
    dec.d = 5;
    dec.cycles = {base.cycles[0], base.cycles[0]};
    dec.cycles[1].weight = 5 - base.cycles[0].weight;
    Decomposition merged = merge_loops(dec, lat);
    CHECK(merged.cycles.empty());
    CHECK(merged.harmonic.empty());
    CHECK(merged.trees.empty());

    // weights 1 and 1 sum to 2 mod 5: nothing to fuse
    Decomposition keep;
    keep.sector = Sector::chargeon;
    keep.d = 5;
    keep.cycles = {base.cycles[0], base.cycles[0]};
    keep.cycles[0].weight = 1;
    keep.cycles[1].weight = 1;
    Decomposition kept = merge_loops(keep, lat);
    CHECK(kept.cycles.size() == 2);
    CHECK(superpose_decomposition(kept, lat.n_qudits()) ==
          superpose_decomposition(keep, lat.n_qudits()));
}

TEST_CASE("merge cancels a doubled loop mod 2") {
    TorusLattice lat = build_lattice(4, 4, 2);
    auto [fz, fx] = error_to_flows(lat.plaquette_op(0, 1), lat);
    Decomposition base = decompose(fz, lat);
    REQUIRE(base.cycles.size() == 1);
    Decomposition dec;
    dec.sector = Sector::chargeon;
    dec.d = 2;
    dec.cycles = {base.cycles[0], base.cycles[0]};
    Decomposition merged = merge_loops(dec, lat);
    CHECK(merged.cycles.empty());
}

TEST_CASE("pruning a balanced junction keeps one simple tree") {
    TorusLattice lat = build_lattice(4, 4, 5);
    PauliError p = lat.identity();
    int j = lat.vertex_index(1, 1);
    add_z_string(p, lat, j, lat.vertex_index(3, 1), 1);
    add_z_string(p, lat, j, lat.vertex_index(1, 3), 1);
    add_z_string(p, lat, j, lat.vertex_index(0, 1), 3);
    CHECK(lat.syndrome(p).a[j] == 0);  // junction charge cancels

    auto [fz, fx] = error_to_flows(p, lat);
    Decomposition dec = decompose(fz, lat);
    CHECK(dec.cycles.empty());
    REQUIRE(dec.trees.size() == 1);
    CHECK(dec.trees[0].terminals.size() == 3);

    auto forest = prune_tree(dec.trees[0], 5);
    REQUIRE(forest.size() == 1);
    CHECK(forest[0].strings.size() == 2);  // root is a terminal, not a string
    CHECK(pruned_charges(forest) == std::vector<int>{1, 1, 3});
    long long sum = forest[0].root_charge;
    for (const auto& s : forest[0].strings) sum += s.charge;
    CHECK(mod_d(sum, 5) == 0);
}

TEST_CASE("pruning splits a four-leaf star mod 2 into two pairs") {
    TorusLattice lat = build_lattice(4, 4, 2);
    PauliError p = lat.identity();
    int j = lat.vertex_index(1, 1);
    add_z_string(p, lat, j, lat.vertex_index(3, 1), 1);
    add_z_string(p, lat, j, lat.vertex_index(1, 3), 1);
    add_z_string(p, lat, j, lat.vertex_index(0, 1), 1);
    add_z_string(p, lat, j, lat.vertex_index(1, 0), 1);

    auto [fz, fx] = error_to_flows(p, lat);
    Decomposition dec = decompose(fz, lat);
    REQUIRE(dec.trees.size() == 1);
    auto forest = prune_tree(dec.trees[0], 2);
    CHECK(forest.size() == 2);
    CHECK(pruned_charges(forest) == std::vector<int>{1, 1, 1, 1});
    for (const auto& st : forest) {
        long long sum = st.root_charge;
        for (const auto& s : st.strings) sum += s.charge;
        CHECK(mod_d(sum, 2) == 0);
    }
}

TEST_CASE("pruning a five-terminal tree splits off one group") {
    TorusLattice lat = build_lattice(4, 4, 5);
    PauliError p = lat.identity();
    int j = lat.vertex_index(1, 1);
    add_z_string(p, lat, j, lat.vertex_index(3, 1), 1);  // shares its first hop
    add_z_string(p, lat, j, lat.vertex_index(2, 1), 2);  // with this one
    add_z_string(p, lat, j, lat.vertex_index(1, 3), 1);
    add_z_string(p, lat, j, lat.vertex_index(0, 1), 3);
    add_z_string(p, lat, j, lat.vertex_index(1, 0), 3);

    auto [fz, fx] = error_to_flows(p, lat);
    Decomposition dec = decompose(fz, lat);
    REQUIRE(dec.trees.size() == 1);
    CHECK(dec.trees[0].terminals.size() == 5);
    auto forest = prune_tree(dec.trees[0], 5);
    CHECK(forest.size() == 2);
    CHECK(pruned_charges(forest) == std::vector<int>{1, 1, 2, 3, 3});
    std::vector<int> acc(lat.n_qudits(), 0);
    for (const auto& st : forest) superpose_simple_tree(acc, st, 5);
    CHECK(acc == exponents(p.z));
}

TEST_CASE("decomposition recomposes the input exponents") {
    for (int d : {2, 3, 5}) {
        TorusLattice lat = build_lattice(4, 4, d);
        Rng rng(23, d);
        for (int trial = 0; trial < 20; ++trial) {
            PauliError p = random_error(lat, rng, 0.2 + 0.6 * (trial % 5) / 5.0);
            auto [fz, fx] = error_to_flows(p, lat);
            Decomposition dz = merge_loops(decompose(fz, lat), lat);
            Decomposition dx = merge_loops(decompose(fx, lat), lat);
            CHECK(superpose_decomposition(dz, lat.n_qudits()) == exponents(p.z));
            CHECK(superpose_decomposition(dx, lat.n_qudits()) == exponents(p.x));
            CHECK(superpose_pruned(dz, lat.n_qudits()) == exponents(p.z));
            CHECK(superpose_pruned(dx, lat.n_qudits()) == exponents(p.x));
        }
    }
}

TEST_CASE("components are ordered by smallest site") {
    TorusLattice lat = build_lattice(6, 6, 3);
    PauliError p = lat.identity();
    add_z_string(p, lat, lat.vertex_index(4, 4), lat.vertex_index(5, 4), 1);
    add_z_string(p, lat, lat.vertex_index(0, 0), lat.vertex_index(1, 0), 2);
    auto [fz, fx] = error_to_flows(p, lat);
    auto comps = connected_components(fz);
    REQUIRE(comps.size() == 2);
    auto min_site = [](const FlowGraph& g) {
        int best = g.n_sites;
        for (const auto& e : g.edges) best = std::min({best, e.from, e.to});
        return best;
    };
    CHECK(min_site(comps[0]) < min_site(comps[1]));
    CHECK(comps[0].edges.size() + comps[1].edges.size() == fz.edges.size());
}

TEST_CASE("conservation violations are rejected") {
    TorusLattice lat = build_lattice(4, 4, 3);
    Rng rng(31, 0);
    PauliError p = random_error(lat, rng, 0.4);
    auto [fz, fx] = error_to_flows(p, lat);
    REQUIRE_FALSE(fz.edges.empty());
    FlowGraph bad = fz;
    bad.edges[0].weight = bad.edges[0].weight == 1 ? 2 : 1;
    CHECK_THROWS_AS(decompose(bad, lat), validation_error);
}

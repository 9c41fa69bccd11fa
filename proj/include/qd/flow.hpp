#pragma once
#include <utility>
#include <vector>

#include "qd/lattice.hpp"

namespace qd {

// Anyon worldline graph of one sector of an error. Nodes are lattice sites
// (vertices for the chargeon sector, plaquettes for the fluxon sector); each
// edge records the qudit it traverses. Edges are kept in the canonical
// orientation minus-site -> plus-site of the lattice sign convention, so an
// exponent k on qudit q is the edge (site_minus(q) -> site_plus(q), weight k);
// the equivalent reversed edge would carry weight d-k. Net inflow at a node
// equals its terminal charge (the syndrome), and is 0 at non-terminal nodes.
struct FlowEdge {
    int from = 0;
    int to = 0;
    int qudit = 0;
    int weight = 0;  // 1..d-1
};

struct FlowGraph {
    Sector sector = Sector::chargeon;
    int d = 2;
    int n_sites = 0;
    std::vector<FlowEdge> edges;
    std::vector<int> terminal;  // per-site charge, 0 where conserved
};

// Closed weighted walk: qudits[i] is traversed from sites[i] to
// sites[(i+1) % L], with dirs[i] = +1 when that traversal runs minus -> plus.
// The walk drags one anyon of type `weight` around; wind_x / wind_y count how
// many times it wraps the torus.
struct Cycle {
    std::vector<int> sites;
    std::vector<int> qudits;
    std::vector<int> dirs;
    int weight = 0;
    int wind_x = 0, wind_y = 0;
    bool contractible() const { return wind_x == 0 && wind_y == 0; }
};

// Acyclic connected remainder after peeling: per-edge weights plus the
// terminal charges its leaves (and possibly internal sites) carry.
struct Tree {
    std::vector<FlowEdge> edges;
    std::vector<std::pair<int, int>> terminals;  // (site, charge), charge != 0
};

// Worldline of one anyon of a simple tree: walk from its end position (leaf)
// to the tree root.
struct TreeString {
    int leaf = 0;
    int charge = 0;           // 1..d-1
    std::vector<int> sites;   // leaf = sites[0], ..., root = sites.back()
    std::vector<int> qudits;  // qudits[i] from sites[i] to sites[i+1]
    std::vector<int> dirs;
};

// Pruned unit: strings fused at a common root. For groups split off at an
// interior junction the root carries no charge and the string charges sum to
// 0 mod d; for the final group the root is a terminal and root_charge closes
// the sum.
struct SimpleTree {
    int root = 0;
    int root_charge = 0;
    std::vector<TreeString> strings;
};

struct Decomposition {
    Sector sector = Sector::chargeon;
    int d = 2;
    std::vector<Cycle> cycles;    // contractible
    std::vector<Cycle> harmonic;  // non-contractible
    std::vector<Tree> trees;
};

std::pair<FlowGraph, FlowGraph> error_to_flows(const PauliError& p, const TorusLattice& lat);

// partition by node connectivity, ordered by smallest contained site
std::vector<FlowGraph> connected_components(const FlowGraph& f);

// Peel cycles greedily (shortest cycle first; ties broken by smallest base
// qudit and lexicographic BFS path), classify them by winding number, then
// split the acyclic remainder into trees. Throws validation_error if f
// violates flow conservation.
Decomposition decompose(const FlowGraph& f, const TorusLattice& lat);

// Fuse, per qudit, any subset of crossing cycles whose canonical weights sum
// to 0 mod d (smallest-cardinality witness first) and re-peel the fused flow,
// which by construction avoids that qudit. At the fixed point every qudit
// lies on at most d-1 cycles; the per-qudit weight superposition is
// unchanged.
Decomposition merge_loops(const Decomposition& dec, const TorusLattice& lat);

// Fatten the tree (one string per terminal, running to the root along tree
// edges), then visit sites in post-order and split off zero-sum groups of
// strings as separate simple trees rooted at the junction. Throws
// validation_error if the terminal charges do not sum to 0 mod d.
std::vector<SimpleTree> prune_tree(const Tree& t, int d);

// per-qudit exponent contributions mod d, for recomposition checks
void superpose_cycle(std::vector<int>& acc, const Cycle& c, int d);
void superpose_tree(std::vector<int>& acc, const Tree& t, int d);
void superpose_simple_tree(std::vector<int>& acc, const SimpleTree& st, int d);

}  // namespace qd

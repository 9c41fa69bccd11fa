#include "qd/flow.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qd/errors.hpp"
#include "qd/multiset.hpp"

namespace qd {

namespace {

struct Dsu {
    std::vector<int> p;
    explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int a) { return p[a] == a ? a : p[a] = find(p[a]); }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (b < a) std::swap(a, b);
        p[b] = a;  // smaller site index stays the representative
        return true;
    }
};

std::vector<int> edge_net_inflow(const FlowGraph& f) {
    std::vector<int> net(f.n_sites, 0);
    for (const auto& e : f.edges) {
        net[e.to] = mod_d(net[e.to] + e.weight, f.d);
        net[e.from] = mod_d(net[e.from] - e.weight, f.d);
    }
    return net;
}

// Fold edges (either orientation) onto per-qudit weights in the canonical
// minus -> plus direction.
std::vector<int> canonical_weights(const FlowGraph& f, const TorusLattice& lat) {
    std::vector<int> w(lat.n_qudits(), 0);
    for (const auto& e : f.edges) {
        if (e.qudit < 0 || e.qudit >= lat.n_qudits())
            throw validation_error("flow edge qudit out of range");
        if (e.weight <= 0 || e.weight >= f.d)
            throw validation_error("flow edge weight out of range");
        int mi = lat.site_minus(e.qudit, f.sector);
        int pl = lat.site_plus(e.qudit, f.sector);
        if (e.from == mi && e.to == pl)
            w[e.qudit] = mod_d(w[e.qudit] + e.weight, f.d);
        else if (e.from == pl && e.to == mi)
            w[e.qudit] = mod_d(w[e.qudit] - e.weight, f.d);
        else
            throw validation_error("flow edge endpoints do not match its qudit");
    }
    return w;
}

struct WalkStep {
    int q = 0;
    int dir = 0;
    int to_site = 0;
};

// Peel cycles off per-qudit canonical weights until the support is a forest.
// Shortest cycle first; ties resolved by smallest base qudit and by BFS that
// expands neighbors in ascending qudit order. Each peel subtracts the
// minimum effective weight along the walk, which zeroes at least one qudit.
std::vector<Cycle> peel_cycles(std::vector<int>& w, const TorusLattice& lat, Sector sec) {
    const int d = lat.d();
    const int n_sites = lat.n_sites(sec);
    std::vector<Cycle> out;

    while (true) {
        std::vector<int> sup;
        for (int q = 0; q < lat.n_qudits(); ++q)
            if (w[q] != 0) sup.push_back(q);
        if (sup.empty()) break;

        std::vector<std::vector<std::pair<int, int>>> adj(n_sites);  // (qudit, other)
        for (int q : sup) {
            int mi = lat.site_minus(q, sec), pl = lat.site_plus(q, sec);
            adj[mi].push_back({q, pl});
            adj[pl].push_back({q, mi});
        }

        int best_len = -1, best_base = -1;
        std::vector<WalkStep> best_path;
        for (int base : sup) {
            int from = lat.site_minus(base, sec), to = lat.site_plus(base, sec);
            std::vector<int> dist(n_sites, -1);
            std::vector<std::pair<int, int>> par(n_sites, {-1, -1});  // (prev site, qudit)
            std::deque<int> bfs{to};
            dist[to] = 0;
            while (!bfs.empty() && dist[from] < 0) {
                int u = bfs.front();
                bfs.pop_front();
                for (auto [q, v] : adj[u]) {
                    if (q == base || dist[v] >= 0) continue;
                    dist[v] = dist[u] + 1;
                    par[v] = {u, q};
                    bfs.push_back(v);
                }
            }
            if (dist[from] < 0) continue;  // bridge, ends up in a tree
            int len = dist[from] + 1;
            if (best_len < 0 || len < best_len) {
                best_len = len;
                best_base = base;
                best_path.clear();
                for (int v = from; v != to;) {
                    auto [u, q] = par[v];
                    best_path.push_back({q, 0, v});
                    v = u;
                }
                std::reverse(best_path.begin(), best_path.end());
            }
            if (best_len == 2) break;  // parallel edge, cannot do better
        }
        if (best_len < 0) break;  // forest

        std::vector<WalkStep> walk;
        walk.push_back({best_base, 0, lat.site_plus(best_base, sec)});
        walk.insert(walk.end(), best_path.begin(), best_path.end());
        const int start = lat.site_minus(best_base, sec);
        int cur = start;
        int m = -1;
        for (auto& s : walk) {
            s.dir = (cur == lat.site_minus(s.q, sec)) ? +1 : -1;
            int eff = s.dir > 0 ? w[s.q] : d - w[s.q];
            if (m < 0 || eff < m) m = eff;
            cur = s.to_site;
        }
        if (cur != start) throw std::logic_error("cycle walk does not close");

        Cycle c;
        c.weight = m;
        int dx = 0, dy = 0;
        cur = start;
        for (const auto& s : walk) {
            c.sites.push_back(cur);
            c.qudits.push_back(s.q);
            c.dirs.push_back(s.dir);
            auto [sx, sy] = lat.flow_step(s.q, sec);
            dx += s.dir * sx;
            dy += s.dir * sy;
            w[s.q] = mod_d(w[s.q] - s.dir * m, d);
            cur = s.to_site;
        }
        if (dx % lat.lx() != 0 || dy % lat.ly() != 0)
            throw std::logic_error("cycle winding is not an integer");
        c.wind_x = dx / lat.lx();
        c.wind_y = dy / lat.ly();
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Tree> residual_trees(const std::vector<int>& w, const TorusLattice& lat, Sector sec) {
    const int d = lat.d();
    const int n_sites = lat.n_sites(sec);
    Dsu dsu(n_sites);
    std::vector<int> net(n_sites, 0);
    for (int q = 0; q < lat.n_qudits(); ++q) {
        if (w[q] == 0) continue;
        int mi = lat.site_minus(q, sec), pl = lat.site_plus(q, sec);
        if (!dsu.unite(mi, pl)) throw std::logic_error("residual flow is not a forest");
        net[pl] = mod_d(net[pl] + w[q], d);
        net[mi] = mod_d(net[mi] - w[q], d);
    }
    std::map<int, Tree> comps;
    for (int q = 0; q < lat.n_qudits(); ++q) {
        if (w[q] == 0) continue;
        int mi = lat.site_minus(q, sec), pl = lat.site_plus(q, sec);
        comps[dsu.find(mi)].edges.push_back({mi, pl, q, w[q]});
    }
    for (int s = 0; s < n_sites; ++s) {
        if (net[s] == 0) continue;
        auto it = comps.find(dsu.find(s));
        if (it == comps.end()) throw std::logic_error("charged site outside every tree");
        it->second.terminals.push_back({s, net[s]});
    }
    std::vector<Tree> out;
    out.reserve(comps.size());
    for (auto& [root, t] : comps) out.push_back(std::move(t));
    return out;
}

}  // namespace

std::pair<FlowGraph, FlowGraph> error_to_flows(const PauliError& p, const TorusLattice& lat) {
    if (p.d() != lat.d()) throw validation_error("error dimension does not match lattice");
    if (static_cast<int>(p.n_qudits()) != lat.n_qudits())
        throw validation_error("error length does not match lattice");
    auto build = [&](const DitVector& v, Sector sec) {
        FlowGraph g;
        g.sector = sec;
        g.d = lat.d();
        g.n_sites = lat.n_sites(sec);
        g.terminal.assign(g.n_sites, 0);
        for (int q = 0; q < lat.n_qudits(); ++q) {
            int wq = v[q];
            if (wq == 0) continue;
            int mi = lat.site_minus(q, sec), pl = lat.site_plus(q, sec);
            g.edges.push_back({mi, pl, q, wq});
            g.terminal[pl] = mod_d(g.terminal[pl] + wq, g.d);
            g.terminal[mi] = mod_d(g.terminal[mi] - wq, g.d);
        }
        return g;
    };
    return {build(p.z, Sector::chargeon), build(p.x, Sector::fluxon)};
}

std::vector<FlowGraph> connected_components(const FlowGraph& f) {
    if (static_cast<int>(f.terminal.size()) != f.n_sites)
        throw validation_error("flow terminal vector has wrong size");
    Dsu dsu(f.n_sites);
    for (const auto& e : f.edges) dsu.unite(e.from, e.to);
    std::map<int, FlowGraph> comps;
    auto at = [&](int root) -> FlowGraph& {
        auto it = comps.find(root);
        if (it == comps.end()) {
            FlowGraph g;
            g.sector = f.sector;
            g.d = f.d;
            g.n_sites = f.n_sites;
            g.terminal.assign(f.n_sites, 0);
            it = comps.emplace(root, std::move(g)).first;
        }
        return it->second;
    };
    for (const auto& e : f.edges) at(dsu.find(e.from)).edges.push_back(e);
    for (int s = 0; s < f.n_sites; ++s)
        if (f.terminal[s] != 0) at(dsu.find(s)).terminal[s] = f.terminal[s];
    std::vector<FlowGraph> out;
    out.reserve(comps.size());
    for (auto& [root, g] : comps) out.push_back(std::move(g));
    return out;
}

Decomposition decompose(const FlowGraph& f, const TorusLattice& lat) {
    if (f.d != lat.d()) throw validation_error("flow dimension does not match lattice");
    if (f.n_sites != lat.n_sites(f.sector))
        throw validation_error("flow site count does not match lattice");
    if (static_cast<int>(f.terminal.size()) != f.n_sites)
        throw validation_error("flow terminal vector has wrong size");
    for (int s = 0; s < f.n_sites; ++s)
        if (f.terminal[s] < 0 || f.terminal[s] >= f.d)
            throw validation_error("flow terminal charge out of range");
    auto net = edge_net_inflow(f);
    for (int s = 0; s < f.n_sites; ++s)
        if (f.terminal[s] != net[s])
            throw validation_error("flow conservation violated at site " + std::to_string(s));

    auto w = canonical_weights(f, lat);
    Decomposition dec;
    dec.sector = f.sector;
    dec.d = f.d;
    for (auto& c : peel_cycles(w, lat, f.sector))
        (c.contractible() ? dec.cycles : dec.harmonic).push_back(std::move(c));
    dec.trees = residual_trees(w, lat, f.sector);
    return dec;
}

Decomposition merge_loops(const Decomposition& dec, const TorusLattice& lat) {
    const int d = dec.d;
    if (d != lat.d()) throw validation_error("decomposition dimension does not match lattice");

    std::vector<Cycle> pool = dec.cycles;
    pool.insert(pool.end(), dec.harmonic.begin(), dec.harmonic.end());
    std::vector<char> alive(pool.size(), 1);

    std::deque<int> queue;
    std::vector<char> queued(lat.n_qudits(), 0);
    auto enqueue = [&](int q) {
        if (!queued[q]) {
            queued[q] = 1;
            queue.push_back(q);
        }
    };
    {
        std::vector<char> present(lat.n_qudits(), 0);
        for (const auto& c : pool)
            for (int q : c.qudits) present[q] = 1;
        for (int q = 0; q < lat.n_qudits(); ++q)
            if (present[q]) enqueue(q);
    }

    // Termination of the whole fixed-point loop has no known proof, so cap
    // the number of fusions generously and fail loudly if the cap is hit.
    long long fusions = 0;
    const long long guard = 256 + 8LL * lat.n_qudits() * d;
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        queued[q] = 0;

        std::vector<int> idxs, contribs;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (!alive[i]) continue;
            for (std::size_t j = 0; j < pool[i].qudits.size(); ++j) {
                if (pool[i].qudits[j] == q) {
                    idxs.push_back(static_cast<int>(i));
                    contribs.push_back(mod_d(pool[i].dirs[j] * pool[i].weight, d));
                    break;  // a peeled cycle never repeats a qudit
                }
            }
        }
        if (idxs.size() < 2) continue;
        auto wit = find_zero_sum_subset(Multiset(d, contribs));
        if (!wit) continue;
        if (++fusions > guard) throw std::logic_error("merge_loops failed to reach a fixed point");

        std::vector<int> need = wit->counts;
        std::vector<int> acc(lat.n_qudits(), 0);
        for (std::size_t k = 0; k < idxs.size(); ++k) {
            if (need[contribs[k]] == 0) continue;
            --need[contribs[k]];
            superpose_cycle(acc, pool[idxs[k]], d);
            alive[idxs[k]] = 0;
        }
        if (acc[q] != 0) throw std::logic_error("fused loops still cross the pivot qudit");
        auto fresh = peel_cycles(acc, lat, dec.sector);
        for (int r : acc)
            if (r != 0) throw std::logic_error("fused loop flow left a nonzero remainder");
        for (auto& c : fresh) {
            for (int fq : c.qudits) enqueue(fq);
            pool.push_back(std::move(c));
            alive.push_back(1);
        }
        // The survivors at q may still hold another zero-sum subset (the fresh
        // cycles avoid q, so only a revisit can catch it).
        enqueue(q);
    }

    Decomposition out;
    out.sector = dec.sector;
    out.d = d;
    out.trees = dec.trees;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (!alive[i]) continue;
        (pool[i].contractible() ? out.cycles : out.harmonic).push_back(pool[i]);
    }

    for (int q = 0; q < lat.n_qudits(); ++q) {
        std::vector<int> contribs;
        auto scan = [&](const std::vector<Cycle>& cs) {
            for (const auto& c : cs)
                for (std::size_t j = 0; j < c.qudits.size(); ++j)
                    if (c.qudits[j] == q) contribs.push_back(mod_d(c.dirs[j] * c.weight, d));
        };
        scan(out.cycles);
        scan(out.harmonic);
        if (!contribs.empty() && !is_zero_sum_free(Multiset(d, contribs)))
            throw std::logic_error("merge_loops fixed point violated");
    }
    return out;
}

std::vector<SimpleTree> prune_tree(const Tree& t, int d) {
    if (d < 2) throw validation_error("d must be at least 2");
    if (t.edges.empty()) {
        if (!t.terminals.empty()) throw validation_error("charged tree with no edges");
        return {};
    }

    std::vector<int> sites;
    for (const auto& e : t.edges) {
        sites.push_back(e.from);
        sites.push_back(e.to);
    }
    for (const auto& [s, c] : t.terminals) sites.push_back(s);
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    const int n = static_cast<int>(sites.size());
    auto local = [&](int s) {
        auto it = std::lower_bound(sites.begin(), sites.end(), s);
        return static_cast<int>(it - sites.begin());
    };

    Dsu dsu(n);
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (edge idx, other)
    for (std::size_t i = 0; i < t.edges.size(); ++i) {
        const auto& e = t.edges[i];
        if (e.weight <= 0 || e.weight >= d) throw validation_error("tree edge weight out of range");
        int a = local(e.from), b = local(e.to);
        if (a == b || !dsu.unite(a, b)) throw validation_error("tree edges contain a cycle");
        adj[a].push_back({static_cast<int>(i), b});
        adj[b].push_back({static_cast<int>(i), a});
    }
    if (static_cast<int>(t.edges.size()) != n - 1) throw validation_error("tree is not connected");

    std::vector<int> net(n, 0);
    for (const auto& e : t.edges) {
        net[local(e.to)] = mod_d(net[local(e.to)] + e.weight, d);
        net[local(e.from)] = mod_d(net[local(e.from)] - e.weight, d);
    }
    std::vector<int> charge(n, 0);
    long long total = 0;
    for (const auto& [s, c] : t.terminals) {
        if (c <= 0 || c >= d) throw validation_error("terminal charge out of range");
        charge[local(s)] = c;
        total += c;
    }
    if (mod_d(total, d) != 0) throw validation_error("tree charges do not sum to zero mod d");
    if (charge != net) throw validation_error("tree terminals do not match the edge flow");

    int root = -1;
    for (int i = 0; i < n && root < 0; ++i)
        if (charge[i] != 0) root = i;
    if (root < 0) throw std::logic_error("tree with edges but no charge");

    std::vector<int> par_site(n, -1), par_edge(n, -1), order;
    std::vector<char> seen(n, 0);
    std::vector<int> stack{root};
    seen[root] = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        order.push_back(u);
        for (auto [ei, v] : adj[u]) {
            if (seen[v]) continue;
            seen[v] = 1;
            par_site[v] = u;
            par_edge[v] = ei;
            stack.push_back(v);
        }
    }

    // fatten: one string per charged site, walking to the root
    struct SInfo {
        TreeString ts;
        std::vector<char> on_path;
        bool active = true;
    };
    std::vector<SInfo> strs;
    for (int i = 0; i < n; ++i) {
        if (i == root || charge[i] == 0) continue;
        SInfo si;
        si.ts.leaf = sites[i];
        si.ts.charge = charge[i];
        si.on_path.assign(n, 0);
        int v = i;
        si.on_path[v] = 1;
        si.ts.sites.push_back(sites[v]);
        while (v != root) {
            const auto& ed = t.edges[par_edge[v]];
            si.ts.qudits.push_back(ed.qudit);
            si.ts.dirs.push_back(sites[v] == ed.from ? +1 : -1);
            v = par_site[v];
            si.on_path[v] = 1;
            si.ts.sites.push_back(sites[v]);
        }
        strs.push_back(std::move(si));
    }

    // Visit every vertex after its whole subtree (reverse preorder) and split
    // off zero-sum groups of the strings running through it. Extracted groups
    // stay rooted at the junction, so each string is only ever truncated.
    std::vector<SimpleTree> out;
    for (int oi = static_cast<int>(order.size()) - 1; oi >= 0; --oi) {
        int u = order[oi];
        while (true) {
            std::vector<int> cand, charges;
            for (std::size_t k = 0; k < strs.size(); ++k) {
                if (strs[k].active && strs[k].on_path[u]) {
                    cand.push_back(static_cast<int>(k));
                    charges.push_back(strs[k].ts.charge);
                }
            }
            if (cand.size() < 2) break;
            auto wit = find_zero_sum_subset(Multiset(d, charges));
            if (!wit) break;
            SimpleTree st;
            st.root = sites[u];
            st.root_charge = 0;
            std::vector<int> need = wit->counts;
            for (std::size_t k = 0; k < cand.size(); ++k) {
                if (need[charges[k]] == 0) continue;
                --need[charges[k]];
                auto& si = strs[cand[k]];
                si.active = false;
                TreeString ts = si.ts;
                std::size_t pos = 0;
                while (ts.sites[pos] != sites[u]) ++pos;
                ts.sites.resize(pos + 1);
                ts.qudits.resize(pos);
                ts.dirs.resize(pos);
                st.strings.push_back(std::move(ts));
            }
            out.push_back(std::move(st));
        }
    }

    SimpleTree last;
    last.root = sites[root];
    last.root_charge = charge[root];
    long long rem = charge[root];
    for (auto& si : strs) {
        if (!si.active) continue;
        rem += si.ts.charge;
        last.strings.push_back(si.ts);
    }
    if (mod_d(rem, d) != 0) throw std::logic_error("final simple tree is not neutral");
    out.push_back(std::move(last));
    return out;
}

void superpose_cycle(std::vector<int>& acc, const Cycle& c, int d) {
    for (std::size_t i = 0; i < c.qudits.size(); ++i)
        acc[c.qudits[i]] = mod_d(acc[c.qudits[i]] + c.dirs[i] * c.weight, d);
}

void superpose_tree(std::vector<int>& acc, const Tree& t, int d) {
    for (const auto& e : t.edges) acc[e.qudit] = mod_d(acc[e.qudit] + e.weight, d);
}

void superpose_simple_tree(std::vector<int>& acc, const SimpleTree& st, int d) {
    for (const auto& s : st.strings)
        for (std::size_t i = 0; i < s.qudits.size(); ++i)
            acc[s.qudits[i]] = mod_d(acc[s.qudits[i]] - s.dirs[i] * s.charge, d);
}

}  // namespace qd

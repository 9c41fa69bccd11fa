#include "qd/barrier.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

#include "qd/errors.hpp"
#include "qd/fixtures.hpp"
#include "qd/flow.hpp"

namespace qd {

namespace {

void check_shapes(const TorusLattice& lat, const MassTable& m) {
    if (m.d != lat.d() || static_cast<int>(m.vertex.size()) != lat.n_vertices() ||
        static_cast<int>(m.plaquette.size()) != lat.n_plaquettes())
        throw validation_error("mass table does not match lattice shape");
}

// Incremental profile evaluation. The additional energy is recomputed each
// step as a fresh sum over the currently paying sites (nonzero charge that
// differs from the final charge), so there is no floating-point drift and
// the result is the exact sum of masses regardless of path length.
std::vector<double> profile_of(const std::vector<SingleQuditStep>& steps,
                               const PauliError& target, const TorusLattice& lat,
                               const MassTable& m) {
    const int n = lat.n_vertices();
    const Syndrome fin = lat.syndrome(target);
    Syndrome cur{DitVector(lat.d(), n), DitVector(lat.d(), n)};
    std::vector<int> paying;  // sorted keys: vertex v, plaquette n + p

    auto set_paying = [&paying](int key, bool on) {
        auto it = std::lower_bound(paying.begin(), paying.end(), key);
        bool present = it != paying.end() && *it == key;
        if (on && !present)
            paying.insert(it, key);
        else if (!on && present)
            paying.erase(it);
    };
    auto touch_vertex = [&](int v, int delta) {
        cur.a.add(v, delta);
        set_paying(v, cur.a[v] != 0 && cur.a[v] != fin.a[v]);
    };
    auto touch_plaq = [&](int p, int delta) {
        cur.b.add(p, delta);
        set_paying(n + p, cur.b[p] != 0 && cur.b[p] != fin.b[p]);
    };

    std::vector<double> prof;
    prof.reserve(steps.size());
    for (const auto& s : steps) {
        if (s.z_exp) {
            touch_vertex(lat.site_plus(s.qudit, Sector::chargeon), s.z_exp);
            touch_vertex(lat.site_minus(s.qudit, Sector::chargeon), -s.z_exp);
        }
        if (s.x_exp) {
            touch_plaq(lat.site_plus(s.qudit, Sector::fluxon), s.x_exp);
            touch_plaq(lat.site_minus(s.qudit, Sector::fluxon), -s.x_exp);
        }
        double cost = 0;
        for (int key : paying)
            cost += key < n ? m.vertex[key][cur.a[key]] : m.plaquette[key - n][cur.b[key - n]];
        prof.push_back(cost);
    }
    return prof;
}

void emit_cycle(std::vector<SingleQuditStep>& steps, const Cycle& c, Sector sec, int d) {
    for (std::size_t i = 0; i < c.qudits.size(); ++i) {
        int e = mod_d(c.dirs[i] * c.weight, d);
        if (sec == Sector::chargeon)
            steps.push_back({c.qudits[i], e, 0});
        else
            steps.push_back({c.qudits[i], 0, e});
    }
}

// One step per qudit of the leaf-to-root walk. Leaving site a over qudit q
// applies exponent +k when a is the plus end of q and -k otherwise, which
// parks the string's charge at the leaf on the first step and then walks the
// conjugate anyon toward the root.
void emit_string(std::vector<SingleQuditStep>& steps, const TreeString& s, Sector sec, int d) {
    for (std::size_t i = 0; i < s.qudits.size(); ++i) {
        int e = s.dirs[i] > 0 ? mod_d(-s.charge, d) : s.charge;
        if (sec == Sector::chargeon)
            steps.push_back({s.qudits[i], e, 0});
        else
            steps.push_back({s.qudits[i], 0, e});
    }
}

void emit_sector(std::vector<SingleQuditStep>& steps, const FlowGraph& f,
                 const TorusLattice& lat) {
    Decomposition dec = merge_loops(decompose(f, lat), lat);
    for (const auto& c : dec.cycles) emit_cycle(steps, c, f.sector, f.d);
    for (const auto& c : dec.harmonic) emit_cycle(steps, c, f.sector, f.d);
    for (const auto& t : dec.trees)
        for (const auto& st : prune_tree(t, f.d))
            for (const auto& s : st.strings) emit_string(steps, s, f.sector, f.d);
}

}  // namespace

double additional_energy(const Syndrome& inter, const Syndrome& fin, const MassTable& m) {
    if (inter.a.size() != fin.a.size() || inter.b.size() != fin.b.size() ||
        inter.a.size() != m.vertex.size() || inter.b.size() != m.plaquette.size())
        throw validation_error("syndrome shapes do not match");
    double total = 0;
    for (std::size_t v = 0; v < inter.a.size(); ++v) {
        int c = inter.a[v];
        if (c != 0 && c != fin.a[v]) total += m.vertex[v][c];
    }
    for (std::size_t p = 0; p < inter.b.size(); ++p) {
        int c = inter.b[p];
        if (c != 0 && c != fin.b[p]) total += m.plaquette[p][c];
    }
    return total;
}

LocalErrorsPath schedule_path(const PauliError& p, const TorusLattice& lat, const MassTable& m) {
    check_shapes(lat, m);
    LocalErrorsPath path;
    path.target = p;
    auto [fz, fx] = error_to_flows(p, lat);
    emit_sector(path.steps, fz, lat);
    emit_sector(path.steps, fx, lat);
    path.profile = profile_of(path.steps, path.target, lat, m);
    return path;
}

double path_barrier(const LocalErrorsPath& path, const TorusLattice& lat, const MassTable& m) {
    check_shapes(lat, m);
    auto prof = profile_of(path.steps, path.target, lat, m);
    double best = 0;
    for (double v : prof) best = std::max(best, v);
    return best;
}

void validate_path(const LocalErrorsPath& path, const TorusLattice& lat) {
    const int d = lat.d();
    if (path.target.d() != d || static_cast<int>(path.target.n_qudits()) != lat.n_qudits())
        throw validation_error("path target does not match lattice shape");
    PauliError acc = lat.identity();
    for (const auto& s : path.steps) {
        if (s.qudit < 0 || s.qudit >= lat.n_qudits())
            throw validation_error("path step qudit out of range");
        if (s.z_exp < 0 || s.z_exp >= d || s.x_exp < 0 || s.x_exp >= d)
            throw validation_error("path step exponent out of range");
        if (s.z_exp == 0 && s.x_exp == 0)
            throw validation_error("path step is the identity");
        acc.z.add(s.qudit, s.z_exp);
        acc.x.add(s.qudit, s.x_exp);
    }
    if (acc != path.target) throw validation_error("path does not compose to its target");
    if (path.profile.size() != path.steps.size() && !path.profile.empty())
        throw validation_error("path profile length does not match its steps");
}

double brute_force_barrier(const PauliError& p, const TorusLattice& lat, const MassTable& m,
                           int support_cap) {
    check_shapes(lat, m);
    if (p.d() != lat.d() || static_cast<int>(p.n_qudits()) != lat.n_qudits())
        throw validation_error("error does not match lattice shape");
    if (p.is_identity()) return 0;

    const int d = lat.d();
    std::vector<int> supp = support(p);
    if (static_cast<int>(supp.size()) > support_cap)
        throw validation_error("support cap smaller than the error's support");

    // dilate by qudit adjacency, whole layers while they fit, then a partial
    // layer in ascending order up to the cap
    std::vector<char> in_s(lat.n_qudits(), 0);
    for (int q : supp) in_s[q] = 1;
    std::vector<int> s_set = supp;
    while (static_cast<int>(s_set.size()) < support_cap) {
        std::vector<int> layer;
        for (int q : s_set)
            for (int nb : lat.qudit_neighbors(q))
                if (!in_s[nb]) {
                    in_s[nb] = 1;  // mark immediately; sorted below
                    layer.push_back(nb);
                }
        if (layer.empty()) break;
        std::sort(layer.begin(), layer.end());
        if (static_cast<int>(s_set.size() + layer.size()) > support_cap) {
            int room = support_cap - static_cast<int>(s_set.size());
            for (std::size_t i = room; i < layer.size(); ++i) in_s[layer[i]] = 0;
            layer.resize(room);
        }
        s_set.insert(s_set.end(), layer.begin(), layer.end());
    }
    std::sort(s_set.begin(), s_set.end());
    const int ns = static_cast<int>(s_set.size());

    const long long dd = static_cast<long long>(d) * d;
    long long n_states = 1;
    for (int i = 0; i < ns; ++i) {
        n_states *= dd;
        if (n_states > 10'000'000) throw size_error("bottleneck search state space exceeds 10^7");
    }

    // sites whose charge any in-support error can touch
    std::vector<int> av, bp;
    for (int q : s_set) {
        av.push_back(lat.site_plus(q, Sector::chargeon));
        av.push_back(lat.site_minus(q, Sector::chargeon));
        bp.push_back(lat.site_plus(q, Sector::fluxon));
        bp.push_back(lat.site_minus(q, Sector::fluxon));
    }
    std::sort(av.begin(), av.end());
    av.erase(std::unique(av.begin(), av.end()), av.end());
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

    const int n_v = lat.n_vertices(), n_p = lat.n_plaquettes();
    std::vector<int> vp(ns), vm(ns), pp(ns), pm(ns);
    for (int i = 0; i < ns; ++i) {
        vp[i] = lat.site_plus(s_set[i], Sector::chargeon);
        vm[i] = lat.site_minus(s_set[i], Sector::chargeon);
        pp[i] = lat.site_plus(s_set[i], Sector::fluxon);
        pm[i] = lat.site_minus(s_set[i], Sector::fluxon);
    }
    std::vector<double> mv(static_cast<std::size_t>(n_v) * d), mp(static_cast<std::size_t>(n_p) * d);
    for (int v = 0; v < n_v; ++v)
        for (int c = 0; c < d; ++c) mv[static_cast<std::size_t>(v) * d + c] = m.vertex[v][c];
    for (int pq = 0; pq < n_p; ++pq)
        for (int c = 0; c < d; ++c) mp[static_cast<std::size_t>(pq) * d + c] = m.plaquette[pq][c];

    std::vector<int> fa(n_v), fb(n_p);
    {
        const Syndrome fin = lat.syndrome(p);
        for (int v = 0; v < n_v; ++v) fa[v] = fin.a[v];
        for (int pq = 0; pq < n_p; ++pq) fb[pq] = fin.b[pq];
    }

    std::vector<long long> pow(ns + 1, 1);
    for (int i = 0; i < ns; ++i) pow[i + 1] = pow[i] * dd;

    // per-state additional energy, quantized to the sorted distinct values,
    // plus the per-qudit digits for division-free neighbor enumeration
    std::unique_ptr<double[]> cost(new double[n_states]);
    // ns >= 2 keeps dd <= sqrt(10^7) by the state guard, so uint16 is enough
    std::unique_ptr<uint16_t[]> digits(ns > 1 ? new uint16_t[static_cast<std::size_t>(n_states) * ns]
                                              : nullptr);
    std::vector<double> values;
    values.reserve(64);
    bool few_values = true;  // collect distinct costs inline while they stay few
    {
        std::vector<int> ca(n_v, 0), cb(n_p, 0);
        auto bump = [d](std::vector<int>& arr, int site, int delta) {
            int t = arr[site] + delta;
            if (t >= d) t -= d;
            else if (t < 0) t += d;
            arr[site] = t;
        };
        std::vector<int> digit(ns, 0);
        for (long long idx = 0; idx < n_states; ++idx) {
            if (idx > 0) {  // increment base d^2 counter, updating the charges
                int i = 0;
                while (true) {
                    int old = digit[i];
                    int nw = old + 1 == dd ? 0 : old + 1;
                    digit[i] = nw;
                    int dz = nw % d - old % d;
                    int dx = nw / d - old / d;
                    if (dz != 0) { bump(ca, vp[i], dz); bump(ca, vm[i], -dz); }
                    if (dx != 0) { bump(cb, pp[i], dx); bump(cb, pm[i], -dx); }
                    if (nw != 0) break;
                    ++i;
                }
            }
            double c = 0;
            for (int v : av)
                if (ca[v] != 0 && ca[v] != fa[v]) c += mv[static_cast<std::size_t>(v) * d + ca[v]];
            for (int pq : bp)
                if (cb[pq] != 0 && cb[pq] != fb[pq]) c += mp[static_cast<std::size_t>(pq) * d + cb[pq]];
            cost[idx] = c;
            if (few_values) {
                auto it = std::lower_bound(values.begin(), values.end(), c);
                if (it == values.end() || *it != c) {
                    values.insert(it, c);
                    if (values.size() > 1024) {
                        few_values = false;
                        values.clear();
                    }
                }
            }
            if (ns > 1)
                for (int i = 0; i < ns; ++i)
                    digits[static_cast<std::size_t>(idx) * ns + i] = static_cast<uint16_t>(digit[i]);
        }
    }
    if (!few_values) {
        values.assign(cost.get(), cost.get() + n_states);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
    }
    std::unique_ptr<uint32_t[]> rank(new uint32_t[n_states]);
    for (long long i = 0; i < n_states; ++i)
        rank[i] = static_cast<uint32_t>(
            std::lower_bound(values.begin(), values.end(), cost[i]) - values.begin());
    cost.reset();

    long long target_idx = 0;
    for (int i = 0; i < ns; ++i) target_idx += (p.z[s_set[i]] + static_cast<long long>(d) * p.x[s_set[i]]) * pow[i];

    // single qudit: all states mutually adjacent, so any path can go direct
    if (ns == 1) return values[std::max(rank[0], rank[target_idx])];

    const uint32_t start_rank = std::max(rank[0], rank[target_idx]);
    // upper bound from the one-qudit-at-a-time staircase path to the target
    uint32_t ub_r = start_rank;
    {
        long long idx = 0;
        for (int i = 0; i < ns; ++i) {
            idx += (p.z[s_set[i]] + static_cast<long long>(d) * p.x[s_set[i]]) * pow[i];
            ub_r = std::max(ub_r, rank[idx]);
        }
    }

    // Bottleneck by minimax Dijkstra from the identity with a bucket queue
    // over cost ranks. Keys only grow, so the first push of a state carries
    // its optimal key: mark on push, return as soon as the target is keyed,
    // and drop pushes above the staircase bound, which the optimum never
    // exceeds.
    std::vector<char> seen(n_states, 0);
    std::vector<std::vector<uint32_t>> bucket(ub_r + 1);
    bucket[start_rank].push_back(0);
    seen[0] = 1;
    for (uint32_t r = start_rank; r <= ub_r; ++r) {
        auto& q = bucket[r];
        while (!q.empty()) {
            uint32_t u = q.back();
            q.pop_back();
            const uint16_t* dig = &digits[static_cast<std::size_t>(u) * ns];
            for (int i = 0; i < ns; ++i) {
                long long base = u - static_cast<long long>(dig[i]) * pow[i];
                for (int nw = 0; nw < dd; ++nw) {
                    if (nw == dig[i]) continue;
                    long long v = base + nw * pow[i];
                    if (seen[v]) continue;
                    uint32_t rv = rank[v];
                    uint32_t key = rv > r ? rv : r;
                    if (key > ub_r) continue;
                    if (v == target_idx) return values[key];
                    seen[v] = 1;
                    bucket[key].push_back(static_cast<uint32_t>(v));
                }
            }
        }
    }
    throw std::logic_error("bottleneck search failed to reach the target");
}

PathLengthStats path_length_stats(const PauliError& p, const TorusLattice& lat,
                                  const MassTable& m) {
    PathLengthStats st;
    st.length = static_cast<long long>(schedule_path(p, lat, m).steps.size());
    st.bound = 8LL * (lat.d() - 1) * lat.n_vertices();
    return st;
}

double hamiltonian_barrier_estimate(const TorusLattice& lat, const MassTable& m, int samples,
                                    uint64_t seed) {
    if (samples < 1) throw validation_error("need at least one sample");
    check_shapes(lat, m);
    double best = 0;
    Rng fix_rng(seed, 0);
    for (const auto& p : adversarial_fixtures(lat, fix_rng)) {
        auto prof = schedule_path(p, lat, m).profile;
        for (double v : prof) best = std::max(best, v);
    }
    for (int i = 0; i < samples; ++i) {
        Rng rng(seed, 1 + static_cast<uint64_t>(i));
        double density = 0.15 + 0.8 * (i % 7) / 7.0;
        auto prof = schedule_path(random_error(lat, rng, density), lat, m).profile;
        for (double v : prof) best = std::max(best, v);
    }
    return best;
}

}  // namespace qd

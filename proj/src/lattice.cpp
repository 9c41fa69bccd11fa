#include "qd/lattice.hpp"

#include <algorithm>
#include <limits>

#include "qd/errors.hpp"

namespace qd {

TorusLattice::TorusLattice(int lx, int ly, int d) : lx_(lx), ly_(ly), d_(d) {
    if (lx < 2 || ly < 2) throw validation_error("torus must be at least 2x2 (smaller sizes make a star touch an edge twice)");
    if (d < 2) throw validation_error("qudit dimension must be >= 2");
    if ((long long)lx * ly > 1 << 20) throw size_error("lattice too large");
    const int n = lx_ * ly_;
    vplus_.resize(2 * n);
    vminus_.resize(2 * n);
    pplus_.resize(2 * n);
    pminus_.resize(2 * n);
    for (int y = 0; y < ly_; ++y) {
        for (int x = 0; x < lx_; ++x) {
            int h = edge_h(x, y);
            vplus_[h] = vertex_index(x, y);      // E leg of the west star
            vminus_[h] = vertex_index(x + 1, y); // W leg of the east star
            pplus_[h] = plaq_index(x, y - 1);    // N boundary of the south plaquette
            pminus_[h] = plaq_index(x, y);       // S boundary of the north plaquette
            int v = edge_v(x, y);
            vplus_[v] = vertex_index(x, y + 1);  // S leg of the north star
            vminus_[v] = vertex_index(x, y);     // N leg of the south star
            pplus_[v] = plaq_index(x - 1, y);    // E boundary of the west plaquette
            pminus_[v] = plaq_index(x, y);       // W boundary of the east plaquette
        }
    }
    // qudit adjacency: share a vertex star or a plaquette
    std::vector<std::vector<int>> by_vertex(n), by_plaq(n);
    for (int q = 0; q < 2 * n; ++q) {
        by_vertex[vplus_[q]].push_back(q);
        by_vertex[vminus_[q]].push_back(q);
        by_plaq[pplus_[q]].push_back(q);
        by_plaq[pminus_[q]].push_back(q);
    }
    neighbors_.resize(2 * n);
    for (int q = 0; q < 2 * n; ++q) {
        std::vector<int> nb;
        for (int v : {vplus_[q], vminus_[q]}) nb.insert(nb.end(), by_vertex[v].begin(), by_vertex[v].end());
        for (int p : {pplus_[q], pminus_[q]}) nb.insert(nb.end(), by_plaq[p].begin(), by_plaq[p].end());
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        nb.erase(std::remove(nb.begin(), nb.end(), q), nb.end());
        neighbors_[q] = std::move(nb);
    }
}

std::pair<int, int> TorusLattice::flow_step(int q, Sector sec) const {
    if (sec == Sector::chargeon)
        return is_horizontal(q) ? std::pair<int, int>{-1, 0}   // east vertex -> west vertex
                                : std::pair<int, int>{0, 1};   // south vertex -> north vertex
    return is_horizontal(q) ? std::pair<int, int>{0, -1}       // north plaquette -> south plaquette
                            : std::pair<int, int>{-1, 0};      // east plaquette -> west plaquette
}

PauliError TorusLattice::star(int v, int g) const {
    PauliError p = identity();
    auto [x, y] = site_xy(v);
    p.x.add(edge_h(x, y), g);
    p.x.add(edge_v(x, y - 1), g);
    p.x.add(edge_h(x - 1, y), -g);
    p.x.add(edge_v(x, y), -g);
    return p;
}

PauliError TorusLattice::plaquette_op(int pq, int g) const {
    PauliError p = identity();
    auto [x, y] = site_xy(pq);
    p.z.add(edge_v(x + 1, y), g);
    p.z.add(edge_h(x, y + 1), g);
    p.z.add(edge_h(x, y), -g);
    p.z.add(edge_v(x, y), -g);
    return p;
}

Syndrome TorusLattice::syndrome(const PauliError& p) const {
    if (p.d() != d_ || (int)p.n_qudits() != n_qudits()) throw validation_error("error does not match lattice shape");
    Syndrome s{DitVector(d_, n_vertices()), DitVector(d_, n_plaquettes())};
    for (int q = 0; q < n_qudits(); ++q) {
        if (p.z[q]) {
            s.a.add(vplus_[q], p.z[q]);
            s.a.add(vminus_[q], -int(p.z[q]));
        }
        if (p.x[q]) {
            s.b.add(pplus_[q], p.x[q]);
            s.b.add(pminus_[q], -int(p.x[q]));
        }
    }
    return s;
}

void TorusLattice::apply_step(Syndrome& s, int q, int z_exp, int x_exp) const {
    if (z_exp) {
        s.a.add(vplus_[q], z_exp);
        s.a.add(vminus_[q], -z_exp);
    }
    if (x_exp) {
        s.b.add(pplus_[q], x_exp);
        s.b.add(pminus_[q], -x_exp);
    }
}

std::array<int, 4> TorusLattice::logical_class(const PauliError& p) const {
    if (p.d() != d_ || (int)p.n_qudits() != n_qudits()) throw validation_error("error does not match lattice shape");
    long long wzh = 0, wzv = 0, wxh = 0, wxv = 0;
    for (int y = 0; y < ly_; ++y) {
        wzh += p.z[edge_h(0, y)];  // horizontal Z flow through the cut x = 1/2
        wxh += p.x[edge_v(0, y)];  // horizontal X flow through the dual cut
    }
    for (int x = 0; x < lx_; ++x) {
        wzv += p.z[edge_v(x, 0)];  // vertical Z flow through the cut y = 1/2
        wxv += p.x[edge_h(x, 0)];  // vertical X flow through the dual cut
    }
    return {mod_d(wzh, d_), mod_d(wzv, d_), mod_d(wxh, d_), mod_d(wxv, d_)};
}

TorusLattice build_lattice(int lx, int ly, int d) { return TorusLattice(lx, ly, d); }

double energy(const Syndrome& s, const MassTable& m) {
    if (s.a.d() != m.d) throw validation_error("syndrome and mass table disagree on d");
    if (s.a.size() != m.vertex.size() || s.b.size() != m.plaquette.size())
        throw validation_error("syndrome and mass table disagree on site count");
    double e = 0.0;
    for (std::size_t v = 0; v < s.a.size(); ++v) e += m.vertex[v][s.a[v]];
    for (std::size_t p = 0; p < s.b.size(); ++p) e += m.plaquette[p][s.b[p]];
    return e;
}

static double sector_pair_min(const std::vector<std::vector<double>>& rows, int d) {
    // min over sites s1 != s2 and k != 0 of J_{s1}^k + J_{s2}^{d-k}
    double best = std::numeric_limits<double>::infinity();
    for (int k = 1; k < d; ++k) {
        int kc = d - k;
        // two smallest J^k and J^{kc} over sites, tracking sites to enforce s1 != s2
        int a1 = -1, a2 = -1, b1 = -1, b2 = -1;
        for (int s = 0; s < (int)rows.size(); ++s) {
            if (a1 < 0 || rows[s][k] < rows[a1][k]) { a2 = a1; a1 = s; }
            else if (a2 < 0 || rows[s][k] < rows[a2][k]) a2 = s;
            if (b1 < 0 || rows[s][kc] < rows[b1][kc]) { b2 = b1; b1 = s; }
            else if (b2 < 0 || rows[s][kc] < rows[b2][kc]) b2 = s;
        }
        if (a1 != b1)
            best = std::min(best, rows[a1][k] + rows[b1][kc]);
        else {
            if (a2 >= 0) best = std::min(best, rows[a2][k] + rows[b1][kc]);
            if (b2 >= 0) best = std::min(best, rows[a1][k] + rows[b2][kc]);
        }
    }
    return best;
}

double hamiltonian_gap(const MassTable& m) {
    bool any = false;
    for (const auto& r : m.vertex)
        for (double j : r) any = any || j > 0.0;
    for (const auto& r : m.plaquette)
        for (double j : r) any = any || j > 0.0;
    if (!any) throw validation_error("degenerate Hamiltonian: all masses are zero");
    if (m.vertex.size() < 2 || m.plaquette.size() < 2) throw validation_error("need at least two sites per sector");
    return std::min(sector_pair_min(m.vertex, m.d), sector_pair_min(m.plaquette, m.d));
}

}  // namespace qd

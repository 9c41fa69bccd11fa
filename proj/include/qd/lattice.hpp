#pragma once
#include <array>
#include <utility>
#include <vector>

#include "qd/masses.hpp"
#include "qd/pauli.hpp"

namespace qd {

enum class Sector { chargeon, fluxon };

// Syndrome of an error: chargeon types a_v per vertex, fluxon types b_p per
// plaquette. Additive under composition; both sectors sum to 0 mod d on the
// torus.
struct Syndrome {
    DitVector a;
    DitVector b;

    bool is_zero() const { return a.is_zero() && b.is_zero(); }
    Syndrome plus(const Syndrome& o) const { return {a.plus(o.a), b.plus(o.b)}; }
    bool operator==(const Syndrome& o) const { return a == o.a && b == o.b; }
};

// L x L y torus with one qudit per edge. Vertices and plaquettes are indexed
// row-major; horizontal edges (eastward from their vertex) come first, then
// vertical edges (northward). Sign conventions follow
//   A(v) = X_E X_S Xdag_W Xdag_N,   B(p) = Z_E Zdag_S Zdag_W Z_N,
// so a_v adds z_j on the star's E/S legs and subtracts it on W/N, and b_p adds
// x_j on the plaquette's E/N boundary edges and subtracts it on S/W.
class TorusLattice {
  public:
    TorusLattice(int lx, int ly, int d);

    int lx() const { return lx_; }
    int ly() const { return ly_; }
    int d() const { return d_; }
    int n_vertices() const { return lx_ * ly_; }
    int n_plaquettes() const { return lx_ * ly_; }
    int n_qudits() const { return 2 * lx_ * ly_; }
    int n_sites(Sector) const { return lx_ * ly_; }

    int vertex_index(int x, int y) const { return wrap_y(y) * lx_ + wrap_x(x); }
    int plaq_index(int x, int y) const { return wrap_y(y) * lx_ + wrap_x(x); }
    int edge_h(int x, int y) const { return wrap_y(y) * lx_ + wrap_x(x); }
    int edge_v(int x, int y) const { return lx_ * ly_ + wrap_y(y) * lx_ + wrap_x(x); }
    bool is_horizontal(int q) const { return q < lx_ * ly_; }
    std::pair<int, int> site_xy(int s) const { return {s % lx_, (s % (lx_ * ly_)) / lx_}; }

    // Site with coefficient +1 (resp. -1) in the syndrome produced by a unit
    // exponent on qudit q; the per-sector flow edge runs minus -> plus.
    int site_plus(int q, Sector sec) const { return sec == Sector::chargeon ? vplus_[q] : pplus_[q]; }
    int site_minus(int q, Sector sec) const { return sec == Sector::chargeon ? vminus_[q] : pminus_[q]; }

    // (dx, dy) displacement of the minus -> plus flow step across qudit q,
    // in vertex coordinates for the chargeon sector and plaquette coordinates
    // for the fluxon sector; used for winding-number bookkeeping.
    std::pair<int, int> flow_step(int q, Sector sec) const;

    // qudits sharing a star or plaquette with q (q excluded), ascending
    const std::vector<int>& qudit_neighbors(int q) const { return neighbors_[q]; }

    PauliError identity() const { return PauliError(d_, n_qudits()); }
    PauliError star(int v, int g) const;          // A(v)^g as an error
    PauliError plaquette_op(int p, int g) const;  // B(p)^g as an error

    Syndrome syndrome(const PauliError& p) const;

    // incremental update: apply Z^{z_exp} X^{x_exp} on qudit q to a syndrome
    void apply_step(Syndrome& s, int q, int z_exp, int x_exp) const;

    // (w_z_horizontal, w_z_vertical, w_x_horizontal, w_x_vertical): mod-d
    // winding numbers of the error across one vertical and one horizontal
    // transversal cut of each sector. Zero iff the error is a stabilizer
    // product, for syndrome-free errors.
    std::array<int, 4> logical_class(const PauliError& p) const;

  private:
    int wrap_x(int x) const { return ((x % lx_) + lx_) % lx_; }
    int wrap_y(int y) const { return ((y % ly_) + ly_) % ly_; }

    int lx_, ly_, d_;
    std::vector<int> vplus_, vminus_, pplus_, pminus_;
    std::vector<std::vector<int>> neighbors_;
};

TorusLattice build_lattice(int lx, int ly, int d);

// energy of a syndrome: sum of the masses of all anyons present
double energy(const Syndrome& s, const MassTable& m);

// Cheapest nonzero neutral excitation reachable as a conjugate pair:
// min over same-sector sites s1 != s2 and charges k != 0 of J_{s1}^k + J_{s2}^{d-k}.
double hamiltonian_gap(const MassTable& m);

}  // namespace qd

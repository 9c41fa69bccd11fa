#include "qd/fixtures.hpp"

#include "qd/errors.hpp"

namespace qd {

PauliError random_error(const TorusLattice& lat, Rng& rng, double density) {
    if (density < 0 || density > 1) throw validation_error("density must lie in [0, 1]");
    PauliError p = lat.identity();
    for (int q = 0; q < lat.n_qudits(); ++q) {
        if (rng.uniform() >= density) continue;
        p.z.set(q, rng.below(lat.d()));
        p.x.set(q, rng.below(lat.d()));
    }
    return p;
}

PauliError logical_string(const TorusLattice& lat, int kind, int k, int offset) {
    int kk = mod_d(k, lat.d());
    if (kk == 0) throw validation_error("logical charge must be nonzero");
    PauliError p = lat.identity();
    switch (kind) {
        case 0:
            for (int x = 0; x < lat.lx(); ++x) p.z.add(lat.edge_h(x, offset), kk);
            break;
        case 1:
            for (int y = 0; y < lat.ly(); ++y) p.z.add(lat.edge_v(offset, y), kk);
            break;
        case 2:
            for (int y = 0; y < lat.ly(); ++y) p.x.add(lat.edge_h(offset, y), kk);
            break;
        case 3:
            for (int x = 0; x < lat.lx(); ++x) p.x.add(lat.edge_v(x, offset), kk);
            break;
        default:
            throw validation_error("logical kind must be 0..3");
    }
    return p;
}

PauliError stabilizer_product(const TorusLattice& lat, Rng& rng, int factors) {
    PauliError p = lat.identity();
    for (int i = 0; i < factors; ++i) {
        int g = 1 + rng.below(lat.d() - 1);
        int site = rng.below(lat.n_vertices());
        p = compose(p, rng.below(2) ? lat.star(site, g) : lat.plaquette_op(site, g));
    }
    return p;
}

void add_z_string(PauliError& p, const TorusLattice& lat, int va, int vb, int k) {
    int kk = mod_d(k, lat.d());
    if (kk == 0 || va == vb) return;
    auto [ax, ay] = lat.site_xy(va);
    auto [bx, by] = lat.site_xy(vb);
    int x = ax, y = ay;
    int dx = mod_d(bx - ax, lat.lx());
    if (dx <= lat.lx() - dx) {
        for (int i = 0; i < dx; ++i, ++x) p.z.add(lat.edge_h(x, y), -kk);  // east, against the
                                                                           // westward canonical flow
    } else {
        for (int i = 0; i < lat.lx() - dx; ++i) p.z.add(lat.edge_h(--x, y), kk);  // west
    }
    int dy = mod_d(by - ay, lat.ly());
    if (dy <= lat.ly() - dy) {
        for (int i = 0; i < dy; ++i, ++y) p.z.add(lat.edge_v(x, y), kk);  // north, canonical
    } else {
        for (int i = 0; i < lat.ly() - dy; ++i) p.z.add(lat.edge_v(x, --y), -kk);  // south
    }
}

void add_x_string(PauliError& p, const TorusLattice& lat, int pa, int pb, int k) {
    int kk = mod_d(k, lat.d());
    if (kk == 0 || pa == pb) return;
    auto [ax, ay] = lat.site_xy(pa);
    auto [bx, by] = lat.site_xy(pb);
    int x = ax, y = ay;
    int dx = mod_d(bx - ax, lat.lx());
    if (dx <= lat.lx() - dx) {
        for (int i = 0; i < dx; ++i, ++x) p.x.add(lat.edge_v(x + 1, y), -kk);  // east, against the
                                                                               // westward dual flow
    } else {
        for (int i = 0; i < lat.lx() - dx; ++i, --x) p.x.add(lat.edge_v(x, y), kk);  // west
    }
    int dy = mod_d(by - ay, lat.ly());
    if (dy <= lat.ly() - dy) {
        for (int i = 0; i < dy; ++i, ++y) p.x.add(lat.edge_h(x, y + 1), -kk);  // north, against the
                                                                               // southward dual flow
    } else {
        for (int i = 0; i < lat.ly() - dy; ++i, --y) p.x.add(lat.edge_h(x, y), kk);  // south
    }
}

PauliError spread_tree(const TorusLattice& lat, Rng& rng) {
    PauliError p = lat.identity();
    int root = rng.below(lat.n_vertices());
    for (int i = 0; i < lat.d() - 1; ++i) {
        int leaf = rng.below(lat.n_vertices());
        if (leaf == root) leaf = (leaf + 1 + i) % lat.n_vertices();
        add_z_string(p, lat, root, leaf, 1);
    }
    return p;
}

std::vector<PauliError> adversarial_fixtures(const TorusLattice& lat, Rng& rng) {
    std::vector<PauliError> out;
    const int d = lat.d();
    for (int kind = 0; kind < 4; ++kind) {
        out.push_back(logical_string(lat, kind, 1, 0));
        if (d > 2) out.push_back(logical_string(lat, kind, d - 1, 1));
    }
    out.push_back(stabilizer_product(lat, rng, lat.n_vertices()));
    out.push_back(stabilizer_product(lat, rng, 2 * lat.n_vertices()));
    out.push_back(spread_tree(lat, rng));
    out.push_back(spread_tree(lat, rng));
    PauliError mix = compose(logical_string(lat, 0, 1, 0), stabilizer_product(lat, rng, lat.n_vertices()));
    out.push_back(compose(mix, spread_tree(lat, rng)));
    return out;
}

}  // namespace qd

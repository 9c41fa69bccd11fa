#include <array>
#include <vector>

#include "doctest.h"
#include "qd/errors.hpp"
#include "qd/fixtures.hpp"
#include "qd/lattice.hpp"
#include "qd/rng.hpp"

using namespace qd;

TEST_CASE("lattice counts and indexing wrap") {
    TorusLattice lat = build_lattice(3, 2, 5);
    CHECK(lat.n_vertices() == 6);
    CHECK(lat.n_plaquettes() == 6);
    CHECK(lat.n_qudits() == 12);
    CHECK(lat.vertex_index(3, 2) == lat.vertex_index(0, 0));
    CHECK(lat.edge_h(-1, 0) == lat.edge_h(2, 0));
    CHECK(lat.edge_v(0, -1) == lat.edge_v(0, 1));
    CHECK(lat.is_horizontal(5));
    CHECK_FALSE(lat.is_horizontal(6));
    CHECK_THROWS_AS(build_lattice(1, 4, 2), validation_error);
    CHECK_THROWS_AS(build_lattice(4, 4, 1), validation_error);
}

TEST_CASE("stabilizers are syndrome free and mutually commuting") {
    for (int d : {2, 3}) {
        TorusLattice lat = build_lattice(3, 3, d);
        for (int v = 0; v < lat.n_vertices(); ++v)
            for (int g = 1; g < d; ++g) CHECK(lat.syndrome(lat.star(v, g)).is_zero());
        for (int p = 0; p < lat.n_plaquettes(); ++p)
            for (int g = 1; g < d; ++g) CHECK(lat.syndrome(lat.plaquette_op(p, g)).is_zero());
        for (int v = 0; v < lat.n_vertices(); ++v)
            for (int p = 0; p < lat.n_plaquettes(); ++p)
                CHECK(commutation_exponent(lat.star(v, 1), lat.plaquette_op(p, 1)) == 0);
    }
}

TEST_CASE("a single factor creates a conjugate charge pair") {
    TorusLattice lat = build_lattice(4, 4, 5);
    for (int q : {0, 5, 17, 31}) {
        for (int k = 1; k < 5; ++k) {
            PauliError p = lat.identity();
            p.z.set(q, k);
            Syndrome s = lat.syndrome(p);
            CHECK(s.a[lat.site_plus(q, Sector::chargeon)] == k);
            CHECK(s.a[lat.site_minus(q, Sector::chargeon)] == 5 - k);
            CHECK(s.b.is_zero());
            int charged = 0;
            for (int v = 0; v < lat.n_vertices(); ++v) charged += s.a[v] != 0;
            CHECK(charged == 2);

            PauliError px = lat.identity();
            px.x.set(q, k);
            Syndrome sx = lat.syndrome(px);
            CHECK(sx.b[lat.site_plus(q, Sector::fluxon)] == k);
            CHECK(sx.b[lat.site_minus(q, Sector::fluxon)] == 5 - k);
            CHECK(sx.a.is_zero());
        }
    }
}

TEST_CASE("apply_step tracks syndrome composition") {
    TorusLattice lat = build_lattice(4, 3, 3);
    Rng rng(5, 0);
    for (int trial = 0; trial < 10; ++trial) {
        PauliError p = random_error(lat, rng, 0.4);
        PauliError q = random_error(lat, rng, 0.3);
        Syndrome s = lat.syndrome(p);
        for (const auto& st : single_qudit_factorization(q))
            lat.apply_step(s, st.qudit, st.z_exp, st.x_exp);
        CHECK(s == lat.syndrome(compose(p, q)));
    }
}

TEST_CASE("syndromes are neutral in both sectors") {
    TorusLattice lat = build_lattice(4, 4, 7);
    Rng rng(9, 0);
    for (int trial = 0; trial < 25; ++trial) {
        Syndrome s = lat.syndrome(random_error(lat, rng, 0.5));
        CHECK(s.a.sum() == 0);
        CHECK(s.b.sum() == 0);
    }
}

TEST_CASE("flow step displacement is consistent with endpoint sites") {
    TorusLattice lat = build_lattice(4, 3, 3);
    for (int q = 0; q < lat.n_qudits(); ++q)
        for (Sector sec : {Sector::chargeon, Sector::fluxon}) {
            auto [fx, fy] = lat.site_xy(lat.site_minus(q, sec));
            auto [dx, dy] = lat.flow_step(q, sec);
            auto [tx, ty] = lat.site_xy(lat.site_plus(q, sec));
            CHECK((fx + dx - tx) % 4 == 0);
            CHECK((fy + dy - ty) % 3 == 0);
            CHECK(std::abs(dx) + std::abs(dy) == 1);
        }
}

TEST_CASE("logical classes of strings, stabilizers and compositions") {
    TorusLattice lat = build_lattice(4, 4, 5);
    CHECK(lat.logical_class(lat.identity()) == std::array<int, 4>{0, 0, 0, 0});

    Rng rng(2, 0);
    CHECK(lat.logical_class(stabilizer_product(lat, rng, 12)) == std::array<int, 4>{0, 0, 0, 0});

    // an X string on horizontal edges winds vertically in the dual, so kinds
    // 2 and 3 land in the swapped class slots
    const std::array<int, 4> slot = {0, 1, 3, 2};
    for (int kind = 0; kind < 4; ++kind)
        for (int k : {1, 3}) {
            PauliError s = logical_string(lat, kind, k, 1);
            CHECK(lat.syndrome(s).is_zero());
            auto cls = lat.logical_class(s);
            int nonzero = 0;
            for (int c : cls) nonzero += c != 0;
            CHECK(nonzero == 1);
            CHECK(cls[slot[kind]] == k);
        }

    // additivity mod d
    PauliError a = logical_string(lat, 0, 2, 0);
    PauliError b = logical_string(lat, 0, 4, 2);
    CHECK(lat.logical_class(compose(a, b))[0] == 1);
}

TEST_CASE("string builders leave the advertised endpoint charges") {
    TorusLattice lat = build_lattice(4, 4, 5);
    PauliError p = lat.identity();
    int va = lat.vertex_index(0, 0), vb = lat.vertex_index(2, 3);
    add_z_string(p, lat, va, vb, 2);
    Syndrome s = lat.syndrome(p);
    CHECK(s.a[vb] == 2);
    CHECK(s.a[va] == 3);
    CHECK(s.b.is_zero());

    PauliError q = lat.identity();
    int pa = lat.plaq_index(1, 1), pb = lat.plaq_index(3, 0);
    add_x_string(q, lat, pa, pb, 4);
    Syndrome t = lat.syndrome(q);
    CHECK(t.b[pb] == 4);
    CHECK(t.b[pa] == 1);
    CHECK(t.a.is_zero());
}

TEST_CASE("energy sums the masses of the anyons present") {
    TorusLattice lat = build_lattice(2, 2, 5);
    MassTable m = uniform_masses(5, 4, {0, 1, 4, 4, 1});
    PauliError p = lat.identity();
    p.z.set(0, 2);  // charges 2 and 3 at the two endpoints
    CHECK(energy(lat.syndrome(p), m) == doctest::Approx(8.0));
    CHECK(energy(lat.syndrome(lat.identity()), m) == 0.0);
    CHECK(m.j_max() == 4.0);
    CHECK(m.scaled(2.5).j_max() == 10.0);
}

TEST_CASE("hamiltonian gap takes the cheapest conjugate pair") {
    CHECK(hamiltonian_gap(uniform_masses(2, 4, 1.0)) == doctest::Approx(2.0));
    CHECK(hamiltonian_gap(uniform_masses(5, 4, {0, 1, 4, 4, 1})) == doctest::Approx(2.0));
    // site-resolved: one cheap vertex pairs with the default elsewhere
    MassTable m = uniform_masses(3, 4, {0, 5, 5});
    m.vertex[2] = {0, 1, 1};
    CHECK(hamiltonian_gap(m) == doctest::Approx(6.0));
}

TEST_CASE("random errors respect the lattice shape") {
    TorusLattice lat = build_lattice(4, 4, 3);
    Rng rng(1, 0);
    PauliError p = random_error(lat, rng, 1.0);
    CHECK(p.d() == 3);
    CHECK(p.n_qudits() == 32);
    CHECK_FALSE(p.is_identity());
    CHECK(random_error(lat, rng, 0.0).is_identity());
}

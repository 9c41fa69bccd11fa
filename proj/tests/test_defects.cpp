#include <string>
#include <vector>

#include "doctest.h"
#include "qd/defects.hpp"
#include "qd/errors.hpp"
#include "qd/fixtures.hpp"
#include "qd/rng.hpp"

using namespace qd;

TEST_CASE("crossing action multiplies by M or its inverse") {
    CHECK(crossing_action(1, 2, true, 5) == 2);
    CHECK(crossing_action(2, 2, false, 5) == 1);  // 2 * inv(2) = 2 * 3 = 6
    CHECK(crossing_action(4, 2, true, 5) == 3);
    CHECK(crossing_action(0, 2, true, 5) == 0);  // vacuum stays vacuum
    CHECK(crossing_action(1, 1, true, 5) == 1);
    CHECK_THROWS_AS(crossing_action(1, 2, true, 4), validation_error);
}

TEST_CASE("brown configs validate and label the rows") {
    TorusLattice lat = build_lattice(4, 4, 5);

    DefectConfig v0 = make_brown_config(4, 4, 0);
    CHECK(v0.lines.size() == 2);
    CHECK(validate_consistency(v0, lat).ok);
    CompiledDefects cd0 = compile_defects(v0, lat);
    const std::vector<int> rows0 = {1, 2, 2, 1};
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) CHECK(cd0.label_z[lat.vertex_index(x, y)] == rows0[y]);
    for (int p = 0; p < 16; ++p) CHECK(cd0.label_x[p] == 1);  // fluxon sector untouched

    DefectConfig v1 = make_brown_config(4, 4, 1);
    CHECK(v1.lines.size() == 4);
    CHECK(validate_consistency(v1, lat).ok);
    CompiledDefects cd1 = compile_defects(v1, lat);
    const std::vector<int> rows1 = {1, 2, 4, 3};
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) CHECK(cd1.label_z[lat.vertex_index(x, y)] == rows1[y]);
}

TEST_CASE("terminated and ill-closed lines are rejected") {
    TorusLattice lat = build_lattice(4, 4, 5);

    DefectConfig cut = make_brown_config(4, 4, 0);
    cut.lines[0].points.pop_back();  // no longer wraps
    ConsistencyReport rep = validate_consistency(cut, lat);
    CHECK_FALSE(rep.ok);
    CHECK_FALSE(rep.violations.empty());
    CHECK_THROWS_AS(compile_defects(cut, lat), validation_error);

    // parallel same-orientation lines on ly = 2 need M^2 = 1 mod 5
    TorusLattice small = build_lattice(4, 2, 5);
    DefectConfig bad = make_brown_config(4, 2, 1);
    CHECK_FALSE(validate_consistency(bad, small).ok);
    CHECK_THROWS_AS(compile_defects(bad, small), validation_error);

    CHECK_THROWS_AS(make_brown_config(4, 4, 7), validation_error);
}

TEST_CASE("defect syndromes: local twisted by labels, global defect-free") {
    TorusLattice lat = build_lattice(4, 4, 5);
    CompiledDefects cd = compile_defects(make_brown_config(4, 4, 0), lat);
    Rng rng(77, 0);

    bool saw_twist = false;
    for (int trial = 0; trial < 20; ++trial) {
        PauliError p = random_error(lat, rng, 0.4);
        Syndrome free = lat.syndrome(p);
        auto [local, global] = syndrome_with_defects(p, cd, lat);
        CHECK(global == free);
        for (int v = 0; v < lat.n_vertices(); ++v) {
            CHECK(local.a[v] == mod_d(cd.label_z[v] * free.a[v], 5));
            if (local.a[v] != global.a[v]) saw_twist = true;
        }
        CHECK(local.b == free.b);
    }
    CHECK(saw_twist);

    // global syndromes stay additive
    PauliError p = random_error(lat, rng, 0.3);
    PauliError q = random_error(lat, rng, 0.3);
    auto [lp, gp] = syndrome_with_defects(p, cd, lat);
    auto [lq, gq] = syndrome_with_defects(q, cd, lat);
    auto [lpq, gpq] = syndrome_with_defects(compose(p, q), cd, lat);
    CHECK(gpq == gp.plus(gq));
}

TEST_CASE("a unit charge hopping across a line lands as a doubled charge") {
    TorusLattice lat = build_lattice(4, 4, 5);
    CompiledDefects cd = compile_defects(make_brown_config(4, 4, 0), lat);
    // find a vertical edge joining label-1 row 0 to label-2 row 1
    PauliError p = lat.identity();
    int q = lat.edge_v(1, 0);
    p.z.set(q, 1);
    Syndrome free = lat.syndrome(p);
    auto [local, global] = syndrome_with_defects(p, cd, lat);
    int v0 = lat.site_minus(q, Sector::chargeon), v1 = lat.site_plus(q, Sector::chargeon);
    CHECK(mod_d(free.a[v0] + free.a[v1], 5) == 0);  // conjugate pair 1 / 4
    CHECK(local.a[v0] == mod_d(cd.label_z[v0] * free.a[v0], 5));
    CHECK(local.a[v1] == mod_d(cd.label_z[v1] * free.a[v1], 5));
    CHECK(cd.label_z[v0] + cd.label_z[v1] == 3);  // one row labeled 1, the other 2
}

TEST_CASE("twisted masses permute each site row by its label") {
    TorusLattice lat = build_lattice(4, 4, 5);
    CompiledDefects cd = compile_defects(make_brown_config(4, 4, 0), lat);
    MassTable m = uniform_masses(5, 16, {0, 1, 4, 4, 1});
    MassTable tw = twisted_masses(m, cd);
    CHECK(tw.j_max() == m.j_max());
    for (int v = 0; v < 16; ++v) {
        int lab = cd.label_z[v];
        for (int k = 0; k < 5; ++k)
            CHECK(tw.vertex[v][k] == m.vertex[v][mod_d(lab * k, 5)]);
    }
    int v_twisted = lat.vertex_index(0, 1);  // label 2
    CHECK(tw.vertex[v_twisted] == std::vector<double>{0, 4, 1, 1, 4});
    int v_plain = lat.vertex_index(0, 0);  // label 1
    CHECK(tw.vertex[v_plain] == std::vector<double>{0, 1, 4, 4, 1});
}

TEST_CASE("barriers under defects stay below twice the heaviest mass") {
    TorusLattice lat = build_lattice(4, 4, 5);
    DefectConfig cfg = make_brown_config(4, 4, 0);
    MassTable m = uniform_masses(5, 16, {0, 1, 4, 4, 1});
    Rng rng(78, 0);
    for (int trial = 0; trial < 15; ++trial) {
        PauliError p = random_error(lat, rng, 0.15 + 0.05 * trial);
        CHECK(barrier_with_defects(p, cfg, lat, m) <= 8.0);
    }
    CHECK(barrier_with_defects(lat.identity(), cfg, lat, m) == 0.0);
}

TEST_CASE("defect config JSON round-trips") {
    DefectConfig cfg = make_brown_config(4, 4, 0);
    DefectConfig back = defects_from_json(defects_to_json(cfg));
    CHECK(back.d == cfg.d);
    REQUIRE(back.lines.size() == cfg.lines.size());
    for (std::size_t i = 0; i < cfg.lines.size(); ++i) {
        CHECK(back.lines[i].sector == cfg.lines[i].sector);
        CHECK(back.lines[i].m == cfg.lines[i].m);
        CHECK(back.lines[i].points == cfg.lines[i].points);
    }
    CHECK_THROWS_AS(defects_from_json("not json"), validation_error);
    CHECK_THROWS_AS(defects_from_json("{\"lines\":[]}"), validation_error);
}

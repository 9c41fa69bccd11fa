#pragma once
#include <string>
#include <utility>
#include <vector>

#include "qd/lattice.hpp"
#include "qd/masses.hpp"
#include "qd/pauli.hpp"

namespace qd {

// One permuting defect line. Chargeon-sector lines are walks on the dual
// lattice (plaquette (x, y) coordinates) and act on chargeons crossing the
// primal edges the walk cuts; fluxon-sector lines are walks on the primal
// lattice (vertex coordinates) cutting dual edges. Consecutive points must
// differ by one unit step; coordinates are unwrapped, so a closed line that
// wraps the torus ends at start + (lx, 0) or similar.
//
// Crossing convention: the "along" direction of a step is the step direction
// rotated 90 degrees counterclockwise; an anyon crossing that way is
// multiplied by M, crossing the other way by M^-1.
struct DefectLine {
    Sector sector = Sector::chargeon;
    int m = 1;  // invertible mod d
    std::vector<std::pair<int, int>> points;
};

struct DefectConfig {
    int d = 2;
    std::vector<DefectLine> lines;
};

struct ConsistencyReport {
    bool ok = true;
    std::vector<std::string> violations;
};

// Per-sector edge multipliers (applied to a charge crossing the qudit in the
// canonical minus -> plus direction) and per-site cumulative labels L
// propagated from site 0 (L = 1). T1 multiplies the defect-free charge by L;
// T2 = L^-1 undoes it, so the global syndrome equals the defect-free one.
struct CompiledDefects {
    int d = 2;
    std::vector<int> mult_z, mult_x;  // per qudit
    std::vector<int> label_z;         // per vertex
    std::vector<int> label_x;         // per plaquette
};

// M k (along) or M^-1 k (against); throws validation_error on gcd(M, d) != 1
int crossing_action(int k, int m, bool along, int d);

// Checks that every elementary face loop and both torus generators have unit
// holonomy in each sector, and that the BFS labeling is single-valued on
// every edge. Violations name the face / generator / qudit.
ConsistencyReport validate_consistency(const DefectConfig& cfg, const TorusLattice& lat);

// validates, then compiles multipliers and labels; throws on inconsistency
CompiledDefects compile_defects(const DefectConfig& cfg, const TorusLattice& lat);

// (local, global): local charge = L * defect-free charge sitewise, global =
// L^-1 * local. Global syndromes are additive and neutral like defect-free
// ones; local charges are what the masses are paid on.
std::pair<Syndrome, Syndrome> syndrome_with_defects(const PauliError& p,
                                                    const CompiledDefects& cd,
                                                    const TorusLattice& lat);

// J'_s[k] = J_s[L_s k]: evaluating defect-free machinery on global syndromes
// with the twisted table reproduces the defect model's local energies
MassTable twisted_masses(const MassTable& m, const CompiledDefects& cd);

// constructive barrier of the scheduled path under the defect config
double barrier_with_defects(const PauliError& p, const DefectConfig& cfg,
                            const TorusLattice& lat, const MassTable& m);

// Two-line wrapping configs in the chargeon sector on an lx x ly torus, d=5,
// M=2. variant 0: two oppositely oriented lines, region labels {1, 2};
// variant 1: ly parallel same-orientation lines, labels {1, 2, 4, 3, ...}
// (requires M^ly = 1 mod d, e.g. ly = 4).
DefectConfig make_brown_config(int lx, int ly, int variant);

// {"d":5,"lines":[{"sector":"chargeon","M":2,"path":[[0,0],[1,0],...]}]}
DefectConfig defects_from_json(const std::string& text);
std::string defects_to_json(const DefectConfig& cfg);

}  // namespace qd

#pragma once
#include <vector>

#include "qd/lattice.hpp"
#include "qd/pauli.hpp"
#include "qd/rng.hpp"

namespace qd {

// deterministic error generators for tests, benchmarks and the barrier sweep

// independent per qudit: with probability `density` draw uniform digits (z, x)
PauliError random_error(const TorusLattice& lat, Rng& rng, double density);

// Non-contractible charge-k strings. kind 0: Z on a row of horizontal edges,
// 1: Z on a column of vertical edges, 2: X on a column of horizontal edges,
// 3: X on a row of vertical edges. `offset` picks the row / column.
PauliError logical_string(const TorusLattice& lat, int kind, int k, int offset);

// product of random powers of stars and plaquettes: dense and syndrome-free
PauliError stabilizer_product(const TorusLattice& lat, Rng& rng, int factors);

// Z error whose chargeon flow is a star of d-1 unit-charge strings walked
// away from a random root vertex
PauliError spread_tree(const TorusLattice& lat, Rng& rng);

// Multiply in a charge-k chargeon flow from vertex va to vertex vb (resp. a
// fluxon flow between plaquettes) along the L-shaped walk that takes the
// shorter way around in x, then in y (ties eastward / northward). The
// syndrome gains +k at the destination and -k at the source.
void add_z_string(PauliError& p, const TorusLattice& lat, int va, int vb, int k);
void add_x_string(PauliError& p, const TorusLattice& lat, int pa, int pb, int k);

// logicals, dense stabilizer products, spread trees and a mixed case
std::vector<PauliError> adversarial_fixtures(const TorusLattice& lat, Rng& rng);

}  // namespace qd

#pragma once
#include <string>
#include <vector>

namespace qd {

// Site-resolved anyon masses J_s^k >= 0 with J_s^0 = 0: row s of `vertex`
// (resp. `plaquette`) lists the d masses of chargeon (fluxon) types at site s.
struct MassTable {
    int d = 2;
    std::vector<std::vector<double>> vertex;     // [n_vertices][d]
    std::vector<std::vector<double>> plaquette;  // [n_plaquettes][d]

    double j_max() const;
    MassTable scaled(double c) const;  // all masses multiplied by c
};

// same mass list at every vertex and every plaquette; charges must have size d
MassTable uniform_masses(int d, int n_sites, const std::vector<double>& charges);

// shorthand for J^k = j for every k != 0
MassTable uniform_masses(int d, int n_sites, double j);

// JSON schema:
// {"d":5,
//  "vertex_masses":{"default":[0,1,4,4,1],"overrides":{"3":[0,2,2,2,2]}},
//  "plaquette_masses":{"default":[0,1,4,4,1]}}
MassTable masses_from_json(const std::string& json_text, int n_sites);
std::string masses_to_json(const MassTable& m);

}  // namespace qd

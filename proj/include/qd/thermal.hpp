#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "qd/decoder.hpp"
#include "qd/lattice.hpp"
#include "qd/masses.hpp"

namespace qd {

enum class RateKind { metropolis, glauber };

RateKind rate_kind_from_name(const std::string& name);
std::string rate_kind_name(RateKind kind);

// Single-move rate f(delta_e) at inverse temperature beta. Both kinds obey
// detailed balance, f(x) = exp(-beta x) f(-x), and are nonincreasing in x.
struct RateModel {
    RateKind kind = RateKind::metropolis;
    double beta = 1.0;

    double rate(double delta_e) const;
};

// One elementary dissipative move: Z^z_exp X^x_exp on a single qudit, with
// exactly one of the exponents nonzero.
struct Move {
    int qudit = 0;
    int z_exp = 0;
    int x_exp = 0;
};

// every qudit, Z exponents 1..d-1 then X exponents 1..d-1
std::vector<Move> enumerate_moves(const TorusLattice& lat);

// energy change of applying mv to a frame with syndrome s
double move_delta_e(const Syndrome& s, const Move& mv, const MassTable& m, const TorusLattice& lat);

// Minimal single-move rate over all moves and all configurations: the rate of
// the largest possible energy increase, enumerated exactly over qudits,
// sectors, exponents and charge pairs at the move's two endpoints.
double gamma_star(const RateModel& rm, const MassTable& m, const TorusLattice& lat);

struct KmcResult {
    bool failed = false;
    double fail_time = 0.0;  // +infinity when censored
    double end_time = 0.0;   // simulated span (fail grid time or max_time)
    long long steps = 0;     // accepted moves
};

// Gillespie trajectory from the vacuum. The frame is decoded at grid_points
// evenly spaced times up to max_time; the run stops at the first grid time
// whose decode lands in a nontrivial logical class. Randomness is determined
// by (seed, traj_index) alone.
KmcResult kmc_run(const TorusLattice& lat, const MassTable& m, const RateModel& rm,
                  const SyndromeDecoder& dec, uint64_t seed, uint64_t traj_index,
                  double max_time, int grid_points);

struct MemoryStats {
    std::vector<double> fail_times;  // per trajectory, +infinity when censored
    int n_failed = 0;
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
};

// n_traj independent trajectories (streams seed/0..n_traj-1), run on
// n_threads workers (0: QD_THREADS env var, else hardware concurrency).
// Results are independent of the thread count.
MemoryStats memory_time_estimate(const TorusLattice& lat, const MassTable& m, const RateModel& rm,
                                 const SyndromeDecoder& dec, int n_traj, uint64_t seed,
                                 double max_time, int grid_points, int n_threads = 0);

// Rigorous Arrhenius-style upper bound on the relaxation time of the chain:
//   value = prefactor * tau
//   tau = 4 * mu_hat * exp(2 * beta * eps_hat) / gamma_star
//   prefactor = 1/2 + 4 N ln d + 2 beta N J_max        (N = Lx Ly)
// with mu_hat = 8 (d-1) N the path-length cap and eps_hat = 2 J_max the
// barrier cap. After value, the mixed chain's total-variation distance from
// Gibbs is below 1/2 from any start, so it dominates any memory time scale.
struct ArrheniusBound {
    double beta = 0.0;
    double mu_hat = 0.0;
    double eps_hat = 0.0;
    double gamma_star = 0.0;
    double tau = 0.0;
    double prefactor = 0.0;
    double value = 0.0;
};

ArrheniusBound arrhenius_bound(const TorusLattice& lat, const MassTable& m, const RateModel& rm);

struct GapResult {
    double gap = 0.0;                    // smallest nonzero decay rate of the generator
    double stationarity_residual = 0.0;  // max |(G pi)(x)| with pi scaled to max 1
    double gibbs_deviation = 0.0;        // componentwise gap between the null vector and Gibbs
    long long dim = 0;                   // number of chain states d^(2 n_qudits)
    int n_sectors = 0;                   // translation character blocks diagonalized
};

// Exact spectral gap of the single-qudit dissipative chain, by
// block-diagonalizing the generator over the characters of the group of
// syndrome-preserving translations (requires prime d; throws size_error when
// the state space exceeds 10^5).
GapResult exact_chain_gap(const TorusLattice& lat, const MassTable& m, const RateModel& rm);

// order statistics; +infinity entries (censored trajectories) sort last
double median_of(std::vector<double> xs);
double quantile_of(std::vector<double> xs, double p);

struct BootstrapCI {
    double lo = 0.0;
    double hi = 0.0;
};

// percentile bootstrap (2.5%, 97.5%) for the median
BootstrapCI bootstrap_median_ci(const std::vector<double>& xs, int resamples, uint64_t seed);

}  // namespace qd

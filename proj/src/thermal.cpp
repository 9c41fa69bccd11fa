#include "qd/thermal.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

#include "qd/errors.hpp"
#include "qd/pauli.hpp"
#include "qd/rng.hpp"

namespace qd {

RateKind rate_kind_from_name(const std::string& name) {
    if (name == "metropolis") return RateKind::metropolis;
    if (name == "glauber") return RateKind::glauber;
    throw validation_error("unknown rate model '" + name + "' (expected metropolis or glauber)");
}

std::string rate_kind_name(RateKind kind) {
    return kind == RateKind::metropolis ? "metropolis" : "glauber";
}

double RateModel::rate(double delta_e) const {
    if (kind == RateKind::metropolis)
        return delta_e <= 0.0 ? 1.0 : std::exp(-beta * delta_e);
    return 1.0 / (1.0 + std::exp(beta * delta_e));
}

std::vector<Move> enumerate_moves(const TorusLattice& lat) {
    std::vector<Move> moves;
    moves.reserve(static_cast<std::size_t>(lat.n_qudits()) * 2 * (lat.d() - 1));
    for (int q = 0; q < lat.n_qudits(); ++q) {
        for (int l = 1; l < lat.d(); ++l) moves.push_back({q, l, 0});
        for (int m = 1; m < lat.d(); ++m) moves.push_back({q, 0, m});
    }
    return moves;
}

double move_delta_e(const Syndrome& s, const Move& mv, const MassTable& m, const TorusLattice& lat) {
    int d = lat.d();
    double delta = 0.0;
    auto sector_part = [&](Sector sec, int e, const DitVector& charges,
                           const std::vector<std::vector<double>>& rows) {
        int sp = lat.site_plus(mv.qudit, sec);
        int sm = lat.site_minus(mv.qudit, sec);
        if (sp == sm) return;
        delta += rows[sp][mod_d(charges[sp] + e, d)] - rows[sp][charges[sp]];
        delta += rows[sm][mod_d(charges[sm] - e, d)] - rows[sm][charges[sm]];
    };
    if (mv.z_exp != 0) sector_part(Sector::chargeon, mv.z_exp, s.a, m.vertex);
    if (mv.x_exp != 0) sector_part(Sector::fluxon, mv.x_exp, s.b, m.plaquette);
    return delta;
}

double gamma_star(const RateModel& rm, const MassTable& m, const TorusLattice& lat) {
    int d = lat.d();
    double worst = 0.0;
    for (int q = 0; q < lat.n_qudits(); ++q) {
        for (Sector sec : {Sector::chargeon, Sector::fluxon}) {
            int sp = lat.site_plus(q, sec);
            int sm = lat.site_minus(q, sec);
            if (sp == sm) continue;
            const auto& jp = sec == Sector::chargeon ? m.vertex[sp] : m.plaquette[sp];
            const auto& jm = sec == Sector::chargeon ? m.vertex[sm] : m.plaquette[sm];
            for (int e = 1; e < d; ++e)
                for (int cp = 0; cp < d; ++cp)
                    for (int cm = 0; cm < d; ++cm)
                        worst = std::max(worst, jp[(cp + e) % d] - jp[cp] +
                                                    jm[(cm - e + d) % d] - jm[cm]);
        }
    }
    return rm.rate(worst);
}

namespace {

bool decode_fails(const PauliError& frame, const Syndrome& syn, const SyndromeDecoder& dec,
                  const TorusLattice& lat) {
    PauliError recovery = dec.decode(syn, lat);
    std::array<int, 4> cls = lat.logical_class(compose(frame, inverse(recovery)));
    return cls != std::array<int, 4>{0, 0, 0, 0};
}

}  // namespace

KmcResult kmc_run(const TorusLattice& lat, const MassTable& m, const RateModel& rm,
                  const SyndromeDecoder& dec, uint64_t seed, uint64_t traj_index,
                  double max_time, int grid_points) {
    if (max_time <= 0.0 || grid_points < 1)
        throw validation_error("kmc_run needs max_time > 0 and grid_points >= 1");
    Rng rng(seed, traj_index);
    std::vector<Move> moves = enumerate_moves(lat);
    std::vector<double> rates(moves.size());

    PauliError frame = lat.identity();
    Syndrome syn = lat.syndrome(frame);
    KmcResult out;
    double t = 0.0;
    int next_grid = 1;
    auto grid_time = [&](int g) { return max_time * g / grid_points; };

    for (;;) {
        double total = 0.0;
        for (std::size_t i = 0; i < moves.size(); ++i) {
            rates[i] = rm.rate(move_delta_e(syn, moves[i], m, lat));
            total += rates[i];
        }
        double t_next = total > 0.0 ? t + rng.exponential(total)
                                    : std::numeric_limits<double>::infinity();

        while (next_grid <= grid_points && grid_time(next_grid) <= t_next) {
            double gt = grid_time(next_grid);
            if (decode_fails(frame, syn, dec, lat)) {
                out.failed = true;
                out.fail_time = gt;
                out.end_time = gt;
                return out;
            }
            ++next_grid;
        }
        if (next_grid > grid_points) {
            out.failed = false;
            out.fail_time = std::numeric_limits<double>::infinity();
            out.end_time = max_time;
            return out;
        }

        double u = rng.uniform_pos() * total;
        std::size_t pick = 0;
        for (; pick + 1 < moves.size(); ++pick) {
            if (u < rates[pick]) break;
            u -= rates[pick];
        }
        const Move& mv = moves[pick];
        if (mv.z_exp != 0) frame.z.add(mv.qudit, mv.z_exp);
        if (mv.x_exp != 0) frame.x.add(mv.qudit, mv.x_exp);
        lat.apply_step(syn, mv.qudit, mv.z_exp, mv.x_exp);
        ++out.steps;
        t = t_next;
    }
}

double median_of(std::vector<double> xs) { return quantile_of(std::move(xs), 0.5); }

double quantile_of(std::vector<double> xs, double p) {
    if (xs.empty())
        throw validation_error("quantile of an empty sample");
    std::sort(xs.begin(), xs.end());
    double pos = p * (xs.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, xs.size() - 1);
    if (std::isinf(xs[lo]) || std::isinf(xs[hi])) return xs[lo];
    double frac = pos - lo;
    return xs[lo] + frac * (xs[hi] - xs[lo]);
}

BootstrapCI bootstrap_median_ci(const std::vector<double>& xs, int resamples, uint64_t seed) {
    if (xs.empty() || resamples < 2)
        throw validation_error("bootstrap needs a nonempty sample and >= 2 resamples");
    Rng rng(seed, 0);
    std::vector<double> medians(resamples);
    std::vector<double> draw(xs.size());
    for (int r = 0; r < resamples; ++r) {
        for (std::size_t i = 0; i < xs.size(); ++i)
            draw[i] = xs[rng.below(static_cast<int>(xs.size()))];
        medians[r] = median_of(draw);
    }
    std::sort(medians.begin(), medians.end());
    auto pick = [&](double p) {
        double pos = p * (medians.size() - 1);
        return medians[static_cast<std::size_t>(pos + 0.5)];
    };
    return {pick(0.025), pick(0.975)};
}

MemoryStats memory_time_estimate(const TorusLattice& lat, const MassTable& m, const RateModel& rm,
                                 const SyndromeDecoder& dec, int n_traj, uint64_t seed,
                                 double max_time, int grid_points, int n_threads) {
    if (n_traj < 1)
        throw validation_error("memory_time_estimate needs at least one trajectory");
    if (n_threads <= 0) {
        if (const char* env = std::getenv("QD_THREADS")) n_threads = std::atoi(env);
        if (n_threads <= 0) n_threads = static_cast<int>(std::thread::hardware_concurrency());
        if (n_threads <= 0) n_threads = 1;
    }
    n_threads = std::min(n_threads, n_traj);

    MemoryStats stats;
    stats.fail_times.assign(n_traj, 0.0);
    std::atomic<int> next{0};
    std::atomic<int> failed{0};
    std::vector<std::exception_ptr> errors(n_threads);

    auto worker = [&](int tid) {
        try {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n_traj) return;
                KmcResult r = kmc_run(lat, m, rm, dec, seed, static_cast<uint64_t>(i),
                                      max_time, grid_points);
                stats.fail_times[i] = r.fail_time;
                if (r.failed) failed.fetch_add(1);
            }
        } catch (...) {
            errors[tid] = std::current_exception();
        }
    };

    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int tid = 0; tid < n_threads; ++tid) pool.emplace_back(worker, tid);
        for (auto& th : pool) th.join();
    }

    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    stats.n_failed = failed.load();
    stats.median = median_of(stats.fail_times);
    stats.q25 = quantile_of(stats.fail_times, 0.25);
    stats.q75 = quantile_of(stats.fail_times, 0.75);
    return stats;
}

namespace {

// Reduced row echelon form over the prime field F_d; returns pivot columns.
std::vector<int> rref_mod_p(std::vector<std::vector<int>>& rows, int d) {
    std::vector<int> pivots;
    if (rows.empty()) return pivots;
    int ncols = static_cast<int>(rows[0].size());
    int r = 0;
    for (int c = 0; c < ncols && r < static_cast<int>(rows.size()); ++c) {
        int sel = -1;
        for (int i = r; i < static_cast<int>(rows.size()); ++i)
            if (rows[i][c] != 0) { sel = i; break; }
        if (sel < 0) continue;
        std::swap(rows[r], rows[sel]);
        int inv = mod_inverse(rows[r][c], d);
        for (int j = 0; j < ncols; ++j) rows[r][j] = mod_d(rows[r][j] * inv, d);
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            int f = rows[i][c];
            for (int j = 0; j < ncols; ++j)
                rows[i][j] = mod_d(rows[i][j] - f * rows[r][j], d);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

bool is_prime(int d) {
    if (d < 2) return false;
    for (int p = 2; p * p <= d; ++p)
        if (d % p == 0) return false;
    return true;
}

}  // namespace

GapResult exact_chain_gap(const TorusLattice& lat, const MassTable& m, const RateModel& rm) {
    int d = lat.d();
    int nq = lat.n_qudits();
    int ncoord = 2 * nq;
    int nsite = lat.n_vertices() + lat.n_plaquettes();

    long long dim = 1;
    for (int i = 0; i < ncoord; ++i) {
        dim *= d;
        if (dim > 100'000)
            throw size_error("chain spectrum state space exceeds 10^5");
    }
    if (!is_prime(d))
        throw validation_error("exact chain spectrum requires prime d");

    // syndrome of each unit coordinate move, as a site-digit vector
    std::vector<std::vector<int>> col(ncoord, std::vector<int>(nsite, 0));
    for (int i = 0; i < ncoord; ++i) {
        Syndrome s{DitVector(d, lat.n_vertices()), DitVector(d, lat.n_plaquettes())};
        lat.apply_step(s, i % nq, i < nq ? 1 : 0, i < nq ? 0 : 1);
        for (int v = 0; v < lat.n_vertices(); ++v) col[i][v] = s.a[v];
        for (int p = 0; p < lat.n_plaquettes(); ++p) col[i][lat.n_vertices() + p] = s.b[p];
    }

    // pivot coordinates of the syndrome map's row space
    std::vector<std::vector<int>> rows(nsite, std::vector<int>(ncoord, 0));
    for (int s = 0; s < nsite; ++s)
        for (int i = 0; i < ncoord; ++i) rows[s][i] = col[i][s];
    std::vector<int> pivots = rref_mod_p(rows, d);
    int rank = static_cast<int>(pivots.size());
    if (rank != nsite - 2)
        throw std::logic_error("unexpected syndrome map rank");

    // reachable syndromes: both sectors sum to zero mod d
    long long syn_space = 1;
    for (int s = 0; s < nsite; ++s) syn_space *= d;
    std::vector<int> index_of(syn_space, -1);
    std::vector<std::vector<int>> syns;
    std::vector<double> eps;
    for (long long t = 0; t < syn_space; ++t) {
        std::vector<int> digits(nsite);
        long long rest = t;
        int sum_a = 0, sum_b = 0;
        for (int s = 0; s < nsite; ++s) {
            digits[s] = static_cast<int>(rest % d);
            rest /= d;
            (s < lat.n_vertices() ? sum_a : sum_b) += digits[s];
        }
        if (sum_a % d != 0 || sum_b % d != 0) continue;
        index_of[t] = static_cast<int>(syns.size());
        double e = 0.0;
        for (int v = 0; v < lat.n_vertices(); ++v) e += m.vertex[v][digits[v]];
        for (int p = 0; p < lat.n_plaquettes(); ++p)
            e += m.plaquette[p][digits[lat.n_vertices() + p]];
        syns.push_back(std::move(digits));
        eps.push_back(e);
    }
    int ns = static_cast<int>(syns.size());

    auto pack = [&](const std::vector<int>& digits) {
        long long key = 0;
        for (int s = nsite - 1; s >= 0; --s) key = key * d + digits[s];
        return key;
    };

    // per-(syndrome, move) target index and rate; moves are (coordinate i,
    // exponent l) in that nesting, so the reverse of move j is j^l-conjugate
    int n_moves = ncoord * (d - 1);
    std::vector<std::vector<int>> tgt(ns, std::vector<int>(n_moves));
    std::vector<std::vector<double>> rate(ns, std::vector<double>(n_moves));
    std::vector<double> r_tot(ns, 0.0);
    for (int si = 0; si < ns; ++si) {
        for (int i = 0; i < ncoord; ++i) {
            for (int l = 1; l < d; ++l) {
                std::vector<int> digits = syns[si];
                for (int s = 0; s < nsite; ++s)
                    digits[s] = mod_d(digits[s] + l * col[i][s], d);
                int ti = index_of[pack(digits)];
                if (ti < 0)
                    throw std::logic_error("move left the syndrome image");
                int mv = i * (d - 1) + (l - 1);
                tgt[si][mv] = ti;
                rate[si][mv] = rm.rate(eps[ti] - eps[si]);
                r_tot[si] += rate[si][mv];
            }
        }
    }

    // exact stationarity check: (G pi) is constant on syndrome fibers
    double resid = 0.0;
    {
        double pi_max = 0.0;
        for (int si = 0; si < ns; ++si) pi_max = std::max(pi_max, std::exp(-rm.beta * eps[si]));
        for (int si = 0; si < ns; ++si) {
            double acc = -std::exp(-rm.beta * eps[si]) * r_tot[si];
            for (int i = 0; i < ncoord; ++i) {
                for (int l = 1; l < d; ++l) {
                    int mv = i * (d - 1) + (l - 1);
                    int rev = i * (d - 1) + (d - l - 1);
                    int prev = tgt[si][rev];  // si - l * col[i]
                    acc += std::exp(-rm.beta * eps[prev]) * rate[prev][mv];
                }
            }
            resid = std::max(resid, std::abs(acc) / pi_max);
        }
    }

    // character sectors: one representative per coset of the row space,
    // supported on the non-pivot coordinates
    std::vector<int> free_coords;
    {
        std::vector<bool> is_pivot(ncoord, false);
        for (int c : pivots) is_pivot[c] = true;
        for (int i = 0; i < ncoord; ++i)
            if (!is_pivot[i]) free_coords.push_back(i);
    }
    long long n_sectors = 1;
    for (std::size_t i = 0; i < free_coords.size(); ++i) n_sectors *= d;

    const double pi = std::acos(-1.0);
    std::vector<std::complex<double>> omega_pow(d);
    for (int k = 0; k < d; ++k)
        omega_pow[k] = std::polar(1.0, -2.0 * pi * k / d);

    double gap = std::numeric_limits<double>::infinity();
    double gibbs_dev = 0.0;
    std::vector<int> c(ncoord, 0);
    Eigen::MatrixXcd b(ns, ns);
    for (long long sector = 0; sector < n_sectors; ++sector) {
        long long rest = sector;
        for (int f : free_coords) {
            c[f] = static_cast<int>(rest % d);
            rest /= d;
        }

        b.setZero();
        for (int si = 0; si < ns; ++si) {
            b(si, si) = -r_tot[si];
            for (int i = 0; i < ncoord; ++i) {
                for (int l = 1; l < d; ++l) {
                    int mv = i * (d - 1) + (l - 1);
                    b(tgt[si][mv], si) += rate[si][mv] * omega_pow[mod_d(c[i] * l, d)];
                }
            }
        }

        // symmetrize with D = diag(exp(beta * eps)): detailed balance makes
        // D^(1/2) B D^(-1/2) Hermitian
        Eigen::MatrixXcd t(ns, ns);
        for (int r2 = 0; r2 < ns; ++r2)
            for (int c2 = 0; c2 < ns; ++c2)
                t(r2, c2) = b(r2, c2) * std::exp(0.5 * rm.beta * (eps[r2] - eps[c2]));
        t = 0.5 * (t + t.adjoint()).eval();

        bool trivial = sector == 0;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
            t, trivial ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();  // ascending
        if (trivial) {
            double scale = std::max(1.0, std::abs(ev(0)));
            if (std::abs(ev(ns - 1)) > 1e-8 * scale)
                throw std::logic_error("stationary eigenvalue missing from the trivial sector");
            gap = std::min(gap, -ev(ns - 2));

            // null vector of T is D^(1/2) pi, so the chain's stationary vector
            // is D^(-1/2) times the top eigenvector; compare with Gibbs
            // componentwise after scaling both to value 1 at the vacuum
            Eigen::VectorXcd v = es.eigenvectors().col(ns - 1);
            int vac = 0;
            for (int si = 0; si < ns; ++si)
                if (eps[si] < eps[vac]) vac = si;
            std::complex<double> v_vac = v(vac) * std::exp(-0.5 * rm.beta * eps[vac]);
            for (int si = 0; si < ns; ++si) {
                std::complex<double> rec = v(si) * std::exp(-0.5 * rm.beta * eps[si]) / v_vac;
                double gibbs = std::exp(-rm.beta * (eps[si] - eps[vac]));
                gibbs_dev = std::max(gibbs_dev, std::abs(rec - gibbs));
            }
        } else {
            gap = std::min(gap, -ev(ns - 1));
        }
    }

    GapResult out;
    out.gap = gap;
    out.stationarity_residual = resid;
    out.gibbs_deviation = gibbs_dev;
    out.dim = dim;
    out.n_sectors = static_cast<int>(n_sectors);
    return out;
}

ArrheniusBound arrhenius_bound(const TorusLattice& lat, const MassTable& m, const RateModel& rm) {
    ArrheniusBound b;
    long long n = static_cast<long long>(lat.lx()) * lat.ly();
    b.beta = rm.beta;
    b.mu_hat = 8.0 * (lat.d() - 1) * n;
    b.eps_hat = 2.0 * m.j_max();
    b.gamma_star = gamma_star(rm, m, lat);
    b.tau = 4.0 * b.mu_hat * std::exp(2.0 * rm.beta * b.eps_hat) / b.gamma_star;
    b.prefactor = 0.5 + 4.0 * n * std::log(static_cast<double>(lat.d())) +
                  2.0 * rm.beta * n * m.j_max();
    b.value = b.prefactor * b.tau;
    return b;
}

}  // namespace qd

#include "asymlink/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "asymlink/biotsavart.hpp"
#include "asymlink/parallel.hpp"

namespace asymlink {

namespace {

double inner_product(const MultiVector& a, const MultiVector& b) {
    double s = 0.0;
    for (auto& [m, c] : a.coeffs()) s += c * b.coeff(m);
    return s;
}

double delta_or_default(double delta, const Domain& d) {
    return delta > 0.0 ? delta : 1e-3 * d.diameter();
}

double kernel_f_from_values(const Vec& p, const std::vector<Vec>& xgens, const Vec& q,
                            const std::vector<Vec>& ygens, double delta_near) {
    return linking_kernel_det(p, xgens, q, ygens, delta_near);
}

MultiVectorField wedge_field(const Action& a) {
    MultiVectorField F;
    F.n = a.n();
    F.grade = a.k();
    Action ac = a;
    F.eval = [ac](const Vec& x) { return ac.wedge_at(x); };
    return F;
}

}  // namespace

double kernel_f(const Action& Phi, const Action& Psi, const Vec& p, const Vec& q,
                double delta_near) {
    if (Phi.k() + Psi.k() != Phi.n() - 1)
        throw std::invalid_argument("kernel_f: k + l must equal n-1");
    return kernel_f_from_values(p, Phi.generator_values(p), q, Psi.generator_values(q),
                                delta_near);
}

double kernel_f_bound(const Action& Phi, const Action& Psi, const Vec& p, const Vec& q) {
    const int n = Phi.n();
    const double r = dist(p, q);
    return Phi.wedge_at(p).norm() * Psi.wedge_at(q).norm() /
           (sphere_area(n) * std::pow(r, n - 1));
}

Estimate I_two_actions(const Action& Phi, const Action& Psi, const MCConfig& cfg) {
    if (Phi.k() + Psi.k() != Phi.n() - 1)
        throw std::invalid_argument("I_two_actions: k + l must equal n-1");
    const Domain& dom = Phi.domain;
    const double delta = delta_or_default(cfg.delta_near, dom);
    const int nblocks = 64;
    std::vector<MeanAccumulator> acc(nblocks);
    std::vector<long long> resampled(nblocks, 0);
    parallel_blocks(nblocks, [&](int b) {
        const long long c0 = cfg.pairs * b / nblocks;
        const long long c1 = cfg.pairs * (b + 1) / nblocks;
        RngStream rng(cfg.seed, cfg.stream * 1000003ull + b);
        for (long long i = c0; i < c1; ++i) {
            for (;;) {
                const Vec p = sample_action_point(Phi, rng);
                const Vec q = sample_action_point(Psi, rng);
                try {
                    acc[b].add(kernel_f(Phi, Psi, p, q, delta));
                    break;
                } catch (const NearCollisionError&) {
                    ++resampled[b];
                    if (resampled[b] > std::max<long long>(8, (c1 - c0)) )
                        throw std::runtime_error(
                            "I_two_actions: persistent near-collisions");
                }
            }
        }
    });
    MeanAccumulator total;
    long long res = 0;
    for (int b = 0; b < nblocks; ++b) {
        total.merge(acc[b]);
        res += resampled[b];
    }
    if (res > cfg.max_resample_frac * static_cast<double>(cfg.pairs))
        throw std::runtime_error("I_two_actions: near-collision resample rate above limit");
    const double vol2 = action_sample_volume(Phi) * action_sample_volume(Psi);
    return total.estimate(vol2);
}

Estimate I_two_actions_bs(const Action& Phi, const Action& Psi, const MCConfig& cfg,
                          long long inner_samples) {
    const Domain& dom = Phi.domain;
    const MultiVectorField X = wedge_field(Phi);
    RngStream rng(cfg.seed, cfg.stream * 1000003ull + 555);
    MeanAccumulator acc;
    for (long long i = 0; i < cfg.pairs; ++i) {
        const Vec q = sample_action_point(Psi, rng);
        BSConfig bc;
        bc.samples = inner_samples;
        bc.seed = cfg.seed;
        bc.stream = cfg.stream * 1000003ull + 100000 + i;
        if (Phi.support) bc.support = &*Phi.support;
        const BSResult bsr = bs(X, dom, q, bc);
        acc.add(inner_product(bsr.value, Psi.wedge_at(q)));
    }
    return acc.estimate(action_sample_volume(Psi));
}

LkTsResult lk_TS(const Action& Phi, const Action& Psi, const Vec& p, const Vec& q,
                 const Rectangle& T, const Rectangle& S, const Vec& apex_p,
                 const Vec& apex_q, const QuadratureConfig& quad) {
    auto make_manifold = [&](const Action& a, const Vec& pt, const Rectangle& R,
                             const Vec& apex, const std::string& label) {
        ClosedOrbitManifold m = orbit_closure(a, pt, R, apex);
        SingularManifold full;
        full.label = label;
        full.patches.push_back(m.orbit);
        auto cones = prune_cancelling_patches(m.cones);
        for (auto& c : cones) full.patches.push_back(c);
        return full;
    };
    SingularManifold A = make_manifold(Phi, p, T, apex_p, "theta_phi");
    SingularManifold B = make_manifold(Psi, q, S, apex_q, "theta_psi");

    QuadratureConfig qc = quad;
    if (qc.delta_near <= 0.0) qc.delta_near = 1e-3 * Phi.domain.diameter();

    const Estimate full = link(A, B, qc);
    SingularManifold Ao{{A.patches[0]}, "theta_phi_orbit"};
    SingularManifold Bo{{B.patches[0]}, "theta_psi_orbit"};
    const Estimate orbit_only = link(Ao, Bo, qc);

    LkTsResult out;
    out.raw = full.value;
    out.error_proxy = full.std_error;
    out.cone_part = full.value - orbit_only.value;
    out.normalized = full.value / (T.measure() * S.measure());
    return out;
}

std::vector<double> ergodic_mean(const std::function<double(const Vec&)>& h,
                                 const Action& Phi, const Vec& p,
                                 const ErgodicSchedule& schedule, int nodes_per_tau) {
    const int k = Phi.k();
    const int L = schedule.length;
    const int m = nodes_per_tau;
    const Rectangle top = schedule.rect(L - 1);
    ParamPatch orbit = orbit_patch(Phi, p, top);
    const auto nodes = patch_nodes(orbit, std::vector<int>(k, L * m));

    std::vector<double> bucket(L, 0.0);
    const double dt = schedule.tau / m;
    for (const auto& nd : nodes) {
        int level = 0;
        for (int i = 0; i < k; ++i)
            level = std::max(level, static_cast<int>(nd.t[i] / (dt * m)));
        bucket[std::min(level, L - 1)] += h(nd.x);
    }
    std::vector<double> out(L, 0.0);
    double run = 0.0;
    for (int i = 0; i < L; ++i) {
        run += bucket[i];
        const double cnt = std::pow(static_cast<double>((i + 1) * m), k);
        out[i] = run / cnt;
    }
    return out;
}

namespace {

/// Per-pair rectangle means of f across the schedule: each node pair lands in
/// the bucket of the first schedule level whose rectangle contains both node
/// times (level = max over axes of floor(t/tau)), then prefix sums give the
/// mean over T_i × S_i. Throws NearCollisionError when nodes come within delta.
std::vector<double> pair_schedule_means(const std::vector<PatchNode>& na, int k,
                                        const std::vector<PatchNode>& nb, int l,
                                        int L, double tau, int m, double delta) {
    std::vector<double> bucket(L, 0.0);
    for (const auto& a : na) {
        int la = 0;
        for (int i = 0; i < k; ++i)
            la = std::max(la, static_cast<int>(a.t[i] / tau));
        for (const auto& b : nb) {
            int lb = la;
            for (int i = 0; i < l; ++i)
                lb = std::max(lb, static_cast<int>(b.t[i] / tau));
            bucket[std::min(lb, L - 1)] +=
                linking_kernel_det(a.x, a.tangents, b.x, b.tangents, delta);
        }
    }
    std::vector<double> out(L, 0.0);
    double run = 0.0;
    for (int i = 0; i < L; ++i) {
        run += bucket[i];
        const double cnt = std::pow(static_cast<double>((i + 1) * m), k + l);
        out[i] = run / cnt;
    }
    return out;
}

AsymptoticResult reduce_schedule_mc(
    int L, double tau, long long samples, double scale, double max_resample_frac,
    std::uint64_t seed, std::uint64_t stream,
    const std::function<bool(RngStream&, std::vector<double>&)>& one_sample) {
    const int nblocks = 64;
    std::vector<std::vector<MeanAccumulator>> acc(nblocks,
                                                  std::vector<MeanAccumulator>(L));
    std::vector<long long> resampled(nblocks, 0);
    parallel_blocks(nblocks, [&](int b) {
        const long long c0 = samples * b / nblocks;
        const long long c1 = samples * (b + 1) / nblocks;
        RngStream rng(seed, stream * 1000003ull + b);
        std::vector<double> means;
        for (long long i = c0; i < c1; ++i) {
            for (;;) {
                if (one_sample(rng, means)) {
                    for (int j = 0; j < L; ++j) acc[b][j].add(means[j]);
                    break;
                }
                ++resampled[b];
                if (resampled[b] > std::max<long long>(8, c1 - c0))
                    throw std::runtime_error("asymptotic: persistent near-collisions");
            }
        }
    });
    std::vector<MeanAccumulator> total(L);
    long long res = 0;
    for (int b = 0; b < nblocks; ++b) {
        for (int j = 0; j < L; ++j) total[j].merge(acc[b][j]);
        res += resampled[b];
    }
    if (res > max_resample_frac * static_cast<double>(samples))
        throw std::runtime_error("asymptotic: near-collision resample rate above limit");
    AsymptoticResult out;
    out.pairs = samples;
    out.resampled = res;
    for (int j = 0; j < L; ++j) {
        const Estimate e = total[j].estimate(scale);
        out.table.push_back(ConvergenceRow{j, (j + 1) * tau, e.value, e.std_error});
    }
    out.final = total[L - 1].estimate(scale);
    return out;
}

}  // namespace

AsymptoticResult asymptotic_lk(const Action& Phi, const Action& Psi,
                               const ErgodicSchedule& schedule, const MCConfig& cfg) {
    if (Phi.k() + Psi.k() != Phi.n() - 1)
        throw std::invalid_argument("asymptotic_lk: k + l must equal n-1");
    const Domain& dom = Phi.domain;
    const double delta = delta_or_default(cfg.delta_near, dom);
    const int L = schedule.length;
    const int m = cfg.nodes_per_tau;
    const int k = Phi.k(), l = Psi.k();
    const Rectangle topT = Rectangle::cube(k, L * schedule.tau);
    const Rectangle topS = Rectangle::cube(l, L * schedule.tau);

    auto one_sample = [&](RngStream& rng, std::vector<double>& means) {
        const Vec p = sample_action_point(Phi, rng);
        const Vec q = sample_action_point(Psi, rng);
        try {
            const auto na =
                patch_nodes(orbit_patch(Phi, p, topT), std::vector<int>(k, L * m));
            const auto nb =
                patch_nodes(orbit_patch(Psi, q, topS), std::vector<int>(l, L * m));
            means = pair_schedule_means(na, k, nb, l, L, schedule.tau, m, delta);
            return true;
        } catch (const NearCollisionError&) {
            return false;
        }
    };
    const double vol2 = action_sample_volume(Phi) * action_sample_volume(Psi);
    return reduce_schedule_mc(L, schedule.tau, cfg.pairs, vol2, cfg.max_resample_frac,
                              cfg.seed, cfg.stream, one_sample);
}

double kernel_g(const Action& Phi, const SingularManifold& N, const Vec& p,
                const QuadratureConfig& quad, double delta_near) {
    const double delta = delta_or_default(delta_near, Phi.domain);
    const std::vector<Vec> xg = Phi.generator_values(p);
    double sum = 0.0;
    for (const auto& patch : N.patches) {
        for (const auto& nd :
             patch_nodes(patch, std::vector<int>(patch.dim, quad.points_per_axis)))
            sum += nd.weight * linking_kernel_det(p, xg, nd.x, nd.tangents, delta);
    }
    return sum;
}

namespace {

std::vector<PatchNode> manifold_nodes(const SingularManifold& N,
                                      const QuadratureConfig& quad) {
    std::vector<PatchNode> out;
    for (const auto& patch : N.patches) {
        auto nodes = patch_nodes(patch, std::vector<int>(patch.dim, quad.points_per_axis));
        out.insert(out.end(), nodes.begin(), nodes.end());
    }
    return out;
}

double g_from_nodes(const Vec& p, const std::vector<Vec>& xg,
                    const std::vector<PatchNode>& nodes, double delta) {
    double sum = 0.0;
    for (const auto& nd : nodes)
        sum += nd.weight * linking_kernel_det(p, xg, nd.x, nd.tangents, delta);
    return sum;
}

}  // namespace

AsymptoticResult lk_action_manifold(const Action& Phi, const SingularManifold& N,
                                    const ErgodicSchedule& schedule, const MCConfig& cfg,
                                    const QuadratureConfig& quad) {
    const Domain& dom = Phi.domain;
    const double delta = delta_or_default(cfg.delta_near, dom);
    const int L = schedule.length;
    const int m = cfg.nodes_per_tau;
    const int k = Phi.k();
    const Rectangle top = Rectangle::cube(k, L * schedule.tau);
    const auto nnodes = manifold_nodes(N, quad);

    auto one_sample = [&](RngStream& rng, std::vector<double>& means) {
        const Vec p = sample_action_point(Phi, rng);
        try {
            const auto na =
                patch_nodes(orbit_patch(Phi, p, top), std::vector<int>(k, L * m));
            std::vector<double> bucket(L, 0.0);
            for (const auto& nd : na) {
                int level = 0;
                for (int i = 0; i < k; ++i)
                    level = std::max(level,
                                     static_cast<int>(nd.t[i] / (schedule.tau)));
                bucket[std::min(level, L - 1)] +=
                    g_from_nodes(nd.x, nd.tangents, nnodes, delta);
            }
            means.assign(L, 0.0);
            double run = 0.0;
            for (int i = 0; i < L; ++i) {
                run += bucket[i];
                means[i] = run / std::pow(static_cast<double>((i + 1) * m), k);
            }
            return true;
        } catch (const NearCollisionError&) {
            return false;
        }
    };
    return reduce_schedule_mc(L, schedule.tau, cfg.pairs, action_sample_volume(Phi),
                              cfg.max_resample_frac, cfg.seed, cfg.stream, one_sample);
}

Estimate I_action_manifold(const Action& Phi, const SingularManifold& N,
                           const MCConfig& cfg, const QuadratureConfig& quad) {
    const Domain& dom = Phi.domain;
    const double delta = delta_or_default(cfg.delta_near, dom);
    const auto nnodes = manifold_nodes(N, quad);
    const int nblocks = 64;
    std::vector<MeanAccumulator> acc(nblocks);
    std::vector<long long> resampled(nblocks, 0);
    parallel_blocks(nblocks, [&](int b) {
        const long long c0 = cfg.pairs * b / nblocks;
        const long long c1 = cfg.pairs * (b + 1) / nblocks;
        RngStream rng(cfg.seed, cfg.stream * 1000003ull + b);
        for (long long i = c0; i < c1; ++i) {
            for (;;) {
                const Vec p = sample_action_point(Phi, rng);
                try {
                    acc[b].add(g_from_nodes(p, Phi.generator_values(p), nnodes, delta));
                    break;
                } catch (const NearCollisionError&) {
                    ++resampled[b];
                    if (resampled[b] > std::max<long long>(8, c1 - c0))
                        throw std::runtime_error(
                            "I_action_manifold: persistent near-collisions");
                }
            }
        }
    });
    MeanAccumulator total;
    long long res = 0;
    for (int b = 0; b < nblocks; ++b) {
        total.merge(acc[b]);
        res += resampled[b];
    }
    if (res > cfg.max_resample_frac * static_cast<double>(cfg.pairs))
        throw std::runtime_error("I_action_manifold: resample rate above limit");
    return total.estimate(action_sample_volume(Phi));
}

Estimate I_action_manifold_bs(const Action& Phi, const SingularManifold& N,
                              const MCConfig& cfg, const QuadratureConfig& quad,
                              long long inner_samples) {
    const Domain& dom = Phi.domain;
    const MultiVectorField X = wedge_field(Phi);
    const auto nnodes = manifold_nodes(N, quad);
    // quadrature over N, MC only inside BS: the error proxy is the aggregated
    // inner MC sigma (the surface quadrature is deterministic)
    double value = 0.0, var = 0.0;
    long long count = 0;
    long long idx = 0;
    for (const auto& nd : nnodes) {
        BSConfig bc;
        bc.samples = inner_samples;
        bc.seed = cfg.seed;
        bc.stream = cfg.stream * 1000003ull + 900000 + idx++;
        if (Phi.support) bc.support = &*Phi.support;
        const BSResult bsr = bs(X, dom, nd.x, bc);
        const double w = nd.weight;
        const MultiVector tw = wedge_vectors(nd.tangents);
        value += w * inner_product(bsr.value, tw);
        var += w * w * bsr.std_error * bsr.std_error * tw.norm2();
        count += bsr.n_samples;
    }
    Estimate e;
    e.value = value;
    e.std_error = std::sqrt(var);
    e.n_samples = count;
    return e;
}

Estimate energy(const Action& Phi, const MCConfig& cfg) {
    RngStream rng(cfg.seed, cfg.stream * 1000003ull + 17);
    MeanAccumulator acc;
    for (long long i = 0; i < cfg.pairs; ++i) {
        const Vec p = sample_action_point(Phi, rng);
        acc.add(Phi.wedge_at(p).norm2());
    }
    return acc.estimate(action_sample_volume(Phi));
}

EnergyBoundReport energy_bound_check(const Action& Phi, double gamma,
                                     const MCConfig& cfg) {
    if (Phi.n() != 2 * Phi.k() + 1)
        throw std::invalid_argument("energy_bound_check: requires n = 2k+1");
    EnergyBoundReport r;
    r.E = energy(Phi, cfg);
    r.I_self = I_two_actions(Phi, Phi, cfg);
    r.gamma = gamma;
    r.margin = gamma * r.E.value - std::abs(r.I_self.value);
    r.holds = r.margin >= 0.0;
    return r;
}

std::pair<Estimate, Estimate> apex_independence_check(
    const Action& Phi, const Action& Psi, int pairs, const Rectangle& T,
    const Rectangle& S, const Vec& apex_p1, const Vec& apex_q1, const Vec& apex_p2,
    const Vec& apex_q2, const QuadratureConfig& quad, std::uint64_t seed) {
    RngStream rng(seed, 31);
    MeanAccumulator a1, a2;
    int done = 0, attempts = 0;
    while (done < pairs && attempts < 20 * pairs) {
        ++attempts;
        const Vec p = sample_action_point(Phi, rng);
        const Vec q = sample_action_point(Psi, rng);
        try {
            const LkTsResult r1 = lk_TS(Phi, Psi, p, q, T, S, apex_p1, apex_q1, quad);
            const LkTsResult r2 = lk_TS(Phi, Psi, p, q, T, S, apex_p2, apex_q2, quad);
            a1.add(r1.normalized);
            a2.add(r2.normalized);
            ++done;
        } catch (const NearCollisionError&) {
            continue;  // measure-zero bad set: resample the pair
        }
    }
    if (done < pairs)
        throw std::runtime_error("apex_independence_check: too many near-collisions");
    return {a1.estimate(1.0), a2.estimate(1.0)};
}

}  // namespace asymlink

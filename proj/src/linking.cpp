#include "asymlink/linking.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "asymlink/domain.hpp"
#include "asymlink/parallel.hpp"

namespace asymlink {

SingularManifold flipped(SingularManifold m) {
    for (auto& p : m.patches) p.orientation = -p.orientation;
    return m;
}

double linking_kernel(const Vec& x, const MultiVector& tx, const Vec& y,
                      const MultiVector& ty, double delta_near) {
    const int n = x.dim();
    if (tx.grade() + ty.grade() != n - 1)
        throw std::invalid_argument("linking_kernel: grades must sum to n-1");
    const Vec d = y - x;
    const double r = d.norm();
    if (r < delta_near || r == 0.0)
        throw NearCollisionError("linking_kernel: points within delta_near");
    const double sign = (tx.grade() % 2) ? -1.0 : 1.0;
    return sign / sphere_area(n) * triple(MultiVector::vector(d), tx, ty) /
           std::pow(r, n);
}

double linking_kernel_det(const Vec& x, const std::vector<Vec>& tx, const Vec& y,
                          const std::vector<Vec>& ty, double delta_near) {
    const int n = x.dim();
    const Vec d = y - x;
    const double r = d.norm();
    if (r < delta_near || r == 0.0)
        throw NearCollisionError("linking_kernel_det: points within delta_near");
    std::vector<Vec> cols;
    cols.reserve(n);
    cols.push_back(d);
    for (auto& v : tx) cols.push_back(v);
    for (auto& v : ty) cols.push_back(v);
    if (static_cast<int>(cols.size()) != n)
        throw std::invalid_argument("linking_kernel_det: tangent count mismatch");
    const double sign = (tx.size() % 2) ? -1.0 : 1.0;
    return sign / sphere_area(n) * det_columns(cols) / std::pow(r, n);
}

namespace {

double manifold_scale(const SingularManifold& A, const SingularManifold& B) {
    // rough combined bounding diameter from coarse nodes
    double lo[Vec::kMaxDim], hi[Vec::kMaxDim];
    bool first = true;
    int n = 0;
    for (const SingularManifold* m : {&A, &B}) {
        for (const auto& p : m->patches) {
            for (const auto& nd : patch_nodes(p, std::vector<int>(p.dim, 4))) {
                n = nd.x.dim();
                for (int i = 0; i < n; ++i) {
                    if (first || nd.x[i] < lo[i]) lo[i] = nd.x[i];
                    if (first || nd.x[i] > hi[i]) hi[i] = nd.x[i];
                }
                first = false;
            }
        }
    }
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) d2 += (hi[i] - lo[i]) * (hi[i] - lo[i]);
    return std::sqrt(d2);
}

/// Sum of kernel over node pairs; throws NearCollisionError with patch labels.
double pair_sum(const std::vector<PatchNode>& na, const std::vector<PatchNode>& nb,
                double delta_near, const std::string& label_a,
                const std::string& label_b) {
    // parallel over fixed blocks of outer nodes, reduced in block order
    const int nblocks = std::max(1, std::min<int>(64, static_cast<int>(na.size())));
    std::vector<double> block_sums(nblocks, 0.0);
    std::vector<std::string> block_err(nblocks);
    parallel_blocks(nblocks, [&](int b) {
        const std::size_t b0 = na.size() * b / nblocks;
        const std::size_t b1 = na.size() * (b + 1) / nblocks;
        std::vector<double> terms;
        terms.reserve((b1 - b0) * nb.size());
        for (std::size_t i = b0; i < b1; ++i) {
            for (std::size_t j = 0; j < nb.size(); ++j) {
                const double r = dist(na[i].x, nb[j].x);
                if (r < delta_near) {
                    block_err[b] = "near collision between patches '" + label_a +
                                   "' and '" + label_b + "' (distance " +
                                   std::to_string(r) + ")";
                    return;
                }
                terms.push_back(na[i].weight * nb[j].weight *
                                linking_kernel_det(na[i].x, na[i].tangents, nb[j].x,
                                                   nb[j].tangents, 0.0));
            }
        }
        block_sums[b] = pairwise_sum(std::move(terms));
    });
    for (const auto& e : block_err)
        if (!e.empty()) throw NearCollisionError(e);
    return pairwise_sum(std::move(block_sums));
}

double evaluate_at(const SingularManifold& A, const SingularManifold& B,
                   const std::vector<std::vector<int>>& counts_a,
                   const std::vector<std::vector<int>>& counts_b,
                   const std::vector<int>& factor, double delta_near,
                   long long* nodes_out) {
    // node lists are cached per (side, patch, refinement factor): orbit patches
    // are expensive to evaluate (each node is an ODE solve)
    std::map<std::pair<int, int>, std::vector<PatchNode>> cache_a, cache_b;
    auto get_nodes = [](std::map<std::pair<int, int>, std::vector<PatchNode>>& cache,
                        const ParamPatch& p, const std::vector<int>& base, int idx,
                        int f) -> const std::vector<PatchNode>& {
        auto key = std::make_pair(idx, f);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        std::vector<int> c = base;
        for (auto& v : c) v *= f;
        return cache.emplace(key, patch_nodes(p, c)).first->second;
    };

    std::vector<double> pair_values;
    long long nodes = 0;
    int pair_idx = 0;
    for (std::size_t ia = 0; ia < A.patches.size(); ++ia) {
        for (std::size_t ib = 0; ib < B.patches.size(); ++ib, ++pair_idx) {
            const auto& na = get_nodes(cache_a, A.patches[ia], counts_a[ia],
                                       static_cast<int>(ia), factor[pair_idx]);
            const auto& nb = get_nodes(cache_b, B.patches[ib], counts_b[ib],
                                       static_cast<int>(ib), factor[pair_idx]);
            nodes += static_cast<long long>(na.size()) + nb.size();
            pair_values.push_back(pair_sum(na, nb, delta_near, A.patches[ia].label,
                                           B.patches[ib].label));
        }
    }
    if (nodes_out) *nodes_out = nodes;
    return pairwise_sum(std::move(pair_values));
}

}  // namespace

Estimate link(const SingularManifold& A, const SingularManifold& B,
              const QuadratureConfig& q) {
    if (A.patches.empty() || B.patches.empty())
        throw std::invalid_argument("link: empty manifold");
    double delta = q.delta_near;
    if (delta <= 0.0) delta = 1e-3 * manifold_scale(A, B);

    std::vector<std::vector<int>> counts_a, counts_b;
    for (const auto& p : A.patches) counts_a.emplace_back(p.dim, q.points_per_axis);
    for (const auto& p : B.patches) counts_b.emplace_back(p.dim, q.points_per_axis);

    // close patch pairs get finer grids (the kernel grows like 1/d^{n-1})
    std::vector<int> factor(A.patches.size() * B.patches.size(), 1);
    int pair_idx = 0;
    for (std::size_t ia = 0; ia < A.patches.size(); ++ia) {
        const auto coarse_a = patch_nodes(A.patches[ia], std::vector<int>(A.patches[ia].dim, 6));
        const double da = patch_diameter(A.patches[ia]);
        for (std::size_t ib = 0; ib < B.patches.size(); ++ib, ++pair_idx) {
            const auto coarse_b =
                patch_nodes(B.patches[ib], std::vector<int>(B.patches[ib].dim, 6));
            double dmin = 1e300;
            for (auto& na : coarse_a)
                for (auto& nb : coarse_b) dmin = std::min(dmin, dist(na.x, nb.x));
            const double diam = std::max(da, patch_diameter(B.patches[ib]));
            double threshold = 10.0 * diam;
            int f = 1;
            for (int d = 0; d < q.max_subdivision_depth && dmin < threshold; ++d) {
                f *= 2;
                threshold *= 0.5;
            }
            factor[pair_idx] = f;
        }
    }

    long long nodes_fine = 0;
    const double coarse = evaluate_at(A, B, counts_a, counts_b, factor, delta, nullptr);
    std::vector<int> factor2 = factor;
    for (auto& f : factor2) f *= 2;
    const double fine = evaluate_at(A, B, counts_a, counts_b, factor2, delta, &nodes_fine);

    Estimate e;
    e.value = fine;
    e.std_error = std::abs(fine - coarse);
    e.n_samples = nodes_fine;
    return e;
}

double min_distance(const SingularManifold& A, const SingularManifold& B) {
    double dmin = 1e300;
    double margin = 0.0;
    std::vector<std::vector<PatchNode>> na, nb;
    auto collect = [&](const SingularManifold& m, std::vector<std::vector<PatchNode>>& out) {
        for (const auto& p : m.patches) {
            std::vector<int> counts(p.dim, 12);
            out.push_back(patch_nodes(p, counts));
            // first-order margin: max |tangent_i| * cell_i / 2, summed in quadrature
            double pm = 0.0;
            for (const auto& nd : out.back()) {
                double s = 0.0;
                for (int i = 0; i < p.dim; ++i) {
                    const double cell = p.rect.sides[i] / 12.0;
                    const double v = nd.tangents[i].norm() * cell * 0.5;
                    s += v * v;
                }
                pm = std::max(pm, std::sqrt(s));
            }
            margin = std::max(margin, pm);
        }
    };
    collect(A, na);
    collect(B, nb);
    for (auto& pa : na)
        for (auto& pb : nb)
            for (auto& x : pa)
                for (auto& y : pb) dmin = std::min(dmin, dist(x.x, y.x));
    return std::max(0.0, dmin - 2.0 * margin);
}

std::vector<ParamPatch> prune_cancelling_patches(std::vector<ParamPatch> patches,
                                                 double tol) {
    std::vector<bool> dead(patches.size(), false);
    auto coincide = [&](const ParamPatch& a, const ParamPatch& b) {
        if (a.dim != b.dim || a.orientation != -b.orientation) return false;
        if (a.rect.sides != b.rect.sides) return false;
        const int per_axis = 3;
        long long total = 1;
        for (int i = 0; i < a.dim; ++i) total *= per_axis;
        std::vector<double> u(a.dim, 0.0);
        for (long long idx = 0; idx < total; ++idx) {
            long long rem = idx;
            for (int i = 0; i < a.dim; ++i) {
                const int c = static_cast<int>(rem % per_axis);
                rem /= per_axis;
                u[i] = a.rect.sides[i] * (c + 0.5) / per_axis;
            }
            if (dist(a.map(u), b.map(u)) > tol) return false;
        }
        return true;
    };
    for (std::size_t i = 0; i < patches.size(); ++i) {
        if (dead[i]) continue;
        for (std::size_t j = i + 1; j < patches.size(); ++j) {
            if (dead[j]) continue;
            if (coincide(patches[i], patches[j])) {
                dead[i] = dead[j] = true;
                break;
            }
        }
    }
    std::vector<ParamPatch> out;
    for (std::size_t i = 0; i < patches.size(); ++i)
        if (!dead[i]) out.push_back(std::move(patches[i]));
    return out;
}

}  // namespace asymlink

#include "asymlink/flows.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace asymlink {

namespace {

constexpr double kEscapeTol = 1e-6;

/// One-parameter RK4 flow of a single generator for time t (fixed step <= a.dt).
Vec rk4_flow(const Action& a, const VectorField& X, double t, Vec p) {
    if (t == 0.0) return p;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) / a.dt)));
    const double h = t / steps;
    for (int s = 0; s < steps; ++s) {
        const Vec k1 = X.eval(p);
        const Vec k2 = X.eval(p + (0.5 * h) * k1);
        const Vec k3 = X.eval(p + (0.5 * h) * k2);
        const Vec k4 = X.eval(p + h * k3);
        p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double sd = a.domain.signed_distance(p);
        if (sd > kEscapeTol)
            throw std::runtime_error("flow: trajectory escaped the domain");
        if (sd > 0.0) p = a.domain.project_inside(p);
    }
    return p;
}

struct AxisSpec {
    int count = 1;
    double length = 0.0;
    bool fixed = false;
    double fixed_value = 0.0;
};

/// Sweeps the tensor grid of flow parameters, reusing trajectories: axis k-1
/// (the generator applied first) is the outermost loop, and along each axis the
/// next node is reached by integrating only the parameter increment.
void sweep_rec(const Action& a, int axis, const Vec& base, std::vector<double>& t,
               const std::vector<AxisSpec>& axes,
               const std::function<void(const std::vector<double>&, const Vec&)>& emit) {
    if (axis < 0) {
        emit(t, base);
        return;
    }
    const AxisSpec& ax = axes[axis];
    const VectorField& X = a.generators[axis];
    if (ax.fixed) {
        t[axis] = ax.fixed_value;
        sweep_rec(a, axis - 1, rk4_flow(a, X, ax.fixed_value, base), t, axes, emit);
        return;
    }
    const double step = ax.length / ax.count;
    Vec cur = base;
    double prev = 0.0;
    for (int c = 0; c < ax.count; ++c) {
        const double tc = (c + 0.5) * step;
        cur = rk4_flow(a, X, tc - prev, cur);
        prev = tc;
        t[axis] = tc;
        sweep_rec(a, axis - 1, cur, t, axes, emit);
    }
}

}  // namespace

std::vector<PatchNode> patch_nodes(const ParamPatch& p, const std::vector<int>& counts) {
    if (static_cast<int>(counts.size()) != p.dim)
        throw std::invalid_argument("patch_nodes: counts size != patch dim");
    std::vector<PatchNode> out;
    if (p.nodes_hook) {
        out = p.nodes_hook(counts);  // hooks produce unsigned weights
    } else {
        double cell = 1.0;
        for (int i = 0; i < p.dim; ++i) cell *= p.rect.sides[i] / counts[i];
        long long total = 1;
        for (int c : counts) total *= c;
        out.reserve(total);
        std::vector<double> t(p.dim, 0.0);
        for (long long idx = 0; idx < total; ++idx) {
            long long rem = idx;
            for (int i = 0; i < p.dim; ++i) {
                const int c = static_cast<int>(rem % counts[i]);
                rem /= counts[i];
                t[i] = (c + 0.5) * p.rect.sides[i] / counts[i];
            }
            PatchNode node;
            node.t = t;
            node.x = p.map(t);
            node.tangents = p.tangent(t);
            node.weight = cell;
            out.push_back(std::move(node));
        }
    }
    if (p.orientation != 1)
        for (auto& nd : out) nd.weight *= p.orientation;
    return out;
}

double patch_diameter(const ParamPatch& p) {
    const std::vector<int> counts(p.dim, 5);
    auto nodes = patch_nodes(p, counts);
    double d = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            d = std::max(d, dist(nodes[i].x, nodes[j].x));
    return d;
}

MultiVector Action::wedge_at(const Vec& p) const {
    return wedge_vectors(generator_values(p));
}

std::vector<Vec> Action::generator_values(const Vec& p) const {
    std::vector<Vec> vs;
    vs.reserve(generators.size());
    for (auto& g : generators) vs.push_back(g.eval(p));
    return vs;
}

Action make_action(const Domain& domain, std::vector<VectorField> generators) {
    Action a;
    a.domain = domain;
    a.generators = std::move(generators);
    double vmax = 0.0;
    Vec lo, hi;
    domain.bounding_box(lo, hi);
    for (long long i = 0; i < 512; ++i) {
        auto u = halton_point(i, domain.dim());
        Vec x(domain.dim());
        for (int j = 0; j < domain.dim(); ++j) x[j] = lo[j] + (hi[j] - lo[j]) * u[j];
        if (!domain.contains(x)) continue;
        for (auto& g : a.generators) vmax = std::max(vmax, g.eval(x).norm());
    }
    a.dt = 1e-2 * domain.diameter() / std::max(vmax, 1e-12);
    a.dt = std::min(a.dt, 1e-2 * domain.diameter());
    return a;
}

Vec sample_action_point(const Action& a, RngStream& rng) {
    if (!a.support) return sample_uniform_one(a.domain, rng);
    return sample_region(*a.support, rng);
}

double action_sample_volume(const Action& a) {
    return a.support ? a.support->volume : a.domain.volume();
}

Vec flow(const Action& a, const std::vector<double>& t, const Vec& p) {
    if (static_cast<int>(t.size()) != a.k())
        throw std::invalid_argument("flow: wrong parameter dimension");
    if (!a.domain.contains(p) && a.domain.signed_distance(p) > kEscapeTol)
        throw std::invalid_argument("flow: start point outside domain");
    Vec x = p;
    for (int i = a.k() - 1; i >= 0; --i) x = rk4_flow(a, a.generators[i], t[i], x);
    return x;
}

ParamPatch orbit_patch(const Action& a, const Vec& p, const Rectangle& T) {
    if (T.dim() != a.k()) throw std::invalid_argument("orbit_patch: rectangle dim != k");
    ParamPatch patch;
    patch.dim = a.k();
    patch.rect = T;
    patch.orientation = 1;
    patch.interior = true;
    patch.label = "orbit";
    Action ac = a;
    Vec base = p;
    patch.map = [ac, base](const std::vector<double>& t) { return flow(ac, t, base); };
    patch.tangent = [ac, base](const std::vector<double>& t) {
        return ac.generator_values(flow(ac, t, base));
    };
    patch.nodes_hook = [ac, base, T](const std::vector<int>& counts) {
        const int k = ac.k();
        std::vector<AxisSpec> axes(k);
        double cell = 1.0;
        for (int i = 0; i < k; ++i) {
            axes[i].count = counts[i];
            axes[i].length = T.sides[i];
            cell *= T.sides[i] / counts[i];
        }
        std::vector<PatchNode> out;
        long long total = 1;
        for (int c : counts) total *= c;
        out.reserve(total);
        std::vector<double> t(k, 0.0);
        sweep_rec(ac, k - 1, base, t, axes,
                  [&](const std::vector<double>& tt, const Vec& x) {
                      PatchNode node;
                      node.t = tt;
                      node.x = x;
                      node.tangents = ac.generator_values(x);
                      node.weight = cell;
                      out.push_back(std::move(node));
                  });
        return out;
    };
    return patch;
}

std::vector<ParamPatch> cone_patches(const Action& a, const Vec& p, const Rectangle& T,
                                     const Vec& apex) {
    if (!a.domain.contains(apex) && a.domain.signed_distance(apex) > kEscapeTol)
        throw std::invalid_argument("cone_patches: apex outside domain");
    const int k = a.k();
    std::vector<ParamPatch> cones;
    cones.reserve(2 * k);
    for (int i = 0; i < k; ++i) {
        for (int delta = 0; delta <= 1; ++delta) {
            ParamPatch c;
            c.dim = k;
            c.rect.sides.push_back(1.0);  // r
            for (int j = 0; j < k; ++j)
                if (j != i) c.rect.sides.push_back(T.sides[j]);
            c.orientation = (((i + 1) + delta) % 2) ? -1 : 1;
            c.interior = true;
            c.label = "cone_i" + std::to_string(i + 1) + (delta ? "_hi" : "_lo");
            Action ac = a;
            Vec base = p, ap = apex;
            const double ti = delta * T.sides[i];
            auto face_params = [k, i, ti](const std::vector<double>& u) {
                std::vector<double> t(k, 0.0);
                t[i] = ti;
                int m = 1;
                for (int j = 0; j < k; ++j)
                    if (j != i) t[j] = u[m++];
                return t;
            };
            c.map = [ac, base, ap, face_params](const std::vector<double>& u) {
                const Vec fp = flow(ac, face_params(u), base);
                return (1.0 - u[0]) * fp + u[0] * ap;
            };
            c.tangent = [ac, base, ap, face_params, i, k](const std::vector<double>& u) {
                const Vec fp = flow(ac, face_params(u), base);
                std::vector<Vec> ts;
                ts.push_back(ap - fp);
                for (int j = 0; j < k; ++j)
                    if (j != i) ts.push_back((1.0 - u[0]) * ac.generators[j].eval(fp));
                return ts;
            };
            c.nodes_hook = [ac, base, ap, T, i, k, ti](const std::vector<int>& counts) {
                std::vector<AxisSpec> axes(k);
                double face_cell = 1.0;
                int m = 1;
                for (int j = 0; j < k; ++j) {
                    if (j == i) {
                        axes[j].fixed = true;
                        axes[j].fixed_value = ti;
                    } else {
                        axes[j].count = counts[m];
                        axes[j].length = T.sides[j];
                        face_cell *= T.sides[j] / counts[m];
                        ++m;
                    }
                }
                const int mr = counts[0];
                std::vector<PatchNode> out;
                std::vector<double> t(k, 0.0);
                sweep_rec(ac, k - 1, base, t, axes,
                          [&](const std::vector<double>& tt, const Vec& fp) {
                              std::vector<Vec> gens;
                              for (int j = 0; j < k; ++j)
                                  if (j != i) gens.push_back(ac.generators[j].eval(fp));
                              for (int cr = 0; cr < mr; ++cr) {
                                  const double r = (cr + 0.5) / mr;
                                  PatchNode node;
                                  node.t.push_back(r);
                                  for (int j = 0; j < k; ++j)
                                      if (j != i) node.t.push_back(tt[j]);
                                  node.x = (1.0 - r) * fp + r * ap;
                                  node.tangents.push_back(ap - fp);
                                  for (auto& g : gens)
                                      node.tangents.push_back((1.0 - r) * g);
                                  node.weight = face_cell / mr;
                                  out.push_back(std::move(node));
                              }
                          });
                return out;
            };
            cones.push_back(std::move(c));
        }
    }
    return cones;
}

double ClosedOrbitManifold::closure_gap(int samples_per_axis) const {
    const int k = orbit.dim;
    double gap = 0.0;
    int cone_idx = 0;
    for (int i = 0; i < k; ++i) {
        for (int delta = 0; delta <= 1; ++delta, ++cone_idx) {
            const ParamPatch& c = cones[cone_idx];
            // sample the face ∂_{iδ}T and compare orbit.map with the cone r=0 edge
            long long total = 1;
            for (int j = 1; j < k; ++j) total *= samples_per_axis;
            for (long long idx = 0; idx < total; ++idx) {
                std::vector<double> u(k, 0.0);  // cone params, u[0] = r = 0
                std::vector<double> t(k, 0.0);  // orbit params
                t[i] = delta * orbit.rect.sides[i];
                long long rem = idx;
                int m = 1;
                for (int j = 0; j < k; ++j) {
                    if (j == i) continue;
                    const int cidx = static_cast<int>(rem % samples_per_axis);
                    rem /= samples_per_axis;
                    const double tj = orbit.rect.sides[j] *
                                      (cidx + 0.5) / samples_per_axis;
                    t[j] = tj;
                    u[m++] = tj;
                }
                gap = std::max(gap, dist(orbit.map(t), c.map(u)));
            }
        }
    }
    return gap;
}

ClosedOrbitManifold orbit_closure(const Action& a, const Vec& p, const Rectangle& T,
                                  const Vec& apex) {
    ClosedOrbitManifold m;
    m.orbit = orbit_patch(a, p, T);
    m.cones = cone_patches(a, p, T, apex);
    m.apex = apex;
    return m;
}

ActionDiagnostics action_diagnostics(const Action& a, int samples, RngStream& rng) {
    ActionDiagnostics d;
    const FDConfig fd;
    auto interior = sample_uniform(a.domain, rng, samples);
    std::vector<VectorField> gens = a.generators;
    for (const Vec& x : interior) {
        for (std::size_t i = 0; i < gens.size(); ++i) {
            d.max_divergence =
                std::max(d.max_divergence, std::abs(divergence_scalar(gens[i], x, fd)));
            for (std::size_t j = i + 1; j < gens.size(); ++j) {
                const Vec b = lie_bracket(gens[i], gens[j], fd).eval(x);
                d.max_bracket = std::max(d.max_bracket, b.norm());
            }
        }
    }
    if (a.domain.kind() != Domain::Kind::Box) {
        for (int s = 0; s < samples; ++s) {
            const Vec x = sample_boundary_one(a.domain, rng);
            const Vec nrm = a.domain.boundary_normal(x);
            for (auto& g : gens)
                d.max_normal_component =
                    std::max(d.max_normal_component, std::abs(dot(g.eval(x), nrm)));
        }
    }
    return d;
}

Vec sample_boundary_one(const Domain& d, RngStream& rng) {
    const int n = d.dim();
    const Vec u = rng.unit_vector(n);
    switch (d.kind()) {
        case Domain::Kind::Ball:
        case Domain::Kind::Ellipsoid: {
            Vec lo, hi;
            d.bounding_box(lo, hi);
            Vec x = d.center();
            for (int i = 0; i < n; ++i) x[i] += 0.5 * (hi[i] - lo[i]) * u[i];
            // for the ellipsoid this lands exactly on the boundary ellipse
            return x;
        }
        case Domain::Kind::Box: {
            Vec lo, hi;
            d.bounding_box(lo, hi);
            Vec x = rng.uniform_box(lo, hi);
            // push the coordinate closest (relatively) to a face onto that face
            int best = 0;
            double bestv = -1.0;
            for (int i = 0; i < n; ++i) {
                const double c = 0.5 * (lo[i] + hi[i]);
                const double v = std::abs(x[i] - c) / (0.5 * (hi[i] - lo[i]));
                if (v > bestv) { bestv = v; best = i; }
            }
            const double c = 0.5 * (lo[best] + hi[best]);
            x[best] = (x[best] >= c) ? hi[best] : lo[best];
            return x;
        }
    }
    return Vec(n);
}

}  // namespace asymlink

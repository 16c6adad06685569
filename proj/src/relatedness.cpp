#include "foliate/relatedness.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

namespace foliate {

Transformation identity_transformation(int) {
    Transformation t;
    t.domain = [](const Vec&) { return true; };
    t.forward = [](const Vec& x) { return x; };
    t.inverse = [](const Vec& x) { return x; };
    t.label = "id";
    return t;
}

Transformation translation(const Vec& offset) {
    Transformation t;
    t.domain = [](const Vec&) { return true; };
    t.forward = [offset](const Vec& x) { return add(x, offset); };
    t.inverse = [offset](const Vec& x) { return sub(x, offset); };
    t.label = "translate";
    return t;
}

Transformation rotation2d(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    Transformation t;
    t.domain = [](const Vec&) { return true; };
    t.forward = [c, s](const Vec& x) { return Vec{c * x[0] - s * x[1], s * x[0] + c * x[1]}; };
    t.inverse = [c, s](const Vec& x) { return Vec{c * x[0] + s * x[1], -s * x[0] + c * x[1]}; };
    t.label = "rotate";
    return t;
}

Transformation restrict_to(const Transformation& t, const Predicate& sub_domain,
                           const std::string& label_suffix) {
    Transformation r = t;
    const Predicate base = t.domain;
    r.domain = [base, sub_domain](const Vec& x) { return base(x) && sub_domain(x); };
    r.label = t.label + label_suffix;
    return r;
}

Transformation invert(const Transformation& t) {
    Transformation r;
    r.forward = t.inverse;
    r.inverse = t.forward;
    // domain of the inverse is the image; test by pulling back
    const Predicate dom = t.domain;
    const VecMap inv = t.inverse;
    r.domain = [dom, inv](const Vec& y) { return dom(inv(y)); };
    r.label = t.label + "^-1";
    return r;
}

Transformation compose(const Transformation& g, const Transformation& f) {
    Transformation r;
    const Predicate fd = f.domain, gd = g.domain;
    const VecMap ff = f.forward, gf = g.forward;
    const VecMap fi = f.inverse, gi = g.inverse;
    r.domain = [fd, gd, ff](const Vec& x) { return fd(x) && gd(ff(x)); };
    r.forward = [gf, ff](const Vec& x) { return gf(ff(x)); };
    r.inverse = [fi, gi](const Vec& x) { return fi(gi(x)); };
    r.label = g.label + "*" + f.label;
    return r;
}

Transformation compose(const Transformation& g, const Transformation& f,
                       const std::vector<Vec>& samples) {
    bool any = false;
    for (const Vec& x : samples)
        if (f.domain(x) && g.domain(f.forward(x))) {
            any = true;
            break;
        }
    if (!any) throw EmptyOverlap("no sampled point survives f then g");
    return compose(g, f);
}

bool AxiomReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const AxiomCheck& c) { return c.pass; });
}

namespace {

double roundtrip_residual(const Transformation& t, const std::vector<Vec>& samples) {
    double worst = 0.0;
    for (const Vec& x : samples) {
        if (!t.domain(x)) continue;
        worst = std::max(worst, dist(t.inverse(t.forward(x)), x));
    }
    return worst;
}

}  // namespace

AxiomReport verify_pseudogroup_axioms(const Pseudogroup& p,
                                      const std::vector<Vec>& samples,
                                      double tolerance) {
    AxiomReport rep;

    // (a) restriction closure: a member restricted to part of its domain is
    // still an invertible local map agreeing with the original there.
    {
        AxiomCheck c{"restriction", true, 0.0};
        for (const auto& g : p.generators) {
            // restrict to the half-space through the first sample in domain
            const Vec* anchor = nullptr;
            for (const Vec& x : samples)
                if (g.domain(x)) {
                    anchor = &x;
                    break;
                }
            if (!anchor) continue;
            const Vec a = *anchor;
            auto sub = [a](const Vec& x) { return dist(x, a) <= 1.0; };
            const Transformation r = restrict_to(g, sub);
            for (const Vec& x : samples) {
                if (!r.domain(x)) continue;
                const double res = std::max(dist(r.forward(x), g.forward(x)),
                                            dist(r.inverse(r.forward(x)), x));
                c.worst_residual = std::max(c.worst_residual, res);
            }
        }
        c.pass = c.worst_residual <= tolerance;
        rep.checks.push_back(c);
    }

    // (b) patching: a member split over two overlapping sub-domains and glued
    // back by membership agrees with the original everywhere sampled.
    {
        AxiomCheck c{"patching", true, 0.0};
        for (const auto& g : p.generators) {
            const Vec* anchor = nullptr;
            for (const Vec& x : samples)
                if (g.domain(x)) {
                    anchor = &x;
                    break;
                }
            if (!anchor) continue;
            const Vec a = *anchor;
            auto left = [a](const Vec& x) { return x[0] <= a[0] + 0.5; };
            auto right = [a](const Vec& x) { return x[0] >= a[0] - 0.5; };
            const Transformation gl = restrict_to(g, left, "|L");
            const Transformation gr = restrict_to(g, right, "|R");
            for (const Vec& x : samples) {
                if (!g.domain(x)) continue;
                if (!gl.domain(x) && !gr.domain(x)) continue;
                const Vec y = gl.domain(x) ? gl.forward(x) : gr.forward(x);
                c.worst_residual = std::max(c.worst_residual, dist(y, g.forward(x)));
            }
        }
        c.pass = c.worst_residual <= tolerance;
        rep.checks.push_back(c);
    }

    // (c) composition closure: composites up to closure_depth remain
    // invertible local maps where defined.
    {
        AxiomCheck c{"composition", true, 0.0};
        std::vector<Transformation> layer = p.generators;
        for (int depth = 1; depth < p.closure_depth; ++depth) {
            std::vector<Transformation> next;
            for (const auto& g : p.generators)
                for (const auto& f : layer) {
                    const Transformation comp = compose(g, f);
                    bool defined = false;
                    for (const Vec& x : samples)
                        if (comp.domain(x)) {
                            defined = true;
                            break;
                        }
                    if (!defined) continue;
                    c.worst_residual =
                        std::max(c.worst_residual, roundtrip_residual(comp, samples));
                    if (next.size() < 64) next.push_back(comp);
                }
            layer = std::move(next);
            if (layer.empty()) break;
        }
        c.pass = c.worst_residual <= tolerance;
        rep.checks.push_back(c);
    }

    // (d) identity present.
    {
        AxiomCheck c{"identity", false, std::numeric_limits<double>::infinity()};
        for (const auto& g : p.generators) {
            double worst = 0.0;
            bool touched = false;
            for (const Vec& x : samples) {
                if (!g.domain(x)) continue;
                touched = true;
                worst = std::max(worst, dist(g.forward(x), x));
            }
            if (touched) c.worst_residual = std::min(c.worst_residual, worst);
        }
        c.pass = c.worst_residual <= tolerance;
        rep.checks.push_back(c);
    }

    // (e) inverse closure: every member is undone by some member.
    {
        AxiomCheck c{"inverse", true, 0.0};
        for (const auto& g : p.generators) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& h : p.generators) {
                double worst = 0.0;
                bool touched = false;
                for (const Vec& x : samples) {
                    if (!g.domain(x)) continue;
                    const Vec y = g.forward(x);
                    if (!h.domain(y)) continue;
                    touched = true;
                    worst = std::max(worst, dist(h.forward(y), x));
                }
                if (touched) best = std::min(best, worst);
            }
            c.worst_residual = std::max(c.worst_residual, best);
        }
        c.pass = c.worst_residual <= tolerance;
        rep.checks.push_back(c);
    }

    return rep;
}

std::vector<Vec> orbit(const Pseudogroup& p, const Vec& x, int budget,
                       double dedup_tol) {
    bool in_some = false;
    for (const auto& g : p.generators)
        if (g.domain(x)) {
            in_some = true;
            break;
        }
    if (!in_some) throw NotInDomain("orbit seed outside every generator domain");

    std::vector<Vec> out;
    std::deque<Vec> frontier;
    auto seen = [&out, dedup_tol](const Vec& y) {
        for (const Vec& z : out)
            if (dist(y, z) <= dedup_tol) return true;
        return false;
    };
    out.push_back(x);
    frontier.push_back(x);
    // FIFO over generator-index order gives word-length-then-lex enumeration
    while (!frontier.empty() && static_cast<int>(out.size()) < budget) {
        const Vec cur = frontier.front();
        frontier.pop_front();
        for (const auto& g : p.generators) {
            if (!g.domain(cur)) continue;
            const Vec y = g.forward(cur);
            if (seen(y)) continue;
            out.push_back(y);
            frontier.push_back(y);
            if (static_cast<int>(out.size()) >= budget) break;
        }
    }
    return out;
}

RelatednessReport verify_relatedness(const RelatednessNotion& n,
                                     const std::vector<Vec>& samples,
                                     int orbit_budget, double tol) {
    RelatednessReport rep;
    const std::size_t N = samples.size();

    std::vector<std::vector<int>> membership(N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t m = 0; m < n.members.size(); ++m)
            if (n.members[m].domain(samples[i]))
                membership[i].push_back(static_cast<int>(m));

    rep.domains_disjoint = true;
    rep.domains_cover = true;
    for (std::size_t i = 0; i < N; ++i) {
        if (membership[i].size() > 1) {
            rep.domains_disjoint = false;
            rep.failures.push_back("sample in multiple member domains");
        }
        if (membership[i].empty()) {
            rep.domains_cover = false;
            rep.failures.push_back("sample uncovered by member domains");
        }
    }

    // union-find over the sampled orbit relation
    std::vector<int> parent(N);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    auto unite = [&](int i, int j) { parent[find(i)] = find(j); };

    rep.orbits_partition = true;
    for (std::size_t i = 0; i < N; ++i) {
        if (membership[i].empty()) continue;
        const int m = membership[i].front();
        std::vector<Vec> orb;
        try {
            orb = orbit(n.members[m].group, samples[i], orbit_budget);
        } catch (const NotInDomain&) {
            continue;
        }
        for (const Vec& y : orb)
            for (std::size_t j = 0; j < N; ++j)
                if (dist(y, samples[j]) <= tol) {
                    if (!n.members[m].domain(samples[j])) {
                        rep.orbits_partition = false;
                        rep.failures.push_back("orbit crosses member domains");
                    } else {
                        unite(static_cast<int>(i), static_cast<int>(j));
                    }
                }
    }

    rep.partition.assign(N, -1);
    std::vector<int> cell_of_root(N, -1);
    int next_cell = 0;
    for (std::size_t i = 0; i < N; ++i) {
        if (membership[i].empty()) continue;
        const int r = find(static_cast<int>(i));
        if (cell_of_root[r] < 0) cell_of_root[r] = next_cell++;
        rep.partition[i] = cell_of_root[r];
    }
    return rep;
}

Metric euclidean_metric() {
    return Metric{[](const Vec& a, const Vec& b) { return dist(a, b); }};
}

Metric squared_euclidean_metric() {
    return Metric{[](const Vec& a, const Vec& b) {
        const double d = dist(a, b);
        return d * d;
    }};
}

double invariant_check(const std::function<double(const Vec&)>& f,
                       const std::vector<Transformation>& ts,
                       const std::vector<Vec>& samples) {
    double worst = 0.0;
    for (const Vec& x : samples)
        for (const auto& t : ts) {
            if (!t.domain(x)) throw NotInDomain("invariant sample outside domain");
            worst = std::max(worst, std::abs(f(x) - f(t.forward(x))));
        }
    return worst;
}

std::vector<int> similarity_partition(const std::vector<Vec>& refs, const Metric& m,
                                      const std::vector<Vec>& samples) {
    std::vector<int> assign(samples.size(), 0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        int arg = 0;
        for (std::size_t r = 0; r < refs.size(); ++r) {
            const double d = m.distance(samples[i], refs[r]);
            if (d < best) {
                best = d;
                arg = static_cast<int>(r);
            }
        }
        assign[i] = arg;
    }
    return assign;
}

Pseudogroup translation_pseudogroup(int dim, double unit, int depth) {
    Pseudogroup p;
    p.closure_depth = depth;
    p.generators.push_back(identity_transformation(dim));
    for (int i = 0; i < dim; ++i) {
        Vec off(dim, 0.0);
        off[i] = unit;
        p.generators.push_back(translation(off));
        off[i] = -unit;
        p.generators.push_back(translation(off));
    }
    return p;
}

Pseudogroup rotation_pseudogroup(int n_angles, int depth) {
    Pseudogroup p;
    p.closure_depth = depth;
    p.generators.push_back(identity_transformation(2));
    const double step = 2.0 * M_PI / n_angles;
    p.generators.push_back(rotation2d(step));
    p.generators.push_back(rotation2d(-step));
    return p;
}

}  // namespace foliate

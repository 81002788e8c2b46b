#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mcg/perm.hpp"

namespace mcg {

// A named permutation representation: an ordered list of (generator name,
// permutation) pairs, all of one degree.
struct PermRep {
    int degree = 0;
    std::vector<std::pair<std::string, Perm>> gens;

    void add(std::string name, Perm p) {
        if (p.degree() != degree) throw error("PermRep: generator degree mismatch");
        for (auto& [n, _] : gens)
            if (n == name) throw error("PermRep: duplicate generator name " + name);
        gens.emplace_back(std::move(name), std::move(p));
    }

    const Perm& image(std::string_view name) const {
        for (auto& [n, p] : gens)
            if (n == name) return p;
        throw error("PermRep: unknown generator " + std::string(name));
    }

    bool has(std::string_view name) const {
        for (auto& [n, p] : gens)
            if (n == name) return true;
        return false;
    }

    std::set<std::string> names() const {
        std::set<std::string> s;
        for (auto& [n, _] : gens) s.insert(n);
        return s;
    }

    std::vector<Perm> perms() const {
        std::vector<Perm> v;
        v.reserve(gens.size());
        for (auto& [_, p] : gens) v.push_back(p);
        return v;
    }
};

/// Finest partition of {0,...,m-1} into orbits of the generated group.
/// Orbits are sorted by minimum point, points ascending within an orbit, so
/// the result is independent of generator order.
inline std::vector<std::vector<int>> orbits(const std::vector<Perm>& gens, int degree) {
    std::vector<int> comp(static_cast<size_t>(degree), -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < degree; ++s) {
        if (comp[static_cast<size_t>(s)] != -1) continue;
        int id = static_cast<int>(out.size());
        std::vector<int> orb{s};
        comp[static_cast<size_t>(s)] = id;
        for (size_t qi = 0; qi < orb.size(); ++qi) {
            int x = orb[qi];
            for (const Perm& g : gens) {
                int y = g(x);
                if (comp[static_cast<size_t>(y)] == -1) {
                    comp[static_cast<size_t>(y)] = id;
                    orb.push_back(y);
                }
            }
        }
        std::sort(orb.begin(), orb.end());
        out.push_back(std::move(orb));
    }
    return out;
}

inline std::vector<std::vector<int>> orbits(const PermRep& rep) {
    return orbits(rep.perms(), rep.degree);
}

inline bool is_transitive(const PermRep& rep) {
    if (rep.degree <= 1) return true;
    return orbits(rep).size() == 1;
}

// Deterministic stabilizer chain (Schreier-Sims with first-moved base points
// and generators processed in a fixed order).  Construction mutates internal
// state and is confined to one thread; afterwards the chain is immutable.
class StabChain {
public:
    StabChain(const std::vector<Perm>& gens, int degree) : degree_(degree) {
        for (const Perm& g : gens) {
            if (g.degree() != degree) throw error("StabChain: generator degree mismatch");
            insert(g, 0);
        }
    }

    BigInt order() const {
        BigInt o = 1;
        for (const auto& lv : levels_) o *= static_cast<int>(lv.orbit.size());
        return o;
    }

    bool contains(const Perm& p) const {
        if (p.degree() != degree_) return false;
        Perm r = p;
        for (const auto& lv : levels_) {
            int delta = r(lv.base);
            if (delta == lv.base) continue;
            if (lv.where[static_cast<size_t>(delta)] < 0) return false;
            r = compose(inverse(transversal(lv, delta)), r);
        }
        return r.is_identity();
    }

    size_t base_length() const { return levels_.size(); }

private:
    struct Level {
        int base = 0;
        std::vector<Perm> gens;
        std::vector<int> orbit;          // discovery order, orbit[0] == base
        std::vector<int> where;          // point -> position in orbit, -1 outside
        std::vector<int> from_point;     // Schreier vector: predecessor point
        std::vector<int> from_gen;       // Schreier vector: generator index
    };

    int degree_;
    std::vector<Level> levels_;

    // u with u(base) = delta, built by walking the Schreier tree.
    Perm transversal(const Level& lv, int delta) const {
        Perm u = Perm::identity(degree_);
        int x = delta;
        while (x != lv.base) {
            const Perm& g = lv.gens[static_cast<size_t>(lv.from_gen[static_cast<size_t>(x)])];
            u = compose(u, inverse(g));  // accumulated right-to-left
            x = lv.from_point[static_cast<size_t>(x)];
        }
        return inverse(u);
    }

    void recompute_orbit(Level& lv) {
        lv.orbit.assign(1, lv.base);
        lv.where.assign(static_cast<size_t>(degree_), -1);
        lv.from_point.assign(static_cast<size_t>(degree_), -1);
        lv.from_gen.assign(static_cast<size_t>(degree_), -1);
        lv.where[static_cast<size_t>(lv.base)] = 0;
        for (size_t qi = 0; qi < lv.orbit.size(); ++qi) {
            int x = lv.orbit[qi];
            for (size_t gi = 0; gi < lv.gens.size(); ++gi) {
                int y = lv.gens[gi](x);
                if (lv.where[static_cast<size_t>(y)] < 0) {
                    lv.where[static_cast<size_t>(y)] = static_cast<int>(lv.orbit.size());
                    lv.from_point[static_cast<size_t>(y)] = x;
                    lv.from_gen[static_cast<size_t>(y)] = static_cast<int>(gi);
                    lv.orbit.push_back(y);
                }
            }
        }
    }

    // Sift p through levels starting at `from`; returns residue and the level
    // where sifting stopped.
    std::pair<Perm, size_t> sift_from(Perm p, size_t from) const {
        size_t lvl = from;
        while (lvl < levels_.size()) {
            const Level& lv = levels_[lvl];
            int delta = p(lv.base);
            if (lv.where[static_cast<size_t>(delta)] < 0) return {p, lvl};
            p = compose(inverse(transversal(lv, delta)), p);
            ++lvl;
        }
        return {p, lvl};
    }

    void insert(const Perm& p, size_t level) {
        auto [res, lvl] = sift_from(p, level);
        if (res.is_identity()) return;
        if (lvl == levels_.size()) {
            Level nl;
            nl.base = -1;
            for (int i = 0; i < degree_; ++i)
                if (res(i) != i) {
                    nl.base = i;
                    break;
                }
            levels_.push_back(std::move(nl));
        }
        Level& lv = levels_[lvl];
        lv.gens.push_back(res);
        recompute_orbit(lv);
        // close this level under Schreier generators
        for (size_t oi = 0; oi < lv.orbit.size(); ++oi) {
            int beta = lv.orbit[oi];
            Perm u_beta = transversal(lv, beta);
            for (size_t gi = 0; gi < lv.gens.size(); ++gi) {
                const Perm& s = lv.gens[gi];
                int gamma = s(beta);
                Perm sg = compose(inverse(transversal(lv, gamma)), compose(s, u_beta));
                if (!sg.is_identity()) insert(sg, lvl + 1);
            }
        }
    }
};

inline BigInt group_order(const std::vector<Perm>& gens, int degree) {
    if (gens.empty()) return 1;
    return StabChain(gens, degree).order();
}

inline BigInt group_order(const PermRep& rep) { return group_order(rep.perms(), rep.degree); }

namespace detail {

// Shared propagation core for the centralizer and simultaneous-conjugacy
// backtracks.  Searches x with x·a_i = b_i·x for all i, i.e. x(a_i(p)) =
// b_i(x(p)); seeding x on one point of an <a>-orbit forces it on the whole
// orbit, so the search branches only on orbit representatives' images.
struct IntertwinerSearch {
    const std::vector<Perm>& a;
    const std::vector<Perm>& b;
    int degree;
    const SearchLimits& lim;
    std::uint64_t nodes = 0;

    std::vector<std::vector<int>> a_orbits;
    std::vector<int> x, xinv;       // partial bijection, -1 = unassigned
    std::vector<int> trail;

    IntertwinerSearch(const std::vector<Perm>& a_, const std::vector<Perm>& b_, int degree_,
                      const SearchLimits& lim_)
        : a(a_), b(b_), degree(degree_), lim(lim_) {
        a_orbits = orbits(a, degree);
        x.assign(static_cast<size_t>(degree), -1);
        xinv.assign(static_cast<size_t>(degree), -1);
    }

    bool assign(int p, int q) {
        if (x[static_cast<size_t>(p)] != -1) return x[static_cast<size_t>(p)] == q;
        if (xinv[static_cast<size_t>(q)] != -1) return false;
        x[static_cast<size_t>(p)] = q;
        xinv[static_cast<size_t>(q)] = p;
        trail.push_back(p);
        return true;
    }

    // Propagate from seed x(p0) = q0 across the <a>-orbit of p0.
    bool propagate(int p0, int q0, size_t trail_mark) {
        (void)trail_mark;
        if (!assign(p0, q0)) return false;
        size_t head = trail.size() - 1;
        while (head < trail.size()) {
            int p = trail[head++];
            int q = x[static_cast<size_t>(p)];
            for (size_t i = 0; i < a.size(); ++i) {
                if (++nodes > lim.max_nodes) throw budget_error("intertwiner search budget exceeded");
                if (!assign(a[i](p), b[i](q))) return false;
            }
        }
        return true;
    }

    void rewind(size_t mark) {
        while (trail.size() > mark) {
            int p = trail.back();
            trail.pop_back();
            xinv[static_cast<size_t>(x[static_cast<size_t>(p)])] = -1;
            x[static_cast<size_t>(p)] = -1;
        }
    }

    // Candidate filter: iteratively refined point labels (a point's label
    // folds in the labels of its images and preimages under each generator).
    // x must map a point to one with an equal label; labels are a pruning
    // device only, never a substitute for the propagation check.
    std::vector<std::uint64_t> color_a, color_b;

    static std::vector<std::uint64_t> refine_colors(const std::vector<Perm>& gens, int degree) {
        std::vector<Perm> invs;
        for (const Perm& g : gens) invs.push_back(inverse(g));
        std::vector<std::uint64_t> col(static_cast<size_t>(degree), 0), nxt(col);
        for (int round = 0; round < 8; ++round) {
            for (int p = 0; p < degree; ++p) {
                std::uint64_t h = col[static_cast<size_t>(p)] * 1099511628211ull + 0x9e3779b97f4a7c15ull;
                for (size_t i = 0; i < gens.size(); ++i) {
                    h = h * 1099511628211ull ^ col[static_cast<size_t>(gens[i](p))];
                    h = h * 1099511628211ull ^ (col[static_cast<size_t>(invs[i](p))] + i);
                }
                nxt[static_cast<size_t>(p)] = h;
            }
            col.swap(nxt);
        }
        return col;
    }

    void compute_colors() {
        color_a = refine_colors(a, degree);
        color_b = refine_colors(b, degree);
    }

    // Enumerate all solutions (or stop after the first if `first_only`).
    template <class Sink>
    bool search(size_t orbit_idx, Sink&& sink, bool first_only) {
        if (orbit_idx == a_orbits.size()) {
            std::vector<int> img(x.begin(), x.end());
            sink(Perm(std::move(img)));
            return first_only;
        }
        const auto& orb = a_orbits[orbit_idx];
        int p0 = orb[0];
        if (x[static_cast<size_t>(p0)] != -1)
            return search(orbit_idx + 1, sink, first_only);
        for (int q0 = 0; q0 < degree; ++q0) {
            if (xinv[static_cast<size_t>(q0)] != -1) continue;
            if (!color_a.empty() && color_a[static_cast<size_t>(p0)] != color_b[static_cast<size_t>(q0)])
                continue;
            size_t mark = trail.size();
            if (propagate(p0, q0, mark)) {
                if (search(orbit_idx + 1, sink, first_only)) return true;
            }
            rewind(mark);
        }
        return false;
    }
};

}  // namespace detail

/// All x in S_m commuting with every generator image, optionally filtered by
/// cycle type.  Backtrack over the orbit structure of the generated group.
inline std::vector<Perm> centralizing_elements(const PermRep& rep,
                                               const std::optional<CycleType>& filter = std::nullopt,
                                               const SearchLimits& lim = {}) {
    if (rep.degree > lim.max_degree)
        throw error("centralizing_elements: degree exceeds configured limit");
    auto gens = rep.perms();
    detail::IntertwinerSearch s(gens, gens, rep.degree, lim);
    std::vector<Perm> out;
    s.search(0, [&](Perm p) {
        if (!filter || cycle_type(p) == *filter) out.push_back(std::move(p));
    }, false);
    std::sort(out.begin(), out.end());
    return out;
}

/// Simultaneous conjugacy of two named representations: returns x with
/// x·a(T)·x⁻¹ = b(T) for every generator name T, or nullopt.  Prunes by
/// per-generator cycle type and orbit-size multisets before searching.
inline std::optional<Perm> are_equivalent(const PermRep& a, const PermRep& b,
                                          const SearchLimits& lim = {}) {
    if (a.degree != b.degree) return std::nullopt;
    if (a.names() != b.names()) throw error("are_equivalent: generator name sets differ");
    if (a.degree > lim.max_degree)
        throw error("are_equivalent: degree exceeds configured limit");

    std::vector<Perm> ga, gb;
    for (auto& [name, pa] : a.gens) {
        const Perm& pb = b.image(name);
        if (!(cycle_type(pa) == cycle_type(pb))) return std::nullopt;
        ga.push_back(pa);
        gb.push_back(pb);
    }
    auto sizes = [](const std::vector<std::vector<int>>& os) {
        std::multiset<size_t> m;
        for (auto& o : os) m.insert(o.size());
        return m;
    };
    if (sizes(orbits(ga, a.degree)) != sizes(orbits(gb, b.degree))) return std::nullopt;

    detail::IntertwinerSearch s(ga, gb, a.degree, lim);
    s.compute_colors();
    std::optional<Perm> found;
    s.search(0, [&](Perm p) { found = std::move(p); }, true);
    return found;
}

}  // namespace mcg

#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "mcg/f2.hpp"
#include "mcg/fpgrp.hpp"
#include "mcg/orders.hpp"
#include "mcg/permgrp.hpp"

namespace mcg {

// Quadratic form Q_b(x) = Σ_{i=1..g} x_i·x_{ī} + ⟨x,b⟩, encoded by its
// translation vector b.  All 2^{2g} such forms polarize to the symplectic
// pairing.
struct QuadForm {
    F2Vec b;
};

namespace detail {
/// Σ_{i=1..g} x_i·x_{ī}, the b = 0 quadratic part.
inline int quad_part(const F2Vec& x) {
    int g = x.dim / 2, acc = 0;
    for (int i = 0; i < g; ++i)
        acc ^= static_cast<int>((x.bits >> i) & (x.bits >> (x.dim - 1 - i)) & 1);
    return acc;
}
}  // namespace detail

inline int eval_form(const QuadForm& q, const F2Vec& x) {
    if (q.b.dim != x.dim) throw error("eval_form: dimension mismatch");
    return detail::quad_part(x) ^ pairing(x, q.b);
}

/// Arf invariant over the standard symplectic basis: Σ_{i=1..g} Q(e_i)·Q(e_ī).
inline int arf_invariant(const QuadForm& q) {
    int g = q.b.dim / 2, acc = 0;
    for (int i = 1; i <= g; ++i)
        acc ^= eval_form(q, basis_vec(i, q.b.dim)) & eval_form(q, basis_vec(q.b.dim + 1 - i, q.b.dim));
    return acc;
}

inline FormType form_type(const QuadForm& q) {
    return arf_invariant(q) == 0 ? FormType::plus : FormType::minus;
}

/// The twisted action on translation vectors: b^ω with Q_{b^ω}(x) = Q_b(ωx).
/// The map x ↦ Q_b(ωx) + Q_0(x) is linear (both forms polarize to the same
/// pairing), so it equals ⟨x, b^ω⟩; recovering coordinates from
/// t_i = Q_b(ω·e_i) gives (b^ω)_{ī} = t_i.
inline QuadForm act_on_form(const F2Mat& w, const QuadForm& q) {
    if (w.dim != q.b.dim) throw error("act_on_form: dimension mismatch");
    if (!is_symplectic(w)) throw error("act_on_form: matrix is not symplectic");
    std::uint64_t out = 0;
    for (int i = 1; i <= w.dim; ++i) {
        if (eval_form(q, col(w, i)))
            out |= 1ull << (w.dim - i);  // storage bit of coordinate ī = 2g+1-i
    }
    return {{out, q.b.dim}};
}

// ---- twist images in Sp_{2g}(F_2) -------------------------------------------

// Homology classes of the defining curves in the basis [u_g,...,u_1,v_1,...,v_g]
// (so e_i pairs with e_{2g+1-i}): chain curve classes h_{2i-1} = u_i,
// h_{2i} = v_i + v_{i+1} (v_{g+1} = 0), plus h_0 = u_1 + u_2 and the unused
// boundary-side curve h_{2g+1} = u_{g-1} + u_g.
inline std::vector<F2Vec> curve_classes(int g) {
    if (g < 2) throw error("curve_classes: genus must be >= 2");
    int dim = 2 * g;
    auto u = [&](int i) { return basis_vec(g + 1 - i, dim); };
    auto v = [&](int i) { return i <= g ? basis_vec(g + i, dim) : F2Vec{0, dim}; };
    std::vector<F2Vec> h(static_cast<size_t>(2 * g + 2), F2Vec{0, dim});
    h[0] = u(1) + u(2);
    for (int i = 1; i <= g; ++i) {
        h[static_cast<size_t>(2 * i - 1)] = u(i);
        h[static_cast<size_t>(2 * i)] = v(i) + v(i + 1);
    }
    h[static_cast<size_t>(2 * g + 1)] = u(g - 1) + u(g);
    // the classes must reproduce the curve intersection pattern
    for (int i = 0; i <= 2 * g + 1; ++i)
        for (int j = i + 1; j <= 2 * g + 1; ++j)
            if (pairing(h[static_cast<size_t>(i)], h[static_cast<size_t>(j)]) !=
                (curves_intersect(i, j, g) ? 1 : 0))
                throw error("curve_classes: intersection pattern violated");
    return h;
}

/// Images of the twist generators T0..T2g under the mod-2 symplectic
/// representation: T_i ↦ transvection about the class of a_i.  With
/// include_boundary_curve, T_{2g+1} is appended (it never enters
/// presentations).
inline std::vector<std::pair<std::string, F2Mat>> theta_images(int g,
                                                               bool include_boundary_curve = false) {
    auto h = curve_classes(g);
    std::vector<std::pair<std::string, F2Mat>> out;
    int last = include_boundary_curve ? 2 * g + 1 : 2 * g;
    for (int i = 0; i <= last; ++i)
        out.emplace_back("T" + std::to_string(i), transvection(h[static_cast<size_t>(i)]));
    return out;
}

/// Matrix-level relator audit: every relator must evaluate to the identity
/// under the given assignment (product taken in word order).
inline RelatorReport verify_matrix_assignment(const Presentation& pres,
                                              const std::vector<std::pair<std::string, F2Mat>>& imgs) {
    auto img_of = [&](const std::string& n) -> const F2Mat& {
        for (auto& [name, m] : imgs)
            if (name == n) return m;
        throw error("verify_matrix_assignment: unknown generator " + n);
    };
    RelatorReport rpt;
    int dim = imgs.empty() ? 0 : imgs.front().second.dim;
    for (size_t i = 0; i < pres.relators.size(); ++i) {
        F2Mat acc = f2_identity(dim);
        for (auto& [name, e] : pres.relators[i].letters) {
            const F2Mat& m = img_of(name);
            acc = mul(acc, e > 0 ? m : f2_inverse(m));
        }
        if (!is_identity(acc)) {
            rpt.holds = false;
            rpt.failures.push_back(i);
        }
    }
    return rpt;
}

/// Permutation representation of the matrix group on nonzero vectors,
/// labeled by ascending bitmask value; used for group-order audits.
inline PermRep vector_action_rep(const std::vector<std::pair<std::string, F2Mat>>& imgs) {
    if (imgs.empty()) throw error("vector_action_rep: no generators");
    int dim = imgs.front().second.dim;
    if (dim > 24) throw error("vector_action_rep: dimension too large for a point action");
    int n = (1 << dim) - 1;
    PermRep rep;
    rep.degree = n;
    for (auto& [name, m] : imgs) {
        std::vector<int> img(static_cast<size_t>(n));
        for (int v = 1; v <= n; ++v) {
            F2Vec x{static_cast<std::uint64_t>(v), dim};
            img[static_cast<size_t>(v - 1)] =
                static_cast<int>(mul(m, x).bits) - 1;
        }
        rep.add(name, Perm(std::move(img)));
    }
    return rep;
}

// ---- the two exceptional permutation representations -------------------------

/// All b of the given type, ascending as unsigned integers (bit 0 = e_1
/// coordinate); this fixed labeling is the point numbering of build_phi.
inline std::vector<F2Vec> phi_domain(int g, FormType eps) {
    int dim = 2 * g;
    std::vector<F2Vec> dom;
    for (std::uint64_t b = 0; b < (1ull << dim); ++b) {
        F2Vec v{b, dim};
        if (form_type({v}) == eps) dom.push_back(v);
    }
    return dom;
}

/// The degree-N_g^ε representation: generators T0..T2g act on type-ε forms
/// through their transvection images.
inline PermRep build_phi(int g, FormType eps) {
    auto dom = phi_domain(g, eps);
    std::map<std::uint64_t, int> index;
    for (size_t i = 0; i < dom.size(); ++i) index[dom[i].bits] = static_cast<int>(i);

    PermRep rep;
    rep.degree = static_cast<int>(dom.size());
    for (auto& [name, m] : theta_images(g)) {
        std::vector<int> img(dom.size());
        for (size_t i = 0; i < dom.size(); ++i) {
            QuadForm moved = act_on_form(m, {dom[i]});
            auto it = index.find(moved.b.bits);
            if (it == index.end()) throw error("build_phi: action left the type-" +
                                               std::string(1, type_char(eps)) + " orbit");
            img[i] = it->second;
        }
        rep.add(name, Perm(std::move(img)));
    }
    if (rep.degree != static_cast<int>(orthogonal_index(g, eps)))
        throw error("build_phi: unexpected domain size");
    return rep;
}

/// Expected cycle structure of every twist image under build_phi(g, ε):
/// (1)^{2^{2g-2}} (2)^{2^{g-2}(2^{g-1} - ε·1)}.
inline CycleType twist_cycle_type(int g, FormType eps) {
    if (g < 2) throw error("twist_cycle_type: genus must be >= 2");
    CycleType ct;
    ct.degree = static_cast<int>(orthogonal_index(g, eps));
    long long fixed_pts = 1ll << (2 * g - 2);
    long long twos = (1ll << (g - 2)) * ((1ll << (g - 1)) - static_cast<int>(eps));
    ct.counts[1] = static_cast<int>(fixed_pts);
    ct.counts[2] = static_cast<int>(twos);
    return ct;
}

// ---- restriction to the embedded smaller symplectic group --------------------

/// diag(1, ω, 1): the standard embedding Sp_{2g-2} < Sp_{2g} fixing e_1 and
/// e_{2g}.
inline F2Mat embed_block(const F2Mat& w) {
    F2Mat out(w.dim + 2);
    out.rows[0] = 1ull;
    for (int r = 0; r < w.dim; ++r) out.rows[static_cast<size_t>(r + 1)] = w.rows[static_cast<size_t>(r)] << 1;
    out.rows[static_cast<size_t>(w.dim + 1)] = 1ull << (w.dim + 1);
    return out;
}

struct RestrictionOrbit {
    std::vector<F2Vec> points;     // ascending b values
    int b1 = 0, b2g = 0;           // the coordinates constant on the orbit
    FormType restricted_type;      // type of the form restricted to the inner block
};

struct RestrictionReport {
    int g = 0;
    FormType eps;
    std::vector<RestrictionOrbit> orbits;  // sorted by minimum b value
};

/// Orbits of the type-ε form set under the block-embedded Sp_{2g-2},
/// labeled by the constant (b_1, b_{2g}) pair and the restricted form type.
inline RestrictionReport restrict_decompose(int g, FormType eps) {
    if (g < 3) throw error("restrict_decompose: genus must be >= 3");
    int dim = 2 * g;
    auto dom = phi_domain(g, eps);
    std::map<std::uint64_t, int> index;
    for (size_t i = 0; i < dom.size(); ++i) index[dom[i].bits] = static_cast<int>(i);

    std::vector<Perm> action;
    for (auto& [name, m] : theta_images(g - 1)) {
        (void)name;
        F2Mat big = embed_block(m);
        std::vector<int> img(dom.size());
        for (size_t i = 0; i < dom.size(); ++i)
            img[i] = index.at(act_on_form(big, {dom[i]}).b.bits);
        action.emplace_back(std::move(img));
    }

    RestrictionReport rep;
    rep.g = g;
    rep.eps = eps;
    for (auto& orb : orbits(action, static_cast<int>(dom.size()))) {
        RestrictionOrbit ro;
        for (int p : orb) ro.points.push_back(dom[static_cast<size_t>(p)]);
        ro.b1 = ro.points.front().coord(1);
        ro.b2g = ro.points.front().coord(dim);
        for (auto& b : ro.points)
            if (b.coord(1) != ro.b1 || b.coord(dim) != ro.b2g)
                throw error("restrict_decompose: (b_1, b_2g) not constant on an orbit");
        F2Vec inner{(ro.points.front().bits >> 1) & ((1ull << (dim - 2)) - 1), dim - 2};
        ro.restricted_type = form_type({inner});
        rep.orbits.push_back(std::move(ro));
    }
    return rep;
}

/// The four reference vectors b_0 = 0, b_1 = e_1, b_2 = e_{2g},
/// b_3 = e_1+e_2+e_{2g-1}+e_{2g}; all of type + and in pairwise distinct
/// orbits under the embedded subgroup.
inline std::vector<F2Vec> reference_vectors(int g) {
    int dim = 2 * g;
    return {
        F2Vec{0, dim},
        basis_vec(1, dim),
        basis_vec(dim, dim),
        basis_vec(1, dim) + basis_vec(2, dim) + basis_vec(dim - 1, dim) + basis_vec(dim, dim),
    };
}

/// |stabilizer of a point| = |image group| / degree, by orbit-stabilizer on
/// the transitive representation.
inline BigInt stabilizer_order(int g, FormType eps) {
    PermRep rep = build_phi(g, eps);
    BigInt ord = group_order(rep);
    BigInt n = orthogonal_index(g, eps);
    if (ord % n != 0) throw error("stabilizer_order: order not divisible by degree");
    return ord / n;
}

}  // namespace mcg

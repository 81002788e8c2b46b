#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcg/common.hpp"

namespace mcg {

inline BigInt big_pow2(long long e) {
    BigInt r = 1;
    r <<= static_cast<unsigned>(e);
    return r;
}

inline BigInt factorial(int n) {
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

/// |Sp_{2g}(F_2)| = 2^{g²}·Π_{i=1..g}(2^{2i}-1)
inline BigInt sp_order(int g) {
    if (g < 0) throw error("sp_order: negative genus");
    BigInt r = big_pow2(static_cast<long long>(g) * g);
    for (int i = 1; i <= g; ++i) r *= big_pow2(2 * i) - 1;
    return r;
}

/// Index of the type-ε orthogonal subgroup: N_g^± = 2^{g-1}(2^g ± 1).
inline BigInt orthogonal_index(int g, FormType eps) {
    if (g < 1) throw error("orthogonal_index: genus must be >= 1");
    return big_pow2(g - 1) * (big_pow2(g) + static_cast<int>(eps));
}

// The eight families of maximal-subgroup orders (or order bounds, for the
// bound_2_6g and symmetric_bound cases).
struct OrderFormula {
    enum class Case {
        o_minus,           // orthogonal group, type -
        o_plus,            // orthogonal group, type +
        bound_2_6g,        // order bound 2^{6g}
        symmetric_bound,   // subgroup of S_{2g+2}: bound (2g+2)!
        field_extension,   // Sp_{2k}(F_{2^r})·r, r prime divisor of g, kr = g
        wreath,            // Sp_{2k}(F_2) wr S_r, r divisor of g, kr = g
        isotropic_stab,    // stabilizer of a totally isotropic k-subspace
        nonsingular_stab,  // stabilizer of a nonsingular 2k-subspace
    };
    Case c;
    int g = 0;
    int param = 0;  // k or r where applicable

    std::string str() const {
        switch (c) {
            case Case::o_minus: return "O-minus";
            case Case::o_plus: return "O-plus";
            case Case::bound_2_6g: return "bound-2^6g";
            case Case::symmetric_bound: return "symmetric-" + std::to_string(2 * g + 2);
            case Case::field_extension: return "field-ext(r=" + std::to_string(param) + ")";
            case Case::wreath: return "wreath(r=" + std::to_string(param) + ")";
            case Case::isotropic_stab: return "isotropic-stab(k=" + std::to_string(param) + ")";
            case Case::nonsingular_stab: return "nonsingular-stab(k=" + std::to_string(param) + ")";
        }
        return "?";
    }
};

namespace detail {
inline bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}
}  // namespace detail

inline BigInt order(const OrderFormula& f) {
    using Case = OrderFormula::Case;
    const int g = f.g;
    if (g < 1) throw error("order: genus must be >= 1");
    auto prod_4i_minus_1 = [](int upto) {
        BigInt r = 1;
        for (int i = 1; i <= upto; ++i) r *= big_pow2(2 * i) - 1;
        return r;
    };
    switch (f.c) {
        case Case::o_minus:
            return big_pow2(static_cast<long long>(g) * g - g + 1) * (big_pow2(g) + 1) *
                   prod_4i_minus_1(g - 1);
        case Case::o_plus:
            return big_pow2(static_cast<long long>(g) * g - g + 1) * (big_pow2(g) - 1) *
                   prod_4i_minus_1(g - 1);
        case Case::bound_2_6g:
            return big_pow2(6ll * g);
        case Case::symmetric_bound:
            return factorial(2 * g + 2);
        case Case::field_extension: {
            int r = f.param;
            if (r <= 1 || g % r != 0 || !detail::is_prime(r))
                throw error("order: field-extension case needs a prime divisor r>1 of g");
            int k = g / r;
            BigInt v = r * big_pow2(static_cast<long long>(g) * g / r);
            for (int i = 1; i <= k; ++i) v *= big_pow2(2 * r * i) - 1;
            return v;
        }
        case Case::wreath: {
            int r = f.param;
            if (r <= 1 || g % r != 0) throw error("order: wreath case needs a divisor r>1 of g");
            int k = g / r;
            BigInt v = factorial(r) * big_pow2(static_cast<long long>(g) * g / r);
            for (int i = 1; i <= k; ++i) {
                BigInt t = big_pow2(2 * i) - 1;
                for (int j = 0; j < r; ++j) v *= t;
            }
            return v;
        }
        case Case::isotropic_stab: {
            int k = f.param;
            if (k < 1 || k > g) throw error("order: isotropic-stab case needs 1 <= k <= g");
            BigInt v = big_pow2(static_cast<long long>(g) * g);
            for (int i = 1; i <= g - k; ++i) v *= big_pow2(2 * i) - 1;
            for (int i = 1; i <= k - 1; ++i) v *= big_pow2(i + 1) - 1;
            return v;
        }
        case Case::nonsingular_stab: {
            int k = f.param;
            if (k < 1 || k > g - 1) throw error("order: nonsingular-stab case needs 1 <= k <= g-1");
            BigInt v = big_pow2(static_cast<long long>(g) * g + 2ll * k * k - 2ll * g * k);
            for (int i = 1; i <= g - k; ++i) v *= big_pow2(2 * i) - 1;
            for (int i = 1; i <= k; ++i) v *= big_pow2(2 * i) - 1;
            return v;
        }
    }
    throw error("order: unknown case");
}

// ---- the inequality ledger ---------------------------------------------------

struct LedgerRow {
    OrderFormula formula;
    BigInt value;
    bool below_bound = false;
    BigInt margin;  // bound - value
};

struct LedgerReport {
    int g = 0;
    BigInt half_o_minus;
    std::vector<LedgerRow> rows;
    bool all_ok = true;
};

/// For every non-orthogonal maximal-subgroup family and every legal parameter,
/// check order < |O_{2g}^-|/2.  Exact big-integer arithmetic throughout.
inline LedgerReport maximal_order_ledger(int g) {
    if (g < 4) throw error("maximal_order_ledger: genus must be >= 4");
    using Case = OrderFormula::Case;
    LedgerReport rep;
    rep.g = g;
    rep.half_o_minus = order({Case::o_minus, g, 0}) / 2;

    std::vector<OrderFormula> formulas;
    formulas.push_back({Case::bound_2_6g, g, 0});
    formulas.push_back({Case::symmetric_bound, g, 0});
    for (int r = 2; r <= g; ++r)
        if (g % r == 0 && detail::is_prime(r)) formulas.push_back({Case::field_extension, g, r});
    for (int r = 2; r <= g; ++r)
        if (g % r == 0) formulas.push_back({Case::wreath, g, r});
    for (int k = 1; k <= g; ++k) formulas.push_back({Case::isotropic_stab, g, k});
    for (int k = 1; k <= g - 1; ++k) formulas.push_back({Case::nonsingular_stab, g, k});

    for (auto& f : formulas) {
        LedgerRow row;
        row.formula = f;
        row.value = order(f);
        row.below_bound = row.value < rep.half_o_minus;
        row.margin = rep.half_o_minus - row.value;
        rep.all_ok = rep.all_ok && row.below_bound;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

// ---- index recurrences and inequalities -------------------------------------

struct RelationsReport {
    int g = 0;
    BigInt n_minus, n_plus, prev_minus, prev_plus;
    bool recurrence_plus = false;   // N_g^+ = 3N_{g-1}^+ + N_{g-1}^-
    bool recurrence_minus = false;  // N_g^- = 3N_{g-1}^- + N_{g-1}^+
    bool ineq_lower = false;        // 4N_{g-1}^- < N_g^-
    bool ineq_middle = false;       // N_g^- < N_g^+
    std::optional<bool> ineq_upper; // N_g^+ < 5N_{g-1}^-   (asserted only for g >= 4)
    bool ineq_gap = false;          // 5N_{g-1}^- < 2N_g^-
    bool all_ok = false;
};

inline RelationsReport numeric_relations(int g) {
    if (g < 2) throw error("numeric_relations: genus must be >= 2");
    RelationsReport r;
    r.g = g;
    r.n_minus = orthogonal_index(g, FormType::minus);
    r.n_plus = orthogonal_index(g, FormType::plus);
    r.prev_minus = orthogonal_index(g - 1, FormType::minus);
    r.prev_plus = orthogonal_index(g - 1, FormType::plus);
    r.recurrence_plus = r.n_plus == 3 * r.prev_plus + r.prev_minus;
    r.recurrence_minus = r.n_minus == 3 * r.prev_minus + r.prev_plus;
    r.ineq_lower = 4 * r.prev_minus < r.n_minus;
    r.ineq_middle = r.n_minus < r.n_plus;
    if (g >= 4) r.ineq_upper = r.n_plus < 5 * r.prev_minus;
    r.ineq_gap = 5 * r.prev_minus < 2 * r.n_minus;
    r.all_ok = r.recurrence_plus && r.recurrence_minus && r.ineq_lower && r.ineq_middle &&
               r.ineq_gap && (!r.ineq_upper || *r.ineq_upper);
    return r;
}

}  // namespace mcg

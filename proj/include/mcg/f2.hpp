#pragma once

#include <bit>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "mcg/common.hpp"

namespace mcg {

// Vector over F_2 of dimension 2g <= 64, stored as a bitmask.  Storage bit i
// (0-based) is the math coordinate x_{i+1}; coordinate i pairs with
// ī = 2g+1-i under the symplectic form.
struct F2Vec {
    std::uint64_t bits = 0;
    int dim = 0;

    friend bool operator==(const F2Vec&, const F2Vec&) = default;
    friend auto operator<=>(const F2Vec& a, const F2Vec& b) {
        if (auto c = a.dim <=> b.dim; c != 0) return c;
        return a.bits <=> b.bits;
    }

    int coord(int i /*1-based*/) const { return static_cast<int>((bits >> (i - 1)) & 1); }

    F2Vec operator+(const F2Vec& o) const {
        if (dim != o.dim) throw error("F2Vec: dimension mismatch");
        return {bits ^ o.bits, dim};
    }

    bool zero() const { return bits == 0; }

    std::string str() const {
        std::string s;
        for (int i = 0; i < dim; ++i) s += (bits >> i) & 1 ? '1' : '0';
        return s;
    }
};

inline F2Vec basis_vec(int i /*1-based*/, int dim) {
    if (i < 1 || i > dim) throw error("basis_vec: index out of range");
    return {1ull << (i - 1), dim};
}

inline std::uint64_t bit_reverse(std::uint64_t b, int dim) {
    std::uint64_t r = 0;
    for (int i = 0; i < dim; ++i)
        if ((b >> i) & 1) r |= 1ull << (dim - 1 - i);
    return r;
}

/// Symplectic pairing ⟨x,y⟩ = Σ_i x_i·y_{ī} mod 2; alternating and
/// nondegenerate.
inline int pairing(const F2Vec& x, const F2Vec& y) {
    if (x.dim != y.dim) throw error("pairing: dimension mismatch");
    return std::popcount(x.bits & bit_reverse(y.bits, y.dim)) & 1;
}

// Square bit matrix over F_2; row r is the mask of row coefficients, so
// (M·x)_r = ⟨row_r, x⟩ as a plain dot product.
struct F2Mat {
    int dim = 0;
    std::vector<std::uint64_t> rows;

    explicit F2Mat(int d = 0) : dim(d), rows(static_cast<size_t>(d), 0) {}

    int at(int r, int c) const { return static_cast<int>((rows[static_cast<size_t>(r)] >> c) & 1); }

    friend bool operator==(const F2Mat&, const F2Mat&) = default;
};

inline F2Mat f2_identity(int dim) {
    F2Mat m(dim);
    for (int i = 0; i < dim; ++i) m.rows[static_cast<size_t>(i)] = 1ull << i;
    return m;
}

inline F2Vec mul(const F2Mat& m, const F2Vec& x) {
    if (m.dim != x.dim) throw error("mat*vec: dimension mismatch");
    std::uint64_t out = 0;
    for (int r = 0; r < m.dim; ++r)
        out |= static_cast<std::uint64_t>(std::popcount(m.rows[static_cast<size_t>(r)] & x.bits) & 1)
               << r;
    return {out, x.dim};
}

inline F2Mat mul(const F2Mat& a, const F2Mat& b) {
    if (a.dim != b.dim) throw error("mat*mat: dimension mismatch");
    F2Mat out(a.dim);
    for (int r = 0; r < a.dim; ++r) {
        std::uint64_t row = 0;
        std::uint64_t arow = a.rows[static_cast<size_t>(r)];
        for (int k = 0; k < a.dim; ++k)
            if ((arow >> k) & 1) row ^= b.rows[static_cast<size_t>(k)];
        out.rows[static_cast<size_t>(r)] = row;
    }
    return out;
}

inline F2Vec col(const F2Mat& m, int c /*1-based*/) {
    std::uint64_t bits = 0;
    for (int r = 0; r < m.dim; ++r)
        if ((m.rows[static_cast<size_t>(r)] >> (c - 1)) & 1) bits |= 1ull << r;
    return {bits, m.dim};
}

inline bool is_identity(const F2Mat& m) { return m == f2_identity(m.dim); }

/// M preserves the symplectic pairing: ⟨M e_i, M e_j⟩ = ⟨e_i, e_j⟩ for all i,j.
inline bool is_symplectic(const F2Mat& m) {
    for (int i = 1; i <= m.dim; ++i) {
        F2Vec ci = col(m, i);
        for (int j = i + 1; j <= m.dim; ++j) {
            int want = (j == m.dim + 1 - i) ? 1 : 0;
            if (pairing(ci, col(m, j)) != want) return false;
        }
    }
    return true;
}

/// The transvection x ↦ x + ⟨x,c⟩·c; a symplectic involution for c ≠ 0.
inline F2Mat transvection(const F2Vec& c) {
    F2Mat m = f2_identity(c.dim);
    std::uint64_t rev_c = bit_reverse(c.bits, c.dim);
    for (int r = 0; r < c.dim; ++r)
        if ((c.bits >> r) & 1) m.rows[static_cast<size_t>(r)] ^= rev_c;
    return m;
}

inline F2Mat f2_inverse(const F2Mat& m) {
    // Gauss-Jordan on [m | I]
    int n = m.dim;
    std::vector<std::uint64_t> a(m.rows), inv(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) inv[static_cast<size_t>(i)] = 1ull << i;
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if ((a[static_cast<size_t>(r)] >> c) & 1) {
                piv = r;
                break;
            }
        if (piv < 0) throw error("f2_inverse: singular matrix");
        std::swap(a[static_cast<size_t>(piv)], a[static_cast<size_t>(c)]);
        std::swap(inv[static_cast<size_t>(piv)], inv[static_cast<size_t>(c)]);
        for (int r = 0; r < n; ++r)
            if (r != c && ((a[static_cast<size_t>(r)] >> c) & 1)) {
                a[static_cast<size_t>(r)] ^= a[static_cast<size_t>(c)];
                inv[static_cast<size_t>(r)] ^= inv[static_cast<size_t>(c)];
            }
    }
    F2Mat out(n);
    out.rows = std::move(inv);
    return out;
}

// hex-packed serialization: dimension header, then one hex word per row
inline std::string mat_to_hex(const F2Mat& m) {
    std::ostringstream os;
    os << m.dim;
    for (auto r : m.rows) {
        os << ' ' << std::hex;
        os << r;
        os << std::dec;
    }
    return os.str();
}

inline F2Mat mat_from_hex(const std::string& s) {
    std::istringstream is(s);
    int dim;
    if (!(is >> dim) || dim < 0 || dim > 64) throw error("mat_from_hex: bad dimension");
    F2Mat m(dim);
    for (int i = 0; i < dim; ++i)
        if (!(is >> std::hex >> m.rows[static_cast<size_t>(i)]))
            throw error("mat_from_hex: truncated row data");
    return m;
}

}  // namespace mcg

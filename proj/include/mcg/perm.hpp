#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mcg/common.hpp"

namespace mcg {

// A permutation of {0,...,m-1}, stored as its image array.  Points are
// 0-based internally; all text I/O uses 1-based cycle notation.  Values are
// immutable after construction and safe to share across threads.
class Perm {
public:
    Perm() = default;

    explicit Perm(std::vector<int> images) : img_(std::move(images)) {
        std::vector<char> seen(img_.size(), 0);
        for (int v : img_) {
            if (v < 0 || v >= static_cast<int>(img_.size()) || seen[static_cast<size_t>(v)])
                throw error("permutation image array is not a bijection");
            seen[static_cast<size_t>(v)] = 1;
        }
    }

    static Perm identity(int degree) {
        std::vector<int> img(static_cast<size_t>(degree));
        std::iota(img.begin(), img.end(), 0);
        return Perm(std::move(img));
    }

    int degree() const { return static_cast<int>(img_.size()); }
    int operator()(int x) const { return img_[static_cast<size_t>(x)]; }
    const std::vector<int>& images() const { return img_; }

    bool is_identity() const {
        for (int i = 0; i < degree(); ++i)
            if (img_[static_cast<size_t>(i)] != i) return false;
        return true;
    }

    friend bool operator==(const Perm&, const Perm&) = default;
    friend auto operator<=>(const Perm& a, const Perm& b) { return a.img_ <=> b.img_; }

private:
    std::vector<int> img_;
};

// Composition convention, fixed artifact-wide: (p∘q)(x) = p(q(x)), q applied
// first.  Words over group generators act on points letter by letter, left to
// right (a right action, matching coset tables); see word_image in fpgrp.hpp.
inline Perm compose(const Perm& p, const Perm& q) {
    if (p.degree() != q.degree()) throw error("compose: degree mismatch");
    std::vector<int> img(static_cast<size_t>(p.degree()));
    for (int x = 0; x < p.degree(); ++x) img[static_cast<size_t>(x)] = p(q(x));
    return Perm(std::move(img));
}

inline Perm inverse(const Perm& p) {
    std::vector<int> img(static_cast<size_t>(p.degree()));
    for (int x = 0; x < p.degree(); ++x) img[static_cast<size_t>(p(x))] = x;
    return Perm(std::move(img));
}

/// x·p·x⁻¹
inline Perm conjugate(const Perm& x, const Perm& p) {
    if (x.degree() != p.degree()) throw error("conjugate: degree mismatch");
    std::vector<int> img(static_cast<size_t>(p.degree()));
    for (int t = 0; t < p.degree(); ++t) img[static_cast<size_t>(x(t))] = x(p(t));
    return Perm(std::move(img));
}

inline Perm power(const Perm& p, long long n) {
    Perm base = n < 0 ? inverse(p) : p;
    unsigned long long e = static_cast<unsigned long long>(n < 0 ? -n : n);
    Perm acc = Perm::identity(p.degree());
    while (e) {
        if (e & 1) acc = compose(acc, base);
        base = compose(base, base);
        e >>= 1;
    }
    return acc;
}

// A subset of {0,...,m-1} as a bitset.
struct PointSet {
    int universe = 0;
    std::vector<std::uint64_t> w;

    explicit PointSet(int m = 0) : universe(m), w(static_cast<size_t>((m + 63) / 64), 0) {}

    void set(int i) { w[static_cast<size_t>(i >> 6)] |= 1ull << (i & 63); }
    bool test(int i) const { return (w[static_cast<size_t>(i >> 6)] >> (i & 63)) & 1; }

    int count() const {
        int c = 0;
        for (auto x : w) c += std::popcount(x);
        return c;
    }

    PointSet intersect(const PointSet& o) const {
        PointSet r(universe);
        for (size_t i = 0; i < w.size(); ++i) r.w[i] = w[i] & o.w[i];
        return r;
    }

    PointSet unite(const PointSet& o) const {
        PointSet r(universe);
        for (size_t i = 0; i < w.size(); ++i) r.w[i] = w[i] | o.w[i];
        return r;
    }

    bool empty() const {
        for (auto x : w)
            if (x) return false;
        return true;
    }

    std::vector<int> points() const {
        std::vector<int> out;
        for (int i = 0; i < universe; ++i)
            if (test(i)) out.push_back(i);
        return out;
    }

    friend bool operator==(const PointSet&, const PointSet&) = default;
};

inline PointSet support(const Perm& p) {
    PointSet s(p.degree());
    for (int i = 0; i < p.degree(); ++i)
        if (p(i) != i) s.set(i);
    return s;
}

inline PointSet fixed(const Perm& p) {
    PointSet s(p.degree());
    for (int i = 0; i < p.degree(); ++i)
        if (p(i) == i) s.set(i);
    return s;
}

// Cycle type: number of k-cycles for each k, fixed points counted as 1-cycles.
struct CycleType {
    int degree = 0;
    std::map<int, int> counts;  // k -> number of k-cycles, only nonzero entries

    int count_of(int k) const {
        auto it = counts.find(k);
        return it == counts.end() ? 0 : it->second;
    }

    std::string str() const {
        std::ostringstream os;
        for (auto [k, n] : counts) os << "(" << k << ")^" << n;
        return os.str();
    }

    friend bool operator==(const CycleType&, const CycleType&) = default;
};

inline CycleType cycle_type(const Perm& p) {
    CycleType ct;
    ct.degree = p.degree();
    std::vector<char> seen(static_cast<size_t>(p.degree()), 0);
    for (int i = 0; i < p.degree(); ++i) {
        if (seen[static_cast<size_t>(i)]) continue;
        int len = 0, j = i;
        do {
            seen[static_cast<size_t>(j)] = 1;
            j = p(j);
            ++len;
        } while (j != i);
        ct.counts[len]++;
    }
    return ct;
}

inline bool satisfies_braid(const Perm& u, const Perm& v) {
    if (u.degree() != v.degree()) throw error("satisfies_braid: degree mismatch");
    return compose(u, compose(v, u)) == compose(v, compose(u, v));
}

/// Order of the centralizer of an element of the given cycle type in the full
/// symmetric group: Π_k k^{ℓ_k}·ℓ_k!.
inline BigInt centralizer_order_from_type(const CycleType& ct) {
    BigInt ord = 1;
    for (auto [k, n] : ct.counts) {
        for (int i = 0; i < n; ++i) ord *= k;
        for (int i = 2; i <= n; ++i) ord *= i;
    }
    return ord;
}

// ---- cycle-notation text format -------------------------------------------
// `(1 2)(3 5)`: 1-based points, whitespace-separated within a cycle, fixed
// points omitted.  Canonical form: cycles sorted by minimum element, each
// cycle rotated to start at its minimum; the identity prints as "()".

inline Perm perm_from_cycles(std::string_view text, int degree) {
    std::vector<int> img(static_cast<size_t>(degree));
    std::iota(img.begin(), img.end(), 0);
    std::vector<char> used(static_cast<size_t>(degree), 0);

    size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    while (i < text.size()) {
        if (text[i] != '(') throw error("cycle notation: expected '('");
        ++i;
        std::vector<int> cyc;
        for (;;) {
            skip_ws();
            if (i < text.size() && text[i] == ')') {
                ++i;
                break;
            }
            if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
                throw error("cycle notation: expected point or ')'");
            int v = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                v = v * 10 + (text[i++] - '0');
            if (v < 1 || v > degree) throw error("cycle notation: point out of range");
            if (used[static_cast<size_t>(v - 1)]) throw error("cycle notation: repeated point");
            used[static_cast<size_t>(v - 1)] = 1;
            cyc.push_back(v - 1);
        }
        for (size_t k = 0; k + 1 < cyc.size(); ++k) img[static_cast<size_t>(cyc[k])] = cyc[k + 1];
        if (cyc.size() > 1) img[static_cast<size_t>(cyc.back())] = cyc.front();
        skip_ws();
    }
    return Perm(std::move(img));
}

inline std::string perm_to_cycles(const Perm& p) {
    std::vector<char> seen(static_cast<size_t>(p.degree()), 0);
    std::ostringstream os;
    bool any = false;
    for (int i = 0; i < p.degree(); ++i) {
        if (seen[static_cast<size_t>(i)] || p(i) == i) continue;
        os << '(';
        int j = i;
        bool first = true;
        do {
            seen[static_cast<size_t>(j)] = 1;
            if (!first) os << ' ';
            os << (j + 1);
            first = false;
            j = p(j);
        } while (j != i);
        os << ')';
        any = true;
    }
    if (!any) return "()";
    return os.str();
}

}  // namespace mcg

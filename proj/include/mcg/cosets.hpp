#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "mcg/fpgrp.hpp"

namespace mcg {

enum class FillOrder { row_major, column_major };
enum class Strategy { hlt, felsch };

inline std::string to_string(FillOrder f) {
    return f == FillOrder::row_major ? "row" : "col";
}
inline std::string to_string(Strategy s) { return s == Strategy::hlt ? "hlt" : "felsch"; }

struct EnumConfig {
    std::size_t max_cosets = 1'000'000;          // table row budget (live + not yet reclaimed)
    Strategy strategy = Strategy::hlt;           // hlt = relator-driven with lookahead
    FillOrder fill_order = FillOrder::row_major; // definition order for felsch / low-index
    std::vector<std::string> column_order;       // empty = default (see default_column_order)
};

/// Generator column order used by the table.  Matsumoto-style generator sets
/// {T0..Tn} default to T1 < T2 < ... < Tn < T0; anything else keeps
/// declaration order.
inline std::vector<std::string> default_column_order(const Presentation& p) {
    std::vector<int> idx;
    for (auto& g : p.gens) {
        if (g.size() < 2 || g[0] != 'T') return p.gens;
        for (size_t i = 1; i < g.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(g[i]))) return p.gens;
        idx.push_back(std::stoi(g.substr(1)));
    }
    std::vector<int> sorted_idx = idx;
    std::sort(sorted_idx.begin(), sorted_idx.end());
    for (size_t i = 0; i < sorted_idx.size(); ++i)
        if (sorted_idx[i] != static_cast<int>(i)) return p.gens;
    std::vector<std::string> order;
    for (size_t i = 1; i < sorted_idx.size(); ++i) order.push_back("T" + std::to_string(i));
    order.push_back("T0");
    return order;
}

namespace detail {

// Presentation compiled to integer columns: generator i owns columns 2i
// (positive) and 2i+1 (inverse).
struct CompiledPres {
    std::vector<std::string> names;            // generator order = column order
    std::vector<std::vector<int>> relators;    // words as column sequences
    std::vector<std::vector<std::pair<int, int>>> occ;  // col -> (relator, position)

    int ngens() const { return static_cast<int>(names.size()); }
    int ncols() const { return 2 * ngens(); }
    static int inv(int col) { return col ^ 1; }

    int gen_index(std::string_view name) const {
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return static_cast<int>(i);
        throw error("unknown generator " + std::string(name));
    }

    std::vector<int> compile_word(const Word& w) const {
        std::vector<int> out;
        out.reserve(w.letters.size());
        for (auto& [n, e] : w.letters) out.push_back(2 * gen_index(n) + (e < 0 ? 1 : 0));
        return out;
    }

    static CompiledPres make(const Presentation& p, std::vector<std::string> column_order) {
        CompiledPres cp;
        if (column_order.empty()) column_order = default_column_order(p);
        if (column_order.size() != p.gens.size())
            throw error("column order must list every generator exactly once");
        for (auto& n : column_order) {
            if (!p.has_gen(n)) throw error("column order names unknown generator " + n);
            for (auto& m : cp.names)
                if (m == n) throw error("column order repeats generator " + n);
            cp.names.push_back(n);
        }
        for (auto& r : p.relators) cp.relators.push_back(cp.compile_word(r));
        cp.occ.resize(static_cast<size_t>(cp.ncols()));
        for (size_t ri = 0; ri < cp.relators.size(); ++ri)
            for (size_t pos = 0; pos < cp.relators[ri].size(); ++pos)
                cp.occ[static_cast<size_t>(cp.relators[ri][pos])].emplace_back(static_cast<int>(ri),
                                                                               static_cast<int>(pos));
        return cp;
    }
};

}  // namespace detail

// Completed (or partial) coset table.  Coset 0 is the subgroup.  Entry
// symmetry tab[c][x] = d  <=>  tab[d][x^-1] = c holds whenever defined.
struct CosetTable {
    std::vector<std::string> gen_names;
    int index = 0;
    std::vector<std::int32_t> tab;  // row-major, 2 columns per generator, -1 undefined
    bool complete = false;
    std::uint64_t collapsed = 0;    // cosets absorbed by coincidence processing
    std::uint64_t total_defined = 0;

    int ncols() const { return 2 * static_cast<int>(gen_names.size()); }
    std::int32_t at(int c, int col) const {
        return tab[static_cast<size_t>(c) * static_cast<size_t>(ncols()) + static_cast<size_t>(col)];
    }
};

/// Columns of a complete table, read off as the generator images of the
/// induced permutation representation on cosets (transitive by construction).
inline PermRep rep_from_table(const CosetTable& t) {
    if (!t.complete) throw error("rep_from_table: table is not complete");
    PermRep rep;
    rep.degree = t.index;
    for (size_t gi = 0; gi < t.gen_names.size(); ++gi) {
        std::vector<int> img(static_cast<size_t>(t.index));
        for (int c = 0; c < t.index; ++c) img[static_cast<size_t>(c)] = t.at(c, 2 * static_cast<int>(gi));
        rep.add(t.gen_names[gi], Perm(std::move(img)));
    }
    return rep;
}

/// Audit of a completed table: every relator traces to a closed cycle at
/// every coset, and every subgroup generator word fixes coset 0.
inline void audit_table(const Presentation& pres, const CosetTable& t,
                        const std::vector<Word>& subgroup_gens) {
    auto cp = detail::CompiledPres::make(pres, t.gen_names);
    auto trace = [&](int c, const std::vector<int>& w) {
        for (int col : w) {
            c = t.at(c, col);
            if (c < 0) throw error("audit: undefined entry reached");
        }
        return c;
    };
    for (auto& r : cp.relators)
        for (int c = 0; c < t.index; ++c)
            if (trace(c, r) != c) throw error("audit: relator does not close");
    for (auto& w : subgroup_gens)
        if (trace(0, cp.compile_word(w)) != 0) throw error("audit: subgroup generator moves coset 0");
}

namespace detail {

class Enumerator {
public:
    Enumerator(const Presentation& pres, const std::vector<Word>& subgroup_gens,
               const EnumConfig& cfg)
        : cfg_(cfg), cp_(CompiledPres::make(pres, cfg.column_order)) {
        for (auto& w : subgroup_gens) subgens_.push_back(cp_.compile_word(w));
    }

    CosetTable run() {
        new_coset();  // coset 0 = the subgroup
        if (cfg_.strategy == Strategy::hlt)
            run_hlt();
        else
            run_felsch();
        return finish();
    }

private:
    EnumConfig cfg_;
    CompiledPres cp_;
    std::vector<std::vector<int>> subgens_;

    std::vector<std::int32_t> tab_;
    std::vector<std::int32_t> p_;  // union-find, p_[c] <= c; p_[c] == c iff live
    std::deque<std::int32_t> dead_queue_;
    std::vector<std::pair<std::int32_t, std::int32_t>> deductions_;  // felsch stack
    std::size_t nrows_ = 0, nlive_ = 0;
    std::uint64_t collapsed_ = 0, total_defined_ = 0;
    int ncols_ = 0;

    struct OutOfSpace {};

    std::int32_t& at(std::int32_t c, int col) {
        return tab_[static_cast<size_t>(c) * static_cast<size_t>(ncols_) + static_cast<size_t>(col)];
    }

    bool dead(std::int32_t c) const { return p_[static_cast<size_t>(c)] != c; }

    std::int32_t rep(std::int32_t c) {
        while (p_[static_cast<size_t>(c)] != c) {
            p_[static_cast<size_t>(c)] = p_[static_cast<size_t>(p_[static_cast<size_t>(c)])];
            c = p_[static_cast<size_t>(c)];
        }
        return c;
    }

    std::int32_t new_coset() {
        if (nrows_ >= cfg_.max_cosets) throw OutOfSpace{};
        if (ncols_ == 0) ncols_ = cp_.ncols();
        std::int32_t id = static_cast<std::int32_t>(nrows_++);
        tab_.resize(nrows_ * static_cast<size_t>(ncols_), -1);
        p_.push_back(id);
        ++nlive_;
        ++total_defined_;
        return id;
    }

    void merge(std::int32_t a, std::int32_t b) {
        a = rep(a);
        b = rep(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        p_[static_cast<size_t>(b)] = a;
        dead_queue_.push_back(b);
        --nlive_;
        ++collapsed_;
    }

    void process_coincidences(bool track_deductions) {
        while (!dead_queue_.empty()) {
            std::int32_t gamma = dead_queue_.front();
            dead_queue_.pop_front();
            for (int col = 0; col < ncols_; ++col) {
                std::int32_t delta = at(gamma, col);
                if (delta < 0) continue;
                at(delta, CompiledPres::inv(col)) = -1;
                std::int32_t mu = rep(gamma), nu = rep(delta);
                if (at(mu, col) >= 0)
                    merge(nu, at(mu, col));
                else if (at(nu, CompiledPres::inv(col)) >= 0)
                    merge(mu, at(nu, CompiledPres::inv(col)));
                else {
                    at(mu, col) = nu;
                    at(nu, CompiledPres::inv(col)) = mu;
                    if (track_deductions) deductions_.emplace_back(mu, col);
                }
            }
        }
    }

    // Two-pointer relator scan from alpha; fills gaps with new cosets when
    // `fill`, records a deduction when the gap closes to one entry, and joins
    // mismatched endpoints as a coincidence.
    void scan(std::int32_t alpha, const std::vector<int>& w, bool fill, bool track_deductions) {
        if (w.empty()) return;
        std::int32_t f = alpha, b = alpha;
        long i = 0, j = static_cast<long>(w.size()) - 1;
        for (;;) {
            while (i <= j && at(f, w[static_cast<size_t>(i)]) >= 0)
                f = at(f, w[static_cast<size_t>(i++)]);
            if (i > j) {  // fully traced forward: must close at the start
                if (f != b) {
                    merge(f, b);
                    process_coincidences(track_deductions);
                }
                return;
            }
            while (j >= i && at(b, CompiledPres::inv(w[static_cast<size_t>(j)])) >= 0)
                b = at(b, CompiledPres::inv(w[static_cast<size_t>(j--)]));
            if (j < i) {  // scans met between entries: endpoints must agree
                if (f != b) {
                    merge(f, b);
                    process_coincidences(track_deductions);
                }
                return;
            }
            if (j == i) {  // gap of one: deduction
                at(f, w[static_cast<size_t>(i)]) = b;
                at(b, CompiledPres::inv(w[static_cast<size_t>(i)])) = f;
                ++total_defined_;
                if (track_deductions) deductions_.emplace_back(f, w[static_cast<size_t>(i)]);
                return;
            }
            if (!fill) return;  // gap of two or more, nothing learned
            std::int32_t d = new_coset();
            at(f, w[static_cast<size_t>(i)]) = d;
            at(d, CompiledPres::inv(w[static_cast<size_t>(i)])) = f;
            if (track_deductions) deductions_.emplace_back(f, w[static_cast<size_t>(i)]);
        }
    }

    // ---- HLT with lookahead ----

    void run_hlt() {
        for (auto& w : subgens_) hlt_scan_guard(0, w);
        std::size_t alpha = 0;
        while (alpha < nrows_) {
            std::int32_t a = static_cast<std::int32_t>(alpha);
            if (dead(a)) {
                ++alpha;
                continue;
            }
            bool redo = true;
            while (redo) {
                redo = false;
                try {
                    for (auto& r : cp_.relators) {
                        scan(a, r, /*fill=*/true, false);
                        if (dead(a)) break;
                    }
                    if (!dead(a))
                        for (int col = 0; col < ncols_; ++col)
                            if (at(a, col) < 0) {
                                std::int32_t d = new_coset();
                                at(a, col) = d;
                                at(d, CompiledPres::inv(col)) = a;
                            }
                } catch (OutOfSpace&) {
                    alpha = lookahead_and_compact(alpha);
                    if (alpha >= nrows_) break;
                    a = static_cast<std::int32_t>(alpha);
                    redo = true;
                }
            }
            ++alpha;
        }
        // safety pass: coincidence processing can leave live rows with freshly
        // undefined entries, so rescan until everything is stable and filled
        bool again = true;
        while (again) {
            again = false;
            for (std::size_t c = 0; c < nrows_; ++c) {
                std::int32_t a = static_cast<std::int32_t>(c);
                if (dead(a)) continue;
                bool incomplete = false;
                for (int col = 0; col < ncols_ && !incomplete; ++col)
                    if (at(a, col) < 0) incomplete = true;
                if (!incomplete) continue;
                again = true;
                try {
                    for (auto& r : cp_.relators) {
                        scan(a, r, true, false);
                        if (dead(a)) break;
                    }
                    if (!dead(a))
                        for (int cc = 0; cc < ncols_; ++cc)
                            if (at(a, cc) < 0) {
                                std::int32_t d = new_coset();
                                at(a, cc) = d;
                                at(d, CompiledPres::inv(cc)) = a;
                            }
                } catch (OutOfSpace&) {
                    lookahead_and_compact(c);
                }
            }
        }
    }

    void hlt_scan_guard(std::int32_t a, const std::vector<int>& w) {
        try {
            scan(a, w, true, false);
        } catch (OutOfSpace&) {
            throw budget_error("coset enumeration exceeded max_cosets = " +
                               std::to_string(cfg_.max_cosets));
        }
    }

    // Scan every relator everywhere without defining; reclaim dead rows.
    // Returns the new cursor position.
    std::size_t lookahead_and_compact(std::size_t cursor) {
        for (std::size_t c = 0; c < nrows_; ++c) {
            std::int32_t a = static_cast<std::int32_t>(c);
            if (dead(a)) continue;
            for (auto& r : cp_.relators) {
                scan(a, r, /*fill=*/false, false);
                if (dead(a)) break;
            }
        }
        if (nlive_ == nrows_)  // nothing reclaimed
            throw budget_error("coset enumeration exceeded max_cosets = " +
                               std::to_string(cfg_.max_cosets));
        return compact(cursor);
    }

    // Renumber live cosets contiguously, preserving order.
    std::size_t compact(std::size_t cursor) {
        std::vector<std::int32_t> remap(nrows_, -1);
        std::int32_t next = 0;
        std::size_t new_cursor = 0;
        for (std::size_t c = 0; c < nrows_; ++c) {
            if (!dead(static_cast<std::int32_t>(c))) {
                if (c < cursor) ++new_cursor;
                remap[c] = next++;
            }
        }
        std::vector<std::int32_t> nt(static_cast<size_t>(next) * static_cast<size_t>(ncols_), -1);
        for (std::size_t c = 0; c < nrows_; ++c) {
            if (remap[c] < 0) continue;
            for (int col = 0; col < ncols_; ++col) {
                std::int32_t d = at(static_cast<std::int32_t>(c), col);
                if (d >= 0)
                    nt[static_cast<size_t>(remap[c]) * static_cast<size_t>(ncols_) +
                       static_cast<size_t>(col)] = remap[static_cast<size_t>(rep(d))];
            }
        }
        tab_ = std::move(nt);
        nrows_ = static_cast<size_t>(next);
        nlive_ = nrows_;
        p_.assign(nrows_, 0);
        for (std::size_t c = 0; c < nrows_; ++c) p_[c] = static_cast<std::int32_t>(c);
        return new_cursor;
    }

    // ---- Felsch ----

    void run_felsch() {
        try {
            for (auto& w : subgens_) scan(0, w, true, true);
            process_deductions();
            std::size_t row_cursor = 0;
            for (;;) {
                auto slot = next_undefined(row_cursor);
                if (!slot.first) break;
                std::int32_t a = slot.second.first;
                int col = slot.second.second;
                std::int32_t d = new_coset();
                at(a, col) = d;
                at(d, CompiledPres::inv(col)) = a;
                deductions_.emplace_back(a, col);
                process_deductions();
                if (collapsed_changed_) {
                    row_cursor = 0;  // coincidences may have opened earlier slots
                    collapsed_changed_ = false;
                }
            }
        } catch (OutOfSpace&) {
            throw budget_error("coset enumeration exceeded max_cosets = " +
                               std::to_string(cfg_.max_cosets));
        }
    }

    bool collapsed_changed_ = false;

    std::pair<bool, std::pair<std::int32_t, int>> next_undefined(std::size_t& row_cursor) {
        if (cfg_.fill_order == FillOrder::row_major) {
            for (std::size_t c = row_cursor; c < nrows_; ++c) {
                if (dead(static_cast<std::int32_t>(c))) continue;
                for (int col = 0; col < ncols_; ++col)
                    if (at(static_cast<std::int32_t>(c), col) < 0) {
                        row_cursor = c;
                        return {true, {static_cast<std::int32_t>(c), col}};
                    }
            }
        } else {
            // column-major: a fresh coset opens slots in every column, so no
            // cursor can be kept
            for (int col = 0; col < ncols_; ++col)
                for (std::size_t c = 0; c < nrows_; ++c) {
                    if (dead(static_cast<std::int32_t>(c))) continue;
                    if (at(static_cast<std::int32_t>(c), col) < 0)
                        return {true, {static_cast<std::int32_t>(c), col}};
                }
        }
        return {false, {0, 0}};
    }

    void process_deductions() {
        while (!deductions_.empty()) {
            auto [c, col] = deductions_.back();
            deductions_.pop_back();
            std::int32_t a = rep(c);
            std::int32_t b0 = at(a, col);
            if (b0 < 0) continue;  // undone by a coincidence
            for (auto& [ri, pos] : cp_.occ[static_cast<size_t>(col)])
                scan_rotation(a, ri, static_cast<size_t>(pos));
            std::int32_t b = rep(b0);
            for (auto& [ri, pos] : cp_.occ[static_cast<size_t>(CompiledPres::inv(col))])
                scan_rotation(b, ri, static_cast<size_t>(pos));
            if (!dead_queue_.empty()) collapsed_changed_ = true;
        }
    }

    void scan_rotation(std::int32_t alpha, int ri, size_t pos) {
        const auto& r = cp_.relators[static_cast<size_t>(ri)];
        std::vector<int> rot(r.size());
        for (size_t k = 0; k < r.size(); ++k) rot[k] = r[(pos + k) % r.size()];
        scan(alpha, rot, /*fill=*/false, /*track=*/true);
    }

    // ---- output ----

    CosetTable finish() {
        compact(0);
        standardize();
        CosetTable out;
        out.gen_names = cp_.names;
        out.index = static_cast<int>(nrows_);
        out.tab = tab_;
        out.collapsed = collapsed_;
        out.total_defined = total_defined_;
        out.complete = true;
        for (auto v : tab_)
            if (v < 0) out.complete = false;
        return out;
    }

    // Renumber cosets in scan order (rows in order, columns in column order)
    // so identical inputs yield byte-identical tables.
    void standardize() {
        std::vector<std::int32_t> old_to_new(nrows_, -1), new_to_old;
        new_to_old.reserve(nrows_);
        old_to_new[0] = 0;
        new_to_old.push_back(0);
        for (std::size_t c = 0; c < new_to_old.size(); ++c) {
            for (int col = 0; col < ncols_; ++col) {
                std::int32_t d = at(new_to_old[c], col);
                if (d >= 0 && old_to_new[static_cast<size_t>(d)] < 0) {
                    old_to_new[static_cast<size_t>(d)] = static_cast<std::int32_t>(new_to_old.size());
                    new_to_old.push_back(d);
                }
            }
        }
        if (new_to_old.size() != nrows_) return;  // disconnected partial table: leave as is
        std::vector<std::int32_t> nt(tab_.size(), -1);
        for (std::size_t c = 0; c < nrows_; ++c)
            for (int col = 0; col < ncols_; ++col) {
                std::int32_t d = at(static_cast<std::int32_t>(c), col);
                if (d >= 0)
                    nt[static_cast<size_t>(old_to_new[c]) * static_cast<size_t>(ncols_) +
                       static_cast<size_t>(col)] = old_to_new[static_cast<size_t>(d)];
            }
        tab_ = std::move(nt);
    }
};

}  // namespace detail

/// Todd-Coxeter coset enumeration of `pres` over the subgroup generated by
/// `subgroup_gens`.  Deterministic for a fixed config; throws budget_error if
/// max_cosets is exhausted.  The returned table is audited against the
/// presentation before being handed back.
inline CosetTable coset_enumerate(const Presentation& pres, const std::vector<Word>& subgroup_gens,
                                  const EnumConfig& cfg = {}) {
    for (auto& w : subgroup_gens) pres.validate_word(w);
    detail::Enumerator e(pres, subgroup_gens, cfg);
    CosetTable t = e.run();
    if (t.complete) audit_table(pres, t, subgroup_gens);
    return t;
}

}  // namespace mcg

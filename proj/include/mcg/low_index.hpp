#pragma once

#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "mcg/cosets.hpp"
#include "mcg/json_io.hpp"

namespace mcg {

struct SubgroupRecord {
    int index = 0;
    CosetTable table;  // row-major standardized canonical form
    PermRep rep;       // extracted from the table columns
};

struct LowIndexOptions {
    FillOrder fill_order = FillOrder::column_major;
    std::vector<std::string> column_order;  // empty = default_column_order
    int workers = 1;
    std::uint64_t max_nodes = 0;            // 0 = unlimited
    std::string checkpoint_file;            // empty = no checkpointing
    std::uint64_t checkpoint_every = 2'000'000;  // nodes between checkpoint writes
    std::function<bool()> interrupted;      // optional poll; triggers clean stop
};

struct LowIndexResult {
    std::vector<SubgroupRecord> records;
    std::uint64_t nodes = 0;
    bool completed = true;  // false if stopped by budget or interrupt
    double seconds = 0.0;
};

namespace detail {

// Backtrack over partial coset tables with at most `max_index` cosets.
// Choices are made at the first undefined slot in fill order; relator scans
// propagate deductions to closure, any forced coincidence kills the branch.
// The first-in-class test keeps exactly one table per conjugacy class of
// subgroups: a table survives iff its row-major standardization from base 0
// is lexicographically minimal among all base points.
class LowIndexSearcher {
public:
    LowIndexSearcher(const Presentation& pres, int max_index, const LowIndexOptions& opt)
        : pres_(pres),
          cp_(CompiledPres::make(pres, opt.column_order)),
          n_(max_index),
          opt_(opt),
          ncols_(cp_.ncols()) {
        if (max_index < 1) throw error("low_index: max_index must be >= 1");
        tab_.assign(static_cast<size_t>(n_) * static_cast<size_t>(ncols_), -1);
        k_ = 1;  // coset 0 always exists
    }

    // Runs the search; frames may be preloaded via restore() for resume or
    // worker splitting.
    LowIndexResult run() {
        LowIndexResult res;
        auto t0 = std::chrono::steady_clock::now();
        if (frames_.empty()) descend();
        std::uint64_t last_checkpoint = nodes_;
        bool stopped = false;

        while (!frames_.empty()) {
            Frame& f = frames_.back();
            if (f.assigned) {
                undo(f.trail_mark, f.k_before);
                f.assigned = false;
            }
            int v = next_candidate(f);
            if (v < 0) {
                frames_.pop_back();
                continue;
            }
            ++nodes_;
            if (opt_.max_nodes && nodes_ >= opt_.max_nodes) {
                stopped = true;
            } else if (opt_.interrupted && (nodes_ & 0xfff) == 0 && opt_.interrupted()) {
                stopped = true;
            }
            if (stopped) {
                f.next_v = v;  // retry this candidate on resume
                --nodes_;
                break;
            }
            if (!opt_.checkpoint_file.empty() && nodes_ - last_checkpoint >= opt_.checkpoint_every) {
                f.next_v = v;
                write_checkpoint();
                last_checkpoint = nodes_;
                f.next_v = v + (v == k_ ? 1 : 0);  // restore iterator semantics
                f.next_v = v;                      // (candidate not yet consumed)
            }
            if (assign(f.slot_c, f.slot_col, v)) {
                if (!first_in_class_reject()) {
                    f.assigned = true;
                    f.cur_v = v;
                    descend();
                    continue;
                }
            }
            undo(f.trail_mark, f.k_before);
        }
        if (stopped) {
            res.completed = false;
            if (!opt_.checkpoint_file.empty()) write_checkpoint();
            // unwind cleanly
            while (!frames_.empty()) {
                Frame& f = frames_.back();
                if (f.assigned) undo(f.trail_mark, f.k_before);
                frames_.pop_back();
            }
        }
        res.records = std::move(records_);
        res.nodes = nodes_;
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return res;
    }

    // Seed the search with a fixed assignment path (worker split / resume).
    // Each entry is (coset, column, value); the final `pending` pair, if
    // given, restores the candidate iterator of the deepest frame.
    void restore(const std::vector<std::array<int, 3>>& path, int pending_next_v,
                 std::uint64_t nodes_done, std::vector<SubgroupRecord> found) {
        for (auto& [c, col, v] : path) {
            auto slot = next_slot();
            if (!slot || slot->first != c || slot->second != col)
                throw error("low_index: checkpoint does not replay against this presentation/config");
            Frame f;
            f.slot_c = c;
            f.slot_col = col;
            f.trail_mark = trail_.size();
            f.k_before = k_;
            if (!assign(c, col, v)) throw error("low_index: checkpoint replay hit a contradiction");
            f.assigned = true;
            f.cur_v = v;
            f.next_v = v + 1;
            frames_.push_back(f);
        }
        // open the next frame and position its iterator
        descend();
        if (!frames_.empty() && !frames_.back().assigned && pending_next_v >= 0)
            frames_.back().next_v = pending_next_v;
        nodes_ = nodes_done;
        records_ = std::move(found);
    }

    const Presentation& pres_;
    CompiledPres cp_;
    int n_;
    LowIndexOptions opt_;
    int ncols_;

    std::vector<std::int32_t> tab_;
    int k_ = 1;
    std::vector<int> trail_;  // flat positions set (entry + mirror both recorded)
    std::uint64_t nodes_ = 0;
    std::vector<SubgroupRecord> records_;

    struct Frame {
        int slot_c = 0, slot_col = 0;
        int next_v = 0;   // next candidate value to try
        size_t trail_mark = 0;
        int k_before = 1;
        bool assigned = false;
        int cur_v = -1;
    };
    std::vector<Frame> frames_;

    std::int32_t& at(int c, int col) {
        return tab_[static_cast<size_t>(c) * static_cast<size_t>(ncols_) + static_cast<size_t>(col)];
    }
    std::int32_t getat(int c, int col) const {
        return tab_[static_cast<size_t>(c) * static_cast<size_t>(ncols_) + static_cast<size_t>(col)];
    }

    std::optional<std::pair<int, int>> next_slot() const {
        if (opt_.fill_order == FillOrder::row_major) {
            for (int c = 0; c < k_; ++c)
                for (int col = 0; col < ncols_; ++col)
                    if (getat(c, col) < 0) return std::make_pair(c, col);
        } else {
            for (int col = 0; col < ncols_; ++col)
                for (int c = 0; c < k_; ++c)
                    if (getat(c, col) < 0) return std::make_pair(c, col);
        }
        return std::nullopt;
    }

    // Push a frame for the next undefined slot, or record a completed table.
    void descend() {
        auto slot = next_slot();
        if (!slot) {
            handle_complete();
            return;
        }
        Frame f;
        f.slot_c = slot->first;
        f.slot_col = slot->second;
        f.trail_mark = trail_.size();
        f.k_before = k_;
        frames_.push_back(f);
    }

    int next_candidate(Frame& f) {
        for (int v = f.next_v; v <= k_; ++v) {
            if (v == k_) {
                f.next_v = k_ + 1;
                return k_ < n_ ? k_ : -1;  // the fresh-coset choice, tried last
            }
            if (getat(v, CompiledPres::inv(f.slot_col)) < 0) {
                f.next_v = v + 1;
                return v;
            }
        }
        return -1;
    }

    void set_entry(int c, int col, int d) {
        at(c, col) = d;
        trail_.push_back(c * ncols_ + col);
        at(d, CompiledPres::inv(col)) = c;
        trail_.push_back(d * ncols_ + CompiledPres::inv(col));
    }

    void undo(size_t mark, int k_before) {
        while (trail_.size() > mark) {
            tab_[static_cast<size_t>(trail_.back())] = -1;
            trail_.pop_back();
        }
        k_ = k_before;
    }

    // Assign tab[c][col] = v (creating coset v == k_ if needed) and propagate
    // relator deductions to closure.  Returns false on contradiction; caller
    // rewinds via undo().
    bool assign(int c, int col, int v) {
        if (v == k_) ++k_;
        set_entry(c, col, v);
        size_t head = trail_.size() - 2;
        // process every new entry against all relator cycles through it
        while (head < trail_.size()) {
            int pos = trail_[head++];
            int a = pos / ncols_, cl = pos % ncols_;
            for (auto& [ri, rpos] : cp_.occ[static_cast<size_t>(cl)])
                if (!scan_cycle(a, ri, static_cast<size_t>(rpos))) return false;
        }
        return true;
    }

    // Scan the cyclic rotation of relator `ri` starting at position `pos`
    // from coset alpha.  Deductions extend the trail; a closed mismatched
    // cycle or forced coincidence is a contradiction.
    bool scan_cycle(int alpha, int ri, size_t pos) {
        const auto& r = cp_.relators[static_cast<size_t>(ri)];
        const long len = static_cast<long>(r.size());
        if (len == 0) return true;
        auto letter = [&](long idx) { return r[static_cast<size_t>((static_cast<long>(pos) + idx) % len)]; };
        int f = alpha, b = alpha;
        long i = 0, j = len - 1;
        while (i <= j && getat(f, letter(i)) >= 0) f = getat(f, letter(i++));
        if (i > j) return f == b;
        while (j >= i && getat(b, CompiledPres::inv(letter(j))) >= 0)
            b = getat(b, CompiledPres::inv(letter(j--)));
        if (j < i) return f == b;
        if (j == i) {
            set_entry(f, letter(i), b);
            return true;
        }
        return true;  // gap of two or more: no information yet
    }

    // ---- first-in-class test -------------------------------------------------

    // Lexicographic comparison of the row-major standardizations of the
    // (possibly partial) table from bases b0 and b1.
    //   -1: b0-side smaller   +1: b1-side smaller   0: equal and complete
    //    2: inconclusive (hit an undefined entry or unreached coset)
    int compare_std(int b0, int b1) const {
        thread_local std::vector<int> nu0, nu1, lab0, lab1;
        nu0.assign(1, b0);
        nu1.assign(1, b1);
        lab0.assign(static_cast<size_t>(k_), -1);
        lab1.assign(static_cast<size_t>(k_), -1);
        lab0[static_cast<size_t>(b0)] = 0;
        lab1[static_cast<size_t>(b1)] = 0;
        for (int c = 0;; ++c) {
            if (c >= static_cast<int>(nu0.size()) || c >= static_cast<int>(nu1.size()))
                return c >= k_ ? 0 : 2;
            for (int col = 0; col < ncols_; ++col) {
                int e0 = getat(nu0[static_cast<size_t>(c)], col);
                int e1 = getat(nu1[static_cast<size_t>(c)], col);
                if (e0 < 0 || e1 < 0) return 2;
                int l0 = lab0[static_cast<size_t>(e0)];
                if (l0 < 0) {
                    l0 = static_cast<int>(nu0.size());
                    lab0[static_cast<size_t>(e0)] = l0;
                    nu0.push_back(e0);
                }
                int l1 = lab1[static_cast<size_t>(e1)];
                if (l1 < 0) {
                    l1 = static_cast<int>(nu1.size());
                    lab1[static_cast<size_t>(e1)] = l1;
                    nu1.push_back(e1);
                }
                if (l0 != l1) return l0 < l1 ? -1 : +1;
            }
            if (c + 1 >= k_) return 0;  // all rows scanned and equal
        }
    }

    // True if some relabeling from another base is strictly smaller, i.e. the
    // current branch can never produce the class representative.
    bool first_in_class_reject() const {
        for (int b = 1; b < k_; ++b)
            if (compare_std(0, b) == +1) return true;
        return false;
    }

    void handle_complete() {
        // exact test on the complete table
        for (int b = 1; b < k_; ++b)
            if (compare_std(0, b) == +1) return;
        records_.push_back(extract_record());
    }

    SubgroupRecord extract_record() const {
        // row-major standardization from base 0 = the canonical form
        std::vector<int> nu{0}, lab(static_cast<size_t>(k_), -1);
        lab[0] = 0;
        for (size_t c = 0; c < nu.size(); ++c)
            for (int col = 0; col < ncols_; ++col) {
                int d = getat(nu[c], col);
                if (lab[static_cast<size_t>(d)] < 0) {
                    lab[static_cast<size_t>(d)] = static_cast<int>(nu.size());
                    nu.push_back(d);
                }
            }
        SubgroupRecord rec;
        rec.index = k_;
        rec.table.gen_names = cp_.names;
        rec.table.index = k_;
        rec.table.complete = true;
        rec.table.tab.assign(static_cast<size_t>(k_) * static_cast<size_t>(ncols_), -1);
        for (int c = 0; c < k_; ++c)
            for (int col = 0; col < ncols_; ++col)
                rec.table.tab[static_cast<size_t>(lab[static_cast<size_t>(c)]) *
                                  static_cast<size_t>(ncols_) +
                              static_cast<size_t>(col)] = lab[static_cast<size_t>(getat(c, col))];
        rec.rep = rep_from_table(rec.table);
        auto audit = verify_representation(pres_, rec.rep);
        if (!audit.holds) throw error("low_index: internal error, table violates a relator");
        return rec;
    }

    // ---- checkpointing ---------------------------------------------------------

    std::string config_fingerprint() const {
        std::string s = presentation_to_text(pres_);
        s += "|max_index=" + std::to_string(n_);
        s += "|fill=" + to_string(opt_.fill_order);
        for (auto& c : cp_.names) s += "|" + c;
        return hex64(fnv1a64(s));
    }

    void write_checkpoint() const {
        Json j;
        j["format"] = "mcg-low-index-checkpoint";
        j["version"] = 1;
        j["fingerprint"] = config_fingerprint();
        j["max_index"] = n_;
        j["fill_order"] = to_string(opt_.fill_order);
        j["nodes"] = nodes_;
        Json path = Json::array();
        int pending_next_v = -1;
        for (auto& f : frames_) {
            if (f.assigned)
                path.push_back(Json::array({f.slot_c, f.slot_col, f.cur_v}));
            else
                pending_next_v = f.next_v;
        }
        j["path"] = std::move(path);
        j["pending_next_v"] = pending_next_v;
        Json recs = Json::array();
        for (auto& r : records_)
            recs.push_back(Json{{"index", r.index}, {"rep", rep_to_json(r.rep)}});
        j["records"] = std::move(recs);
        std::string tmp = opt_.checkpoint_file + ".tmp";
        save_json_file(tmp, j);
        std::rename(tmp.c_str(), opt_.checkpoint_file.c_str());
    }
};

inline SubgroupRecord record_from_rep(PermRep rep) {
    SubgroupRecord rec;
    rec.index = rep.degree;
    rec.table.index = rep.degree;
    rec.table.complete = true;
    for (auto& [n, _] : rep.gens) rec.table.gen_names.push_back(n);
    rec.table.tab.assign(static_cast<size_t>(rep.degree) * rep.gens.size() * 2, -1);
    int ncols = 2 * static_cast<int>(rep.gens.size());
    for (size_t gi = 0; gi < rep.gens.size(); ++gi) {
        const Perm& p = rep.gens[gi].second;
        for (int c = 0; c < rep.degree; ++c) {
            rec.table.tab[static_cast<size_t>(c) * static_cast<size_t>(ncols) + 2 * gi] = p(c);
            rec.table.tab[static_cast<size_t>(p(c)) * static_cast<size_t>(ncols) + 2 * gi + 1] = c;
        }
    }
    rec.rep = std::move(rep);
    return rec;
}

inline void sort_records(std::vector<SubgroupRecord>& recs) {
    std::sort(recs.begin(), recs.end(), [](const SubgroupRecord& a, const SubgroupRecord& b) {
        if (a.index != b.index) return a.index < b.index;
        return a.table.tab < b.table.tab;
    });
}

}  // namespace detail

/// One representative per conjugacy class of subgroups of index <= max_index
/// (including the whole group at index 1).  The result set is independent of
/// fill order and worker count; records are canonical row-major-standardized
/// tables sorted by (index, table).
inline LowIndexResult low_index(const Presentation& pres, int max_index,
                                const LowIndexOptions& opt = {}) {
    if (opt.workers <= 1) {
        detail::LowIndexSearcher s(pres, max_index, opt);
        LowIndexResult res = s.run();
        detail::sort_records(res.records);
        return res;
    }

    // Worker split: distribute the candidates of the root slot.  Each branch
    // runs an independent search (the first-in-class test only consults the
    // branch's own table), results merge by union.
    if (!opt.checkpoint_file.empty())
        throw error("low_index: checkpointing requires workers = 1");
    detail::LowIndexSearcher probe(pres, max_index, opt);
    auto slot = probe.next_slot();
    if (!slot) throw error("low_index: empty table has no slot");
    std::vector<int> root_candidates;
    for (int v = 0; v <= 1 && v < max_index + 1; ++v) {
        // candidates at the root slot of the empty table: coset 0 or a new coset 1
        if (v == 0 || max_index > 1) root_candidates.push_back(v);
    }

    std::mutex mtx;
    LowIndexResult merged;
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    int nworkers = std::min<int>(opt.workers, static_cast<int>(root_candidates.size()));
    for (int wi = 0; wi < nworkers; ++wi) {
        pool.emplace_back([&]() {
            for (;;) {
                size_t idx = next.fetch_add(1);
                if (idx >= root_candidates.size()) return;
                LowIndexOptions o = opt;
                o.workers = 1;
                detail::LowIndexSearcher s(pres, max_index, o);
                std::vector<std::array<int, 3>> path{
                    {slot->first, slot->second, root_candidates[idx]}};
                LowIndexResult part;
                try {
                    s.restore(path, -1, 0, {});
                    part = s.run();
                } catch (error&) {
                    continue;  // root candidate immediately contradictory
                }
                std::lock_guard<std::mutex> lk(mtx);
                merged.nodes += part.nodes;
                merged.completed = merged.completed && part.completed;
                for (auto& r : part.records) merged.records.push_back(std::move(r));
            }
        });
    }
    for (auto& t : pool) t.join();
    detail::sort_records(merged.records);
    return merged;
}

/// Resume a checkpointed single-worker search.
inline LowIndexResult low_index_resume(const Presentation& pres, const std::string& checkpoint_file,
                                       LowIndexOptions opt = {}) {
    Json j = load_json_file(checkpoint_file);
    if (j.at("format") != "mcg-low-index-checkpoint") throw error("not a low-index checkpoint file");
    int max_index = j.at("max_index").get<int>();
    opt.fill_order = j.at("fill_order").get<std::string>() == "row" ? FillOrder::row_major
                                                                    : FillOrder::column_major;
    opt.workers = 1;
    opt.checkpoint_file = checkpoint_file;
    detail::LowIndexSearcher s(pres, max_index, opt);
    if (j.at("fingerprint").get<std::string>() != s.config_fingerprint())
        throw error("checkpoint was written for a different presentation or configuration");
    std::vector<std::array<int, 3>> path;
    for (auto& e : j.at("path"))
        path.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>()});
    std::vector<SubgroupRecord> found;
    for (auto& e : j.at("records"))
        found.push_back(detail::record_from_rep(rep_from_json(e.at("rep"))));
    s.restore(path, j.at("pending_next_v").get<int>(), j.at("nodes").get<std::uint64_t>(),
              std::move(found));
    LowIndexResult res = s.run();
    detail::sort_records(res.records);
    return res;
}

// ---- fill-order benchmark ----------------------------------------------------

struct BenchReport {
    struct Run {
        FillOrder order;
        std::uint64_t nodes = 0;
        double seconds = 0.0;
        std::vector<int> indices;
    };
    Run row, col;
    bool identical_classes = false;
};

/// Runs the search under both fill orders, asserts the class lists agree,
/// and reports nodes and wall time (timings are reported, never asserted).
inline BenchReport bench_fill_order(const Presentation& pres, int max_index,
                                    const LowIndexOptions& base = {}) {
    BenchReport rep;
    for (FillOrder fo : {FillOrder::row_major, FillOrder::column_major}) {
        LowIndexOptions opt = base;
        opt.fill_order = fo;
        opt.workers = 1;
        LowIndexResult r = low_index(pres, max_index, opt);
        BenchReport::Run run;
        run.order = fo;
        run.nodes = r.nodes;
        run.seconds = r.seconds;
        for (auto& rec : r.records) run.indices.push_back(rec.index);
        (fo == FillOrder::row_major ? rep.row : rep.col) = run;
        (void)r;
    }
    rep.identical_classes = rep.row.indices == rep.col.indices;
    if (!rep.identical_classes) throw error("bench_fill_order: class lists differ between orders");
    return rep;
}

}  // namespace mcg

#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mcg/permgrp.hpp"

namespace mcg {

// A word over named generators; letters carry exponent ±1 and the word is
// kept freely reduced.
struct Word {
    std::vector<std::pair<std::string, int>> letters;

    Word() = default;

    static Word letter(std::string name, int exp = 1) {
        Word w;
        int sign = exp < 0 ? -1 : 1;
        for (int i = 0; i < (exp < 0 ? -exp : exp); ++i) w.letters.emplace_back(name, sign);
        return w;
    }

    size_t size() const { return letters.size(); }
    bool empty() const { return letters.empty(); }

    void reduce() {
        std::vector<std::pair<std::string, int>> out;
        for (auto& l : letters) {
            if (!out.empty() && out.back().first == l.first && out.back().second == -l.second)
                out.pop_back();
            else
                out.push_back(l);
        }
        letters = std::move(out);
    }

    Word operator*(const Word& o) const {
        Word w = *this;
        w.letters.insert(w.letters.end(), o.letters.begin(), o.letters.end());
        w.reduce();
        return w;
    }

    Word inverse() const {
        Word w;
        for (auto it = letters.rbegin(); it != letters.rend(); ++it)
            w.letters.emplace_back(it->first, -it->second);
        return w;
    }

    Word pow(int n) const {
        Word base = n < 0 ? inverse() : *this;
        Word acc;
        for (int i = 0; i < (n < 0 ? -n : n); ++i) acc = acc * base;
        return acc;
    }

    friend bool operator==(const Word&, const Word&) = default;

    static Word parse(std::string_view text);
    std::string str() const;
};

// ---- word text grammar ------------------------------------------------------
//   word := term ('*' term)*
//   term := atom+ [ '^' int ]        exponent after whitespace applies to the
//                                    whole term
//   atom := NAME [ '^' int ]         exponent directly attached (no space)
//         | '(' word ')' [ '^' int ]   applies to that atom only
// NAME = [A-Za-z_][A-Za-z0-9_']*

namespace detail {

struct WordParser {
    std::string_view s;
    size_t i = 0;

    void ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    bool name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    }

    int parse_exponent() {  // called after consuming '^'
        ws();
        bool neg = false;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
            throw error("word syntax: expected integer after '^'");
        long v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            v = v * 10 + (s[i++] - '0');
        return static_cast<int>(neg ? -v : v);
    }

    Word parse_word() {
        Word w = parse_term();
        ws();
        while (i < s.size() && s[i] == '*') {
            ++i;
            w = w * parse_term();
            ws();
        }
        return w;
    }

    Word parse_term() {
        Word term;
        for (;;) {
            ws();
            if (i >= s.size() || s[i] == '*' || s[i] == ')') break;
            if (s[i] == '^') {  // whitespace-separated: exponentiate whole term
                ++i;
                int e = parse_exponent();
                return term.pow(e);
            }
            if (s[i] == '(') {
                ++i;
                Word inner = parse_word();
                ws();
                if (i >= s.size() || s[i] != ')') throw error("word syntax: expected ')'");
                ++i;
                if (i < s.size() && s[i] == '^') {
                    ++i;
                    inner = inner.pow(parse_exponent());
                }
                term = term * inner;
            } else if (name_start(s[i])) {
                size_t b = i;
                while (i < s.size() && name_char(s[i])) ++i;
                std::string name(s.substr(b, i - b));
                int e = 1;
                if (i < s.size() && s[i] == '^') {  // attached: binds to this atom
                    ++i;
                    e = parse_exponent();
                }
                term = term * Word::letter(name, e);
            } else {
                throw error(std::string("word syntax: unexpected character '") + s[i] + "'");
            }
        }
        return term;
    }
};

}  // namespace detail

inline Word Word::parse(std::string_view text) {
    detail::WordParser p{text};
    Word w = p.parse_word();
    p.ws();
    if (p.i != text.size()) throw error("word syntax: trailing input");
    w.reduce();
    return w;
}

inline std::string Word::str() const {
    if (letters.empty()) return "1";
    std::ostringstream os;
    // Greedy run-length coding of repeated letter blocks so long power words
    // stay readable; a block of inverse letters prints as (positive block)^-r.
    size_t i = 0;
    bool first = true;
    auto emit_letter = [&](std::ostream& o, const std::pair<std::string, int>& l, int reps) {
        o << l.first;
        int e = l.second * reps;
        if (e != 1) o << '^' << e;
    };
    while (i < letters.size()) {
        size_t best_b = 1, best_r = 1;
        size_t remaining = letters.size() - i;
        for (size_t b = 1; b <= remaining / 2; ++b) {
            size_t r = 1;
            while ((r + 1) * b <= remaining &&
                   std::equal(letters.begin() + static_cast<long>(i),
                              letters.begin() + static_cast<long>(i + b),
                              letters.begin() + static_cast<long>(i + r * b)))
                ++r;
            if (r >= 2 && r * b > best_r * best_b) {
                best_b = b;
                best_r = r;
            }
        }
        if (!first) os << ' ';
        first = false;
        if (best_r == 1 || best_b == 1) {
            // lone letter; merge directly adjacent equal letters
            size_t j = i;
            while (j < letters.size() && letters[j] == letters[i]) ++j;
            emit_letter(os, letters[i], static_cast<int>(j - i));
            i = j;
        } else {
            bool all_neg = true;
            for (size_t k = 0; k < best_b; ++k) all_neg = all_neg && letters[i + k].second < 0;
            os << '(';
            if (all_neg) {
                for (size_t k = 0; k < best_b; ++k) {
                    if (k) os << ' ';
                    os << letters[i + best_b - 1 - k].first;
                }
                os << ")^-" << best_r;
            } else {
                for (size_t k = 0; k < best_b; ++k) {
                    if (k) os << ' ';
                    emit_letter(os, letters[i + k], 1);
                }
                os << ")^" << best_r;
            }
            i += best_r * best_b;
        }
    }
    return os.str();
}

// ---- presentations ----------------------------------------------------------

struct Presentation {
    std::vector<std::string> gens;
    std::vector<Word> relators;

    bool has_gen(std::string_view name) const {
        for (auto& g : gens)
            if (g == name) return true;
        return false;
    }

    void validate_word(const Word& w) const {
        for (auto& [n, e] : w.letters)
            if (!has_gen(n)) throw error("word uses undeclared generator " + n);
    }

    void add(Word w) {
        w.reduce();
        validate_word(w);
        relators.push_back(std::move(w));
    }
};

inline Presentation add_relator(Presentation pres, Word w) {
    pres.add(std::move(w));
    return pres;
}

inline std::string presentation_to_text(const Presentation& p) {
    std::ostringstream os;
    os << "gens:";
    for (auto& g : p.gens) os << ' ' << g;
    os << '\n';
    for (auto& r : p.relators) os << r.str() << '\n';
    return os.str();
}

inline Presentation presentation_from_text(std::string_view text) {
    Presentation p;
    std::istringstream is{std::string(text)};
    std::string line;
    bool have_gens = false;
    while (std::getline(is, line)) {
        size_t h = line.find('#');
        if (h != std::string::npos) line.erase(h);
        size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        size_t e = line.find_last_not_of(" \t\r");
        std::string body = line.substr(b, e - b + 1);
        if (!have_gens) {
            if (body.rfind("gens:", 0) != 0)
                throw error("presentation text: first line must start with 'gens:'");
            std::istringstream gs(body.substr(5));
            std::string g;
            while (gs >> g) p.gens.push_back(g);
            if (p.gens.empty()) throw error("presentation text: empty generator list");
            have_gens = true;
        } else {
            p.add(Word::parse(body));
        }
    }
    if (!have_gens) throw error("presentation text: missing 'gens:' line");
    return p;
}

// ---- Matsumoto presentations of the mapping class groups --------------------

/// Intersection pattern of the defining curves: consecutive chain curves
/// a_i, a_{i+1} (1 <= i <= 2g) meet in one point, a_0 meets a_4, every other
/// pair is disjoint.  Indices 0..2g+1 are accepted so callers can reason
/// about the extra boundary-side curve a_{2g+1} even though presentations
/// never use it.
inline bool curves_intersect(int i, int j, int g) {
    if (i > j) std::swap(i, j);
    if (i < 0 || j > 2 * g + 1) throw error("curves_intersect: index out of range");
    if (i >= 1 && j == i + 1) return true;
    if (i == 0 && j == 4) return true;
    return false;
}

/// The finite presentation of M_{g,1} on generators T0..T2g (closed=false),
/// or of M_{g,0} with the one extra relation (closed=true).
inline Presentation matsumoto_presentation(int g, bool closed) {
    if (g < 2) throw error("matsumoto_presentation: genus must be >= 2");
    Presentation p;
    for (int i = 0; i <= 2 * g; ++i) p.gens.push_back("T" + std::to_string(i));
    auto T = [](int i) { return Word::letter("T" + std::to_string(i)); };

    for (int i = 0; i <= 2 * g; ++i) {
        for (int j = i + 1; j <= 2 * g; ++j) {
            if (curves_intersect(i, j, g))
                p.add(T(i) * T(j) * T(i) * (T(j) * T(i) * T(j)).inverse());
            else
                p.add(T(i) * T(j) * T(i).inverse() * T(j).inverse());
        }
    }

    Word a = T(2) * T(3) * T(4) * T(0);
    Word b = T(1) * T(2) * T(3) * T(4) * T(0);
    p.add(a.pow(10) * b.pow(-6));
    if (g >= 3) {
        Word c = T(2) * T(3) * T(4) * T(5) * T(6) * T(0);
        Word d = T(1) * c;
        p.add(c.pow(12) * d.pow(-9));
    }
    if (closed) {
        Word prod = T(0);
        for (int i = 3; i <= 2 * g - 1; ++i) prod = prod * T(i);
        p.add(Word::letter("T1", 2 * g - 2) * prod.pow(-(4 * g - 4)));
    }
    return p;
}

// ---- evaluation -------------------------------------------------------------

/// Image of a word under a permutation representation.  Letters act on points
/// left to right (the right action used by coset tables), so as a function the
/// result is image(l_n)∘...∘image(l_1).
inline Perm word_image(const PermRep& rep, const Word& w) {
    Perm acc = Perm::identity(rep.degree);
    for (auto& [name, e] : w.letters) {
        const Perm& p = rep.image(name);
        acc = e > 0 ? compose(p, acc) : compose(inverse(p), acc);
    }
    return acc;
}

inline Perm evaluate_word(const PermRep& rep, const Word& w) { return word_image(rep, w); }

struct RelatorReport {
    bool holds = true;
    std::vector<size_t> failures;  // indices into Presentation::relators
};

inline RelatorReport verify_representation(const Presentation& pres, const PermRep& rep) {
    std::set<std::string> pn(pres.gens.begin(), pres.gens.end());
    if (pn != rep.names()) throw error("verify_representation: generator name sets differ");
    RelatorReport rpt;
    for (size_t i = 0; i < pres.relators.size(); ++i) {
        if (!word_image(rep, pres.relators[i]).is_identity()) {
            rpt.holds = false;
            rpt.failures.push_back(i);
        }
    }
    return rpt;
}

// ---- abelianization ---------------------------------------------------------

namespace detail {

// Smith normal form (diagonal entries, divisibility enforced) of a dense
// integer matrix; exact arithmetic throughout.
inline std::vector<BigInt> smith_diagonal(std::vector<std::vector<BigInt>> m) {
    size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    std::vector<BigInt> diag;
    size_t r0 = 0, c0 = 0;
    while (r0 < rows && c0 < cols) {
        // pick pivot: smallest nonzero absolute value in the remaining block
        size_t pr = rows, pc = cols;
        for (size_t i = r0; i < rows; ++i)
            for (size_t j = c0; j < cols; ++j)
                if (m[i][j] != 0 &&
                    (pr == rows || abs(m[i][j]) < abs(m[pr][pc])))
                    pr = i, pc = j;
        if (pr == rows) break;  // block is zero
        std::swap(m[r0], m[pr]);
        for (size_t i = 0; i < rows; ++i) std::swap(m[i][c0], m[i][pc]);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (size_t i = r0 + 1; i < rows; ++i) {
                if (m[i][c0] == 0) continue;
                BigInt q = m[i][c0] / m[r0][c0];
                for (size_t j = c0; j < cols; ++j) m[i][j] -= q * m[r0][j];
                if (m[i][c0] != 0) {
                    std::swap(m[r0], m[i]);
                    clean = false;
                }
            }
            for (size_t j = c0 + 1; j < cols; ++j) {
                if (m[r0][j] == 0) continue;
                BigInt q = m[r0][j] / m[r0][c0];
                for (size_t i = r0; i < rows; ++i) m[i][j] -= q * m[i][c0];
                if (m[r0][j] != 0) {
                    for (size_t i = 0; i < rows; ++i) std::swap(m[i][c0], m[i][j]);
                    clean = false;
                }
            }
        }
        diag.push_back(abs(m[r0][c0]));
        ++r0;
        ++c0;
    }
    // enforce divisibility d1 | d2 | ...
    for (size_t i = 0; i + 1 < diag.size(); ++i)
        for (size_t j = i + 1; j < diag.size(); ++j) {
            if (diag[j] % diag[i] == 0) continue;
            BigInt g = gcd(diag[i], diag[j]);
            BigInt l = diag[i] / g * diag[j];
            diag[i] = g;
            diag[j] = l;
        }
    std::sort(diag.begin(), diag.end());
    return diag;
}

}  // namespace detail

/// Invariant factors of the abelianized group, ascending, 1s omitted; a
/// trailing 0 per free factor.
inline std::vector<BigInt> abelianization(const Presentation& pres) {
    size_t n = pres.gens.size();
    std::vector<std::vector<BigInt>> m;
    for (auto& r : pres.relators) {
        std::vector<BigInt> row(n, 0);
        for (auto& [name, e] : r.letters) {
            for (size_t j = 0; j < n; ++j)
                if (pres.gens[j] == name) {
                    row[j] += e;
                    break;
                }
        }
        m.push_back(std::move(row));
    }
    auto diag = detail::smith_diagonal(std::move(m));
    size_t rank = 0;
    std::vector<BigInt> out;
    for (auto& d : diag)
        if (d != 0) {
            ++rank;
            if (d != 1) out.push_back(d);
        }
    for (size_t i = rank; i < n; ++i) out.push_back(0);
    return out;
}

}  // namespace mcg

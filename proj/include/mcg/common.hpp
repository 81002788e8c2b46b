#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace mcg {

using BigInt = boost::multiprecision::cpp_int;

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a backtrack or enumeration exceeds its configured budget.
/// Budgets are explicit; exceeding one is never silently truncated.
struct budget_error : error {
    using error::error;
};

enum class FormType : int { plus = +1, minus = -1 };

inline char type_char(FormType t) { return t == FormType::plus ? '+' : '-'; }

inline FormType type_from_char(char c) {
    if (c == '+') return FormType::plus;
    if (c == '-') return FormType::minus;
    throw error(std::string("form type must be '+' or '-', got '") + c + "'");
}

inline FormType opposite(FormType t) {
    return t == FormType::plus ? FormType::minus : FormType::plus;
}

/// Budgets for the backtrack searches (simultaneous conjugacy, centralizer).
/// max_degree guards against accidentally launching a search on a domain the
/// backtracks were not designed for; callers may raise both knobs.
struct SearchLimits {
    std::uint64_t max_nodes = 50'000'000;
    int max_degree = 64;
};

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

}  // namespace mcg

#ifndef INVPERS_COMMON_HPP
#define INVPERS_COMMON_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace invpers {

/// Sorted, duplicate-free list of point or vertex indices.  Used both for
/// subsets of a metric space and for simplices (vertex-id sets).
using IndexSet = std::vector<int>;

/// Error category carried by every exception thrown from this library.
/// The CLI maps categories to process exit codes.
class Error : public std::runtime_error {
public:
    enum class Kind {
        argument,      // bad argument value
        validation,    // input violates a documented contract (schedules, subsets)
        precondition,  // operation invoked outside its stated precondition
        resource,      // configurable resource ceiling exceeded
        parse,         // malformed input file
        internal,      // invariant of the library itself failed
    };

    Error(Kind kind, const std::string& msg) : std::runtime_error(msg), kind(kind) {}

    Kind kind;
};

/// Comparison policy for strict thresholds (diam < 2eps, d < eps).
///
/// Values within `tie` of a threshold are classified as lying *on* it: they
/// satisfy "<=" but never "<".  Strict tests therefore exclude the boundary
/// band entirely, and set-of-minimizers computations include everything
/// within `tie` of the minimum.
struct Tol {
    double tie = 1e-9;

    bool lt(double v, double threshold) const { return v < threshold - tie; }
    bool leq(double v, double threshold) const { return v < threshold + tie; }
    bool near(double a, double b) const { return std::abs(a - b) <= tie; }
};

inline bool is_sorted_unique(const IndexSet& s) {
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i - 1] >= s[i]) return false;
    return true;
}

inline IndexSet sorted_unique(IndexSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

inline bool subset_of(const IndexSet& a, const IndexSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline IndexSet set_union(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

struct IndexSetHash {
    std::size_t operator()(const IndexSet& v) const {
        std::size_t h = v.size();
        for (int x : v) h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

/// Orders simplices/poset elements by cardinality first, then lexicographically.
inline bool card_lex_less(const IndexSet& a, const IndexSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

/// Process-wide ceiling on enumerated simplex/poset-element counts.
/// Overridable through the INVPERS_MAX_SIMPLICES environment variable.
inline std::size_t default_element_ceiling() {
    static const std::size_t cap = [] {
        if (const char* env = std::getenv("INVPERS_MAX_SIMPLICES")) {
            char* end = nullptr;
            unsigned long long v = std::strtoull(env, &end, 10);
            if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
        }
        return static_cast<std::size_t>(2'000'000);
    }();
    return cap;
}

}  // namespace invpers

#endif

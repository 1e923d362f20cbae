#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "laplax/util.hpp"

namespace laplax {

// Lengths rounded down onto representatives so that few distinct values
// remain: walking the sorted lengths, a new representative starts whenever
// the current length more than doubles the previous representative. Every
// rounded value lands in [d/2, d], and distinct rounded values differ by a
// factor greater than 2.
struct RoundedLengths {
    std::vector<double> rounded;       // per input position
    std::vector<int> sort_perm;        // indices sorting the input ascending
    std::vector<int> class_of;         // per input position, into class_values
    std::vector<double> class_values;  // ascending distinct representatives

    int class_count() const { return int(class_values.size()); }
};

inline RoundedLengths round_lengths(std::span<const double> lengths) {
    RoundedLengths out;
    out.rounded.resize(lengths.size());
    out.class_of.assign(lengths.size(), -1);
    out.sort_perm.resize(lengths.size());
    for (int i = 0; i < int(lengths.size()); ++i) out.sort_perm[std::size_t(i)] = i;
    if (lengths.empty()) return out;
    for (double d : lengths) require(d > 0.0, "lengths must be positive");
    std::stable_sort(out.sort_perm.begin(), out.sort_perm.end(),
                     [&](int a, int b) { return lengths[std::size_t(a)] < lengths[std::size_t(b)]; });

    double rep = lengths[std::size_t(out.sort_perm[0])];
    out.class_values.push_back(rep);
    for (int k = 0; k < int(lengths.size()); ++k) {
        double d = lengths[std::size_t(out.sort_perm[std::size_t(k)])];
        if (d > 2.0 * rep) {
            rep = d;
            out.class_values.push_back(rep);
        }
        out.rounded[std::size_t(out.sort_perm[std::size_t(k)])] = rep;
        out.class_of[std::size_t(out.sort_perm[std::size_t(k)])] = int(out.class_values.size()) - 1;
    }
    return out;
}

// Distinct length values plus a per-edge class index; the form the
// few-distinct-lengths Dijkstra consumes.
struct LengthClasses {
    std::vector<int> class_of;     // per edge
    std::vector<double> values;    // ascending distinct

    int class_count() const { return int(values.size()); }
    double length(int edge) const { return values[std::size_t(class_of[std::size_t(edge)])]; }

    static LengthClasses from_rounded(const RoundedLengths& r) {
        return {r.class_of, r.class_values};
    }

    // Exact distinct values of arbitrary lengths (no rounding).
    static LengthClasses from_lengths(std::span<const double> lengths) {
        LengthClasses lc;
        std::vector<double> sorted(lengths.begin(), lengths.end());
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        lc.values = std::move(sorted);
        lc.class_of.resize(lengths.size());
        for (int i = 0; i < int(lengths.size()); ++i) {
            auto it = std::lower_bound(lc.values.begin(), lc.values.end(), lengths[std::size_t(i)]);
            lc.class_of[std::size_t(i)] = int(it - lc.values.begin());
        }
        return lc;
    }
};

} // namespace laplax

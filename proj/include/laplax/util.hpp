#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace laplax {

// Thrown for contract violations on inputs (bad files, non-SDD matrices,
// dimension mismatches). Internal tripwires use assertion_error instead.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Invariant that must hold by construction was observed broken.
class assertion_error : public std::logic_error {
public:
    explicit assertion_error(const std::string& what) : std::logic_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw input_error(msg);
}

inline void ensure(bool cond, const std::string& msg) {
    if (!cond) throw assertion_error(msg);
}

// Neumaier-compensated accumulator. Totals that feed tolerance checks
// (stretch sums, sampling frequencies, residual dots) go through this.
class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_dot(std::span<const double> a, std::span<const double> b) {
    KahanSum s;
    for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
    return s.value();
}

inline double norm2(std::span<const double> a) {
    return std::sqrt(compensated_dot(a, a));
}

// Counts edge touches so solver work can be compared across problem sizes.
struct WorkCounter {
    std::uint64_t edge_touches = 0;
    void touch(std::uint64_t k) { edge_touches += k; }
};

} // namespace laplax

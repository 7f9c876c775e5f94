#pragma once

// d-ary Fibonacci numbers F_d and their growth rate phi_d, the unique
// positive root of x^d = x^(d-1) + ... + x + 1. These govern the
// Always-Go-Left witness-tree sizes and the theoretical max-load scale.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "tabhash/common.hpp"

namespace tabhash {

// Memoised F_d: F_d(k) = 0 for k <= 0, F_d(1) = 1,
// F_d(k) = F_d(k-1) + ... + F_d(k-d) for k > 1.
class DaryFibonacci {
public:
    explicit DaryFibonacci(int d) : d_(d) {
        if (d < 2) throw input_error("DaryFibonacci: d must be >= 2");
        values_ = {0, 1};
    }

    int arity() const { return d_; }

    std::uint64_t value(int k) const {
        if (k <= 0) return 0;
        while (static_cast<int>(values_.size()) <= k) {
            const int next = static_cast<int>(values_.size());
            std::uint64_t sum = 0;
            for (int j = 1; j <= d_; ++j) {
                const int idx = next - j;
                const std::uint64_t term = idx <= 0 ? 0 : values_[idx];
                if (sum > std::numeric_limits<std::uint64_t>::max() - term)
                    throw resource_error("DaryFibonacci: value exceeds 64-bit budget");
                sum += term;
            }
            values_.push_back(sum);
        }
        return values_[k];
    }

private:
    int d_;
    mutable std::vector<std::uint64_t> values_;
};

inline std::uint64_t fib_d(int d, int k) { return DaryFibonacci(d).value(k); }

struct PhiResult {
    double value = 0.0;      // the root phi_d in (1, 2)
    double residual = 0.0;   // |x^d - (x^(d-1) + ... + 1)| at the returned x
    double agl_scale = 0.0;  // 1 / (d * log2 phi_d), the Always-Go-Left load scale
};

// Bisection root of x^d - x^(d-1) - ... - x - 1 on (1, 2). The polynomial is
// negative at 1 (value 1-d) and +1 at 2, and has a single sign change there.
inline PhiResult phi_d(int d, double tol = 1e-13) {
    if (d < 2) throw input_error("phi_d: d must be >= 2");
    if (!(tol > 0)) throw input_error("phi_d: tol must be positive");

    auto poly = [d](double x) {
        // Horner form of x^d - x^(d-1) - ... - x - 1.
        double r = x - 1.0;
        for (int i = 1; i < d; ++i) r = r * x - 1.0;
        return r;
    };

    double lo = 1.0, hi = 2.0;
    double flo = poly(lo);
    double mid = 1.5;
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        const double f = poly(mid);
        if (f == 0.0 || hi - lo < 1e-16) break;
        if ((f < 0) == (flo < 0)) {
            lo = mid;
            flo = f;
        } else {
            hi = mid;
        }
    }
    PhiResult out;
    out.value = mid;
    out.residual = std::abs(poly(mid));
    if (out.residual > tol)
        throw resource_error("phi_d: bisection could not reach the requested tolerance");
    out.agl_scale = 1.0 / (d * std::log2(mid));
    return out;
}

}  // namespace tabhash

#pragma once

// Internal exact-arithmetic helper for building the classical expansions.
// Not installed; the public surface only ever sees converted doubles.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace supnorm::detail {

using int128 = __int128;

// Dense integer series on integral exponents 0 .. trunc-1 with 128-bit
// coefficients; every operation checks for overflow.
struct IntSeries {
    std::int64_t trunc = 0;
    std::vector<int128> c;

    explicit IntSeries(std::int64_t t) : trunc(t), c(static_cast<std::size_t>(t), 0) {}

    static IntSeries one(std::int64_t t) {
        IntSeries s(t);
        s.c[0] = 1;
        return s;
    }

    IntSeries mul(const IntSeries& o) const {
        IntSeries r(std::min(trunc, o.trunc));
        for (std::int64_t i = 0; i < trunc && i < r.trunc; ++i) {
            if (c[i] == 0) continue;
            for (std::int64_t j = 0; j < o.trunc && i + j < r.trunc; ++j) {
                if (o.c[j] == 0) continue;
                int128 prod;
                if (__builtin_mul_overflow(c[i], o.c[j], &prod))
                    throw std::overflow_error("IntSeries: coefficient overflow (mul)");
                if (__builtin_add_overflow(r.c[i + j], prod, &r.c[i + j]))
                    throw std::overflow_error("IntSeries: coefficient overflow (add)");
            }
        }
        return r;
    }

    IntSeries pow(int e) const {
        IntSeries r = one(trunc), b = *this;
        while (e > 0) {
            if (e & 1) r = r.mul(b);
            e >>= 1;
            if (e) b = b.mul(b);
        }
        return r;
    }

    IntSeries sub(const IntSeries& o) const {
        IntSeries r(std::min(trunc, o.trunc));
        for (std::int64_t i = 0; i < r.trunc; ++i) {
            if (__builtin_sub_overflow(c[i], o.c[i], &r.c[i]))
                throw std::overflow_error("IntSeries: coefficient overflow (sub)");
        }
        return r;
    }

    IntSeries exact_div(std::int64_t q) const {
        IntSeries r(trunc);
        for (std::int64_t i = 0; i < trunc; ++i) {
            if (c[i] % q != 0) throw std::logic_error("IntSeries: inexact division");
            r.c[i] = c[i] / q;
        }
        return r;
    }
};

// prod_{n >= 1} (1 - q^n) by the pentagonal number theorem.
inline IntSeries euler_product(std::int64_t trunc) {
    IntSeries s(trunc);
    for (std::int64_t j = -trunc; j <= trunc; ++j) {
        std::int64_t e = j * (3 * j - 1) / 2;
        if (e < 0 || e >= trunc) continue;
        s.c[e] += (j % 2 == 0) ? 1 : -1;
    }
    return s;
}

inline std::int64_t divisor_power_sum(std::int64_t n, int e) {
    std::int64_t s = 0;
    for (std::int64_t d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        std::int64_t p1 = 1, p2 = 1, q = n / d;
        for (int i = 0; i < e; ++i) {
            p1 *= d;
            p2 *= q;
        }
        s += p1;
        if (q != d) s += p2;
    }
    return s;
}

} // namespace supnorm::detail

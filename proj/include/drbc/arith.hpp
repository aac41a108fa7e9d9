#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace drbc {

using Int = std::int64_t;

struct OverflowError : std::overflow_error {
    using std::overflow_error::overflow_error;
};

// Checked 64-bit operations. Overflow throws, it never wraps.
inline Int add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("int64 add overflow");
    return r;
}

inline Int sub(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("int64 sub overflow");
    return r;
}

inline Int mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("int64 mul overflow");
    return r;
}

inline Int iabs(Int a) {
    if (a == INT64_MIN) throw OverflowError("int64 abs overflow");
    return a < 0 ? -a : a;
}

inline Int gcd(Int a, Int b) { return std::gcd(iabs(a), iabs(b)); }

inline Int lcm(Int a, Int b) {
    if (a == 0 || b == 0) return 0;
    return mul(iabs(a) / gcd(a, b), iabs(b));
}

// Floor division and non-negative remainder (b > 0 or b < 0).
inline Int floordiv(Int a, Int b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline Int mod(Int a, Int b) {
    Int r = a % b;
    if (r < 0) r += (b < 0 ? -b : b);
    return r;
}

inline Int ceildiv(Int a, Int b) { return -floordiv(-a, b); }

// Returns (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0.
struct Egcd {
    Int g, s, t;
};

inline Egcd egcd(Int a, Int b) {
    Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        Int q = old_r / r;
        Int tmp = sub(old_r, mul(q, r));
        old_r = r;
        r = tmp;
        tmp = sub(old_s, mul(q, s));
        old_s = s;
        s = tmp;
        tmp = sub(old_t, mul(q, t));
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) return {-old_r, -old_s, -old_t};
    return {old_r, old_s, old_t};
}

// Inverse of a modulo n (n >= 1). Throws if not invertible.
inline Int modinv(Int a, Int n) {
    if (n == 1) return 0;
    auto e = egcd(mod(a, n), n);
    if (e.g != 1) throw std::domain_error("modinv: not invertible");
    return mod(e.s, n);
}

inline Int isqrt(Int n) {
    if (n < 0) throw std::domain_error("isqrt of negative");
    Int r = static_cast<Int>(__builtin_sqrtl(static_cast<long double>(n)));
    while (r > 0 && mul(r, r) > n) --r;
    while (mul(r + 1, r + 1) <= n) ++r;
    return r;
}

inline Int ipow(Int b, int e) {
    Int r = 1;
    for (int i = 0; i < e; ++i) r = mul(r, b);
    return r;
}

inline std::vector<std::pair<Int, int>> factor_int(Int n) {
    std::vector<std::pair<Int, int>> out;
    n = iabs(n);
    for (Int p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline bool is_squarefree(Int n) {
    for (auto& [p, e] : factor_int(n))
        if (e > 1) return false;
    return true;
}

inline std::vector<Int> primes_up_to(Int n) {
    std::vector<Int> out;
    if (n < 2) return out;
    std::vector<char> sieve(static_cast<std::size_t>(n + 1), 1);
    for (Int i = 2; i <= n; ++i) {
        if (!sieve[i]) continue;
        out.push_back(i);
        for (Int j = i * i; j <= n; j += i) sieve[j] = 0;
    }
    return out;
}

}  // namespace drbc

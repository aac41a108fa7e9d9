#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "arith.hpp"

namespace drbc {

using Rational = boost::multiprecision::cpp_rational;

template <class T>
using Matrix = std::vector<std::vector<T>>;

template <class T>
Matrix<T> zeros(std::size_t r, std::size_t c) {
    return Matrix<T>(r, std::vector<T>(c, T(0)));
}

template <class T>
Matrix<T> identity_matrix(std::size_t n) {
    auto M = zeros<T>(n, n);
    for (std::size_t i = 0; i < n; ++i) M[i][i] = T(1);
    return M;
}

template <class T>
Matrix<T> matmul(const Matrix<T>& A, const Matrix<T>& B) {
    if (A.empty()) return {};
    const std::size_t n = A.size(), k = B.size(), m = B.empty() ? 0 : B[0].size();
    if (A[0].size() != k) throw std::invalid_argument("matmul: shape mismatch");
    auto C = zeros<T>(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (A[i][t] == T(0)) continue;
            for (std::size_t j = 0; j < m; ++j) C[i][j] += A[i][t] * B[t][j];
        }
    return C;
}

template <class T>
std::vector<T> matvec(const Matrix<T>& A, const std::vector<T>& v) {
    std::vector<T> out(A.size(), T(0));
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            if (A[i][j] != T(0)) out[i] += A[i][j] * v[j];
    return out;
}

inline std::size_t rank_rational(Matrix<Rational> A) {
    std::size_t r = 0;
    const std::size_t rows = A.size(), cols = rows ? A[0].size() : 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && A[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(A[p], A[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (A[i][c] == 0) continue;
            Rational q = A[i][c] / A[r][c];
            for (std::size_t j = c; j < cols; ++j) A[i][j] -= q * A[r][j];
        }
        ++r;
    }
    return r;
}

constexpr std::uint64_t kRankPrime = 2147483647ULL;  // 2^31 - 1

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    b %= p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

inline std::size_t rank_modp(const Matrix<Int>& M, std::uint64_t p = kRankPrime) {
    const std::size_t rows = M.size(), cols = rows ? M[0].size() : 0;
    Matrix<std::uint64_t> A(rows, std::vector<std::uint64_t>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) A[i][j] = static_cast<std::uint64_t>(mod(M[i][j], static_cast<Int>(p)));
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t q = r;
        while (q < rows && A[q][c] == 0) ++q;
        if (q == rows) continue;
        std::swap(A[q], A[r]);
        std::uint64_t inv = powmod(A[r][c], p - 2, p);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (A[i][c] == 0) continue;
            std::uint64_t f = A[i][c] * inv % p;
            for (std::size_t j = c; j < cols; ++j) A[i][j] = (A[i][j] + (p - f) * A[r][j]) % p;
        }
        ++r;
    }
    return r;
}

inline Matrix<Rational> to_rational(const Matrix<Int>& M) {
    Matrix<Rational> R(M.size());
    for (std::size_t i = 0; i < M.size(); ++i)
        for (Int x : M[i]) R[i].push_back(Rational(x));
    return R;
}

}  // namespace drbc

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "arith.hpp"

namespace drbc {

using IntMatrix = std::vector<std::vector<Int>>;

struct SmithResult {
    std::vector<Int> diag;  // d_0 | d_1 | ...
    IntMatrix V;            // column transform: D = U * A * V
    IntMatrix Vinv;
};

// Smith normal form of a square integer matrix, tracking the column transform.
inline SmithResult smith_normal_form(IntMatrix A) {
    const std::size_t n = A.size();
    IntMatrix V(n, std::vector<Int>(n, 0)), Vi(n, std::vector<Int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) V[i][i] = Vi[i][i] = 1;

    auto col_addmul = [&](std::size_t dst, std::size_t src, Int q) {  // col_dst += q * col_src
        for (std::size_t i = 0; i < n; ++i) A[i][dst] = add(A[i][dst], mul(q, A[i][src]));
        for (std::size_t i = 0; i < n; ++i) V[i][dst] = add(V[i][dst], mul(q, V[i][src]));
        for (std::size_t j = 0; j < n; ++j) Vi[src][j] = sub(Vi[src][j], mul(q, Vi[dst][j]));
    };
    auto col_swap = [&](std::size_t x, std::size_t y) {
        for (std::size_t i = 0; i < n; ++i) std::swap(A[i][x], A[i][y]);
        for (std::size_t i = 0; i < n; ++i) std::swap(V[i][x], V[i][y]);
        std::swap(Vi[x], Vi[y]);
    };
    auto row_addmul = [&](std::size_t dst, std::size_t src, Int q) {
        for (std::size_t j = 0; j < n; ++j) A[dst][j] = add(A[dst][j], mul(q, A[src][j]));
    };

    for (std::size_t t = 0; t < n; ++t) {
        while (true) {
            std::size_t pi = n, pj = n;
            for (std::size_t i = t; i < n; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (A[i][j] != 0 && (pi == n || iabs(A[i][j]) < iabs(A[pi][pj]))) pi = i, pj = j;
            if (pi == n) break;
            std::swap(A[t], A[pi]);
            if (pj != t) col_swap(t, pj);
            bool clean = true;
            for (std::size_t i = t + 1; i < n; ++i) {
                Int q = floordiv(A[i][t], A[t][t]);
                if (q) row_addmul(i, t, -q);
                if (A[i][t]) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                Int q = floordiv(A[t][j], A[t][t]);
                if (q) col_addmul(j, t, -q);
                if (A[t][j]) clean = false;
            }
            if (!clean) continue;
            bool divisible = true;
            for (std::size_t i = t + 1; i < n && divisible; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (A[i][j] % A[t][t] != 0) {
                        row_addmul(t, i, 1);
                        divisible = false;
                        break;
                    }
            if (divisible) break;
        }
        if (A[t][t] < 0)
            for (auto& x : A[t]) x = -x;
    }
    SmithResult out;
    for (std::size_t i = 0; i < n; ++i) out.diag.push_back(A[i][i]);
    out.V = V;
    out.Vinv = Vi;
    return out;
}

// Finite abelian group on labels 0..n-1 given by its Cayley table, put in
// invariant-factor form. Element <-> exponent vector both ways.
class FiniteAbelianGroup {
public:
    FiniteAbelianGroup() = default;

    FiniteAbelianGroup(std::vector<std::vector<Int>> table, Int identity) : table_(std::move(table)), id_(identity) {
        const Int n = static_cast<Int>(table_.size());
        // greedy generators with mixed-radix coordinates
        std::vector<Int> gens, radix;
        std::vector<std::vector<Int>> coord(n);
        std::vector<char> in(n, 0);
        std::vector<Int> H{id_};
        in[id_] = 1;
        coord[id_] = {};
        IntMatrix rel_rows;
        while (static_cast<Int>(H.size()) < n) {
            Int g = 0;
            while (in[g]) ++g;
            Int r = 1, p = g;
            while (!in[p]) {
                p = table_[p][g];
                ++r;
            }
            std::size_t k = gens.size();
            std::vector<Int> row(k + 1, 0);
            row[k] = r;
            for (std::size_t i = 0; i < k; ++i) row[i] = -coord[p][i];
            rel_rows.push_back(row);
            gens.push_back(g);
            radix.push_back(r);
            std::vector<Int> newH;
            for (Int h : H) {
                auto c = coord[h];
                c.resize(k + 1, 0);
                coord[h] = c;
            }
            for (Int h : H) {
                Int x = h;
                for (Int i = 1; i < r; ++i) {
                    x = table_[x][g];
                    if (in[x]) throw std::logic_error("FiniteAbelianGroup: table is not a group");
                    in[x] = 1;
                    coord[x] = coord[h];
                    coord[x][k] = i;
                    newH.push_back(x);
                }
            }
            H.insert(H.end(), newH.begin(), newH.end());
        }
        const std::size_t k = gens.size();
        for (auto& row : rel_rows) row.resize(k, 0);
        auto snf = smith_normal_form(rel_rows);
        std::vector<std::size_t> keep;
        for (std::size_t j = 0; j < k; ++j)
            if (snf.diag[j] != 1) keep.push_back(j);
        for (auto j : keep) inv_.push_back(snf.diag[j]);
        exps_.assign(n, {});
        for (Int x = 0; x < n; ++x) {
            std::vector<Int> e;
            for (auto j : keep) {
                Int s = 0;
                for (std::size_t i = 0; i < k; ++i) s = add(s, mul(coord[x][i], snf.V[i][j]));
                e.push_back(mod(s, snf.diag[j]));
            }
            exps_[x] = e;
            lookup_[e] = x;
        }
        for (auto j : keep) {
            Int x = id_;
            for (std::size_t i = 0; i < k; ++i) {
                Int e = mod(snf.Vinv[j][i], radix_order(gens[i]));
                for (Int t = 0; t < e; ++t) x = table_[x][gens[i]];
            }
            gens_.push_back(x);
        }
        if (static_cast<Int>(lookup_.size()) != n) throw std::logic_error("FiniteAbelianGroup: coordinates not bijective");
    }

    Int order() const { return static_cast<Int>(table_.size()); }
    Int identity() const { return id_; }
    const std::vector<Int>& invariant_factors() const { return inv_; }
    const std::vector<Int>& generators() const { return gens_; }
    Int op(Int x, Int y) const { return table_[x][y]; }
    const std::vector<std::vector<Int>>& table() const { return table_; }

    Int inverse(Int x) const {
        for (Int y = 0; y < order(); ++y)
            if (table_[x][y] == id_) return y;
        throw std::logic_error("no inverse");
    }

    Int element_order(Int x) const {
        Int r = 1, p = x;
        while (p != id_) {
            p = table_[p][x];
            ++r;
        }
        return r;
    }

    const std::vector<Int>& exponents(Int x) const { return exps_[x]; }
    Int from_exponents(std::vector<Int> e) const {
        for (std::size_t j = 0; j < e.size(); ++j) e[j] = mod(e[j], inv_[j]);
        return lookup_.at(e);
    }

private:
    Int radix_order(Int g) const { return element_order(g); }

    std::vector<std::vector<Int>> table_;
    Int id_ = 0;
    std::vector<Int> inv_;
    std::vector<Int> gens_;
    std::vector<std::vector<Int>> exps_;
    std::map<std::vector<Int>, Int> lookup_;
};

}  // namespace drbc

#include "selcomp/linalg.hpp"

#include "selcomp/error.hpp"

#include <algorithm>
#include <utility>

namespace selcomp {

namespace {

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t l)
{
    std::uint64_t r = 1, b = a % l;
    std::uint32_t e = l - 2;
    while (e) {
        if (e & 1) r = r * b % l;
        b = b * b % l;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

// In-place reduced echelon form; returns pivot columns.
std::vector<std::size_t> reduce(std::vector<ModRow>& rows, std::uint32_t l)
{
    std::vector<std::size_t> pivots;
    if (rows.empty()) return pivots;
    std::size_t ncols = rows[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < rows.size() && rows[piv][c] % l == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[r], rows[piv]);
        std::uint32_t inv = inv_mod(rows[r][c] % l, l);
        for (auto& x : rows[r]) x = static_cast<std::uint32_t>(static_cast<std::uint64_t>(x % l) * inv % l);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r) continue;
            std::uint32_t f = rows[i][c] % l;
            if (!f) continue;
            for (std::size_t k = 0; k < ncols; ++k)
                rows[i][k] = static_cast<std::uint32_t>((rows[i][k] % l + static_cast<std::uint64_t>(l - f) * rows[r][k]) % l);
        }
        pivots.push_back(c);
        ++r;
    }
    rows.resize(r);
    return pivots;
}

}  // namespace

std::size_t rank_mod(std::vector<ModRow> rows, std::uint32_t l) { return reduce(rows, l).size(); }

std::vector<ModRow> row_echelon_mod(std::vector<ModRow> rows, std::uint32_t l)
{
    reduce(rows, l);
    return rows;
}

std::vector<ModRow> kernel_mod(std::vector<ModRow> rows, std::size_t ncols, std::uint32_t l)
{
    for (const auto& r : rows)
        if (r.size() != ncols) throw precondition_error("kernel_mod: ragged matrix");
    auto pivots = reduce(rows, l);
    std::vector<bool> is_pivot(ncols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<ModRow> basis;
    for (std::size_t free = 0; free < ncols; ++free) {
        if (is_pivot[free]) continue;
        ModRow v(ncols, 0);
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = (l - rows[i][free] % l) % l;
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<std::size_t> independent_subset_mod(const std::vector<ModRow>& vectors, std::uint32_t l)
{
    std::vector<std::size_t> chosen;
    std::vector<ModRow> acc;
    std::size_t rank = 0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        acc.push_back(vectors[i]);
        std::size_t r = rank_mod(acc, l);
        if (r > rank) {
            chosen.push_back(i);
            rank = r;
        } else {
            acc.pop_back();
        }
    }
    return chosen;
}

std::vector<ModRow> transpose(const std::vector<ModRow>& m, std::size_t ncols)
{
    std::vector<ModRow> t(ncols, ModRow(m.size(), 0));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < ncols; ++j) t[j][i] = m[i][j];
    return t;
}

IntMatrix hnf(IntMatrix rows)
{
    if (rows.empty()) return rows;
    std::size_t ncols = rows[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
        // gcd-combine column c into row r
        for (std::size_t i = r + 1; i < rows.size(); ++i) {
            if (rows[i][c] == 0) continue;
            if (rows[r][c] == 0) {
                std::swap(rows[r], rows[i]);
                continue;
            }
            Int g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), rows[r][c].get_mpz_t(), rows[i][c].get_mpz_t());
            Int a = rows[r][c] / g, b = rows[i][c] / g;
            for (std::size_t k = c; k < ncols; ++k) {
                Int x = rows[r][k], y = rows[i][k];
                rows[r][k] = s * x + t * y;
                rows[i][k] = a * y - b * x;
            }
        }
        if (rows[r][c] == 0) continue;
        if (rows[r][c] < 0)
            for (auto& x : rows[r]) x = -x;
        for (std::size_t i = 0; i < r; ++i) {
            Int q = floor_div(rows[i][c], rows[r][c]);
            if (q != 0)
                for (std::size_t k = c; k < ncols; ++k) rows[i][k] -= q * rows[r][k];
        }
        ++r;
    }
    rows.resize(r);
    return rows;
}

SmithForm smith_form(IntMatrix rows, std::size_t ncols)
{
    IntMatrix a = hnf(std::move(rows));
    std::size_t nrows = a.size();
    // vinv tracks the inverse of the accumulated column transform
    IntMatrix vinv(ncols, std::vector<Int>(ncols, Int(0)));
    for (std::size_t i = 0; i < ncols; ++i) vinv[i][i] = 1;
    auto col_addmul = [&](std::size_t dst, std::size_t src, const Int& q) {
        // column dst -= q * column src; inverse: row src of vinv += q * row dst
        for (std::size_t i = 0; i < nrows; ++i) a[i][dst] -= q * a[i][src];
        for (std::size_t k = 0; k < ncols; ++k) vinv[src][k] += q * vinv[dst][k];
    };
    auto col_swap = [&](std::size_t x, std::size_t y) {
        for (std::size_t i = 0; i < nrows; ++i) std::swap(a[i][x], a[i][y]);
        std::swap(vinv[x], vinv[y]);
    };
    auto col_neg = [&](std::size_t x) {
        for (std::size_t i = 0; i < nrows; ++i) a[i][x] = -a[i][x];
        for (auto& v : vinv[x]) v = -v;
    };
    std::size_t t = 0;
    for (; t < std::min(nrows, ncols); ++t) {
        for (;;) {
            // smallest nonzero entry of the trailing block to (t, t)
            std::size_t bi = nrows, bj = ncols;
            for (std::size_t i = t; i < nrows; ++i)
                for (std::size_t j = t; j < ncols; ++j)
                    if (a[i][j] != 0 && (bi == nrows || abs(a[i][j]) < abs(a[bi][bj]))) {
                        bi = i;
                        bj = j;
                    }
            if (bi == nrows) break;
            std::swap(a[t], a[bi]);
            if (bj != t) col_swap(t, bj);
            bool clean = true;
            for (std::size_t i = t + 1; i < nrows; ++i) {
                if (a[i][t] == 0) continue;
                Int q = floor_div(a[i][t], a[t][t]);
                for (std::size_t k = t; k < ncols; ++k) a[i][k] -= q * a[t][k];
                if (a[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < ncols; ++j) {
                if (a[t][j] == 0) continue;
                Int q = floor_div(a[t][j], a[t][t]);
                col_addmul(j, t, q);
                if (a[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            // divisibility of the remaining block
            std::size_t bad_row = nrows;
            for (std::size_t i = t + 1; i < nrows && bad_row == nrows; ++i)
                for (std::size_t j = t + 1; j < ncols; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        bad_row = i;
                        break;
                    }
            if (bad_row == nrows) break;
            for (std::size_t k = t; k < ncols; ++k) a[t][k] += a[bad_row][k];
        }
        if (t >= nrows || a[t][t] == 0) break;
        if (a[t][t] < 0) col_neg(t);
    }
    SmithForm out;
    for (std::size_t j = 0; j < ncols; ++j) out.diagonal.push_back(j < nrows ? a[j][j] : Int(0));
    out.generators = vinv;
    return out;
}

Rat determinant(RatMatrix m)
{
    std::size_t n = m.size();
    Rat det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m[piv][c] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m[i][c] == 0) continue;
            Rat f = m[i][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[i][k] -= f * m[c][k];
        }
    }
    return det;
}

RatMatrix inverse(RatMatrix m)
{
    std::size_t n = m.size();
    RatMatrix inv(n, std::vector<Rat>(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m[piv][c] == 0) ++piv;
        if (piv == n) throw precondition_error("inverse of a singular matrix");
        std::swap(m[piv], m[c]);
        std::swap(inv[piv], inv[c]);
        Rat d = m[c][c];
        for (std::size_t k = 0; k < n; ++k) {
            m[c][k] /= d;
            inv[c][k] /= d;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || m[i][c] == 0) continue;
            Rat f = m[i][c];
            for (std::size_t k = 0; k < n; ++k) {
                m[i][k] -= f * m[c][k];
                inv[i][k] -= f * inv[c][k];
            }
        }
    }
    return inv;
}

std::vector<Rat> mul(const std::vector<Rat>& v, const RatMatrix& m)
{
    std::size_t ncols = m.empty() ? 0 : m[0].size();
    std::vector<Rat> out(ncols, Rat(0));
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0)
            for (std::size_t j = 0; j < ncols; ++j) out[j] += v[i] * m[i][j];
    return out;
}

}  // namespace selcomp

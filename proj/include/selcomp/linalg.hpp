#pragma once

// Dense linear algebra over Z/lZ, Z and Q at the small sizes met in descent.

#include "selcomp/arith.hpp"

#include <cstdint>
#include <vector>

namespace selcomp {

using ModRow = std::vector<std::uint32_t>;
using IntMatrix = std::vector<std::vector<Int>>;
using RatMatrix = std::vector<std::vector<Rat>>;

/// Rank over Z/lZ, l prime.
std::size_t rank_mod(std::vector<ModRow> rows, std::uint32_t l);
/// Basis of {x : rows * x = 0} over Z/lZ; every row has length ncols.
std::vector<ModRow> kernel_mod(std::vector<ModRow> rows, std::size_t ncols, std::uint32_t l);
/// Reduced row echelon form; zero rows dropped.
std::vector<ModRow> row_echelon_mod(std::vector<ModRow> rows, std::uint32_t l);
/// Indices of a maximal independent subset of the given vectors, chosen greedily in order.
std::vector<std::size_t> independent_subset_mod(const std::vector<ModRow>& vectors, std::uint32_t l);
std::vector<ModRow> transpose(const std::vector<ModRow>& m, std::size_t ncols);

/// Row Hermite normal form of the lattice spanned by the rows (zero rows removed).
/// Pivots positive, entries above each pivot reduced into [0, pivot).
IntMatrix hnf(IntMatrix rows);

struct SmithForm {
    /// Invariant factors d_1 | d_2 | ..., one per column; 0 marks a free summand.
    std::vector<Int> diagonal;
    /// Row i is the image of the i-th cyclic generator in the original coordinates.
    IntMatrix generators;
};
/// Structure of Z^ncols modulo the row lattice.
SmithForm smith_form(IntMatrix rows, std::size_t ncols);

Rat determinant(RatMatrix m);
RatMatrix inverse(RatMatrix m);
/// Row vector times matrix.
std::vector<Rat> mul(const std::vector<Rat>& v, const RatMatrix& m);

}  // namespace selcomp

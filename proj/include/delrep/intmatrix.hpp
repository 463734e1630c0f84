#pragma once

// Dense matrices over Z with arbitrary-precision entries, Smith normal form,
// and a solver for linear congruences A·x = b (mod 1) with prescribed
// denominators. All sizes here are desk scale, so clarity beats asymptotics.

#include <vector>

#include "delrep/rational.hpp"

namespace delrep {

class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, Int(0)) {}

    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<std::vector<long long>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    IntMatrix operator*(const IntMatrix& o) const;
    IntMatrix transpose() const;
    bool operator==(const IntMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

    void swap_rows(std::size_t i, std::size_t j);
    void swap_cols(std::size_t i, std::size_t j);
    /// row[i] += c * row[j]
    void add_row(std::size_t i, std::size_t j, const Int& c);
    /// col[i] += c * col[j]
    void add_col(std::size_t i, std::size_t j, const Int& c);
    void scale_row(std::size_t i, const Int& c);
    void scale_col(std::size_t j, const Int& c);

private:
    std::size_t rows_, cols_;
    std::vector<Int> a_;
};

struct SmithResult {
    IntMatrix u, d, v; // u * m * v = d
};

/// Smith normal form: d diagonal with d1 | d2 | ..., nonnegative diagonal,
/// u and v unimodular.
SmithResult smith_normal_form(const IntMatrix& m);

/// Determinant (fraction-free Gaussian elimination); square input required.
Int det(const IntMatrix& m);

bool is_unimodular(const IntMatrix& m);

/// Inverse of a unimodular matrix, exact over Z. Throws domain_error otherwise.
IntMatrix inverse_unimodular(const IntMatrix& m);

/// Outcome of solve_congruence. When unsolvable, `certificate` is an integer
/// row u with u·A = 0 (mod m_j columnwise) while u·b is not an integer, which
/// makes the infeasibility independently checkable.
struct CongruenceSolution {
    bool solvable = false;
    std::vector<QmodZ> x;
    std::vector<Int> certificate;
};

/// Solves A·x = b componentwise modulo 1 where x[j] is constrained to the
/// cyclic subgroup (1/moduli[j])·Z / Z.
CongruenceSolution solve_congruence(const IntMatrix& a,
                                    const std::vector<Rational>& b,
                                    const std::vector<Int>& moduli);

} // namespace delrep

#include "delrep/intmatrix.hpp"

#include <boost/multiprecision/integer.hpp>

namespace delrep {

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long long>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows[0].size() : 0;
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) throw validation_error("ragged matrix literal");
        for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw domain_error("matrix product dimension mismatch");
    IntMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Int& x = at(i, k);
            if (x == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, j) += x * o.at(k, j);
        }
    return r;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

void IntMatrix::swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < cols_; ++k) std::swap(at(i, k), at(j, k));
}

void IntMatrix::swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < rows_; ++k) std::swap(at(k, i), at(k, j));
}

void IntMatrix::add_row(std::size_t i, std::size_t j, const Int& c) {
    for (std::size_t k = 0; k < cols_; ++k) at(i, k) += c * at(j, k);
}

void IntMatrix::add_col(std::size_t i, std::size_t j, const Int& c) {
    for (std::size_t k = 0; k < rows_; ++k) at(k, i) += c * at(k, j);
}

void IntMatrix::scale_row(std::size_t i, const Int& c) {
    for (std::size_t k = 0; k < cols_; ++k) at(i, k) *= c;
}

void IntMatrix::scale_col(std::size_t j, const Int& c) {
    for (std::size_t k = 0; k < rows_; ++k) at(k, j) *= c;
}

namespace {

Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

// Finds the position of a nonzero entry of minimal absolute value in the
// trailing block starting at (t, t); returns false if the block is zero.
bool find_pivot(const IntMatrix& m, std::size_t t, std::size_t& pi, std::size_t& pj) {
    bool found = false;
    Int best;
    for (std::size_t i = t; i < m.rows(); ++i)
        for (std::size_t j = t; j < m.cols(); ++j) {
            const Int& x = m.at(i, j);
            if (x == 0) continue;
            Int ax = abs_int(x);
            if (!found || ax < best) {
                best = ax;
                pi = i;
                pj = j;
                found = true;
            }
        }
    return found;
}

} // namespace

SmithResult smith_normal_form(const IntMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    SmithResult r{IntMatrix::identity(rows), m, IntMatrix::identity(cols)};
    IntMatrix& d = r.d;
    const std::size_t steps = std::min(rows, cols);

    for (std::size_t t = 0; t < steps; ++t) {
        std::size_t pi = t, pj = t;
        if (!find_pivot(d, t, pi, pj)) break;
        d.swap_rows(t, pi);
        r.u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        r.v.swap_cols(t, pj);

        for (;;) {
            // Clear column t below the pivot, then row t right of the pivot,
            // re-selecting a smaller pivot whenever a reduction leaves a
            // nonzero remainder.
            bool reduced = true;
            for (std::size_t i = t + 1; i < rows && reduced; ++i) {
                if (d.at(i, t) == 0) continue;
                Int q = d.at(i, t) / d.at(t, t);
                d.add_row(i, t, -q);
                r.u.add_row(i, t, -q);
                if (d.at(i, t) != 0) {
                    d.swap_rows(t, i);
                    r.u.swap_rows(t, i);
                    reduced = false;
                }
            }
            if (!reduced) continue;
            for (std::size_t j = t + 1; j < cols && reduced; ++j) {
                if (d.at(t, j) == 0) continue;
                Int q = d.at(t, j) / d.at(t, t);
                d.add_col(j, t, -q);
                r.v.add_col(j, t, -q);
                if (d.at(t, j) != 0) {
                    d.swap_cols(t, j);
                    r.v.swap_cols(t, j);
                    reduced = false;
                }
            }
            if (!reduced) continue;

            // Enforce the divisibility chain: fold an offending entry into
            // the pivot column and redo the reduction of this step.
            bool chain_ok = true;
            for (std::size_t i = t + 1; i < rows && chain_ok; ++i)
                for (std::size_t j = t + 1; j < cols && chain_ok; ++j)
                    if (d.at(i, j) % d.at(t, t) != 0) {
                        d.add_col(t, j, 1);
                        r.v.add_col(t, j, 1);
                        chain_ok = false;
                    }
            if (chain_ok) break;
        }
        if (d.at(t, t) < 0) {
            d.scale_row(t, -1);
            r.u.scale_row(t, -1);
        }
    }
    return r;
}

Int det(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw domain_error("determinant of non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    // Bareiss fraction-free elimination.
    IntMatrix a = m;
    Int sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a.at(k, k) == 0) {
            std::size_t s = k + 1;
            while (s < n && a.at(s, k) == 0) ++s;
            if (s == n) return 0;
            a.swap_rows(k, s);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Int num = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
                a.at(i, j) = num / prev; // exact by Bareiss
            }
        prev = a.at(k, k);
    }
    return sign * a.at(n - 1, n - 1);
}

bool is_unimodular(const IntMatrix& m) {
    if (m.rows() != m.cols()) return false;
    const Int d = det(m);
    return d == 1 || d == -1;
}

IntMatrix inverse_unimodular(const IntMatrix& m) {
    if (!is_unimodular(m)) throw domain_error("matrix is not unimodular");
    // With |det| = 1 the Smith form is the identity, so inv = V * U.
    SmithResult s = smith_normal_form(m);
    IntMatrix inv = s.v * s.u;
    return inv;
}

CongruenceSolution solve_congruence(const IntMatrix& a,
                                    const std::vector<Rational>& b,
                                    const std::vector<Int>& moduli) {
    const std::size_t n = a.rows(), g = a.cols();
    if (b.size() != n || moduli.size() != g)
        throw domain_error("solve_congruence: dimension mismatch");
    for (const Int& m : moduli)
        if (m < 1) throw domain_error("solve_congruence: moduli must be >= 1");

    // Common scale Q: x_j = y_j / m_j turns A·x = b (mod 1) into the integer
    // congruence C·y = d (mod Q) with C[i][j] = Q·A[i][j]/m_j and d = Q·b.
    Int q(1);
    for (const Int& m : moduli) q = boost::multiprecision::lcm(q, m);
    for (const Rational& r : b)
        q = boost::multiprecision::lcm(q, Int(boost::multiprecision::denominator(r)));

    IntMatrix c(n, g + n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < g; ++j) c.at(i, j) = a.at(i, j) * (q / moduli[j]);
        c.at(i, g + i) = q;
    }
    std::vector<Int> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rational scaled = b[i] * Rational(q);
        d[i] = Int(boost::multiprecision::numerator(scaled)); // denominator is 1 by choice of q
    }

    SmithResult snf = smith_normal_form(c);
    std::vector<Int> ud(n, Int(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) ud[i] += snf.u.at(i, k) * d[k];

    // S·w = U·d with S = snf.d; the block [C | Q·I] has full row rank and its
    // invariant factors divide Q.
    std::vector<Int> w(g + n, Int(0));
    for (std::size_t i = 0; i < n; ++i) {
        const Int& s = snf.d.at(i, i);
        if (s == 0 || ud[i] % s != 0) {
            CongruenceSolution out;
            out.solvable = false;
            const Int scale = (s == 0) ? Int(1) : Int(q / s);
            out.certificate.resize(n);
            for (std::size_t k = 0; k < n; ++k) out.certificate[k] = snf.u.at(i, k) * scale;
            return out;
        }
        w[i] = ud[i] / s;
    }

    CongruenceSolution out;
    out.solvable = true;
    out.x.resize(g);
    for (std::size_t j = 0; j < g; ++j) {
        Int yj(0);
        for (std::size_t i = 0; i < n; ++i) yj += snf.v.at(j, i) * w[i];
        out.x[j] = QmodZ(Rational(yj, moduli[j]));
    }
    return out;
}

} // namespace delrep

#include "delrep/spectral.hpp"

#include <cmath>

#include "delrep/errors.hpp"

namespace delrep {

namespace {

// Exact rational square root: succeeds iff numerator and denominator are
// perfect squares.
std::optional<Rational> rational_sqrt(const Rational& r) {
    using boost::multiprecision::numerator;
    using boost::multiprecision::denominator;
    if (r < 0) return std::nullopt;
    Int num = numerator(r), den = denominator(r);
    Int sn = boost::multiprecision::sqrt(num);
    Int sd = boost::multiprecision::sqrt(den);
    if (sn * sn != num || sd * sd != den) return std::nullopt;
    return Rational(sn, sd);
}

} // namespace

SpectralModel::SpectralModel(std::vector<SpectralMode> modes) : modes_(std::move(modes)) {
    const std::size_t n = modes_.size();
    sqrt_.resize(n);
    bool all_exact = true;
    std::vector<Rational> exact(n);
    for (std::size_t j = 0; j < n; ++j) {
        const SpectralMode& mj = modes_[j];
        if (!(mj.eigenvalue > 0))
            throw validation_error("mode eigenvalues must be positive");
        if (mj.partner >= n || mj.partner == j)
            throw validation_error("partner map must be a fixed-point-free index");
        const SpectralMode& mp = modes_[mj.partner];
        if (mp.partner != j) throw validation_error("partner map is not an involution");
        if (mp.eigenvalue != mj.eigenvalue)
            throw validation_error("paired modes must share an eigenvalue");
        if (mj.j_sign * mp.j_sign != -1)
            throw validation_error("pair signs must multiply to -1");
        sqrt_[j] = std::sqrt(to_double(mj.eigenvalue));
        if (all_exact) {
            auto s = rational_sqrt(mj.eigenvalue);
            if (s)
                exact[j] = *s;
            else
                all_exact = false;
        }
    }
    if (all_exact) exact_sqrt_ = std::move(exact);
}

const Rational& SpectralModel::exact_sqrt(std::size_t j) const {
    if (exact_sqrt_.empty())
        throw domain_error("model eigenvalues do not have rational square roots");
    return exact_sqrt_[j];
}

SpectralModel circle_model(int n_max) {
    if (n_max < 1) throw domain_error("circle model needs n_max >= 1");
    std::vector<SpectralMode> modes;
    modes.reserve(2 * static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        const std::size_t c = 2 * static_cast<std::size_t>(n - 1);
        modes.push_back({Rational(static_cast<long long>(n) * n), c + 1, -1}); // cos
        modes.push_back({Rational(static_cast<long long>(n) * n), c, +1});     // sin
    }
    return SpectralModel(std::move(modes));
}

namespace {
void check_support(const SpectralModel& m, const std::size_t len) {
    if (len > m.size()) throw size_error("mode vector longer than the model");
}
} // namespace

double v_inner(const SpectralModel& m, const ModeVec& a, const ModeVec& b) {
    check_support(m, a.size());
    check_support(m, b.size());
    double acc = 0.0;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t j = 0; j < n; ++j) acc += m.sqrt_eigenvalue(j) * a[j] * b[j];
    return acc;
}

ModeVec apply_J(const SpectralModel& m, const ModeVec& a) {
    check_support(m, a.size());
    ModeVec out(a.size(), 0.0);
    for (std::size_t j = 0; j < a.size(); ++j) {
        const SpectralMode& mj = m.mode(j);
        if (mj.partner < out.size())
            out[mj.partner] += mj.j_sign * a[j];
        else if (a[j] != 0.0)
            throw size_error("J image leaves the vector's truncation");
    }
    return out;
}

double symplectic(const SpectralModel& m, const ModeVec& a, const ModeVec& b) {
    check_support(m, a.size());
    check_support(m, b.size());
    auto coeff = [](const ModeVec& v, std::size_t j) { return j < v.size() ? v[j] : 0.0; };
    // Pairwise accumulation of sqrt(lambda) s_p (a_j b_p - a_p b_j); the
    // grouping makes antisymmetry (and symplectic(a, a) = 0) exact in floats.
    double acc = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) {
        const std::size_t p = m.mode(j).partner;
        if (p < j) continue;
        acc += m.sqrt_eigenvalue(j) * m.mode(p).j_sign *
               (coeff(a, j) * coeff(b, p) - coeff(a, p) * coeff(b, j));
    }
    return acc;
}

Rational v_inner_exact(const SpectralModel& m, const RationalModeVec& a,
                       const RationalModeVec& b) {
    check_support(m, a.size());
    check_support(m, b.size());
    Rational acc(0);
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t j = 0; j < n; ++j) acc += m.exact_sqrt(j) * a[j] * b[j];
    return acc;
}

RationalModeVec apply_J_exact(const SpectralModel& m, const RationalModeVec& a) {
    check_support(m, a.size());
    RationalModeVec out(a.size(), Rational(0));
    for (std::size_t j = 0; j < a.size(); ++j) {
        const SpectralMode& mj = m.mode(j);
        if (mj.partner < out.size())
            out[mj.partner] += mj.j_sign * a[j];
        else if (a[j] != 0)
            throw size_error("J image leaves the vector's truncation");
    }
    return out;
}

Rational symplectic_exact(const SpectralModel& m, const RationalModeVec& a,
                          const RationalModeVec& b) {
    return v_inner_exact(m, a, apply_J_exact(m, b));
}

} // namespace delrep

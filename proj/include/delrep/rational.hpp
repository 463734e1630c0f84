#pragma once

// Exact arithmetic in Q and in the circle group Q/Z, plus the float-extended
// phase type used where exact lattice phases mix with spectral integrals.

#include <complex>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "delrep/errors.hpp"

namespace delrep {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q" or "p" with optional sign; q > 0 after reduction.
Rational parse_rational(const std::string& text);
std::string rational_str(const Rational& r);
double to_double(const Rational& r);
long long to_ll(const Int& n);

/// Residue modulo 1, stored as the reduced fraction in [0,1).
/// Equality is structural; all arithmetic stays exact.
class QmodZ {
public:
    QmodZ() : r_(0) {}
    explicit QmodZ(const Rational& r) : r_(reduce(r)) {}
    QmodZ(long long num, long long den) : r_(reduce(Rational(num, den))) {}

    static QmodZ half() { return QmodZ(1, 2); }

    const Rational& frac() const { return r_; }
    bool is_zero() const { return r_ == 0; }
    Int denominator() const { return boost::multiprecision::denominator(r_); }
    Int numerator() const { return boost::multiprecision::numerator(r_); }

    QmodZ operator+(const QmodZ& o) const { return QmodZ(r_ + o.r_); }
    QmodZ operator-(const QmodZ& o) const { return QmodZ(r_ - o.r_); }
    QmodZ operator-() const { return QmodZ(-r_); }
    QmodZ times(const Int& n) const { return QmodZ(r_ * Rational(n)); }
    QmodZ times(long long n) const { return times(Int(n)); }

    bool operator==(const QmodZ& o) const { return r_ == o.r_; }
    bool operator!=(const QmodZ& o) const { return r_ != o.r_; }
    bool operator<(const QmodZ& o) const { return r_ < o.r_; }

    double to_double() const;
    /// e^{2 pi i value}.
    std::complex<double> unit() const;
    std::string str() const { return rational_str(r_); }

private:
    static Rational reduce(Rational r);
    Rational r_; // invariant: 0 <= r_ < 1
};

/// Phase in R/Z split as (exact rational part) + (float remainder).
/// Torsion and lattice contributions stay in the exact slot; mode-space
/// integrals ride in the float slot. A phase with zero float slot compares
/// exactly.
class CirclePhase {
public:
    CirclePhase() : exact_(), rest_(0.0) {}
    explicit CirclePhase(const QmodZ& q) : exact_(q), rest_(0.0) {}
    CirclePhase(const QmodZ& q, double rest) : exact_(q), rest_(rest) {}

    const QmodZ& exact() const { return exact_; }
    double rest() const { return rest_; }
    bool is_exact() const { return rest_ == 0.0; }

    CirclePhase operator+(const CirclePhase& o) const {
        return CirclePhase(exact_ + o.exact_, rest_ + o.rest_);
    }
    CirclePhase operator-(const CirclePhase& o) const {
        return CirclePhase(exact_ - o.exact_, rest_ - o.rest_);
    }
    CirclePhase operator-() const { return CirclePhase(-exact_, -rest_); }

    /// Total value reduced into [0,1).
    double value() const;
    /// e^{2 pi i value}.
    std::complex<double> unit() const;
    std::string str() const;

private:
    QmodZ exact_;
    double rest_;
};

} // namespace delrep

#include "delrep/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

namespace delrep {

Rational parse_rational(const std::string& text) {
    std::string s = text;
    // trim
    auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    if (s.empty()) throw validation_error("empty rational literal");

    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw validation_error("zero denominator in '" + text + "'");
        return Rational(num, den);
    } catch (const std::exception&) {
        throw validation_error("malformed rational '" + text + "' (expected p or p/q)");
    }
}

std::string rational_str(const Rational& r) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(r);
    if (boost::multiprecision::denominator(r) != 1)
        os << '/' << boost::multiprecision::denominator(r);
    return os.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

long long to_ll(const Int& n) { return n.convert_to<long long>(); }

Rational QmodZ::reduce(Rational r) {
    const Int num = boost::multiprecision::numerator(r);
    const Int den = boost::multiprecision::denominator(r); // > 0 by construction
    Int q = num / den;
    if (num < 0 && q * den != num) --q; // floor division
    return r - Rational(q);
}

double QmodZ::to_double() const { return delrep::to_double(r_); }

std::complex<double> QmodZ::unit() const {
    const double t = 2.0 * std::numbers::pi * to_double();
    return {std::cos(t), std::sin(t)};
}

double CirclePhase::value() const {
    double v = exact_.to_double() + rest_;
    v -= std::floor(v);
    if (v >= 1.0) v = 0.0; // guard against floor rounding at the seam
    return v;
}

std::complex<double> CirclePhase::unit() const {
    const double t = 2.0 * std::numbers::pi * value();
    return {std::cos(t), std::sin(t)};
}

std::string CirclePhase::str() const {
    std::ostringstream os;
    os << exact_.str();
    if (!is_exact()) os << " + " << rest_;
    return os.str();
}

} // namespace delrep

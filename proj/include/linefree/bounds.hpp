// bounds.hpp — exact arithmetic for the point-count bound formulas:
// theta_q(s) for any integer s (rational for s < -1), the classical plane
// bound (d-1)q + 1, the hypersurface bound
// (d-1)(q^{n-1}+1) + (d-2)(theta_q(n-3)-1), and the hyperplane-section
// subset bound (delta-1)q + 1 + floor((delta-1)/theta_q(n-2)).

#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace linefree {

// Exact reduced rational; bound quantities are integers except theta_q(s)
// for s <= -2, which is genuinely fractional (theta_q(-2) = -1/q).
class BoundValue {
public:
    using Rat = boost::rational<long long>;

    BoundValue(long long num = 0, long long den = 1) : r_(num, den) {}
    explicit BoundValue(Rat r) : r_(std::move(r)) {}

    long long numerator() const { return r_.numerator(); }
    long long denominator() const { return r_.denominator(); }
    bool is_integer() const { return r_.denominator() == 1; }

    long long as_integer() const {
        if (!is_integer())
            throw std::domain_error("bound value " + to_string() + " is not an integer");
        return r_.numerator();
    }

    // floor toward -infinity
    long long floor() const {
        long long n = r_.numerator(), d = r_.denominator();
        long long q = n / d;
        if (n % d != 0 && n < 0) --q;
        return q;
    }

    std::string to_string() const {
        if (is_integer()) return std::to_string(r_.numerator());
        return std::to_string(r_.numerator()) + "/" + std::to_string(r_.denominator());
    }

    BoundValue operator+(const BoundValue& o) const { return BoundValue(r_ + o.r_); }
    BoundValue operator-(const BoundValue& o) const { return BoundValue(r_ - o.r_); }
    BoundValue operator*(const BoundValue& o) const { return BoundValue(r_ * o.r_); }
    BoundValue operator/(const BoundValue& o) const { return BoundValue(r_ / o.r_); }
    bool operator==(const BoundValue& o) const { return r_ == o.r_; }
    bool operator!=(const BoundValue& o) const { return r_ != o.r_; }
    bool operator<(const BoundValue& o) const { return r_ < o.r_; }
    bool operator<=(const BoundValue& o) const { return r_ <= o.r_; }

    const Rat& rat() const { return r_; }

private:
    Rat r_;
};

namespace detail {
inline long long ipow(long long base, unsigned k) {
    long long r = 1;
    while (k--) r *= base;
    return r;
}
}  // namespace detail

// theta_q(s) = (q^{s+1} - 1) / (q - 1), extended to all integers s.
inline BoundValue theta(uint64_t q, int s) {
    if (q < 2) throw std::invalid_argument("theta requires q >= 2");
    long long Q = static_cast<long long>(q);
    BoundValue::Rat qpow = (s + 1 >= 0)
        ? BoundValue::Rat(detail::ipow(Q, static_cast<unsigned>(s + 1)), 1)
        : BoundValue::Rat(1, detail::ipow(Q, static_cast<unsigned>(-(s + 1))));
    return BoundValue((qpow - 1) / BoundValue::Rat(Q - 1, 1));
}

// (d-1)q + 1: plane curves of degree d with no F_q-line component.
inline long long sziklai_bound(long long d, uint64_t q) {
    if (d < 1) throw std::invalid_argument("degree must be >= 1");
    return (d - 1) * static_cast<long long>(q) + 1;
}

// (d-1)(q^{n-1}+1) + (d-2)(theta_q(n-3)-1): line-free hypersurfaces of
// degree d in P^n. The theta term is fractional for n = 2 but the total is
// always an integer; surfaced as an error (never rounded) if that fails.
inline long long main_bound(int n, long long d, uint64_t q) {
    if (n < 2) throw std::invalid_argument("main_bound requires n >= 2");
    if (d < 1) throw std::invalid_argument("degree must be >= 1");
    long long Q = static_cast<long long>(q);
    BoundValue v = BoundValue(d - 1) * BoundValue(detail::ipow(Q, static_cast<unsigned>(n - 1)) + 1)
                 + BoundValue(d - 2) * (theta(q, n - 3) - BoundValue(1));
    return v.as_integer();
}

// (delta-1)q + 1 + floor((delta-1)/theta_q(n-2)): any point set meeting
// every hyperplane in at most delta points.
inline long long subset_section_bound(long long delta, int n, uint64_t q) {
    if (delta < 1) throw std::invalid_argument("delta must be >= 1");
    if (n < 2) throw std::invalid_argument("subset_section_bound requires n >= 2");
    BoundValue ratio = BoundValue(delta - 1) / theta(q, n - 2);
    return (delta - 1) * static_cast<long long>(q) + 1 + ratio.floor();
}

// true iff plugging the (n-1)-dimensional bound into the subset bound
// reproduces the n-dimensional bound exactly.
inline bool induction_step_check(int n, long long d, uint64_t q) {
    if (n < 3) throw std::invalid_argument("induction_step_check requires n >= 3");
    if (d < 2 || d > static_cast<long long>(q) + 1)
        throw std::invalid_argument("induction_step_check requires 2 <= d <= q+1");
    long long delta = main_bound(n - 1, d, q);
    return subset_section_bound(delta, n, q) == main_bound(n, d, q);
}

}  // namespace linefree

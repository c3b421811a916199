#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ainfty {

/// Exact rational scalar over checked 64-bit integers.
///
/// Kept in lowest terms with positive denominator.  Any intermediate that
/// would overflow int64 throws std::overflow_error instead of wrapping;
/// nothing in this library ever rounds.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }

    friend Rational operator+(const Rational& a, const Rational& b)
    {
        // a/b + c/d over the gcd-reduced common denominator
        std::int64_t g = std::gcd(a.den_, b.den_);
        std::int64_t bd = b.den_ / g;
        std::int64_t n = checked_add(checked_mul(a.num_, bd), checked_mul(b.num_, a.den_ / g));
        std::int64_t d = checked_mul(a.den_, bd);
        return Rational(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b)
    {
        std::int64_t g1 = std::gcd(std::abs(a.num_), b.den_);
        std::int64_t g2 = std::gcd(std::abs(b.num_), a.den_);
        return Rational(checked_mul(a.num_ / g1, b.num_ / g2),
                        checked_mul(a.den_ / g2, b.den_ / g1));
    }
    friend Rational operator/(const Rational& a, const Rational& b)
    {
        if (b.num_ == 0)
            throw std::domain_error("Rational: division by zero");
        return a * Rational(b.den_, b.num_);
    }
    Rational operator-() const
    {
        Rational r;
        r.num_ = checked_neg(num_);
        r.den_ = den_;
        return r;
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b)
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b)
    {
        return checked_mul(a.num_, b.den_) < checked_mul(b.num_, a.den_);
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    /// Canonical form "p" or "p/q" used by every serializer.
    std::string str() const
    {
        if (den_ == 1)
            return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    static Rational parse(const std::string& s)
    {
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos)
                return Rational(std::stoll(s));
            return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
        }
        catch (const std::logic_error&) {
            throw std::invalid_argument("Rational: cannot parse \"" + s + "\"");
        }
    }

private:
    void normalize()
    {
        if (den_ == 0)
            throw std::domain_error("Rational: zero denominator");
        if (den_ < 0) {
            num_ = checked_neg(num_);
            den_ = checked_neg(den_);
        }
        std::int64_t g = std::gcd(std::abs(num_), den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0)
            den_ = 1;
    }

    static std::int64_t checked_add(std::int64_t a, std::int64_t b)
    {
        std::int64_t r;
        if (__builtin_add_overflow(a, b, &r))
            throw std::overflow_error("Rational: integer overflow in +");
        return r;
    }
    static std::int64_t checked_mul(std::int64_t a, std::int64_t b)
    {
        std::int64_t r;
        if (__builtin_mul_overflow(a, b, &r))
            throw std::overflow_error("Rational: integer overflow in *");
        return r;
    }
    static std::int64_t checked_neg(std::int64_t a)
    {
        if (a == INT64_MIN)
            throw std::overflow_error("Rational: integer overflow in negate");
        return -a;
    }

    std::int64_t num_;
    std::int64_t den_;
};

/// Prime-field scalar F_p with a process-wide modulus, selectable at runtime
/// (--field p:<prime>).  Provided for speed experiments only; all shipped
/// checks run over Rational.
class Fp {
public:
    Fp() : v_(0) {}
    Fp(std::int64_t n)
    {
        std::int64_t m = static_cast<std::int64_t>(modulus());
        std::int64_t r = n % m;
        v_ = static_cast<std::uint64_t>(r < 0 ? r + m : r);
    }

    static void set_modulus(std::uint64_t p)
    {
        if (p < 2 || p > (1u << 30))
            throw std::invalid_argument("Fp: modulus out of range");
        for (std::uint64_t q = 2; q * q <= p; ++q)
            if (p % q == 0)
                throw std::invalid_argument("Fp: modulus is not prime");
        modulus_ref() = p;
    }
    static std::uint64_t modulus() { return modulus_ref(); }

    std::uint64_t value() const { return v_; }
    bool is_zero() const { return v_ == 0; }

    friend Fp operator+(Fp a, Fp b) { return from_raw((a.v_ + b.v_) % modulus()); }
    friend Fp operator-(Fp a, Fp b) { return from_raw((a.v_ + modulus() - b.v_) % modulus()); }
    friend Fp operator*(Fp a, Fp b) { return from_raw(a.v_ * b.v_ % modulus()); }
    friend Fp operator/(Fp a, Fp b) { return a * b.inverse(); }
    Fp operator-() const { return from_raw(v_ == 0 ? 0 : modulus() - v_); }
    Fp& operator+=(Fp o) { return *this = *this + o; }
    Fp& operator-=(Fp o) { return *this = *this - o; }
    Fp& operator*=(Fp o) { return *this = *this * o; }
    Fp& operator/=(Fp o) { return *this = *this / o; }
    friend bool operator==(Fp a, Fp b) { return a.v_ == b.v_; }
    friend bool operator!=(Fp a, Fp b) { return a.v_ != b.v_; }

    Fp inverse() const
    {
        if (v_ == 0)
            throw std::domain_error("Fp: division by zero");
        // Fermat inverse, p prime
        std::uint64_t r = 1, base = v_, e = modulus() - 2;
        while (e) {
            if (e & 1)
                r = r * base % modulus();
            base = base * base % modulus();
            e >>= 1;
        }
        return from_raw(r);
    }

    std::string str() const { return std::to_string(v_); }

private:
    static Fp from_raw(std::uint64_t v)
    {
        Fp r;
        r.v_ = v;
        return r;
    }
    static std::uint64_t& modulus_ref()
    {
        static std::uint64_t p = 2;
        return p;
    }
    std::uint64_t v_;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& x) { return os << x.str(); }
inline std::ostream& operator<<(std::ostream& os, const Fp& x) { return os << x.str(); }

/// Uniform construction and formatting hooks so every structure can be
/// instantiated over either field.
template <class K>
struct field_traits;

template <>
struct field_traits<Rational> {
    static constexpr const char* name = "q";
    static Rational from_fraction(std::int64_t n, std::int64_t d) { return Rational(n, d); }
    static std::string str(const Rational& x) { return x.str(); }
    static Rational parse(const std::string& s) { return Rational::parse(s); }
};

template <>
struct field_traits<Fp> {
    static constexpr const char* name = "p";
    static Fp from_fraction(std::int64_t n, std::int64_t d) { return Fp(n) / Fp(d); }
    static std::string str(const Fp& x) { return x.str(); }
    static Fp parse(const std::string& s)
    {
        auto slash = s.find('/');
        if (slash == std::string::npos)
            return Fp(std::stoll(s));
        return from_fraction(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    }
};

}  // namespace ainfty

namespace Eigen {

template <>
struct NumTraits<ainfty::Rational> : GenericNumTraits<ainfty::Rational> {
    using Real = ainfty::Rational;
    using NonInteger = ainfty::Rational;
    using Nested = ainfty::Rational;
    using Literal = std::int64_t;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 2,
        AddCost = 8,
        MulCost = 8
    };
    static ainfty::Rational epsilon() { return ainfty::Rational(0); }
    static ainfty::Rational dummy_precision() { return ainfty::Rational(0); }
    static int digits10() { return 0; }
};

template <>
struct NumTraits<ainfty::Fp> : GenericNumTraits<ainfty::Fp> {
    using Real = ainfty::Fp;
    using NonInteger = ainfty::Fp;
    using Nested = ainfty::Fp;
    using Literal = std::int64_t;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 0,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 2,
        MulCost = 2
    };
    static ainfty::Fp epsilon() { return ainfty::Fp(0); }
    static ainfty::Fp dummy_precision() { return ainfty::Fp(0); }
    static int digits10() { return 0; }
};

}  // namespace Eigen

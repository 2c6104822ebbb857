#ifndef MODTOWER_MODP_HPP
#define MODTOWER_MODP_HPP

#include <cstdint>
#include <stdexcept>

#include <Eigen/Core>

namespace modtower {

/// Element of the prime field Z/pZ for word-sized p.
///
/// p == 0 marks a context-free integer constant (what S(0), S(1) produce in
/// generic code); it adopts the modulus of the other operand.
class Fp {
public:
    Fp() = default;
    Fp(int v) : v_(v), p_(0) {}
    Fp(std::int64_t v, std::uint64_t p) : p_(p) { v_ = reduce(v, p); }

    std::uint64_t modulus() const { return p_; }
    std::int64_t value() const { return v_; }

    friend Fp operator+(const Fp& a, const Fp& b)
    {
        std::uint64_t p = common(a, b);
        return Fp(a.in(p) + b.in(p), p);
    }
    friend Fp operator-(const Fp& a, const Fp& b)
    {
        std::uint64_t p = common(a, b);
        return Fp(a.in(p) - b.in(p), p);
    }
    friend Fp operator-(const Fp& a) { return Fp(-a.v_, a.p_); }
    friend Fp operator*(const Fp& a, const Fp& b)
    {
        std::uint64_t p = common(a, b);
        if (p == 0)
            return Fp(a.v_ * b.v_, 0);
        __int128 prod = static_cast<__int128>(a.in(p)) * b.in(p);
        return Fp(static_cast<std::int64_t>(prod % static_cast<__int128>(p)), p);
    }
    friend Fp operator/(const Fp& a, const Fp& b)
    {
        std::uint64_t p = common(a, b);
        if (p == 0)
            throw std::domain_error("Fp division without a modulus");
        return a * inverse(b.in(p), p);
    }
    friend bool operator==(const Fp& a, const Fp& b)
    {
        std::uint64_t p = common(a, b);
        return a.in(p) == b.in(p);
    }
    friend bool is_zero(const Fp& a) { return a.v_ == 0; }

private:
    static std::int64_t reduce(std::int64_t v, std::uint64_t p)
    {
        if (p == 0)
            return v;
        std::int64_t m = static_cast<std::int64_t>(p);
        v %= m;
        return v < 0 ? v + m : v;
    }
    static std::uint64_t common(const Fp& a, const Fp& b)
    {
        if (a.p_ && b.p_ && a.p_ != b.p_)
            throw std::domain_error("Fp operands with different moduli");
        return a.p_ ? a.p_ : b.p_;
    }
    std::int64_t in(std::uint64_t p) const { return reduce(v_, p); }
    static Fp inverse(std::int64_t a, std::uint64_t p)
    {
        std::int64_t t = 0, nt = 1, r = static_cast<std::int64_t>(p), nr = a;
        while (nr != 0) {
            std::int64_t q = r / nr;
            std::int64_t tmp = t - q * nt;
            t = nt;
            nt = tmp;
            tmp = r - q * nr;
            r = nr;
            nr = tmp;
        }
        if (r != 1)
            throw std::domain_error("Fp inverse of zero");
        return Fp(t, p);
    }

    std::int64_t v_ = 0;
    std::uint64_t p_ = 0;
};

} // namespace modtower

namespace Eigen {
template <>
struct NumTraits<modtower::Fp> : GenericNumTraits<modtower::Fp> {
    using Real = modtower::Fp;
    using NonInteger = modtower::Fp;
    using Literal = modtower::Fp;
    using Nested = modtower::Fp;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 1,
        MulCost = 1
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};
} // namespace Eigen

#endif

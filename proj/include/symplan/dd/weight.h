#ifndef SYMPLAN_DD_WEIGHT_H
#define SYMPLAN_DD_WEIGHT_H

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace symplan::dd {

// Integer extended with +infinity. Infinity absorbs under +, -, * and max;
// min(inf, k) = k. Finite overflow throws.
class Weight {
    static constexpr int64_t kInf = std::numeric_limits<int64_t>::max();
    int64_t v_ = 0;

public:
    constexpr Weight() = default;
    constexpr Weight(int64_t v) : v_(v) {
        if (v == kInf)
            throw std::overflow_error("weight value collides with infinity");
    }

    static constexpr Weight infinity() {
        Weight w;
        w.v_ = kInf;
        return w;
    }
    static constexpr Weight from_raw(int64_t raw) {
        Weight w;
        w.v_ = raw;
        return w;
    }

    constexpr bool is_infinite() const { return v_ == kInf; }
    constexpr bool is_finite() const { return v_ != kInf; }
    constexpr int64_t raw() const { return v_; }
    int64_t value() const {
        if (is_infinite())
            throw std::domain_error("value() of infinite weight");
        return v_;
    }

    friend constexpr bool operator==(Weight a, Weight b) = default;
    friend constexpr std::strong_ordering operator<=>(Weight a, Weight b) {
        return a.v_ <=> b.v_;
    }

    friend Weight operator+(Weight a, Weight b) {
        if (a.is_infinite() || b.is_infinite())
            return infinity();
        int64_t r;
        if (__builtin_add_overflow(a.v_, b.v_, &r) || r == kInf)
            throw std::overflow_error("weight overflow in +");
        return Weight(r);
    }
    friend Weight operator-(Weight a, Weight b) {
        if (a.is_infinite() || b.is_infinite())
            return infinity();
        int64_t r;
        if (__builtin_sub_overflow(a.v_, b.v_, &r) || r == kInf)
            throw std::overflow_error("weight overflow in -");
        return Weight(r);
    }
    friend Weight operator*(Weight a, Weight b) {
        if (a.is_infinite() || b.is_infinite())
            return infinity();
        int64_t r;
        if (__builtin_mul_overflow(a.v_, b.v_, &r) || r == kInf)
            throw std::overflow_error("weight overflow in *");
        return Weight(r);
    }
    Weight &operator+=(Weight o) { return *this = *this + o; }

    std::string to_string() const {
        return is_infinite() ? std::string("inf") : std::to_string(v_);
    }
};

inline std::ostream &operator<<(std::ostream &os, Weight w) { return os << w.to_string(); }

inline Weight min(Weight a, Weight b) { return a < b ? a : b; }
inline Weight max(Weight a, Weight b) {
    if (a.is_infinite() || b.is_infinite())
        return Weight::infinity();
    return a < b ? b : a;
}

}  // namespace symplan::dd

#endif

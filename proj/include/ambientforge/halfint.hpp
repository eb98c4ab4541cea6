#ifndef AMBIENTFORGE_HALFINT_HPP
#define AMBIENTFORGE_HALFINT_HPP

#include <compare>
#include <limits>
#include <stdexcept>
#include <string>

namespace af {

// Half-integer k/2, stored as twice its value. Series exponents live here;
// Expr itself never sees half-integer powers. Saturating +infinity marks an
// untruncated series.
class HalfInt {
  public:
    constexpr HalfInt() : twice_(0) {}
    static constexpr HalfInt whole(int k) { return HalfInt(2 * k); }
    static constexpr HalfInt halves(int twice) { return HalfInt(twice); }
    static constexpr HalfInt infinity() { return HalfInt(kInf); }

    constexpr bool is_infinite() const { return twice_ == kInf; }
    constexpr bool is_whole() const { return !is_infinite() && twice_ % 2 == 0; }
    constexpr int twice() const { return twice_; }
    int whole_value() const {
        if (!is_whole()) throw std::domain_error("HalfInt: not a whole number: " + str());
        return twice_ / 2;
    }
    double value() const { return twice_ / 2.0; }

    friend constexpr HalfInt operator+(HalfInt a, HalfInt b) {
        if (a.is_infinite() || b.is_infinite()) return infinity();
        return HalfInt(a.twice_ + b.twice_);
    }
    friend constexpr HalfInt operator-(HalfInt a, HalfInt b) {
        if (a.is_infinite()) return infinity();
        if (b.is_infinite()) throw std::domain_error("HalfInt: subtracting infinity");
        return HalfInt(a.twice_ - b.twice_);
    }
    friend constexpr auto operator<=>(HalfInt a, HalfInt b) { return a.twice_ <=> b.twice_; }
    friend constexpr bool operator==(HalfInt a, HalfInt b) { return a.twice_ == b.twice_; }

    std::string str() const {
        if (is_infinite()) return "inf";
        if (twice_ % 2 == 0) return std::to_string(twice_ / 2);
        return std::to_string(twice_) + "/2";
    }

  private:
    static constexpr int kInf = std::numeric_limits<int>::max();
    explicit constexpr HalfInt(int twice) : twice_(twice) {}
    int twice_;
};

inline HalfInt min(HalfInt a, HalfInt b) { return a < b ? a : b; }

}  // namespace af

#endif

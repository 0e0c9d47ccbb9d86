#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "adelic/rng.hpp"

namespace adelic {

// Raised when an operation would need digits beyond the stored precision.
class insufficient_precision : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Additive structure of a digit alphabet of size q. q = p: plain base-q
// arithmetic with carries. q = p^2: a digit labels a pair over Z/p
// (label = hi*p + lo) and arithmetic is component-wise mod p, no carries.
struct DigitStructure {
    long long q = 0;
    long long p = 0;
    int f = 1;

    std::uint32_t sub(std::uint32_t x, std::uint32_t y, std::uint32_t& borrow) const;
    std::uint32_t add(std::uint32_t x, std::uint32_t y, std::uint32_t& carry) const;
};

DigitStructure digit_structure(long long q);

// Finite-precision element of K_v: digits over {0,...,q-1} on the index
// range [val_offset, precision). The first stored digit is nonzero; an
// element that vanishes at this precision has no digits (zero sentinel).
// norm = q^{-val_offset}.
class PAdicApprox {
  public:
    PAdicApprox(long long q, int val_offset, std::vector<std::uint32_t> digits, int precision);
    static PAdicApprox zero(long long q, int precision);

    long long q() const { return structure_.q; }
    const DigitStructure& structure() const { return structure_; }
    int precision() const { return precision_; }
    bool is_zero() const { return digits_.empty(); }
    int val_offset() const { return val_offset_; }
    const std::vector<std::uint32_t>& digits() const { return digits_; }

    // Digit at an index < precision (0 below val_offset or for zero).
    std::uint32_t digit_at(int index) const;

    double norm() const;

    PAdicApprox subtract(const PAdicApprox& other) const;
    PAdicApprox add(const PAdicApprox& other) const;

    // "q=3: 1.02@-1" = digits 1,0,2 starting at index -1. The dot marks the
    // boundary between indices <0 and >=0 when the range spans it; labels are
    // comma-separated when q > 10. Zero renders as "q=3: 0@<precision>".
    std::string to_string() const;
    static PAdicApprox parse(const std::string& text);

    friend bool operator==(const PAdicApprox& a, const PAdicApprox& b) {
        return a.structure_.q == b.structure_.q && a.val_offset_ == b.val_offset_ &&
               a.precision_ == b.precision_ && a.digits_ == b.digits_;
    }

  private:
    DigitStructure structure_;
    int val_offset_;  // equals precision_ for the zero sentinel
    std::vector<std::uint32_t> digits_;
    int precision_;
};

// q^{-k} with k the lowest index where x and y differ. Throws
// insufficient_precision when all represented digits agree.
double ultrametric_distance(const PAdicApprox& x, const PAdicApprox& y);

// Number of disjoint radius-q^M balls at distance q^{M+m} from a fixed
// point: (q-1) q^{m-1}, independent of M.
long long count_balls_at_distance(long long q, int m);

// Uniform draw from the sphere {|x| = q^m}: leading digit uniform on
// {1,...,q-1} at index -m, then i.i.d. uniform digits up to precision.
PAdicApprox sample_uniform_sphere(long long q, int m, int precision, RngStream& rng);

// Ball B(center, q^radius_exp). Membership and equality depend only on
// center digits at indices < -radius_exp.
class Ball {
  public:
    Ball(PAdicApprox center, int radius_exp);

    long long q() const { return center_.q(); }
    int radius_exp() const { return radius_exp_; }
    const PAdicApprox& center() const { return center_; }

    bool contains(const PAdicApprox& z) const;

    friend bool operator==(const Ball& a, const Ball& b);

  private:
    PAdicApprox center_;
    int radius_exp_;
};

}  // namespace adelic

#include "adelic/padic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "adelic/number_field.hpp"

namespace adelic {

DigitStructure digit_structure(long long q) {
    if (q >= 2 && is_prime(q)) return {q, q, 1};
    long long r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(q))));
    for (long long p = std::max<long long>(2, r - 1); p <= r + 1; ++p) {
        if (p * p == q && is_prime(p)) return {q, p, 2};
    }
    throw std::invalid_argument("digit_structure: q must be a prime or the square of a prime");
}

std::uint32_t DigitStructure::sub(std::uint32_t x, std::uint32_t y, std::uint32_t& borrow) const {
    if (f == 1) {
        long long d = static_cast<long long>(x) - y - borrow;
        if (d < 0) {
            d += q;
            borrow = 1;
        } else {
            borrow = 0;
        }
        return static_cast<std::uint32_t>(d);
    }
    long long hi = (x / p - y / p) % p;
    long long lo = (x % p - y % p) % p;
    if (hi < 0) hi += p;
    if (lo < 0) lo += p;
    borrow = 0;
    return static_cast<std::uint32_t>(hi * p + lo);
}

std::uint32_t DigitStructure::add(std::uint32_t x, std::uint32_t y, std::uint32_t& carry) const {
    if (f == 1) {
        long long s = static_cast<long long>(x) + y + carry;
        carry = s >= q ? 1 : 0;
        return static_cast<std::uint32_t>(s >= q ? s - q : s);
    }
    long long hi = (x / p + y / p) % p;
    long long lo = (x % p + y % p) % p;
    carry = 0;
    return static_cast<std::uint32_t>(hi * p + lo);
}

PAdicApprox::PAdicApprox(long long q, int val_offset, std::vector<std::uint32_t> digits,
                         int precision)
    : structure_(digit_structure(q)), val_offset_(val_offset), digits_(std::move(digits)),
      precision_(precision) {
    if (val_offset_ + static_cast<long long>(digits_.size()) > precision_)
        throw std::invalid_argument("PAdicApprox: digits extend beyond precision");
    for (std::uint32_t d : digits_) {
        if (d >= static_cast<std::uint64_t>(q))
            throw std::invalid_argument("PAdicApprox: digit out of range");
    }
    // Normalize: drop leading zeros, pad implicit trailing zeros up to precision.
    std::size_t lead = 0;
    while (lead < digits_.size() && digits_[lead] == 0) ++lead;
    if (lead > 0) {
        digits_.erase(digits_.begin(), digits_.begin() + static_cast<std::ptrdiff_t>(lead));
        val_offset_ += static_cast<int>(lead);
    }
    if (digits_.empty()) {
        val_offset_ = precision_;
    } else {
        digits_.resize(static_cast<std::size_t>(precision_ - val_offset_), 0);
    }
}

PAdicApprox PAdicApprox::zero(long long q, int precision) {
    return PAdicApprox(q, precision, {}, precision);
}

std::uint32_t PAdicApprox::digit_at(int index) const {
    if (index >= precision_)
        throw insufficient_precision("PAdicApprox: digit index beyond precision");
    if (is_zero() || index < val_offset_) return 0;
    return digits_[static_cast<std::size_t>(index - val_offset_)];
}

double PAdicApprox::norm() const {
    if (is_zero()) return 0.0;
    return std::pow(static_cast<double>(structure_.q), -static_cast<double>(val_offset_));
}

PAdicApprox PAdicApprox::subtract(const PAdicApprox& other) const {
    if (structure_.q != other.structure_.q)
        throw std::invalid_argument("PAdicApprox: mismatched residue size q");
    int prec = std::min(precision_, other.precision_);
    int lo = prec;
    if (!is_zero()) lo = std::min(lo, val_offset_);
    if (!other.is_zero()) lo = std::min(lo, other.val_offset_);
    std::vector<std::uint32_t> out;
    out.reserve(static_cast<std::size_t>(prec - lo));
    std::uint32_t borrow = 0;
    for (int i = lo; i < prec; ++i) {
        out.push_back(structure_.sub(digit_at(i), other.digit_at(i), borrow));
    }
    return PAdicApprox(structure_.q, lo, std::move(out), prec);
}

PAdicApprox PAdicApprox::add(const PAdicApprox& other) const {
    if (structure_.q != other.structure_.q)
        throw std::invalid_argument("PAdicApprox: mismatched residue size q");
    int prec = std::min(precision_, other.precision_);
    int lo = prec;
    if (!is_zero()) lo = std::min(lo, val_offset_);
    if (!other.is_zero()) lo = std::min(lo, other.val_offset_);
    std::vector<std::uint32_t> out;
    out.reserve(static_cast<std::size_t>(prec - lo));
    std::uint32_t carry = 0;
    for (int i = lo; i < prec; ++i) {
        out.push_back(structure_.add(digit_at(i), other.digit_at(i), carry));
    }
    return PAdicApprox(structure_.q, lo, std::move(out), prec);
}

std::string PAdicApprox::to_string() const {
    std::ostringstream os;
    os << "q=" << structure_.q << ": ";
    if (is_zero()) {
        os << "0@" << precision_;
        return os.str();
    }
    bool compact = structure_.q <= 10;
    bool radix = val_offset_ < 0 && precision_ > 0;
    for (std::size_t i = 0; i < digits_.size(); ++i) {
        int index = val_offset_ + static_cast<int>(i);
        if (!compact && i > 0 && !(radix && index == 0)) os << ',';
        if (radix && index == 0) os << '.';
        os << digits_[i];
    }
    os << '@' << val_offset_;
    return os.str();
}

PAdicApprox PAdicApprox::parse(const std::string& text) {
    auto fail = [&]() -> std::invalid_argument {
        return std::invalid_argument("PAdicApprox: cannot parse \"" + text + "\"");
    };
    std::size_t colon = text.find(':');
    if (colon == std::string::npos || text.compare(0, 2, "q=") != 0) throw fail();
    long long q = std::stoll(text.substr(2, colon - 2));
    std::size_t at = text.rfind('@');
    if (at == std::string::npos || at < colon) throw fail();
    int tail = std::stoi(text.substr(at + 1));
    std::string body = text.substr(colon + 1, at - colon - 1);
    std::erase(body, ' ');
    if (body == "0") return zero(q, tail);
    std::vector<std::uint32_t> digits;
    if (q <= 10) {
        for (char c : body) {
            if (c == '.') continue;
            if (c < '0' || c > '9') throw fail();
            digits.push_back(static_cast<std::uint32_t>(c - '0'));
        }
    } else {
        std::string cur;
        for (char c : body) {
            if (c == ',' || c == '.') {
                if (!cur.empty()) digits.push_back(static_cast<std::uint32_t>(std::stoul(cur)));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!cur.empty()) digits.push_back(static_cast<std::uint32_t>(std::stoul(cur)));
    }
    if (digits.empty()) throw fail();
    return PAdicApprox(q, tail, std::move(digits), tail + static_cast<int>(digits.size()));
}

double ultrametric_distance(const PAdicApprox& x, const PAdicApprox& y) {
    PAdicApprox diff = x.subtract(y);
    if (diff.is_zero())
        throw insufficient_precision(
            "ultrametric_distance: elements agree on all represented digits");
    return diff.norm();
}

long long count_balls_at_distance(long long q, int m) {
    if (q < 2) throw std::invalid_argument("count_balls_at_distance: q must be >= 2");
    if (m < 1) throw std::invalid_argument("count_balls_at_distance: m must be >= 1");
    long long count = q - 1;
    for (int i = 1; i < m; ++i) {
        if (count > (1LL << 62) / q)
            throw std::overflow_error("count_balls_at_distance: count exceeds 64 bits");
        count *= q;
    }
    return count;
}

PAdicApprox sample_uniform_sphere(long long q, int m, int precision, RngStream& rng) {
    if (precision <= -m)
        throw std::invalid_argument("sample_uniform_sphere: precision must exceed -m");
    std::vector<std::uint32_t> digits;
    digits.reserve(static_cast<std::size_t>(precision + m));
    digits.push_back(1 + static_cast<std::uint32_t>(rng.next_below(static_cast<std::uint64_t>(q - 1))));
    for (int i = -m + 1; i < precision; ++i) {
        digits.push_back(static_cast<std::uint32_t>(rng.next_below(static_cast<std::uint64_t>(q))));
    }
    return PAdicApprox(q, -m, std::move(digits), precision);
}

Ball::Ball(PAdicApprox center, int radius_exp)
    : center_(std::move(center)), radius_exp_(radius_exp) {
    if (center_.precision() < -radius_exp_)
        throw std::invalid_argument("Ball: center precision must reach index -radius_exp");
}

bool Ball::contains(const PAdicApprox& z) const {
    if (z.q() != center_.q()) throw std::invalid_argument("Ball: mismatched residue size q");
    if (z.precision() < -radius_exp_)
        throw insufficient_precision("Ball::contains: point too coarse to decide membership");
    PAdicApprox diff = z.subtract(center_);
    if (diff.is_zero()) return true;  // agrees on all digits below min precision >= -M
    return diff.val_offset() >= -radius_exp_;
}

bool operator==(const Ball& a, const Ball& b) {
    if (a.q() != b.q() || a.radius_exp_ != b.radius_exp_) return false;
    PAdicApprox diff = a.center_.subtract(b.center_);
    return diff.is_zero() || diff.val_offset() >= -a.radius_exp_;
}

}  // namespace adelic

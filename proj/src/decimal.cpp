#include "medgraph/decimal.hpp"

#include <algorithm>
#include <cstdio>

namespace medgraph {

namespace {

struct DecimalParts {
    bool negative = false;
    std::string_view integer;   // digits before the point, may be empty
    std::string_view fraction;  // digits after the point, may be empty
};

DecimalParts split(std::string_view s) {
    DecimalParts p;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        p.negative = s.front() == '-';
        s.remove_prefix(1);
    }
    auto dot = s.find('.');
    if (dot == std::string_view::npos) {
        p.integer = s;
    } else {
        p.integer = s.substr(0, dot);
        p.fraction = s.substr(dot + 1);
    }
    return p;
}

std::string_view strip_leading_zeros(std::string_view digits) {
    std::size_t i = 0;
    while (i + 1 < digits.size() && digits[i] == '0') ++i;
    return digits.substr(i);
}

std::string_view strip_trailing_zeros(std::string_view digits) {
    std::size_t n = digits.size();
    while (n > 0 && digits[n - 1] == '0') --n;
    return digits.substr(0, n);
}

bool all_zero(std::string_view digits) {
    return std::all_of(digits.begin(), digits.end(), [](char c) { return c == '0'; });
}

// Compare magnitudes of two normalized (integer, fraction) pairs.
int compare_magnitude(const DecimalParts& a, const DecimalParts& b) {
    std::string_view ai = strip_leading_zeros(a.integer.empty() ? std::string_view("0") : a.integer);
    std::string_view bi = strip_leading_zeros(b.integer.empty() ? std::string_view("0") : b.integer);
    if (ai.size() != bi.size()) return ai.size() < bi.size() ? -1 : 1;
    if (int c = ai.compare(bi); c != 0) return c < 0 ? -1 : 1;
    std::string_view af = strip_trailing_zeros(a.fraction);
    std::string_view bf = strip_trailing_zeros(b.fraction);
    std::size_t n = std::max(af.size(), bf.size());
    for (std::size_t i = 0; i < n; ++i) {
        char ca = i < af.size() ? af[i] : '0';
        char cb = i < bf.size() ? bf[i] : '0';
        if (ca != cb) return ca < cb ? -1 : 1;
    }
    return 0;
}

}  // namespace

bool is_valid_decimal(std::string_view s) {
    if (s.empty()) return false;
    if (s.front() == '+' || s.front() == '-') s.remove_prefix(1);
    if (s.empty()) return false;
    auto dot = s.find('.');
    std::string_view intpart = dot == std::string_view::npos ? s : s.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view() : s.substr(dot + 1);
    if (intpart.empty() && frac.empty()) return false;
    auto digits = [](std::string_view d) {
        return std::all_of(d.begin(), d.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    return digits(intpart) && digits(frac);
}

int compare_decimal(std::string_view a, std::string_view b) {
    DecimalParts pa = split(a);
    DecimalParts pb = split(b);
    bool a_zero = all_zero(pa.integer) && all_zero(pa.fraction);
    bool b_zero = all_zero(pb.integer) && all_zero(pb.fraction);
    bool a_neg = pa.negative && !a_zero;
    bool b_neg = pb.negative && !b_zero;
    if (a_neg != b_neg) return a_neg ? -1 : 1;
    int mag = compare_magnitude(pa, pb);
    return a_neg ? -mag : mag;
}

std::string format_probability(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12f", value);
    return buf;
}

}  // namespace medgraph

#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"

namespace qsl {

// Fixed-width bit string. Bit 0 is the leftmost (most significant) bit of the
// printed form, so "01" has bit(0)=0, bit(1)=1 and value 1.
class bit_string {
public:
    bit_string() = default;
    bit_string(std::uint64_t value, int width) : value_(value), width_(width) {
        if (width <= 0 || width > 63)
            throw dimension_error("bit_string width out of range: " + std::to_string(width));
        if (value >> width)
            throw dimension_error("bit_string value does not fit in " + std::to_string(width) + " bits");
    }

    static bit_string parse(const std::string& s) {
        if (s.empty()) throw dimension_error("empty bit string");
        std::uint64_t v = 0;
        for (char c : s) {
            if (c != '0' && c != '1')
                throw dimension_error("bad character in bit string: " + s);
            v = (v << 1) | static_cast<std::uint64_t>(c - '0');
        }
        return bit_string(v, static_cast<int>(s.size()));
    }

    std::uint64_t value() const { return value_; }
    int width() const { return width_; }

    int bit(int i) const { return static_cast<int>((value_ >> (width_ - 1 - i)) & 1u); }

    bit_string operator^(const bit_string& o) const {
        if (o.width_ != width_) throw dimension_error("xor of bit strings with unequal widths");
        return bit_string(value_ ^ o.value_, width_);
    }

    // Modulo-2 inner product: parity of the bitwise AND.
    int dot(const bit_string& o) const {
        if (o.width_ != width_) throw dimension_error("dot of bit strings with unequal widths");
        return std::popcount(value_ & o.value_) & 1;
    }

    std::string str() const {
        std::string s(static_cast<std::size_t>(width_), '0');
        for (int i = 0; i < width_; ++i)
            if (bit(i)) s[static_cast<std::size_t>(i)] = '1';
        return s;
    }

    friend bool operator==(const bit_string&, const bit_string&) = default;
    friend auto operator<=>(const bit_string&, const bit_string&) = default;

private:
    std::uint64_t value_ = 0;
    int width_ = 1;
};

enum class reg : unsigned { b = 1, a = 2, v = 4 };

// Subset of the registers {B, A, V}, kept in B,A,V order when packing indices.
struct reg_set {
    unsigned mask = 0;

    reg_set() = default;
    reg_set(std::initializer_list<reg> rs) {
        for (reg r : rs) mask |= static_cast<unsigned>(r);
    }

    bool contains(reg r) const { return mask & static_cast<unsigned>(r); }
    bool empty() const { return mask == 0; }
    reg_set complement() const {
        reg_set s;
        s.mask = ~mask & 7u;
        return s;
    }
    friend bool operator==(const reg_set&, const reg_set&) = default;
};

inline const reg_set all_regs{reg::b, reg::a, reg::v};

// Widths of the B, A, V registers. Basis index is row-major over (b, a, v)
// with B most significant.
struct register_layout {
    int nb = 1;
    int na = 1;
    int nv = 1;

    register_layout() = default;
    register_layout(int b_width, int a_width, int v_width)
        : nb(b_width), na(a_width), nv(v_width) {
        if (nb < 1 || na < 1 || nv < 1)
            throw dimension_error("register widths must be >= 1");
        if (nb + na + nv > 24)
            throw capability_error("total register width beyond dense-simulation bound (24 qubits)");
    }

    int total_width() const { return nb + na + nv; }
    std::size_t dim() const { return std::size_t{1} << total_width(); }
    std::size_t dim_b() const { return std::size_t{1} << nb; }
    std::size_t dim_a() const { return std::size_t{1} << na; }
    std::size_t dim_v() const { return std::size_t{1} << nv; }

    std::size_t index(std::uint64_t b, std::uint64_t a, std::uint64_t v) const {
        if (b >= dim_b() || a >= dim_a() || v >= dim_v())
            throw dimension_error("register value out of range for layout");
        return ((b << na) | a) << nv | v;
    }

    std::size_t index(const bit_string& b, const bit_string& a, const bit_string& v) const {
        if (b.width() != nb || a.width() != na || v.width() != nv)
            throw dimension_error("bit string widths do not match layout");
        return index(b.value(), a.value(), v.value());
    }

    struct split {
        std::uint64_t b, a, v;
    };
    split decompose(std::size_t idx) const {
        split s;
        s.v = idx & (dim_v() - 1);
        s.a = (idx >> nv) & (dim_a() - 1);
        s.b = idx >> (nv + na);
        return s;
    }

    int width_of(reg r) const {
        switch (r) {
            case reg::b: return nb;
            case reg::a: return na;
            case reg::v: return nv;
        }
        return 0;
    }

    int width_of(reg_set s) const {
        int w = 0;
        for (reg r : {reg::b, reg::a, reg::v})
            if (s.contains(r)) w += width_of(r);
        return w;
    }

    // Pack the values of the registers in `s` (B,A,V order) into one index.
    std::size_t pack(reg_set s, const split& sp) const {
        std::size_t idx = 0;
        if (s.contains(reg::b)) idx = (idx << nb) | sp.b;
        if (s.contains(reg::a)) idx = (idx << na) | sp.a;
        if (s.contains(reg::v)) idx = (idx << nv) | sp.v;
        return idx;
    }
};

// GF(2) rank of a set of row masks.
inline int gf2_rank(std::vector<std::uint64_t> rows) {
    int rank = 0;
    for (std::size_t col = 0; col < 64; ++col) {
        std::uint64_t bit = std::uint64_t{1} << (63 - col);
        std::size_t pivot = rows.size();
        for (std::size_t i = static_cast<std::size_t>(rank); i < rows.size(); ++i)
            if (rows[i] & bit) {
                pivot = i;
                break;
            }
        if (pivot == rows.size()) continue;
        std::swap(rows[static_cast<std::size_t>(rank)], rows[pivot]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != static_cast<std::size_t>(rank) && (rows[i] & bit))
                rows[i] ^= rows[static_cast<std::size_t>(rank)];
        ++rank;
        if (static_cast<std::size_t>(rank) == rows.size()) break;
    }
    return rank;
}

} // namespace qsl

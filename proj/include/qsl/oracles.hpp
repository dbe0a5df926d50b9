#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "bits.hpp"
#include "errors.hpp"

namespace qsl {

enum class family_kind { grover, dj, simon };

inline const char* family_name(family_kind k) {
    switch (k) {
        case family_kind::grover: return "grover";
        case family_kind::dj: return "dj";
        case family_kind::simon: return "simon";
    }
    return "?";
}

inline int output_width(family_kind kind, int n) {
    return kind == family_kind::simon ? n - 1 : 1;
}

// Width in bits of the string b identifying a family member. For Grover b is
// the marked argument itself; for DJ and Simon b is the table of the function
// (the sequence of values for increasing arguments).
inline int choice_width(family_kind kind, int n) {
    switch (kind) {
        case family_kind::grover: return n;
        case family_kind::dj: return 1 << n;
        case family_kind::simon: return (1 << n) * (n - 1);
    }
    return 0;
}

// f_b(a) for an arbitrary bit pattern b of choice_width bits. Total on the
// whole B register, which keeps U_f unitary even off the family support.
inline std::uint64_t oracle_value(family_kind kind, int n, std::uint64_t b, std::uint64_t a) {
    switch (kind) {
        case family_kind::grover:
            return a == b ? 1 : 0;
        case family_kind::dj: {
            int rows = 1 << n;
            return (b >> (rows - 1 - static_cast<int>(a))) & 1u;
        }
        case family_kind::simon: {
            int rows = 1 << n;
            int w = n - 1;
            int shift = (rows - 1 - static_cast<int>(a)) * w;
            return (b >> shift) & ((std::uint64_t{1} << w) - 1);
        }
    }
    return 0;
}

// Bob's choice as an explicit table: rows map argument a -> value f_b(a).
struct function_table {
    family_kind kind = family_kind::grover;
    int n = 2;
    bit_string b;
    std::vector<std::uint64_t> values; // indexed by a

    std::uint64_t operator()(std::uint64_t a) const { return values.at(a); }
    int rows() const { return 1 << n; }
};

struct simon_period {
    bit_string h; // nonzero; f(a) = f(a xor h)
};

inline function_table make_table(family_kind kind, int n, std::uint64_t b) {
    function_table t;
    t.kind = kind;
    t.n = n;
    t.b = bit_string(b, choice_width(kind, n));
    t.values.resize(std::size_t{1} << n);
    for (std::uint64_t a = 0; a < t.values.size(); ++a)
        t.values[a] = oracle_value(kind, n, b, a);
    return t;
}

// Family invariant check; throws validation_error naming the offending rows.
inline void validate_table(const function_table& t) {
    auto row_name = [&](std::uint64_t a) { return bit_string(a, t.n).str(); };
    switch (t.kind) {
        case family_kind::grover: {
            std::uint64_t ones = 0;
            for (std::uint64_t a = 0; a < t.values.size(); ++a) ones += t.values[a];
            if (ones != 1 || t.values[t.b.value()] != 1)
                throw validation_error("grover table must have exactly one 1, at a=b");
            return;
        }
        case family_kind::dj: {
            std::uint64_t ones = 0;
            for (auto v : t.values) {
                if (v > 1) throw validation_error("dj table value out of range");
                ones += v;
            }
            if (ones != 0 && ones != t.values.size() && ones * 2 != t.values.size())
                throw validation_error("dj table neither constant nor balanced (" +
                                       std::to_string(ones) + " ones in " +
                                       std::to_string(t.values.size()) + " rows)");
            return;
        }
        case family_kind::simon: {
            std::map<std::uint64_t, std::vector<std::uint64_t>> by_value;
            for (std::uint64_t a = 0; a < t.values.size(); ++a)
                by_value[t.values[a]].push_back(a);
            for (const auto& [v, args] : by_value)
                if (args.size() != 2) {
                    std::string rows;
                    for (auto a : args) rows += (rows.empty() ? "" : ",") + row_name(a);
                    throw validation_error("simon table: value " + std::to_string(v) +
                                           " appears " + std::to_string(args.size()) +
                                           " times (rows " + rows + "), expected exactly twice");
                }
            std::uint64_t h = 0;
            bool first = true;
            for (const auto& [v, args] : by_value) {
                std::uint64_t d = args[0] ^ args[1];
                if (first) {
                    h = d;
                    first = false;
                } else if (d != h) {
                    throw validation_error("simon table: colliding pairs disagree on the period (rows " +
                                           row_name(args[0]) + "," + row_name(args[1]) + ")");
                }
            }
            if (h == 0) throw validation_error("simon table: period is the all-zeros string");
            return;
        }
    }
}

inline bool in_family(family_kind kind, int n, std::uint64_t b) {
    try {
        validate_table(make_table(kind, n, b));
        return true;
    } catch (const validation_error&) {
        return false;
    }
}

// Complete, duplicate-free member list in increasing order of b.
inline std::vector<function_table> enumerate_family(family_kind kind, int n) {
    std::vector<function_table> out;
    switch (kind) {
        case family_kind::grover: {
            if (n < 1 || n > 6) throw capability_error("grover enumeration supports n <= 6");
            for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b)
                out.push_back(make_table(kind, n, b));
            return out;
        }
        case family_kind::dj: {
            if (n < 2 || n > 4) throw capability_error("dj enumeration supports 2 <= n <= 4");
            int rows = 1 << n;
            for (std::uint64_t b = 0; b < (std::uint64_t{1} << rows); ++b) {
                int ones = std::popcount(b);
                if (ones == 0 || ones == rows || ones * 2 == rows)
                    out.push_back(make_table(kind, n, b));
            }
            return out;
        }
        case family_kind::simon: {
            if (n < 2 || n > 4) throw capability_error("simon enumeration supports 2 <= n <= 4");
            int rows = 1 << n;
            int w = n - 1;
            std::vector<std::uint64_t> bs;
            for (std::uint64_t h = 1; h < (std::uint64_t{1} << n); ++h) {
                // coset representatives of {0,h} in increasing order
                std::vector<std::uint64_t> reps;
                for (std::uint64_t a = 0; a < static_cast<std::uint64_t>(rows); ++a)
                    if (a < (a ^ h)) reps.push_back(a);
                std::vector<std::uint64_t> vals(reps.size());
                std::iota(vals.begin(), vals.end(), 0);
                do { // one table per bijection cosets -> values
                    std::uint64_t b = 0;
                    std::vector<std::uint64_t> row_val(static_cast<std::size_t>(rows));
                    for (std::size_t i = 0; i < reps.size(); ++i) {
                        row_val[reps[i]] = vals[i];
                        row_val[reps[i] ^ h] = vals[i];
                    }
                    for (int a = 0; a < rows; ++a) b = (b << w) | row_val[static_cast<std::size_t>(a)];
                    bs.push_back(b);
                } while (std::next_permutation(vals.begin(), vals.end()));
            }
            std::sort(bs.begin(), bs.end());
            for (auto b : bs) out.push_back(make_table(kind, n, b));
            return out;
        }
    }
    return out;
}

inline std::uint64_t evaluate(family_kind kind, int n, std::uint64_t b, std::uint64_t a) {
    if (!in_family(kind, n, b))
        throw std::invalid_argument("b is not a member of the " + std::string(family_name(kind)) +
                                    " family at n=" + std::to_string(n));
    return oracle_value(kind, n, b, a);
}

// The unique nonzero h with f(a) = f(a xor h) for all a.
inline simon_period period_of(const function_table& t) {
    validate_table(t);
    for (std::uint64_t a = 1; a < t.values.size(); ++a)
        if (t.values[0] == t.values[a]) return {bit_string(a, t.n)};
    throw validation_error("simon table has no collision with row 0");
}

// All s with s.h = 0 (mod 2); there are 2^(n-1) of them.
inline std::vector<bit_string> orthogonal_strings(const simon_period& p, int n) {
    std::vector<bit_string> out;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
        bit_string bs(s, n);
        if (bs.dot(p.h) == 0) out.push_back(bs);
    }
    return out;
}

} // namespace qsl

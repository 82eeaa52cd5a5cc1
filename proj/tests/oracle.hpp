#pragma once

// Brute-force reference computations shared by the unit tests and the acceptance binary.

#include "gwcert/quotient_group.hpp"
#include "gwcert/word_metric.hpp"

#include <deque>
#include <functional>
#include <set>

namespace oracle {

using gwcert::Integer;
using gwcert::Rational;

inline long long modpow_count(long long a, long long M)
{
    long long x = a % M, k = 1;
    while (x != 1 % M) {
        x = static_cast<long long>((static_cast<__int128>(x) * a) % M);
        if (++k > M) return -1;
    }
    return k;
}

inline long long inverse_mod(long long a, long long M)
{
    long long g = M, x = 0, x1 = 1, r = ((a % M) + M) % M;
    while (r) {
        long long qt = g / r;
        std::tie(g, r) = std::make_pair(r, g - qt * r);
        std::tie(x, x1) = std::make_pair(x1, x - qt * x1);
    }
    if (g != 1) return -1;
    return ((x % M) + M) % M;
}

inline long long ipow(long long q, int s)
{
    long long r = 1;
    while (s-- > 0) r *= q;
    return r;
}

// order of num/den in (Z/q^s)^x
inline long long rational_order(long long num, long long den, long long q, int s)
{
    long long M = ipow(q, s);
    long long d = inverse_mod(den, M);
    if (d < 0) return -1;
    long long a = static_cast<long long>((static_cast<__int128>(((num % M) + M) % M) * d) % M);
    return modpow_count(a, M);
}

// order of a + b sqrt(d) in (Z[sqrt d]/q^s)^x
inline long long quadratic_order(long long a, long long b, long long d, long long q, int s)
{
    long long M = ipow(q, s);
    auto red = [&](long long x) { return ((x % M) + M) % M; };
    auto mul = [&](std::pair<long long, long long> u, std::pair<long long, long long> v) {
        __int128 r0 = static_cast<__int128>(u.first) * v.first + static_cast<__int128>(u.second) * v.second % M * red(d);
        __int128 r1 = static_cast<__int128>(u.first) * v.second + static_cast<__int128>(u.second) * v.first;
        return std::make_pair(static_cast<long long>(r0 % M), static_cast<long long>(r1 % M));
    };
    std::pair<long long, long long> g{red(a), red(b)}, x = g;
    long long k = 1;
    while (!(x.first == 1 % M && x.second == 0)) {
        x = mul(x, g);
        if (++k > M * M) return -1;
    }
    return k;
}

inline int vp(Integer n, long long p)
{
    if (n == 0) return 1 << 20;
    int k = 0;
    while (n % p == 0) {
        n /= p;
        ++k;
    }
    return k;
}

inline int vp(const Rational& r, long long p) { return vp(gwcert::num(r), p) - vp(gwcert::den(r), p); }

// distance between the vertices of the tree of Q_p given by the balls c + p^A Z_p
inline int ball_distance(long long p, int A1, const Rational& c1, int A2, const Rational& c2)
{
    int m = std::min(A1, A2);
    if (c1 != c2) m = std::min(m, vp(c1 - c2, p));
    return (A1 - m) + (A2 - m);
}

// root r of x^2 = d mod p^k lifted from r0 by Newton steps
inline Integer hensel_root(long long d, long long r0, long long p, int k)
{
    Integer M = boost::multiprecision::pow(Integer(p), k);
    Integer r = r0;
    for (int i = 0; i < k + 2; ++i) {
        Integer f = (r * r - d) % M;
        Integer inv = 0;
        Integer t = (2 * r) % M;
        // inverse of 2r mod p^k by brute extended Euclid
        Integer g = M, x = 0, x1 = 1, rr = ((t % M) + M) % M;
        while (rr != 0) {
            Integer qt = g / rr;
            Integer tmp = g - qt * rr;
            g = rr;
            rr = tmp;
            tmp = x - qt * x1;
            x = x1;
            x1 = tmp;
        }
        inv = ((x % M) + M) % M;
        r = (((r - f * inv) % M) + M) % M;
    }
    return r;
}

// v_P(a + b sqrt d) for the degree-one prime with sqrt d = r0 mod p, a and b integers
inline int split_valuation(long long d, long long r0, long long p, const Integer& a, const Integer& b)
{
    if (a == 0 && b == 0) return 1 << 20;
    int k = 0;
    while (true) {
        Integer M = boost::multiprecision::pow(Integer(p), k + 1);
        Integer r = hensel_root(d, r0, p, k + 1);
        if (((a + b * r) % M) != 0) return k;
        ++k;
    }
}

// word length by BFS from g back to the identity using right multiplication by inverses
inline int reversed_word_length(const gwcert::GwGroup& G, const gwcert::GeneratingSet& S, const gwcert::GwElement& g,
                                int radius)
{
    using gwcert::GwElement;
    auto w = G.w();
    auto mul = [&](const GwElement& a, const GwElement& b) { return GwElement{a.x + w.pow(a.z) * b.x, a.z + b.z}; };
    std::vector<GwElement> inv;
    for (auto& s : S) inv.push_back({-(w.pow(-s.z) * s.x), -s.z});
    std::set<GwElement> seen{g};
    std::vector<GwElement> frontier{g};
    GwElement e{w.field().zero(), 0};
    if (g == e) return 0;
    for (int r = 1; r <= radius; ++r) {
        std::vector<GwElement> next;
        for (auto& a : frontier)
            for (auto& s : inv) {
                auto b = mul(a, s);
                if (b == e) return r;
                if (seen.insert(b).second) next.push_back(b);
            }
        frontier = std::move(next);
    }
    return -1;
}

// subgroup closure with the twisted law written out from the ring operations
inline std::vector<long long> closure(const gwcert::SemidirectGroup& F, const std::vector<long long>& gens)
{
    const auto& R = F.ring();
    long long t = F.t();
    auto mul = [&](long long g, long long h) {
        long long a1 = g / t, b1 = g % t, a2 = h / t, b2 = h % t;
        long long wb = R.pow(F.w_code(), b1);
        return R.add(a1, R.mul(wb, a2)) * t + (b1 + b2) % t;
    };
    std::set<long long> s{0};
    std::deque<long long> todo{0};
    while (!todo.empty()) {
        long long x = todo.front();
        todo.pop_front();
        for (auto g : gens) {
            long long y = mul(x, g);
            if (s.insert(y).second) todo.push_back(y);
        }
    }
    return {s.begin(), s.end()};
}

// distinct closures of at most k cyclic subgroups
inline size_t census(const gwcert::SemidirectGroup& F, int k)
{
    std::set<std::vector<long long>> cyc;
    std::vector<long long> reps;
    for (long long g = 0; g < F.order(); ++g)
        if (cyc.insert(oracle::closure(F, {g})).second) reps.push_back(g);
    std::set<std::vector<long long>> all = cyc;
    std::vector<long long> pick;
    std::function<void(size_t)> rec = [&](size_t from) {
        if (pick.size() >= 2) all.insert(oracle::closure(F, pick));
        if (static_cast<int>(pick.size()) == k) return;
        for (size_t i = from; i < reps.size(); ++i) {
            pick.push_back(reps[i]);
            rec(i + 1);
            pick.pop_back();
        }
    };
    rec(0);
    return all.size();
}

// C cyclic and normal in H, H/C a p-group, p not dividing |C|
inline bool hyperelementary_witness_ok(const gwcert::SemidirectGroup& F, const gwcert::Subgroup& H,
                                       const gwcert::HyperWitness& w)
{
    const auto& C = w.C.elements;
    if (C.empty() || H.order() % C.size() != 0) return false;
    if (oracle::closure(F, {w.c_generator}) != C) return false;
    for (auto c : C)
        if (!H.contains(c)) return false;
    for (auto h : H.elements)
        for (auto c : C)
            if (!std::binary_search(C.begin(), C.end(), F.conj(h, c))) return false;
    long long quo = static_cast<long long>(H.order() / C.size());
    if (quo == 1) return true;
    if (w.p < 2 || static_cast<long long>(C.size()) % w.p == 0) return false;
    while (quo % w.p == 0) quo /= w.p;
    return quo == 1;
}

}  // namespace oracle

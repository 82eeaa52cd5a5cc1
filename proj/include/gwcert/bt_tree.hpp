#pragma once

#include "valuation.hpp"

#include <deque>
#include <set>
#include <tuple>

namespace gwcert {

// 2x2 matrix [[a, b], [c, d]]; the columns (a, c) and (b, d) generate a lattice
struct Mat2 {
    FieldElement a, b, c, d;

    friend Mat2 operator*(const Mat2& x, const Mat2& y)
    {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    FieldElement det() const { return a * d - b * c; }
    Mat2 inverse() const
    {
        FieldElement dt = det();
        if (dt.is_zero()) throw Error(ErrorKind::SingularBasis, "singular 2x2 matrix");
        FieldElement i = dt.inverse();
        return {d * i, -b * i, -c * i, a * i};
    }
};

// Vertex of T(v_P): the class of the lattice with basis [[pi^A, corner], [0, 1]].
struct LatticeClass {
    long long p = 0;
    int prime_index = 0;
    int A = 0;
    FieldElement corner;  // canonical representative modulo pi^A O_P
    std::vector<std::pair<int, long long>> digits;  // (exponent, residue index), increasing exponent

    std::string label() const
    {
        std::string s = "[" + std::to_string(A) + ";";
        for (auto& [i, r] : digits) s += " " + std::to_string(r) + "@" + std::to_string(i);
        return s + "]";
    }

    friend bool operator==(const LatticeClass& x, const LatticeClass& y)
    {
        return x.p == y.p && x.prime_index == y.prime_index && x.A == y.A && x.digits == y.digits;
    }
    friend bool operator!=(const LatticeClass& x, const LatticeClass& y) { return !(x == y); }
    friend bool operator<(const LatticeClass& x, const LatticeClass& y)
    {
        return std::tie(x.p, x.prime_index, x.A, x.digits) < std::tie(y.p, y.prime_index, y.A, y.digits);
    }
};

class BTTree {
public:
    BTTree() = default;
    explicit BTTree(PrimeIdeal P) : P_(std::move(P))
    {
        if (P_.norm() > (1LL << 16)) throw Error(ErrorKind::CapExceeded, "residue field too large for the tree");
        const auto& K = P_.uniformizer.field();
        pi_inv_ = P_.uniformizer.inverse();
        FieldElement up = K.one(), dn = K.one();
        pos_.push_back(up);
        neg_.push_back(dn);
        for (int i = 1; i <= kCache; ++i) {
            up = up * P_.uniformizer;
            dn = dn * pi_inv_;
            pos_.push_back(up);
            neg_.push_back(dn);
        }
        reps_ = P_.residue_representatives();
    }

    const PrimeIdeal& prime() const { return P_; }
    long long valency() const { return P_.norm() + 1; }

    FieldElement pi_pow(int k) const
    {
        if (k >= 0 && k <= kCache) return pos_[k];
        if (k < 0 && -k <= kCache) return neg_[-k];
        return P_.uniformizer.pow(k);
    }

    // canonical representative of c modulo pi^A O_P, with its digit expansion
    std::pair<FieldElement, std::vector<std::pair<int, long long>>> reduce_corner(const FieldElement& c, int A) const
    {
        std::vector<std::pair<int, long long>> digits;
        FieldElement rep = c.field().zero();
        FieldElement cur = c;
        int guard = 0;
        while (!cur.is_zero()) {
            int i = P_.valuation(cur);
            if (i >= A) break;
            FieldElement u = cur * pi_pow(-i);
            auto r = P_.residue(u);
            long long idx = P_.rf_index(r);
            FieldElement term = reps_[idx] * pi_pow(i);
            digits.emplace_back(i, idx);
            rep += term;
            cur -= term;
            if (++guard > 100000) throw Error(ErrorKind::InternalAnomaly, "corner reduction did not terminate");
        }
        return {rep, digits};
    }

    LatticeClass make_class(int A, const FieldElement& c) const
    {
        LatticeClass L;
        L.p = P_.p;
        L.prime_index = P_.index;
        L.A = A;
        auto [rep, dg] = reduce_corner(c, A);
        L.corner = rep;
        L.digits = std::move(dg);
        return L;
    }

    LatticeClass normalize(const Mat2& m) const
    {
        if (m.det().is_zero()) throw Error(ErrorKind::SingularBasis, "lattice basis is singular");
        int vc = P_.valuation(m.c), vd = P_.valuation(m.d);
        // pivot column: smaller valuation of the bottom entry
        const FieldElement& pt = vc <= vd ? m.a : m.b;
        const FieldElement& pb = vc <= vd ? m.c : m.d;
        const FieldElement& ot = vc <= vd ? m.b : m.a;
        const FieldElement& ob = vc <= vd ? m.d : m.c;
        FieldElement factor = ob / pb;
        FieldElement x = ot - factor * pt;
        int A = P_.valuation(x) - P_.valuation(pb);
        return make_class(A, pt / pb);
    }

    Mat2 basis(const LatticeClass& L) const
    {
        const auto& K = P_.uniformizer.field();
        return {pi_pow(L.A), L.corner, K.zero(), K.one()};
    }

    LatticeClass identity() const { return make_class(0, P_.uniformizer.field().zero()); }

    // [L_P(n)] with L_P(n) = pi^-n O_P + O_P
    LatticeClass standard(int n) const { return make_class(-n, P_.uniformizer.field().zero()); }

    int distance(const LatticeClass& x, const LatticeClass& y) const
    {
        check(x);
        check(y);
        Mat2 m = basis(x).inverse() * basis(y);
        int mn = std::min(std::min(P_.valuation(m.a), P_.valuation(m.b)),
                          std::min(P_.valuation(m.c), P_.valuation(m.d)));
        return P_.valuation(m.det()) - 2 * mn;
    }

    // (x, y) acts through the matrix [[y, x], [0, 1]]
    LatticeClass act(const FieldElement& x, const FieldElement& y, const LatticeClass& L) const
    {
        check(L);
        if (y.is_zero()) throw Error(ErrorKind::NotInActingGroup, "y = 0");
        const auto& K = y.field();
        Mat2 g{y, x, K.zero(), K.one()};
        return normalize(g * basis(L));
    }

    int busemann(const LatticeClass& L) const
    {
        check(L);
        int d0 = distance(L, identity());
        int cap = 2 * d0 + 4;
        int prev = 0 - d0;
        for (int n = 1; n <= cap; ++n) {
            int g = n - distance(L, standard(n));
            if (g == prev) return g;
            prev = g;
        }
        throw Error(ErrorKind::InternalAnomaly, "Busemann stabilization cap reached at " + L.label());
    }

    // (z1, z2, z2') of the canonical representative
    std::tuple<int, int, int> z_invariants(const LatticeClass& L) const
    {
        int z2 = 0;
        if (!L.corner.is_zero()) z2 = std::max(0, L.A - P_.valuation(L.corner));
        return {L.A, z2, 0};
    }

    std::vector<LatticeClass> neighbors(const LatticeClass& L) const
    {
        check(L);
        const auto& K = P_.uniformizer.field();
        Mat2 b = basis(L);
        std::vector<LatticeClass> out;
        for (auto& r : reps_) out.push_back(normalize(b * Mat2{P_.uniformizer, r, K.zero(), K.one()}));
        out.push_back(normalize(b * Mat2{K.one(), K.zero(), K.zero(), P_.uniformizer}));
        return out;
    }

    // vertex path from x to y
    std::vector<LatticeClass> path(const LatticeClass& x, const LatticeClass& y) const
    {
        std::vector<LatticeClass> out{x};
        int d = distance(x, y);
        LatticeClass cur = x;
        while (d > 0) {
            bool moved = false;
            for (auto& nb : neighbors(cur))
                if (distance(nb, y) == d - 1) {
                    cur = nb;
                    moved = true;
                    break;
                }
            if (!moved) throw Error(ErrorKind::InternalAnomaly, "no geodesic step found");
            out.push_back(cur);
            --d;
        }
        return out;
    }

    std::string dot(const LatticeClass& center, int radius) const
    {
        std::string s = "graph T {\n";
        std::map<LatticeClass, int> id;
        std::deque<std::pair<LatticeClass, int>> q;
        id[center] = 0;
        q.push_back({center, 0});
        s += "  n0 [label=\"" + center.label() + "\"];\n";
        while (!q.empty()) {
            auto [v, r] = q.front();
            q.pop_front();
            if (r == radius) continue;
            for (auto& nb : neighbors(v)) {
                if (id.count(nb)) continue;
                int k = static_cast<int>(id.size());
                id[nb] = k;
                s += "  n" + std::to_string(k) + " [label=\"" + nb.label() + "\"];\n";
                s += "  n" + std::to_string(id[v]) + " -- n" + std::to_string(k) + ";\n";
                q.push_back({nb, r + 1});
            }
        }
        return s + "}\n";
    }

private:
    static constexpr int kCache = 64;

    void check(const LatticeClass& L) const
    {
        if (L.p != P_.p || L.prime_index != P_.index)
            throw Error(ErrorKind::PrimeMismatch, "lattice class belongs to another prime");
    }

    PrimeIdeal P_;
    FieldElement pi_inv_;
    std::vector<FieldElement> pos_, neg_;
    std::vector<FieldElement> reps_;
};

}  // namespace gwcert

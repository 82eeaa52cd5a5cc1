#pragma once

#include "valuation.hpp"

#include <map>
#include <set>

namespace gwcert {

// (x, z) in G_w = O_w ⋊ Z
struct GwElement {
    FieldElement x;
    long long z = 0;

    friend bool operator==(const GwElement& a, const GwElement& b) { return a.z == b.z && a.x == b.x; }
    friend bool operator!=(const GwElement& a, const GwElement& b) { return !(a == b); }
    friend bool operator<(const GwElement& a, const GwElement& b)
    {
        if (a.z != b.z) return a.z < b.z;
        return a.x < b.x;
    }
    std::string str() const { return "(" + x.str() + ", " + std::to_string(z) + ")"; }
};

using GeneratingSet = std::vector<GwElement>;

class GwGroup {
public:
    GwGroup() = default;
    explicit GwGroup(OwRing W) : W_(std::move(W))
    {
        pos_.push_back(W_.field().one());
        for (int i = 1; i < 64; ++i) pos_.push_back(pos_.back() * W_.w());
    }

    const OwRing& ring() const { return W_; }
    const FieldElement& w() const { return W_.w(); }

    GwElement identity() const { return {W_.field().zero(), 0}; }

    GwElement element(const FieldElement& x, long long z) const
    {
        if (!W_.contains(x)) throw Error(ErrorKind::NotInActingGroup, x.str() + " is not in O_w");
        return {x, z};
    }

    GwElement mul(const GwElement& a, const GwElement& b) const { return {a.x + w_pow(a.z) * b.x, a.z + b.z}; }

    GwElement inv(const GwElement& a) const { return {-(w_pow(-a.z) * a.x), -a.z}; }

    FieldElement w_pow(long long z) const
    {
        if (z >= 0 && z < 64) return pos_[z];
        return W_.w().pow(z);
    }

    // closes under inverses and adds the identity
    GeneratingSet symmetric(const std::vector<GwElement>& gens) const
    {
        std::set<GwElement> s{identity()};
        for (auto& g : gens) {
            s.insert(g);
            s.insert(inv(g));
        }
        return {s.begin(), s.end()};
    }

    // default S = {(0,0), (±1,0), (0,±1)}
    GeneratingSet standard_generators() const
    {
        const auto& K = W_.field();
        return symmetric({{K.one(), 0}, {K.zero(), 1}});
    }

    GeneratingSet power_set(const GeneratingSet& S, int n, size_t cap = 2000000) const
    {
        std::set<GwElement> cur{identity()};
        for (int i = 0; i < n; ++i) {
            std::set<GwElement> next;
            for (auto& a : cur)
                for (auto& s : S) {
                    next.insert(mul(a, s));
                    if (next.size() > cap) throw Error(ErrorKind::BallTooLarge, "S^n exceeds the cap");
                }
            cur = std::move(next);
        }
        return {cur.begin(), cur.end()};
    }

    static long long m2_of(const GeneratingSet& Sn)
    {
        long long m = 0;
        for (auto& g : Sn) m = std::max(m, std::abs(g.z));
        return m;
    }

    // word lengths of every element within the given radius
    std::map<GwElement, int> ball(const GeneratingSet& S, int radius, size_t cap = 2000000) const
    {
        std::map<GwElement, int> dist{{identity(), 0}};
        std::vector<GwElement> frontier{identity()};
        for (int r = 1; r <= radius && !frontier.empty(); ++r) {
            std::vector<GwElement> next;
            for (auto& a : frontier)
                for (auto& s : S) {
                    auto b = mul(a, s);
                    if (dist.emplace(b, r).second) {
                        next.push_back(b);
                        if (dist.size() > cap) throw Error(ErrorKind::CapExceeded, "BFS visited more than the cap");
                    }
                }
            frontier = std::move(next);
        }
        return dist;
    }

    // BFS distance from the identity; CapExceeded when g is not found within the radius or visit cap
    int word_length(const GwElement& g, const GeneratingSet& S, int radius_cap = 64, size_t cap = 2000000) const
    {
        if (g == identity()) return 0;
        std::set<GwElement> seen{identity()};
        std::vector<GwElement> frontier{identity()};
        for (int r = 1; r <= radius_cap && !frontier.empty(); ++r) {
            std::vector<GwElement> next;
            for (auto& a : frontier)
                for (auto& s : S) {
                    auto b = mul(a, s);
                    if (b == g) return r;
                    if (seen.insert(b).second) {
                        next.push_back(b);
                        if (seen.size() > cap) throw Error(ErrorKind::CapExceeded, "BFS visited more than the cap");
                    }
                }
            frontier = std::move(next);
        }
        throw Error(ErrorKind::CapExceeded, g.str() + " not reached within radius " + std::to_string(radius_cap));
    }

    // {g k | k in S^(2n)}
    GeneratingSet sn_genuine(const GwElement& g, const GeneratingSet& S, int n, size_t cap = 2000000) const
    {
        std::set<GwElement> out;
        for (auto& k : power_set(S, 2 * n, cap)) out.insert(mul(g, k));
        return {out.begin(), out.end()};
    }

private:
    OwRing W_;
    std::vector<FieldElement> pos_;
};

}  // namespace gwcert

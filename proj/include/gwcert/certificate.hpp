#pragma once

#include "quotient_group.hpp"
#include "word_metric.hpp"

#include <chrono>
#include <random>

namespace gwcert {

struct CertificateConfig {
    long long cap_order = 50000;
    size_t cap_bfs = 2000000;
    int base_samples = 50;     // base elements for the case-2 sample, identity included
    int walk_length = 12;      // random base elements are products of at most this many generators
    std::uint64_t seed = 1;
    double per_subgroup_timeout = 10.0;  // seconds
    int exponent_cap = 64;
    long long prime_limit = 1000000;
};

// w is a root of unity iff it is integral with every |tau(w)| = 1
inline bool is_root_of_unity(const OwRing& W)
{
    if (!W.mw().empty()) return false;
    const auto& w = W.w();
    for (int i = 0; i < w.field().degree(); ++i)
        if (std::abs(w.abs_embed(i) - 1.0) > 1e-12) return false;
    return true;
}

inline bool admissible_prime(const OwRing& W, long long q, long long kmax, std::string* why = nullptr)
{
    const auto& O = W.order();
    if (!O.has_splitting(q)) {
        if (why) *why = "no splitting data";
        return false;
    }
    auto primes = O.primes_above(q);
    for (auto& P : primes)
        if (P.valuation(W.w()) != 0) {
            if (why) *why = P.label() + " lies in M_w";
            return false;
        }
    FieldElement wk = W.field().one();
    for (long long k = 1; k <= kmax; ++k) {
        wk = wk * W.w();
        FieldElement d = wk - W.field().one();
        for (auto& P : primes)
            if (P.valuation(d) != 0) {
                if (why) *why = P.label() + " divides w^" + std::to_string(k) + " - 1";
                return false;
            }
    }
    return true;
}

// smallest admissible prime for the bound 2 n m2
inline long long select_prime(const OwRing& W, int n, long long m2, long long limit = 1000000)
{
    if (is_root_of_unity(W)) throw Error(ErrorKind::RootOfUnity, W.w().str() + " is a root of unity");
    long long kmax = 2LL * n * m2;
    for (long long q = 2; q <= limit; q = next_prime(q))
        if (admissible_prime(W, q, kmax)) return q;
    throw Error(ErrorKind::CapExceeded, "no admissible prime below " + std::to_string(limit));
}

// smallest m with 2 n m2 < t(Q_i, m v_i) / t(Q_i, 1) for every Q_i above q
inline int select_exponent(const OwRing& W, long long q, int n, long long m2, int cap = 64)
{
    long long bound = 2LL * n * m2;
    auto primes = W.order().primes_above(q);
    std::vector<long long> t1;
    for (auto& P : primes) t1.push_back(t_order(W, P, 1));
    for (int m = 1; m <= cap; ++m) {
        bool ok = true;
        for (size_t i = 0; i < primes.size() && ok; ++i) ok = bound < t_order(W, primes[i], m * primes[i].e) / t1[i];
        if (ok) return m;
    }
    throw Error(ErrorKind::InternalAnomaly, "no exponent up to " + std::to_string(cap));
}

// l1 metric in barycentric coordinates on R with vertices l Z
inline Rational line_metric(long long l, const Rational& a, const Rational& b)
{
    auto coords = [&](const Rational& x) {
        std::map<Integer, Rational> c;
        Integer k = floor_of(x / Rational(l));
        Rational s = x / Rational(l) - Rational(k);
        c[k] += Rational(1) - s;
        if (s != 0) c[k + 1] += s;
        return c;
    };
    auto ca = coords(a), cb = coords(b);
    Rational d = 0;
    for (auto& [v, x] : ca) {
        auto it = cb.find(v);
        Rational y = it == cb.end() ? Rational(0) : it->second;
        d += x > y ? x - y : y - x;
    }
    for (auto& [v, y] : cb)
        if (!ca.count(v)) d += y;
    return d;
}

inline double line_metric(long long l, double a, double b)
{
    return line_metric(l, Rational(a), Rational(b)).convert_to<double>();
}

struct LipschitzReport {
    long long pairs = 0;           // sampled pairs (g, h) with h^-1 g in S^n
    long long residue_pairs = 0;   // pairs over all h_2 mod l
    Rational worst = 0;            // max of n d1(f(g), f(h)) over g != h
    bool ok = true;
    std::string counterexample;
};

struct SubgroupVerdict {
    std::vector<long long> generators;
    size_t order = 0;
    long long index = 0;  // [Z/t : pi(H)]
    int which_case = 0;   // 1 or 2
    ExtendedConjugator conjugator;
    LipschitzReport lipschitz;
    bool verified = false;
    bool timed_out = false;
    std::string note;
};

struct Certificate {
    FieldElement w;
    int n = 1;
    GeneratingSet S, Sn;
    long long m2 = 0;
    long long q = 0;
    std::vector<Component> splitting;
    int m = 1;
    long long t = 1;
    long long group_order = 0;
    long long subgroup_count = 0;
    long long hyperelementary_count = 0;
    size_t base_points = 0;
    std::vector<SubgroupVerdict> verdicts;
    std::vector<std::string> skipped_conditions{"q^-m<=B"};
    bool admissibility_rechecked = false;
    bool skipped = false;
    std::string skip_reason;
    bool counterexample = false;

    long long case_count(int c) const
    {
        long long k = 0;
        for (auto& v : verdicts) k += v.which_case == c;
        return k;
    }

    bool verified() const
    {
        if (skipped || counterexample || !admissibility_rechecked) return false;
        if (static_cast<long long>(verdicts.size()) != hyperelementary_count) return false;
        for (auto& v : verdicts)
            if (!v.verified) return false;
        return true;
    }
};

// recomputes the arithmetic conditions from the orders alone
inline bool recheck_admissibility(const OwRing& W, const Certificate& c)
{
    long long bound = 2LL * c.n * c.m2;
    for (auto& P : W.mw())
        if (P.p == c.q) return false;
    for (auto& comp : c.splitting) {
        if (t_order(W, comp.P, 1) != comp.t1 || t_order(W, comp.P, comp.exponent) != comp.t) return false;
        if (!(bound < comp.t1) || !(bound < comp.t / comp.t1)) return false;
    }
    return t_order(W, c.q, c.m) == c.t;
}

inline Certificate build_and_verify(const OwRing& W, int n, const GeneratingSet& S_in, const CertificateConfig& cfg = {})
{
    if (n < 1) throw Error(ErrorKind::ParseError, "n must be positive");
    GwGroup Gw(W);
    Certificate c;
    c.w = W.w();
    c.n = n;
    c.S = Gw.symmetric(S_in);
    c.Sn = Gw.power_set(c.S, n, cfg.cap_bfs);
    c.m2 = GwGroup::m2_of(c.Sn);
    c.q = select_prime(W, n, c.m2, cfg.prime_limit);
    c.m = select_exponent(W, c.q, n, c.m2, cfg.exponent_cap);
    long long bound = 2LL * n * c.m2;

    QuotientGroup G;
    try {
        G = build_group(W, c.q, c.m, cfg.cap_order);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::GroupTooLarge && e.kind() != ErrorKind::CapExceeded) throw;
        c.skipped = true;
        c.skip_reason = e.what();
        c.t = t_order(W, c.q, c.m);
        for (auto& P : W.order().primes_above(c.q))
            c.splitting.push_back({P, c.m * P.e, t_order(W, P, c.m * P.e), t_order(W, P, 1)});
        c.admissibility_rechecked = recheck_admissibility(W, c);
        return c;
    }
    c.splitting = G.components;
    c.t = G.t();
    c.group_order = G.F.order();
    c.admissibility_rechecked = recheck_admissibility(W, c);

    // base elements: the radius-n ball and random products of generators
    std::set<GwElement> bases;
    for (auto& [g, r] : Gw.ball(c.S, n, cfg.cap_bfs)) bases.insert(g);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<int> len(1, std::max(1, cfg.walk_length));
    std::uniform_int_distribution<size_t> pick(0, c.S.size() - 1);
    for (int tries = 0; static_cast<int>(bases.size()) < cfg.base_samples && tries < 100 * cfg.base_samples; ++tries) {
        GwElement h = Gw.identity();
        for (int k = len(rng); k > 0; --k) h = Gw.mul(h, c.S[pick(rng)]);
        bases.insert(h);
    }
    c.base_points = bases.size();
    auto S2n = Gw.power_set(c.S, 2 * n, cfg.cap_bfs);
    std::map<GwElement, int> wl;
    for (auto& s : c.Sn) wl[s] = Gw.word_length(s, S2n, 4, cfg.cap_bfs);

    auto subs = enumerate_subgroups(G.F);
    c.subgroup_count = static_cast<long long>(subs.size());
    for (auto& H : subs) {
        if (!is_hyperelementary(G.F, H)) continue;
        ++c.hyperelementary_count;
        auto start = std::chrono::steady_clock::now();
        auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
        SubgroupVerdict v;
        v.generators = H.generators;
        v.order = H.order();
        v.index = projection_index(G, H);
        if (v.index <= bound) {
            v.which_case = 1;
            try {
                v.conjugator = find_conjugator_into_cyclic(G, H);
                v.verified = v.conjugator.verified;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::NoConjugatorFound && e.kind() != ErrorKind::HypothesisViolated) throw;
                v.note = e.what();
                c.counterexample = true;
            }
        } else {
            v.which_case = 2;
            auto& L = v.lipschitz;
            auto check = [&](long long h2, const GwElement& s) {
                Rational lhs = Rational(n) * line_metric(v.index, Rational(h2 + s.z), Rational(h2));
                int rhs = wl.at(s);
                if (s != Gw.identity() && lhs > L.worst) L.worst = lhs;
                if (lhs > Rational(rhs)) {
                    L.ok = false;
                    L.counterexample = "h_2=" + std::to_string(h2) + " s=" + s.str();
                }
            };
            for (auto& h : bases) {
                for (auto& s : c.Sn) {
                    check(h.z, s);
                    ++L.pairs;
                }
                if (elapsed() > cfg.per_subgroup_timeout) break;
            }
            // d1 is invariant under translation by l Z, so h_2 mod l covers every pair
            for (long long r = 0; r < v.index && elapsed() <= cfg.per_subgroup_timeout; ++r)
                for (auto& s : c.Sn) {
                    check(r, s);
                    ++L.residue_pairs;
                }
            v.verified = L.ok;
            if (!L.ok) c.counterexample = true;
        }
        if (elapsed() > cfg.per_subgroup_timeout) {
            v.timed_out = true;
            v.verified = false;
        }
        c.verdicts.push_back(std::move(v));
    }
    return c;
}

}  // namespace gwcert

#pragma once

#include "bt_tree.hpp"

#include <complex>
#include <functional>

namespace gwcert {

// point at distance offset from u on the edge (u, v); v == u when offset == 0
struct TreePoint {
    LatticeClass u, v;
    double offset = 0;

    static TreePoint vertex(const LatticeClass& L) { return {L, L, 0.0}; }
    bool is_vertex() const { return offset == 0; }

    std::string label() const
    {
        if (is_vertex()) return u.label();
        return u.label() + "-" + v.label() + "@" + std::to_string(offset);
    }
};

struct ModelPoint {
    std::vector<double> euclid;
    std::vector<TreePoint> trees;
};

struct MinkowskiVector {
    std::vector<std::complex<double>> z;

    MinkowskiVector operator-(const MinkowskiVector& o) const
    {
        MinkowskiVector r = *this;
        for (size_t i = 0; i < z.size(); ++i) r.z[i] -= o.z[i];
        return r;
    }
    MinkowskiVector operator+(const MinkowskiVector& o) const
    {
        MinkowskiVector r = *this;
        for (size_t i = 0; i < z.size(); ++i) r.z[i] += o.z[i];
        return r;
    }
    MinkowskiVector operator*(double s) const
    {
        MinkowskiVector r = *this;
        for (auto& c : r.z) c *= s;
        return r;
    }
    double norm() const
    {
        double s = 0;
        for (auto& c : z) s += std::norm(c);
        return std::sqrt(s);
    }
};

// (x, y) in Q(w) ⋊ O_w^x together with alpha_w(y)
struct AffineElement {
    FieldElement x, y;
    std::vector<Rational> alpha;
};

namespace detail {

// distance from p = (A, B, s) to a vertex X, given d(A, X) and d(B, X)
inline double edge_point_to_vertex(int dAX, int dBX, double s) { return dBX < dAX ? dAX - s : dAX + s; }

// tree distance between points on edges (A, B, s) and (C, D, s') from the four vertex distances
inline double edge_points_distance(int dAC, int dAD, int dBC, int dBD, double s, double sp)
{
    if (s == 0 && sp == 0) return dAC;
    if (dAC == 0 && dBD == 0) return std::abs(s - sp);
    if (dAD == 0 && dBC == 0) return std::abs(s - (1 - sp));
    if (sp == 0) return edge_point_to_vertex(dAC, dBC, s);
    double toC = edge_point_to_vertex(dAC, dBC, s);
    double toD = edge_point_to_vertex(dAD, dBD, s);
    if (s == 0) {
        toC = dAC;
        toD = dAD;
    }
    // p on the edge CD but not at its ends is handled above; otherwise enter through C or D
    return std::min(toC + sp, toD + 1 - sp);
}

}  // namespace detail

// vertex chain W_0..W_m; the geodesic runs from arclength start to arclength end along it
struct TreeChain {
    std::vector<LatticeClass> W;
    double start = 0, end = 0;

    TreePoint at(double mu) const
    {
        int m = static_cast<int>(W.size()) - 1;
        if (mu <= 0) return TreePoint::vertex(W[0]);
        if (mu >= m) return TreePoint::vertex(W[m]);
        int i = static_cast<int>(std::floor(mu));
        double s = mu - i;
        if (s < 1e-12) return TreePoint::vertex(W[i]);
        if (s > 1 - 1e-12) return TreePoint::vertex(W[i + 1]);
        return {W[i], W[i + 1], s};
    }
    double length() const { return end - start; }
};

class ModelSpace {
public:
    ModelSpace() = default;
    explicit ModelSpace(OwRing W) : W_(std::move(W))
    {
        for (auto& P : W_.mw()) trees_.emplace_back(P);
        const auto& K = W_.field();
        classes_ = K.embedding_classes();
        for (auto& e : W_.units().fundamental_units) unit_abs_.push_back(abs_all(e));
        for (size_t i = 0; i < W_.mw().size(); ++i) {
            yp_abs_.push_back(abs_all(W_.y_p(i)));
            yp_val_.push_back(W_.mw()[i].valuation(W_.y_p(i)));
        }
        alpha_w_ = W_.alpha_w(W_.w()).free;
    }

    const OwRing& ring() const { return W_; }
    int nw() const { return W_.nw(); }
    size_t tree_count() const { return trees_.size(); }
    const BTTree& tree(size_t i) const { return trees_[i]; }
    const std::vector<int>& embedding_classes() const { return classes_; }

    ModelPoint base_point() const
    {
        ModelPoint p;
        p.euclid.assign(nw(), 0.0);
        for (auto& T : trees_) p.trees.push_back(TreePoint::vertex(T.identity()));
        return p;
    }

    // ---- tree factor

    double tree_distance(size_t k, const TreePoint& p, const TreePoint& q) const
    {
        const auto& T = trees_[k];
        return detail::edge_points_distance(T.distance(p.u, q.u), T.distance(p.u, q.v), T.distance(p.v, q.u),
                                            T.distance(p.v, q.v), p.offset, q.offset);
    }

    TreeChain tree_chain(size_t k, const TreePoint& a, const TreePoint& b) const
    {
        const auto& T = trees_[k];
        auto to_b = [&](const LatticeClass& X) {
            if (b.is_vertex()) return static_cast<double>(T.distance(X, b.u));
            return std::min(T.distance(X, b.u) + b.offset, T.distance(X, b.v) + 1 - b.offset);
        };
        TreeChain c;
        // same edge
        if (!a.is_vertex() && !b.is_vertex() &&
            ((a.u == b.u && a.v == b.v) || (a.u == b.v && a.v == b.u))) {
            c.W = {a.u, a.v};
            c.start = a.offset;
            c.end = a.u == b.u ? b.offset : 1 - b.offset;
            return c;
        }
        if (a.is_vertex()) {
            c.W = {a.u};
            c.start = 0;
        } else if (to_b(a.v) < to_b(a.u)) {
            c.W = {a.u, a.v};
            c.start = a.offset;
        } else {
            c.W = {a.v, a.u};
            c.start = 1 - a.offset;
        }
        // vertex of b's edge nearest to a
        LatticeClass entry = b.u;
        double rest = 0;
        if (!b.is_vertex()) {
            double via_u = T.distance(c.W.back(), b.u) + b.offset;
            double via_v = T.distance(c.W.back(), b.v) + 1 - b.offset;
            if (via_v < via_u) {
                entry = b.v;
                rest = 1 - b.offset;
            } else {
                rest = b.offset;
            }
        }
        auto mid = T.path(c.W.back(), entry);
        for (size_t i = 1; i < mid.size(); ++i) c.W.push_back(mid[i]);
        c.end = static_cast<double>(c.W.size() - 1);
        if (!b.is_vertex()) {
            c.W.push_back(entry == b.u ? b.v : b.u);
            c.end += rest;
        }
        return c;
    }

    // ---- X_w

    void check_shape(const ModelPoint& a) const
    {
        if (static_cast<int>(a.euclid.size()) != nw() || a.trees.size() != trees_.size())
            throw Error(ErrorKind::ShapeMismatch, "model point has the wrong number of factors");
    }

    std::vector<double> factor_distances(const ModelPoint& a, const ModelPoint& b) const
    {
        check_shape(a);
        check_shape(b);
        double e = 0;
        for (int i = 0; i < nw(); ++i) e += (a.euclid[i] - b.euclid[i]) * (a.euclid[i] - b.euclid[i]);
        std::vector<double> out{std::sqrt(e)};
        for (size_t k = 0; k < trees_.size(); ++k) out.push_back(tree_distance(k, a.trees[k], b.trees[k]));
        return out;
    }

    double distance(const ModelPoint& a, const ModelPoint& b) const
    {
        double s = 0;
        for (double d : factor_distances(a, b)) s += d * d;
        return std::sqrt(s);
    }

    // geodesic from a to b, evaluated at arclength t in [0, d(a, b)]
    struct Geodesic {
        ModelPoint a, b;
        std::vector<double> factor;  // factor distances, index 0 Euclidean
        std::vector<TreeChain> chains;
        double length = 0;
    };

    Geodesic geodesic(const ModelPoint& a, const ModelPoint& b) const
    {
        Geodesic g{a, b, factor_distances(a, b), {}, 0};
        double s = 0;
        for (double d : g.factor) s += d * d;
        g.length = std::sqrt(s);
        for (size_t k = 0; k < trees_.size(); ++k) g.chains.push_back(tree_chain(k, a.trees[k], b.trees[k]));
        return g;
    }

    ModelPoint eval(const Geodesic& g, double t) const
    {
        if (g.length == 0 || t <= 0) return g.a;
        if (t >= g.length) return g.b;
        double lam = t / g.length;
        ModelPoint p;
        for (int i = 0; i < nw(); ++i) p.euclid.push_back(g.a.euclid[i] + lam * (g.b.euclid[i] - g.a.euclid[i]));
        for (size_t k = 0; k < trees_.size(); ++k) {
            const auto& c = g.chains[k];
            p.trees.push_back(c.at(c.start + lam * c.length()));
        }
        return p;
    }

    ModelPoint geodesic_eval(const ModelPoint& a, const ModelPoint& b, double t) const { return eval(geodesic(a, b), t); }

    // ---- action of Q(w) ⋊ O_w^x

    AffineElement element(const FieldElement& x, const FieldElement& y) const
    {
        if (!W_.is_unit(y)) throw Error(ErrorKind::NotInActingGroup, y.str() + " is not a unit of O_w");
        return {x, y, W_.alpha_w(y).free};
    }

    // (x, z) in G_w
    AffineElement from_gw(const FieldElement& x, long long z) const
    {
        std::vector<Rational> a;
        for (auto& r : alpha_w_) a.push_back(r * Rational(z));
        return {x, W_.w().pow(z), a};
    }

    AffineElement identity_element() const
    {
        const auto& K = W_.field();
        return {K.zero(), K.one(), std::vector<Rational>(nw(), Rational(0))};
    }

    static AffineElement compose(const AffineElement& g, const AffineElement& h)
    {
        AffineElement r{g.x + g.y * h.x, g.y * h.y, g.alpha};
        for (size_t i = 0; i < r.alpha.size(); ++i) r.alpha[i] += h.alpha[i];
        return r;
    }

    static AffineElement inverse(const AffineElement& g)
    {
        FieldElement yi = g.y.inverse();
        AffineElement r{-(g.x * yi), yi, g.alpha};
        for (auto& a : r.alpha) a = -a;
        return r;
    }

    static bool is_identity(const AffineElement& g) { return g.x.is_zero() && g.y.is_one(); }

    ModelPoint act(const AffineElement& g, const ModelPoint& p) const
    {
        check_shape(p);
        ModelPoint q;
        for (int i = 0; i < nw(); ++i) q.euclid.push_back(p.euclid[i] + g.alpha[i].convert_to<double>());
        for (size_t k = 0; k < trees_.size(); ++k) {
            const auto& tp = p.trees[k];
            TreePoint r{trees_[k].act(g.x, g.y, tp.u), LatticeClass{}, tp.offset};
            r.v = tp.is_vertex() ? r.u : trees_[k].act(g.x, g.y, tp.v);
            q.trees.push_back(r);
        }
        return q;
    }

    MinkowskiVector act(const AffineElement& g, const MinkowskiVector& z) const
    {
        MinkowskiVector r = z;
        int n = W_.field().degree();
        for (int i = 0; i < n; ++i) r.z[i] = g.y.embed_d(i) * z.z[i] + g.x.embed_d(i);
        return r;
    }

    // ---- retraction and strong homotopy action

    ModelPoint retraction(const ModelPoint& x, double t, double R, const ModelPoint& base) const
    {
        auto g = geodesic(x, base);
        double s = (g.length - R) * (1 - t);
        if (s <= 0) return x;
        return eval(g, s);
    }

    // word = g_j, t_j, ..., t_1, g_0 (times.size() == gs.size() - 1)
    ModelPoint sha_omega(const std::vector<AffineElement>& gs, const std::vector<double>& ts, const ModelPoint& x,
                         double R, const ModelPoint& base) const
    {
        if (gs.empty() || ts.size() + 1 != gs.size()) throw Error(ErrorKind::ShapeMismatch, "malformed word");
        size_t j = gs.size() - 1;
        ModelPoint y = act(gs[j], x);
        for (size_t k = j; k-- > 0;) y = act(gs[k], retraction(y, ts[k], R, base));
        return y;
    }

    // gs[0] is the outermost element g_j; gs.back() is g_0
    ModelPoint sha_eval(const std::vector<AffineElement>& gs, const std::vector<double>& ts, const ModelPoint& x,
                        double R, const ModelPoint& base) const
    {
        return retraction(sha_omega(gs, ts, x, R, base), 0.0, R, base);
    }

    // ---- Minkowski space

    MinkowskiVector minkowski_embed(const FieldElement& x) const { return minkowski_embed_field(x); }

    static MinkowskiVector minkowski_embed_field(const FieldElement& x)
    {
        MinkowskiVector v;
        for (int i = 0; i < x.field().degree(); ++i) v.z.push_back(x.embed_d(i));
        return v;
    }

    // orthonormal real coordinates: real places, then sqrt2 (Re, Im) per complex pair
    std::vector<double> real_coordinates(const MinkowskiVector& v) const
    {
        const auto& emb = W_.field().embeddings();
        std::vector<double> out;
        for (int i : classes_) {
            if (emb[i].is_real)
                out.push_back(v.z[i].real());
            else {
                out.push_back(std::sqrt(2.0) * v.z[i].real());
                out.push_back(std::sqrt(2.0) * v.z[i].imag());
            }
        }
        return out;
    }

    // Z-basis of P^k embedded in Q(w)_R; k = 0 gives O
    std::vector<MinkowskiVector> ideal_lattice_basis(const PrimeIdeal* P = nullptr, int k = 0) const
    {
        const auto& O = W_.order();
        int n = O.degree();
        IntMatrix h(n, std::vector<Integer>(n, Integer(0)));
        for (int i = 0; i < n; ++i) h[i][i] = 1;
        if (P && k > 0) {
            IntMatrix gens;
            auto ac = O.integral_coords(P->alpha);
            auto ap = O.integral_coords(O.field().one());
            for (int i = 0; i <= k; ++i) {
                Integer qp = mp::pow(Integer(P->p), k - i);
                for (int j = 0; j < n; ++j) {
                    std::vector<Integer> ej(n, Integer(0));
                    ej[j] = 1;
                    auto v = O.mul_coords(ap, ej);
                    for (auto& x : v) x *= qp;
                    gens.push_back(v);
                }
                ap = O.mul_coords(ap, ac);
            }
            h = hnf(gens, n);
        }
        std::vector<MinkowskiVector> out;
        for (auto& row : h) out.push_back(minkowski_embed(O.from_coords(row)));
        return out;
    }

    // ---- warp

    double busemann(size_t k, const TreePoint& p) const
    {
        double fu = trees_[k].busemann(p.u);
        if (p.is_vertex()) return fu;
        double fv = trees_[k].busemann(p.v);
        return (1 - p.offset) * fu + p.offset * fv;
    }

    // f^[tau] at a point; cls indexes embedding_classes()
    double warp_factor(size_t cls, const ModelPoint& p) const
    {
        check_shape(p);
        int tau = classes_.at(cls);
        double lg = 0;
        for (int i = 0; i < nw(); ++i) lg -= p.euclid[i] * std::log(unit_abs_[i][tau]);
        for (size_t k = 0; k < trees_.size(); ++k)
            lg += busemann(k, p.trees[k]) / yp_val_[k] * std::log(yp_abs_[k][tau]);
        return std::exp(lg);
    }

    // relative residual of prod |tau(e_i)|^alpha_i * prod |tau(y_P)|^(v_P(y)/v_P(y_P)) = |tau(y)|
    double warp_identity_residual(const FieldElement& y, int tau) const
    {
        auto a = W_.alpha_w(y);
        double lg = 0;
        for (int i = 0; i < nw(); ++i) lg += a.free[i].convert_to<double>() * std::log(unit_abs_[i][tau]);
        for (size_t k = 0; k < trees_.size(); ++k)
            lg += static_cast<double>(W_.mw()[k].valuation(y)) / yp_val_[k] * std::log(yp_abs_[k][tau]);
        double lhs = std::exp(lg);
        double rhs = y.abs_embed(tau);
        return std::abs(lhs - rhs) / rhs;
    }

    // ---- warped path length

    struct YPoint {
        ModelPoint x;
        MinkowskiVector z;
    };

    struct PathLength {
        double length = 0;
        size_t partition_points = 0;
    };

    // block of z belonging to the class cls
    double class_norm(size_t cls, const MinkowskiVector& v) const
    {
        int tau = classes_.at(cls);
        const auto& emb = W_.field().embeddings();
        if (emb[tau].is_real) return std::abs(v.z[tau]);
        return std::sqrt(2.0) * std::abs(v.z[tau]);
    }

    // polygonal path through the nodes, node i at time i; partition times in [0, nodes-1]
    std::vector<YPoint> sample_path(const std::vector<YPoint>& nodes, const std::vector<double>& times) const
    {
        std::vector<Geodesic> segs;
        for (size_t i = 0; i + 1 < nodes.size(); ++i) segs.push_back(geodesic(nodes[i].x, nodes[i + 1].x));
        std::vector<YPoint> out;
        for (double t : times) {
            size_t i = std::min(static_cast<size_t>(std::floor(t)), nodes.size() > 1 ? nodes.size() - 2 : 0);
            if (nodes.size() == 1) {
                out.push_back(nodes[0]);
                continue;
            }
            double lam = t - static_cast<double>(i);
            YPoint y{eval(segs[i], lam * segs[i].length), nodes[i].z * (1 - lam) + nodes[i + 1].z * lam};
            out.push_back(std::move(y));
        }
        return out;
    }

    static std::vector<double> uniform_partition(size_t nodes, int per_segment)
    {
        std::vector<double> t;
        for (size_t i = 0; i + 1 < nodes; ++i)
            for (int k = 0; k < per_segment; ++k) t.push_back(static_cast<double>(i) + static_cast<double>(k) / per_segment);
        t.push_back(nodes > 0 ? static_cast<double>(nodes - 1) : 0.0);
        return t;
    }

    // minimum of the partition sums over all coarsenings of the given partition
    PathLength warped_path_length(size_t cls, const std::vector<YPoint>& nodes, const std::vector<double>& times) const
    {
        auto pts = sample_path(nodes, times);
        size_t m = pts.size();
        std::vector<double> f(m);
        for (size_t i = 0; i < m; ++i) f[i] = warp_factor(cls, pts[i].x);
        std::vector<double> best(m, std::numeric_limits<double>::infinity());
        if (m == 0) return {0, 0};
        best[0] = 0;
        for (size_t j = 1; j < m; ++j)
            for (size_t i = 0; i < j; ++i) {
                double dx = distance(pts[i].x, pts[j].x);
                double dz = f[i] * class_norm(cls, pts[j].z - pts[i].z);
                best[j] = std::min(best[j], best[i] + std::sqrt(dx * dx + dz * dz));
            }
        return {best[m - 1], m};
    }

private:
    std::vector<double> abs_all(const FieldElement& e) const
    {
        std::vector<double> v;
        for (int i = 0; i < e.field().degree(); ++i) v.push_back(e.abs_embed(i));
        return v;
    }

    OwRing W_;
    std::vector<BTTree> trees_;
    std::vector<int> classes_;
    std::vector<std::vector<double>> unit_abs_, yp_abs_;
    std::vector<int> yp_val_;
    std::vector<Rational> alpha_w_;
};

// generalized geodesic: t -> geodesic from a to b at arclength clamp(t + shift, 0, L)
struct GeneralizedGeodesic {
    ModelPoint a, b;
    Rational shift = 0;
    double length = 0;

    double c_minus() const { return -shift.convert_to<double>(); }
    double c_plus() const { return length - shift.convert_to<double>(); }
};

inline GeneralizedGeodesic make_generalized_geodesic(const ModelSpace& X, const ModelPoint& a, const ModelPoint& b,
                                                     const Rational& c_minus = 0)
{
    return {a, b, -c_minus, X.distance(a, b)};
}

inline GeneralizedGeodesic constant_geodesic(const ModelPoint& p) { return {p, p, 0, 0.0}; }

inline GeneralizedGeodesic fs_flow(const GeneralizedGeodesic& c, const Rational& tau)
{
    GeneralizedGeodesic r = c;
    r.shift += tau;
    return r;
}

inline ModelPoint fs_eval(const ModelSpace& X, const GeneralizedGeodesic& c, double t)
{
    return X.geodesic_eval(c.a, c.b, t + c.shift.convert_to<double>());
}

struct FsQuadrature {
    double step = 1e-3;
    double tail = 1e-8;
};

namespace detail {

// samples the factor distance d_X(c(t), d(t)) from precomputed chains
class PairDistance {
public:
    PairDistance(const ModelSpace& X, const GeneralizedGeodesic& c, const GeneralizedGeodesic& d)
        : X_(X), c_(c), d_(d), gc_(X.geodesic(c.a, c.b)), gd_(X.geodesic(d.a, d.b))
    {
        for (size_t k = 0; k < X.tree_count(); ++k) {
            const auto& A = gc_.chains[k].W;
            const auto& B = gd_.chains[k].W;
            std::vector<std::vector<int>> tab(A.size(), std::vector<int>(B.size()));
            for (size_t i = 0; i < A.size(); ++i)
                for (size_t j = 0; j < B.size(); ++j) tab[i][j] = X.tree(k).distance(A[i], B[j]);
            tables_.push_back(std::move(tab));
        }
    }

    double operator()(double t) const
    {
        double sc = param(gc_, t + c_.shift.convert_to<double>());
        double sd = param(gd_, t + d_.shift.convert_to<double>());
        double e = 0;
        for (int i = 0; i < X_.nw(); ++i) {
            double x = gc_.a.euclid[i] + sc * (gc_.b.euclid[i] - gc_.a.euclid[i]);
            double y = gd_.a.euclid[i] + sd * (gd_.b.euclid[i] - gd_.a.euclid[i]);
            e += (x - y) * (x - y);
        }
        for (size_t k = 0; k < X_.tree_count(); ++k) {
            const auto& cc = gc_.chains[k];
            const auto& cd = gd_.chains[k];
            auto [i, s] = split(cc, cc.start + sc * cc.length());
            auto [j, sp] = split(cd, cd.start + sd * cd.length());
            const auto& tab = tables_[k];
            size_t i1 = std::min(i + 1, cc.W.size() - 1), j1 = std::min(j + 1, cd.W.size() - 1);
            double dt = edge_points_distance(tab[i][j], tab[i][j1], tab[i1][j], tab[i1][j1], s, sp);
            e += dt * dt;
        }
        return std::sqrt(e);
    }

private:
    // fraction of the geodesic reached at arclength t
    static double param(const ModelSpace::Geodesic& g, double t)
    {
        if (g.length == 0) return 0;
        return std::clamp(t, 0.0, g.length) / g.length;
    }

    static std::pair<size_t, double> split(const TreeChain& c, double mu)
    {
        size_t m = c.W.size() - 1;
        if (mu <= 0) return {0, 0.0};
        if (mu >= static_cast<double>(m)) return {m, 0.0};
        size_t i = static_cast<size_t>(std::floor(mu));
        return {i, mu - static_cast<double>(i)};
    }

    const ModelSpace& X_;
    const GeneralizedGeodesic& c_;
    const GeneralizedGeodesic& d_;
    ModelSpace::Geodesic gc_, gd_;
    std::vector<std::vector<std::vector<int>>> tables_;
};

}  // namespace detail

// composite Simpson rule for the integral of d_X(c(t), d(t)) / (2 e^|t|) over [-T, T]
inline double fs_distance(const ModelSpace& X, const GeneralizedGeodesic& c, const GeneralizedGeodesic& d,
                          FsQuadrature q = {})
{
    detail::PairDistance dist(X, c, d);
    double d0 = dist(0.0);
    // tail: integral over |t| > T of (d0 + 2|t|) e^-|t| = (d0 + 2T + 2) e^-T
    double T = 1;
    while ((d0 + 2 * T + 2) * std::exp(-T) > q.tail) T += 1;
    // even node count keeps t = 0 on the grid
    long long n = 2 * static_cast<long long>(std::ceil(T / q.step));
    double h = 2 * T / static_cast<double>(n);
    double sum = 0;
    for (long long i = 0; i <= n; ++i) {
        double t = -T + h * static_cast<double>(i);
        double v = dist(t) * std::exp(-std::abs(t)) / 2;
        sum += (i == 0 || i == n) ? v : (i % 2 ? 4 * v : 2 * v);
    }
    return sum * h / 3;
}

}  // namespace gwcert

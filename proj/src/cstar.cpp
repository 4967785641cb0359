#include "gb/cstar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gb {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string elem_str(const Elem& e) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
    os << ")";
    return os.str();
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
    return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

// Nullspace basis via SVD with a relative threshold.
CxMat nullspace(const CxMat& m, double tol) {
    if (m.cols() == 0) return CxMat(0, 0);
    Eigen::JacobiSVD<CxMat> svd(m, Eigen::ComputeFullV);
    double scale = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    double thresh = std::max(tol, scale * 1e-12);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > thresh) ++rank;
    return svd.matrixV().rightCols(m.cols() - rank);
}

int numeric_rank(const CxMat& m, double tol) {
    Eigen::JacobiSVD<CxMat> svd(m);
    double scale = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    double thresh = std::max(tol, scale * 1e-12);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > thresh) ++rank;
    return rank;
}

CxMat unvec(const CxVec& v, int rows, int cols) {
    return Eigen::Map<const CxMat>(v.data(), rows, cols);
}

CxVec vec(const CxMat& m) { return Eigen::Map<const CxVec>(m.data(), m.size()); }

int64_t phase_order_for(const FiniteAbelianGroup& g) {
    return std::lcm<int64_t>(std::max<int64_t>(g.exponent(), 1), 4);
}

}  // namespace

Complex unit_phase(const Frac& f) {
    return std::polar(1.0, 2.0 * kPi * static_cast<double>(f.num) / static_cast<double>(f.den));
}

std::optional<int64_t> snap_root_of_unity(Complex z, int64_t order, double tol) {
    if (order < 1) return std::nullopt;
    if (std::abs(std::abs(z) - 1.0) > std::max(tol, 1e-7)) return std::nullopt;
    double arg = std::arg(z);
    if (arg < 0) arg += 2.0 * kPi;
    int64_t k = std::llround(arg * static_cast<double>(order) / (2.0 * kPi)) % order;
    Complex grid = std::polar(1.0, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(order));
    if (std::abs(z - grid) > std::max(10 * tol, 1e-6)) return std::nullopt;
    return k;
}

CxMat FiberAlgebra::basis_matrix(int b) const {
    CxMat m = CxMat::Zero(n, n);
    if (kind == Kind::Matrix) m(b / n, b % n) = 1.0;
    else m(b, b) = 1.0;
    return m;
}

CxVec FiberAlgebra::coords(const CxMat& m, double tol) const {
    if (m.rows() != n || m.cols() != n) throw InvalidInput("fiber element has wrong shape");
    CxVec v(dim());
    if (kind == Kind::Matrix) {
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) v(r * n + c) = m(r, c);
    } else {
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (r != c && std::abs(m(r, c)) > tol)
                    throw InvalidInput("FUNCTIONS fiber element is not diagonal");
        for (int r = 0; r < n; ++r) v(r) = m(r, r);
    }
    return v;
}

CxMat FiberAlgebra::matrix_of(const CxVec& v) const {
    if (v.size() != dim()) throw InvalidInput("fiber coordinates have wrong length");
    CxMat m = CxMat::Zero(n, n);
    if (kind == Kind::Matrix) {
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) m(r, c) = v(r * n + c);
    } else {
        for (int r = 0; r < n; ++r) m(r, r) = v(r);
    }
    return m;
}

CxMat ActionDatum::apply(int64_t s_idx, const CxMat& a) const {
    const auto& uni = unitaries.at(s_idx);
    if (uni) return (*uni) * a * uni->adjoint();
    return fiber.matrix_of(fiber_maps.at(s_idx) * fiber.coords(a));
}

void ActionDatum::validate(double tol) const {
    int64_t n_el = group.order();
    if (static_cast<int64_t>(fiber_maps.size()) != n_el || static_cast<int64_t>(unitaries.size()) != n_el)
        throw InvalidInput("action is missing automorphisms");
    const int d = fiber.dim();
    for (const CxMat& m : fiber_maps)
        if (m.rows() != d || m.cols() != d) throw InvalidInput("automorphism map has wrong shape");
    if (max_abs(fiber_maps[group.index_of(group.zero())] - CxMat::Identity(d, d)) > tol)
        throw InvalidInput("alpha_0 is not the identity");
    for (const Elem& s : group.elements())
        for (const Elem& t : group.elements()) {
            int64_t si = group.index_of(s), ti = group.index_of(t), sti = group.index_of(group.add(s, t));
            if (max_abs(fiber_maps[sti] - fiber_maps[si] * fiber_maps[ti]) > tol)
                throw InvalidInput("alpha_{s+t} != alpha_s . alpha_t at " + elem_str(s) + "," + elem_str(t));
        }
    // Each automorphism preserves products and adjoints.
    for (int64_t s = 0; s < n_el; ++s) {
        for (int a = 0; a < d; ++a) {
            CxMat ma = fiber.basis_matrix(a);
            CxMat img_a = apply(s, ma);
            if (max_abs(apply(s, CxMat(ma.adjoint())) - img_a.adjoint()) > tol)
                throw InvalidInput("automorphism does not preserve adjoints");
            for (int b = 0; b < d; ++b) {
                CxMat mb = fiber.basis_matrix(b);
                if (max_abs(apply(s, CxMat(ma * mb)) - img_a * apply(s, mb)) > tol)
                    throw InvalidInput("automorphism does not preserve products");
            }
        }
    }
}

namespace {

CxMat conj_map(const FiberAlgebra& fiber, const CxMat& v) {
    const int d = fiber.dim();
    CxMat m(d, d);
    for (int b = 0; b < d; ++b) m.col(b) = fiber.coords(v * fiber.basis_matrix(b) * v.adjoint());
    return m;
}

}  // namespace

ActionDatum trivial_action(const FiniteAbelianGroup& g, const FiberAlgebra& fiber) {
    ActionDatum a;
    a.group = g;
    a.fiber = fiber;
    int64_t n_el = g.order();
    a.fiber_maps.assign(n_el, CxMat::Identity(fiber.dim(), fiber.dim()));
    a.unitaries.assign(n_el, std::nullopt);
    return a;
}

ActionDatum action_from_unitaries(const FiniteAbelianGroup& g, const std::vector<CxMat>& v) {
    if (static_cast<int64_t>(v.size()) != g.order()) throw InvalidInput("need one unitary per group element");
    ActionDatum a;
    a.group = g;
    a.fiber = FiberAlgebra::matrix(v.empty() ? 1 : static_cast<int>(v[0].rows()));
    for (const CxMat& m : v) {
        if (max_abs(CxMat(m * m.adjoint() - CxMat::Identity(m.rows(), m.cols()))) > 1e-9)
            throw InvalidInput("conjugating matrix is not unitary");
        a.fiber_maps.push_back(conj_map(a.fiber, m));
        a.unitaries.push_back(m);
    }
    a.validate();
    return a;
}

ActionDatum action_from_permutations(const FiniteAbelianGroup& g, int points,
                                     const std::vector<std::vector<int>>& perms) {
    if (static_cast<int64_t>(perms.size()) != g.order())
        throw InvalidInput("need one permutation per group element");
    ActionDatum a;
    a.group = g;
    a.fiber = FiberAlgebra::functions(points);
    for (const auto& p : perms) {
        if (static_cast<int>(p.size()) != points) throw InvalidInput("permutation has wrong length");
        CxMat m = CxMat::Zero(points, points);
        std::vector<bool> hit(points, false);
        for (int x = 0; x < points; ++x) {
            if (p[x] < 0 || p[x] >= points || hit[p[x]]) throw InvalidInput("not a permutation");
            hit[p[x]] = true;
            // lt_s(1_x) = 1_{s.x}
            m(p[x], x) = 1.0;
        }
        a.fiber_maps.push_back(m);
        a.unitaries.push_back(std::nullopt);
    }
    a.permutations = perms;
    a.validate();
    return a;
}

ActionDatum action_from_linear_maps(const FiniteAbelianGroup& g, const FiberAlgebra& fiber,
                                    const std::vector<CxMat>& maps) {
    if (static_cast<int64_t>(maps.size()) != g.order()) throw InvalidInput("need one map per group element");
    ActionDatum a;
    a.group = g;
    a.fiber = fiber;
    a.fiber_maps = maps;
    a.unitaries.assign(maps.size(), std::nullopt);
    a.validate();
    return a;
}

void UnitaryActionDatum::validate(double tol) const {
    if (static_cast<int64_t>(u.size()) != group.order()) throw InvalidInput("need one unitary per group element");
    for (const CxMat& m : u) {
        if (m.rows() != n || m.cols() != n) throw InvalidInput("unitary has wrong shape");
        if (max_abs(CxMat(m * m.adjoint() - CxMat::Identity(n, n))) > tol)
            throw InvalidInput("family member is not unitary");
    }
    if (max_abs(CxMat(u[group.index_of(group.zero())] - CxMat::Identity(n, n))) > tol)
        throw InvalidInput("u_0 is not the identity");
    for (const Elem& s : group.elements())
        for (const Elem& t : group.elements()) {
            int64_t si = group.index_of(s), ti = group.index_of(t), sti = group.index_of(group.add(s, t));
            if (max_abs(CxMat(u[sti] - u[si] * u[ti])) > tol)
                throw InvalidInput("u_{s+t} != u_s u_t at " + elem_str(s) + "," + elem_str(t));
        }
}

ActionDatum UnitaryActionDatum::induced_action() const {
    std::vector<CxMat> v = u;
    return action_from_unitaries(group, v);
}

CrossedProductAlgebra::CrossedProductAlgebra(ActionDatum action, double tol)
    : action_(std::move(action)), group_order_(action_.group.order()) {
    action_.validate(tol);
}

CxVec CrossedProductAlgebra::unit() const {
    CxVec e = zero();
    int64_t z = action_.group.index_of(action_.group.zero());
    CxVec fe = action_.fiber.coords(CxMat::Identity(action_.fiber.n, action_.fiber.n));
    e.segment(z * action_.fiber.dim(), action_.fiber.dim()) = fe;
    return e;
}

CxVec CrossedProductAlgebra::basis(int64_t s_idx, int b_idx) const {
    CxVec e = zero();
    e(s_idx * action_.fiber.dim() + b_idx) = 1.0;
    return e;
}

std::vector<CxMat> CrossedProductAlgebra::blocks(const CxVec& x) const {
    if (x.size() != dim()) throw InvalidInput("crossed product coordinates have wrong length");
    std::vector<CxMat> out;
    const int fd = action_.fiber.dim();
    for (int64_t s = 0; s < group_order_; ++s)
        out.push_back(action_.fiber.matrix_of(x.segment(s * fd, fd)));
    return out;
}

CxVec CrossedProductAlgebra::from_blocks(const std::vector<CxMat>& bl) const {
    const int fd = action_.fiber.dim();
    CxVec x = zero();
    for (int64_t s = 0; s < group_order_; ++s) x.segment(s * fd, fd) = action_.fiber.coords(bl.at(s));
    return x;
}

CxVec CrossedProductAlgebra::multiply(const CxVec& x, const CxVec& y) const {
    std::vector<CxMat> xb = blocks(x), yb = blocks(y);
    std::vector<CxMat> out(group_order_, CxMat::Zero(action_.fiber.n, action_.fiber.n));
    const auto& g = action_.group;
    for (const Elem& s : g.elements()) {
        int64_t si = g.index_of(s);
        if (max_abs(xb[si]) == 0.0) continue;
        for (const Elem& t : g.elements()) {
            int64_t ti = g.index_of(t);
            out[g.index_of(g.add(s, t))] += xb[si] * action_.apply(si, yb[ti]);
        }
    }
    return from_blocks(out);
}

CxVec CrossedProductAlgebra::adjoint(const CxVec& x) const {
    std::vector<CxMat> xb = blocks(x);
    std::vector<CxMat> out(group_order_, CxMat::Zero(action_.fiber.n, action_.fiber.n));
    const auto& g = action_.group;
    for (const Elem& s : g.elements()) {
        int64_t si = g.index_of(s);
        int64_t mi = g.index_of(g.neg(s));
        out[mi] = action_.apply(mi, xb[si].adjoint());
    }
    return from_blocks(out);
}

CxMat CrossedProductAlgebra::left_mult(const CxVec& x) const {
    CxMat m(dim(), dim());
    const int fd = action_.fiber.dim();
    for (int64_t s = 0; s < group_order_; ++s)
        for (int b = 0; b < fd; ++b) m.col(s * fd + b) = multiply(x, basis(s, b));
    return m;
}

CxMat CrossedProductAlgebra::right_mult(const CxVec& x) const {
    CxMat m(dim(), dim());
    const int fd = action_.fiber.dim();
    for (int64_t s = 0; s < group_order_; ++s)
        for (int b = 0; b < fd; ++b) m.col(s * fd + b) = multiply(basis(s, b), x);
    return m;
}

CxMat Representation::pi(const FiberAlgebra& fiber, const CxMat& a, double tol) const {
    CxVec c = fiber.coords(a, tol);
    CxMat out = CxMat::Zero(carrier, carrier);
    for (int b = 0; b < c.size(); ++b) out += c(b) * pi_basis[b];
    return out;
}

CxMat Representation::integrated(const CrossedProductAlgebra& alg, const CxVec& x) const {
    std::vector<CxMat> bl = alg.blocks(x);
    CxMat out = CxMat::Zero(carrier, carrier);
    for (size_t s = 0; s < bl.size(); ++s) out += pi(alg.fiber(), bl[s]) * u_group[s];
    return out;
}

double Representation::covariance_defect(const ActionDatum& action) const {
    double worst = 0;
    for (int64_t s = 0; s < action.group.order(); ++s)
        for (int b = 0; b < action.fiber.dim(); ++b) {
            CxMat a = action.fiber.basis_matrix(b);
            CxMat lhs = u_group[s] * pi(action.fiber, a);
            CxMat rhs = pi(action.fiber, action.apply(s, a)) * u_group[s];
            worst = std::max(worst, max_abs(CxMat(lhs - rhs)));
        }
    return worst;
}

Representation regular_representation(const CrossedProductAlgebra& alg) {
    const auto& g = alg.group();
    const FiberAlgebra& fiber = alg.fiber();
    const int fd = fiber.dim();
    const int64_t n_el = g.order();
    const int carrier = static_cast<int>(n_el) * fd;

    // Fiber left multiplication as a matrix on fiber coordinates.
    auto fiber_left = [&](const CxMat& a) {
        CxMat m(fd, fd);
        for (int b = 0; b < fd; ++b) m.col(b) = fiber.coords(a * fiber.basis_matrix(b));
        return m;
    };

    Representation rep;
    rep.carrier = carrier;
    for (int b = 0; b < fd; ++b) {
        CxMat pb = CxMat::Zero(carrier, carrier);
        for (int64_t t = 0; t < n_el; ++t) {
            int64_t mt = g.index_of(g.neg(g.element_at(t)));
            CxMat twisted =
                alg.action().apply(mt, fiber.basis_matrix(b));  // alpha_{-t}(E_b)
            pb.block(t * fd, t * fd, fd, fd) = fiber_left(twisted);
        }
        rep.pi_basis.push_back(pb);
    }
    for (int64_t s = 0; s < n_el; ++s) {
        CxMat us = CxMat::Zero(carrier, carrier);
        for (int64_t t = 0; t < n_el; ++t) {
            int64_t src = g.index_of(g.sub(g.element_at(t), g.element_at(s)));
            us.block(t * fd, src * fd, fd, fd) = CxMat::Identity(fd, fd);
        }
        rep.u_group.push_back(us);
    }
    return rep;
}

UnitaryLift is_unitary_action(const ActionDatum& a, double tol) {
    a.validate(tol);
    const auto& g = a.group;
    const int64_t n_el = g.order();
    UnitaryLift out;

    if (a.fiber.kind == FiberAlgebra::Kind::Functions) {
        for (int64_t s = 0; s < n_el; ++s)
            if (max_abs(CxMat(a.fiber_maps[s] - CxMat::Identity(a.fiber.dim(), a.fiber.dim()))) > tol) {
                out.status = UnitaryLift::Status::NotPointwiseInner;
                out.detail = "nontrivial automorphism of a commutative fiber is not inner";
                return out;
            }
        UnitaryActionDatum lift;
        lift.group = g;
        lift.n = a.fiber.n;
        lift.u.assign(n_el, CxMat::Identity(a.fiber.n, a.fiber.n));
        out.status = UnitaryLift::Status::Lifted;
        out.lift = lift;
        return out;
    }

    const int n = a.fiber.n;
    // Conjugating unitaries: stored ones, else solved from the intertwiner
    // system alpha_s(E) V = V E, normalized and phase-canonicalized.
    std::vector<CxMat> v(n_el);
    for (int64_t s = 0; s < n_el; ++s) {
        if (a.unitaries[s]) {
            v[s] = *a.unitaries[s];
            continue;
        }
        const int d = n * n;
        CxMat sys(d * a.fiber.dim(), d);
        for (int b = 0; b < a.fiber.dim(); ++b) {
            CxMat e = a.fiber.basis_matrix(b);
            CxMat ae = a.apply(s, e);
            // alpha_s(E) V - V E = 0 on vec(V), column-major:
            // (I (x) alpha_s(E)) - (E^T (x) I).
            CxMat kron = CxMat::Zero(d, d);
            for (int c = 0; c < n; ++c) kron.block(c * n, c * n, n, n) = ae;
            CxMat kron2 = CxMat::Zero(d, d);
            for (int c = 0; c < n; ++c)
                for (int k = 0; k < n; ++k) kron2.block(c * n, k * n, n, n) = e(k, c) * CxMat::Identity(n, n);
            sys.block(b * d, 0, d, d) = kron - kron2;
        }
        CxMat ns = nullspace(sys, tol);
        if (ns.cols() == 0) {
            out.status = UnitaryLift::Status::NotPointwiseInner;
            out.detail = "no conjugating operator for element index " + std::to_string(s);
            return out;
        }
        CxMat cand = unvec(ns.col(0), n, n);
        CxMat gram = cand * cand.adjoint();
        double scale = std::sqrt(std::abs(gram(0, 0)));
        if (scale < tol || max_abs(CxMat(gram - gram(0, 0) * CxMat::Identity(n, n))) > 1e-6 * gram.cwiseAbs().maxCoeff()) {
            out.status = UnitaryLift::Status::NotPointwiseInner;
            out.detail = "conjugating operator is not a scalar multiple of a unitary";
            return out;
        }
        cand /= scale;
        // Deterministic phase: make the largest-modulus entry (first in
        // row-major order) real positive.
        double best = cand.cwiseAbs().maxCoeff();
        for (int r = 0; r < n && best > 0; ++r) {
            bool done = false;
            for (int c = 0; c < n; ++c)
                if (std::abs(cand(r, c)) > 0.5 * best) {
                    cand *= std::conj(cand(r, c)) / std::abs(cand(r, c));
                    done = true;
                    break;
                }
            if (done) break;
        }
        v[s] = cand;
    }

    // Commutator phases.
    out.phases.assign(n_el, std::vector<Complex>(n_el, Complex(1, 0)));
    bool obstructed = false;
    const double phase_tol = std::max(100 * tol, 1e-7);
    for (int64_t s = 0; s < n_el; ++s)
        for (int64_t t = 0; t < n_el; ++t) {
            Complex c = (v[s] * v[t] * v[s].adjoint() * v[t].adjoint()).trace() / static_cast<double>(n);
            out.phases[s][t] = c;
            if (std::abs(c - Complex(1, 0)) > phase_tol) obstructed = true;
        }
    if (obstructed) {
        out.status = UnitaryLift::Status::Obstructed;
        out.detail = "commutator bicharacter is nontrivial";
        return out;
    }

    // Correct generator phases so the lift is multiplicative: u_r^{d_r} = 1.
    const int rank = g.rank();
    std::vector<CxMat> gen_u(rank);
    for (int r = 0; r < rank; ++r) {
        Elem e = g.zero();
        e[r] = 1;
        CxMat w = v[g.index_of(e)];
        CxMat p = CxMat::Identity(n, n);
        for (int64_t k = 0; k < g.factors()[r]; ++k) p = p * w;
        Complex c = p(0, 0);
        if (max_abs(CxMat(p - c * CxMat::Identity(n, n))) > phase_tol) {
            out.status = UnitaryLift::Status::Obstructed;
            out.detail = "generator power is not scalar";
            return out;
        }
        double arg = std::arg(c);
        if (arg < 0) arg += 2.0 * kPi;
        Complex rho = std::polar(1.0, arg / static_cast<double>(g.factors()[r]));
        gen_u[r] = w / rho;
    }
    UnitaryActionDatum lift;
    lift.group = g;
    lift.n = n;
    lift.u.resize(n_el);
    for (const Elem& s : g.elements()) {
        CxMat m = CxMat::Identity(n, n);
        for (int r = 0; r < rank; ++r)
            for (int64_t k = 0; k < s[r]; ++k) m = m * gen_u[r];
        lift.u[g.index_of(s)] = m;
    }
    lift.validate(phase_tol);
    // The lift still implements alpha.
    for (int64_t s = 0; s < n_el; ++s)
        for (int b = 0; b < a.fiber.dim(); ++b) {
            CxMat e = a.fiber.basis_matrix(b);
            if (max_abs(CxMat(lift.u[s] * e * lift.u[s].adjoint() - a.apply(s, e))) > phase_tol)
                throw NumericalFailure("unitary lift fails to implement the action");
        }
    out.status = UnitaryLift::Status::Lifted;
    out.lift = lift;
    return out;
}

AlgebraOps ops_of(const CrossedProductAlgebra& alg) {
    return AlgebraOps{alg.dim(), [&alg](const CxVec& x, const CxVec& y) { return alg.multiply(x, y); },
                      [&alg](const CxVec& x) { return alg.adjoint(x); }};
}

AlgebraOps matrix_algebra_ops(int n) {
    return AlgebraOps{
        n * n,
        [n](const CxVec& x, const CxVec& y) {
            CxMat a = CxMat::Zero(n, n), b = CxMat::Zero(n, n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    a(r, c) = x(r * n + c);
                    b(r, c) = y(r * n + c);
                }
            CxMat p = a * b;
            CxVec out(n * n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) out(r * n + c) = p(r, c);
            return out;
        },
        [n](const CxVec& x) {
            CxVec out(n * n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) out(r * n + c) = std::conj(x(c * n + r));
            return out;
        }};
}

VerifiedIsomorphism verify_star_isomorphism(const AlgebraOps& a, const AlgebraOps& b, const CxMat& phi,
                                            double tol, int64_t phase_order) {
    if (phi.rows() != b.dim || phi.cols() != a.dim)
        throw InvalidInput("isomorphism candidate has wrong shape");
    VerifiedIsomorphism out;
    out.map = phi;
    out.bijective = (a.dim == b.dim) && numeric_rank(phi, tol) == a.dim;
    out.exact_phase = phase_order > 0;

    auto exact_match = [&](const CxVec& x, const CxVec& y) {
        if (phase_order <= 0) return false;
        for (int i = 0; i < x.size(); ++i) {
            Complex xi = x(i), yi = y(i);
            bool xz = std::abs(xi) <= tol, yz = std::abs(yi) <= tol;
            if (xz != yz) return false;
            if (xz) continue;
            auto kx = snap_root_of_unity(xi, phase_order, tol);
            auto ky = snap_root_of_unity(yi, phase_order, tol);
            if (!kx || !ky || *kx != *ky) return false;
        }
        return true;
    };

    for (int i = 0; i < a.dim; ++i) {
        CxVec ei = CxVec::Zero(a.dim);
        ei(i) = 1.0;
        CxVec si = phi * a.star(ei);
        CxVec bi = b.star(CxVec(phi * ei));
        out.star_defect = std::max(out.star_defect, max_abs(CxVec(si - bi)));
        if (out.exact_phase && !exact_match(si, bi)) out.exact_phase = false;
        for (int j = 0; j < a.dim; ++j) {
            CxVec ej = CxVec::Zero(a.dim);
            ej(j) = 1.0;
            CxVec lhs = phi * a.mult(ei, ej);
            CxVec rhs = b.mult(CxVec(phi * ei), CxVec(phi * ej));
            out.mult_defect = std::max(out.mult_defect, max_abs(CxVec(lhs - rhs)));
            if (out.exact_phase && !exact_match(lhs, rhs)) out.exact_phase = false;
        }
    }
    return out;
}

UnitaryTensorIso unitary_tensor_iso(const UnitaryActionDatum& u, double tol) {
    u.validate(tol);
    CrossedProductAlgebra trivial_side(trivial_action(u.group, FiberAlgebra::matrix(u.n)), tol);
    CrossedProductAlgebra crossed_side(u.induced_action(), tol);

    const int fd = u.n * u.n;
    CxMat phi = CxMat::Zero(crossed_side.dim(), trivial_side.dim());
    for (int64_t s = 0; s < u.group.order(); ++s)
        for (int b = 0; b < fd; ++b) {
            CxMat image = FiberAlgebra::matrix(u.n).basis_matrix(b) * u.u[s].adjoint();
            CxVec col = CxVec::Zero(crossed_side.dim());
            col.segment(s * fd, fd) = FiberAlgebra::matrix(u.n).coords(image);
            phi.col(s * fd + b) = col;
        }
    VerifiedIsomorphism iso =
        verify_star_isomorphism(ops_of(trivial_side), ops_of(crossed_side), phi, tol, phase_order_for(u.group));
    return UnitaryTensorIso{std::move(trivial_side), std::move(crossed_side), iso};
}

void ExteriorEquivalence::validate(const ActionDatum& alpha, const ActionDatum& beta, double tol) const {
    if (!(alpha.group == group) || !(beta.group == group) || !(alpha.fiber == beta.fiber))
        throw InvalidInput("exterior equivalence: mismatched systems");
    if (static_cast<int64_t>(u.size()) != group.order())
        throw InvalidInput("exterior equivalence: need one unitary per group element");
    const int n = alpha.fiber.n;
    for (const CxMat& m : u)
        if (m.rows() != n || m.cols() != n ||
            max_abs(CxMat(m * m.adjoint() - CxMat::Identity(n, n))) > tol)
            throw InvalidInput("exterior equivalence: family member is not unitary");
    for (const Elem& s : group.elements())
        for (const Elem& t : group.elements()) {
            int64_t si = group.index_of(s), ti = group.index_of(t), sti = group.index_of(group.add(s, t));
            if (max_abs(CxMat(u[sti] - u[si] * alpha.apply(si, u[ti]))) > tol)
                throw InvalidInput("exterior equivalence: cocycle condition fails at " + elem_str(s) + "," +
                                   elem_str(t));
        }
    for (int64_t s = 0; s < group.order(); ++s)
        for (int b = 0; b < alpha.fiber.dim(); ++b) {
            CxMat e = alpha.fiber.basis_matrix(b);
            CxMat lhs = beta.apply(s, e);
            CxMat rhs = u[s] * alpha.apply(s, e) * u[s].adjoint();
            if (max_abs(CxMat(lhs - rhs)) > tol)
                throw InvalidInput("exterior equivalence: beta != Ad u . alpha at element index " +
                                   std::to_string(s));
        }
}

EquivalenceIso exterior_equivalence_iso(const ExteriorEquivalence& e, const ActionDatum& alpha,
                                        const ActionDatum& beta, double tol) {
    e.validate(alpha, beta, tol);
    CrossedProductAlgebra alpha_side(alpha, tol);
    CrossedProductAlgebra beta_side(beta, tol);
    const int fd = alpha.fiber.dim();
    CxMat phi = CxMat::Zero(beta_side.dim(), alpha_side.dim());
    for (int64_t s = 0; s < alpha.group.order(); ++s)
        for (int b = 0; b < fd; ++b) {
            CxMat image = alpha.fiber.matrix_of(CxVec::Unit(fd, b)) * e.u[s].adjoint();
            CxVec col = CxVec::Zero(beta_side.dim());
            col.segment(s * fd, fd) = alpha.fiber.coords(image);
            phi.col(s * fd + b) = col;
        }
    VerifiedIsomorphism iso =
        verify_star_isomorphism(ops_of(alpha_side), ops_of(beta_side), phi, tol, phase_order_for(alpha.group));
    return EquivalenceIso{std::move(alpha_side), std::move(beta_side), iso};
}

IntertwinerSpace intertwiner_space(const CrossedProductAlgebra& alg, const Representation& r1,
                                   const Representation& r2, double tol) {
    const int c1 = r1.carrier, c2 = r2.carrier;
    std::vector<CxMat> ops1 = r1.pi_basis, ops2 = r2.pi_basis;
    for (size_t s = 0; s < r1.u_group.size(); ++s) {
        ops1.push_back(r1.u_group[s]);
        ops2.push_back(r2.u_group[s]);
    }
    CxMat sys(static_cast<int>(ops1.size()) * c1 * c2, c1 * c2);
    for (size_t k = 0; k < ops1.size(); ++k) {
        // T A - B T = 0 with A = ops1[k], B = ops2[k]; vec is column-major,
        // T A -> (A^T (x) I) vec T, B T -> (I (x) B) vec T.
        const CxMat& a = ops1[k];
        const CxMat& b = ops2[k];
        CxMat m = CxMat::Zero(c1 * c2, c1 * c2);
        for (int col = 0; col < c1; ++col)
            for (int kk = 0; kk < c1; ++kk) m.block(col * c2, kk * c2, c2, c2) += a(kk, col) * CxMat::Identity(c2, c2);
        for (int col = 0; col < c1; ++col) m.block(col * c2, col * c2, c2, c2) -= b;
        sys.block(static_cast<int>(k) * c1 * c2, 0, c1 * c2, c1 * c2) = m;
    }
    // Scale-aware nullspace threshold.
    CxMat ns = nullspace(sys, std::max(tol, 1e-10));
    IntertwinerSpace out;
    out.dimension = static_cast<int>(ns.cols());
    for (int j = 0; j < ns.cols(); ++j) out.basis.push_back(unvec(ns.col(j), c2, c1));
    (void)alg;
    return out;
}

SpectrumResult spectrum_enumerate(const UnitaryActionDatum& u, double tol) {
    u.validate(tol);
    SpectrumResult out;
    const auto& g = u.group;
    FiniteAbelianGroup dual = dual_group(g);
    CrossedProductAlgebra alg(u.induced_action(), tol);

    for (const Elem& w : dual.elements()) {
        Representation rep;
        rep.carrier = u.n;
        for (int b = 0; b < u.n * u.n; ++b) rep.pi_basis.push_back(FiberAlgebra::matrix(u.n).basis_matrix(b));
        for (const Elem& s : g.elements())
            rep.u_group.push_back(unit_phase(pairing(Character{g, w}, s)) * u.u[g.index_of(s)]);
        if (rep.covariance_defect(alg.action()) > std::max(100 * tol, 1e-7))
            throw NumericalFailure("spectrum representation fails covariance");
        out.characters.push_back(w);
        out.irreps.push_back(std::move(rep));
    }

    out.pairwise_inequivalent = true;
    for (size_t i = 0; i < out.irreps.size(); ++i)
        for (size_t j = 0; j < out.irreps.size(); ++j) {
            int d = intertwiner_space(alg, out.irreps[i], out.irreps[j], tol).dimension;
            if (i == j && d != 1) out.pairwise_inequivalent = false;
            if (i != j && d != 0) out.pairwise_inequivalent = false;
        }
    for (const auto& r : out.irreps) out.sum_dim_squares += static_cast<int64_t>(r.carrier) * r.carrier;
    out.complete = out.sum_dim_squares == alg.dim();
    return out;
}

StoneVonNeumann stone_von_neumann(const FiniteAbelianGroup& h, double tol) {
    const int m = static_cast<int>(h.order());
    std::vector<std::vector<int>> perms;
    for (const Elem& s : h.elements()) {
        std::vector<int> p(m);
        for (const Elem& x : h.elements()) p[h.index_of(x)] = static_cast<int>(h.index_of(h.add(s, x)));
        perms.push_back(p);
    }
    CrossedProductAlgebra alg(action_from_permutations(h, m, perms), tol);

    CxMat phi = CxMat::Zero(m * m, alg.dim());
    for (const Elem& s : h.elements())
        for (const Elem& x : h.elements()) {
            int64_t si = h.index_of(s), xi = h.index_of(x);
            int64_t col = si * m + xi;
            int64_t target_row = xi, target_col = h.index_of(h.sub(x, s));
            phi(target_row * m + target_col, col) = 1.0;
        }
    VerifiedIsomorphism iso =
        verify_star_isomorphism(ops_of(alg), matrix_algebra_ops(m), phi, tol, phase_order_for(h));

    StoneVonNeumann out{std::move(alg), iso, m, 0};
    out.center_dimension = wedderburn_decompose(out.crossed, tol).center_dimension;
    return out;
}

WedderburnDecomposition wedderburn_decompose(const CrossedProductAlgebra& alg, double tol) {
    const int d = alg.dim();
    // Center: [x, e_b] = 0 for every basis element.
    CxMat sys(d * d, d);
    for (int b = 0; b < d; ++b) {
        CxVec eb = CxVec::Zero(d);
        eb(b) = 1.0;
        sys.block(b * d, 0, d, d) = alg.left_mult(eb) - alg.right_mult(eb);
    }
    {
        Eigen::JacobiSVD<CxMat> svd(sys);
        double scale = svd.singularValues()(0);
        for (int i = 0; i < svd.singularValues().size(); ++i) {
            double sv = svd.singularValues()(i);
            if (sv > 1e-9 * scale && sv < 1e-5 * scale)
                throw NumericalFailure("center rank is ambiguous: singular value " + std::to_string(sv) +
                                       " against scale " + std::to_string(scale));
        }
    }
    CxMat z = nullspace(sys, tol);
    const int k = static_cast<int>(z.cols());

    // Hermitize and re-orthonormalize the center basis.
    CxMat herm(d, 2 * k);
    for (int j = 0; j < k; ++j) {
        CxVec zj = z.col(j);
        CxVec st = alg.adjoint(zj);
        herm.col(2 * j) = 0.5 * (zj + st);
        herm.col(2 * j + 1) = Complex(0, -0.5) * (zj - st);
    }
    Eigen::JacobiSVD<CxMat> hsvd(herm, Eigen::ComputeThinU);
    int hrank = 0;
    for (int i = 0; i < hsvd.singularValues().size(); ++i)
        if (hsvd.singularValues()(i) > 1e-9 * hsvd.singularValues()(0)) ++hrank;
    if (hrank != k) throw NumericalFailure("center is not *-closed at the working tolerance");
    CxMat basis = hsvd.matrixU().leftCols(k);

    // Multiplication operators on the center in the orthonormal basis.
    std::vector<CxMat> mult_ops;
    for (int j = 0; j < k; ++j) {
        CxMat mj(k, k);
        for (int i = 0; i < k; ++i) {
            CxVec prod = alg.multiply(basis.col(j), basis.col(i));
            CxVec coeff = basis.adjoint() * prod;
            if (max_abs(CxVec(basis * coeff - prod)) > 1e-6)
                throw NumericalFailure("center is not closed under multiplication");
            mj.col(i) = coeff;
        }
        mult_ops.push_back(mj);
    }

    // Split into joint eigenspaces.
    std::vector<CxMat> spaces = {CxMat::Identity(k, k)};
    for (const CxMat& op : mult_ops) {
        std::vector<CxMat> next;
        for (const CxMat& p : spaces) {
            if (p.cols() == 1) {
                next.push_back(p);
                continue;
            }
            CxMat restricted = p.adjoint() * op * p;
            Eigen::ComplexEigenSolver<CxMat> es(restricted);
            std::vector<int> order(p.cols());
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                Complex ea = es.eigenvalues()(a), eb = es.eigenvalues()(b);
                if (std::abs(ea.real() - eb.real()) > 1e-9) return ea.real() < eb.real();
                return ea.imag() < eb.imag();
            });
            const double gap_lo = 1e-6, gap_hi = 1e-4;
            std::vector<std::vector<int>> clusters{{order[0]}};
            for (size_t i = 1; i < order.size(); ++i) {
                double gap = std::abs(es.eigenvalues()(order[i]) - es.eigenvalues()(clusters.back().back()));
                if (gap < gap_lo) clusters.back().push_back(order[i]);
                else if (gap > gap_hi) clusters.push_back({order[i]});
                else
                    throw NumericalFailure("eigenvalue clustering is ambiguous: gap " + std::to_string(gap));
            }
            for (const auto& cl : clusters) {
                CxMat sub(p.cols(), static_cast<int>(cl.size()));
                for (size_t c = 0; c < cl.size(); ++c) sub.col(static_cast<int>(c)) = es.eigenvectors().col(cl[c]);
                Eigen::HouseholderQR<CxMat> qr(sub);
                CxMat qthin = qr.householderQ() * CxMat::Identity(p.cols(), static_cast<int>(cl.size()));
                next.push_back(p * qthin);
            }
        }
        spaces = std::move(next);
    }
    for (const CxMat& p : spaces)
        if (p.cols() != 1) throw NumericalFailure("center failed to split into one-dimensional eigenspaces");

    WedderburnDecomposition out;
    out.center_dimension = k;
    std::vector<std::pair<std::vector<std::pair<double, double>>, std::pair<int, CxVec>>> sorted;
    for (const CxMat& p : spaces) {
        CxVec w = basis * p.col(0);
        CxVec sq = alg.multiply(w, w);
        Complex lambda = w.dot(sq) / w.squaredNorm();  // least squares scalar: sq = lambda w
        if (std::abs(lambda) < 1e-9) throw NumericalFailure("candidate idempotent squares to zero");
        CxVec e = w / lambda;
        e = 0.5 * (e + alg.adjoint(e));
        if (max_abs(CxVec(alg.multiply(e, e) - e)) > 1e-6)
            throw NumericalFailure("candidate central idempotent fails e^2 = e");
        double tr = alg.left_mult(e).trace().real();
        int dim_i = static_cast<int>(std::llround(std::sqrt(std::max(tr, 0.0))));
        if (std::abs(static_cast<double>(dim_i) * dim_i - tr) > 1e-5)
            throw NumericalFailure("summand dimension is not a perfect square: trace " + std::to_string(tr));
        std::vector<std::pair<double, double>> key;
        key.push_back({static_cast<double>(dim_i), 0.0});
        for (int i = 0; i < e.size(); ++i)
            key.push_back({std::round(e(i).real() * 1e6) / 1e6, std::round(e(i).imag() * 1e6) / 1e6});
        sorted.push_back({key, {dim_i, e}});
    }
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    int64_t total = 0;
    for (auto& [key, val] : sorted) {
        out.dims.push_back(val.first);
        out.idempotents.push_back(val.second);
        total += static_cast<int64_t>(val.first) * val.first;
    }
    if (total != d) throw NumericalFailure("summand dimensions do not sum to the algebra dimension");
    return out;
}

}  // namespace gb

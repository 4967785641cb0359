#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "gb/abelian.hpp"

namespace gb {

using Complex = std::complex<double>;
using CxMat = Eigen::MatrixXcd;
using CxVec = Eigen::VectorXcd;

constexpr double kDefaultTol = 1e-9;

// exp(2 pi i f) for an exact fraction f.
Complex unit_phase(const Frac& f);

// Nearest k with z ~ exp(2 pi i k / order); nullopt when |z| is not ~1 or the
// phase misses the grid by more than tol.
std::optional<int64_t> snap_root_of_unity(Complex z, int64_t order, double tol);

// Fibers A(u): full matrix algebras or commutative function algebras. Both are
// carried as n x n complex matrices (diagonal ones for FUNCTIONS).
struct FiberAlgebra {
    enum class Kind { Matrix, Functions };
    Kind kind = Kind::Matrix;
    int n = 1;  // matrix size, or number of points

    static FiberAlgebra matrix(int n) { return {Kind::Matrix, n}; }
    static FiberAlgebra functions(int points) { return {Kind::Functions, points}; }

    bool operator==(const FiberAlgebra& o) const = default;
    int dim() const { return kind == Kind::Matrix ? n * n : n; }
    CxMat basis_matrix(int b) const;
    CxVec coords(const CxMat& m, double tol = kDefaultTol) const;
    CxMat matrix_of(const CxVec& coords) const;
};

// A fiberwise action of S_u on A(u): one *-automorphism per group element.
struct ActionDatum {
    FiniteAbelianGroup group;
    FiberAlgebra fiber;
    std::vector<CxMat> fiber_maps;                // per element: dim x dim map on coordinates
    std::vector<std::optional<CxMat>> unitaries;  // conjugating unitaries, when known
    std::vector<std::vector<int>> permutations;   // point permutations, FUNCTIONS case

    CxMat apply(int64_t s_idx, const CxMat& a) const;
    void validate(double tol = kDefaultTol) const;
};

ActionDatum trivial_action(const FiniteAbelianGroup& g, const FiberAlgebra& fiber);
// alpha_s = Ad(V_s); the V_s need only implement an action up to phase.
ActionDatum action_from_unitaries(const FiniteAbelianGroup& g, const std::vector<CxMat>& v);
// Translation-style actions on FUNCTIONS: perms[s][x] = s . x.
ActionDatum action_from_permutations(const FiniteAbelianGroup& g, int points,
                                     const std::vector<std::vector<int>>& perms);
// Abstract automorphisms as linear maps on coordinates; validated.
ActionDatum action_from_linear_maps(const FiniteAbelianGroup& g, const FiberAlgebra& fiber,
                                    const std::vector<CxMat>& maps);

// A multiplicative family of unitaries u_s in A(u) (u_{s+t} = u_s u_t).
struct UnitaryActionDatum {
    FiniteAbelianGroup group;
    int n = 1;
    std::vector<CxMat> u;  // per element index

    void validate(double tol = kDefaultTol) const;
    ActionDatum induced_action() const;  // alpha_s = Ad u_s
};

// The finite crossed product A(u) x| S_u with basis delta_s (x) e_b and
//   (delta_s (x) a)(delta_t (x) b) = delta_{s+t} (x) a alpha_s(b)
//   (delta_s (x) a)^*            = delta_{-s}  (x) alpha_{-s}(a^*).
class CrossedProductAlgebra {
public:
    explicit CrossedProductAlgebra(ActionDatum action, double tol = kDefaultTol);

    const ActionDatum& action() const { return action_; }
    const FiniteAbelianGroup& group() const { return action_.group; }
    const FiberAlgebra& fiber() const { return action_.fiber; }
    int dim() const { return static_cast<int>(group_order_) * action_.fiber.dim(); }

    CxVec zero() const { return CxVec::Zero(dim()); }
    CxVec unit() const;
    CxVec basis(int64_t s_idx, int b_idx) const;
    std::vector<CxMat> blocks(const CxVec& x) const;       // per group element, fiber matrices
    CxVec from_blocks(const std::vector<CxMat>& bl) const;

    CxVec multiply(const CxVec& x, const CxVec& y) const;
    CxVec adjoint(const CxVec& x) const;
    CxMat left_mult(const CxVec& x) const;
    CxMat right_mult(const CxVec& x) const;

private:
    ActionDatum action_;
    int64_t group_order_;
};

// A covariant pair (pi, U) with its integrated form.
struct Representation {
    int carrier = 0;
    std::vector<CxMat> pi_basis;  // per fiber basis element
    std::vector<CxMat> u_group;   // per group element

    CxMat pi(const FiberAlgebra& fiber, const CxMat& a, double tol = kDefaultTol) const;
    CxMat integrated(const CrossedProductAlgebra& alg, const CxVec& x) const;
    // U_s pi(a) = pi(alpha_s(a)) U_s for all s and basis a.
    double covariance_defect(const ActionDatum& action) const;
};

// The left regular covariant representation; faithful, carrier dim A * |S|.
Representation regular_representation(const CrossedProductAlgebra& alg);

// Classification of an action as unitary / obstructed / not pointwise inner.
struct UnitaryLift {
    enum class Status { Lifted, Obstructed, NotPointwiseInner };
    Status status = Status::NotPointwiseInner;
    std::optional<UnitaryActionDatum> lift;
    // Commutator phases c(s,t) = tr(V_s V_t V_s^* V_t^*)/n; the alternating
    // bicharacter whose triviality is equivalent to liftability.
    std::vector<std::vector<Complex>> phases;
    std::string detail;
};

UnitaryLift is_unitary_action(const ActionDatum& a, double tol = kDefaultTol);

// Outcome of verifying a linear map as a *-isomorphism by structure constants.
struct VerifiedIsomorphism {
    CxMat map;  // dim x dim on coordinates
    double mult_defect = 0;
    double star_defect = 0;
    bool bijective = false;
    bool exact_phase = false;  // entries compared exactly on the root-of-unity grid

    bool ok(double tol) const { return bijective && mult_defect <= tol && star_defect <= tol; }
};

// A view of a finite *-algebra through its operations.
struct AlgebraOps {
    int dim = 0;
    std::function<CxVec(const CxVec&, const CxVec&)> mult;
    std::function<CxVec(const CxVec&)> star;
};

AlgebraOps ops_of(const CrossedProductAlgebra& alg);
AlgebraOps matrix_algebra_ops(int n);

// Verifies phi : A -> B as a *-isomorphism; phase_order > 0 enables the exact
// root-of-unity comparator on top of the numeric one.
VerifiedIsomorphism verify_star_isomorphism(const AlgebraOps& a, const AlgebraOps& b, const CxMat& phi,
                                            double tol = kDefaultTol, int64_t phase_order = 0);

// Theorem-level maps.
//
// C*(S_u) (x) A(u) -> A(u) x|_alpha S_u with phi(delta_s (x) a) = delta_s (x) a u_s^*,
// for alpha = Ad u.
struct UnitaryTensorIso {
    CrossedProductAlgebra trivial_side;  // trivial action: C*(S) (x) A
    CrossedProductAlgebra crossed_side;  // A x|_{Ad u} S
    VerifiedIsomorphism iso;
};
UnitaryTensorIso unitary_tensor_iso(const UnitaryActionDatum& u, double tol = kDefaultTol);

// Exterior equivalence u between alpha and beta: u_{s+t} = u_s alpha_s(u_t),
// beta_s = Ad u_s . alpha_s; the isomorphism is f |-> f u^*.
struct ExteriorEquivalence {
    FiniteAbelianGroup group;
    std::vector<CxMat> u;  // per element index

    // Throws InvalidInput naming the failing pair when the conditions fail.
    void validate(const ActionDatum& alpha, const ActionDatum& beta, double tol = kDefaultTol) const;
};

struct EquivalenceIso {
    CrossedProductAlgebra alpha_side;
    CrossedProductAlgebra beta_side;
    VerifiedIsomorphism iso;
};
EquivalenceIso exterior_equivalence_iso(const ExteriorEquivalence& e, const ActionDatum& alpha,
                                        const ActionDatum& beta, double tol = kDefaultTol);

// Intertwiners T with T r1(x) = r2(x) T for all x.
struct IntertwinerSpace {
    int dimension = 0;
    std::vector<CxMat> basis;  // carrier2 x carrier1
};
IntertwinerSpace intertwiner_space(const CrossedProductAlgebra& alg, const Representation& r1,
                                   const Representation& r2, double tol = kDefaultTol);

// The spectrum of a unitary crossed product: one irreducible representation
// pi x| (omega . pi(u)) per character omega of S_u.
struct SpectrumResult {
    std::vector<Elem> characters;          // of dual_group(S_u), enumeration order
    std::vector<Representation> irreps;    // same order, carrier n each
    int64_t sum_dim_squares = 0;
    bool complete = false;                 // sum of squares == dim(A x| S)
    bool pairwise_inequivalent = false;
};
SpectrumResult spectrum_enumerate(const UnitaryActionDatum& u, double tol = kDefaultTol);

// FUNCTIONS(H) x|_lt H  ~  MATRIX(|H|) by delta_s (x) 1_x  |->  E_{x, x-s}.
struct StoneVonNeumann {
    CrossedProductAlgebra crossed;  // translation crossed product
    VerifiedIsomorphism iso;        // onto the full matrix algebra
    int matrix_size = 0;
    int center_dimension = 0;
};
StoneVonNeumann stone_von_neumann(const FiniteAbelianGroup& h, double tol = kDefaultTol);

// Wedderburn data of a finite-dimensional *-closed algebra.
struct WedderburnDecomposition {
    std::vector<int> dims;            // simple summand sizes, sorted
    std::vector<CxVec> idempotents;   // matching minimal central idempotents
    int center_dimension = 0;
};
WedderburnDecomposition wedderburn_decompose(const CrossedProductAlgebra& alg, double tol = kDefaultTol);

}  // namespace gb
